#pragma once

#include "uac/rational.hpp"

#include <json.hpp>

#include <cstddef>
#include <vector>

namespace uac {

constexpr int kMaxConeDim = 32;

/// {x : x·n >= 0 for n in ineqs, x·e = 0 for e in eqs}
struct ConeH {
    int dim = 0;
    std::vector<Vec> ineqs;
    std::vector<Vec> eqs;
};

/// Conic hull of rays plus the linear span of lineality.
/// rays are primitive and reduced modulo the lineality space; lineality is a
/// canonical (primitive RREF) basis.
struct ConeV {
    int dim = 0;
    std::vector<Vec> rays;
    std::vector<Vec> lineality;

    bool pointed() const { return lineality.empty(); }
    /// rays followed by +l, -l for each lineality vector.
    std::vector<Vec> generators() const;
    size_t generator_count() const { return rays.size() + 2 * lineality.size(); }
};

/// Extreme rays and lineality space of an H-cone by double description.
ConeV dualize(const ConeH& h);

bool contains(const ConeH& h, const Vec& x);
bool contains(const ConeV& v, const Vec& x);

ConeH direct_sum(const std::vector<ConeH>& parts);
ConeV direct_sum(const std::vector<ConeV>& parts);

/// Builds a ConeV from arbitrary generators (removing non-extreme ones).
ConeV cone_from_generators(int dim, const std::vector<Vec>& gens);

/// Facet description of a V-cone: ineqs are the facet normals, eqs a basis
/// of the orthogonal complement of the cone's span.
ConeH to_h(const ConeV& v);

bool equal_cones(const ConeV& u, const ConeV& v);

/// Primitive, lineality-reduced, sorted form of v.
ConeV canonical(ConeV v);

/// Indices of inequalities of h that are not facets of the cone.
std::vector<size_t> redundant_inequalities(const ConeH& h, const ConeV& v);
inline std::vector<size_t> redundant_inequalities(const ConeH& h) { return redundant_inequalities(h, dualize(h)); }

nlohmann::json to_json(const ConeH& h);
nlohmann::json to_json(const ConeV& v);
ConeH cone_h_from_json(const nlohmann::json& j);
ConeV cone_v_from_json(const nlohmann::json& j);

} // namespace uac
