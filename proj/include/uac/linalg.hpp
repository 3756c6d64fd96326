#pragma once

#include "uac/rational.hpp"

#include <cstddef>
#include <vector>

namespace uac {

struct Rref {
    std::vector<Vec> rows;     // nonzero rows, pivot entries equal to 1
    std::vector<size_t> pivots;
};

Rref rref(std::vector<Vec> m, size_t ncols);
size_t rank(const std::vector<Vec>& m, size_t ncols);

/// Basis of {x : m x = 0}.
std::vector<Vec> nullspace(const std::vector<Vec>& m, size_t ncols);

/// Canonical basis of span(m): RREF rows made primitive.
std::vector<Vec> canonical_span(const std::vector<Vec>& m, size_t ncols);

/// Canonical representative of x modulo span(basis). Eliminates against a
/// reverse-ordered echelon basis, so trailing coordinates are cleared first.
Vec reduce_mod(const Vec& x, const std::vector<Vec>& basis);

bool same_span(const std::vector<Vec>& a, const std::vector<Vec>& b, size_t ncols);

} // namespace uac
