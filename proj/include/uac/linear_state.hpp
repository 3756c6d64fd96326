#pragma once

#include "uac/rational.hpp"
#include "uac/subset.hpp"

#include <json.hpp>

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uac {

using GfRow = std::vector<int>;

int gf_rank(std::vector<GfRow> rows, int q);
/// Reduced row echelon form over GF(q), zero rows removed.
std::vector<GfRow> gf_rref(std::vector<GfRow> rows, int q);

struct ConstraintViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Random variables given by linear forms over GF(q) in k uniform symbols.
/// Each ground system holds a list of rows (empty = trivial variable).
struct LinearState {
    int q = 2;
    int k = 0;
    Ground ground;
    std::vector<std::vector<GfRow>> rows;  // one entry per ground label

    /// Entropy in units of log q: rank of the stacked rows.
    int rank_of(Mask vars) const;
    /// Entropies of all 2^N subsets, indexed by mask.
    std::vector<int> entropy_vector() const;
    bool product_ok() const;
    /// Text in the build_state mini-language.
    std::string describe() const;
};

Rational entropy(const LinearState& s, Mask vars);

/// Parses statements such as "A1=B1=s1; V=s1+s2" or "V=(s1, s2+s3)" (a
/// tuple gives several rows). Coefficients are reduced mod q. Throws
/// std::invalid_argument on syntax errors and ConstraintViolation when the
/// two copies are correlated.
LinearState build_state(int q, std::string_view spec, const Ground& ground);

/// The classical states printed for one of the eight tripartite 1-ancilla
/// representatives, in printed order.
std::vector<LinearState> paper_states(int a, int b);
bool has_paper_states(int a, int b);

struct EnumOptions {
    int max_ancilla_rows = 1;  // rows carried by each ancilla
    int budget = 6;            // hard cap on max_symbols
};

/// Enumerates every state whose row space is a distinct subspace of
/// GF(q)^(coordinates) of dimension 1..max_symbols, one coordinate per
/// system and max_ancilla_rows per ancilla, keeping those that satisfy the
/// product constraint. visit returns false to stop early.
void enumerate_states(int q, int max_symbols, const Ground& ground, const EnumOptions& opt,
                      const std::function<bool(const LinearState&)>& visit);

/// Invariant under invertible changes of the symbol basis: the per-system
/// row counts and the RREF of the k x (total rows) matrix of all rows.
struct StateNormalForm {
    std::vector<int> shape;
    std::vector<GfRow> rref;
    bool operator==(const StateNormalForm& o) const { return shape == o.shape && rref == o.rref; }
    bool operator<(const StateNormalForm& o) const {
        return shape != o.shape ? shape < o.shape : rref < o.rref;
    }
};
StateNormalForm normal_form(const LinearState& s);

/// Relabels systems: system i of the result is system perm[i] of s.
LinearState permute_systems(const LinearState& s, const std::vector<int>& perm);

nlohmann::json to_json(const LinearState& s);

} // namespace uac
