#pragma once

#include "uac/rational.hpp"
#include "uac/subset.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uac {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& what, size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
};

/// Linear combination of entropies of nonempty subsets of a ground set.
struct EntropyFunctional {
    Ground ground;
    std::map<Mask, Rational> terms;  // no zero coefficients, never the empty set

    EntropyFunctional() = default;
    explicit EntropyFunctional(Ground g) : ground(std::move(g)) {}

    void add(Mask m, const Rational& c);
    Rational coeff(Mask m) const;
    bool empty() const { return terms.empty(); }
    EntropyFunctional operator+(const EntropyFunctional& o) const;
    EntropyFunctional operator-(const EntropyFunctional& o) const;
    EntropyFunctional operator*(const Rational& c) const;
    EntropyFunctional operator-() const { return *this * Rational(-1); }
    bool operator==(const EntropyFunctional& o) const { return ground == o.ground && terms == o.terms; }
    /// Sum of coefficient times h(mask).
    Rational eval(const std::function<Rational(Mask)>& h) const;
    /// Dense coefficient vector indexed by mask (entry 0 unused).
    Vec dense() const;
};

EntropyFunctional entropy_term(const Ground& g, Mask m, const Rational& c = 1);
/// I(X:Y|Z) = S(XZ) + S(YZ) - S(XYZ) - S(Z).
EntropyFunctional cmi(const Ground& g, Mask x, Mask y, Mask z);
/// S(X|Z) = S(XZ) - S(Z).
EntropyFunctional cond_entropy(const Ground& g, Mask x, Mask z);

std::string render(const EntropyFunctional& f);
/// Grammar: sum of [coef] S(X), S(X|Z), I(X:Y), I(X:Y|Z) terms, or "0".
EntropyFunctional parse_functional(std::string_view text, const Ground& g);

/// Replaces every subset that contains `eliminate` by its complement in the
/// ground (global purity), then drops `eliminate` from the ground.
EntropyFunctional purity_rewrite(const EntropyFunctional& f, const std::string& eliminate);

/// Coefficients of ancilla-containing subsets of {parties} + {ancillas}. The
/// storage is sector-major: sector s (nonempty ancilla subset, shortlex) holds
/// 2^n party subsets in shortlex order, so one ancilla gives
/// (a_V, a_AV, a_BV, a_CV, a_ABV, a_ACV, a_BCV, a_ABCV).
struct AlphaVector {
    int n_parties = 3;
    int n_ancillas = 1;
    Vec coeffs;

    AlphaVector() = default;
    AlphaVector(int n, int m);
    AlphaVector(int n, int m, Vec c);

    size_t sector_size() const { return size_t(1) << n_parties; }
    size_t sector_count() const { return (size_t(1) << n_ancillas) - 1; }
    /// Position of sector `anc` (nonzero ancilla bitmask, V=1, W=2).
    size_t sector_pos(Mask anc) const;
    Rational& at(Mask anc, Mask parties);
    const Rational& at(Mask anc, Mask parties) const;
    Vec sector(Mask anc) const;
    void set_sector(Mask anc, const Vec& v);
    Ground ground() const { return alpha_ground(n_parties, n_ancillas); }
    bool operator==(const AlphaVector& o) const {
        return n_parties == o.n_parties && n_ancillas == o.n_ancillas && coeffs == o.coeffs;
    }
};

EntropyFunctional to_functional(const AlphaVector& a);
/// Throws std::invalid_argument if f has an ancilla-free term.
AlphaVector to_alpha(const EntropyFunctional& f, int n, int m);
AlphaVector alpha_from_sectors(int n, const std::vector<Vec>& sectors);

std::string render(const AlphaVector& a);
AlphaVector parse_alpha(std::string_view text, int n, int m = 1);

/// True iff the coefficients of all subsets containing the ancilla sum to 0.
bool is_balanced(const AlphaVector& a, const std::string& ancilla);
bool is_balanced(const AlphaVector& a);

nlohmann::json to_json(const AlphaVector& a);
AlphaVector alpha_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EntropyFunctional& f);

} // namespace uac
