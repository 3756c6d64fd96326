#pragma once

#include "uac/formula.hpp"
#include "uac/linear_state.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace uac {

constexpr int kMaxProverSystems = 8;

struct InequalityInstance {
    enum class Kind { Ssa, Wm };
    Kind kind = Kind::Ssa;
    int i = 0;
    int j = -1;            // ssa only
    Mask K = 0;            // conditioning set (ssa) or first block (wm)
    Mask L = 0;            // second block (wm)
    EntropyFunctional vector;

    /// "I(A1:B2|A2V) >= 0" or "S(A1|B1) + S(A1|C1V) >= 0".
    std::string describe() const;
};

const char* kind_name(InequalityInstance::Kind k);

/// All elemental SSA instances I(i:j|K) and all weak monotonicity instances
/// S(iK)+S(iL)-S(K)-S(L) with {K,L} an unordered partition of the other
/// systems, sorted by (kind, i, j, K).
std::vector<InequalityInstance> instances(const Ground& g);

/// S(J1 J2) - S(J1) - S(J2) = 0 for product states across the two copies.
struct EqualityInstance {
    Mask J1 = 0;
    Mask J2 = 0;
    EntropyFunctional vector;
    std::string describe() const;
};

/// All copy-1 x copy-2 independence equalities of a doubled ground set.
std::vector<EqualityInstance> independence_equalities(const Ground& g);

/// sum lambda*instance + sum mu*equality = -target.
struct ProofCertificate {
    std::vector<std::pair<InequalityInstance, Rational>> lambdas;
    std::vector<std::pair<EqualityInstance, Rational>> mus;

    bool uses(InequalityInstance::Kind k) const;
};

/// An entropy-coordinate vector h (indexed by mask) satisfying every
/// instance and equality while target(h) > 0.
struct DualWitness {
    Vec h;
};

struct ProveResult {
    bool proved = false;
    std::optional<ProofCertificate> certificate;
    std::optional<DualWitness> witness;
};

/// Decides whether target <= 0 follows from the instances of a ground set
/// and a given set of equalities.
class Prover {
public:
    Prover(const Ground& g, std::vector<EqualityInstance> eqs);
    /// Uses all independence equalities of g.
    explicit Prover(const Ground& g);

    const Ground& ground() const { return ground_; }
    const std::vector<InequalityInstance>& inequality_instances() const { return ins_; }
    const std::vector<EqualityInstance>& equality_instances() const { return eqs_; }

    ProveResult prove(const EntropyFunctional& target) const;

private:
    Ground ground_;
    std::vector<InequalityInstance> ins_;
    std::vector<EqualityInstance> eqs_;
    std::vector<int> row_of_;      // mask -> projected row, -1 for eliminated masks
    std::vector<Mask> row_mask_;   // projected row -> mask
    std::vector<std::vector<std::pair<int, long>>> cols_;  // distinct projected columns
    std::vector<size_t> col_instance_;                     // column -> instance index

    std::vector<Rational> project(const EntropyFunctional& f) const;
    Vec lift(const std::vector<Rational>& y) const;
    std::optional<ProofCertificate> make_certificate(const std::vector<Rational>& lambda_cols,
                                                     const EntropyFunctional& target) const;
    bool witness_ok(const std::vector<Rational>& y, const std::vector<Rational>& b) const;
};

bool verify(const ProofCertificate& cert, const EntropyFunctional& target);
/// Exact check of the dual witness against every instance and equality.
bool verify_witness(const DualWitness& w, const EntropyFunctional& target, const Prover& p);

struct RefuteOptions {
    int q = 2;
    int max_symbols = 4;
    int max_ancilla_rows = 1;
    int budget = 6;
};

/// First enumerated product state with target(h) > 0, if any. Absence is not a
/// proof.
std::optional<LinearState> refute_classical(const EntropyFunctional& target, const Ground& g,
                                            const RefuteOptions& opt = {});

nlohmann::json to_json(const ProofCertificate& c);
nlohmann::json to_json(const DualWitness& w, const Ground& g);

} // namespace uac
