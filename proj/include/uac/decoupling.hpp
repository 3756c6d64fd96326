#pragma once

#include "uac/formula.hpp"
#include "uac/linear_state.hpp"
#include "uac/polycone.hpp"
#include "uac/prover.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace uac {

/// One (a,b) pair per ancilla; a is a party-subset index applied to copy 2
/// and b one applied to copy 1.
struct Decoupling {
    int n_parties = 3;
    std::vector<std::pair<int, int>> pairs;

    int n_ancillas() const { return static_cast<int>(pairs.size()); }
    /// Disjointness of the copy-2 parts and of the copy-1 parts.
    bool consistent() const;
    std::string str() const;
    /// The (a∪c, b∪d) block of a two-ancilla decoupling.
    Decoupling joint() const;
    /// The single-ancilla decoupling of ancilla k.
    Decoupling part(int k) const;

    bool operator==(const Decoupling& o) const { return n_parties == o.n_parties && pairs == o.pairs; }
    bool operator<(const Decoupling& o) const {
        return n_parties != o.n_parties ? n_parties < o.n_parties : pairs < o.pairs;
    }
};

/// Accepts "(1,4)(2,0)", "1,4", "1,4,2,0" and similar.
Decoupling parse_decoupling(std::string_view text, int n_parties);

/// A group element: optional copy swap, a party permutation and a permutation
/// of ancillas plus purifier. party_perm[i] is the image of party i;
/// ancilla_perm[i] is the old index of the system that becomes ancilla i
/// (index n_ancillas is the purifier).
struct SymmetryOp {
    bool swap12 = false;
    std::vector<int> party_perm;
    std::vector<int> ancilla_perm;

    static SymmetryOp identity(int n, int m);
    static SymmetryOp swap(int n, int m);
    static SymmetryOp parties(int m, std::vector<int> sigma);
    static SymmetryOp ancillas(int n, std::vector<int> pi);
    std::string str() const;
};

/// All 2 * n! * (m+1)! elements.
std::vector<SymmetryOp> symmetry_group(int n, int m);

Decoupling act(const SymmetryOp& g, const Decoupling& d);
AlphaVector alpha_act(const SymmetryOp& g, const AlphaVector& a);

std::vector<Decoupling> all_decouplings(int n, int m);

struct EquivalenceClass {
    Decoupling representative;          // least member
    std::vector<Decoupling> members;    // sorted
    std::optional<Decoupling> printed_alias;
};

/// The printed class representatives: five bipartite or eight tripartite.
const std::vector<Decoupling>& printed_representatives(int n);

/// Sorted by (size, representative).
std::vector<EquivalenceClass> equivalence_classes(int n, int m);

/// Delta functional on the doubled ground set; the uniform-additivity claim
/// for (d, alpha) is Delta <= 0. Throws if alpha is unbalanced.
EntropyFunctional delta_functional(const Decoupling& d, const AlphaVector& a);
/// Components S(J1J2 s) - S(J1 s_1) - S(J2 s_2) for state s, so that
/// alpha·beta = -Delta(s).
Vec beta_vector(const Decoupling& d, const LinearState& s);

struct ConeBoundResult {
    enum class Status { Solved, Bounded };
    Decoupling decoupling;
    Status status = Status::Bounded;
    ConeH h;                 // constraint set: alpha·beta >= 0, balance
    ConeV outer;
    ConeV inner;
    std::vector<std::pair<Vec, ProofCertificate>> certificates;  // per certified generator
    std::vector<std::pair<Vec, DualWitness>> failures;
    std::vector<std::string> sources;                            // state descriptions
};

const char* status_name(ConeBoundResult::Status s);

/// Assembles the constraints of all states, dualizes and certifies every
/// generator of the outer cone with the prover.
ConeBoundResult build_cone(const Decoupling& d, const std::vector<LinearState>& states);
ConeBoundResult build_cone(const Decoupling& d, const std::vector<LinearState>& states, const Prover& prover);

/// States for the bipartite cones: every product state over GF(2) with up
/// to two rows on V.
std::vector<LinearState> bipartite_states();

/// States for a party-permuted image, mapping the systems accordingly.
std::vector<LinearState> transport_states(const SymmetryOp& g, const std::vector<LinearState>& states);

struct Membership {
    enum class Verdict { Yes, No, Unknown };
    Verdict verdict = Verdict::Unknown;
    std::string evidence;   // solved-cone | outer-excludes | inner-cone | prover | prover-unprovable
};

const char* verdict_name(Membership::Verdict v);

/// Single-ancilla cones for every class representative, with lookups for
/// arbitrary decouplings through the symmetry group.
class ConeDatabase {
public:
    /// Tripartite cones from the printed states; bipartite from enumeration.
    static std::shared_ptr<const ConeDatabase> build(int n_parties);

    int n_parties() const { return n_; }
    const std::vector<ConeBoundResult>& results() const { return results_; }
    const ConeBoundResult& lookup(const Decoupling& rep) const;
    /// Rep of d's class in this database and g with act(g, d) = rep.
    std::pair<const ConeBoundResult*, SymmetryOp> locate(const Decoupling& d) const;

    Membership member(const Decoupling& d, const AlphaVector& a) const;
    /// Cones of d itself, carried over from its class representative.
    ConeV outer_cone(const Decoupling& d) const;
    ConeV inner_cone(const Decoupling& d) const;

private:
    int n_ = 3;
    std::vector<ConeBoundResult> results_;
    std::vector<ConeH> outer_h_;
    std::vector<ConeH> inner_h_;
    std::vector<SymmetryOp> group_;
    std::unique_ptr<Prover> prover_;
};

/// Sector-wise direct sum of the V, W and VW blocks of a two-ancilla
/// decoupling.
struct TwoAncillaCone {
    Decoupling decoupling;
    std::vector<Decoupling> blocks;                      // part(0), part(1), joint()
    std::vector<Decoupling> representatives;
    std::vector<ConeBoundResult::Status> statuses;
    ConeV outer;
    ConeV inner;
    bool solved() const;
};

TwoAncillaCone two_ancilla_cone(const ConeDatabase& db, const Decoupling& d);

nlohmann::json to_json(const Decoupling& d);
nlohmann::json to_json(const ConeBoundResult& r);
nlohmann::json to_json(const TwoAncillaCone& c);

} // namespace uac
