#pragma once

#include "uac/decoupling.hpp"
#include "uac/formula.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace uac {

struct MeasureSpec {
    std::string name;                  // "E_c2"
    std::vector<std::string> aliases;  // "f_c2", "c2"
    std::string note;
    EntropyFunctional entropies;       // over A,B,C,a,b,c
    std::string mi_form;               // the same measure written with (conditional) mutual informations
    bool uses_ancillas = true;
};

const std::vector<MeasureSpec>& builtin_measures();
/// Lookup by name or alias; throws std::out_of_range.
const MeasureSpec& find_measure(const std::string& name);

/// Maps every subset to the member of {X, complement} that avoids the last
/// label, dropping the full set. Two functionals agree on pure states of the
/// ground iff their normal forms coincide.
EntropyFunctional purity_normal_form(const EntropyFunctional& f);

/// One rewriting: eliminate one ancilla by purity and name the other two V, W.
struct AncillaForm {
    std::string eliminated;
    std::string v_label;
    std::string w_label;
    AlphaVector alpha;  // 3 parties, 2 ancillas
    AlphaVector part_v() const;
    AlphaVector part_w() const;
    AlphaVector part_vw() const;
};

/// Six forms: each ancilla eliminated, both labelings of the remaining two.
std::vector<AncillaForm> two_ancilla_forms(const MeasureSpec& m);

struct AdditivityWitness {
    size_t form = 0;
    Decoupling decoupling;            // two ancillas
    Membership v, w, vw;              // block evidence
    std::optional<ProofCertificate> certificate;  // on the full two-ancilla Delta
};

struct ClassificationResult {
    enum class Verdict { UniformlyAdditive, NotInAnyKnownCone, Undetermined, NoAncilla };
    std::string measure;
    Verdict verdict = Verdict::NotInAnyKnownCone;
    std::vector<AncillaForm> forms;
    std::vector<AdditivityWitness> witnesses;
    size_t undetermined_pairs = 0;   // (form, decoupling) pairs with no "no" block but an unknown one
    bool witness_verified = false;   // the first witness passed the independent checks
};

const char* verdict_name(ClassificationResult::Verdict v);

/// Membership cache shared across classifications.
class MembershipCache {
public:
    explicit MembershipCache(std::shared_ptr<const ConeDatabase> db) : db_(std::move(db)) {}
    Membership member(const Decoupling& d, const AlphaVector& a);
    const ConeDatabase& database() const { return *db_; }

private:
    std::shared_ptr<const ConeDatabase> db_;
    std::mutex mu_;
    std::map<std::pair<Decoupling, std::vector<std::string>>, Membership> memo_;
};

/// Tests every form against every consistent two-ancilla decoupling through
/// the direct-sum blocks. The first witness is re-checked with an exact
/// certificate on its full two-ancilla Delta functional.
ClassificationResult classify(const MeasureSpec& m, MembershipCache& cache, const Prover* full_prover = nullptr);

/// Single-ancilla decouplings whose cone holds alpha.
std::vector<std::pair<Decoupling, Membership>> additive_decouplings(const ConeDatabase& db, const AlphaVector& a);

nlohmann::json to_json(const MeasureSpec& m);
nlohmann::json to_json(const ClassificationResult& r);

} // namespace uac
