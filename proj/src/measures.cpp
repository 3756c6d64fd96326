#include "uac/measures.hpp"

#include "uac/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace uac {

namespace {

struct Row {
    const char* name;
    const char* alias;
    const char* note;
    const char* entropies;
    const char* mi;
    bool ancillas;
};

const Row kRows[] = {
    {"E_sumI", "sumI", "pairwise mutual informations", "2S(A) + 2S(B) + 2S(C) - S(AB) - S(AC) - S(BC)",
     "I(A:B) + I(A:C) + I(B:C)", false},
    {"E_J", "J", "J(A:B:C)", "S(AB) + S(AC) + S(BC) - 2S(ABC)", "I(AB:C) + I(A:B|C)", false},
    {"E_c1", "f_c1", "f^P_3", "S(Aa) + S(Bb) + S(Cc)", "I(Aa:Bb) + I(Aa:Cc) + I(Bb:Cc)", true},
    {"E_c2", "f_c2", "part of f^R_3", "S(Aa) + S(Bb) + S(Cc) + 2S(ABC) - S(ab) - S(ac) - S(bc)",
     "I(a:BC|A) + I(b:AC|B) + I(c:AB|C) + I(A:B) + I(AB:C)", true},
    {"E_c3", "f_c3", "part of f^R_3",
     "S(Aa) + S(Bb) + S(Cc) + S(ab) + S(ac) + S(bc) - 2S(a) - 2S(b) - 2S(c)",
     "I(a:B|b) + I(a:C|c) + I(b:A|a) + I(b:C|c) + I(c:A|a) + I(c:B|b) + I(A:B|ab) + I(A:C|ac) + I(B:C|bc)", true},
    {"E_s1", "f_s1", "f^Q_3",
     "S(Aa) + S(Bb) + S(Cc) + S(A) + S(B) + S(C) + S(AB) + S(AC) + S(BC) - S(ABc) - S(ACb) - S(BCa)",
     "I(AB:c) + I(AC:b) + I(BC:a) + I(A:BCbc) + I(B:ACac) + I(C:ABab)", true},
    {"E_s2", "f_s2", "",
     "2S(Aa) + 2S(Bb) + 2S(Cc) + S(AB) + S(AC) + S(BC) - S(ABa) - S(ABb) - S(ACa) - S(ACc) - S(BCb) - S(BCc)",
     "I(A:b|B) + I(A:Cc) + I(B:c|C) + I(B:Aa) + I(C:a|A) + I(C:Bb)", true},
    {"E_a1", "f_a1", "",
     "2S(A) + 2S(B) + 2S(C) + S(ABa) + S(ABb) + S(ACa) + S(ACc) + S(BCb) + S(BCc) - S(Ab) - S(Ba) - S(Ac) - "
     "S(Ca) - S(Bc) - S(Cb)",
     "I(A:Cbc) + I(A:Bbc) + I(B:Cac) + I(B:Aac) + I(C:Bab) + I(C:Aab)", true},
    {"E_a2", "f_a2", "",
     "2S(Aa) + 2S(Bb) + 2S(Cc) + 2S(A) + 2S(B) + 2S(C) + S(ABc) + S(ACb) + S(BCa) - S(Ab) - S(Ba) - S(Ac) - "
     "S(Ca) - S(Bc) - S(Cb) - S(a) - S(b) - S(c)",
     "I(A:Bc|a) + I(A:Cb|a) + I(B:Ac|b) + I(B:Ca|b) + I(C:Ab|c) + I(C:Ba|c) + I(A:B) + I(A:C) + I(B:C) + "
     "I(AB:c) + I(AC:b) + I(BC:a)",
     true},
    {"E_r1", "f_r1", "",
     "S(Aa) + S(Bb) + S(Cc) + S(A) + S(B) + S(C) + S(Ab) + S(Ba) + S(Ac) + S(Ca) + S(Bc) + S(Cb) - S(ABc) - "
     "S(ACb) - S(BCa) - 2S(a) - 2S(b) - 2S(c)",
     "I(A:B|c) + I(A:C|b) + I(B:C|a) + I(A:BCbc) + I(B:ACac) + I(C:ABab)", true},
    {"E_b1", "f_b1", "tripartite squashed-type",
     "S(Aa) + S(Bb) + S(Cc) + S(ABc) + S(ACb) + S(BCa) - S(ab) - S(ac) - S(bc) - S(a) - S(b) - S(c)",
     "I(A:BC|a) + I(B:AC|b) + I(C:AB|c)", true},
    {"E_b2", "f_b2", "",
     "S(ABa) + S(ABb) + S(ACa) + S(ACc) + S(BCb) + S(BCc) - S(ab) - S(ac) - S(bc) - S(Aa) - S(Bb) - S(Cc)",
     "I(B:C|Aa) + I(C:A|Bb) + I(A:B|Cc)", true},
    {"E_b3", "f_b3", "",
     "2S(Aa) + 2S(Bb) + 2S(Cc) + S(Ab) + S(Ba) + S(Ac) + S(Ca) + S(Bc) + S(Cb) - S(ABa) - S(ABb) - S(ACa) - "
     "S(ACc) - S(BCb) - S(BCc) - 2S(a) - 2S(b) - 2S(c)",
     "I(A:B|b) + I(A:C|c) + I(B:A|a) + I(B:C|c) + I(C:A|a) + I(C:B|b)", true},
};

} // namespace

const std::vector<MeasureSpec>& builtin_measures() {
    static const std::vector<MeasureSpec> all = [] {
        std::vector<MeasureSpec> v;
        Ground g = measure_ground();
        for (const auto& r : kRows) {
            MeasureSpec m;
            m.name = r.name;
            m.aliases = {r.alias};
            std::string shortname = m.name.substr(2);
            if (shortname != r.alias) m.aliases.push_back(shortname);
            m.note = r.note;
            m.entropies = parse_functional(r.entropies, g);
            m.mi_form = r.mi;
            m.uses_ancillas = r.ancillas;
            v.push_back(std::move(m));
        }
        return v;
    }();
    return all;
}

const MeasureSpec& find_measure(const std::string& name) {
    for (const auto& m : builtin_measures()) {
        if (m.name == name) return m;
        for (const auto& a : m.aliases)
            if (a == name) return m;
    }
    throw std::out_of_range("unknown measure '" + name + "'");
}

EntropyFunctional purity_normal_form(const EntropyFunctional& f) {
    const Ground& g = f.ground;
    const Mask full = g.full();
    const Mask last = Mask(1) << (g.size() - 1);
    EntropyFunctional out(g);
    for (const auto& [m, c] : f.terms) {
        if (m == full) continue;
        out.add(m & last ? full & ~m : m, c);
    }
    return out;
}

AlphaVector AncillaForm::part_v() const { return alpha_from_sectors(3, {alpha.sector(1)}); }
AlphaVector AncillaForm::part_w() const { return alpha_from_sectors(3, {alpha.sector(2)}); }
AlphaVector AncillaForm::part_vw() const { return alpha_from_sectors(3, {alpha.sector(3)}); }

std::vector<AncillaForm> two_ancilla_forms(const MeasureSpec& m) {
    if (!m.uses_ancillas) throw std::invalid_argument("measure " + m.name + " has no ancillas");
    std::vector<AncillaForm> out;
    const std::vector<std::string> anc = {"a", "b", "c"};
    for (const auto& x : anc) {
        EntropyFunctional f = purity_rewrite(m.entropies, x);
        std::vector<std::string> rest;
        for (const auto& y : anc)
            if (y != x) rest.push_back(y);
        for (int flip = 0; flip < 2; ++flip) {
            AncillaForm form;
            form.eliminated = x;
            form.v_label = rest[static_cast<size_t>(flip)];
            form.w_label = rest[static_cast<size_t>(1 - flip)];
            form.alpha = AlphaVector(3, 2);
            int iv = f.ground.index_of(form.v_label), iw = f.ground.index_of(form.w_label);
            for (const auto& [mask, c] : f.terms) {
                Mask parties = 0;
                for (int p = 0; p < 3; ++p)
                    if (mask >> f.ground.index_of(std::string(1, "ABC"[p])) & 1) parties |= Mask(1) << p;
                Mask s = ((mask >> iv & 1) ? 1u : 0u) | ((mask >> iw & 1) ? 2u : 0u);
                if (!s) continue;
                form.alpha.at(s, parties) += c;
            }
            out.push_back(std::move(form));
        }
    }
    return out;
}

const char* verdict_name(ClassificationResult::Verdict v) {
    switch (v) {
    case ClassificationResult::Verdict::UniformlyAdditive: return "uniformly_additive";
    case ClassificationResult::Verdict::NotInAnyKnownCone: return "not_in_any_known_cone";
    case ClassificationResult::Verdict::Undetermined: return "undetermined";
    default: return "no_ancilla";
    }
}

Membership MembershipCache::member(const Decoupling& d, const AlphaVector& a) {
    std::vector<std::string> key;
    for (const auto& c : a.coeffs) key.push_back(c.get_str());
    auto k = std::make_pair(d, key);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
    }
    Membership m = db_->member(d, a);
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(std::move(k), m);
    return m;
}

ClassificationResult classify(const MeasureSpec& m, MembershipCache& cache, const Prover* full_prover) {
    ClassificationResult res;
    res.measure = m.name;
    if (!m.uses_ancillas) {
        res.verdict = ClassificationResult::Verdict::NoAncilla;
        return res;
    }
    if (cache.database().n_parties() != 3) throw std::invalid_argument("classify needs the tripartite cone database");
    res.forms = two_ancilla_forms(m);
    const auto decs = all_decouplings(3, 2);
    struct Cell {
        Membership v, w, vw;
    };
    std::vector<Cell> cells(res.forms.size() * decs.size());
    std::vector<AlphaVector> pv, pw, pvw;
    for (const auto& f : res.forms) {
        pv.push_back(f.part_v());
        pw.push_back(f.part_w());
        pvw.push_back(f.part_vw());
    }
    parallel_for(cells.size(), [&](size_t i) {
        size_t fi = i / decs.size();
        const Decoupling& d = decs[i % decs.size()];
        Cell& c = cells[i];
        c.v = cache.member(d.part(0), pv[fi]);
        if (c.v.verdict == Membership::Verdict::No) return;
        c.w = cache.member(d.part(1), pw[fi]);
        if (c.w.verdict == Membership::Verdict::No) return;
        c.vw = cache.member(d.joint(), pvw[fi]);
    });
    using V = Membership::Verdict;
    for (size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = cells[i];
        if (c.v.verdict == V::Yes && c.w.verdict == V::Yes && c.vw.verdict == V::Yes) {
            AdditivityWitness w;
            w.form = i / decs.size();
            w.decoupling = decs[i % decs.size()];
            w.v = c.v;
            w.w = c.w;
            w.vw = c.vw;
            res.witnesses.push_back(std::move(w));
        } else if (c.v.verdict != V::No && c.w.verdict != V::No && c.vw.verdict != V::No) {
            ++res.undetermined_pairs;
        }
    }
    if (!res.witnesses.empty()) {
        res.verdict = ClassificationResult::Verdict::UniformlyAdditive;
        AdditivityWitness& w = res.witnesses.front();
        const ConeDatabase& db = cache.database();
        bool blocks = db.member(w.decoupling.part(0), pv[w.form]).verdict == V::Yes &&
                      db.member(w.decoupling.part(1), pw[w.form]).verdict == V::Yes &&
                      db.member(w.decoupling.joint(), pvw[w.form]).verdict == V::Yes;
        std::unique_ptr<Prover> own;
        if (!full_prover) {
            own = std::make_unique<Prover>(doubled_ground(3, 2));
            full_prover = own.get();
        }
        EntropyFunctional delta = delta_functional(w.decoupling, res.forms[w.form].alpha);
        ProveResult pr = full_prover->prove(delta);
        if (pr.proved) w.certificate = pr.certificate;
        res.witness_verified = blocks && pr.proved && verify(*pr.certificate, delta);
    } else if (res.undetermined_pairs > 0) {
        res.verdict = ClassificationResult::Verdict::Undetermined;
    }
    return res;
}

std::vector<std::pair<Decoupling, Membership>> additive_decouplings(const ConeDatabase& db, const AlphaVector& a) {
    std::vector<std::pair<Decoupling, Membership>> out;
    for (const auto& d : all_decouplings(db.n_parties(), 1)) {
        Membership m = db.member(d, a);
        if (m.verdict == Membership::Verdict::Yes) out.emplace_back(d, m);
    }
    return out;
}

nlohmann::json to_json(const MeasureSpec& m) {
    return {{"name", m.name},
            {"aliases", m.aliases},
            {"note", m.note},
            {"entropies", render(m.entropies)},
            {"mi_form", m.mi_form},
            {"uses_ancillas", m.uses_ancillas}};
}

nlohmann::json to_json(const ClassificationResult& r) {
    nlohmann::json forms = nlohmann::json::array(), wit = nlohmann::json::array();
    for (const auto& f : r.forms)
        forms.push_back({{"eliminated", f.eliminated},
                         {"V", f.v_label},
                         {"W", f.w_label},
                         {"alpha_V", render(f.part_v())},
                         {"alpha_W", render(f.part_w())},
                         {"alpha_VW", render(f.part_vw())}});
    for (const auto& w : r.witnesses) {
        nlohmann::json j = {{"form", w.form},
                            {"decoupling", w.decoupling.str()},
                            {"evidence", {w.v.evidence, w.w.evidence, w.vw.evidence}}};
        if (w.certificate) j["certificate"] = to_json(*w.certificate);
        wit.push_back(std::move(j));
    }
    return {{"measure", r.measure},
            {"verdict", verdict_name(r.verdict)},
            {"witness_verified", r.witness_verified},
            {"undetermined_pairs", r.undetermined_pairs},
            {"forms", forms},
            {"witnesses", wit}};
}

} // namespace uac
