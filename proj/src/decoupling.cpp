#include "uac/decoupling.hpp"

#include "uac/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

namespace uac {

namespace {

void check_nm(int n, int m) {
    if (n < 2 || n > 3) throw std::invalid_argument("decouplings need 2 or 3 parties");
    if (m < 1 || m > 2) throw std::invalid_argument("decouplings need 1 or 2 ancillas");
}

int full_index(int n) { return (1 << n) - 1; }

Mask party_mask(int idx, int n) { return shortlex_unrank(idx, n); }
int party_index(Mask m, int n) { return shortlex_rank(m, n); }

int complement_of_union(const std::vector<int>& xs, int n) {
    Mask u = 0;
    for (int x : xs) u |= party_mask(x, n);
    return party_index(static_cast<Mask>(full_index(n)) & ~u, n);
}

Mask permute_mask(Mask m, const std::vector<int>& sigma) {
    Mask out = 0;
    for (size_t i = 0; i < sigma.size(); ++i)
        if (m >> i & 1) out |= Mask(1) << sigma[i];
    return out;
}

} // namespace

// ---------------------------------------------------------------- Decoupling

bool Decoupling::consistent() const {
    Mask a = 0, b = 0;
    for (const auto& [x, y] : pairs) {
        Mask mx = party_mask(x, n_parties), my = party_mask(y, n_parties);
        if ((a & mx) || (b & my)) return false;
        a |= mx;
        b |= my;
    }
    return true;
}

std::string Decoupling::str() const {
    std::string s;
    for (const auto& [a, b] : pairs) s += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    return s;
}

Decoupling Decoupling::joint() const {
    Mask a = 0, b = 0;
    for (const auto& [x, y] : pairs) {
        a |= party_mask(x, n_parties);
        b |= party_mask(y, n_parties);
    }
    return Decoupling{n_parties, {{party_index(a, n_parties), party_index(b, n_parties)}}};
}

Decoupling Decoupling::part(int k) const {
    return Decoupling{n_parties, {pairs.at(static_cast<size_t>(k))}};
}

Decoupling parse_decoupling(std::string_view text, int n_parties) {
    std::vector<int> nums;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            nums.push_back(std::stoi(std::string(text.substr(i, j - i))));
            i = j;
        } else if (c == '(' || c == ')' || c == ',' || c == ' ' || c == ';') {
            ++i;
        } else {
            throw std::invalid_argument("decoupling: unexpected character '" + std::string(1, c) + "' at position " +
                                        std::to_string(i));
        }
    }
    if (nums.size() != 2 && nums.size() != 4)
        throw std::invalid_argument("decoupling: expected 2 or 4 subset indices in '" + std::string(text) + "'");
    Decoupling d{n_parties, {}};
    for (size_t k = 0; k < nums.size(); k += 2) {
        for (size_t t = k; t < k + 2; ++t)
            if (nums[t] > full_index(n_parties))
                throw std::invalid_argument("decoupling: subset index " + std::to_string(nums[t]) + " out of range");
        d.pairs.emplace_back(nums[k], nums[k + 1]);
    }
    if (!d.consistent()) throw std::invalid_argument("decoupling " + d.str() + " is not consistent");
    return d;
}

// ----------------------------------------------------------------- symmetry

SymmetryOp SymmetryOp::identity(int n, int m) {
    SymmetryOp g;
    g.party_perm.resize(static_cast<size_t>(n));
    std::iota(g.party_perm.begin(), g.party_perm.end(), 0);
    g.ancilla_perm.resize(static_cast<size_t>(m + 1));
    std::iota(g.ancilla_perm.begin(), g.ancilla_perm.end(), 0);
    return g;
}

SymmetryOp SymmetryOp::swap(int n, int m) {
    SymmetryOp g = identity(n, m);
    g.swap12 = true;
    return g;
}

SymmetryOp SymmetryOp::parties(int m, std::vector<int> sigma) {
    SymmetryOp g = identity(static_cast<int>(sigma.size()), m);
    g.party_perm = std::move(sigma);
    return g;
}

SymmetryOp SymmetryOp::ancillas(int n, std::vector<int> pi) {
    SymmetryOp g = identity(n, static_cast<int>(pi.size()) - 1);
    g.ancilla_perm = std::move(pi);
    return g;
}

std::string SymmetryOp::str() const {
    std::string s = swap12 ? "swap12" : "id";
    s += " parties[";
    for (size_t i = 0; i < party_perm.size(); ++i) s += (i ? "," : "") + std::to_string(party_perm[i]);
    s += "] ancillas[";
    for (size_t i = 0; i < ancilla_perm.size(); ++i) s += (i ? "," : "") + std::to_string(ancilla_perm[i]);
    return s + "]";
}

std::vector<SymmetryOp> symmetry_group(int n, int m) {
    check_nm(n, m);
    std::vector<SymmetryOp> out;
    std::vector<int> sigma(static_cast<size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    for (int sw = 0; sw < 2; ++sw) {
        std::vector<int> s = sigma;
        do {
            std::vector<int> p(static_cast<size_t>(m + 1));
            std::iota(p.begin(), p.end(), 0);
            do {
                SymmetryOp g;
                g.swap12 = sw == 1;
                g.party_perm = s;
                g.ancilla_perm = p;
                out.push_back(std::move(g));
            } while (std::next_permutation(p.begin(), p.end()));
        } while (std::next_permutation(s.begin(), s.end()));
    }
    return out;
}

Decoupling act(const SymmetryOp& g, const Decoupling& d) {
    const int n = d.n_parties;
    const int m = d.n_ancillas();
    if (static_cast<int>(g.party_perm.size()) != n || static_cast<int>(g.ancilla_perm.size()) != m + 1)
        throw std::invalid_argument("symmetry does not match the decoupling");
    std::vector<int> t1, t2;
    for (const auto& [a, b] : d.pairs) {
        t1.push_back(a);
        t2.push_back(b);
    }
    t1.push_back(complement_of_union(t1, n));
    t2.push_back(complement_of_union(t2, n));
    Decoupling out{n, {}};
    for (int i = 0; i < m; ++i) {
        int a = t1[static_cast<size_t>(g.ancilla_perm[static_cast<size_t>(i)])];
        int b = t2[static_cast<size_t>(g.ancilla_perm[static_cast<size_t>(i)])];
        a = party_index(permute_mask(party_mask(a, n), g.party_perm), n);
        b = party_index(permute_mask(party_mask(b, n), g.party_perm), n);
        if (g.swap12) std::swap(a, b);
        out.pairs.emplace_back(a, b);
    }
    return out;
}

AlphaVector alpha_act(const SymmetryOp& g, const AlphaVector& a) {
    const int n = a.n_parties;
    const int m = a.n_ancillas;
    if (static_cast<int>(g.party_perm.size()) != n || static_cast<int>(g.ancilla_perm.size()) != m + 1)
        throw std::invalid_argument("symmetry does not match the alpha vector");
    std::vector<int> inv(static_cast<size_t>(m + 1));
    for (int i = 0; i <= m; ++i) inv[static_cast<size_t>(g.ancilla_perm[static_cast<size_t>(i)])] = i;
    const Mask all_anc = (Mask(1) << (m + 1)) - 1;
    const Mask all_par = (Mask(1) << n) - 1;
    AlphaVector out(n, m);
    for (Mask s = 1; s < (Mask(1) << m); ++s)
        for (Mask J = 0; J <= all_par; ++J) {
            const Rational& c = a.at(s, J);
            if (sgn(c) == 0) continue;
            Mask t = permute_mask(s, inv);
            Mask K = permute_mask(J, g.party_perm);
            if (t >> m & 1) {
                t = all_anc & ~t;
                K = all_par & ~K;
            }
            out.at(t, K) += c;
        }
    return out;
}

std::vector<Decoupling> all_decouplings(int n, int m) {
    check_nm(n, m);
    const int top = full_index(n);
    std::vector<Decoupling> out;
    if (m == 1) {
        for (int a = 0; a <= top; ++a)
            for (int b = 0; b <= top; ++b) out.push_back(Decoupling{n, {{a, b}}});
        return out;
    }
    for (int a = 0; a <= top; ++a)
        for (int b = 0; b <= top; ++b)
            for (int c = 0; c <= top; ++c)
                for (int d = 0; d <= top; ++d) {
                    Decoupling x{n, {{a, b}, {c, d}}};
                    if (x.consistent()) out.push_back(std::move(x));
                }
    return out;
}

const std::vector<Decoupling>& printed_representatives(int n) {
    static const std::vector<Decoupling> bi = {
        {2, {{3, 3}}}, {2, {{3, 0}}}, {2, {{1, 1}}}, {2, {{1, 2}}}, {2, {{3, 2}}}};
    static const std::vector<Decoupling> tri = {{3, {{0, 0}}}, {3, {{7, 0}}}, {3, {{1, 1}}}, {3, {{1, 6}}},
                                                {3, {{1, 0}}}, {3, {{4, 0}}}, {3, {{1, 2}}}, {3, {{1, 4}}}};
    return n == 2 ? bi : tri;
}

std::vector<EquivalenceClass> equivalence_classes(int n, int m) {
    auto group = symmetry_group(n, m);
    std::set<Decoupling> seen;
    std::vector<EquivalenceClass> out;
    for (const auto& d : all_decouplings(n, m)) {
        if (seen.count(d)) continue;
        std::set<Decoupling> orbit;
        for (const auto& g : group) orbit.insert(act(g, d));
        seen.insert(orbit.begin(), orbit.end());
        EquivalenceClass c;
        c.members.assign(orbit.begin(), orbit.end());
        c.representative = c.members.front();
        if (m == 1)
            for (const auto& p : printed_representatives(n))
                if (orbit.count(p)) c.printed_alias = p;
        out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(), [](const EquivalenceClass& x, const EquivalenceClass& y) {
        if (x.members.size() != y.members.size()) return x.members.size() < y.members.size();
        return x.representative < y.representative;
    });
    return out;
}

// ------------------------------------------------------------ Delta, beta

namespace {

struct SectorSets {
    Mask x1, x2, joint;
};

// Systems entering the three entropies of sector s, party set J.
SectorSets sector_sets(const Decoupling& d, Mask s, Mask J) {
    const int n = d.n_parties;
    Mask anc = 0, a2 = 0, b1 = 0;
    for (int k = 0; k < d.n_ancillas(); ++k)
        if (s >> k & 1) {
            anc |= Mask(1) << (2 * n + k);
            a2 |= party_mask(d.pairs[static_cast<size_t>(k)].first, n) << n;
            b1 |= party_mask(d.pairs[static_cast<size_t>(k)].second, n);
        }
    Mask J1 = J, J2 = J << n;
    return {J1 | a2 | anc, J2 | b1 | anc, J1 | J2 | anc};
}

void check_alpha_shape(const Decoupling& d, const AlphaVector& a) {
    if (a.n_parties != d.n_parties || a.n_ancillas != d.n_ancillas())
        throw std::invalid_argument("alpha vector does not match decoupling " + d.str());
}

} // namespace

EntropyFunctional delta_functional(const Decoupling& d, const AlphaVector& a) {
    check_alpha_shape(d, a);
    if (!is_balanced(a))
        throw std::invalid_argument("alpha must be balanced: coefficients of terms containing each ancilla must sum to 0");
    Ground g = doubled_ground(d.n_parties, d.n_ancillas());
    EntropyFunctional f(g);
    for (Mask s = 1; s < (Mask(1) << d.n_ancillas()); ++s)
        for (Mask J = 0; J < (Mask(1) << d.n_parties); ++J) {
            const Rational& c = a.at(s, J);
            if (sgn(c) == 0) continue;
            SectorSets ss = sector_sets(d, s, J);
            f.add(ss.x1, c);
            f.add(ss.x2, c);
            f.add(ss.joint, -c);
        }
    return f;
}

Vec beta_vector(const Decoupling& d, const LinearState& st) {
    Ground g = doubled_ground(d.n_parties, d.n_ancillas());
    if (st.ground.labels != g.labels) throw std::invalid_argument("state ground does not match decoupling " + d.str());
    if (!st.product_ok()) throw ConstraintViolation("state violates the product constraint");
    AlphaVector shape(d.n_parties, d.n_ancillas());
    Vec beta(shape.coeffs.size(), Rational(0));
    for (Mask s = 1; s < (Mask(1) << d.n_ancillas()); ++s)
        for (Mask J = 0; J < (Mask(1) << d.n_parties); ++J) {
            SectorSets ss = sector_sets(d, s, J);
            size_t pos = shape.sector_pos(s) + static_cast<size_t>(shortlex_rank(J, d.n_parties));
            beta[pos] = st.rank_of(ss.joint) - st.rank_of(ss.x1) - st.rank_of(ss.x2);
        }
    return beta;
}

// ---------------------------------------------------------------- cones

const char* status_name(ConeBoundResult::Status s) { return s == ConeBoundResult::Status::Solved ? "solved" : "bounded"; }

const char* verdict_name(Membership::Verdict v) {
    switch (v) {
    case Membership::Verdict::Yes: return "yes";
    case Membership::Verdict::No: return "no";
    default: return "unknown";
    }
}

ConeBoundResult build_cone(const Decoupling& d, const std::vector<LinearState>& states) {
    Prover p(doubled_ground(d.n_parties, 1));
    return build_cone(d, states, p);
}

ConeBoundResult build_cone(const Decoupling& d, const std::vector<LinearState>& states, const Prover& prover) {
    if (d.n_ancillas() != 1)
        throw std::invalid_argument("build_cone takes one ancilla; two-ancilla cones are direct sums");
    const int dim = 1 << d.n_parties;
    ConeBoundResult res;
    res.decoupling = d;
    res.h.dim = dim;
    std::set<Vec, decltype(&lex_less)> seen(&lex_less);
    for (const auto& s : states) {
        res.sources.push_back(s.describe());
        Vec b = beta_vector(d, s);
        if (is_zero(b)) continue;
        if (seen.insert(primitive(b)).second) res.h.ineqs.push_back(b);
    }
    res.h.eqs.push_back(Vec(static_cast<size_t>(dim), Rational(1)));
    res.outer = dualize(res.h);

    std::vector<Vec> gens = res.outer.generators();
    std::vector<ProveResult> proofs(gens.size());
    parallel_for(gens.size(), [&](size_t i) {
        proofs[i] = prover.prove(delta_functional(d, AlphaVector(d.n_parties, 1, gens[i])));
    });
    std::vector<bool> ok(gens.size());
    for (size_t i = 0; i < gens.size(); ++i) {
        ok[i] = proofs[i].proved;
        if (ok[i]) res.certificates.emplace_back(gens[i], *proofs[i].certificate);
        else res.failures.emplace_back(gens[i], *proofs[i].witness);
    }
    res.inner.dim = dim;
    const size_t nr = res.outer.rays.size();
    for (size_t i = 0; i < nr; ++i)
        if (ok[i]) res.inner.rays.push_back(gens[i]);
    for (size_t l = 0; l < res.outer.lineality.size(); ++l) {
        size_t ip = nr + 2 * l, in = ip + 1;
        if (ok[ip] && ok[in]) res.inner.lineality.push_back(gens[ip]);
        else if (ok[ip]) res.inner.rays.push_back(gens[ip]);
        else if (ok[in]) res.inner.rays.push_back(gens[in]);
    }
    res.inner = canonical(std::move(res.inner));
    res.status = res.failures.empty() ? ConeBoundResult::Status::Solved : ConeBoundResult::Status::Bounded;
    return res;
}

std::vector<LinearState> bipartite_states() {
    std::vector<LinearState> out;
    EnumOptions opt;
    opt.max_ancilla_rows = 2;
    enumerate_states(2, 6, doubled_ground(2, 1), opt, [&](const LinearState& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

std::vector<LinearState> transport_states(const SymmetryOp& g, const std::vector<LinearState>& states) {
    for (size_t i = 0; i + 1 < g.ancilla_perm.size(); ++i)
        if (g.ancilla_perm[i] != static_cast<int>(i))
            throw std::invalid_argument("transport_states: ancilla permutations are not supported");
    std::vector<LinearState> out;
    for (const auto& s : states) {
        const int n = static_cast<int>(g.party_perm.size());
        std::vector<int> perm(s.rows.size());
        std::iota(perm.begin(), perm.end(), 0);
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < n; ++i) {
                int src_copy = g.swap12 ? 1 - c : c;
                perm[static_cast<size_t>(c * n + g.party_perm[static_cast<size_t>(i)])] = src_copy * n + i;
            }
        out.push_back(permute_systems(s, perm));
    }
    return out;
}

// ------------------------------------------------------------ database

std::shared_ptr<const ConeDatabase> ConeDatabase::build(int n_parties) {
    check_nm(n_parties, 1);
    auto db = std::make_shared<ConeDatabase>();
    db->n_ = n_parties;
    db->group_ = symmetry_group(n_parties, 1);
    db->prover_ = std::make_unique<Prover>(doubled_ground(n_parties, 1));
    std::vector<LinearState> bi;
    if (n_parties == 2) bi = bipartite_states();
    for (const auto& rep : printed_representatives(n_parties)) {
        const auto& pr = rep.pairs[0];
        db->results_.push_back(build_cone(rep, n_parties == 2 ? bi : paper_states(pr.first, pr.second), *db->prover_));
    }
    for (const auto& r : db->results_) {
        db->outer_h_.push_back(to_h(r.outer));
        db->inner_h_.push_back(to_h(r.inner));
    }
    return db;
}

const ConeBoundResult& ConeDatabase::lookup(const Decoupling& rep) const {
    for (const auto& r : results_)
        if (r.decoupling == rep) return r;
    throw std::out_of_range("no cone for decoupling " + rep.str());
}

std::pair<const ConeBoundResult*, SymmetryOp> ConeDatabase::locate(const Decoupling& d) const {
    if (d.n_parties != n_ || d.n_ancillas() != 1) throw std::invalid_argument("decoupling does not fit the database");
    for (const auto& g : group_) {
        Decoupling img = act(g, d);
        for (const auto& r : results_)
            if (r.decoupling == img) return {&r, g};
    }
    throw std::out_of_range("no cone in the class of " + d.str());
}

Membership ConeDatabase::member(const Decoupling& d, const AlphaVector& a) const {
    auto [res, g] = locate(d);
    size_t idx = static_cast<size_t>(res - results_.data());
    AlphaVector img = alpha_act(g, a);
    Membership m;
    bool in_outer = contains(outer_h_[idx], img.coeffs);
    if (res->status == ConeBoundResult::Status::Solved) {
        m.verdict = in_outer ? Membership::Verdict::Yes : Membership::Verdict::No;
        m.evidence = "solved-cone";
        return m;
    }
    if (!in_outer) {
        m.verdict = Membership::Verdict::No;
        m.evidence = "outer-excludes";
        return m;
    }
    if (contains(inner_h_[idx], img.coeffs)) {
        m.verdict = Membership::Verdict::Yes;
        m.evidence = "inner-cone";
        return m;
    }
    ProveResult pr = prover_->prove(delta_functional(res->decoupling, img));
    m.verdict = pr.proved ? Membership::Verdict::Yes : Membership::Verdict::Unknown;
    m.evidence = pr.proved ? "prover" : "prover-unprovable";
    return m;
}

namespace {

ConeV carry(const ConeV& cone, const SymmetryOp& g, int n) {
    std::vector<Vec> gens;
    for (const auto& v : cone.generators()) gens.push_back(alpha_act(g, AlphaVector(n, 1, v)).coeffs);
    return cone_from_generators(cone.dim, gens);
}

} // namespace

ConeV ConeDatabase::outer_cone(const Decoupling& d) const {
    auto [res, g] = locate(d);
    for (const auto& h : group_)
        if (act(h, res->decoupling) == d) return carry(res->outer, h, n_);
    throw std::logic_error("symmetry group is not closed");
}

ConeV ConeDatabase::inner_cone(const Decoupling& d) const {
    auto [res, g] = locate(d);
    for (const auto& h : group_)
        if (act(h, res->decoupling) == d) return carry(res->inner, h, n_);
    throw std::logic_error("symmetry group is not closed");
}

bool TwoAncillaCone::solved() const {
    return std::all_of(statuses.begin(), statuses.end(),
                       [](auto s) { return s == ConeBoundResult::Status::Solved; });
}

TwoAncillaCone two_ancilla_cone(const ConeDatabase& db, const Decoupling& d) {
    if (d.n_ancillas() != 2 || !d.consistent()) throw std::invalid_argument("need a consistent two-ancilla decoupling");
    TwoAncillaCone c;
    c.decoupling = d;
    c.blocks = {d.part(0), d.part(1), d.joint()};
    std::vector<ConeV> outer, inner;
    for (const auto& b : c.blocks) {
        auto [res, g] = db.locate(b);
        c.representatives.push_back(res->decoupling);
        c.statuses.push_back(res->status);
        outer.push_back(db.outer_cone(b));
        inner.push_back(db.inner_cone(b));
    }
    c.outer = direct_sum(outer);
    c.inner = direct_sum(inner);
    return c;
}

// ------------------------------------------------------------------ json

nlohmann::json to_json(const Decoupling& d) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : d.pairs) pairs.push_back({a, b});
    return {{"parties", d.n_parties}, {"pairs", pairs}, {"label", d.str()}};
}

nlohmann::json to_json(const ConeBoundResult& r) {
    auto named = [&](const std::vector<Vec>& vs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& v : vs) a.push_back({{"ray", vec_str(v)}, {"name", render(AlphaVector(r.decoupling.n_parties, 1, v))}});
        return a;
    };
    nlohmann::json certs = nlohmann::json::array(), fails = nlohmann::json::array();
    Ground g = doubled_ground(r.decoupling.n_parties, 1);
    for (const auto& [v, c] : r.certificates)
        certs.push_back({{"ray", render(AlphaVector(r.decoupling.n_parties, 1, v))}, {"certificate", to_json(c)}});
    for (const auto& [v, w] : r.failures)
        fails.push_back({{"ray", render(AlphaVector(r.decoupling.n_parties, 1, v))}, {"witness", to_json(w, g)}});
    return {{"decoupling", to_json(r.decoupling)},
            {"status", status_name(r.status)},
            {"constraints", to_json(r.h)},
            {"outer", {{"rays", named(r.outer.rays)}, {"lineality", named(r.outer.lineality)}}},
            {"inner", {{"rays", named(r.inner.rays)}, {"lineality", named(r.inner.lineality)}}},
            {"certificates", certs},
            {"failures", fails},
            {"sources", r.sources}};
}

nlohmann::json to_json(const TwoAncillaCone& c) {
    int n = c.decoupling.n_parties;
    auto named = [&](const std::vector<Vec>& vs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& v : vs) a.push_back({{"ray", vec_str(v)}, {"name", render(AlphaVector(n, 2, v))}});
        return a;
    };
    nlohmann::json blocks = nlohmann::json::array();
    for (size_t i = 0; i < c.blocks.size(); ++i)
        blocks.push_back({{"block", c.blocks[i].str()},
                          {"representative", c.representatives[i].str()},
                          {"status", status_name(c.statuses[i])}});
    return {{"decoupling", to_json(c.decoupling)},
            {"blocks", blocks},
            {"solved", c.solved()},
            {"outer", {{"rays", named(c.outer.rays)}, {"lineality", named(c.outer.lineality)}}},
            {"inner", {{"rays", named(c.inner.rays)}, {"lineality", named(c.inner.lineality)}}}};
}

} // namespace uac
