#include "oracles.hpp"
#include "reference_data.hpp"

#include "uac/decoupling.hpp"
#include "uac/formula.hpp"
#include "uac/measures.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace uac;

namespace {

const Ground kDoubled = doubled_ground(3, 1);

Decoupling dc(int a, int b) { return Decoupling{3, {{a, b}}}; }

EntropyFunctional doubled(const std::string& text) { return parse_functional(text, kDoubled); }

AlphaVector random_balanced(std::mt19937_64& rng, int n, int m) {
    std::uniform_int_distribution<int> coef(-3, 3);
    AlphaVector a(n, m);
    for (auto& x : a.coeffs) x = coef(rng);
    // zero the sum over every ancilla by adjusting the ancilla-only terms
    for (int k = 0; k < m; ++k) {
        Rational sum = 0;
        for (Mask s = 1; s < (Mask(1) << m); ++s)
            if ((s >> k) & 1)
                for (Mask J = 0; J < (Mask(1) << n); ++J) sum += a.at(s, J);
        a.at(Mask(1) << k, 0) -= sum;
    }
    return a;
}

std::set<Decoupling> as_set(const std::vector<ref::Pair>& ps) {
    std::set<Decoupling> s;
    for (auto [a, b] : ps) s.insert(dc(a, b));
    return s;
}

const std::shared_ptr<const ConeDatabase>& tripartite_db() {
    static auto db = ConeDatabase::build(3);
    return db;
}

} // namespace

TEST_CASE("decoupling enumeration") {
    CHECK(all_decouplings(2, 1).size() == 16);
    CHECK(all_decouplings(3, 1).size() == 64);
    CHECK(all_decouplings(3, 2).size() == 729);
    int consistent = 0;
    for (const auto& d : all_decouplings(3, 2)) consistent += d.consistent();
    // disjoint pairs of subsets of three parties: 3^3 per copy
    CHECK(consistent == 27 * 27);
    CHECK(symmetry_group(3, 1).size() == 24);
    CHECK(symmetry_group(3, 2).size() == 72);
    CHECK(symmetry_group(2, 1).size() == 8);
    CHECK(parse_decoupling("(1,4)(2,0)", 3) == Decoupling{3, {{1, 4}, {2, 0}}});
    CHECK(parse_decoupling("1,4", 3) == dc(1, 4));
    CHECK_THROWS(parse_decoupling("(1,9)", 3));
}

TEST_CASE("group action examples") {
    CHECK(act(SymmetryOp::ancillas(3, {1, 0}), dc(1, 6)) == dc(6, 1));
    Decoupling two{3, {{1, 4}, {2, 0}}};
    CHECK(act(SymmetryOp::swap(3, 2), two) == Decoupling{3, {{4, 1}, {0, 2}}});
    CHECK(act(SymmetryOp::parties(1, {1, 0, 2}), dc(1, 0)) == dc(2, 0));
    CHECK(act(SymmetryOp::identity(3, 1), dc(5, 2)) == dc(5, 2));
    CHECK(two.joint() == dc(4, 4));
    CHECK(two.part(1) == dc(2, 0));
}

TEST_CASE("alpha action examples") {
    AlphaVector a(2, 1, vec_from_ints({1, 2, 3, 4}));
    AlphaVector q = alpha_act(SymmetryOp::ancillas(2, {1, 0}), a);
    CHECK(q.coeffs == vec_from_ints({4, 3, 2, 1}));
    AlphaVector p = alpha_act(SymmetryOp::parties(1, {1, 0}), a);
    CHECK(p.coeffs == vec_from_ints({1, 3, 2, 4}));
    AlphaVector id = alpha_act(SymmetryOp::swap(2, 1), a);
    CHECK(id == a);
    CHECK(render(alpha_act(SymmetryOp::parties(1, {1, 0, 2}), parse_alpha("-S(A|BCV)", 3))) == "-S(B|ACV)");
}

TEST_CASE("equivalence classes") {
    auto bi = equivalence_classes(2, 1);
    REQUIRE(bi.size() == 5);
    std::set<std::set<Decoupling>> want;
    for (const auto& c : ref::kBipartiteClasses) {
        std::set<Decoupling> s;
        for (auto [a, b] : c) s.insert(Decoupling{2, {{a, b}}});
        want.insert(s);
    }
    std::set<std::set<Decoupling>> have;
    for (const auto& c : bi) have.insert({c.members.begin(), c.members.end()});
    CHECK(have == want);

    auto tri = equivalence_classes(3, 1);
    REQUIRE(tri.size() == 8);
    size_t total = 0;
    for (const auto& c : tri) {
        total += c.members.size();
        CHECK(c.representative == c.members.front());
        REQUIRE(c.printed_alias.has_value());
        CHECK(std::count(c.members.begin(), c.members.end(), *c.printed_alias) == 1);
    }
    CHECK(total == 64);
    // every printed class but the last is exact
    for (size_t i = 0; i + 1 < ref::kTripartiteClasses.size(); ++i) {
        auto s = as_set(ref::kTripartiteClasses[i]);
        bool found = false;
        for (const auto& c : tri) found = found || std::set<Decoupling>(c.members.begin(), c.members.end()) == s;
        CHECK(found);
    }
    auto two = equivalence_classes(3, 2);
    size_t consistent = 0;
    for (const auto& c : two)
        if (c.representative.consistent()) ++consistent;
    CHECK(consistent == ref::kTwoAncillaClasses.size());
}

TEST_CASE("delta functional examples") {
    std::mt19937_64 rng(5);
    SECTION("(0,0) is a sum of conditional mutual informations") {
        for (int t = 0; t < 20; ++t) {
            AlphaVector a = random_balanced(rng, 3, 1);
            EntropyFunctional want(kDoubled);
            for (Mask J = 1; J < 8; ++J) {
                Mask j1 = spread(J, kDoubled.copy1), j2 = spread(J, kDoubled.copy2);
                want = want + cmi(kDoubled, j1, j2, kDoubled.ancillas) * a.at(1, J);
            }
            CHECK(delta_functional(dc(0, 0), a) == want);
        }
    }
    SECTION("(7,0) with a single party term") {
        AlphaVector a = parse_alpha("S(AV) - S(V)", 3);
        CHECK(delta_functional(dc(7, 0), a) == doubled("-I(A1:B2C2|A2V)"));
    }
    SECTION("zero and unbalanced") {
        CHECK(delta_functional(dc(1, 2), AlphaVector(3, 1)).empty());
        CHECK_THROWS_AS(delta_functional(dc(0, 0), parse_alpha("S(AV)", 3)), std::invalid_argument);
        CHECK_THROWS(delta_functional(Decoupling{3, {{1, 1}, {0, 0}}}, parse_alpha("S(AV)-S(V)", 3)));
    }
}

TEST_CASE("beta vectors") {
    auto s = build_state(2, "A1=B1=C1=s1; A2=B2=C2=s2; V=s1+s2", kDoubled);
    CHECK(beta_vector(dc(0, 0), s) == vec_from_ints({-1, -2, -2, -2, -2, -2, -2, -2}));
    auto trivial = build_state(2, "", kDoubled);
    CHECK(beta_vector(dc(3, 5), trivial) == Vec(8, 0));
    CHECK_THROWS(beta_vector(dc(0, 0), build_state(2, "A1=s1; A2=s1", kDoubled)));

    std::mt19937_64 rng(9);
    auto states = paper_states(0, 0);
    auto more = paper_states(1, 4);
    states.insert(states.end(), more.begin(), more.end());
    for (const auto& d : all_decouplings(3, 1))
        for (size_t i = 0; i < states.size(); i += 3) {
            AlphaVector a = random_balanced(rng, 3, 1);
            const auto& st = states[i];
            Rational dot = oracle::dotp(a.coeffs, beta_vector(d, st));
            Rational delta = delta_functional(d, a).eval([&](Mask m) { return st.rank_of(m); });
            CHECK(dot == -delta);
        }
}

TEST_CASE("solved and bounded cones from the printed states") {
    SECTION("(0,0)") {
        auto r = build_cone(dc(0, 0), paper_states(0, 0));
        CHECK(r.status == ConeBoundResult::Status::Solved);
        CHECK(r.outer.rays.size() == 12);
        CHECK(r.failures.empty());
        CHECK(r.certificates.size() == 12);
        for (const auto& [v, c] : r.certificates) CHECK(verify(c, delta_functional(dc(0, 0), AlphaVector(3, 1, v))));
    }
    SECTION("(1,1)") {
        auto r = build_cone(dc(1, 1), paper_states(1, 1));
        CHECK(r.status == ConeBoundResult::Status::Bounded);
        CHECK(r.inner.generator_count() == 5);
        std::set<std::vector<std::string>> failed, want;
        for (const auto& [v, w] : r.failures) failed.insert({render(AlphaVector(3, 1, v))});
        for (const auto& s : ref::kBoundedCones[0].additional) want.insert({render(parse_alpha(s, 3))});
        CHECK(failed == want);
        Prover p(kDoubled);
        for (const auto& [v, w] : r.failures) CHECK(verify_witness(w, delta_functional(dc(1, 1), AlphaVector(3, 1, v)), p));
    }
    SECTION("(1,2)") {
        auto r = build_cone(dc(1, 2), paper_states(1, 2));
        CHECK(r.status == ConeBoundResult::Status::Bounded);
        REQUIRE(r.failures.size() == 1);
        CHECK(AlphaVector(3, 1, r.failures[0].first) == parse_alpha(ref::kBoundedCones[1].additional[0], 3));
    }
}

TEST_CASE("every cone generator is balanced and respects every state") {
    for (const auto& r : tripartite_db()->results()) {
        auto states = has_paper_states(r.decoupling.pairs[0].first, r.decoupling.pairs[0].second)
                          ? paper_states(r.decoupling.pairs[0].first, r.decoupling.pairs[0].second)
                          : std::vector<LinearState>{};
        for (const auto& ray : r.outer.rays) {
            CHECK(is_balanced(AlphaVector(3, 1, ray)));
            for (const auto& s : states) CHECK(oracle::dotp(ray, beta_vector(r.decoupling, s)) >= 0);
        }
        for (const auto& ray : r.inner.rays) CHECK(contains(r.outer, ray));
        for (const auto& l : r.inner.lineality) CHECK(contains(r.outer, l));
    }
}

TEST_CASE("cones are carried coherently across a class") {
    const auto& db = *tripartite_db();
    // (0,1) is the copy swap of (1,0)
    auto direct = build_cone(dc(0, 1), transport_states(SymmetryOp::swap(3, 1), paper_states(1, 0)));
    CHECK(direct.status == ConeBoundResult::Status::Solved);
    CHECK(equal_cones(direct.outer, db.outer_cone(dc(0, 1))));
    CHECK(equal_cones(db.outer_cone(dc(0, 1)), db.outer_cone(dc(1, 0))));

    auto perm = SymmetryOp::parties(1, {2, 0, 1});
    auto moved = build_cone(act(perm, dc(1, 2)), transport_states(perm, paper_states(1, 2)));
    CHECK(equal_cones(moved.outer, db.outer_cone(act(perm, dc(1, 2)))));
    CHECK(equal_cones(moved.inner, db.inner_cone(act(perm, dc(1, 2)))));

    for (const auto& d : all_decouplings(3, 1)) {
        auto [rep, g] = db.locate(d);
        CHECK(act(g, d) == rep->decoupling);
    }
}

TEST_CASE("the prover verdict is invariant under the group") {
    Prover p(kDoubled);
    std::mt19937_64 rng(77);
    auto group = symmetry_group(3, 1);
    auto all = all_decouplings(3, 1);
    int proved = 0;
    for (int t = 0; t < 40; ++t) {
        const auto& d = all[rng() % all.size()];
        const auto& g = group[rng() % group.size()];
        AlphaVector a = t % 2 ? random_balanced(rng, 3, 1) : AlphaVector(3, 1, tripartite_db()->inner_cone(d).rays.empty()
                                                                                 ? Vec(8, 0)
                                                                                 : tripartite_db()->inner_cone(d).rays[rng() % tripartite_db()->inner_cone(d).rays.size()]);
        bool x = p.prove(delta_functional(d, a)).proved;
        bool y = p.prove(delta_functional(act(g, d), alpha_act(g, a))).proved;
        CHECK(x == y);
        proved += x;
    }
    CHECK(proved > 10);
}

TEST_CASE("database membership agrees with the prover") {
    const auto& db = *tripartite_db();
    Prover p(kDoubled);
    std::mt19937_64 rng(123);
    auto all = all_decouplings(3, 1);
    int yes = 0, no = 0;
    for (int t = 0; t < 60; ++t) {
        const auto& d = all[rng() % all.size()];
        ConeV inner = db.inner_cone(d);
        AlphaVector a(3, 1);
        if (t % 2 && !inner.rays.empty()) {
            for (int k = 0; k < 3; ++k) {
                const auto& r = inner.rays[rng() % inner.rays.size()];
                Rational w = static_cast<long>(1 + rng() % 3);
                for (size_t i = 0; i < 8; ++i) a.coeffs[i] += r[i] * w;
            }
        } else {
            a = random_balanced(rng, 3, 1);
        }
        Membership m = db.member(d, a);
        bool proved = p.prove(delta_functional(d, a)).proved;
        if (m.verdict == Membership::Verdict::Yes) {
            ++yes;
            CHECK(proved);
        } else if (m.verdict == Membership::Verdict::No) {
            ++no;
            CHECK_FALSE(proved);
        }
    }
    CHECK(yes > 10);
    CHECK(no > 10);
}

TEST_CASE("two-ancilla cones are direct sums of block cones") {
    const auto& db = *tripartite_db();
    Decoupling d{3, {{1, 4}, {2, 0}}};
    auto c = two_ancilla_cone(db, d);
    REQUIRE(c.blocks.size() == 3);
    CHECK(c.blocks[2] == dc(4, 4));
    CHECK(c.representatives[1] == db.locate(dc(2, 0)).first->decoupling);
    CHECK(c.representatives[2] == db.locate(dc(1, 1)).first->decoupling);
    CHECK_FALSE(c.solved());
    CHECK(c.outer.dim == 24);
    CHECK(equal_cones(c.outer, direct_sum(std::vector<ConeV>{db.outer_cone(dc(1, 4)), db.outer_cone(dc(2, 0)),
                                                              db.outer_cone(dc(4, 4))})));
    CHECK_THROWS_AS(two_ancilla_cone(db, Decoupling{3, {{1, 1}, {1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(two_ancilla_cone(db, dc(0, 0)), std::invalid_argument);
    CHECK(two_ancilla_cone(db, Decoupling{3, {{0, 0}, {0, 0}}}).solved());
}

TEST_CASE("bipartite squashed-entanglement functional") {
    auto db = ConeDatabase::build(2);
    AlphaVector sq = parse_alpha("I(A:B|V)", 2);
    std::set<Decoupling> reps;
    for (const auto& [d, m] : additive_decouplings(*db, sq)) {
        CHECK(m.verdict == Membership::Verdict::Yes);
        reps.insert(db->locate(d).first->decoupling);
    }
    std::set<Decoupling> want;
    for (auto [a, b] : std::vector<ref::Pair>{{3, 0}, {1, 2}, {3, 2}})
        want.insert(db->locate(Decoupling{2, {{a, b}}}).first->decoupling);
    CHECK(reps == want);
}

TEST_CASE("serialization") {
    auto j = to_json(build_cone(dc(7, 0), paper_states(7, 0)));
    CHECK(j["status"] == "solved");
    CHECK(j["decoupling"].dump() == to_json(dc(7, 0)).dump());
}
