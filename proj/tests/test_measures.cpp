#include "oracles.hpp"

#include "uac/measures.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace uac;

namespace {

MembershipCache& cache() {
    static MembershipCache c(ConeDatabase::build(3));
    return c;
}

Vec ints(std::vector<long> xs) { return vec_from_ints(xs); }

} // namespace

TEST_CASE("measure table") {
    const auto& all = builtin_measures();
    CHECK(all.size() == 13);
    int plain = 0;
    for (const auto& m : all) plain += !m.uses_ancillas;
    CHECK(plain == 2);
    CHECK(find_measure("E_b1").name == "E_b1");
    CHECK(find_measure("f_c2").name == "E_c2");
    CHECK(find_measure("s1").name == "E_s1");
    CHECK_THROWS_AS(find_measure("E_zz"), std::out_of_range);
    CHECK_THROWS(two_ancilla_forms(find_measure("E_J")));
}

TEST_CASE("mutual information forms agree on pure states") {
    Ground g = measure_ground();
    std::mt19937_64 rng(3);
    for (const auto& m : builtin_measures()) {
        INFO(m.name);
        EntropyFunctional mi = parse_functional(m.mi_form, g);
        CHECK(purity_normal_form(mi) == purity_normal_form(m.entropies));
        for (int t = 0; t < 5; ++t) {
            auto h = oracle::pure_values(6, rng);
            auto at = [&](Mask x) { return h[x]; };
            CHECK(mi.eval(at) == m.entropies.eval(at));
        }
    }
}

TEST_CASE("two-ancilla forms") {
    auto forms = two_ancilla_forms(find_measure("E_c2"));
    REQUIRE(forms.size() == 6);
    const AncillaForm* cab = nullptr;
    const AncillaForm* cba = nullptr;
    for (const auto& f : forms) {
        if (f.eliminated == "c" && f.v_label == "a") cab = &f;
        if (f.eliminated == "c" && f.v_label == "b") cba = &f;
    }
    REQUIRE(cab);
    REQUIRE(cba);
    CHECK(cab->w_label == "b");
    CHECK(cab->part_v().coeffs == ints({0, 1, 0, 0, 0, 0, 0, -1}));
    CHECK(cab->part_w().coeffs == ints({0, 0, 1, 0, 0, 0, 0, -1}));
    CHECK(cab->part_vw().coeffs == ints({-1, 0, 0, 0, 1, 0, 0, 0}));
    CHECK(cba->part_v() == cab->part_w());
    CHECK(cba->part_w() == cab->part_v());
    CHECK(cba->part_vw() == cab->part_vw());
    for (const auto& f : forms) {
        CHECK(is_balanced(f.part_v()));
        CHECK(is_balanced(f.part_w()));
    }
}

TEST_CASE("classification") {
    auto c2 = classify(find_measure("E_c2"), cache());
    CHECK(c2.verdict == ClassificationResult::Verdict::UniformlyAdditive);
    REQUIRE_FALSE(c2.witnesses.empty());
    const auto& w = c2.witnesses.front();
    CHECK(w.decoupling.consistent());
    CHECK(w.v.verdict == Membership::Verdict::Yes);
    CHECK(w.w.verdict == Membership::Verdict::Yes);
    CHECK(w.vw.verdict == Membership::Verdict::Yes);
    CHECK(c2.witness_verified);
    REQUIRE(w.certificate.has_value());
    AlphaVector a = c2.forms[w.form].alpha;
    CHECK(verify(*w.certificate, delta_functional(w.decoupling, a)));

    auto c1 = classify(find_measure("E_c1"), cache());
    CHECK(c1.verdict == ClassificationResult::Verdict::NotInAnyKnownCone);
    CHECK(c1.witnesses.empty());

    auto j = classify(find_measure("E_J"), cache());
    CHECK(j.verdict == ClassificationResult::Verdict::NoAncilla);

    auto js = to_json(c2);
    CHECK(js["verdict"] == "uniformly_additive");
}

TEST_CASE("single-ancilla additivity") {
    const auto& db = cache().database();
    auto hits = additive_decouplings(db, parse_alpha("-S(A|BCV)", 3));
    bool zero = false;
    for (const auto& [d, m] : hits) {
        CHECK(m.verdict == Membership::Verdict::Yes);
        zero = zero || d == Decoupling{3, {{0, 0}}};
    }
    CHECK(zero);
    CHECK(additive_decouplings(db, parse_alpha("S(ABCV) - S(V)", 3)).size() < 64);
}
