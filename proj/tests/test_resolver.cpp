// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "cycres/errors.hpp"
#include "cycres/resolver.hpp"
#include "cycres/scenario.hpp"
#include "test_util.hpp"

using namespace cycres;

TEST_CASE("classify recognizes the generated starts") {
    SingularityClass f0 = classify(realize(generate_scenario("f0", 3, 4, 3, 0, 2, "1", 1)));
    CHECK(f0.kind == SingKind::FTemplate);
    CHECK(f0.index == 0);
    CHECK_FALSE(f0.terminal);

    SingularityClass c2 = classify(realize(generate_scenario("char2", 2, 2, 2, 0, 2, "1", 1)));
    CHECK(c2.kind == SingKind::Char2NormalForm);
    CHECK(c2.index == 0);

    SingularityClass raw = classify(realize(generate_scenario("raw", 3, 4, 3, 0, 2, "1", 1)));
    CHECK(raw.kind == SingKind::Unclassified);
    CHECK_FALSE(raw.detail.empty());
}

TEST_CASE("singular point search agrees with direct enumeration") {
    FqFieldPtr F = FqField::create(3, 1);
    SplitMix64 rng(71);
    std::vector<std::string> vars{"x", "y", "z"};
    for (int trial = 0; trial < 20; ++trial) {
        CFPoly f(F, vars);
        for (int t = 0; t < 5; ++t)
            f.add_term({static_cast<uint16_t>(rng.below(3)), static_cast<uint16_t>(rng.below(3)),
                        static_cast<uint16_t>(rng.below(3))},
                       static_cast<Fq>(rng.below(3)));
        auto got = singular_points(f, 1'000'000, 2);
        std::set<std::pair<uint32_t, std::vector<Fq>>> found;
        for (const auto& pt : got) found.insert({pt.ext_degree, pt.coords});

        // ext 1 oracle
        std::set<std::pair<uint32_t, std::vector<Fq>>> want;
        auto jac = f.jacobian();
        for_each_point(*F, 3, 1'000'000, [&](const std::vector<Fq>& pt) {
            bool sing = F->is_zero(f.eval(pt));
            for (const auto& d : jac) sing = sing && F->is_zero(d.eval(pt));
            if (sing) want.insert({1u, pt});
            return true;
        });
        // ext 2 oracle, skipping points with every coordinate in the subfield image
        FqFieldPtr E = FqField::create(3, 2);
        auto emb = E->embedding_from(*F);
        std::set<Fq> image(emb.begin(), emb.end());
        CFPoly fe = f.map_scalars(E, emb);
        auto jace = fe.jacobian();
        for_each_point(*E, 3, 1'000'000, [&](const std::vector<Fq>& pt) {
            bool base = true;
            for (Fq c : pt) base = base && image.count(c) > 0;
            if (base) return true;
            bool sing = E->is_zero(fe.eval(pt));
            for (const auto& d : jace) sing = sing && E->is_zero(d.eval(pt));
            if (sing) want.insert({2u, pt});
            return true;
        });
        CHECK(found == want);
    }
}

TEST_CASE("full odd-p resolution produces the expected trace shape") {
    for (auto [p, k] : {std::pair<uint32_t, uint32_t>{3, 4}, {5, 8}}) {
        Scenario sc = generate_scenario("f0", p, k, p, 0, 2, "1", 5);
        ResolutionTrace t = resolve(prepare(sc).model);
        CHECK(t.steps_taken == k / (p - 1));
        CHECK(t.steps_taken == t.steps_expected);
        REQUIRE(t.steps.size() == 2);
        CHECK(t.steps[0].sign == "minus");
        CHECK(t.steps[1].sign == "plus");
        CHECK(t.steps[1].after.terminal);
        for (const auto& st : t.steps) {
            REQUIRE(st.charts.size() == 3);
            for (const auto& ch : st.charts) {
                CHECK(ch.pullback_exact);
                REQUIRE(ch.witness.has_value());
                CHECK_NOTHROW(verify_witness(*ch.witness, p));
            }
        }
        std::vector<uint32_t> expect_orders;
        if ((p - 1) / 2 > 1) expect_orders.push_back((p - 1) / 2);
        expect_orders.push_back((p + 1) / 2);
        CHECK(t.verdict.quotient_orders == expect_orders);
        CHECK(t.verdict.kind == "cyclic-quotient-only");
        CHECK(t.verdict.uniruling_degree_bound == (p + 1) / 2);
    }
}

TEST_CASE("char-2 resolution runs k steps and ends smooth") {
    Scenario sc = generate_scenario("char2", 2, 4, 2, 0, 2, "1", 7);
    ResolutionTrace t = resolve(prepare(sc).model);
    CHECK(t.steps_taken == 4);
    CHECK(t.verdict.kind == "smooth");
    CHECK(t.verdict.uniruling_degree_bound == 1);
    CHECK(t.steps.back().quadric_smooth);
    for (size_t i = 0; i + 1 < t.steps.size(); ++i) CHECK_FALSE(t.steps[i].quadric_smooth);
    // every pi chart (first chart of each step) carries a quadric witness
    for (const auto& st : t.steps) {
        REQUIRE(!st.charts.empty());
        REQUIRE(st.charts[0].witness.has_value());
        CHECK(st.charts[0].witness->form == WitnessForm::Quadric);
    }
}

TEST_CASE("witness forms match the divisor geometry") {
    FqFieldPtr F = FqField::create(3, 1);
    std::vector<std::string> vars{"a1", "a2", "b"};

    // rank-n quadric cone -> Quadric
    CFPoly quad = CFPoly::parse(F, vars, "a1^2 + a2^2");
    RuledWitness wq = ruledness_witness(quad, 3);
    CHECK(wq.form == WitnessForm::Quadric);

    // gamma + quadric -> graph of a function
    CFPoly graph = CFPoly::parse(F, {"a1", "a2", "g"}, "g + a1^2 + a2^2");
    RuledWitness wg = ruledness_witness(graph, 3);
    CHECK(wg.form == WitnessForm::GraphOfFunction);
    CHECK(wg.linear_var == "g");

    // b^p + B b + quadric -> inseparable double cover certificate
    CFPoly as = CFPoly::parse(F, vars, "b^3 + 2*b + a1^2 + a2^2");
    RuledWitness wa = ruledness_witness(as, 3);
    CHECK(wa.form == WitnessForm::ArtinSchreierQuadric);
    CHECK(wa.multiplicity == 2);
    CHECK(wa.projection_degree == 1);

    // b^p + quadric (no linear slot) -> graph after the v^((p-1)/2) rescale
    CFPoly resc = CFPoly::parse(F, vars, "b^3 + a1^2 + a2^2");
    RuledWitness wr = ruledness_witness(resc, 3);
    CHECK(wr.form == WitnessForm::GraphOfFunction);
    CHECK(wr.rescale_exponent == 1);

    // a genuinely non-ruled shape has no certificate
    CFPoly none = CFPoly::parse(F, {"a1"}, "a1^3 + 2");
    CHECK_THROWS_AS(ruledness_witness(none, 3), CycresError);
}

TEST_CASE("tampered witnesses fail re-verification") {
    FqFieldPtr F = FqField::create(3, 1);
    std::vector<std::string> vars{"a1", "a2", "b"};
    CFPoly as = CFPoly::parse(F, vars, "b^3 + 2*b + a1^2 + a2^2");
    RuledWitness w = ruledness_witness(as, 3);
    REQUIRE(w.form == WitnessForm::ArtinSchreierQuadric);

    RuledWitness bad = w;
    bad.multiplicity = 1;
    CHECK_THROWS_AS(verify_witness(bad, 3), CycresError);

    bad = w;
    REQUIRE(!bad.point.empty());
    bad.point[0] = bad.point[0] == 1 ? 2 : 1;
    CHECK_THROWS_AS(verify_witness(bad, 3), CycresError);

    bad = w;
    bad.homogenized = CFPoly::parse(F, bad.homogenized->vars(), "b^3");
    CHECK_THROWS_AS(verify_witness(bad, 3), CycresError);

    bad = w;
    bad.form = WitnessForm::Quadric;  // degree-3 equation is no quadric
    CHECK_THROWS_AS(verify_witness(bad, 3), CycresError);
}

TEST_CASE("regularity certificates reject an off-center singular strict transform") {
    RingPtr R = Ring::create(3, 4, 3, 14, 1);
    PolyRingPtr P = make_poly_ring(R, {"x1", "x2"});
    MultiPoly f(P);
    f.add_term({2, 2}, R->one());  // x1^2 x2^2: singular along both axes
    ChartResult fake;
    fake.name = "test";
    fake.map.source = P;
    fake.map.target = P;
    fake.map.divide_var = SIZE_MAX;
    fake.map.divide_power = 0;
    fake.total = f;
    fake.strict = f;
    fake.exceptional = f.central_fiber();
    CHECK_THROWS_AS(regularity_certificates(fake, /*skip_origin=*/true, 1'000'000),
                    InvalidScenario);
}

TEST_CASE("certificates on real charts prove regularity at every candidate") {
    Scenario sc = generate_scenario("f0", 3, 4, 3, 0, 2, "1", 9);
    ResolutionTrace t = resolve(prepare(sc).model);
    bool saw_candidate = false;
    for (const auto& st : t.steps)
        for (const auto& ch : st.charts)
            for (const auto& c : ch.certificates) {
                saw_candidate = true;
                CHECK(c.regular);
                CHECK_FALSE(c.linear_form.empty());
            }
    CHECK(saw_candidate);  // the y-chart gamma-line always contributes candidates
}

TEST_CASE("uniruling bound rejects orders above the covering degree") {
    ResolutionTrace t;
    StepRecord st;
    ChartRecord ch;
    QuotientData q;
    q.order = 7;
    ch.quotient = q;
    st.charts.push_back(ch);
    t.steps.push_back(st);
    CHECK_THROWS_AS(uniruling_degree_bound(t, 3), CycresError);
    CHECK(uniruling_degree_bound(t, 7) == 7);
}
