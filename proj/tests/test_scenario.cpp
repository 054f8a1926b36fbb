// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "cycres/dvr.hpp"
#include "cycres/errors.hpp"
#include "cycres/resolver.hpp"
#include "cycres/scenario.hpp"

using namespace cycres;

TEST_CASE("scenario JSON round-trips field by field and byte for byte") {
    for (const char* kind : {"f0", "raw"}) {
        Scenario sc = generate_scenario(kind, 3, 4, 9, 0, 3, "2", 42);
        std::string text = scenario_to_json(sc);
        Scenario back = scenario_from_json(text);
        CHECK(back.prng == sc.prng);
        CHECK(back.seed == sc.seed);
        CHECK(back.kind == sc.kind);
        CHECK(back.p == sc.p);
        CHECK(back.k == sc.k);
        CHECK(back.q == sc.q);
        CHECK(back.N == sc.N);
        CHECK(back.n == sc.n);
        CHECK(back.tau == sc.tau);
        CHECK(back.delta == sc.delta);
        CHECK(back.g == sc.g);
        CHECK(back.f1 == sc.f1);
        CHECK(back.f2 == sc.f2);
        CHECK(back.qform == sc.qform);
        CHECK(back.f3 == sc.f3);
        CHECK(scenario_to_json(back) == text);
    }
    Scenario c2 = generate_scenario("char2", 2, 4, 4, 0, 2, "1", 7);
    CHECK(scenario_to_json(scenario_from_json(scenario_to_json(c2))) == scenario_to_json(c2));
}

TEST_CASE("the JSON schema keeps a stable key order") {
    Scenario sc = generate_scenario("f0", 3, 4, 3, 0, 2, "1", 1);
    std::string text = scenario_to_json(sc);
    const char* keys[] = {"\"prng\"",  "\"seed\"", "\"kind\"", "\"p\"",  "\"k\"",
                          "\"q\"",     "\"N\"",    "\"n\"",    "\"tau\"", "\"delta\"",
                          "\"g\"",     "\"f1\"",   "\"f2\"",   "\"qform\"", "\"f3\""};
    size_t pos = 0;
    for (const char* key : keys) {
        size_t at = text.find(key, pos);
        REQUIRE(at != std::string::npos);
        pos = at;
    }
}

TEST_CASE("generation is a pure function of its arguments") {
    std::string a = scenario_to_json(generate_scenario("raw", 5, 8, 5, 0, 3, "3", 99));
    std::string b = scenario_to_json(generate_scenario("raw", 5, 8, 5, 0, 3, "3", 99));
    CHECK(a == b);
    Scenario other = generate_scenario("raw", 5, 8, 5, 0, 3, "3", 100);
    CHECK(scenario_to_json(other) != a);
}

TEST_CASE("precision defaults to 4k + 10 and the g-block tracks p") {
    Scenario sc = generate_scenario("f0", 3, 4, 3, 0, 2, "1", 1);
    CHECK(sc.N == 26);
    CHECK(sc.g.size() == 1);  // y^2 only for p = 3
    Scenario sc5 = generate_scenario("f0", 5, 8, 5, 0, 2, "1", 1);
    CHECK(sc5.N == 42);
    CHECK(sc5.g.size() == 3);  // y^2, y^3, y^4
    Scenario pinned = generate_scenario("f0", 3, 4, 3, 30, 2, "1", 1);
    CHECK(pinned.N == 30);
}

TEST_CASE("realized scenarios land in their normal form") {
    Scenario f0 = generate_scenario("f0", 3, 4, 3, 0, 2, "1", 11);
    LocalModel m = realize(f0);
    SingularityClass c = classify(m);
    CHECK(c.kind == SingKind::FTemplate);
    CHECK(c.index == 0);
    CHECK_FALSE(c.terminal);  // r1 = k = 4 at s = 0

    Scenario c2 = generate_scenario("char2", 2, 2, 2, 0, 2, "1", 11);
    SingularityClass cc = classify(realize(c2));
    CHECK(cc.kind == SingKind::Char2NormalForm);
    CHECK(cc.index == 0);

    Scenario raw = generate_scenario("raw", 3, 4, 3, 0, 2, "1", 11);
    SingularityClass cr = classify(realize(raw));
    CHECK(cr.kind == SingKind::Unclassified);
    CHECK_FALSE(cr.detail.empty());
}

TEST_CASE("prepare() pipelines a raw cover into the F(0) template") {
    for (uint64_t seed : {21ull, 22ull, 23ull}) {
        Scenario raw = generate_scenario("raw", 3, 4, 3, 0, 3, "1", seed);
        PreparedModel pm = prepare(raw);
        CHECK(pm.pipeline.size() == 3);
        CHECK(pm.model.tag == ModelTag::Shifted);
        SingularityClass c = classify(pm.model);
        CHECK(c.kind == SingKind::FTemplate);
        CHECK(c.index == 0);
    }
    // already normal kinds need no pipeline
    CHECK(prepare(generate_scenario("f0", 3, 4, 3, 0, 2, "1", 1)).pipeline.empty());
}

TEST_CASE("invalid scenario parameters are rejected up front") {
    CHECK_THROWS_AS(generate_scenario("weird", 3, 4, 3, 0, 2, "1", 1), InvalidScenario);
    CHECK_THROWS_AS(generate_scenario("char2", 2, 4, 2, 0, 3, "1", 1),
                    InvalidScenario);  // odd x-block
    CHECK_THROWS_AS(generate_scenario("char2", 3, 4, 3, 0, 2, "1", 1),
                    InvalidScenario);  // p must be 2
    CHECK_THROWS_AS(generate_scenario("f0", 2, 4, 2, 0, 2, "1", 1),
                    InvalidScenario);  // odd-p kind with p = 2
    CHECK_THROWS_AS(generate_scenario("f0", 3, 3, 3, 0, 2, "1", 1),
                    InvalidScenario);  // 2(p-1) does not divide k
    CHECK_THROWS_AS(generate_scenario("f0", 3, 4, 5, 0, 2, "1", 1),
                    InvalidScenario);  // q not a power of p

    Scenario sc = generate_scenario("f0", 3, 4, 3, 0, 2, "1", 5);
    std::string text = scenario_to_json(sc);
    std::string bad = text;
    bad.replace(bad.find("splitmix64-v1"), 13, "mt19937-<bad>");
    CHECK_THROWS_AS(scenario_from_json(bad), InvalidScenario);

    // delta must stay a unit
    auto F = FqField::create(3, 1);
    auto R = Ring::create(3, 4, 3, sc.N, F->parse("1"));
    sc.delta = R->pi_pow(1).to_string();
    CHECK_THROWS_AS(realize(sc), InvalidScenario);
}
