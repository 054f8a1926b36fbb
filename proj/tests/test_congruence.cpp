// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "cycres/congruence.hpp"
#include "cycres/errors.hpp"
#include "cycres/scenario.hpp"

using namespace cycres;

TEST_CASE("admissible primes and effectiveness on the worked examples") {
    // (3,5): p = 2 scrapes past the bound but is never effective; p = 5 is both
    auto a35 = admissible_primes(3, 5);
    REQUIRE(a35.size() == 2);
    CHECK(a35[0].p == 2);
    CHECK_FALSE(a35[0].effective);
    CHECK(a35[1].p == 5);
    CHECK(a35[1].effective);
    // (3,4): only p = 2 reaches 2*ceil(6/3) = 4; p = 3 needs 3*ceil(6/4) = 6
    auto a34 = admissible_primes(3, 4);
    REQUIRE(a34.size() == 1);
    CHECK(a34[0].p == 2);
    CHECK_FALSE(a34[0].effective);
    // (4,6): 2 and 3 pass the bound, 5 needs 10
    auto a46 = admissible_primes(4, 6);
    REQUIRE(a46.size() == 2);
    CHECK(a46[0].p == 2);
    CHECK_FALSE(a46[0].effective);  // p = 2 is never effective
    CHECK(a46[1].p == 3);
    CHECK(a46[1].effective);
    CHECK_THROWS_AS(admissible_primes(2, 5), InvalidScenario);
    CHECK_THROWS_AS(admissible_primes(3, 20'000'000), InvalidScenario);
}

TEST_CASE("admissibility is monotone in the degree") {
    for (uint32_t n : {3u, 5u, 9u})
        for (uint64_t d = 1; d < 40; ++d) {
            auto lo = admissible_primes(n, d);
            auto hi = admissible_primes(n, d + 1);
            for (const auto& ap : lo) {
                bool still = false;
                for (const auto& bp : hi) still = still || bp.p == ap.p;
                CHECK(still);
            }
        }
}

TEST_CASE("allowed degrees are closed under multiplication") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        uint32_t n = 3 + static_cast<uint32_t>(rng.below(5));
        uint64_t d = 5 + rng.below(10);
        uint64_t l1 = 1 + rng.below(50), l2 = 1 + rng.below(50);
        if (lambda_allowed(n, d, l1).allowed && lambda_allowed(n, d, l2).allowed) {
            // residues in {0,1} are closed under products mod every prime
            CHECK(lambda_allowed(n, d, l1 * l2).allowed);
        }
    }
    // the headline case: quintic threefold, degree-4 maps are forbidden mod 5
    auto rep = lambda_allowed(3, 5, 4);
    CHECK_FALSE(rep.allowed);
    REQUIRE(rep.per_prime.size() == 2);  // p = 2 is admissible but not effective
    CHECK(rep.per_prime[0].p == 2);
    CHECK_FALSE(rep.per_prime[0].effective);
    CHECK(rep.per_prime[0].allowed);  // 4 = 0 mod 2
    CHECK(rep.per_prime[1].p == 5);
    CHECK(rep.per_prime[1].effective);
    CHECK(rep.per_prime[1].residue == 4);
    CHECK_FALSE(rep.per_prime[1].allowed);
    CHECK(lambda_allowed(3, 5, 5).allowed);
    CHECK(lambda_allowed(3, 5, 6).allowed);
}

TEST_CASE("degree-threshold forms agree on a sample grid") {
    for (uint32_t p : {2u, 3u, 5u, 7u, 11u})
        for (uint32_t n : {3u, 4u, 10u, 57u})
            for (uint64_t e : {1u, 2u, 9u, 30u})
                for (uint32_t f = 0; f < p; ++f) {
                    RemarkCheck c = remark_equivalence(p, n, e, f);
                    CHECK(c.lhs == c.rhs);
                }
    CHECK_THROWS_AS(remark_equivalence(4, 3, 1, 0), InvalidScenario);
    CHECK_THROWS_AS(remark_equivalence(3, 3, 1, 3), InvalidScenario);
}

TEST_CASE("elliptic exclusion at the threshold always pins p = 5, m = 2") {
    for (uint32_t n = 3; n <= 30; ++n) {
        uint64_t d = elliptic_threshold(n);
        CHECK(d == 5 * ((n + 3 + 5) / 6));
        FibrationQuery q;
        q.kind = FibrationKind::Elliptic;
        auto v = fibration_excluded(n, d, q);
        REQUIRE(v.excluded);
        REQUIRE(v.witness.has_value());
        // squares mod 2 and mod 3 always land in {0,1}, so the first prime
        // that can fire is 5, where 2^2 = 4 is forbidden
        CHECK(v.witness->p == 5);
        CHECK(v.witness->m == 2);
        CHECK(v.witness->degree == 4);
        CHECK(v.witness->residue == 4);
        // at d-1 the prime 5 loses effectiveness
        bool five_effective = false;
        for (const auto& ap : admissible_primes(n, d - 1))
            five_effective = five_effective || (ap.p == 5 && ap.effective);
        CHECK_FALSE(five_effective);
    }
    // a case whose only effective prime is 3: squares never violate {0,1}
    FibrationQuery q;
    q.kind = FibrationKind::Elliptic;
    CHECK_FALSE(fibration_excluded(4, 6, q).excluded);
}

TEST_CASE("genus-1 and abelian exclusions carry exact witnesses") {
    FibrationQuery g1;
    g1.kind = FibrationKind::Genus1;
    g1.delta = 2;
    auto v1 = fibration_excluded(3, 5, g1);
    REQUIRE(v1.excluded);
    REQUIRE(v1.witness.has_value());
    // m = 1: (1*2 + 1)^2 = 9 = 4 mod 5
    CHECK(v1.witness->p == 5);
    CHECK(v1.witness->m == 1);
    CHECK(v1.witness->degree == 9);
    CHECK(v1.witness->residue == 4);

    FibrationQuery ab;
    ab.kind = FibrationKind::Abelian;
    ab.g = 2;
    // fourth powers mod 5 are all 0 or 1, so (3,5) cannot exclude surfaces
    CHECK_FALSE(fibration_excluded(3, 5, ab).excluded);
    // (3,7) brings in p = 7 where 2^4 = 16 = 2 mod 7
    auto v2 = fibration_excluded(3, 7, ab);
    REQUIRE(v2.excluded);
    REQUIRE(v2.witness.has_value());
    CHECK(v2.witness->p == 7);
    CHECK(v2.witness->m == 2);
    CHECK(v2.witness->degree == 16);
    CHECK(v2.witness->residue == 2);

    FibrationQuery bad;
    bad.kind = FibrationKind::Genus1;
    bad.delta = 0;
    CHECK_THROWS_AS(fibration_excluded(3, 5, bad), InvalidScenario);
}

TEST_CASE("root and iteration bounds agree with brute force") {
    SplitMix64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        uint64_t lambda = 1 + rng.below(1'000'000);
        uint32_t n = 1 + static_cast<uint32_t>(rng.below(10));
        NthRootBound b = kt_pullback_bound(lambda, n);
        uint64_t a = b.minimal_integer();
        auto pw = [&](uint64_t x) {
            unsigned __int128 acc = 1;
            for (uint32_t i = 0; i < n; ++i) {
                acc *= x;
                if (acc > (unsigned __int128)1 << 100) return (unsigned __int128)1 << 100;
            }
            return acc;
        };
        CHECK(pw(a) >= lambda);
        if (a > 1) CHECK(pw(a - 1) < lambda);
        CHECK(b.is_at_least(a));
        if (a > 1) CHECK_FALSE(b.is_at_least(a - 1));
    }
    CHECK(kt_pullback_bound(1000, 3).minimal_integer() == 10);
    CHECK(kt_pullback_bound(1001, 3).minimal_integer() == 11);
    for (int trial = 0; trial < 300; ++trial) {
        uint64_t lambda = 2 + rng.below(50);
        uint32_t n = 1 + static_cast<uint32_t>(rng.below(6));
        uint64_t S = 1 + rng.below(1000);
        uint64_t c = 1 + rng.below(std::max<uint64_t>(S, 2));
        uint64_t k = iteration_bound(lambda, n, S, c);
        // lambda^k * c^n > S^n, minimal; everything fits in 128 bits here
        // because k <= 60 and the saturation cutoff exceeds S^n
        auto holds = [&](uint64_t kk) {
            unsigned __int128 lhs = 1;
            const unsigned __int128 cap = (unsigned __int128)1 << 110;
            for (uint64_t i = 0; i < kk; ++i) {
                lhs *= lambda;
                if (lhs > cap) return true;
            }
            for (uint32_t i = 0; i < n; ++i) {
                lhs *= c;
                if (lhs > cap) return true;
            }
            unsigned __int128 rhs = 1;
            for (uint32_t i = 0; i < n; ++i) rhs *= S;
            return lhs > rhs;
        };
        CHECK(holds(k));
        if (k > 1) CHECK_FALSE(holds(k - 1));
    }
    CHECK_THROWS_AS(iteration_bound(1, 3, 10, 1), InvalidScenario);
}

TEST_CASE("ledger congruence holds when every flag is set") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        DegreeLedger led;
        led.modulus = 2 + rng.below(97);
        led.main_degree = rng.below(1'000'000);
        size_t ne = rng.below(6);
        std::vector<bool> flags;
        for (size_t i = 0; i < ne; ++i) {
            led.exceptional_degrees.push_back(led.modulus * rng.below(1000));
            flags.push_back(true);
        }
        LedgerStatement st = specialize_ledger(led, flags);
        CHECK(st.congruent);
        CHECK(st.total_residue == st.main_residue);
        uint64_t total = led.main_degree;
        for (uint64_t e : led.exceptional_degrees) total += e;
        CHECK(st.total == total);
    }
}

TEST_CASE("ledger flags that lie are called out") {
    DegreeLedger led;
    led.modulus = 5;
    led.main_degree = 7;
    led.exceptional_degrees = {10, 13};  // 13 is not divisible by 5
    CHECK_THROWS_WITH_AS(specialize_ledger(led, {true, true}),
                         doctest::Contains("flag violated"), InvalidScenario);
    CHECK_THROWS_AS(specialize_ledger(led, {true}), InvalidScenario);  // flag count mismatch
    // an unflagged non-multiple is fine, it just breaks the congruence
    LedgerStatement st = specialize_ledger(led, {true, false});
    CHECK_FALSE(st.congruent);
}

TEST_CASE("the headline table carries its own cross-check") {
    auto rows = intro_table();
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].n == 3);
    CHECK(rows[0].d == 5);
    CHECK(rows[0].label == "Calabi-Yau");
    CHECK(rows[0].moduli == std::vector<uint32_t>{5});
    CHECK(rows[1].n == 4);
    CHECK(rows[1].d == 6);
    CHECK(rows[1].label == "Calabi-Yau");
    CHECK(rows[1].moduli == std::vector<uint32_t>{3});
    CHECK(rows[2].n == 5);
    CHECK(rows[2].d == 6);
    CHECK(rows[2].label == "Fano");
    CHECK(rows[2].moduli == std::vector<uint32_t>{3});
    CHECK(rows[3].n == 5);
    CHECK(rows[3].d == 7);
    CHECK(rows[3].label == "Calabi-Yau");
    CHECK((rows[3].moduli == std::vector<uint32_t>{3, 7}));
}
