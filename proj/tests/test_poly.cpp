// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cycres/cfpoly.hpp"
#include "cycres/errors.hpp"
#include "cycres/multipoly.hpp"
#include "test_util.hpp"

using namespace cycres;
using testutil::agree;
using testutil::random_element;
using testutil::random_poly;

namespace {
RingPtr ring34() { return Ring::create(3, 4, 3, 14, 1); }
}  // namespace

TEST_CASE("relation monomials are folded into pi powers") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"u", "v", "w"}, std::pair<size_t, size_t>{0, 1});
    MultiPoly f(P);
    f.add_term({2, 3, 1}, R->one());  // u^2 v^3 w = pi^2 v w
    REQUIRE(f.term_count() == 1);
    const auto& [e, c] = *f.terms().begin();
    CHECK(e == std::vector<uint16_t>{0, 1, 1});
    CHECK(c == R->pi_pow(2));
}

TEST_CASE("absent coefficients read as exact zero") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"x", "y"});
    MultiPoly f(P);
    CHECK(f.coeff({1, 0}).is_zero());
    CHECK(f.coeff({1, 0}).prec() == R->N());
}

TEST_CASE("polynomial ring laws on random data") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"x", "y", "z"});
    SplitMix64 rng(3);
    for (int i = 0; i < 60; ++i) {
        MultiPoly a = random_poly(rng, P, 4, 3);
        MultiPoly b = random_poly(rng, P, 4, 3);
        MultiPoly c = random_poly(rng, P, 3, 2);
        CHECK(agree(a + b, b + a));
        CHECK(agree(a * b, b * a));
        CHECK(agree((a + b) * c, a * c + b * c));
        CHECK(agree((a * b) * c, a * (b * c)));
        CHECK(agree(a - a, MultiPoly(P)));
    }
}

TEST_CASE("variable division undoes multiplication, borrowing across the relation") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"u", "v"}, std::pair<size_t, size_t>{0, 1});
    SplitMix64 rng(17);
    for (int i = 0; i < 40; ++i) {
        MultiPoly f = random_poly(rng, P, 4, 3);
        MultiPoly uf = f * MultiPoly::variable(P, 0);
        CHECK(agree(uf.div_var_pow(0, 1), f));
    }
    // borrow: pi * v  divided by u  is  v^2  (since pi = u v)
    MultiPoly g(P);
    g.add_term({0, 1}, R->pi_pow(1));
    MultiPoly h = g.div_var_pow(0, 1);
    REQUIRE(h.term_count() == 1);
    CHECK(h.terms().begin()->first == std::vector<uint16_t>{0, 2});
    CHECK(h.terms().begin()->second == R->one().with_prec(R->N() - 1));
    // division that cannot be repaired by the relation refuses
    MultiPoly bad(P);
    bad.add_term({0, 1}, R->one());
    CHECK_THROWS_AS(bad.div_var_pow(0, 1), InexactDivision);
}

TEST_CASE("substitution is a ring homomorphism") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"x", "y"});
    PolyRingPtr Q = make_poly_ring(R, {"s", "t"});
    SplitMix64 rng(23);
    for (int i = 0; i < 30; ++i) {
        std::vector<MultiPoly> im = {random_poly(rng, Q, 3, 2), random_poly(rng, Q, 3, 2)};
        MultiPoly a = random_poly(rng, P, 3, 2);
        MultiPoly b = random_poly(rng, P, 3, 2);
        CHECK(agree((a + b).substitute(Q, im), a.substitute(Q, im) + b.substitute(Q, im)));
        CHECK(agree((a * b).substitute(Q, im), a.substitute(Q, im) * b.substitute(Q, im)));
    }
}

TEST_CASE("central fiber drops every positive pi-order") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"x", "y"});
    MultiPoly f(P);
    f.add_term({2, 0}, R->one());
    f.add_term({0, 1}, R->pi_pow(1));      // dies in the fiber
    f.add_term({1, 1}, R->from_int(2));
    CFPoly cf = f.central_fiber();
    CHECK(cf.terms().size() == 2);
    CHECK(cf.to_string().find("y") != std::string::npos);
    // exceptional restriction also removes the variable from the list
    CFPoly ex = f.exceptional_cf(1);
    CHECK(ex.vars() == std::vector<std::string>{"x"});
    CHECK(ex.terms().size() == 1);
}

TEST_CASE("graded parts partition the equation") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"x1", "x2", "y"});
    SplitMix64 rng(31);
    for (int i = 0; i < 30; ++i) {
        MultiPoly f = random_poly(rng, P, 6, 3);
        GradedParts g = grade_in_x(f, 2);
        CHECK(agree(f, g.constant + g.linear + g.quadratic + g.cubic_plus));
        for (const auto& [e, c] : g.linear.terms()) CHECK(e[0] + e[1] == 1);
        for (const auto& [e, c] : g.quadratic.terms()) CHECK(e[0] + e[1] == 2);
    }
}

TEST_CASE("scalar expansion makes pi explicit") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"x"});
    MultiPoly f(P);
    f.add_term({1}, R->one() + R->pi_pow(1));  // (1 + pi) x
    CFPoly e = f.expand_scalars(R->field(), {0, 1, 2}, 2);
    // x + pi*x, variables [x, pi]
    CHECK(e.vars() == std::vector<std::string>{"x", "pi"});
    CHECK(e.terms().size() == 2);
}

// --- residue polynomials -----------------------------------------------------

TEST_CASE("derivations satisfy the Leibniz rule") {
    FqFieldPtr F = FqField::create(3, 2);
    SplitMix64 rng(41);
    std::vector<std::string> vars{"x", "y", "z"};
    auto rand_cf = [&](size_t terms) {
        CFPoly f(F, vars);
        for (size_t t = 0; t < terms; ++t)
            f.add_term({static_cast<uint16_t>(rng.below(3)), static_cast<uint16_t>(rng.below(3)),
                        static_cast<uint16_t>(rng.below(3))},
                       static_cast<Fq>(rng.below(F->q())));
        return f;
    };
    for (int i = 0; i < 40; ++i) {
        CFPoly f = rand_cf(4), g = rand_cf(4);
        auto df = f.jacobian(), dg = g.jacobian(), dfg = (f * g).jacobian();
        for (size_t v = 0; v < vars.size(); ++v)
            CHECK((dfg[v] - (f * dg[v] + g * df[v])).is_zero());
    }
}

TEST_CASE("translation shifts evaluation") {
    FqFieldPtr F = FqField::create(5, 1);
    SplitMix64 rng(43);
    std::vector<std::string> vars{"x", "y"};
    for (int i = 0; i < 40; ++i) {
        CFPoly f(F, vars);
        for (int t = 0; t < 4; ++t)
            f.add_term({static_cast<uint16_t>(rng.below(4)), static_cast<uint16_t>(rng.below(4))},
                       static_cast<Fq>(rng.below(5)));
        std::vector<Fq> a{static_cast<Fq>(rng.below(5)), static_cast<Fq>(rng.below(5))};
        std::vector<Fq> x{static_cast<Fq>(rng.below(5)), static_cast<Fq>(rng.below(5))};
        CFPoly gf = f.translate(a);
        CHECK(gf.eval(x) == f.eval({F->add(x[0], a[0]), F->add(x[1], a[1])}));
    }
}

TEST_CASE("homogenization restores the equation at 1") {
    FqFieldPtr F = FqField::create(3, 1);
    std::vector<std::string> vars{"x", "y"};
    CFPoly f(F, vars);
    f.add_term({2, 0}, 1);
    f.add_term({0, 1}, 2);
    f.add_term({0, 0}, 1);
    CFPoly h = f.homogenize("th", 2);
    CHECK(h.vars() == std::vector<std::string>{"x", "y", "th"});
    for (const auto& [e, c] : h.terms()) CHECK(e[0] + e[1] + e[2] == 2);
    // setting th = 1 recovers f
    CFPoly x = CFPoly::variable(F, vars, 0), y = CFPoly::variable(F, vars, 1);
    CFPoly one = CFPoly::constant(F, vars, 1);
    CHECK((h.substitute({x, y, one}) - f).is_zero());
}

TEST_CASE("point enumeration visits q^n points and honors the budget") {
    FqFieldPtr F = FqField::create(3, 1);
    uint64_t count = 0;
    for_each_point(*F, 3, 1000, [&](const std::vector<Fq>&) {
        ++count;
        return true;
    });
    CHECK(count == 27);
    CHECK_THROWS_AS(
        for_each_point(*F, 10, 1000, [&](const std::vector<Fq>&) { return true; }),
        BudgetExceeded);
}

TEST_CASE("hessian rank and determinant on known forms") {
    FqFieldPtr F = FqField::create(3, 1);
    std::vector<std::string> vars{"x1", "x2", "x3"};
    CFPoly f(F, vars);  // x1^2 + x2^2 (rank 2 in odd characteristic)
    f.add_term({2, 0, 0}, 1);
    f.add_term({0, 2, 0}, 1);
    auto H = hessian_matrix(f, 3);
    CHECK(fq_matrix_rank(*F, H) == 2);
    CHECK(F->is_zero(fq_matrix_det(*F, H)));

    FqFieldPtr F2 = FqField::create(2, 1);
    CFPoly g(F2, vars);  // x1 x2 : nondegenerate alternating 2x2 block
    g.add_term({1, 1, 0}, 1);
    auto A = hessian_matrix(g, 2);
    CHECK(fq_matrix_rank(*F2, A) == 2);
}

TEST_CASE("polynomial text forms round-trip") {
    RingPtr R = ring34();
    PolyRingPtr P = make_poly_ring(R, {"x", "y"});
    SplitMix64 rng(47);
    for (int i = 0; i < 40; ++i) {
        MultiPoly f = random_poly(rng, P, 4, 3);
        CHECK(agree(MultiPoly::parse(P, f.to_string()), f));
    }
    CHECK(MultiPoly::parse(P, "0").is_zero());
    FqFieldPtr F = FqField::create(3, 2);
    std::vector<std::string> vars{"x", "y"};
    for (int i = 0; i < 40; ++i) {
        CFPoly f(F, vars);
        for (int t = 0; t < 4; ++t)
            f.add_term({static_cast<uint16_t>(rng.below(4)), static_cast<uint16_t>(rng.below(4))},
                       static_cast<Fq>(rng.below(F->q())));
        CHECK((CFPoly::parse(F, vars, f.to_string()) - f).is_zero());
    }
}
