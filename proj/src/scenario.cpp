// SPDX-License-Identifier: MIT
#include "cycres/scenario.hpp"

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cycres/errors.hpp"

namespace cycres {

namespace {

uint32_t extension_degree(uint32_t q, uint32_t p) {
    uint32_t m = 0, t = 1;
    while (t < q) {
        t *= p;
        ++m;
    }
    if (t != q || m == 0) throw InvalidScenario("q must be a positive power of p");
    return m;
}

// One common ring + polynomial ring for a scenario's parameters.
struct Realized {
    RingPtr R;
    PolyRingPtr ring;
};

Realized make_rings(const Scenario& sc) {
    uint32_t N = sc.N ? sc.N : 4 * sc.k + 10;
    FqFieldPtr F = FqField::create(sc.p, extension_degree(sc.q, sc.p));
    Fq tau = F->parse(sc.tau);
    RingPtr R = Ring::create(sc.p, sc.k, sc.q, N, tau);
    std::vector<std::string> vars;
    for (uint32_t i = 1; i <= sc.n; ++i) vars.push_back("x" + std::to_string(i));
    vars.push_back("y");
    return Realized{R, make_poly_ring(R, vars)};
}

// --- random draws (order is part of the format: delta, then the blocks in
// --- the order they appear in the Scenario struct) -------------------------

DvrElement draw_element(SplitMix64& rng, const RingPtr& R, uint32_t zero_low_digits,
                        bool unit) {
    std::vector<Fq> d(R->N(), 0);
    for (uint32_t i = 0; i < R->N(); ++i) {
        if (i < zero_low_digits) continue;
        d[i] = static_cast<Fq>(rng.below(R->q()));
    }
    if (unit) d[0] = static_cast<Fq>(1 + rng.below(R->q() - 1));
    return R->from_digits(std::move(d));
}

// Which y-degrees the higher tail may use.  XOnly: the odd-p tail lives in
// x alone (pure y-powers are the g-block's job, and mixed x*y^j monomials
// would leak into exceptional-divisor equations under the weighted charts).
// AnyY: dx = 0 allowed (char 2 admits pure y^3 and up).
enum class TailMode { XOnly, AnyY };

MultiPoly draw_tail(SplitMix64& rng, const PolyRingPtr& ring, uint32_t n, TailMode mode) {
    // Terms of total degree 3 or 4 with coefficients of ord >= 1, so the
    // tail never contributes to any central fiber away from the chart
    // origin.
    MultiPoly f(ring);
    size_t terms = n + 2;
    for (size_t t = 0; t < terms; ++t) {
        uint32_t total = 3 + static_cast<uint32_t>(rng.below(2));
        uint32_t dy = 0;
        if (mode == TailMode::AnyY) dy = static_cast<uint32_t>(rng.below(total + 1));
        uint32_t dx = total - dy;
        std::vector<uint16_t> e(ring->vars.size(), 0);
        for (uint32_t i = 0; i < dx; ++i) e[rng.below(n)]++;
        e[n] = static_cast<uint16_t>(dy);
        DvrElement c = draw_element(rng, ring->R, 1, false);
        if (c.is_zero_at_prec()) continue;
        f.add_term(std::move(e), std::move(c));
    }
    return f;
}

MultiPoly parse_or_zero(const PolyRingPtr& ring, const std::string& text) {
    return text.empty() ? MultiPoly(ring) : MultiPoly::parse(ring, text);
}

}  // namespace

Scenario generate_scenario(const std::string& kind, uint32_t p, uint32_t k, uint32_t q,
                           uint32_t N, uint32_t n, const std::string& tau, uint64_t seed) {
    Scenario sc;
    sc.kind = kind;
    sc.seed = seed;
    sc.p = p;
    sc.k = k;
    sc.q = q;
    sc.N = N ? N : 4 * k + 10;
    sc.n = n;
    sc.tau = tau.empty() ? "1" : tau;
    if (kind != "f0" && kind != "raw" && kind != "char2")
        throw InvalidScenario("unknown scenario kind '" + kind + "'");
    if (kind == "char2") {
        if (p != 2) throw InvalidScenario("char2 scenarios need p = 2");
        if (n % 2 != 0 || n == 0)
            throw InvalidScenario("char2 scenarios need an even x-block (alternating form)");
    } else {
        if (p < 3) throw InvalidScenario("odd-p scenarios need p >= 3");
    }

    Realized rz = make_rings(sc);
    const RingPtr& R = rz.R;
    const PolyRingPtr& ring = rz.ring;
    SplitMix64 rng(seed);

    sc.delta = draw_element(rng, R, 0, true).to_string();

    if (kind == "f0") {
        for (uint32_t j = 0; j + 2 <= p - 1; ++j)
            sc.g.push_back(draw_element(rng, R, 0, false).to_string());
        MultiPoly f2(ring);
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = i; j < n; ++j) {
                std::vector<uint16_t> e(ring->vars.size(), 0);
                e[i]++;
                e[j]++;
                f2.add_term(std::move(e), draw_element(rng, R, 0, false));
            }
        sc.f2 = f2.to_string();
        sc.f3 = draw_tail(rng, ring, n, TailMode::XOnly).to_string();
    } else if (kind == "raw") {
        // Linear slot of ord > k/2 so completing the square perturbs the
        // constant term by ord > k only (shift_root then polishes delta).
        uint32_t h = (k + 2) / 2;
        MultiPoly f1(ring);
        for (uint32_t i = 0; i < n; ++i) {
            std::vector<uint16_t> e(ring->vars.size(), 0);
            e[i] = 1;
            f1.add_term(std::move(e), draw_element(rng, R, h, false));
        }
        sc.f1 = f1.to_string();
        // Quadratic slot: residue P^T P (a square-discriminant form splits
        // over F_q, so diagonalization never needs a field extension) plus
        // an ord >= 1 symmetric perturbation.
        const FqFieldPtr& F = R->field();
        uint32_t nn = n;
        std::vector<std::vector<Fq>> P;
        do {
            P.assign(nn, std::vector<Fq>(nn, 0));
            for (auto& row : P)
                for (auto& c : row) c = static_cast<Fq>(rng.below(R->q()));
        } while (F->is_zero(fq_matrix_det(*F, P)));
        std::vector<std::vector<Fq>> M(nn, std::vector<Fq>(nn, 0));
        for (uint32_t i = 0; i < nn; ++i)
            for (uint32_t j = 0; j < nn; ++j)
                for (uint32_t l = 0; l < nn; ++l)
                    M[i][j] = F->add(M[i][j], F->mul(P[l][i], P[l][j]));
        MultiPoly qf(ring);
        for (uint32_t i = 0; i < nn; ++i)
            for (uint32_t j = i; j < nn; ++j) {
                Fq base = i == j ? M[i][i] : F->add(M[i][j], M[i][j]);
                DvrElement c = R->from_fq(base) + draw_element(rng, R, 1, false);
                std::vector<uint16_t> e(ring->vars.size(), 0);
                e[i]++;
                e[j]++;
                qf.add_term(std::move(e), std::move(c));
            }
        sc.qform = qf.to_string();
        sc.f3 = draw_tail(rng, ring, n, TailMode::XOnly).to_string();
    } else {  // char2
        MultiPoly f1(ring);
        for (uint32_t i = 0; i < n; ++i) {
            std::vector<uint16_t> e(ring->vars.size(), 0);
            e[i] = 1;
            f1.add_term(std::move(e), draw_element(rng, R, 0, false));
        }
        sc.f1 = f1.to_string();
        MultiPoly qf(ring);
        for (uint32_t i = 0; i + 1 < n; i += 2) {
            std::vector<uint16_t> e(ring->vars.size(), 0);
            e[i]++;
            e[i + 1]++;
            qf.add_term(std::move(e), R->one());
        }
        for (uint32_t i = 0; i < n; ++i) {
            std::vector<uint16_t> e(ring->vars.size(), 0);
            e[i] = 2;
            qf.add_term(std::move(e), draw_element(rng, R, 0, false));
        }
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = i + 1; j < n; ++j) {
                std::vector<uint16_t> e(ring->vars.size(), 0);
                e[i]++;
                e[j]++;
                qf.add_term(std::move(e), draw_element(rng, R, 1, false));
            }
        sc.qform = qf.to_string();
        sc.f3 = draw_tail(rng, ring, n, TailMode::AnyY).to_string();
    }
    return sc;
}

LocalModel realize(const Scenario& sc) {
    Realized rz = make_rings(sc);
    const RingPtr& R = rz.R;
    const PolyRingPtr& ring = rz.ring;
    size_t y = sc.n;
    DvrElement delta = DvrElement::parse(R, sc.delta);
    if (!delta.is_unit()) throw InvalidScenario("delta must be a unit");
    DvrElement pe = R->p_elem();

    if (sc.kind == "f0") {
        MultiPoly f(ring);
        std::vector<uint16_t> e(ring->vars.size(), 0);
        e[y] = static_cast<uint16_t>(sc.p);
        f.add_term(e, R->one());
        e.assign(ring->vars.size(), 0);
        e[y] = 1;
        f.add_term(e, pe * delta.pow(sc.p - 1));
        for (uint32_t i = 0; i < sc.n; ++i) {
            e.assign(ring->vars.size(), 0);
            e[i] = 2;
            f.add_term(e, R->one());
        }
        for (size_t j = 0; j < sc.g.size(); ++j) {
            e.assign(ring->vars.size(), 0);
            e[y] = static_cast<uint16_t>(2 + j);
            f.add_term(e, pe * DvrElement::parse(R, sc.g[j]));
        }
        f = f + parse_or_zero(ring, sc.f2).scale(pe) + parse_or_zero(ring, sc.f3);
        LocalModel m;
        m.ring = ring;
        m.f = std::move(f);
        m.n = sc.n;
        m.tag = ModelTag::Shifted;
        return m;
    }
    if (sc.kind == "raw") {
        // s = u + f1 + qform + f3 with u = -(-delta)^p, so delta is a p-th
        // root of the constant term by construction.
        DvrElement u = -((-delta).pow(sc.p));
        MultiPoly s = MultiPoly::constant(ring, u) + parse_or_zero(ring, sc.f1) +
                      parse_or_zero(ring, sc.qform) + parse_or_zero(ring, sc.f3);
        return make_cover(ring, sc.n, s);
    }
    if (sc.kind == "char2") {
        MultiPoly f(ring);
        std::vector<uint16_t> e(ring->vars.size(), 0);
        e[y] = 2;
        f.add_term(e, R->one());
        e.assign(ring->vars.size(), 0);
        e[y] = 1;
        f.add_term(e, pe * delta);
        f = f + parse_or_zero(ring, sc.f1).scale(pe) + parse_or_zero(ring, sc.qform) +
            parse_or_zero(ring, sc.f3);
        LocalModel m;
        m.ring = ring;
        m.f = std::move(f);
        m.n = sc.n;
        m.tag = ModelTag::Shifted;
        m.char2_j = 0;
        return m;
    }
    throw InvalidScenario("unknown scenario kind '" + sc.kind + "'");
}

PreparedModel prepare(const Scenario& sc) {
    PreparedModel out{realize(sc), {}};
    if (sc.kind != "raw") return out;
    const RingPtr& R = out.model.ring->R;
    PipelineStep d = diagonalize(out.model);
    PipelineStep l = kill_linear(d.model, R->N());
    PipelineStep s = shift_root(l.model, DvrElement::parse(R, sc.delta));
    out.model = s.model;
    out.pipeline = {std::move(d), std::move(l), std::move(s)};
    return out;
}

std::string scenario_to_json(const Scenario& sc) {
    nlohmann::ordered_json j;
    j["prng"] = sc.prng;
    j["seed"] = sc.seed;
    j["kind"] = sc.kind;
    j["p"] = sc.p;
    j["k"] = sc.k;
    j["q"] = sc.q;
    j["N"] = sc.N;
    j["n"] = sc.n;
    j["tau"] = sc.tau;
    j["delta"] = sc.delta;
    j["g"] = sc.g;
    j["f1"] = sc.f1;
    j["f2"] = sc.f2;
    j["qform"] = sc.qform;
    j["f3"] = sc.f3;
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Scenario sc;
    sc.prng = j.at("prng").get<std::string>();
    if (sc.prng != "splitmix64-v1")
        throw InvalidScenario("unknown prng '" + sc.prng + "' (expected splitmix64-v1)");
    sc.seed = j.at("seed").get<uint64_t>();
    sc.kind = j.at("kind").get<std::string>();
    sc.p = j.at("p").get<uint32_t>();
    sc.k = j.at("k").get<uint32_t>();
    sc.q = j.at("q").get<uint32_t>();
    sc.N = j.at("N").get<uint32_t>();
    sc.n = j.at("n").get<uint32_t>();
    sc.tau = j.at("tau").get<std::string>();
    sc.delta = j.at("delta").get<std::string>();
    sc.g = j.value("g", std::vector<std::string>{});
    sc.f1 = j.value("f1", std::string{});
    sc.f2 = j.value("f2", std::string{});
    sc.qform = j.value("qform", std::string{});
    sc.f3 = j.value("f3", std::string{});
    return sc;
}

}  // namespace cycres
