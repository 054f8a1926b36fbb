// SPDX-License-Identifier: MIT
#include "cycres/cyclic_cover.hpp"

#include <algorithm>
#include <sstream>

#include "cycres/errors.hpp"

namespace cycres {

std::string to_string(ModelTag tag) {
    switch (tag) {
        case ModelTag::Raw: return "Raw";
        case ModelTag::Diagonalized: return "Diagonalized";
        case ModelTag::NormalForm: return "NormalForm";
        case ModelTag::Shifted: return "Shifted";
        case ModelTag::FTemplate: return "F";
        case ModelTag::GTemplate: return "G";
    }
    return "?";
}

LocalModel make_cover(const PolyRingPtr& model_ring, uint32_t n, const MultiPoly& s) {
    if (model_ring->vars.size() != n + 1)
        throw InvalidScenario("make_cover: ring must have n x-variables plus y");
    if (s.degree_in(n) > 0) throw InvalidScenario("make_cover: branch term s must not involve y");
    LocalModel m;
    m.ring = model_ring;
    m.n = n;
    m.tag = ModelTag::Raw;
    std::vector<uint16_t> yp(n + 1, 0);
    yp[n] = static_cast<uint16_t>(model_ring->R->p());
    MultiPoly f = s;
    f.add_term(yp, model_ring->R->one());
    m.f = f;
    return m;
}

namespace {

// x-quadratic form of f (terms with x-degree 2, y-degree 0) as a symmetric
// matrix over R; off-diagonal entries are half the cross coefficients for
// odd p.
std::vector<std::vector<DvrElement>> quad_matrix(const LocalModel& model) {
    const auto& R = model.ring->R;
    uint32_t n = model.n;
    DvrElement half = R->p() == 2 ? R->zero() : R->from_int(2).inverse();
    std::vector<std::vector<DvrElement>> B(n, std::vector<DvrElement>(n, R->zero()));
    for (auto& [e, c] : model.f.terms()) {
        if (e[model.y_index()] != 0) continue;
        int dx = 0;
        for (uint32_t i = 0; i < n; ++i) dx += e[i];
        if (dx != 2) continue;
        // locate the support
        int i1 = -1, i2 = -1;
        for (uint32_t i = 0; i < n; ++i) {
            if (e[i] == 2) i1 = i2 = static_cast<int>(i);
            if (e[i] == 1) (i1 < 0 ? i1 : i2) = static_cast<int>(i);
        }
        if (i1 == i2) {
            B[i1][i1] = c;
        } else {
            DvrElement hc = c * half;
            B[i1][i2] = hc;
            B[i2][i1] = hc;
        }
    }
    return B;
}

std::vector<MultiPoly> identity_images(const PolyRingPtr& ring) {
    std::vector<MultiPoly> img;
    for (size_t i = 0; i < ring->vars.size(); ++i) img.push_back(MultiPoly::variable(ring, i));
    return img;
}

// images of the x-block under x_i -> sum_j P[i][j] x_j (y fixed)
std::vector<MultiPoly> matrix_images(const PolyRingPtr& ring, uint32_t n,
                                     const std::vector<std::vector<DvrElement>>& P) {
    std::vector<MultiPoly> img = identity_images(ring);
    for (uint32_t i = 0; i < n; ++i) {
        MultiPoly xi(ring);
        for (uint32_t j = 0; j < n; ++j) {
            std::vector<uint16_t> e(ring->vars.size(), 0);
            e[j] = 1;
            xi.add_term(e, P[i][j]);
        }
        img[i] = xi;
    }
    return img;
}

std::vector<std::vector<DvrElement>> mat_mul(const RingPtr& R,
                                             const std::vector<std::vector<DvrElement>>& A,
                                             const std::vector<std::vector<DvrElement>>& B) {
    size_t n = A.size();
    std::vector<std::vector<DvrElement>> C(n, std::vector<DvrElement>(n, R->zero()));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            DvrElement acc = R->zero();
            for (size_t t = 0; t < n; ++t) acc = acc + A[i][t] * B[t][j];
            C[i][j] = acc;
        }
    return C;
}

// Inverse of a matrix whose residue is invertible (Gauss-Jordan with unit
// pivoting).
std::vector<std::vector<DvrElement>> mat_inv(const RingPtr& R,
                                             std::vector<std::vector<DvrElement>> A) {
    size_t n = A.size();
    std::vector<std::vector<DvrElement>> I(n, std::vector<DvrElement>(n, R->zero()));
    for (size_t i = 0; i < n; ++i) I[i][i] = R->one();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && !A[piv][col].is_unit()) ++piv;
        if (piv == n) throw CycresError("mat_inv: residue-singular matrix");
        std::swap(A[piv], A[col]);
        std::swap(I[piv], I[col]);
        DvrElement inv = A[col][col].inverse();
        for (size_t j = 0; j < n; ++j) {
            A[col][j] = A[col][j] * inv;
            I[col][j] = I[col][j] * inv;
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col) continue;
            DvrElement c = A[row][col];
            if (c.is_zero_at_prec()) continue;
            for (size_t j = 0; j < n; ++j) {
                A[row][j] = A[row][j] - c * A[col][j];
                I[row][j] = I[row][j] - c * I[col][j];
            }
        }
    }
    return I;
}

// Solve B z = rhs for z, B residue-invertible.
std::vector<DvrElement> solve_linear(const RingPtr& R, std::vector<std::vector<DvrElement>> B,
                                     std::vector<DvrElement> rhs) {
    size_t n = B.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && !B[piv][col].is_unit()) ++piv;
        if (piv == n) throw CycresError("solve_linear: residue-singular matrix");
        std::swap(B[piv], B[col]);
        std::swap(rhs[piv], rhs[col]);
        DvrElement inv = B[col][col].inverse();
        for (size_t j = 0; j < n; ++j) B[col][j] = B[col][j] * inv;
        rhs[col] = rhs[col] * inv;
        for (size_t row = 0; row < n; ++row) {
            if (row == col) continue;
            DvrElement c = B[row][col];
            if (c.is_zero_at_prec()) continue;
            for (size_t j = 0; j < n; ++j) B[row][j] = B[row][j] - c * B[col][j];
            rhs[row] = rhs[row] - c * rhs[col];
        }
    }
    return rhs;
}

}  // namespace

std::vector<std::vector<Fq>> check_nondegenerate(const LocalModel& model) {
    const auto& R = model.ring->R;
    CFPoly cf = model.f.central_fiber();
    // quadratic part in x only (y-free)
    CFPoly quad(cf.field(), cf.vars());
    for (auto& [e, c] : cf.terms()) {
        if (e[model.y_index()] != 0) continue;
        int dx = 0;
        for (uint32_t i = 0; i < model.n; ++i) dx += e[i];
        if (dx == 2) quad.add_term(e, c);
    }
    auto H = hessian_matrix(quad, model.n);
    if (R->p() == 2) {
        // alternating form: entries are the cross coefficients themselves
        for (uint32_t i = 0; i < model.n; ++i)
            for (uint32_t j = 0; j < model.n; ++j)
                H[i][j] = i == j ? 0 : quad.coeff([&] {
                    std::vector<uint16_t> e(cf.nvars(), 0);
                    e[i] += 1;
                    e[j] += 1;
                    return e;
                }());
    }
    uint32_t rank = fq_matrix_rank(*R->field(), H);
    if (rank != model.n) {
        std::ostringstream os;
        os << "check_nondegenerate: residue quadratic part has rank " << rank << " < " << model.n;
        if (R->p() == 2 && model.n % 2 == 1)
            os << " (alternating forms need an even number of x-variables)";
        throw InvalidScenario(os.str());
    }
    return H;
}

PipelineStep diagonalize(const LocalModel& model) {
    const auto& R = model.ring->R;
    const auto& F = R->field();
    if (R->p() == 2) throw InvalidScenario("diagonalize: only the odd-p pipeline diagonalizes");
    check_nondegenerate(model);
    uint32_t n = model.n;

    // --- residue stage: congruence P0^T B0 P0 = I over F_q ----------------
    auto Bq = [&] {
        auto BR = quad_matrix(model);
        std::vector<std::vector<Fq>> B(n, std::vector<Fq>(n, 0));
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = 0; j < n; ++j) B[i][j] = BR[i][j].residue();
        return B;
    }();
    // columns of P0 are built one at a time
    std::vector<std::vector<Fq>> basis(n, std::vector<Fq>(n, 0));
    for (uint32_t i = 0; i < n; ++i) basis[i][i] = 1;  // basis[v][coord]
    auto bform = [&](const std::vector<Fq>& u, const std::vector<Fq>& w) {
        Fq acc = 0;
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = 0; j < n; ++j)
                acc = F->add(acc, F->mul(F->mul(u[i], Bq[i][j]), w[j]));
        return acc;
    };
    std::vector<std::vector<Fq>> cols;
    std::vector<Fq> diag;
    std::vector<std::vector<Fq>> pool = basis;
    while (cols.size() < n) {
        // find a pool vector of nonzero norm, polarizing if necessary
        int found = -1;
        for (size_t i = 0; i < pool.size(); ++i)
            if (!F->is_zero(bform(pool[i], pool[i]))) {
                found = static_cast<int>(i);
                break;
            }
        if (found < 0) {
            bool fixed = false;
            for (size_t i = 0; i < pool.size() && !fixed; ++i)
                for (size_t j = i + 1; j < pool.size() && !fixed; ++j)
                    if (!F->is_zero(bform(pool[i], pool[j]))) {
                        for (uint32_t t = 0; t < n; ++t) pool[i][t] = F->add(pool[i][t], pool[j][t]);
                        found = static_cast<int>(i);
                        fixed = true;
                    }
            if (!fixed) throw CycresError("diagonalize: degenerate form slipped past the rank check");
        }
        std::vector<Fq> v = pool[found];
        pool.erase(pool.begin() + found);
        Fq c = bform(v, v);
        Fq cinv = F->inv(c);
        for (auto& w : pool) {
            Fq t = F->mul(bform(v, w), cinv);
            for (uint32_t i = 0; i < n; ++i) w[i] = F->sub(w[i], F->mul(t, v[i]));
        }
        cols.push_back(v);
        diag.push_back(c);
    }
    // normalize squares, pair leftover non-squares
    auto sqrt_of = [&](Fq c) -> std::optional<Fq> {
        for (Fq e = 0; e < F->q(); ++e)
            if (F->mul(e, e) == c) return e;
        return std::nullopt;
    };
    std::vector<uint32_t> nonsquare;
    for (uint32_t i = 0; i < n; ++i) {
        if (auto e = sqrt_of(diag[i])) {
            Fq einv = F->inv(*e);
            for (uint32_t t = 0; t < n; ++t) cols[i][t] = F->mul(cols[i][t], einv);
            diag[i] = 1;
        } else {
            nonsquare.push_back(i);
        }
    }
    if (nonsquare.size() % 2 != 0)
        throw ExtendResidueField(
            "diagonalize: quadratic part is not equivalent to sum of squares over F_q; "
            "extend the residue field");
    for (size_t t = 0; t + 1 < nonsquare.size(); t += 2) {
        uint32_t i = nonsquare[t], j = nonsquare[t + 1];
        Fq ci = diag[i], cj = diag[j];
        // (a, b) with ci a^2 + cj b^2 = 1 (2-dim nondegenerate forms are universal)
        Fq a = 0, b = 0;
        bool ok = false;
        for (Fq aa = 0; aa < F->q() && !ok; ++aa)
            for (Fq bb = 0; bb < F->q() && !ok; ++bb)
                if (F->add(F->mul(ci, F->mul(aa, aa)), F->mul(cj, F->mul(bb, bb))) == F->one()) {
                    a = aa;
                    b = bb;
                    ok = true;
                }
        if (!ok) throw CycresError("diagonalize: binary form failed to represent 1");
        std::vector<Fq> vi = cols[i], vj = cols[j];
        std::vector<Fq> wi(n), wj(n);
        Fq e = *sqrt_of(F->mul(ci, cj));  // product of two non-squares is a square
        Fq einv = F->inv(e);
        for (uint32_t x = 0; x < n; ++x) {
            wi[x] = F->add(F->mul(a, vi[x]), F->mul(b, vj[x]));
            Fq raw = F->add(F->mul(F->neg(F->mul(cj, b)), vi[x]), F->mul(F->mul(ci, a), vj[x]));
            wj[x] = F->mul(raw, einv);
        }
        cols[i] = wi;
        cols[j] = wj;
        diag[i] = diag[j] = 1;
    }

    // P0[i][j] = coordinate i of column j, lifted to R
    std::vector<std::vector<DvrElement>> Ptot(n, std::vector<DvrElement>(n, R->zero()));
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) Ptot[i][j] = R->from_fq(cols[j][i]);

    LocalModel cur = model;
    cur.f = model.f.substitute(model.ring, matrix_images(model.ring, n, Ptot));

    // --- Newton stage: strip pi-order deviation ----------------------------
    DvrElement half = R->from_int(2).inverse();
    for (int round = 0; round < 40; ++round) {
        auto B = quad_matrix(cur);
        bool clean = true;
        for (uint32_t i = 0; i < n && clean; ++i)
            for (uint32_t j = 0; j < n && clean; ++j) {
                DvrElement dev = i == j ? B[i][j] - R->one() : B[i][j];
                if (!dev.is_zero_at_prec()) clean = false;
            }
        if (clean) break;
        if (round == 39) throw CycresError("diagonalize: Newton refinement failed to converge");
        std::vector<std::vector<DvrElement>> P(n, std::vector<DvrElement>(n, R->zero()));
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = 0; j < n; ++j) {
                DvrElement dev = i == j ? B[i][j] - R->one() : B[i][j];
                P[i][j] = (i == j ? R->one() : R->zero()) - dev * half;
            }
        cur.f = cur.f.substitute(cur.ring, matrix_images(cur.ring, n, P));
        Ptot = mat_mul(R, Ptot, P);
    }
    cur.tag = ModelTag::Diagonalized;

    PipelineStep step;
    step.model = cur;
    step.forward = matrix_images(model.ring, n, Ptot);
    step.inverse = matrix_images(model.ring, n, mat_inv(R, Ptot));
    return step;
}

PipelineStep kill_linear(const LocalModel& model, uint32_t target_ord) {
    const auto& R = model.ring->R;
    if (model.tag != ModelTag::Diagonalized && model.tag != ModelTag::NormalForm)
        throw InvalidScenario("kill_linear: model must be diagonalized first");
    uint32_t n = model.n;
    LocalModel cur = model;
    // accumulated affine change of the x-block: x -> A x + b
    std::vector<std::vector<DvrElement>> A(n, std::vector<DvrElement>(n, R->zero()));
    for (uint32_t i = 0; i < n; ++i) A[i][i] = R->one();
    std::vector<DvrElement> b(n, R->zero());
    DvrElement half = R->from_int(2).inverse();
    for (int round = 0; round < 64; ++round) {
        // Each shift smears the cubic tail back into the quadratic slot (at
        // ever higher pi-order), so every round first restores the exact sum
        // of squares before solving for the next shift.
        for (int inner = 0; inner < 40; ++inner) {
            auto B = quad_matrix(cur);
            bool clean = true;
            for (uint32_t i = 0; i < n && clean; ++i)
                for (uint32_t j = 0; j < n && clean; ++j) {
                    DvrElement dev = i == j ? B[i][j] - R->one() : B[i][j];
                    if (!dev.is_zero_at_prec()) clean = false;
                }
            if (clean) break;
            if (inner == 39)
                throw CycresError("kill_linear: quadratic refresh failed to converge");
            std::vector<std::vector<DvrElement>> P(n, std::vector<DvrElement>(n, R->zero()));
            for (uint32_t i = 0; i < n; ++i)
                for (uint32_t j = 0; j < n; ++j) {
                    DvrElement dev = i == j ? B[i][j] - R->one() : B[i][j];
                    P[i][j] = (i == j ? R->one() : R->zero()) - dev * half;
                }
            cur.f = cur.f.substitute(cur.ring, matrix_images(cur.ring, n, P));
            A = mat_mul(R, A, P);
        }
        std::vector<DvrElement> a(n, R->zero());
        bool work = false;
        for (uint32_t i = 0; i < n; ++i) {
            std::vector<uint16_t> e(n + 1, 0);
            e[i] = 1;
            a[i] = cur.f.coeff(e);
            auto ord = a[i].ord_pi();
            if (ord && *ord < target_ord) work = true;
        }
        if (!work) break;
        if (round == 63) throw CycresError("kill_linear: failed to converge");
        auto B = quad_matrix(cur);
        std::vector<DvrElement> rhs(n, R->zero());
        for (uint32_t i = 0; i < n; ++i) rhs[i] = a[i] * (-half);
        std::vector<DvrElement> z = solve_linear(R, B, rhs);
        std::vector<MultiPoly> img = identity_images(cur.ring);
        for (uint32_t i = 0; i < n; ++i) img[i] = img[i] + MultiPoly::constant(cur.ring, z[i]);
        cur.f = cur.f.substitute(cur.ring, img);
        for (uint32_t i = 0; i < n; ++i) {
            DvrElement acc = b[i];
            for (uint32_t j = 0; j < n; ++j) acc = acc + A[i][j] * z[j];
            b[i] = acc;
        }
    }
    cur.tag = ModelTag::NormalForm;
    PipelineStep step;
    step.model = cur;
    // forward: x -> A x + b, inverse: x -> A^{-1} (x - b), y fixed by both
    step.forward = matrix_images(model.ring, n, A);
    for (uint32_t i = 0; i < n; ++i)
        step.forward[i] = step.forward[i] + MultiPoly::constant(model.ring, b[i]);
    auto Ainv = mat_inv(R, A);
    step.inverse = matrix_images(model.ring, n, Ainv);
    for (uint32_t i = 0; i < n; ++i) {
        DvrElement acc = R->zero();
        for (uint32_t j = 0; j < n; ++j) acc = acc + Ainv[i][j] * b[j];
        step.inverse[i] = step.inverse[i] - MultiPoly::constant(model.ring, acc);
    }
    return step;
}

PipelineStep shift_root(const LocalModel& model, const DvrElement& delta) {
    const auto& R = model.ring->R;
    uint32_t p = R->p(), k = R->k();
    if (!delta.is_unit()) throw InvalidScenario("shift_root: delta must be a unit");
    std::vector<uint16_t> zero_e(model.n + 1, 0);
    DvrElement u = model.f.coeff(zero_e);

    DvrElement w = -delta;
    DvrElement tau_inv = R->from_fq(R->tau()).inverse();
    for (int round = 0; round < 64; ++round) {
        DvrElement r = w.pow(p) + u;
        if (r.is_zero_at_prec()) break;
        uint32_t ordr = r.ord_pi().value();
        if (ordr <= k)
            throw InvalidScenario(
                "shift_root: delta is not a p-th root of the constant term (residual ord " +
                std::to_string(ordr) + " <= k)");
        if (round == 63) throw CycresError("shift_root: Newton polish failed to converge");
        // h = -r / (p w^(p-1)) with p = tau pi^k
        DvrElement h = -(r.div_pow_pi(k) * tau_inv * w.pow(p - 1).inverse());
        w = w + h;
    }
    DvrElement delta_eff = -w;

    std::vector<MultiPoly> img = identity_images(model.ring);
    img[model.y_index()] = img[model.y_index()] - MultiPoly::constant(model.ring, delta_eff);
    LocalModel cur = model;
    cur.f = model.f.substitute(model.ring, img);
    cur.tag = ModelTag::Shifted;
    if (!cur.f.coeff(zero_e).is_zero_at_prec())
        throw CycresError("shift_root: constant survived the shift");

    PipelineStep step;
    step.model = cur;
    step.forward = img;
    step.inverse = identity_images(model.ring);
    step.inverse[model.y_index()] =
        step.inverse[model.y_index()] + MultiPoly::constant(model.ring, delta_eff);
    return step;
}

TemplateMatch match_template(const LocalModel& model, TemplateKind kind, uint32_t s) {
    const auto& R = model.ring->R;
    uint32_t p = R->p(), k = R->k(), n = model.n;
    auto fail = [&](const std::string& why) -> TemplateMatch {
        throw TemplateMismatch("template " + std::string(kind == TemplateKind::F ? "F(" : "G(") +
                               std::to_string(s) + "): " + why);
    };
    int64_t r1 = static_cast<int64_t>(k) - static_cast<int64_t>((2 * p - 2) * s) -
                 (kind == TemplateKind::G ? static_cast<int64_t>(p - 2) : 0);
    int64_t r2 = static_cast<int64_t>(k) - static_cast<int64_t>((2 * p - 4) * s) -
                 (kind == TemplateKind::G ? static_cast<int64_t>(p - 3) : 0);
    if (r1 < 0) fail("template index s out of range for this k");
    if (r2 < 0) r2 = 0;

    size_t yi = model.y_index();
    for (auto& [e, c] : model.f.terms()) {
        uint32_t dx = 0;
        for (uint32_t i = 0; i < n; ++i) dx += e[i];
        uint32_t dy = e[yi];
        if (dx == 0) {
            if (dy == 0) fail("constant term present");
            if (dy > p) fail("pure y-term of degree above p");
            if (dy >= 2 && dy <= p - 1) {
                auto ord = c.ord_pi();
                if (ord && static_cast<int64_t>(*ord) < r2)
                    fail("y^" + std::to_string(dy) + " coefficient ord " + std::to_string(*ord) +
                         " below bound " + std::to_string(r2));
                if (!ord && static_cast<int64_t>(c.prec()) < r2)
                    throw PrecisionError("match_template: cannot certify y^" + std::to_string(dy) +
                                         " slot at available precision");
            }
            continue;  // dy == 1 and dy == p get their exact checks below
        }
        if (dx == 1 && dy == 0) fail("x-linear term present");
        if (dx + dy == 2) {
            if (dx == 1) fail("mixed x*y term present");
            // dx == 2: deviation from sum x_i^2 must have ord >= k
            bool diagonal = false;
            for (uint32_t i = 0; i < n; ++i)
                if (e[i] == 2) diagonal = true;
            DvrElement dev = diagonal ? c - R->one() : c;
            auto ord = dev.ord_pi();
            if (ord && *ord < k)
                fail("x-quadratic part deviates from sum of squares below pi^k");
            if (!ord && dev.prec() < k)
                throw PrecisionError("match_template: cannot certify x-quadratic slot");
        }
        // dx + dy >= 3 with dx >= 1: free cubic tail
    }
    // required exact slots
    std::vector<uint16_t> e(n + 1, 0);
    e[yi] = static_cast<uint16_t>(p);
    DvrElement lead = model.f.coeff(e);
    DvrElement expect_lead = kind == TemplateKind::F ? R->one() : R->pi_pow(1);
    if (lead.is_zero_at_prec() || !(lead == expect_lead))
        fail(std::string("y^p coefficient is not exactly ") +
             (kind == TemplateKind::F ? "1" : "pi"));
    for (uint32_t i = 0; i < n; ++i) {
        std::vector<uint16_t> ed(n + 1, 0);
        ed[i] = 2;
        DvrElement dev = model.f.coeff(ed) - R->one();
        auto ord = dev.ord_pi();
        if (ord && *ord < k) fail("diagonal x^2 coefficient deviates from 1 below pi^k");
        if (!ord && dev.prec() < k)
            throw PrecisionError("match_template: cannot certify diagonal x-quadratic slot");
    }
    e[yi] = 1;
    DvrElement c1 = model.f.coeff(e);
    if (c1.prec() < static_cast<uint32_t>(r1) + 1)
        throw PrecisionError("match_template: cannot certify y-coefficient slot at ord " +
                             std::to_string(r1));
    auto ord1 = c1.ord_pi();
    if (!ord1 || static_cast<int64_t>(*ord1) != r1)
        fail("y coefficient ord is " + (ord1 ? std::to_string(*ord1) : std::string(">= prec")) +
             ", expected exactly " + std::to_string(r1));

    TemplateMatch match;
    match.kind = kind;
    match.s = s;
    match.y_coeff_ord = static_cast<uint32_t>(r1);
    match.unit_slot = c1.div_pow_pi(static_cast<uint32_t>(r1)).residue();
    match.terminal = r1 == 0;
    return match;
}

}  // namespace cycres
