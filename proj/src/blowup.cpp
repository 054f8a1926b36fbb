// SPDX-License-Identifier: MIT
#include "cycres/blowup.hpp"

#include <sstream>

#include "cycres/errors.hpp"

namespace cycres {

std::string to_string(BlowupSign s) { return s == BlowupSign::Minus ? "minus" : "plus"; }

bool pullback_identity_holds(const ChartResult& chart) {
    MultiPoly lifted = chart.map.divide_var == SIZE_MAX
                           ? chart.strict.mul_pow_pi(chart.map.divide_power)
                           : [&] {
                                 MultiPoly m(chart.strict.ring());
                                 std::vector<uint16_t> e(chart.strict.ring()->vars.size(), 0);
                                 e[chart.map.divide_var] =
                                     static_cast<uint16_t>(chart.map.divide_power);
                                 m.add_term(e, chart.strict.ring()->R->one());
                                 return chart.strict * m;
                             }();
    MultiPoly diff = lifted - chart.total;
    return diff.is_zero();
}

namespace {

std::vector<std::string> omega_vars(uint32_t n) {
    std::vector<std::string> v;
    for (uint32_t i = 1; i <= n; ++i) v.push_back("a" + std::to_string(i));
    v.push_back("b");
    return v;
}

}  // namespace

ChartResult chart_omega(const LocalModel& model, BlowupSign sign) {
    const auto& R = model.ring->R;
    uint32_t p = R->p();
    if (p == 2) throw InvalidScenario("chart_omega: odd-p charts only");
    uint32_t w = x_weight(p, sign);
    auto target = make_poly_ring(R, omega_vars(model.n));
    std::vector<MultiPoly> images;
    for (uint32_t i = 0; i < model.n; ++i)
        images.push_back(MultiPoly::variable(target, i).scale(R->pi_pow(w)));
    images.push_back(MultiPoly::variable(target, model.n).scale(R->pi_pow(1)));

    ChartResult res;
    res.name = "omega";
    res.map = ChartMap{model.ring, target, images, SIZE_MAX, 2 * w};
    res.total = model.f.substitute(target, images);
    res.strict = res.total.div_pow_pi(2 * w);
    res.exceptional = res.strict.central_fiber();
    return res;
}

ChartResult chart_y(const LocalModel& model, BlowupSign sign) {
    const auto& R = model.ring->R;
    uint32_t p = R->p();
    if (p == 2) throw InvalidScenario("chart_y: odd-p charts only");
    uint32_t w = x_weight(p, sign);
    std::vector<std::string> vars;
    for (uint32_t i = 1; i <= model.n; ++i) vars.push_back("a" + std::to_string(i));
    vars.push_back("y");
    vars.push_back("g");
    size_t y_idx = model.n, g_idx = model.n + 1;
    auto target = make_poly_ring(R, vars, std::make_pair(y_idx, g_idx));
    std::vector<MultiPoly> images;
    MultiPoly ypow(target);
    {
        std::vector<uint16_t> e(vars.size(), 0);
        e[y_idx] = static_cast<uint16_t>(w);
        ypow.add_term(e, R->one());
    }
    for (uint32_t i = 0; i < model.n; ++i)
        images.push_back(MultiPoly::variable(target, i) * ypow);
    images.push_back(MultiPoly::variable(target, y_idx));

    ChartResult res;
    res.name = "y";
    res.map = ChartMap{model.ring, target, images, y_idx, 2 * w};
    res.total = model.f.substitute(target, images);
    res.strict = res.total.div_var_pow(y_idx, 2 * w);
    res.exceptional = res.strict.exceptional_cf(y_idx);
    return res;
}

ChartResult chart_x(const LocalModel& model, BlowupSign sign, uint32_t i) {
    const auto& R = model.ring->R;
    uint32_t p = R->p();
    if (p == 2) throw InvalidScenario("chart_x: odd-p charts only");
    if (i >= model.n) throw InvalidScenario("chart_x: no such x-variable");
    uint32_t w = x_weight(p, sign);
    std::vector<std::string> vars;
    std::vector<size_t> a_slot(model.n, SIZE_MAX);  // where x_j lands for j != i
    for (uint32_t j = 0; j < model.n; ++j) {
        if (j == i) continue;
        a_slot[j] = vars.size();
        vars.push_back("a" + std::to_string(j + 1));
    }
    size_t b_idx = vars.size();
    vars.push_back("b");
    size_t g_idx = vars.size();
    vars.push_back("g");
    size_t z_idx = vars.size();
    vars.push_back("z");
    auto target = make_poly_ring(R, vars, std::make_pair(g_idx, z_idx));

    MultiPoly zpow(target);
    {
        std::vector<uint16_t> e(vars.size(), 0);
        e[z_idx] = static_cast<uint16_t>(w);
        zpow.add_term(e, R->one());
    }
    std::vector<MultiPoly> images;
    for (uint32_t j = 0; j < model.n; ++j) {
        if (j == i)
            images.push_back(zpow);
        else
            images.push_back(MultiPoly::variable(target, a_slot[j]) * zpow);
    }
    images.push_back(MultiPoly::variable(target, b_idx) * MultiPoly::variable(target, z_idx));

    ChartResult res;
    res.name = "x";
    res.map = ChartMap{model.ring, target, images, z_idx, 2 * w};
    res.total = model.f.substitute(target, images);
    res.strict = res.total.div_var_pow(z_idx, 2 * w);
    res.exceptional = res.strict.exceptional_cf(z_idx);
    if (w > 1) {
        QuotientData q;
        q.order = w;
        q.action = "mu_" + std::to_string(w) + ": b -> xi^-1 b, g -> xi^-1 g, a_j fixed";
        q.fixed_locus = "b = g = z = 0";
        res.quotient = q;
    }
    return res;
}

Char2Blowup ordinary_blowup_char2(const LocalModel& model) {
    const auto& R = model.ring->R;
    if (R->p() != 2) throw InvalidScenario("ordinary_blowup_char2: requires p = 2");
    const auto& F = R->field();
    uint32_t n = model.n, k = R->k();

    ChartResult pi_chart;
    pi_chart.name = "pi";
    std::vector<MultiPoly> images;
    for (uint32_t i = 0; i <= n; ++i)
        images.push_back(MultiPoly::variable(model.ring, i).scale(R->pi_pow(1)));
    pi_chart.map = ChartMap{model.ring, model.ring, images, SIZE_MAX, 2};
    pi_chart.total = model.f.substitute(model.ring, images);
    pi_chart.strict = pi_chart.total.div_pow_pi(2);
    pi_chart.exceptional = pi_chart.strict.central_fiber();

    Char2Blowup out;
    out.pi_chart = pi_chart;
    out.next = model;
    out.next.f = pi_chart.strict;
    out.next.char2_j = model.char2_j + 1;

    // Exceptional quadric: the [pi : x : y]-degree-2 part of the *input*
    // equation (the tangent cone at the blown-up origin), pi counted with
    // degree equal to its digit index.
    std::vector<Fq> id(R->q());
    for (Fq a = 0; a < R->q(); ++a) id[a] = a;
    CFPoly expanded = model.f.expand_scalars(F, id, 3);  // digits 0..2 can reach degree 2
    CFPoly cone = expanded.graded_part(2);
    // reorder variables to [pi, x1..xn, y]
    std::vector<std::string> pvars;
    pvars.push_back("pi");
    for (auto& v : model.ring->vars) pvars.push_back(v);
    std::vector<size_t> where(expanded.nvars());
    for (size_t t = 0; t + 1 < expanded.nvars(); ++t) where[t] = t + 1;  // x.., y shift right
    where[expanded.nvars() - 1] = 0;                                     // "pi" to front
    out.quadric = cone.embed_vars(pvars, where);

    // Singular locus of a char-2 quadric: radical of the alternating form,
    // cut by the quadric.  The certificate pins it exactly.
    size_t nv = pvars.size();
    auto A = hessian_matrix(out.quadric, nv);
    uint32_t rank = fq_matrix_rank(*F, A);
    out.quadric_smooth = rank == nv;
    if (out.quadric_smooth) {
        out.singular_certificate = "alternating form nondegenerate: smooth quadric";
    } else {
        // kernel basis of A
        std::vector<std::vector<Fq>> M = A;
        size_t rows = nv;
        std::vector<int> pivot_col(rows, -1);
        size_t r = 0;
        for (size_t c = 0; c < nv && r < rows; ++c) {
            size_t piv = r;
            while (piv < rows && F->is_zero(M[piv][c])) ++piv;
            if (piv == rows) continue;
            std::swap(M[piv], M[r]);
            Fq inv = F->inv(M[r][c]);
            for (size_t j = 0; j < nv; ++j) M[r][j] = F->mul(M[r][j], inv);
            for (size_t i2 = 0; i2 < rows; ++i2) {
                if (i2 == r || F->is_zero(M[i2][c])) continue;
                Fq cc = M[i2][c];
                for (size_t j = 0; j < nv; ++j) M[i2][j] = F->sub(M[i2][j], F->mul(cc, M[r][j]));
            }
            pivot_col[r] = static_cast<int>(c);
            ++r;
        }
        std::vector<std::vector<Fq>> kernel;
        std::vector<bool> is_pivot(nv, false);
        for (size_t i2 = 0; i2 < r; ++i2) is_pivot[pivot_col[i2]] = true;
        for (size_t c = 0; c < nv; ++c) {
            if (is_pivot[c]) continue;
            std::vector<Fq> vec(nv, 0);
            vec[c] = 1;
            for (size_t i2 = 0; i2 < r; ++i2)
                vec[pivot_col[i2]] = F->neg(M[i2][c]);
            kernel.push_back(vec);
        }
        // restrict the quadric to the kernel: Q(sum t_i v_i) as a form in t
        std::vector<std::string> tvars;
        for (size_t t = 0; t < kernel.size(); ++t) tvars.push_back("t" + std::to_string(t));
        std::vector<CFPoly> imgs;
        for (size_t c = 0; c < nv; ++c) {
            CFPoly img(F, tvars);
            for (size_t t = 0; t < kernel.size(); ++t) {
                std::vector<uint16_t> e(tvars.size(), 0);
                e[t] = 1;
                img.add_term(e, kernel[t][c]);
            }
            imgs.push_back(img);
        }
        CFPoly restricted = out.quadric.substitute(imgs);
        // Expect a perfect square of one coordinate combination whose unique
        // projective zero is the pi-direction (the pi-chart origin).
        // Sufficient check: restricted = (linear form)^2 with the linear form
        // nonvanishing on every kernel vector except the pi axis.
        bool ok = false;
        std::ostringstream cert;
        if (!restricted.is_zero() && restricted.total_degree() == 2) {
            // char 2: a square iff only even exponent patterns t_i^2
            bool square = true;
            for (auto& [e, c] : restricted.terms()) {
                int support = 0;
                for (auto x : e)
                    if (x) ++support;
                if (support != 1) square = false;
            }
            if (square) {
                // zero set of sum c_i t_i^2 = (sum sqrt(c_i) t_i)^2 is a
                // hyperplane in the kernel; singular points = kernel vectors
                // on it.  Verify the pi axis is the only such direction by
                // checking the form vanishes at the pi axis and at no other
                // kernel basis direction combination over F_q... the honest
                // exhaustive check over P(kernel) is tiny (q+1 points for a
                // 2-dim kernel) and field-independent here because the form
                // is a perfect square of a linear form: its zero locus is
                // defined over F_q.
                std::vector<Fq> pi_axis_t;  // coordinates of the pi axis in kernel basis
                // the pi axis is e_0; solve sum t_i kernel_i = e_0
                // (kernel vectors are reduced-echelon free-column vectors,
                // so matching free coordinates identifies t uniquely)
                bool pi_in_kernel = true;
                std::vector<Fq> t(kernel.size(), 0);
                {
                    // free columns are where kernel vectors have their 1
                    std::vector<Fq> target_vec(nv, 0);
                    target_vec[0] = 1;
                    // t_i = target at kernel_i's free column
                    std::vector<size_t> free_cols;
                    for (size_t c2 = 0, kidx = 0; c2 < nv; ++c2)
                        if (!is_pivot[c2]) {
                            t[kidx] = target_vec[c2];
                            free_cols.push_back(c2);
                            ++kidx;
                        }
                    std::vector<Fq> recon(nv, 0);
                    for (size_t kidx = 0; kidx < kernel.size(); ++kidx)
                        for (size_t c2 = 0; c2 < nv; ++c2)
                            recon[c2] = F->add(recon[c2], F->mul(t[kidx], kernel[kidx][c2]));
                    for (size_t c2 = 0; c2 < nv; ++c2)
                        if (recon[c2] != target_vec[c2]) pi_in_kernel = false;
                }
                if (pi_in_kernel && F->is_zero(restricted.eval(t))) {
                    // unique projective zero of a squared linear form on the
                    // kernel is the hyperplane {linear = 0}; we need that
                    // hyperplane to meet the kernel only in the pi axis,
                    // i.e. kernel dim 2 and the form nonzero on the other
                    // basis direction.
                    if (kernel.size() == 2) {
                        std::vector<Fq> other(kernel.size(), 0);
                        other[F->is_zero(t[0]) ? 0 : 1] = 1;
                        if (!F->is_zero(restricted.eval(other))) {
                            ok = true;
                            cert << "singular locus = radical of alternating form cut by the "
                                    "quadric = the single point [1:0:...:0] (pi-chart origin)";
                        }
                    }
                }
            }
        }
        if (!ok)
            throw TemplateMismatch(
                "ordinary_blowup_char2: exceptional quadric has unexpected singular locus");
        out.singular_certificate = cert.str();
    }

    // terminal <=> strict transform's y-coefficient is a unit
    std::vector<uint16_t> ye(n + 1, 0);
    ye[n] = 1;
    DvrElement ycoeff = out.next.f.coeff(ye);
    out.terminal = !ycoeff.is_zero_at_prec() && ycoeff.is_unit();
    if (out.terminal != (out.next.char2_j == k))
        throw TemplateMismatch("ordinary_blowup_char2: chain position disagrees with y-coefficient");
    return out;
}

ChartResult ordinary_chart_char2(const LocalModel& model, size_t v) {
    const auto& R = model.ring->R;
    if (R->p() != 2) throw InvalidScenario("ordinary_chart_char2: requires p = 2");
    if (v >= model.ring->vars.size()) throw InvalidScenario("ordinary_chart_char2: no such variable");
    std::vector<std::string> vars = model.ring->vars;
    size_t g_idx = vars.size();
    vars.push_back("g");
    auto target = make_poly_ring(R, vars, std::make_pair(v, g_idx));
    std::vector<MultiPoly> images;
    for (size_t i = 0; i < model.ring->vars.size(); ++i) {
        if (i == v)
            images.push_back(MultiPoly::variable(target, v));
        else
            images.push_back(MultiPoly::variable(target, i) * MultiPoly::variable(target, v));
    }
    ChartResult res;
    res.name = model.ring->vars[v];
    res.map = ChartMap{model.ring, target, images, v, 2};
    res.total = model.f.substitute(target, images);
    res.strict = res.total.div_var_pow(v, 2);
    res.exceptional = res.strict.exceptional_cf(v);
    return res;
}

}  // namespace cycres
