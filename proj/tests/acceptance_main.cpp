// SPDX-License-Identifier: MIT
//
// Acceptance gate: ten end-to-end checks over the whole library, each
// printed as one pass/fail line with its elapsed time.  Budgets and
// tolerances are pinned here as constants.  Exit code = number of failures.
#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cycres/cfpoly.hpp"
#include "cycres/congruence.hpp"
#include "cycres/errors.hpp"
#include "cycres/resolver.hpp"
#include "cycres/scenario.hpp"
#include "test_util.hpp"

using namespace cycres;
using boost::multiprecision::cpp_int;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs one criterion: body() returns an empty string on success or a short
// failure description.  Exceeding the wall-clock limit is itself a failure.
void criterion(int id, const char* name, double limit_s,
               const std::function<std::string()>& body) {
    auto t0 = Clock::now();
    std::string note;
    try {
        note = body();
    } catch (const std::exception& e) {
        note = std::string("exception: ") + e.what();
    }
    double secs = seconds_since(t0);
    bool pass = note.empty();
    if (pass && secs > limit_s) {
        pass = false;
        note = "time limit " + std::to_string(limit_s) + " s exceeded";
    }
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", pass ? "PASS" : "FAIL", id, name,
                secs, note.empty() ? "" : " -- ", note.c_str());
    std::fflush(stdout);
}

void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 4;
    size_t workers = std::min<size_t>(hw, count);
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> cursor{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                size_t i = cursor.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

std::string plural(size_t n, const char* what) {
    return std::to_string(n) + " " + what + (n == 1 ? "" : "s");
}

// ----------------------------------------------------------------------------
// criteria 4-6 share these resolution traces
// ----------------------------------------------------------------------------

struct TraceJob {
    uint32_t p = 0, k = 0, n = 0;
    uint64_t seed = 0;
    ResolutionTrace trace;
    std::string error;
};

std::vector<TraceJob> g_traces;

constexpr uint64_t kPointBudget = 20'000'000;

std::string run_trace_jobs() {
    const std::vector<std::array<uint32_t, 3>> sets = {
        {3, 4, 2}, {3, 4, 3}, {3, 8, 3}, {5, 8, 2}, {5, 8, 3}, {5, 16, 3}};
    g_traces.clear();
    for (const auto& s : sets)
        for (uint64_t seed = 1; seed <= 25; ++seed)
            g_traces.push_back(TraceJob{s[0], s[1], s[2], seed, {}, ""});
    parallel_for(g_traces.size(), [&](size_t i) {
        TraceJob& job = g_traces[i];
        try {
            Scenario sc = generate_scenario("f0", job.p, job.k, job.p, 0, job.n, "1", job.seed);
            ResolveOptions opt;
            opt.point_budget = kPointBudget;
            job.trace = resolve(prepare(sc).model, opt);
        } catch (const std::exception& e) {
            job.error = e.what();
        }
    });
    for (const auto& job : g_traces)
        if (!job.error.empty())
            return "p=" + std::to_string(job.p) + " k=" + std::to_string(job.k) +
                   " n=" + std::to_string(job.n) + " seed=" + std::to_string(job.seed) +
                   " failed: " + job.error;
    return "";
}

std::string check_trace_shapes() {
    size_t bad = 0;
    std::string first;
    for (const auto& job : g_traces) {
        std::string why;
        const ResolutionTrace& t = job.trace;
        uint32_t expect_steps = job.k / (job.p - 1);  // == 2k/(2p-2)
        std::vector<uint32_t> expect_orders;
        for (uint32_t w : {(job.p - 1) / 2, (job.p + 1) / 2})
            if (w > 1) expect_orders.push_back(w);
        if (t.steps_taken != expect_steps)
            why = "blowup count " + std::to_string(t.steps_taken);
        else if (t.verdict.kind != "cyclic-quotient-only")
            why = "verdict " + t.verdict.kind;
        else if (t.verdict.quotient_orders != expect_orders)
            why = "quotient orders off";
        for (const auto& step : t.steps) {
            if (!why.empty()) break;
            if (step.before.kind == SingKind::Unclassified ||
                step.after.kind == SingKind::Unclassified) {
                why = "unclassified step " + std::to_string(step.index);
                break;
            }
            if (step.charts.size() != 3) {
                why = "chart count";
                break;
            }
            for (const auto& chart : step.charts) {
                if (!chart.witness) {
                    why = "missing witness on " + chart.chart;
                    break;
                }
                try {
                    verify_witness(*chart.witness, job.p);
                } catch (const std::exception& e) {
                    why = std::string("witness re-verification: ") + e.what();
                    break;
                }
            }
        }
        if (!why.empty()) {
            ++bad;
            if (first.empty())
                first = "p=" + std::to_string(job.p) + " k=" + std::to_string(job.k) +
                        " seed=" + std::to_string(job.seed) + ": " + why;
        }
    }
    if (bad) return plural(bad, "bad trace") + "; first: " + first;
    return "";
}

// Variable list of a chart's exceptional central fiber, reconstructed from
// the chart construction rules (x-chart always blows the first x-direction).
std::vector<std::string> chart_cf_vars(const std::string& chart, uint32_t n) {
    std::vector<std::string> v;
    if (chart == "omega") {
        for (uint32_t i = 1; i <= n; ++i) v.push_back("a" + std::to_string(i));
        v.push_back("b");
    } else if (chart == "y") {
        for (uint32_t i = 1; i <= n; ++i) v.push_back("a" + std::to_string(i));
        v.push_back("g");
    } else if (chart == "x") {
        for (uint32_t i = 2; i <= n; ++i) v.push_back("a" + std::to_string(i));
        v.push_back("b");
        v.push_back("g");
    } else {
        throw CycresError("unexpected chart name '" + chart + "'");
    }
    return v;
}

// Independent smoothness concordance for one chart: enumerate every point of
// F_q^m and F_{q^2}^m, collect the fiber-singular ones, and demand that set
// equal {certified points} (plus the skipped origin on non-terminal omega
// charts).  Returns a failure description or "".
std::string check_chart_concordance(const TraceJob& job, const StepRecord& step,
                                    const ChartRecord& chart) {
    FqFieldPtr F = FqField::create(job.p, 1);
    std::vector<std::string> vars = chart_cf_vars(chart.chart, job.n);
    CFPoly cf = CFPoly::parse(F, vars, chart.exceptional_equation);
    for (uint32_t e = 1; e <= 2; ++e) {
        FqFieldPtr E = e == 1 ? F : FqField::create(job.p, 2);
        std::vector<Fq> table = E->embedding_from(*F);
        CFPoly cfe = e == 1 ? cf : cf.map_scalars(E, table);
        std::vector<CFPoly> jac = cfe.jacobian();

        std::set<std::vector<Fq>> expected;
        for (const auto& cert : chart.certificates) {
            if (cert.ext_degree != e) continue;
            if (!cert.regular) return "certificate not marked regular on " + chart.chart;
            if (cert.point.size() != vars.size())
                return "certificate arity mismatch on " + chart.chart;
            expected.insert(cert.point);
        }
        bool origin_skipped = chart.chart == "omega" && !step.after.terminal;
        if (origin_skipped && e == 1) expected.insert(std::vector<Fq>(vars.size(), 0));

        std::vector<char> in_image(E->q(), 0);
        for (Fq v : table) in_image[v] = 1;
        std::set<std::vector<Fq>> found;
        for_each_point(*E, vars.size(), kPointBudget, [&](const std::vector<Fq>& pt) {
            if (e == 2) {
                bool sub = true;
                for (Fq c : pt) sub = sub && in_image[c];
                if (sub) return true;  // reported at e = 1
            }
            if (!E->is_zero(cfe.eval(pt))) return true;
            for (const auto& g : jac)
                if (!E->is_zero(g.eval(pt))) return true;
            found.insert(pt);
            return true;
        });
        if (found != expected)
            return "singular-point sets disagree on " + chart.chart + " ext " +
                   std::to_string(e) + " (found " + std::to_string(found.size()) +
                   ", certified " + std::to_string(expected.size()) + ")";
    }
    return "";
}

}  // namespace

int main() {
    // ------------------------------------------------------------------ 1
    criterion(1, "headline congruence table", 1.0, [] {
        struct Row {
            uint32_t n, d;
            const char* label;
            std::vector<uint32_t> moduli;
        };
        const std::vector<Row> want = {{3, 5, "Calabi-Yau", {5}},
                                       {4, 6, "Calabi-Yau", {3}},
                                       {5, 6, "Fano", {3}},
                                       {5, 7, "Calabi-Yau", {3, 7}}};
        auto rows = intro_table();
        if (rows.size() != want.size()) return std::string("row count");
        for (size_t i = 0; i < rows.size(); ++i)
            if (rows[i].n != want[i].n || rows[i].d != want[i].d ||
                rows[i].label != want[i].label || rows[i].moduli != want[i].moduli)
                return "row " + std::to_string(i) + " mismatch";
        return std::string();
    });

    // ------------------------------------------------------------------ 2
    criterion(2, "degree-threshold equivalence, exhaustive", 30.0, [] {
        const uint32_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
        uint64_t mismatches = 0, checked = 0;
        for (uint32_t p : primes)
            for (uint32_t n = 0; n <= 200; ++n)
                for (uint64_t e = 1; e <= 50; ++e)
                    for (uint32_t f = 0; f < p; ++f) {
                        RemarkCheck c = remark_equivalence(p, n, e, f);
                        ++checked;
                        if (c.lhs != c.rhs) ++mismatches;
                    }
        if (mismatches) return plural(mismatches, "mismatch") + " of " + std::to_string(checked);
        return std::string();
    });

    // ------------------------------------------------------------------ 3
    criterion(3, "elliptic-exclusion arithmetic for n = 3..200", 5.0, [] {
        for (uint32_t n = 3; n <= 200; ++n) {
            uint64_t d = elliptic_threshold(n);
            if (d != 5 * ((static_cast<uint64_t>(n) + 3 + 5) / 6))
                return "threshold formula at n = " + std::to_string(n);
            bool five_effective = false;
            for (const auto& ap : admissible_primes(n, d))
                five_effective = five_effective || (ap.p == 5 && ap.effective);
            if (!five_effective) return "p = 5 not effective at n = " + std::to_string(n);
            FibrationQuery q;
            q.kind = FibrationKind::Elliptic;
            auto v = fibration_excluded(n, d, q);
            if (!v.excluded || !v.witness) return "no exclusion at n = " + std::to_string(n);
            if (v.witness->m > 4) return "witness m > 4 at n = " + std::to_string(n);
            if (v.witness->p == 2 || v.witness->p == 3)
                return "square residue fired for p < 5 at n = " + std::to_string(n);
        }
        // squares never leave {0,1} mod 2 or mod 3, so those primes can
        // never exclude a square degree
        for (uint64_t m = 0; m <= 100; ++m)
            if ((m * m) % 2 > 1 || (m * m) % 3 > 1)
                return "square residue out of range at m = " + std::to_string(m);
        return std::string();
    });

    // ------------------------------------------------------------------ 4
    criterion(4, "resolution traces: 6 parameter sets x 25 scenarios", 60.0, [] {
        std::string err = run_trace_jobs();
        if (!err.empty()) return err;
        return check_trace_shapes();
    });

    // ------------------------------------------------------------------ 5
    criterion(5, "pullback identity on every chart", 5.0, [] {
        size_t charts = 0, bad = 0;
        for (const auto& job : g_traces)
            for (const auto& step : job.trace.steps)
                for (const auto& chart : step.charts) {
                    ++charts;
                    if (!chart.pullback_exact) ++bad;
                }
        if (g_traces.empty() || charts == 0) return std::string("no traces to check");
        if (bad) return plural(bad, "inexact chart") + " of " + std::to_string(charts);
        return std::string();
    });

    // ------------------------------------------------------------------ 6
    criterion(6, "smoothness concordance by exhaustive enumeration", 120.0, [] {
        if (g_traces.empty()) return std::string("no traces to check");
        std::vector<std::string> errs(g_traces.size());
        parallel_for(g_traces.size(), [&](size_t i) {
            const TraceJob& job = g_traces[i];
            if (!job.error.empty()) return;
            for (const auto& step : job.trace.steps)
                for (const auto& chart : step.charts) {
                    std::string e;
                    try {
                        e = check_chart_concordance(job, step, chart);
                    } catch (const std::exception& ex) {
                        e = ex.what();
                    }
                    if (!e.empty()) {
                        errs[i] = "seed " + std::to_string(job.seed) + " p=" +
                                  std::to_string(job.p) + " k=" + std::to_string(job.k) +
                                  " step " + std::to_string(step.index) + ": " + e;
                        return;
                    }
                }
        });
        size_t bad = 0;
        std::string first;
        for (const auto& e : errs)
            if (!e.empty()) {
                ++bad;
                if (first.empty()) first = e;
            }
        if (bad) return plural(bad, "disagreement") + "; first: " + first;
        return std::string();
    });

    // ------------------------------------------------------------------ 7
    criterion(7, "characteristic-2 chains for k in {2, 4}", 10.0, [] {
        struct Job {
            uint32_t k;
            uint64_t seed;
            std::string error;
        };
        std::vector<Job> jobs;
        for (uint32_t k : {2u, 4u})
            for (uint64_t seed = 1; seed <= 25; ++seed) jobs.push_back(Job{k, seed, ""});
        FqFieldPtr F2 = FqField::create(2, 1);
        parallel_for(jobs.size(), [&](size_t i) {
            Job& job = jobs[i];
            try {
                Scenario sc = generate_scenario("char2", 2, job.k, 2, 0, 2, "1", job.seed);
                ResolutionTrace t = resolve(prepare(sc).model);
                if (t.steps_taken != job.k) throw CycresError("blowup count");
                if (t.verdict.kind != "smooth") throw CycresError("verdict " + t.verdict.kind);
                for (const auto& step : t.steps) {
                    if (step.charts.empty() || step.charts[0].chart != "pi")
                        throw CycresError("missing pi chart");
                    if (!step.charts[0].witness)
                        throw CycresError("exceptional quadric not witnessed");
                    verify_witness(*step.charts[0].witness, 2);
                    bool last = step.index == t.steps_taken;
                    if (step.quadric_smooth != last)
                        throw CycresError("quadric smoothness at step " +
                                          std::to_string(step.index));
                    // re-derive smoothness from the alternating form
                    std::vector<std::string> vars = {"pi", "x1", "x2", "y"};
                    CFPoly qd = CFPoly::parse(F2, vars, step.quadric_equation);
                    uint32_t rank = fq_matrix_rank(*F2, hessian_matrix(qd, vars.size()));
                    if ((rank == vars.size()) != last)
                        throw CycresError("hessian rank " + std::to_string(rank) + " at step " +
                                          std::to_string(step.index));
                }
            } catch (const std::exception& e) {
                job.error = e.what();
            }
        });
        for (const auto& job : jobs)
            if (!job.error.empty())
                return "k=" + std::to_string(job.k) + " seed=" + std::to_string(job.seed) +
                       ": " + job.error;
        return std::string();
    });

    // ------------------------------------------------------------------ 8
    criterion(8, "degree-ledger property, 10^4 + 10^3 instances", 5.0, [] {
        SplitMix64 rng(41);
        for (int i = 0; i < 10'000; ++i) {
            DegreeLedger led;
            led.modulus = 2 + rng.below(999);
            led.main_degree = rng.below(1'000'000'000);
            size_t ne = rng.below(9);
            std::vector<bool> flags(ne, true);
            for (size_t j = 0; j < ne; ++j)
                led.exceptional_degrees.push_back(led.modulus * rng.below(100'000));
            LedgerStatement st = specialize_ledger(led, flags);
            if (!st.congruent || st.total_residue != st.main_residue)
                return "congruence broke at instance " + std::to_string(i);
        }
        for (int i = 0; i < 1'000; ++i) {
            DegreeLedger led;
            led.modulus = 2 + rng.below(999);
            led.main_degree = rng.below(1'000'000);
            size_t ne = 1 + rng.below(8);
            std::vector<bool> flags(ne, true);
            for (size_t j = 0; j < ne; ++j)
                led.exceptional_degrees.push_back(led.modulus * rng.below(1000));
            // break one flagged entry
            size_t victim = rng.below(ne);
            led.exceptional_degrees[victim] += 1 + rng.below(led.modulus - 1);
            bool threw = false;
            try {
                specialize_ledger(led, flags);
            } catch (const InvalidScenario& e) {
                threw = std::string(e.what()).find("flag violated") != std::string::npos;
            }
            if (!threw) return "adversarial instance " + std::to_string(i) + " not rejected";
        }
        return std::string();
    });

    // ------------------------------------------------------------------ 9
    criterion(9, "root and iteration bounds vs brute force, 10^3 each", 5.0, [] {
        SplitMix64 rng(43);
        for (int i = 0; i < 1'000; ++i) {
            uint64_t lambda = 1 + rng.below(1'000'000);
            uint32_t n = 1 + static_cast<uint32_t>(rng.below(10));
            NthRootBound b = kt_pullback_bound(lambda, n);
            // brute scan: first a with a^n >= lambda (early-out keeps the
            // accumulator small; factors are >= 1 so it only grows)
            auto reaches = [&](uint64_t a) {
                unsigned __int128 acc = 1;
                for (uint32_t j = 0; j < n; ++j) {
                    acc *= a;
                    if (acc >= lambda) return true;
                }
                return false;
            };
            uint64_t brute = 1;
            while (!reaches(brute)) ++brute;
            if (b.minimal_integer() != brute)
                return "root bound off at lambda=" + std::to_string(lambda) +
                       " n=" + std::to_string(n);
            if (!b.is_at_least(brute) || (brute > 1 && b.is_at_least(brute - 1)))
                return "is_at_least inconsistent at instance " + std::to_string(i);
        }
        for (int i = 0; i < 1'000; ++i) {
            uint64_t lambda = 2 + rng.below(999'999);
            uint32_t n = 1 + static_cast<uint32_t>(rng.below(10));
            uint64_t S = 1 + rng.below(1'000'000);
            uint64_t c = 1 + rng.below(S);
            uint64_t got = iteration_bound(lambda, n, S, c);
            cpp_int target = 1, cn = 1;
            for (uint32_t j = 0; j < n; ++j) {
                target *= S;
                cn *= c;
            }
            cpp_int acc = 1;
            uint64_t brute = 0;
            for (uint64_t kk = 1;; ++kk) {
                acc *= lambda;
                if (acc * cn > target) {
                    brute = kk;
                    break;
                }
            }
            if (got != brute)
                return "iteration bound off at instance " + std::to_string(i) + " (got " +
                       std::to_string(got) + ", brute " + std::to_string(brute) + ")";
        }
        return std::string();
    });

    // ------------------------------------------------------------------ 10
    criterion(10, "normal-form round trip on 100 random covers", 30.0, [] {
        std::vector<std::string> errs(100);
        parallel_for(100, [&](size_t i) {
            uint32_t p = i % 2 ? 5 : 3;
            uint32_t k = p == 3 ? 4 : 8;
            uint32_t n = (i / 2) % 2 ? 3 : 2;
            try {
                Scenario sc = generate_scenario("raw", p, k, p, 0, n, "1", 500 + i);
                LocalModel original = realize(sc);
                const RingPtr& R = original.ring->R;
                PipelineStep d = diagonalize(original);
                PipelineStep l = kill_linear(d.model, R->N());
                PipelineStep s = shift_root(l.model, DvrElement::parse(R, sc.delta));
                // undo shift_root, kill_linear, diagonalize in turn
                MultiPoly r = s.model.f;
                r = r.substitute(l.model.ring, s.inverse);
                r = r.substitute(d.model.ring, l.inverse);
                r = r.substitute(original.ring, d.inverse);
                if (!testutil::agree(r, original.f))
                    throw CycresError("inverse composition missed the original");
                // post-shift pure y^j slots (1 <= j <= p-1) must have ord >= k
                uint32_t kk = R->k();
                for (uint32_t j = 1; j <= p - 1; ++j) {
                    std::vector<uint16_t> e(s.model.ring->vars.size(), 0);
                    e[s.model.y_index()] = static_cast<uint16_t>(j);
                    auto ord = s.model.f.coeff(e).ord_pi();
                    if (ord && *ord < kk)
                        throw CycresError("y^" + std::to_string(j) + " slot has ord " +
                                          std::to_string(*ord));
                }
            } catch (const std::exception& e) {
                errs[i] = "instance " + std::to_string(i) + ": " + e.what();
            }
        });
        for (const auto& e : errs)
            if (!e.empty()) return e;
        return std::string();
    });

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
