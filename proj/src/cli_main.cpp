// SPDX-License-Identifier: MIT
//
// cycres — weighted-blowup resolution traces and degree-congruence reports
// for p-cyclic cover singularities over ramified p-adic rings.
#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cycres/congruence.hpp"
#include "cycres/errors.hpp"
#include "cycres/resolver.hpp"
#include "cycres/scenario.hpp"
#include "cycres/trace_json.hpp"

namespace {

using cycres::CycresError;
using cycres::InvalidScenario;
using cycres::TemplateMismatch;
using ordered_json = nlohmann::ordered_json;

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const TemplateMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidScenario& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CycresError("cannot open output file '" + out_path + "'");
    out << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CycresError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- resolve ----------------------------------------------------------------

struct ResolveArgs {
    uint32_t p = 3, k = 4, q = 0, N = 0, n = 3;
    uint64_t seed = 1;
    std::string tau = "1";
    std::string kind;  // default depends on p
    std::string scenario_file;
    uint32_t batch = 1;
    uint32_t threads = 0;
    bool json = false;
    bool keep_strict = false;
    uint64_t budget = 20'000'000;
    std::string out;
};

struct ScenarioOutcome {
    int code = 0;
    std::string text;   // trace JSON or human summary
    std::string error;  // nonempty on failure
};

std::string human_summary(const cycres::Scenario& sc, const cycres::ResolutionTrace& t) {
    std::ostringstream os;
    os << "scenario seed=" << sc.seed << " kind=" << sc.kind << " p=" << t.p << " k=" << t.k
       << " q=" << t.q << " N=" << t.N << " n=" << t.n << "\n";
    for (const auto& s : t.steps) {
        os << "  step " << s.index << " " << s.sign << ": " << to_string(s.before) << " -> "
           << to_string(s.after) << "; charts";
        std::string sep = " ";
        for (const auto& c : s.charts) {
            os << sep << c.chart;
            sep = ",";
        }
        for (const auto& c : s.charts)
            if (c.witness) {
                os << "; divisor on " << c.chart << " ruled (" << to_string(c.witness->form)
                   << ")";
                break;
            }
        os << "\n";
    }
    os << "  terminal: " << t.verdict.kind;
    if (!t.verdict.quotient_orders.empty()) {
        os << "; quotient orders {";
        std::string sep;
        for (uint32_t o : t.verdict.quotient_orders) {
            os << sep << o;
            sep = ",";
        }
        os << "}";
    }
    os << "; uniruling degree bound " << t.verdict.uniruling_degree_bound << "\n";
    os << "  blowups: " << t.steps_taken << " (expected " << t.steps_expected << ")\n";
    return os.str();
}

ScenarioOutcome run_one(const cycres::Scenario& sc, const ResolveArgs& a) {
    ScenarioOutcome r;
    try {
        cycres::PreparedModel pm = cycres::prepare(sc);
        cycres::ResolveOptions opt;
        opt.point_budget = a.budget;
        opt.keep_strict = a.keep_strict;
        cycres::ResolutionTrace t = cycres::resolve(pm.model, opt);
        r.text = a.json ? cycres::trace_to_json(t, &sc) : human_summary(sc, t);
    } catch (const TemplateMismatch& e) {
        r.code = 2;
        r.error = e.what();
    } catch (const InvalidScenario& e) {
        r.code = 3;
        r.error = e.what();
    } catch (const std::exception& e) {
        r.code = 1;
        r.error = e.what();
    }
    return r;
}

int cmd_resolve(const ResolveArgs& args) {
    ResolveArgs a = args;
    if (a.q == 0) a.q = a.p;
    if (a.kind.empty()) a.kind = a.p == 2 ? "char2" : "f0";

    std::vector<cycres::Scenario> scenarios;
    if (!a.scenario_file.empty()) {
        scenarios.push_back(cycres::scenario_from_json(slurp(a.scenario_file)));
    } else {
        for (uint32_t i = 0; i < a.batch; ++i)
            scenarios.push_back(cycres::generate_scenario(a.kind, a.p, a.k, a.q, a.N, a.n,
                                                          a.tau, a.seed + i));
    }

    std::vector<ScenarioOutcome> results(scenarios.size());
    uint32_t workers = a.threads ? a.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<uint32_t>(workers, static_cast<uint32_t>(scenarios.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < scenarios.size(); ++i) results[i] = run_one(scenarios[i], a);
    } else {
        std::atomic<size_t> cursor{0};
        std::vector<std::thread> pool;
        for (uint32_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = cursor.fetch_add(1);
                    if (i >= scenarios.size()) return;
                    results[i] = run_one(scenarios[i], a);
                }
            });
        for (auto& th : pool) th.join();
    }

    // Output ordered by scenario index regardless of completion order.
    int code = 0;
    std::string text;
    if (a.json && results.size() > 1) {
        ordered_json arr = ordered_json::array();
        for (size_t i = 0; i < results.size(); ++i) {
            if (results[i].code == 0) {
                arr.push_back(ordered_json::parse(results[i].text));
            } else {
                ordered_json e;
                e["scenario"] = ordered_json::parse(cycres::scenario_to_json(scenarios[i]));
                e["error"] = results[i].error;
                e["exit"] = results[i].code;
                arr.push_back(e);
            }
        }
        text = arr.dump(2) + "\n";
    } else {
        std::ostringstream os;
        for (size_t i = 0; i < results.size(); ++i) {
            if (results[i].code == 0)
                os << results[i].text;
            else
                os << "scenario seed=" << scenarios[i].seed << " failed: " << results[i].error
                   << "\n";
        }
        text = os.str();
    }
    for (const auto& r : results)
        if (r.code != 0) {
            code = r.code;
            break;
        }
    emit(text, a.out);
    return code;
}

// --- constraints -------------------------------------------------------------

struct ConstraintsArgs {
    uint32_t n = 3, d = 5;
    int64_t lambda = -1;
    std::string fibration;
    bool json = false;
    std::string out;
};

int cmd_constraints(const ConstraintsArgs& a) {
    auto primes = cycres::admissible_primes(a.n, a.d);
    bool any_effective = false;
    for (const auto& ap : primes) any_effective = any_effective || ap.effective;

    ordered_json j;
    j["n"] = a.n;
    j["d"] = a.d;
    ordered_json pj = ordered_json::array();
    for (const auto& ap : primes) {
        ordered_json e;
        e["p"] = ap.p;
        e["effective"] = ap.effective;
        pj.push_back(e);
    }
    j["admissible_primes"] = pj;

    std::ostringstream os;
    os << "constraints for n=" << a.n << " d=" << a.d << "\n";
    if (primes.empty()) {
        os << "  no admissible primes\n";
    } else {
        os << "  admissible primes:";
        for (const auto& ap : primes) os << " " << ap.p << (ap.effective ? " (effective)" : "");
        os << "\n";
    }
    if (!any_effective) os << "  no effective primes\n";

    if (a.lambda >= 0) {
        auto rep = cycres::lambda_allowed(a.n, a.d, static_cast<uint64_t>(a.lambda));
        ordered_json lj;
        lj["lambda"] = a.lambda;
        lj["allowed"] = rep.allowed;
        ordered_json per = ordered_json::array();
        for (const auto& v : rep.per_prime) {
            ordered_json e;
            e["p"] = v.p;
            e["effective"] = v.effective;
            e["residue"] = v.residue;
            e["allowed"] = v.allowed;
            per.push_back(e);
        }
        lj["per_prime"] = per;
        j["lambda"] = lj;
        os << "  lambda=" << a.lambda << ": ";
        if (rep.allowed) {
            os << "allowed\n";
        } else {
            os << "forbidden, witness";
            for (const auto& v : rep.per_prime)
                if (!v.allowed) {
                    os << " p=" << v.p;
                    break;
                }
            os << "\n";
        }
    }

    if (!a.fibration.empty()) {
        cycres::FibrationQuery q;
        std::string spec = a.fibration;
        auto colon = spec.find(':');
        std::string kind = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
        uint64_t param = 1;
        if (colon != std::string::npos) param = std::stoull(spec.substr(colon + 1));
        if (kind == "elliptic") {
            q.kind = cycres::FibrationKind::Elliptic;
        } else if (kind == "genus1") {
            q.kind = cycres::FibrationKind::Genus1;
            q.delta = static_cast<uint32_t>(param);
        } else if (kind == "abelian") {
            q.kind = cycres::FibrationKind::Abelian;
            q.g = static_cast<uint32_t>(param);
        } else {
            throw InvalidScenario("unknown fibration kind '" + kind +
                                  "' (elliptic, genus1:DELTA, abelian:G)");
        }
        auto verdict = cycres::fibration_excluded(a.n, a.d, q);
        ordered_json fj;
        fj["kind"] = to_string(q.kind);
        if (q.kind == cycres::FibrationKind::Genus1) fj["delta"] = q.delta;
        if (q.kind == cycres::FibrationKind::Abelian) fj["g"] = q.g;
        fj["excluded"] = verdict.excluded;
        if (verdict.excluded) {
            ordered_json w;
            w["p"] = verdict.witness->p;
            w["m"] = verdict.witness->m;
            w["degree"] = verdict.witness->degree;
            w["residue"] = verdict.witness->residue;
            fj["witness"] = w;
        }
        j["fibration"] = fj;
        os << "  " << to_string(q.kind) << " fibration: ";
        if (verdict.excluded)
            os << "excluded, witness p=" << verdict.witness->p << " m=" << verdict.witness->m
               << " degree=" << verdict.witness->degree << " residue=" << verdict.witness->residue
               << "\n";
        else
            os << "not excluded\n";
    }

    emit(a.json ? j.dump(2) + "\n" : os.str(), a.out);
    return 0;
}

// --- table / threshold / selftest ---------------------------------------------

int cmd_table(bool json, const std::string& out) {
    auto rows = cycres::intro_table();
    if (json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json e;
            e["n"] = r.n;
            e["d"] = r.d;
            e["label"] = r.label;
            e["moduli"] = r.moduli;
            arr.push_back(e);
        }
        emit(arr.dump(2) + "\n", out);
        return 0;
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        os << "n=" << r.n << " d=" << r.d << " " << r.label << " mod";
        std::string sep = " ";
        for (uint32_t m : r.moduli) {
            os << sep << m;
            sep = ", ";
        }
        os << "\n";
    }
    emit(os.str(), out);
    return 0;
}

int cmd_threshold(uint32_t n, bool json, const std::string& out) {
    uint64_t d = cycres::elliptic_threshold(n);
    if (json) {
        ordered_json j;
        j["n"] = n;
        j["d"] = d;
        emit(j.dump(2) + "\n", out);
        return 0;
    }
    std::ostringstream os;
    os << "elliptic exclusion threshold for n=" << n << ": d=" << d << "\n";
    emit(os.str(), out);
    return 0;
}

int cmd_selftest(bool json, const std::string& out) {
    // Fast invariants touching every module; any failure throws.
    cycres::intro_table();  // self-checking against the known rows
    for (uint32_t p : {2u, 3u, 5u, 7u})
        for (uint32_t n : {3u, 5u, 8u})
            for (uint32_t e : {1u, 4u})
                for (uint32_t f = 0; f < p; ++f) {
                    auto c = cycres::remark_equivalence(p, n, e, f);
                    if (c.lhs != c.rhs) throw CycresError("selftest: remark equivalence failed");
                }
    {
        cycres::Scenario sc = cycres::generate_scenario("f0", 3, 4, 3, 0, 2, "1", 1);
        auto t = cycres::resolve(cycres::prepare(sc).model);
        if (t.steps_taken != 2) throw CycresError("selftest: resolve step count");
    }
    {
        cycres::Scenario sc = cycres::generate_scenario("char2", 2, 2, 2, 0, 2, "1", 1);
        auto t = cycres::resolve(cycres::prepare(sc).model);
        if (t.verdict.kind != "smooth") throw CycresError("selftest: char-2 verdict");
    }
    {
        cycres::DegreeLedger led{100, {10, 15}, 5};
        auto st = cycres::specialize_ledger(led, {true, true});
        if (!st.congruent) throw CycresError("selftest: ledger congruence");
    }
    if (json) {
        ordered_json j;
        j["ok"] = true;
        emit(j.dump(2) + "\n", out);
    } else {
        emit("selftest ok\n", out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cycres: resolution traces and congruence constraints for p-cyclic covers"};
    app.require_subcommand(1);

    ResolveArgs ra;
    auto* r = app.add_subcommand("resolve", "run the weighted-blowup resolution on a scenario");
    r->add_option("--p", ra.p, "residue characteristic");
    r->add_option("--k", ra.k, "ramification: ord_pi(p)");
    r->add_option("--q", ra.q, "residue field size (default p)");
    r->add_option("--N", ra.N, "working precision pi^N (default 4k+10)");
    r->add_option("--n", ra.n, "number of x-variables");
    r->add_option("--seed", ra.seed, "scenario seed");
    r->add_option("--tau", ra.tau, "residue unit with p = tau*pi^k");
    r->add_option("--kind", ra.kind, "scenario kind: f0 | raw | char2 (default by p)");
    r->add_option("--scenario", ra.scenario_file, "read a scenario JSON file instead of flags");
    r->add_option("--batch", ra.batch, "run this many seeds starting at --seed");
    r->add_option("--threads", ra.threads, "worker threads for --batch (default: hardware)");
    r->add_option("--budget", ra.budget, "point-enumeration budget per scan");
    r->add_flag("--json", ra.json, "emit the full trace as JSON");
    r->add_flag("--keep-strict", ra.keep_strict, "store full strict transforms in the trace");
    r->add_option("--out", ra.out, "write output to this file");

    ConstraintsArgs ca;
    auto* c = app.add_subcommand("constraints",
                                 "degree-congruence constraints on rational endomorphisms");
    c->add_option("--n", ca.n, "dimension of the hypersurface")->required();
    c->add_option("--d", ca.d, "degree of the hypersurface")->required();
    c->add_option("--lambda", ca.lambda, "test this endomorphism degree");
    c->add_option("--fibration", ca.fibration,
                  "test exclusion: elliptic | genus1:DELTA | abelian:G");
    c->add_flag("--json", ca.json, "emit JSON");
    c->add_option("--out", ca.out, "write output to this file");

    bool tj = false;
    std::string tout;
    auto* t = app.add_subcommand("table", "effective congruences for the classical examples");
    t->add_flag("--json", tj, "emit JSON");
    t->add_option("--out", tout, "write output to this file");

    uint32_t thn = 3;
    bool thj = false;
    std::string thout;
    auto* th = app.add_subcommand("threshold", "smallest degree with the elliptic exclusion");
    th->add_option("--n", thn, "dimension of the hypersurface")->required();
    th->add_flag("--json", thj, "emit JSON");
    th->add_option("--out", thout, "write output to this file");

    bool sj = false;
    std::string sout;
    auto* s = app.add_subcommand("selftest", "fast cross-module smoke checks");
    s->add_flag("--json", sj, "emit JSON");
    s->add_option("--out", sout, "write output to this file");

    CLI11_PARSE(app, argc, argv);

    if (r->parsed()) return guarded([&] { return cmd_resolve(ra); });
    if (c->parsed()) return guarded([&] { return cmd_constraints(ca); });
    if (t->parsed()) return guarded([&] { return cmd_table(tj, tout); });
    if (th->parsed()) return guarded([&] { return cmd_threshold(thn, thj, thout); });
    if (s->parsed()) return guarded([&] { return cmd_selftest(sj, sout); });
    return 1;
}
