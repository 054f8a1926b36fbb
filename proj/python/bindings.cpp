// SPDX-License-Identifier: MIT
//
// Thin Python surface: scenarios and resolution traces cross the boundary
// as canonical JSON text; congruence helpers cross as plain numbers.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cycres/congruence.hpp"
#include "cycres/errors.hpp"
#include "cycres/resolver.hpp"
#include "cycres/scenario.hpp"
#include "cycres/trace_json.hpp"

namespace py = pybind11;
using namespace cycres;

PYBIND11_MODULE(_core, m) {
    m.doc() = "weighted-blowup resolution traces and degree congruences for p-cyclic covers";

    // Base first: translators run newest-first, so the subclasses must be
    // registered after the base or its handler swallows them.
    auto base = py::register_exception<CycresError>(m, "CycresError");
    py::register_exception<TemplateMismatch>(m, "TemplateMismatch", base.ptr());
    py::register_exception<InvalidScenario>(m, "InvalidScenario", base.ptr());

    m.def(
        "generate_scenario",
        [](const std::string& kind, uint32_t p, uint32_t k, uint32_t q, uint32_t N, uint32_t n,
           const std::string& tau, uint64_t seed) {
            return scenario_to_json(generate_scenario(kind, p, k, q ? q : p, N, n, tau, seed));
        },
        py::arg("kind"), py::arg("p"), py::arg("k"), py::arg("q") = 0, py::arg("N") = 0,
        py::arg("n") = 3, py::arg("tau") = "1", py::arg("seed") = 1,
        "Draw a reproducible scenario; returns its canonical JSON (q = 0 means q = p).");

    m.def(
        "resolve",
        [](const std::string& scenario_json, bool keep_strict, uint64_t budget) {
            Scenario sc = scenario_from_json(scenario_json);
            PreparedModel pm = prepare(sc);
            ResolveOptions opt;
            opt.keep_strict = keep_strict;
            opt.point_budget = budget;
            ResolutionTrace t = cycres::resolve(pm.model, opt);
            return trace_to_json(t, &sc);
        },
        py::arg("scenario_json"), py::arg("keep_strict") = false,
        py::arg("budget") = uint64_t{20'000'000},
        "Run the full resolution on a scenario JSON; returns the trace JSON.");

    m.def(
        "admissible_primes",
        [](uint32_t n, uint64_t d) {
            std::vector<std::pair<uint32_t, bool>> out;
            for (const auto& ap : admissible_primes(n, d)) out.emplace_back(ap.p, ap.effective);
            return out;
        },
        py::arg("n"), py::arg("d"), "Pairs (p, effective) of admissible primes.");

    m.def(
        "lambda_allowed",
        [](uint32_t n, uint64_t d, uint64_t lambda) { return lambda_allowed(n, d, lambda).allowed; },
        py::arg("n"), py::arg("d"), py::arg("lam"),
        "Whether the degree passes every effective congruence.");

    m.def(
        "remark_equivalence",
        [](uint32_t p, uint32_t n, uint64_t e, uint32_t f) {
            auto c = remark_equivalence(p, n, e, f);
            return std::make_pair(c.lhs, c.rhs);
        },
        py::arg("p"), py::arg("n"), py::arg("e"), py::arg("f"));

    m.def("elliptic_threshold", &elliptic_threshold, py::arg("n"),
          "Smallest degree at which the elliptic-fibration exclusion fires.");

    m.def(
        "kt_minimal_integer",
        [](uint64_t lambda, uint32_t n) { return kt_pullback_bound(lambda, n).minimal_integer(); },
        py::arg("lam"), py::arg("n"), "Least integer a with a^n >= lambda (exact).");

    m.def("iteration_bound", &iteration_bound, py::arg("lam"), py::arg("n"), py::arg("S"),
          py::arg("c"), "Least k >= 1 with lam^k * c^n > S^n (exact).");

    m.def(
        "intro_table",
        [] {
            std::vector<std::tuple<uint32_t, uint32_t, std::string, std::vector<uint32_t>>> out;
            for (const auto& r : intro_table()) out.emplace_back(r.n, r.d, r.label, r.moduli);
            return out;
        },
        "Rows (n, d, label, moduli) of the classical-example table.");
}
