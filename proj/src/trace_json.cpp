// SPDX-License-Identifier: MIT
#include "cycres/trace_json.hpp"

#include <string>

#include "json.hpp"

#include "cycres/errors.hpp"

namespace cycres {

namespace {

using ordered_json = nlohmann::ordered_json;

// F_{q^e} for point printing, rebuilt from the trace's ring parameters.
FqFieldPtr point_field(uint32_t p, uint32_t q, uint32_t e) {
    uint32_t m = 0, t = 1;
    while (t < q) {
        t *= p;
        ++m;
    }
    if (t != q) throw CycresError("trace ring has q that is not a power of p");
    return FqField::create(p, m * e);
}

ordered_json point_json(uint32_t p, uint32_t q, uint32_t e, const std::vector<Fq>& pt) {
    FqFieldPtr E = point_field(p, q, e);
    ordered_json a = ordered_json::array();
    for (Fq c : pt) a.push_back(E->to_string(c));
    return a;
}

ordered_json witness_json(const RuledWitness& w, uint32_t p, uint32_t q) {
    ordered_json j;
    j["form"] = to_string(w.form);
    j["equation"] = w.equation.to_string();
    if (!w.linear_var.empty()) j["linear_var"] = w.linear_var;
    if (w.rescale_exponent) j["rescale_exponent"] = w.rescale_exponent;
    if (w.rescaled) j["rescaled"] = w.rescaled->to_string();
    if (w.homogenized) j["homogenized"] = w.homogenized->to_string();
    if (!w.point.empty()) {
        j["ext_degree"] = w.ext_degree;
        j["point"] = point_json(p, q, w.ext_degree, w.point);
    }
    if (w.form == WitnessForm::ArtinSchreierQuadric) {
        j["multiplicity"] = w.multiplicity;
        j["projection_degree"] = w.projection_degree;
    }
    if (!w.via_chart.empty()) j["via_chart"] = w.via_chart;
    if (!w.note.empty()) j["note"] = w.note;
    return j;
}

ordered_json chart_json(const ChartRecord& c, uint32_t p, uint32_t q, bool keep_strict) {
    ordered_json j;
    j["images"] = c.images;
    j["divided_by"] = c.divided_by;
    j["divide_power"] = c.divide_power;
    j["pullback_exact"] = c.pullback_exact;
    j["exceptional_equation"] = c.exceptional_equation;
    if (c.witness) j["witness"] = witness_json(*c.witness, p, q);
    if (c.quotient) {
        ordered_json qj;
        qj["order"] = c.quotient->order;
        qj["action"] = c.quotient->action;
        qj["fixed_locus"] = c.quotient->fixed_locus;
        j["quotient"] = qj;
    }
    ordered_json certs = ordered_json::array();
    for (const auto& rc : c.certificates) {
        ordered_json cj;
        cj["ext_degree"] = rc.ext_degree;
        cj["point"] = point_json(p, q, rc.ext_degree, rc.point);
        cj["linear_form"] = rc.linear_form;
        cj["regular"] = rc.regular;
        certs.push_back(cj);
    }
    j["certificates"] = certs;
    if (keep_strict) j["strict"] = c.strict_equation;
    return j;
}

ordered_json step_json(const StepRecord& s, uint32_t p, uint32_t q, bool keep_strict) {
    ordered_json j;
    j["index"] = s.index;
    j["sign"] = s.sign;
    j["before"] = to_string(s.before);
    j["classification"] = to_string(s.after);
    ordered_json charts;
    ordered_json exc = ordered_json::array();
    for (const auto& c : s.charts) {
        charts[c.chart] = chart_json(c, p, q, keep_strict);
        if (c.witness) {
            ordered_json e;
            e["chart"] = c.chart;
            e["equation"] = c.exceptional_equation;
            e["witness"] = witness_json(*c.witness, p, q);
            exc.push_back(e);
        }
    }
    j["charts"] = charts;
    j["exceptional"] = exc;
    if (!s.quadric_equation.empty()) {
        ordered_json qj;
        qj["equation"] = s.quadric_equation;
        qj["smooth"] = s.quadric_smooth;
        qj["certificate"] = s.quadric_certificate;
        j["quadric"] = qj;
    }
    return j;
}

}  // namespace

std::string trace_to_json(const ResolutionTrace& t, const Scenario* sc) {
    ordered_json j;
    if (sc) j["scenario"] = ordered_json::parse(scenario_to_json(*sc));
    ordered_json ring;
    ring["p"] = t.p;
    ring["k"] = t.k;
    ring["q"] = t.q;
    ring["N"] = t.N;
    ring["n"] = t.n;
    ring["tau"] = t.tau;
    j["ring"] = ring;
    j["steps_expected"] = t.steps_expected;
    j["steps_taken"] = t.steps_taken;
    ordered_json steps = ordered_json::array();
    for (const auto& s : t.steps) steps.push_back(step_json(s, t.p, t.q, t.keep_strict));
    j["steps"] = steps;
    ordered_json term;
    term["equation"] = t.terminal_equation;
    term["kind"] = t.verdict.kind;
    term["quotient_orders"] = t.verdict.quotient_orders;
    term["detail"] = t.verdict.detail;
    j["terminal"] = term;
    j["uniruling_bound"] = t.verdict.uniruling_degree_bound;
    return j.dump(2) + "\n";
}

}  // namespace cycres
