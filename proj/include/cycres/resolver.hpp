// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cycres/blowup.hpp"
#include "cycres/cyclic_cover.hpp"

namespace cycres {

// Classification ------------------------------------------------------------

enum class SingKind {
    FTemplate,        // matched F(s)
    GTemplate,        // matched G(s)
    Char2NormalForm,  // char-2 chain position j
    CyclicQuotient,   // mu_w quotient point
    Regular,          // the total space is regular at the point
    Smooth,           // the fiber itself is smooth there
    Unclassified,
};

struct SingularityClass {
    SingKind kind = SingKind::Unclassified;
    uint32_t index = 0;   // s for F/G, j for char-2, order for quotients
    bool terminal = false;
    std::string detail;   // failure reason when Unclassified
};

// "F(1)", "G(0) [terminal]", "CyclicQuotient(2)", ...
std::string to_string(const SingularityClass& c);

// Non-throwing template recognition: tries every admissible F(s)/G(s) for
// odd p (the char-2 normal form for p = 2) and reports the first match, or
// Unclassified carrying the F-side mismatch reason.
SingularityClass classify(const LocalModel& model);

// Fiber-singularity search ----------------------------------------------------

struct FiberPoint {
    uint32_t ext_degree = 1;  // coordinates live in F_{q^ext_degree}
    std::vector<Fq> coords;   // encoded in that field
};

// All points of V(f) over F_{q^e}, e = 1..max_ext, where the Jacobian of f
// vanishes.  Points with every coordinate in a smaller subfield of the tower
// are reported once, at the smallest e.  Throws BudgetExceeded when an
// enumeration would exceed point_budget.
std::vector<FiberPoint> singular_points(const CFPoly& f, uint64_t point_budget,
                                        uint32_t max_ext = 2);

// Ruledness witnesses ---------------------------------------------------------

enum class WitnessForm {
    Quadric,               // the divisor is a (possibly affine) quadric
    GraphOfFunction,       // linear in one variable with invertible cofactor
    ArtinSchreierQuadric,  // A v^p + B v + Q(rest): inseparable double cover
};

std::string to_string(WitnessForm w);

// A re-verifiable certificate that the exceptional divisor cut out by
// `equation` is ruled.  Every claim stored here is checked from scratch by
// verify_witness.
struct RuledWitness {
    WitnessForm form = WitnessForm::Quadric;
    CFPoly equation;      // divisor equation the certificate is about
    std::string linear_var;  // Graph: solved variable; AS: the cover variable
    uint32_t rescale_exponent = 0;   // Graph found after v^e-rescaling the others
    std::optional<CFPoly> rescaled;  // equation after that rescale + division
    std::optional<CFPoly> homogenized;  // AS: degree-p homogenization (fresh var "th")
    std::vector<Fq> point;    // AS: projective point with multiplicity p-1
    uint32_t ext_degree = 1;  // field of the point: F_{q^ext_degree}
    uint32_t multiplicity = 0;       // AS: verified local multiplicity (p-1)
    uint32_t projection_degree = 0;  // AS: degree of projection from the point (1)
    std::string via_chart;  // set when the certificate lives on another chart
                            // of the same divisor (its equation is stored)
    std::string note;
};

// Finds a witness, trying Quadric, then GraphOfFunction, then
// ArtinSchreierQuadric, then GraphOfFunction after a v^((p-1)/2) rescale.
// Throws CycresError when nothing matches.  The returned witness has already
// passed verify_witness.
RuledWitness ruledness_witness(const CFPoly& cf, uint32_t p, uint64_t point_budget = 20'000'000);

// Re-derives every claim of the witness from its stored equation; throws
// CycresError on the first discrepancy.
void verify_witness(const RuledWitness& w, uint32_t p);

// Regularity certificates ------------------------------------------------------

// One candidate point of the exceptional fiber where the Jacobian of the cf
// equation vanishes, together with the proof that the total space is still
// regular there: the pi-adically expanded local equation has a nonzero
// linear part.
struct RegularityCertificate {
    uint32_t ext_degree = 1;
    std::vector<Fq> point;      // coordinates on the cf variable list
    std::string linear_form;    // nonzero linear part (variables + "pi")
    bool regular = false;
};

// Builds certificates for every fiber-singular point of chart.exceptional
// over F_q and F_{q^2}, skipping the chart origin when skip_origin is set
// (that point is the next blowup center, not a defect).  A point whose
// expanded linear form vanishes makes the model genuinely singular off the
// center: InvalidScenario.
std::vector<RegularityCertificate> regularity_certificates(const ChartResult& chart,
                                                           bool skip_origin,
                                                           uint64_t point_budget = 20'000'000);

// Resolution traces -------------------------------------------------------------

struct ChartRecord {
    std::string chart;  // "omega" | "y" | "x" | "pi" | a side-chart variable
    std::vector<std::string> images;  // printed substitution, one per variable
    uint32_t divide_power = 0;        // exact power divided out
    std::string divided_by;           // "pi" or the blown variable
    bool pullback_exact = false;      // strict * divisor^power == total, digit for digit
    std::string exceptional_equation;
    std::optional<RuledWitness> witness;
    std::optional<QuotientData> quotient;
    std::vector<RegularityCertificate> certificates;
    std::string strict_equation;  // filled only when keep_strict is set
};

struct StepRecord {
    uint32_t index = 0;
    std::string sign;  // "minus" | "plus" | "ordinary"
    SingularityClass before, after;
    std::vector<ChartRecord> charts;
    // char-2 extras: the exceptional tangent-cone quadric in [pi : x-block : y]
    std::string quadric_equation;
    bool quadric_smooth = false;
    std::string quadric_certificate;
};

struct TerminalVerdict {
    std::string kind;  // "cyclic-quotient-only" | "smooth"
    std::vector<uint32_t> quotient_orders;  // distinct recorded orders, ascending
    uint32_t uniruling_degree_bound = 1;    // max recorded order (1 when none)
    std::string detail;
};

struct ResolutionTrace {
    uint32_t p = 0, k = 0, q = 0, N = 0, n = 0;
    std::string tau;
    uint32_t steps_expected = 0, steps_taken = 0;
    std::vector<StepRecord> steps;
    std::string terminal_equation;  // final strict transform
    TerminalVerdict verdict;
    bool keep_strict = false;
};

struct ResolveOptions {
    uint64_t point_budget = 20'000'000;
    bool keep_strict = false;        // store full strict transforms in the trace
    bool side_charts = true;         // char-2: record side-chart coverage
};

// Runs the full resolution from a Shifted model: odd p alternates minus
// (F(s) -> G(s)) and plus (G(s) -> F(s+1)) weighted blowups for k/(p-1)
// steps; p = 2 runs k ordinary blowups.  Verifies template membership,
// pullback exactness, ruledness witnesses and regularity certificates at
// every step; throws TemplateMismatch / InvalidScenario when the input
// leaves the expected family.
ResolutionTrace resolve(const LocalModel& start, const ResolveOptions& opt = {});

// Largest quotient order in the trace (>= 1); throws CycresError if any
// order exceeds the covering degree, which would invalidate the uniruling
// bound.
uint32_t uniruling_degree_bound(const ResolutionTrace& t, uint32_t cover_degree);

}  // namespace cycres
