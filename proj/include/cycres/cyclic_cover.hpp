// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cycres/multipoly.hpp"

namespace cycres {

// Progress of a local cover equation through the normalization pipeline and
// the blowup recursion.
enum class ModelTag {
    Raw,           // y^p + s(x) as constructed
    Diagonalized,  // quadratic part exactly sum x_i^2
    NormalForm,    // linear part in x killed to working precision
    Shifted,       // branch constant absorbed: y -> y - delta done
    FTemplate,     // matched F(s)
    GTemplate,     // matched G(s)
};

std::string to_string(ModelTag tag);

// A hypersurface singularity model f = 0 in R[x_1..x_n, y] (variable y last).
struct LocalModel {
    PolyRingPtr ring;  // no relation; vars [x-block..., y]
    MultiPoly f;
    uint32_t n = 0;  // size of the x-block
    ModelTag tag = ModelTag::Raw;
    uint32_t s = 0;        // template index when tag is F/G
    uint32_t char2_j = 0;  // char-2 chain position: y-block coefficient is 2/pi^j

    size_t y_index() const { return n; }
};

// A pipeline stage result: the new model plus the substitution that produced
// it (and its inverse), so callers can verify f_old == f_new(inverse).
struct PipelineStep {
    LocalModel model;
    std::vector<MultiPoly> forward;  // image of each variable: f_new = f_old(forward)...
    std::vector<MultiPoly> inverse;  // ... and f_old = f_new(inverse)
};

// y^p + s for s in the x-variables only (Raw).
LocalModel make_cover(const PolyRingPtr& model_ring, uint32_t n, const MultiPoly& s);

// Residue Hessian of the x-quadratic part; throws InvalidScenario when the
// form is degenerate (odd p: rank < n; p = 2: the alternating form must be
// nondegenerate, forcing n even).
std::vector<std::vector<Fq>> check_nondegenerate(const LocalModel& model);

// Change of x-coordinates making the quadratic part exactly sum x_i^2 to
// working precision (odd p only).  Residue stage solves the congruence over
// F_q -- throwing ExtendResidueField when sum x_i^2 is not equivalent to the
// form over F_q -- and a Newton loop then removes all pi-order deviation.
PipelineStep diagonalize(const LocalModel& model);

// Completes the square repeatedly until every x-linear coefficient has
// ord >= target_ord (or vanishes).  Requires Diagonalized.
PipelineStep kill_linear(const LocalModel& model, uint32_t target_ord);

// Substitutes y -> y - delta to absorb the constant term, first polishing
// delta by a Newton step when the residual (-delta)^p + constant is nonzero
// but of ord > k (supplied roots drift during kill_linear).  Residual of
// ord <= k means delta is not a p-th root: InvalidScenario.
PipelineStep shift_root(const LocalModel& model, const DvrElement& delta);

// Template recognition -------------------------------------------------------

enum class TemplateKind { F, G };

// What matching found: the exact-order unit slot and where every other slot
// sits relative to its bound.
struct TemplateMatch {
    TemplateKind kind;
    uint32_t s = 0;
    Fq unit_slot = 0;        // residue of (y-coefficient) / pi^(expected ord)
    uint32_t y_coeff_ord = 0;  // the expected (and verified) ord of the y slot
    bool terminal = false;     // y slot is a unit (ord 0)
};

// Matches f against the F(s)/G(s) template shape; throws TemplateMismatch
// with a slot-by-slot reason when it does not fit.
TemplateMatch match_template(const LocalModel& model, TemplateKind kind, uint32_t s);

}  // namespace cycres
