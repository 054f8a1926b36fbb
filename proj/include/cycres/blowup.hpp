// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cycres/cyclic_cover.hpp"
#include "cycres/multipoly.hpp"

namespace cycres {

// Weight choice for one weighted-blowup step: Minus gives the x-block weight
// (p-1)/2, Plus gives (p+1)/2; y always has weight 1 and the strict transform
// divides out pi^(2*weight).
enum class BlowupSign { Minus, Plus };

std::string to_string(BlowupSign s);
inline uint32_t x_weight(uint32_t p, BlowupSign s) {
    return s == BlowupSign::Minus ? (p - 1) / 2 : (p + 1) / 2;
}

// Cyclic quotient attached to a cover chart: mu_order acting with weight -1
// on the listed variables, fixing the rest.
struct QuotientData {
    uint32_t order = 1;
    std::string action;
    std::string fixed_locus;
};

struct ChartMap {
    PolyRingPtr source, target;
    std::vector<MultiPoly> images;  // image of each source variable
    size_t divide_var;              // index in target, or SIZE_MAX for pi
    uint32_t divide_power;
};

struct ChartResult {
    std::string name;  // "omega" | "y" | "x" | "pi" | variable name for char-2 side charts
    ChartMap map;
    MultiPoly total;   // substituted equation before division
    MultiPoly strict;  // after exact division
    CFPoly exceptional;  // restriction to the exceptional component (blown
                         // variable removed from the variable list)
    std::optional<QuotientData> quotient;
};

// Verifies strict * divisor^power == total exactly (the pullback identity);
// returns false on any digit disagreement.
bool pullback_identity_holds(const ChartResult& chart);

// The three charts of one weighted blowup of an odd-p model at the origin.
// chart_omega: x_i -> a_i pi^w, y -> b pi; no relation; divide pi^(2w).
ChartResult chart_omega(const LocalModel& model, BlowupSign sign);
// chart_y: x_i -> a_i y^w, y -> y; relation pi = y*g; divide y^(2w).
ChartResult chart_y(const LocalModel& model, BlowupSign sign);
// chart_x (cover of the i-th x-direction chart): x_i -> z^w, x_j -> a_j z^w,
// y -> b z; relation pi = g*z; divide z^(2w); carries the mu_w quotient.
ChartResult chart_x(const LocalModel& model, BlowupSign sign, uint32_t i = 0);

// Characteristic 2: one ordinary blowup of the origin.
struct Char2Blowup {
    ChartResult pi_chart;   // x -> pi x, y -> pi y, divide pi^2 (same variable names)
    LocalModel next;        // strict transform as the next model (char2_j incremented)
    CFPoly quadric;         // exceptional tangent-cone quadric in [pi : x : y]
    bool quadric_smooth;    // alternating form nondegenerate
    std::string singular_certificate;  // where the quadric is singular and why
    bool terminal;          // strict transform has a unit y-coefficient
};
Char2Blowup ordinary_blowup_char2(const LocalModel& model);

// Side chart of the same ordinary blowup in direction vars[v] (v in the
// x-block or y), used for chart-coverage certificates: w -> v*w for w != v,
// relation pi = v*g, divide v^2.
ChartResult ordinary_chart_char2(const LocalModel& model, size_t v);

}  // namespace cycres
