// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cycres/cyclic_cover.hpp"

namespace cycres {

// Deterministic seeded PRNG used by scenario generation: splitmix64, fixed
// forever as "splitmix64-v1" so identical seeds reproduce identical
// scenarios on every platform.
struct SplitMix64 {
    uint64_t state = 0;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // Uniform enough for test-scenario generation; NOT for statistics.
    uint64_t below(uint64_t m) { return next() % m; }
};

// A fully explicit, reproducible input for the resolver: ring parameters
// plus the polynomial pieces of the local cover equation, all as canonical
// text.  Kinds:
//   "f0"    — odd p, already in the shifted normal form (template F(0)):
//             y^p + p*delta^(p-1)*y + sum x_i^2 + p*(y^2-block from g)
//             + p*f2 + f3.
//   "raw"   — odd p, pre-pipeline cover y^p + s(x) with
//             s = -(-delta)^p + f1 + qform + f3; needs diagonalize /
//             kill_linear / shift_root before resolution.
//   "char2" — p = 2 chain start: y^2 + 2*delta*y + 2*f1 + qform + f3.
struct Scenario {
    std::string prng = "splitmix64-v1";
    uint64_t seed = 1;
    std::string kind = "f0";
    uint32_t p = 3, k = 4, q = 3, N = 22, n = 3;
    std::string tau = "1";
    std::string delta;                 // DvrElement text (unit)
    std::vector<std::string> g;        // odd p: y^(2+j) block coefficients, j = 0..p-3
    std::string f1;                    // x-linear part ("raw", "char2")
    std::string f2;                    // x-quadratic deviation ("f0")
    std::string qform;                 // x-quadratic part ("raw", "char2")
    std::string f3;                    // higher tail (all kinds)
};

// Draws every random piece for the given parameters; N = 0 means the
// default working precision 4k + 10.  Generated scenarios always satisfy
// the ring invariants and realize to a valid template start.
Scenario generate_scenario(const std::string& kind, uint32_t p, uint32_t k, uint32_t q,
                           uint32_t N, uint32_t n, const std::string& tau, uint64_t seed);

// The realized local model plus the normalization pipeline that produced it
// (empty for kinds that realize directly into normal form).
struct PreparedModel {
    LocalModel model;  // tag Shifted: ready for resolve()
    std::vector<PipelineStep> pipeline;
};

// Builds the ring and the cover equation exactly as written in the
// scenario.  For "raw" this is the pre-pipeline model (tag Raw).
LocalModel realize(const Scenario& sc);

// realize() plus, for "raw", the full normalization pipeline
// diagonalize -> kill_linear -> shift_root.
PreparedModel prepare(const Scenario& sc);

// Canonical JSON with stable key order; parse accepts exactly this schema.
std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const std::string& text);

}  // namespace cycres
