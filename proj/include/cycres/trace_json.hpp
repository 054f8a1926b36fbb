// SPDX-License-Identifier: MIT
#pragma once

#include <string>

#include "cycres/resolver.hpp"
#include "cycres/scenario.hpp"

namespace cycres {

// Deterministic JSON text for a resolution trace: stable key order, fixed
// 2-space indentation, integers only (no floats anywhere), so identical
// inputs serialize byte for byte.  When sc is given it is embedded under
// "scenario" so the trace is replayable from the file alone.
std::string trace_to_json(const ResolutionTrace& t, const Scenario* sc = nullptr);

}  // namespace cycres
