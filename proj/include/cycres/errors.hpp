// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace cycres {

// Base class for every error raised by the library.  Callers that want to
// distinguish "the input is mathematically unusable" from plain bugs catch
// these; anything else escaping the library is a defect.
struct CycresError : std::runtime_error {
    explicit CycresError(const std::string& what) : std::runtime_error(what) {}
};

// Arithmetic was attempted at (or below) zero significant digits, or a
// comparison needed more precision than the operands carry.
struct PrecisionError : CycresError {
    explicit PrecisionError(const std::string& what) : CycresError(what) {}
};

// Division by pi^j (or by a variable power) that is not exact.
struct InexactDivision : CycresError {
    explicit InexactDivision(const std::string& what) : CycresError(what) {}
};

// A strict transform failed to match the expected normal-form template.
struct TemplateMismatch : CycresError {
    explicit TemplateMismatch(const std::string& what) : CycresError(what) {}
};

// Scenario parameters violate a precondition (wrong divisibility, degenerate
// quadratic part, non-unit where a unit is required, ...).
struct InvalidScenario : CycresError {
    explicit InvalidScenario(const std::string& what) : CycresError(what) {}
};

// The requested diagonalization needs a quadratic-form representation that
// does not exist over the configured residue field.
struct ExtendResidueField : CycresError {
    explicit ExtendResidueField(const std::string& what) : CycresError(what) {}
};

// A point-enumeration budget was exceeded.
struct BudgetExceeded : CycresError {
    explicit BudgetExceeded(const std::string& what) : CycresError(what) {}
};

}  // namespace cycres
