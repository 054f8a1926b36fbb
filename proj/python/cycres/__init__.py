# SPDX-License-Identifier: MIT
"""Weighted-blowup resolution traces and degree congruences for p-cyclic covers.

The heavy lifting happens in the compiled extension; scenarios and traces
cross the boundary as canonical JSON text (see ``json.loads``).
"""

from cycres._core import (
    CycresError,
    InvalidScenario,
    TemplateMismatch,
    admissible_primes,
    elliptic_threshold,
    generate_scenario,
    intro_table,
    iteration_bound,
    kt_minimal_integer,
    lambda_allowed,
    remark_equivalence,
    resolve,
)

__all__ = [
    "CycresError",
    "InvalidScenario",
    "TemplateMismatch",
    "admissible_primes",
    "elliptic_threshold",
    "generate_scenario",
    "intro_table",
    "iteration_bound",
    "kt_minimal_integer",
    "lambda_allowed",
    "remark_equivalence",
    "resolve",
]
