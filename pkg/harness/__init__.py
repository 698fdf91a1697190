"""Harness module - verification sweeps, claim registry and report output."""

from harness.conjecture import (
    check_beta2_conditions,
    check_chain_entropy,
    check_closed_forms,
    check_conjecture,
    check_gamma_conditions,
    check_gibbs_paths,
    check_inequality,
    check_term_monotonicity,
    find_counterexample,
    log_grid,
)
from harness.inequalities import (
    INEQUALITIES,
    SUBTERM_CLAIMS,
    TERM_CLAIMS,
    claim_class,
    inequality_spec,
)
from harness.reports import TOOL_VERSION, atomic_output, dumps_csv, dumps_json, render

__all__ = [
    "check_conjecture",
    "check_term_monotonicity",
    "check_beta2_conditions",
    "check_gamma_conditions",
    "check_inequality",
    "find_counterexample",
    "check_closed_forms",
    "check_gibbs_paths",
    "check_chain_entropy",
    "log_grid",
    "INEQUALITIES",
    "SUBTERM_CLAIMS",
    "TERM_CLAIMS",
    "claim_class",
    "inequality_spec",
    "TOOL_VERSION",
    "atomic_output",
    "dumps_json",
    "dumps_csv",
    "render",
]
