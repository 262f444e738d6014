"""Perturbative Floquet propagator for a driven two-level system."""

from ._core import (
    Drive,
    FloquetError,
    Solution,
    case_boundary,
    catalan,
    check_conv_lemma,
    classify,
    oracle_propagator,
    q_coefficients,
    solve,
)

__all__ = [
    "Drive",
    "FloquetError",
    "Solution",
    "case_boundary",
    "catalan",
    "check_conv_lemma",
    "classify",
    "oracle_propagator",
    "q_coefficients",
    "solve",
]
