"""Simulator for orthogonal-state-based secure direct communication protocols."""

from ._core import (
    ckw_monogamy,
    concurrence,
    duality_tradeoff,
    efficiency,
    eve_leakage,
    gram_schmidt,
    hermitian_family,
    holevo_bound,
    run,
    run_experiment,
    trace_distance,
    verify_orthogonal_family,
    von_neumann_entropy,
)

__all__ = [
    "ckw_monogamy",
    "concurrence",
    "duality_tradeoff",
    "efficiency",
    "eve_leakage",
    "gram_schmidt",
    "hermitian_family",
    "holevo_bound",
    "run",
    "run_experiment",
    "trace_distance",
    "verify_orthogonal_family",
    "von_neumann_entropy",
]
