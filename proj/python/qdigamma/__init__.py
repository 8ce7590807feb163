"""Deformed (q,k) and (p,q) digamma functions with certified truncation bounds."""

import json as _json

from ._qdigamma import (
    DeformParams,
    DomainError,
    EvalResult,
    NoPositiveRegion,
    NoRootInBracket,
    PositivityViolated,
    RatioSpec,
    Threshold,
    Tolerance,
    TruncationNotConverged,
    check_lemma_cross,
    classical_digamma,
    find_positive_threshold,
    k_digamma_ref,
    ln_gamma_pq,
    ln_gamma_qk,
    p_digamma_ref,
    psi_pq,
    psi_pq_prime,
    psi_qk,
    psi_qk_prime,
    q_bracket,
    ratio_G,
    ratio_H,
    validate_spec,
)
from . import _qdigamma


def verify_bounds(suite, family="qk", specs=100, t_min=0.0, t_max=1.0, t_points=50, seed=0):
    """Run a seeded verification suite and return the report as a dict."""
    return _json.loads(_qdigamma._verify_bounds_json(suite, family, specs, t_min, t_max, t_points, seed))


def limit_scan(scan, t=1.0, q=0.5, k=1.0, p=2, j_max=5, p_list=(1, 2, 5, 10, 20, 50), path="tail"):
    """Run a degeneration scan and return the report as a dict.

    scan is one of k1, qk-q1, q1, pq-q1, p-inf, pq-combined.
    """
    return _json.loads(_qdigamma._limit_json(scan, t, q, k, p, j_max, list(p_list), path))


__all__ = [name for name in dir() if not name.startswith("_")]
