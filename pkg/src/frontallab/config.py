"""Numerical knobs shared across the package.

Every "vanishes" decision in the geometry and the classifiers routes through
one of these thresholds so that a single override changes the whole pipeline
consistently.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace, fields

DEFAULT_ORDER = 7


def worker_count() -> int:
    """Parallelism cap from FRONTAL_LAB_THREADS (defaults to 1)."""
    raw = os.environ.get("FRONTAL_LAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Tolerances:
    # relative threshold for "this coefficient is zero" in jet division,
    # deflation checks and exact-value assertions
    zero_rel: float = 1e-10
    # |v| < deflation_window * (v-range width) switches the transverse
    # quotients f_v/v and nu_v/v from plain division to axis deflation
    deflation_window: float = 1e-4
    # generic residual bound for structural identities on grids
    residual: float = 1e-8
    # classifying psi-values and their derivatives as zero
    psi_zero: float = 1e-8
    # classifier decisions: |x| <= band_lo is "zero", |x| >= band_hi is
    # "nonzero", in between is reported Unclassified
    band_lo: float = 1e-7
    band_hi: float = 1e-6
    # principal-direction machinery refuses below this cuspidal torsion
    kappa_t_min: float = 1e-6
    # focal maps are masked where |kappa_j| falls below this
    kappa_min: float = 1e-6
    # clamp window for H**2 - K: clamped to 0 above -gamma_clamp, error below
    gamma_clamp: float = 1e-9
    # angular tolerance (radians) for "trace tangent parallel to null direction"
    angular: float = 1e-4
    # parameter-space tolerance for root finding along traces
    bisection: float = 1e-12
    # default cells per axis for sign-scan curve tracing
    scan_cells: int = 201

    def with_overrides(self, **kwargs) -> "Tolerances":
        known = {f.name for f in fields(self)}
        bad = set(kwargs) - known
        if bad:
            raise ValueError(f"unknown tolerance override(s): {sorted(bad)}")
        return replace(self, **kwargs)


DEFAULT_TOL = Tolerances()
