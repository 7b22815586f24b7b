"""Dimension-free concentration bounds for empirical Hankel matrices.

Every bound has the Bernstein form

    value = sqrt(2 * sigma2 * t / N) + b * t / (3 N)

holding with probability at least ``1 - delta`` where ``t`` solves
``k t / (e^t - t - 1) = delta`` with ``k = 2``. The modes differ in the
variance proxy ``sigma2`` and the almost-sure norm bound ``b``:

=========  ==========================  ====================================
mode       sigma2                      b
=========  ==========================  ====================================
standard   S^(2)                       2
prefix     S^(2) of the η-prefix       1/(1-η) + S^(1)  (or min(l+1, ...))
factor     K_η S^(2) of the η-factor   (1-η)^-2 + S^(1)
=========  ==========================  ====================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .hankel import exact_hankel
from .lang import Basis
from .wfa import LinearRepresentation, moment

K_TRACE = 2.0
T_BRACKET = (1e-8, 200.0)
T_ATOL = 1e-10


@dataclass(frozen=True)
class BoundSpec:
    mode: str
    eta: float
    N: int
    delta: float
    S1: float
    S2: float
    l: int | None = None
    k_trace: float = K_TRACE

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if self.S1 <= 0 or self.S2 <= 0:
            raise ValueError("moments must be positive")


@dataclass(frozen=True)
class BoundReport:
    spec: BoundSpec
    t: float
    b_used: float
    sigma2_used: float
    value: float


def failure_probability(t: float, k_trace: float = K_TRACE) -> float:
    return _tail(t, k_trace)


def _tail(t: float, k_trace: float) -> float:
    # k t / (e^t - t - 1), with the series form near 0 to avoid cancellation
    if t < 1e-3:
        denom = t * t / 2.0 * (1.0 + t / 3.0 + t * t / 12.0)
    else:
        denom = math.exp(t) - t - 1.0
    return k_trace * t / denom


def solve_t(delta: float, k_trace: float = K_TRACE) -> float:
    """Unique ``t > 0`` with ``k t / (e^t - t - 1) = delta`` (bisection)."""
    lo, hi = T_BRACKET
    f_lo, f_hi = _tail(lo, k_trace), _tail(hi, k_trace)
    if not f_hi < delta < f_lo:
        raise ValueError(f"delta={delta} outside the attainable range ({f_hi:.3g}, {f_lo:.3g})")
    while hi - lo > T_ATOL:
        mid = 0.5 * (lo + hi)
        if _tail(mid, k_trace) > delta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _report(spec: BoundSpec, sigma2: float, b: float) -> BoundReport:
    t = solve_t(spec.delta, spec.k_trace)
    value = math.sqrt(2.0 * sigma2 * t / spec.N) + b * t / (3.0 * spec.N)
    return BoundReport(spec, t, b, sigma2, value)


def bound_standard(S2: float, N: int, delta: float) -> BoundReport:
    spec = BoundSpec("standard", 0.0, N, delta, 1.0, S2)
    return _report(spec, S2, 2.0)


def _prefix_b(S1: float, eta: float, l: int | None) -> float:
    if l is None:
        if eta >= 1.0:
            raise ValueError("the prefix bound needs 0 <= eta < 1 unless a maximal length l is given")
        return 1.0 / (1.0 - eta) + S1
    cap = l + 1.0
    return (cap if eta >= 1.0 else min(cap, 1.0 / (1.0 - eta))) + S1


def bound_prefix(S1: float, S2: float, eta: float, N: int, delta: float, l: int | None = None) -> BoundReport:
    b = _prefix_b(S1, eta, l)
    spec = BoundSpec("prefix", eta, N, delta, S1, S2, l)
    return _report(spec, S2, b)


def k_eta(eta: float) -> float:
    """Smallest constant with ``(n+1) eta^n <= K`` for every n >= 0."""
    if eta == 0.0:
        return 1.0
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if eta == 1.0:
        raise ValueError("K_eta is infinite at eta = 1")
    if eta <= math.exp(-1.0):
        return 1.0
    return 1.0 / (-math.e * eta * math.log(eta))


def bound_factor(S1: float, S2: float, eta: float, N: int, delta: float) -> BoundReport:
    if not 0.0 <= eta < 1.0:
        raise ValueError(f"the factor bound needs 0 <= eta < 1, got {eta}")
    spec = BoundSpec("factor", eta, N, delta, S1, S2)
    return _report(spec, k_eta(eta) * S2, (1.0 - eta) ** -2 + S1)


def bound_baseline(M: float, d: int, N: int, delta: float) -> float:
    """Dimension-dependent Bernstein baseline ``6M/sqrt(N) (sqrt(ln d) + sqrt(ln 1/δ))``."""
    if M <= 0 or d < 2:
        raise ValueError("need M > 0 and d >= 2")
    return 6.0 * M / math.sqrt(N) * (math.sqrt(math.log(d)) + math.sqrt(math.log(1.0 / delta)))


def restricted_sigma2(rep: LinearRepresentation, U: Basis, V: Basis, mode: str = "standard",
                      eta: float = 0.0) -> float:
    """Sum of the mode-η series over all uv with (u, v) in U x V."""
    h = exact_hankel(rep, U, V, mode, eta)
    return float(h.A.sum(axis=0) @ h.B.sum(axis=1))


def mode_moments(rep: LinearRepresentation, mode: str, eta: float) -> tuple:
    return moment(rep, 1, mode, eta), moment(rep, 2, mode, eta)


def bound_dim_free(rep: LinearRepresentation, mode: str, eta: float, N: int, delta: float,
                   l: int | None = None) -> BoundReport:
    """Dimension-free bound for ``rep`` with moments computed exactly."""
    if mode == "standard":
        return bound_standard(moment(rep, 2), N, delta)
    S1, S2 = mode_moments(rep, mode, eta)
    if mode == "prefix":
        return bound_prefix(S1, S2, eta, N, delta, l)
    return bound_factor(S1, S2, eta, N, delta)


def bound_opt(rep: LinearRepresentation, U: Basis, V: Basis, mode: str, eta: float, N: int, delta: float,
              l: int | None = None) -> BoundReport:
    """Same b as the dimension-free bound, variance proxy restricted to U x V."""
    full = bound_dim_free(rep, mode, eta, N, delta, l)
    restricted = restricted_sigma2(rep, U, V, mode, eta)
    sigma2 = restricted * k_eta(eta) if mode == "factor" else restricted
    spec = BoundSpec(mode, full.spec.eta, N, delta, full.spec.S1, restricted, l)
    return _report(spec, sigma2, full.b_used)
