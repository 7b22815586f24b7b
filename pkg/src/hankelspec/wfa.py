"""Linear representations of rational series.

A representation ``<I, (M_x), T>`` computes ``r(u) = I^T M_{u_1} ... M_{u_n} T``.
Moments and the prefix/factor smoothing transforms all go through linear
solves against ``I_d - c * M_Σ``; no matrix is ever inverted explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .lang import WordLike, as_word

MODES = ("standard", "prefix", "factor")

POWER_ITERATIONS = 200
CONVERGENCE_MARGIN = 1e-6
SOLVE_RTOL = 1e-12


class DivergenceError(ArithmeticError):
    """The series does not converge (spectral radius of M_Σ >= 1 or singular resolvent)."""


class SymbolError(KeyError):
    """A string uses a symbol outside the alphabet."""


class NormalFormError(ValueError):
    """A representation is not in PFA normal form."""


def _frozen(a, shape=None) -> np.ndarray:
    a = np.array(a, dtype=float)
    if shape is not None and a.shape != shape:
        raise ValueError(f"expected shape {shape}, got {a.shape}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LinearRepresentation:
    alphabet: tuple
    initial: np.ndarray
    transitions: Mapping[str, np.ndarray]
    final: np.ndarray

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if not alphabet or len(set(alphabet)) != len(alphabet):
            raise ValueError(f"alphabet must be nonempty and duplicate-free: {alphabet!r}")
        initial = _frozen(self.initial).ravel()
        d = initial.shape[0]
        if d < 1:
            raise ValueError("dimension must be positive")
        final = _frozen(self.final).ravel()
        if final.shape != (d,):
            raise ValueError(f"final vector has length {final.shape[0]}, expected {d}")
        missing = set(alphabet) - set(self.transitions)
        if missing:
            raise ValueError(f"no transition matrix for symbols {sorted(missing)}")
        extra = set(self.transitions) - set(alphabet)
        if extra:
            raise ValueError(f"transition matrices for unknown symbols {sorted(extra)}")
        trans = {}
        for x in alphabet:
            m = np.asarray(self.transitions[x], dtype=float)
            if m.size != d * d:
                raise ValueError(f"matrix {x!r} has {m.size} entries, expected {d}x{d}")
            trans[x] = _frozen(m.reshape(d, d))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "final", final)
        object.__setattr__(self, "transitions", trans)

    @property
    def dim(self) -> int:
        return self.initial.shape[0]

    @property
    def m_sigma(self) -> np.ndarray:
        return sum(self.transitions.values())

    def replace(self, initial=None, transitions=None, final=None) -> "LinearRepresentation":
        return LinearRepresentation(
            self.alphabet,
            self.initial if initial is None else initial,
            self.transitions if transitions is None else transitions,
            self.final if final is None else final,
        )

    def __call__(self, u: WordLike) -> float:
        return evaluate(self, u)


def evaluate(rep: LinearRepresentation, u: WordLike) -> float:
    v = rep.initial
    for x in as_word(u):
        try:
            m = rep.transitions[x]
        except KeyError:
            raise SymbolError(f"symbol {x!r} not in alphabet {rep.alphabet!r}") from None
        v = v @ m
    return float(v @ rep.final)


def spectral_radius(m: np.ndarray, iterations: int = POWER_ITERATIONS) -> float:
    """Growth-rate power iteration from the normalized all-ones vector.

    The estimate is the geometric mean growth over the second half of the
    iterations, which also handles complex dominant eigenvalue pairs.
    """
    d = m.shape[0]
    x = np.ones(d) / np.sqrt(d)
    half = iterations // 2
    log_growth = 0.0
    for k in range(iterations):
        x = m @ x
        nrm = np.linalg.norm(x)
        if nrm == 0.0 or not np.isfinite(nrm):
            return 0.0 if nrm == 0.0 else float("inf")
        if k >= half:
            log_growth += np.log(nrm)
        x /= nrm
    return float(np.exp(log_growth / (iterations - half)))


@dataclass(frozen=True)
class ValidationReport:
    spectral_radius: float
    convergent: bool
    pfa_checked: bool = False
    pfa_valid: bool | None = None
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.convergent and (self.pfa_valid is not False)


def pfa_problems(rep: LinearRepresentation, tolerance: float = 1e-9) -> list:
    problems = []
    if (rep.initial < -tolerance).any():
        problems.append("initial weights contain negative entries")
    if (rep.final < -tolerance).any():
        problems.append("final weights contain negative entries")
    for x, m in rep.transitions.items():
        if (m < -tolerance).any():
            problems.append(f"matrix {x!r} contains negative entries")
    if abs(rep.initial.sum() - 1.0) > tolerance:
        problems.append(f"initial weights sum to {rep.initial.sum():.12g}, not 1")
    out = rep.final + rep.m_sigma.sum(axis=1)
    for i in np.flatnonzero(np.abs(out - 1.0) > tolerance):
        problems.append(f"state {i}: stop + outgoing weight = {out[i]:.12g}, not 1")
    return problems


def validate(rep: LinearRepresentation, require_pfa: bool = False, tolerance: float = 1e-9) -> ValidationReport:
    rho = spectral_radius(rep.m_sigma)
    convergent = rho < 1.0 - CONVERGENCE_MARGIN
    problems = [] if convergent else [f"spectral radius of M_Σ ≈ {rho:.6g} is not < 1"]
    if not require_pfa:
        return ValidationReport(rho, convergent, problems=problems)
    pfa = pfa_problems(rep, tolerance)
    return ValidationReport(rho, convergent, True, not pfa, problems + pfa)


@dataclass(frozen=True)
class PfaForm:
    """A representation certified to be in PFA normal form (samplable)."""

    rep: LinearRepresentation
    tolerance: float = 1e-9

    def __post_init__(self):
        problems = pfa_problems(self.rep, self.tolerance)
        if problems:
            raise NormalFormError("; ".join(problems))


def _check_convergent(m_sigma: np.ndarray, scale: float = 1.0):
    rho = spectral_radius(m_sigma) * scale
    if not rho < 1.0 - CONVERGENCE_MARGIN:
        raise DivergenceError(f"spectral radius {rho:.6g} of the series operator is not < 1")


def _solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise DivergenceError(f"resolvent is singular: {exc}") from None
    resid = np.linalg.norm(a @ x - b)
    scale = np.linalg.norm(a, 1) * np.linalg.norm(x) + np.linalg.norm(b)
    if not np.isfinite(resid) or resid > SOLVE_RTOL * max(scale, 1e-300) * a.shape[0]:
        raise DivergenceError(f"linear solve residual {resid:.3g} too large")
    return x


def series_sum(rep: LinearRepresentation) -> float:
    """``r(Σ*) = I^T (I_d - M_Σ)^{-1} T``."""
    return moment(rep, 1, "standard")


def _check_mode(mode: str, eta: float):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode != "standard" and not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")


def moment(rep: LinearRepresentation, k: int, mode: str = "standard", eta: float = 0.0) -> float:
    """Moment ``S^(k)`` of the series selected by ``mode`` and ``eta``.

    standard: ``I^T (I-M_Σ)^{-k} T``
    prefix:   ``I^T (I-M_Σ)^{-k} (I-ηM_Σ)^{-1} T``
    factor:   ``I^T (I-ηM_Σ)^{-1} (I-M_Σ)^{-k} (I-ηM_Σ)^{-1} T``
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    _check_mode(mode, eta)
    m = rep.m_sigma
    _check_convergent(m)
    eye = np.eye(rep.dim)
    resolvent = eye - m
    left = rep.initial
    x = rep.final
    if mode != "standard":
        smoothing = eye - eta * m
        x = _solve(smoothing, x)
        if mode == "factor":
            left = _solve(smoothing.T, left)
    for _ in range(k):
        x = _solve(resolvent, x)
    return float(left @ x)


def transform_rep(rep: LinearRepresentation, mode: str, eta: float) -> LinearRepresentation:
    """Representation of the η-smoothed prefix or factor series of ``rep``."""
    _check_mode(mode, eta)
    if mode == "standard":
        return rep
    m = rep.m_sigma
    _check_convergent(m, eta)
    smoothing = np.eye(rep.dim) - eta * m
    final = _solve(smoothing, rep.final)
    initial = _solve(smoothing.T, rep.initial) if mode == "factor" else rep.initial
    return rep.replace(initial=initial, final=final)


def de_smooth(rep: LinearRepresentation, mode: str, eta: float) -> LinearRepresentation:
    """Inverse of :func:`transform_rep`; recovers a representation of ``p``."""
    _check_mode(mode, eta)
    if mode == "standard" or eta == 0.0:
        return rep
    smoothing = np.eye(rep.dim) - eta * rep.m_sigma
    final = smoothing @ rep.final
    initial = smoothing.T @ rep.initial if mode == "factor" else rep.initial
    return rep.replace(initial=initial, final=final)

