"""Spectral learning of a linear representation from a Hankel matrix.

The learner takes the top right singular vectors ``R`` of the Hankel block
``H[U, V]`` and builds a ``rank``-dimensional representation from them:

* initial vector ``R^T P`` where ``P[v]`` is the (empirical) series on V,
* final vector ``R[ε]``,
* ``M_x`` the transpose of the operator ``N_x`` that maps ``R[v]`` to
  ``R[xv]``, fitted by least squares over the v with ``xv`` in V.

The row space of H (functions ``v -> a^T M_v T``) is closed under
``v -> xv``, so on an exact Hankel of full rank ``N_x`` is exact even
though V is finite, and the evaluated product reads the string left to
right.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np
import scipy.sparse as sp

from .hankel import (DEFAULT_SEED, DENSE_LIMIT, FactoredHankel, SparseHankel, empirical_hankel,
                     exact_hankel, forward_vectors)
from .lang import EPSILON, Basis, BasisError, basis
from .wfa import LinearRepresentation, de_smooth

SUBSPACE_MAX_ITER = 300
SUBSPACE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SvdResult:
    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return self.singular_values.shape[0]


@dataclass(frozen=True, eq=False)
class LearnedModel:
    rep: LinearRepresentation
    mode: str
    eta: float
    rank: int
    bases: tuple
    smoothed: LinearRepresentation | None = None
    svd: SvdResult | None = None


def _factored_svd(A: np.ndarray, B: np.ndarray, d: int) -> SvdResult:
    qa, ra = np.linalg.qr(A)
    qb, rb = np.linalg.qr(B.T)
    u, s, vt = np.linalg.svd(ra @ rb.T)
    return SvdResult(qa @ u[:, :d], s[:d], qb @ vt[:d].T)


def _dense_svd(m: np.ndarray, d: int) -> SvdResult:
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return SvdResult(u[:, :d], s[:d], vt[:d].T)


def _subspace_svd(m, d: int, seed: int) -> SvdResult:
    """Block subspace iteration with 2d columns and a Rayleigh-Ritz step per sweep."""
    rows, cols = m.shape
    p = min(2 * d, rows, cols)
    q = np.random.default_rng(seed).standard_normal((cols, p))
    q, _ = np.linalg.qr(q)
    prev = None
    for _ in range(SUBSPACE_MAX_ITER):
        y, _ = np.linalg.qr(m @ q)
        small = (m.T @ y).T
        u, s, vt = np.linalg.svd(small, full_matrices=False)
        q = vt.T
        top = s[:d]
        if prev is not None and np.all(np.abs(top - prev) <= SUBSPACE_TOL * max(top[0], 1e-300)):
            break
        prev = top
    return SvdResult(y @ u[:, :d], s[:d], vt[:d].T)


def truncated_svd(h, d: int, method: str = "auto", seed: int = DEFAULT_SEED) -> SvdResult:
    """Top-``d`` singular triplets of a Hankel (sparse, factored or plain matrix)."""
    if isinstance(h, FactoredHankel):
        h = (h.A, h.B)
    elif isinstance(h, SparseHankel):
        h = h.matrix
    shape = (h[0].shape[0], h[1].shape[1]) if isinstance(h, tuple) else h.shape
    if not 1 <= d <= min(shape):
        raise ValueError(f"rank {d} must lie in [1, {min(shape)}] for a {shape[0]}x{shape[1]} matrix")
    if isinstance(h, tuple):
        A, B = h
        if d <= A.shape[1]:
            return _factored_svd(A, B, d)
        h = A @ B
    if method == "auto":
        method = "dense" if shape[0] * shape[1] <= DENSE_LIMIT else "subspace"
    if method == "dense":
        return _dense_svd(h.toarray() if sp.issparse(h) else np.asarray(h, float), d)
    if method == "subspace":
        return _subspace_svd(sp.csr_matrix(h) if sp.issparse(h) else np.asarray(h, float), d, seed)
    raise ValueError(f"unknown method {method!r}")


def extract_representation(svd: SvdResult, V: Basis, p_hat: Union[Mapping, np.ndarray]) -> LinearRepresentation:
    """Build the learned representation from right singular vectors on V."""
    if EPSILON not in V.index:
        raise BasisError("the column basis must contain the empty string")
    R = svd.right
    if R.shape[0] != len(V):
        raise ValueError(f"right singular vectors have {R.shape[0]} rows, basis has {len(V)}")
    if isinstance(p_hat, Mapping):
        P = np.array([float(p_hat.get(v, 0.0)) for v in V.strings])
    else:
        P = np.asarray(p_hat, dtype=float).ravel()
    d = R.shape[1]
    transitions = {}
    for x in V.alphabet:
        src, dst = [], []
        for i, v in enumerate(V.strings):
            j = V.index.get((x,) + v)
            if j is not None:
                src.append(i)
                dst.append(j)
        if src:
            shift, *_ = np.linalg.lstsq(R[src], R[dst], rcond=None)
        else:
            shift = np.zeros((d, d))
        transitions[x] = shift.T
    return LinearRepresentation(V.alphabet, R.T @ P, transitions, R[V.index[EPSILON]])


def _first_row(h) -> np.ndarray:
    if isinstance(h, FactoredHankel):
        return h.A[h.row_basis.index[EPSILON]] @ h.B
    return h.matrix.getrow(h.row_basis.index[EPSILON]).toarray().ravel()


def learn_from_hankel(h: Union[SparseHankel, FactoredHankel], rank: int, mode: str = "standard",
                      eta: float = 0.0, method: str = "auto") -> LearnedModel:
    """Learn from a prebuilt Hankel; the series on V is read off its ε row."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if EPSILON not in h.row_basis.index or EPSILON not in h.col_basis.index:
        raise BasisError("both bases must contain the empty string")
    svd = truncated_svd(h, rank, method)
    smoothed = extract_representation(svd, h.col_basis, _first_row(h))
    rep = de_smooth(smoothed, mode, eta)
    return LearnedModel(rep, mode, eta, rank, (h.row_basis, h.col_basis), smoothed, svd)


def learn(sample, U: Basis, V: Basis, mode: str = "standard", eta: float = 0.0, rank: int = 1,
          method: str = "auto") -> LearnedModel:
    h = empirical_hankel(sample, U, V, mode, eta)
    return learn_from_hankel(h, rank, mode, eta, method)


def learn_exact(rep: LinearRepresentation, U: Basis, V: Basis, mode: str = "standard", eta: float = 0.0,
                rank: int | None = None) -> LearnedModel:
    """Learn from the exact Hankel of ``rep`` (consistency checks)."""
    h = exact_hankel(rep, U, V, mode, eta)
    return learn_from_hankel(h, rep.dim if rank is None else rank, mode, eta)


def principal_cosines(r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    r1, r2 = np.asarray(r1, float), np.asarray(r2, float)
    if r1.shape != r2.shape:
        raise ValueError(f"bases must have equal shapes, got {r1.shape} and {r2.shape}")
    return np.clip(np.linalg.svd(r1.T @ r2, compute_uv=False), 0.0, 1.0)


def subspace_distance(r1: np.ndarray, r2: np.ndarray) -> float:
    """``1 - mean(cos θ_i)`` over the principal angles between the column spans."""
    return float(1.0 - principal_cosines(r1, r2).mean())


def largest_principal_sine(r1: np.ndarray, r2: np.ndarray) -> float:
    c = principal_cosines(r1, r2).min()
    return float(np.sqrt(max(0.0, 1.0 - c * c)))


def stewart_bound(norm_diff: float, sigma_min_target: float) -> float:
    """Perturbation bound on sin of the largest principal angle; values > 1 are vacuous."""
    if sigma_min_target <= 0:
        raise ValueError("sigma_min of the target Hankel must be positive")
    return max(0.0, norm_diff / sigma_min_target)


def series_values(rep: LinearRepresentation, max_len: int, alphabet=None) -> np.ndarray:
    """``rep(u)`` for all u in Σ^{<=max_len}, quasi-lexicographic order."""
    b = basis(rep.alphabet if alphabet is None else alphabet, max_len)
    return forward_vectors(rep.initial, rep, b) @ rep.final


def l1_distance_upto(rep1: LinearRepresentation, rep2: LinearRepresentation, max_len: int) -> float:
    if set(rep1.alphabet) != set(rep2.alphabet):
        raise ValueError(f"alphabets differ: {rep1.alphabet} vs {rep2.alphabet}")
    a = series_values(rep1, max_len)
    b = series_values(rep2, max_len, rep1.alphabet)
    return float(np.abs(a - b).sum())
