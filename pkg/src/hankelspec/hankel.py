"""Empirical and exact Hankel matrices, and the norms used to compare them.

Empirical Hankels are sparse: each sample string only touches the (u, v)
pairs whose concatenation is the string (standard), one of its prefixes
(prefix) or one of its factors (factor). Exact Hankels of a rational series
are kept in factored form ``A @ B`` with inner dimension ``d``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, svds

from .lang import Basis, Word, as_word
from .wfa import MODES, LinearRepresentation, SymbolError, transform_rep

DEFAULT_SEED = 0xC0FFEE
DENSE_LIMIT = 4_000_000
FLUSH_BELOW = 1e-300


@dataclass(frozen=True, eq=False)
class SparseHankel:
    row_basis: Basis
    col_basis: Basis
    matrix: sp.csr_matrix
    sample_size: int
    mode: str = "standard"
    eta: float = 0.0

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def entries(self) -> dict:
        coo = self.matrix.tocoo()
        return {(int(r), int(c)): float(v) for r, c, v in zip(coo.row, coo.col, coo.data)}

    def entry(self, u, v) -> float:
        return float(self.matrix[self.row_basis.position(u), self.col_basis.position(v)])

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class FactoredHankel:
    """Exact Hankel ``H[u, v] = alpha_u . beta_v`` with ``A`` rows alpha_u, ``B`` columns beta_v."""

    row_basis: Basis
    col_basis: Basis
    A: np.ndarray
    B: np.ndarray
    mode: str = "standard"
    eta: float = 0.0

    @property
    def shape(self):
        return (self.A.shape[0], self.B.shape[1])

    @property
    def rank_bound(self) -> int:
        return self.A.shape[1]

    def entry(self, u, v) -> float:
        return float(self.A[self.row_basis.position(u)] @ self.B[:, self.col_basis.position(v)])

    def dense(self) -> np.ndarray:
        return self.A @ self.B


def _check_mode(mode, eta):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode != "standard" and not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")


def _splits(q: Word, U: Basis, V: Basis, weight: float, out: list):
    """Append (row, col, weight) for every split q = u v with u in U and v in V."""
    n = len(q)
    lo = max(0, n - V.max_len)
    hi = min(n, U.max_len)
    for i in range(lo, hi + 1):
        r = U.index.get(q[:i])
        if r is None:
            continue
        c = V.index.get(q[i:])
        if c is not None:
            out.append((r, c, weight))


def _contributions(w: Word, U: Basis, V: Basis, mode: str, eta: float) -> list:
    out: list = []
    n = len(w)
    if mode == "standard" or (eta == 0.0 and mode != "standard"):
        _splits(w, U, V, 1.0, out)
        return out
    reach = U.max_len + V.max_len
    if mode == "prefix":
        for j in range(min(n, reach) + 1):
            _splits(w[:j], U, V, eta ** (n - j), out)
        return out
    for a in range(n + 1):
        for b in range(a, min(n, a + reach) + 1):
            _splits(w[a:b], U, V, eta ** (n - (b - a)), out)
    return out


def _assemble(triples: list, shape, scale: float = 1.0) -> sp.csr_matrix:
    if not triples:
        return sp.csr_matrix(shape, dtype=float)
    rows, cols, vals = zip(*triples)
    m = sp.coo_matrix((np.asarray(vals) * scale, (rows, cols)), shape=shape).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    return m


def per_string_hankel(w, U: Basis, V: Basis, mode: str = "standard", eta: float = 0.0) -> SparseHankel:
    _check_mode(mode, eta)
    w = as_word(w)
    m = _assemble(_contributions(w, U, V, mode, eta), (len(U), len(V)))
    return SparseHankel(U, V, m, 1, mode, eta)


def empirical_hankel(sample: Iterable, U: Basis, V: Basis, mode: str = "standard", eta: float = 0.0) -> SparseHankel:
    """Mean of the per-string Hankels over ``sample``.

    Repeated strings are processed once and weighted by their count, in
    order of first appearance, so the reduction order is fixed.
    """
    _check_mode(mode, eta)
    counts = Counter(as_word(w) for w in sample)
    n = sum(counts.values())
    if n == 0:
        raise ValueError("empirical_hankel needs a nonempty sample")
    triples = []
    for w, k in counts.items():
        triples.extend((r, c, k * val) for r, c, val in _contributions(w, U, V, mode, eta))
    m = _assemble(triples, (len(U), len(V)), 1.0 / n)
    return SparseHankel(U, V, m, n, mode, eta)


def _stack(rep: LinearRepresentation, alphabet) -> np.ndarray:
    try:
        return np.stack([rep.transitions[x] for x in alphabet])
    except KeyError as exc:
        raise SymbolError(f"basis symbol {exc.args[0]!r} not in model alphabet {rep.alphabet!r}") from None


def forward_vectors(initial: np.ndarray, rep: LinearRepresentation, U: Basis) -> np.ndarray:
    """Rows ``initial^T M_u`` for u in U, level by level (alpha_{ux} = alpha_u M_x)."""
    ms = _stack(rep, U.alphabet)
    levels = [initial[None, :]]
    for _ in range(U.max_len):
        nxt = np.einsum("pd,sde->pse", levels[-1], ms).reshape(-1, rep.dim)
        levels.append(nxt)
    a = np.concatenate(levels)
    a[np.abs(a) < FLUSH_BELOW] = 0.0
    return a


def backward_vectors(final: np.ndarray, rep: LinearRepresentation, V: Basis) -> np.ndarray:
    """Columns ``M_v final`` for v in V (beta_{xv} = M_x beta_v)."""
    ms = _stack(rep, V.alphabet)
    levels = [final[None, :]]
    for _ in range(V.max_len):
        nxt = np.einsum("sde,qe->sqd", ms, levels[-1]).reshape(-1, rep.dim)
        levels.append(nxt)
    b = np.concatenate(levels).T.copy()
    b[np.abs(b) < FLUSH_BELOW] = 0.0
    return b


def exact_hankel(rep: LinearRepresentation, U: Basis, V: Basis, mode: str = "standard",
                 eta: float = 0.0) -> FactoredHankel:
    _check_mode(mode, eta)
    t = transform_rep(rep, mode, eta)
    A = forward_vectors(t.initial, t, U)
    B = backward_vectors(t.final, t, V)
    return FactoredHankel(U, V, A, B, mode, eta)


# --- norms -----------------------------------------------------------------

def _as_operand(m):
    if isinstance(m, SparseHankel):
        return m.matrix
    if isinstance(m, FactoredHankel):
        return (m.A, m.B)
    if isinstance(m, tuple):
        return (np.asarray(m[0], float), np.asarray(m[1], float))
    if sp.issparse(m):
        return sp.csr_matrix(m)
    return np.asarray(m, dtype=float)


def _shape(op):
    if isinstance(op, tuple):
        return (op[0].shape[0], op[1].shape[1])
    return op.shape


def _dense(op) -> np.ndarray:
    if isinstance(op, tuple):
        return op[0] @ op[1]
    if sp.issparse(op):
        return op.toarray()
    return op


def _matvec(op, x):
    if isinstance(op, tuple):
        return op[0] @ (op[1] @ x)
    return op @ x


def _rmatvec(op, y):
    if isinstance(op, tuple):
        return op[1].T @ (op[0].T @ y)
    return op.T @ y


@dataclass(frozen=True)
class NormEstimate:
    value: float
    method: str
    iterations: int = 0
    rel_change: float = 0.0
    converged: bool = True

    def __float__(self):
        return self.value


def norm_diff_estimate(hs, hp=None, method: str = "auto", rtol: float = 1e-9, max_iter: int = 5000,
                       patience: int = 10, seed: int = DEFAULT_SEED) -> NormEstimate:
    """Largest singular value of ``hs - hp`` without forming the difference.

    Methods:

    * ``"power"``: power iteration on the Gram operator ``D^T D`` with
      ``D x = hs x - A (B x)``, stopped once the Rayleigh quotient changes by
      less than ``rtol`` (relative) for ``patience`` consecutive iterations.
      Cheap, but slow and inexact when the top two singular values are close.
    * ``"lanczos"``: ARPACK on the same matrix-free operator; accurate to
      machine precision.
    * ``"dense"``: materializes the difference and calls LAPACK.
    * ``"auto"``: dense up to ``DENSE_LIMIT`` entries, else lanczos.
    """
    left = _as_operand(hs)
    right = None if hp is None else _as_operand(hp)
    shape = _shape(left)
    if right is not None and _shape(right) != shape:
        raise ValueError(f"shape mismatch: {shape} vs {_shape(right)}")
    if method == "auto":
        method = "dense" if shape[0] * shape[1] <= DENSE_LIMIT else "lanczos"
    if 0 in shape:
        return NormEstimate(0.0, method)
    if method == "dense":
        d = _dense(left) if right is None else _dense(left) - _dense(right)
        return NormEstimate(float(np.linalg.norm(d, 2)), "dense")

    def apply(x):
        y = _matvec(left, x)
        return y if right is None else y - _matvec(right, x)

    def apply_t(y):
        x = _rmatvec(left, y)
        return x if right is None else x - _rmatvec(right, y)

    rng = np.random.default_rng(seed)
    if method == "lanczos":
        if min(shape) <= 2:
            return norm_diff_estimate(hs, hp, "dense")
        op = LinearOperator(shape, matvec=apply, rmatvec=apply_t, dtype=float)
        v0 = rng.standard_normal(min(shape))
        s = svds(op, k=1, tol=0, v0=v0, return_singular_vectors=False)
        return NormEstimate(float(s[0]), "lanczos")
    if method != "power":
        raise ValueError(f"unknown method {method!r}")

    x = rng.standard_normal(shape[1])
    x /= np.linalg.norm(x)
    lam_prev = None
    calm = 0
    change = np.inf
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = apply(x)
        lam = float(y @ y)
        g = apply_t(y)
        gn = np.linalg.norm(g)
        if gn == 0.0:
            return NormEstimate(float(np.sqrt(lam)), "power", it, 0.0, True)
        if lam_prev is not None:
            change = abs(lam - lam_prev) / max(lam, 1e-300)
            calm = calm + 1 if change < rtol else 0
            if calm >= patience:
                return NormEstimate(float(np.sqrt(lam)), "power", it, change, True)
        lam_prev = lam
        x = g / gn
    return NormEstimate(float(np.sqrt(lam)), "power", max_iter, change, False)


def spectral_norm_diff(hs, hp=None, method: str = "auto", **kwargs) -> float:
    return norm_diff_estimate(hs, hp, method, **kwargs).value


def induced_norms(m) -> tuple:
    """(max column abs-sum, max row abs-sum, largest singular value)."""
    op = _as_operand(m)
    if isinstance(op, tuple):
        op = _dense(op)
    a = abs(op)
    norm1 = float(a.sum(axis=0).max()) if a.shape[0] else 0.0
    norm_inf = float(a.sum(axis=1).max()) if a.shape[1] else 0.0
    return norm1, norm_inf, spectral_norm_diff(op)


def dilate(z):
    """Symmetric dilation ``[[0, Z], [Z^T, 0]]``; sparse in, sparse out."""
    if sp.issparse(z):
        return sp.bmat([[None, z], [z.T, None]], format="csr")
    z = np.asarray(z, dtype=float)
    m, n = z.shape
    return np.block([[np.zeros((m, m)), z], [z.T, np.zeros((n, n))]])


# --- coordinate-list export ------------------------------------------------

def write_hankel(path, h: SparseHankel):
    coo = h.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w", newline="\n") as fh:
        fh.write(f"hankel {h.mode} {float(h.eta)!r} {h.shape[0]} {h.shape[1]} {h.sample_size}\n")
        for k in order:
            fh.write(f"{coo.row[k]} {coo.col[k]} {float(coo.data[k])!r}\n")


def read_hankel(path, U: Basis, V: Basis) -> SparseHankel:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 6 or header[0] != "hankel":
            raise ValueError(f"{path}: bad header {' '.join(header)!r}")
        mode, eta, nu, nv, n = header[1], float(header[2]), int(header[3]), int(header[4]), int(header[5])
        if (nu, nv) != (len(U), len(V)):
            raise ValueError(f"{path}: matrix is {nu}x{nv}, bases give {len(U)}x{len(V)}")
        triples = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'row col value'")
            triples.append((int(parts[0]), int(parts[1]), float(parts[2])))
    return SparseHankel(U, V, _assemble(triples, (nu, nv)), n, mode, eta)
