"""Singular value decomposition kernel (A = G * diag(s) * D^T).

The factorization is implemented here rather than delegated: a one-sided
Jacobi sweep scheme for the exact path and seeded randomized subspace
iteration (Householder re-orthonormalization, Ritz-value drift stopping)
for the truncated path. numpy supplies array arithmetic only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .vectorize import SparseMatrix

DENSE_CAP = 1024          # max min-dimension for the exact path
SWEEP_CAP = 60            # Jacobi sweeps before giving up
JACOBI_TOL = 1e-12        # relative off-diagonal threshold
SIGMA_CLAMP = 1e-12       # s_i below SIGMA_CLAMP * s_0 snap to zero
RITZ_DRIFT_TOL = 1e-10    # truncated-path stopping rule
MIN_POWER_ITERS = 4
MAX_POWER_ITERS = 500


class NoConvergence(NumericalError):
    def __init__(self, iterations: int):
        self.iterations = iterations
        super().__init__(f"Jacobi sweeps did not converge after {iterations} iterations")


@dataclass(frozen=True)
class SvdFactors:
    """g: t x m, s: length m descending >= 0, d: d x m; columns orthonormal."""

    g: np.ndarray
    s: np.ndarray
    d: np.ndarray
    m: int
    rank_deficient: bool = False

    def truncated(self, k: int) -> "SvdFactors":
        if k > self.m:
            raise ValueError(f"k={k} exceeds retained rank {self.m}")
        return SvdFactors(g=self.g[:, :k], s=self.s[:k], d=self.d[:, :k], m=k,
                          rank_deficient=self.rank_deficient)


def _as_dense(a) -> np.ndarray:
    if isinstance(a, SparseMatrix):
        return a.to_dense()
    return np.asarray(a, dtype=float)


def _householder_vectors(a: np.ndarray) -> list[np.ndarray | None]:
    """In-place QR reduction of a copy; returns the reflector list."""
    r = np.array(a, dtype=float)
    m, n = r.shape
    vs: list[np.ndarray | None] = []
    for k in range(min(m, n)):
        x = r[k:, k]
        alpha = math.sqrt(float(x @ x))
        if alpha == 0.0:
            vs.append(None)
            continue
        if x[0] >= 0:
            alpha = -alpha
        v = x.copy()
        v[0] -= alpha
        v /= math.sqrt(float(v @ v))
        r[k:, k:] -= 2.0 * np.outer(v, v @ r[k:, k:])
        vs.append(v)
    return vs


def _apply_reflectors(vs: list[np.ndarray | None], m: int, ncols: int) -> np.ndarray:
    """Q = H_0 ... H_{r-1} @ I[:, :ncols]; always has orthonormal columns."""
    q = np.eye(m, ncols)
    for k in reversed(range(len(vs))):
        v = vs[k]
        if v is None:
            continue
        q[k:, :] -= 2.0 * np.outer(v, v @ q[k:, :])
    return q


def orthonormal_columns(a: np.ndarray) -> np.ndarray:
    """Orthonormal basis with a's column count (spans a when full rank)."""
    m, n = a.shape
    return _apply_reflectors(_householder_vectors(a), m, n)


def _complete_basis(u: np.ndarray, have: int, want: int) -> np.ndarray:
    """Fill columns have..want-1 of u with an orthonormal complement."""
    vs = _householder_vectors(u[:, :have])
    q = _apply_reflectors(vs, u.shape[0], want)
    out = u.copy()
    out[:, have:want] = q[:, have:want]
    return out


def _jacobi_rotate(ut: np.ndarray, vt: np.ndarray | None, max_sweeps: int,
                   tol: float) -> int:
    """Cyclic one-sided Jacobi over column pairs, accumulating rotations.

    ``ut`` holds the working matrix TRANSPOSED (row i = column i) so each
    pair touches contiguous memory. Squared column norms are maintained
    incrementally; they only gate the rotation test and are recomputed
    exactly by the caller. Stops after a full sweep applies no rotation;
    raises NoConvergence at the sweep cap. Returns sweeps used.
    """
    n = ut.shape[0]
    if n < 2:
        return 0
    norms2 = np.einsum("ij,ij->i", ut, ut)
    for sweep in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            ri = ut[i]
            for j in range(i + 1, n):
                alpha = norms2[i]
                beta = norms2[j]
                if alpha <= 0.0 or beta <= 0.0:
                    continue
                rj = ut[j]
                gamma = float(ri @ rj)
                if abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                new_i = c * ri - s * rj
                ut[j] = s * ri + c * rj
                ut[i] = new_i
                twist = 2.0 * c * s * gamma
                norms2[i] = c * c * alpha - twist + s * s * beta
                norms2[j] = s * s * alpha + twist + c * c * beta
                if vt is not None:
                    wi = vt[i]
                    wj = vt[j]
                    new_vi = c * wi - s * wj
                    vt[j] = s * wi + c * wj
                    vt[i] = new_vi
        if not rotated:
            return sweep + 1
    raise NoConvergence(max_sweeps)


def _jacobi_svd(a: np.ndarray, max_sweeps: int = SWEEP_CAP,
                ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD of a tall-or-square matrix via one-sided Jacobi.

    Returns (u, s, v) with a = u @ diag(s) @ v.T; u has a's shape, v is
    square, s is descending with entries below SIGMA_CLAMP * s[0] set to 0.
    """
    ut = np.array(a.T, dtype=float, order="C")
    n = ut.shape[0]
    vt = np.eye(n)
    _jacobi_rotate(ut, vt, max_sweeps, JACOBI_TOL)
    norms = np.sqrt(np.einsum("ij,ij->i", ut, ut))
    order = np.argsort(-norms, kind="stable")
    norms = norms[order]
    u = np.array(ut[order].T, order="C")
    v = np.array(vt[order].T, order="C")
    s = norms.copy()
    if s.size and s[0] > 0:
        s = np.where(s < SIGMA_CLAMP * s[0], 0.0, s)
    exact_zero = norms == 0.0
    nz = ~exact_zero
    u[:, nz] /= norms[nz]
    if exact_zero.any():
        # zero columns carry no direction; extend to an orthonormal basis
        first_zero = int(np.argmax(exact_zero))
        u = _complete_basis(u, first_zero, n)
    return u, s, v


def _ritz_values(y: np.ndarray, max_sweeps: int = SWEEP_CAP) -> np.ndarray:
    """Singular values of y (no vector accumulation), descending."""
    ut = np.array(y.T, dtype=float, order="C")
    _jacobi_rotate(ut, None, max_sweeps, JACOBI_TOL)
    norms = np.sqrt(np.einsum("ij,ij->i", ut, ut))
    return np.sort(norms)[::-1]


def svd_exact(a, max_sweeps: int = SWEEP_CAP, dense_cap: int = DENSE_CAP) -> SvdFactors:
    """Full thin factorization; m = min(t, d) factors are returned."""
    dense = _as_dense(a)
    t, d = dense.shape
    if min(t, d) > dense_cap:
        raise ValueError(f"min(t, d) = {min(t, d)} exceeds dense cap {dense_cap}")
    if t >= d:
        u, s, v = _jacobi_svd(dense, max_sweeps)
        return SvdFactors(g=u, s=s, d=v, m=d)
    u, s, v = _jacobi_svd(dense.T, max_sweeps)
    return SvdFactors(g=v, s=s, d=u, m=t)


def _mul(a, x: np.ndarray) -> np.ndarray:
    return a.dot_dense(x) if isinstance(a, SparseMatrix) else a @ x


def _tmul(a, x: np.ndarray) -> np.ndarray:
    return a.t_dot_dense(x) if isinstance(a, SparseMatrix) else a.T @ x


def svd_truncated(a, k: int, seed: int, oversample: int = 10,
                  min_iters: int = MIN_POWER_ITERS, max_iters: int = MAX_POWER_ITERS,
                  drift_tol: float = RITZ_DRIFT_TOL) -> SvdFactors:
    """Top-k factors via seeded randomized subspace iteration.

    A Gaussian start block of width k + oversample is powered through
    A A^T with Householder re-orthonormalization each half step until the
    Ritz singular values drift less than drift_tol (at least min_iters
    power iterations, at most max_iters). When the numerical rank falls
    short of k the factors are truncated to the achievable rank and
    flagged instead of being padded.
    """
    shape = (a.rows, a.cols) if isinstance(a, SparseMatrix) else np.asarray(a).shape
    t, d = shape
    if not 1 <= k <= min(t, d):
        raise ValueError(f"k must be in [1, {min(t, d)}], got {k}")
    b = min(k + oversample, min(t, d))
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((d, b))
    q = orthonormal_columns(_mul(a, omega))
    prev: np.ndarray | None = None
    check_every = 3  # Ritz extraction costs a Jacobi pass; amortize it
    for it in range(max_iters):
        w = orthonormal_columns(_tmul(a, q))
        y = _mul(a, w)
        q = orthonormal_columns(y)
        if it + 1 < min_iters or (it + 1) % check_every:
            continue
        # drift of the k wanted Ritz values; the oversampled tail converges
        # slowly and is only there to condition the subspace
        ritz = _ritz_values(y)[:k]
        if prev is not None:
            scale = max(float(ritz[0]), 1e-300)
            if float(np.max(np.abs(ritz - prev))) <= drift_tol * scale:
                break
        prev = ritz
    bt = _tmul(a, q)                 # (q.T @ a).T, shape d x b
    ub, s, vb = _jacobi_svd(bt)      # q.T a = vb s ub.T
    g = q @ vb
    d_mat = ub
    if s.size == 0 or s[0] == 0.0:
        achievable = 0
    else:
        achievable = int(np.count_nonzero(s[:k] > 0.0))
    if achievable < k:
        return SvdFactors(g=g[:, :achievable], s=s[:achievable], d=d_mat[:, :achievable],
                          m=achievable, rank_deficient=True)
    return SvdFactors(g=g[:, :k], s=s[:k], d=d_mat[:, :k], m=k)


def reconstruction_error(a, factors: SvdFactors, k: int) -> float:
    """Frobenius norm of A - G_k S_k D_k^T by explicit dense subtraction."""
    if k > factors.m:
        raise ValueError(f"k={k} exceeds retained rank {factors.m}")
    dense = _as_dense(a)
    approx = factors.g[:, :k] @ (factors.s[:k, None] * factors.d[:, :k].T)
    return float(np.linalg.norm(dense - approx))
