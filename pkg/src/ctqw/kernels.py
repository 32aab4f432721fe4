"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time from the ``CTQW_NUMBA`` environment
variable: any of ``0/false/off/no`` selects the pure-numpy path, everything
else (the default) compiles the loop kernels with ``numba.njit``.  Both paths
implement identical contracts; ``benchmarks/bench_kernels.py`` times them
against each other.
"""

from __future__ import annotations

import os

import numpy as np


def _env_wants_numba() -> bool:
    value = os.environ.get("CTQW_NUMBA", "1").strip().lower()
    return value not in ("0", "false", "off", "no")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and _env_wants_numba()

# Convergence contract of the cyclic Jacobi solver: stop when the off-diagonal
# Frobenius norm drops below JACOBI_TOL_FACTOR * ||m||_F, cap at JACOBI_MAX_SWEEPS.
JACOBI_TOL_FACTOR = 1e-13
JACOBI_MAX_SWEEPS = 100


def _jacobi_eigh_impl(a):
    """Cyclic Jacobi diagonalization of a symmetric matrix (in place).

    Returns ``(w, v, off, converged)`` with unsorted eigenvalues ``w``,
    eigenvector columns ``v``, the final off-diagonal Frobenius norm ``off``
    and a convergence flag.  ``a`` is destroyed.
    """
    n = a.shape[0]
    v = np.eye(n)
    norm = np.sqrt(np.sum(a * a))
    tol = JACOBI_TOL_FACTOR * norm

    def _offdiag(m):
        # summed directly over off-diagonal entries; a difference of squares
        # would cancel catastrophically near convergence
        total = 0.0
        for i in range(m.shape[0]):
            for j in range(m.shape[0]):
                if i != j:
                    total += m[i, j] * m[i, j]
        return np.sqrt(total)

    off = _offdiag(a)
    sweeps = 0
    while off > tol and sweeps < JACOBI_MAX_SWEEPS:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e8:
                    # asymptotic small root; also keeps theta*theta from overflowing
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweeps += 1
        off = _offdiag(a)

    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i]
    return w, v, off, off <= tol


def _cycle_prob_grid_loops(n, lam, start, vertices, times):
    """Pairwise-cosine form of the ring walk distribution, explicit loops."""
    eps = 2.0 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))
    energy = eps + lam * eps * eps
    out = np.full((times.shape[0], vertices.shape[0]), 1.0 / n)
    two_over_n2 = 2.0 / (n * n)
    for a in range(n):
        for b in range(a + 1, n):
            freq = energy[a] - energy[b]
            coef = 2.0 * np.pi * (a - b) / n
            for it in range(times.shape[0]):
                ft = freq * times[it]
                for ik in range(vertices.shape[0]):
                    out[it, ik] += two_over_n2 * np.cos(ft - coef * (start - vertices[ik]))
    return out


def _cycle_prob_grid_numpy(n, lam, start, vertices, times):
    """Vectorized fallback for the same pair sum."""
    eps = 2.0 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))
    energy = eps + lam * eps * eps
    ia, ib = np.triu_indices(n, k=1)
    freq = energy[ia] - energy[ib]                      # (P,)
    coef = 2.0 * np.pi * (ia - ib) / n                  # (P,)
    delta = start - np.asarray(vertices)                # (K,)
    out = np.full((len(times), len(delta)), 1.0 / n)
    # chunk over times so the (T, K, P) broadcast stays small
    phase_k = coef[None, :] * delta[:, None]            # (K, P)
    for it, t in enumerate(np.asarray(times)):
        out[it] += (2.0 / (n * n)) * np.cos(freq[None, :] * t - phase_k).sum(axis=1)
    return out


if NUMBA_ENABLED:
    jacobi_eigh_raw = numba.njit(cache=True)(_jacobi_eigh_impl)
    cycle_prob_grid_raw = numba.njit(cache=True)(_cycle_prob_grid_loops)
else:
    jacobi_eigh_raw = _jacobi_eigh_impl
    cycle_prob_grid_raw = _cycle_prob_grid_numpy


def jacobi_eigh(matrix: np.ndarray):
    """Diagonalize a dense symmetric matrix with cyclic Jacobi rotations.

    Returns ``(w, v, off, converged)``; eigenvalues are unsorted, callers
    order and post-process.  The input is not modified.
    """
    a = np.array(matrix, dtype=np.float64, order="C", copy=True)
    return jacobi_eigh_raw(a)


def cycle_prob_grid(n: int, lam: float, start: int, vertices, times) -> np.ndarray:
    """Ring-walk probabilities on a (times x vertices) grid, no eigensolve."""
    vertices = np.asarray(vertices, dtype=np.int64)
    times = np.asarray(times, dtype=np.float64)
    return cycle_prob_grid_raw(n, float(lam), int(start), vertices, times)


def warmup() -> None:
    """Force JIT compilation of the kernels so later timings are clean."""
    m = np.array([[2.0, -1.0], [-1.0, 2.0]])
    jacobi_eigh(m)
    cycle_prob_grid(5, 0.1, 0, np.arange(5), np.array([0.3]))
