"""Laplacian spectra: closed forms for the three named families, a cyclic
Jacobi eigensolver for everything else, the complement-spectrum map, and the
maximum-information graph predicate.

Eigenvalues are kept ascending.  Eigenvectors sit in the columns of
``Spectrum.vectors``, grouped level by level; ``Spectrum.levels`` lists the
distinct ``(eigenvalue, multiplicity)`` pairs in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    ConvergenceError,
    DegenerateSpectrumError,
    MissingZeroEigenvalueError,
    UnsupportedFamilyError,
)
from .graphs import Graph, GraphFamily, complement, connected_component_count, laplacian

# Relative gap under which two numeric eigenvalues are pooled into one level.
LEVEL_MERGE_TOL = 1e-8

ODD_CYCLE_BASES = ("complex_plus", "complex_minus", "real_cos", "real_sin")


@dataclass(frozen=True)
class EigvecChoice:
    """Selects a basis member for degenerate top levels.

    ``basis`` picks the convention for the doubly degenerate top level of an
    odd cycle (complex +/- phase pair, or their real cos/sin combinations);
    the chosen vector is placed first inside that level.  ``index`` is the
    1-based member used by probe builders inside a degenerate top level
    (the complete graph's ``l``).
    """

    basis: str = "complex_plus"
    index: int | None = None

    def __post_init__(self):
        if self.basis not in ODD_CYCLE_BASES:
            raise ValueError(
                f"unknown eigenvector basis {self.basis!r}; expected one of {ODD_CYCLE_BASES}"
            )
        if self.index is not None and self.index < 1:
            raise ValueError(f"eigenvector index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a real symmetric matrix.

    ``values`` repeats each eigenvalue per its multiplicity; ``levels`` holds
    the distinct ``(value, multiplicity)`` pairs, ascending.
    """

    values: np.ndarray
    vectors: np.ndarray
    levels: tuple[tuple[float, int], ...] = field(default=())

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        vectors = np.asarray(self.vectors)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "vectors", vectors)
        if np.any(np.diff(values) < -1e-12):
            raise ValueError("eigenvalues must be ascending")
        if sum(m for _, m in self.levels) != values.shape[0]:
            raise ValueError("level multiplicities must sum to the dimension")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def level_slice(self, level: int) -> slice:
        start = sum(m for _, m in self.levels[:level])
        return slice(start, start + self.levels[level][1])

    def level_vectors(self, level: int) -> np.ndarray:
        return self.vectors[:, self.level_slice(level)]

    @property
    def ground_energy(self) -> float:
        return self.levels[0][0]

    @property
    def top_energy(self) -> float:
        return self.levels[-1][0]


def _group_levels(values: np.ndarray, tol: float) -> tuple[tuple[float, int], ...]:
    levels: list[tuple[float, int]] = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[start] > tol:
            block = values[start:i]
            levels.append((float(block.mean()) + 0.0, len(block)))
            start = i
    return tuple(levels)


def _canonical_signs(vectors: np.ndarray) -> np.ndarray:
    # Fix the sign of each real eigenvector at its largest-magnitude entry so
    # repeated runs emit identical data.
    out = vectors.copy()
    for j in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, j])))
        if out[k, j] < 0:
            out[:, j] = -out[:, j]
    return out


def spectrum_numeric(matrix: np.ndarray) -> Spectrum:
    """Full eigendecomposition via cyclic Jacobi rotations.

    Near-equal eigenvalues (relative gap below ``LEVEL_MERGE_TOL``) are pooled
    into a single level.  Raises ``ConvergenceError`` if the sweep cap is hit.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.allclose(matrix, matrix.T, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    w, v, off, converged = kernels.jacobi_eigh(matrix)
    if not converged:
        raise ConvergenceError(
            f"Jacobi sweeps exhausted after {kernels.JACOBI_MAX_SWEEPS} iterations", off
        )
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = _canonical_signs(v[:, order])
    tol = LEVEL_MERGE_TOL * max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    return Spectrum(values=w, vectors=v, levels=_group_levels(w, tol))


def spectrum_closed_form(family: GraphFamily, choice: EigvecChoice | None = None) -> Spectrum:
    """Tabulated spectra for cycle, complete, and star graphs."""
    choice = choice or EigvecChoice()
    n = family.n
    if family.kind == "cycle":
        return _cycle_spectrum(n, choice)
    if family.kind == "complete":
        return _complete_spectrum(n)
    if family.kind == "star":
        return _star_spectrum(n)
    raise UnsupportedFamilyError(
        f"closed-form spectrum known only for cycle/complete/star, not {family.kind!r}"
    )


def _cycle_spectrum(n: int, choice: EigvecChoice) -> Spectrum:
    k = np.arange(n)
    vectors = np.empty((n, n), dtype=np.complex128)
    values = np.empty(n)

    def dft_column(m: int) -> np.ndarray:
        return np.exp(-2j * np.pi * m * k / n) / np.sqrt(n)

    def eigval(m: int) -> float:
        return float(2.0 * (1.0 - np.cos(2.0 * np.pi * m / n)))

    vectors[:, 0] = dft_column(0)
    values[0] = 0.0
    col = 1
    levels: list[tuple[float, int]] = [(0.0, 1)]
    half = (n - 1) // 2
    for m in range(1, half + 1):
        e = eigval(m)
        if n % 2 == 1 and m == half:
            # top level of an odd cycle: basis per the caller's convention,
            # the distinguished member first
            plus = ((-1.0) ** k) * np.exp(1j * np.pi * k / n) / np.sqrt(n)
            minus = ((-1.0) ** k) * np.exp(-1j * np.pi * k / n) / np.sqrt(n)
            cos_comb = np.sqrt(2.0 / n) * ((-1.0) ** k) * np.cos(np.pi * k / n) + 0j
            sin_comb = np.sqrt(2.0 / n) * ((-1.0) ** k) * np.sin(np.pi * k / n) + 0j
            pair = {
                "complex_plus": (plus, minus),
                "complex_minus": (minus, plus),
                "real_cos": (cos_comb, sin_comb),
                "real_sin": (sin_comb, cos_comb),
            }[choice.basis]
            vectors[:, col] = pair[0]
            vectors[:, col + 1] = pair[1]
        else:
            vectors[:, col] = dft_column(m)
            vectors[:, col + 1] = dft_column(n - m)
        values[col] = e
        values[col + 1] = e
        levels.append((e, 2))
        col += 2
    if n % 2 == 0:
        vectors[:, col] = dft_column(n // 2)
        values[col] = 4.0
        levels.append((4.0, 1))
        col += 1
    return Spectrum(values=values, vectors=vectors, levels=tuple(levels))


def _complete_spectrum(n: int) -> Spectrum:
    vectors = np.zeros((n, n))
    vectors[:, 0] = 1.0 / np.sqrt(n)
    for l in range(1, n):
        vectors[:l, l] = 1.0
        vectors[l, l] = -float(l)
        vectors[:, l] /= np.sqrt(l * (l + 1))
    values = np.concatenate([[0.0], np.full(n - 1, float(n))])
    levels = ((0.0, 1), (float(n), n - 1)) if n > 1 else ((0.0, 1),)
    return Spectrum(values=values, vectors=vectors, levels=levels)


def _star_spectrum(n: int) -> Spectrum:
    if n == 2:
        # the two-vertex hub graph has no middle level
        vectors = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
        return Spectrum(np.array([0.0, 2.0]), vectors, ((0.0, 1), (2.0, 1)))
    vectors = np.zeros((n, n))
    vectors[:, 0] = 1.0 / np.sqrt(n)
    for l in range(1, n - 1):
        vectors[1 : l + 1, l] = 1.0
        vectors[l + 1, l] = -float(l)
        vectors[:, l] /= np.sqrt(l * (l + 1))
    vectors[0, n - 1] = n - 1.0
    vectors[1:, n - 1] = -1.0
    vectors[:, n - 1] /= np.sqrt(n * (n - 1.0))
    values = np.concatenate([[0.0], np.ones(n - 2), [float(n)]])
    return Spectrum(values, vectors, ((0.0, 1), (1.0, n - 2), (float(n), 1)))


def complement_spectrum(spectrum: Spectrum) -> Spectrum:
    """Spectrum of the complement graph's Laplacian, eigenvectors carried over.

    The all-ones direction keeps eigenvalue 0; every direction orthogonal to
    it maps from eigenvalue ``e`` to ``n - e``.
    """
    n = spectrum.n
    if abs(spectrum.values[0]) > 1e-8:
        raise MissingZeroEigenvalueError(
            f"not a Laplacian spectrum: smallest eigenvalue {spectrum.values[0]:.3e} != 0"
        )
    vectors = np.array(spectrum.vectors, dtype=np.complex128, copy=True)
    ones = np.ones(n, dtype=np.complex128) / np.sqrt(n)

    # Rotate the zero eigenspace so its first basis vector is the all-ones
    # direction (degenerate zero level = disconnected input graph).
    zero_cols = [j for j in range(n) if abs(spectrum.values[j]) <= 1e-8]
    basis = [ones]
    for j in zero_cols:
        if len(basis) == len(zero_cols):
            break
        w = vectors[:, j].copy()
        for b in basis:
            w -= (b.conj() @ w) * b
        norm_w = np.linalg.norm(w)
        if norm_w > 1e-8:
            basis.append(w / norm_w)
    if len(basis) != len(zero_cols):
        raise MissingZeroEigenvalueError(
            "all-ones vector does not lie in the zero eigenspace; not a Laplacian spectrum"
        )
    for j, b in zip(zero_cols, basis):
        vectors[:, j] = b

    new_values = np.empty(n)
    for j in range(n):
        if j == zero_cols[0]:
            new_values[j] = 0.0
        else:
            new_values[j] = n - spectrum.values[j]
    order = np.argsort(new_values, kind="stable")
    new_values = new_values[order]
    vectors = vectors[:, order]
    if np.max(np.abs(vectors.imag)) == 0.0:
        vectors = vectors.real
    tol = LEVEL_MERGE_TOL * max(1.0, float(np.max(np.abs(new_values))))
    return Spectrum(values=new_values, vectors=vectors, levels=_group_levels(new_values, tol))


def max_qfi_graph_predicate(g: Graph) -> tuple[bool, float]:
    """Whether the graph reaches the largest possible top Laplacian eigenvalue.

    Returns ``(is_max, mu_top)``: ``is_max`` is decided combinatorially from
    the complement's connectivity, ``mu_top`` comes from the numeric solver.
    The two views must agree (top eigenvalue equals the vertex count exactly
    when the complement is disconnected).
    """
    is_max = connected_component_count(complement(g)) >= 2
    spectrum = spectrum_numeric(laplacian(g))
    mu_top = float(spectrum.values[-1])
    assert is_max == (abs(mu_top - g.n) <= 1e-8), (
        f"connectivity and spectral views disagree: is_max={is_max}, mu_top={mu_top}, n={g.n}"
    )
    return is_max, mu_top


def top_level_vector(spectrum: Spectrum, choice: EigvecChoice | None = None) -> np.ndarray:
    """Member of the highest level used for probe construction."""
    if len(spectrum.levels) < 2:
        raise DegenerateSpectrumError("spectrum has a single level; no top eigenvector distinct from the ground one")
    top = spectrum.level_vectors(len(spectrum.levels) - 1)
    member = 0
    if choice is not None and choice.index is not None:
        if choice.index > top.shape[1]:
            raise DegenerateSpectrumError(
                f"top level has {top.shape[1]} members, index {choice.index} out of range"
            )
        member = choice.index - 1
    return top[:, member]
