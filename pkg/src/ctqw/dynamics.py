"""Walker dynamics under H = L + lambda * L^2.

Covers spectral time evolution, per-family closed-form distributions, the
long-time average distribution, localization and coherence measures, the
short-time ring variance law, and the hub-graph periodicity analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import UnsupportedFamilyError
from .graphs import Graph, GraphFamily, build_family, laplacian
from .spectra import (
    LEVEL_MERGE_TOL,
    EigvecChoice,
    Spectrum,
    spectrum_closed_form,
    spectrum_numeric,
)

CLOSED_FORM_FAMILIES = ("cycle", "complete", "star")


def angular_frequency(n: int, lam: float) -> float:
    """Revival frequency of the fully connected and hub graphs: n(1 + lam*n)/2."""
    return 0.5 * n * (1.0 + lam * n)


@dataclass(frozen=True)
class PerturbedWalk:
    """A graph, its Laplacian spectrum, and the quadratic coupling strength.

    The hopping rate is fixed to 1, so time and energy are dimensionless.
    ``family`` is set when the walk was built from a named family; closed-form
    evaluators key off it.
    """

    graph: Graph
    lam: float
    spectrum: Spectrum
    family: GraphFamily | None = None

    def __post_init__(self):
        lap = laplacian(self.graph)
        resid = np.max(np.abs(lap @ self.spectrum.vectors - self.spectrum.vectors * self.spectrum.values))
        if resid > 1e-10:
            raise ValueError(f"spectrum inconsistent with graph Laplacian (residual {resid:.3e})")

    @classmethod
    def from_graph(cls, graph: Graph, lam: float) -> "PerturbedWalk":
        return cls(graph, float(lam), spectrum_numeric(laplacian(graph)))

    @classmethod
    def from_family(
        cls,
        kind: str,
        n: int,
        lam: float,
        choice: EigvecChoice | None = None,
        parts: tuple[int, int] | None = None,
    ) -> "PerturbedWalk":
        family = GraphFamily(kind, n, parts)
        graph = build_family(family)
        if kind in CLOSED_FORM_FAMILIES:
            spectrum = spectrum_closed_form(family, choice)
        else:
            spectrum = spectrum_numeric(laplacian(graph))
        return cls(graph, float(lam), spectrum, family)

    @property
    def n(self) -> int:
        return self.graph.n

    def energies(self, lam: float | None = None) -> np.ndarray:
        """Eigenvalues of H = L + lam*L^2 in the Laplacian eigenbasis."""
        lam = self.lam if lam is None else lam
        eps = self.spectrum.values
        return eps + lam * eps * eps


@dataclass(frozen=True)
class WalkerState:
    """Normalized complex amplitudes over vertices at one time instant."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amp)
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"walker state norm {norm} departs from 1 by more than 1e-12")

    @property
    def n(self) -> int:
        return self.amplitudes.shape[0]


def localized_state(n: int, vertex: int) -> WalkerState:
    if not 0 <= vertex < n:
        raise ValueError(f"vertex {vertex} out of range for n={n}")
    amp = np.zeros(n, dtype=np.complex128)
    amp[vertex] = 1.0
    return WalkerState(amp)


@dataclass(frozen=True)
class ProbDist:
    """Vertex probability vector: tiny negative dust clamped, then renormalized."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=np.float64, copy=True)
        if np.any(p < -1e-14):
            raise ValueError(f"probability entry {p.min()} below -1e-14")
        p[p < 0.0] = 0.0
        total = float(p.sum())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {total}, expected 1 within 1e-10")
        p /= total
        object.__setattr__(self, "p", p)

    def __len__(self) -> int:
        return self.p.shape[0]

    def __getitem__(self, k):
        return self.p[k]


def evolve(walk: PerturbedWalk, psi0: WalkerState, t: float, lam: float | None = None) -> WalkerState:
    """Apply the spectral propagator for time t to psi0."""
    if psi0.n != walk.n:
        raise ValueError(f"state has {psi0.n} amplitudes, walk has {walk.n} vertices")
    v = walk.spectrum.vectors
    phases = np.exp(-1j * walk.energies(lam) * t)
    amp = v @ (phases * (v.conj().T @ psi0.amplitudes))
    return WalkerState(amp, time=psi0.time + t)


def probability_distribution(psi: WalkerState) -> ProbDist:
    return ProbDist(np.abs(psi.amplitudes) ** 2)


def closed_form_probability(kind: str, n: int, lam: float, start: int, target: int, t: float) -> float:
    """Analytic vertex probability for the three named families (no eigensolve).

    The hub graph supports ``start`` 0 (the hub) or 1 (an outer vertex).
    """
    if not 0 <= target < n:
        raise ValueError(f"target vertex {target} out of range for n={n}")
    if kind == "cycle":
        if not 0 <= start < n:
            raise ValueError(f"start vertex {start} out of range for n={n}")
        grid = kernels.cycle_prob_grid(n, lam, start, np.array([target]), np.array([t]))
        return float(grid[0, 0])
    omega = angular_frequency(n, lam)
    if kind == "complete":
        if not 0 <= start < n:
            raise ValueError(f"start vertex {start} out of range for n={n}")
        s2 = math.sin(omega * t) ** 2
        if target == start:
            return 1.0 - 4.0 * (n - 1) / n**2 * s2
        return 4.0 / n**2 * s2
    if kind == "star":
        if start == 0:
            # hub start evolves exactly like the fully connected graph
            return closed_form_probability("complete", n, lam, 0, target, t)
        if start != 1:
            raise UnsupportedFamilyError(
                "outer starts are all equivalent; relabel the start as vertex 1"
            )
        omega1 = angular_frequency(1, lam)
        s_n = math.sin(omega * t) ** 2
        s_1 = math.sin(omega1 * t) ** 2
        s_d = math.sin((omega - omega1) * t) ** 2
        if target == 0:
            return 4.0 / n**2 * s_n
        if target == 1:
            return 1.0 - 4.0 / (n * (n - 1)) * (
                (n - 2) * s_1 + (n - 2) / (n - 1) * s_d + s_n / n
            )
        return 4.0 / (n * (n - 1)) * (s_1 + s_d / (n - 1) - s_n / n)
    raise UnsupportedFamilyError(f"no closed-form probability for family {kind!r}")


def average_probability(walk: PerturbedWalk, psi0: WalkerState) -> ProbDist:
    """Infinite-time average distribution.

    Cross terms between non-degenerate energies of H average to zero, so the
    result sums the projections of psi0 onto each degenerate energy group.
    The coupling can merge Laplacian levels into one group, hence grouping
    happens on the perturbed energies.
    """
    energies = walk.energies()
    order = np.argsort(energies, kind="stable")
    tol = LEVEL_MERGE_TOL * max(1.0, float(np.max(np.abs(energies))))
    v = walk.spectrum.vectors[:, order]
    e_sorted = energies[order]
    out = np.zeros(walk.n)
    start = 0
    for i in range(1, walk.n + 1):
        if i == walk.n or e_sorted[i] - e_sorted[start] > tol:
            block = v[:, start:i]
            proj = block @ (block.conj().T @ psi0.amplitudes)
            out += np.abs(proj) ** 2
            start = i
    return ProbDist(out)


def ipr(dist: ProbDist) -> float:
    """Inverse participation ratio: sum of squared vertex probabilities."""
    return float(np.sum(dist.p**2))


@dataclass(frozen=True)
class CompleteIprBound:
    """Minimum-over-time localization bound for the fully connected graph."""

    n: int
    value: float
    branch: str  # "small" (n <= 4) or "large" (n > 4)

    def attaining_time(self, lam: float, k: int = 0, sign: int = 1) -> float:
        scale = self.n + lam * self.n**2
        if self.branch == "small":
            return 2.0 * (sign * math.asin(math.sqrt(self.n) / 2.0) + math.pi * k) / scale
        return 2.0 * math.pi * (0.5 + k) / scale


def complete_ipr_bound(n: int) -> CompleteIprBound:
    """Smallest reachable IPR on the fully connected graph; 1/n only for n <= 4."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if n <= 4:
        return CompleteIprBound(n, 1.0 / n, "small")
    value = 1.0 - 8.0 / n + 24.0 / n**2 - 16.0 / n**3
    return CompleteIprBound(n, value, "large")


def coherence(psi: WalkerState) -> float:
    """Sum of absolute off-diagonal density-matrix entries in the vertex basis.

    For a pure state this collapses to (sum_j |psi_j|)^2 - 1.
    """
    s = float(np.sum(np.abs(psi.amplitudes)))
    return max(s * s - 1.0, 0.0)


def cycle_coherence_short_time(lam: float, t: float) -> float:
    """Leading-order coherence growth on the ring: 4(|lam| + |1+4lam|) t.

    Valid for t << 1 (documented validity t <= 0.05); minimized at lam = -1/4
    where the nearest-neighbor hopping amplitude vanishes.
    """
    return 4.0 * (abs(lam) + abs(1.0 + 4.0 * lam)) * t


@dataclass(frozen=True)
class CycleVariance:
    """Empirical position variance on the ring vs. its short-time ballistic law."""

    empirical: float
    short_time_model: float
    wavefront_warning: bool


# Probability mass at the extreme ring vertices beyond which the vertex-index
# variance stops tracking the ballistic law.
_WAVEFRONT_EDGE_MASS = 1e-9


def cycle_variance(n: int, lam: float, t: float, start: int | None = None) -> CycleVariance:
    """Vertex-index variance of a ring walker against [40(lam+1/5)^2 + 2/5] t^2.

    The model treats the vertex index as the position observable, so it holds
    while the wavefront stays clear of vertices 0 and n-1; a warning flag is
    raised once those vertices carry noticeable mass.
    """
    if n % 2 != 0:
        raise ValueError(f"the variance law is stated for even n, got {n}")
    if t < 0:
        raise ValueError("t must be >= 0")
    if start is None:
        start = n // 2
    walk = PerturbedWalk.from_family("cycle", n, lam)
    dist = probability_distribution(evolve(walk, localized_state(n, start), t))
    k = np.arange(n)
    mean = float(np.dot(k, dist.p))
    empirical = float(np.dot(k * k, dist.p)) - mean * mean
    model = (40.0 * (lam + 0.2) ** 2 + 0.4) * t * t
    warning = bool(dist.p[0] + dist.p[n - 1] > _WAVEFRONT_EDGE_MASS)
    return CycleVariance(empirical, model, warning)


@dataclass(frozen=True)
class PeriodReport:
    """Commensurability analysis of the hub-graph distribution.

    ``p`` and ``q`` are the reconstructed period ratios (None when the ratio
    is undefined at a special coupling or fails reconstruction).  ``period``
    is the full revival period when one exists.
    """

    p: Fraction | None
    q: Fraction | None
    periodic: bool
    period: float | None
    special_case: str | None = None


# Rational reconstruction cutoffs for the period ratios.
_MAX_DENOMINATOR = 10**6
_RATIO_RESIDUAL_TOL = 1e-9


def _reconstruct_ratio(x: float) -> Fraction | None:
    frac = Fraction(x).limit_denominator(_MAX_DENOMINATOR)
    if abs(float(frac) - x) <= _RATIO_RESIDUAL_TOL:
        return frac
    return None


def star_periodicity(n: int, lam: float) -> PeriodReport:
    """Decide whether the outer-start distribution on the hub graph repeats.

    The three sine frequencies are commensurable exactly when both period
    ratios are rational; the couplings -1, -1/n and -1/(n+1) suppress one
    frequency each and are always periodic.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    omega_n = angular_frequency(n, lam)
    omega_1 = angular_frequency(1, lam)
    if abs(lam + 1.0) <= 1e-12:
        return PeriodReport(None, None, True, math.pi / abs(omega_n), "omega1=0")
    if abs(lam + 1.0 / n) <= 1e-12:
        return PeriodReport(None, None, True, math.pi / abs(omega_1), "omegaN=0")
    if abs(lam + 1.0 / (n + 1.0)) <= 1e-12:
        return PeriodReport(None, None, True, math.pi / abs(omega_1), "omegaN=omega1")
    t_n = math.pi / abs(omega_n)
    p = _reconstruct_ratio(abs(omega_n / omega_1))
    q = _reconstruct_ratio(abs(omega_n / (omega_n - omega_1)))
    if p is None or q is None:
        return PeriodReport(p, q, False, None)
    # common denominator c: p = a/c, q = b/c; period = lcm(a, b)/c * t_n
    c = math.lcm(p.denominator, q.denominator)
    a = p.numerator * (c // p.denominator)
    b = q.numerator * (c // q.denominator)
    period = math.lcm(a, b) / c * t_n
    return PeriodReport(p, q, True, period)
