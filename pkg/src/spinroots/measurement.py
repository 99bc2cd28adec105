"""Simulated generalized Stern-Gerlach measurements of the companion observable.

The apparatus is modelled by its outcome statistics only: on the maximally
mixed state every eigenvector is equally likely, so an outcome is an
eigenvalue drawn with probability ``multiplicity / N``.  Eigenvalues come from
Sturm bisection on the tridiagonal matrix, independently of the classical
root oracle.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .companion import TridiagonalSymmetric, sturm_count
from .poly import FLOAT, Polynomial, evaluate

DEFAULT_EIG_TOL = 1e-18
DEFAULT_CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted ascending, repeated according to multiplicity.

    ``values`` and ``multiplicities`` give the distinct eigenvalues.
    ``eigenvalues[i]`` is the lower end of its final bisection bracket and
    the true eigenvalue lies within ``bracket_radius[i]`` above it.
    """

    eigenvalues: tuple
    values: tuple
    multiplicities: tuple
    bracket_radius: tuple
    bound: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def default_cluster_tol(self) -> float:
        return DEFAULT_CLUSTER_TOL * (1.0 + self.bound)


def _bisect(m: TridiagonalSymmetric, k: int, lo: float, hi: float, width: float):
    """Shrink ``[lo, hi]`` around the k-th smallest eigenvalue (0-based)."""
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sturm_count(m, mid) > k:
            hi = mid
        else:
            lo = mid
    return lo, hi


def eigenvalues_tridiagonal(
    m: TridiagonalSymmetric, tol: float = DEFAULT_EIG_TOL
) -> Spectrum:
    """All eigenvalues of ``m`` by Sturm-sequence bisection.

    Each eigenvalue is bracketed to width ``tol * (1 + G)`` with ``G`` the
    Gershgorin bound, or to adjacent floats if that comes first.  The lower
    bracket end is reported, so an exactly representable eigenvalue whose
    Sturm counts are computed exactly is returned exactly.  Eigenvalues whose
    final brackets share a Sturm count jump of two or more are reported as
    one multiple eigenvalue.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = m.n
    g = m.gershgorin_bound()
    pad = 1e-12 * (1.0 + g)
    lo0, hi0 = -g - pad, g + pad
    width = tol * (1.0 + g)

    brackets = [_bisect(m, k, lo0, hi0, width) for k in range(n)]
    eig = [lo for lo, _ in brackets]

    values, mults = [], []
    k = 0
    while k < n:
        # indices k .. count(hi) - 1 all sit inside the final bracket of k
        j = max(k + 1, sturm_count(m, brackets[k][1]))
        for i in range(k, j):
            eig[i] = eig[k]
        values.append(eig[k])
        mults.append(j - k)
        k = j
    radius = tuple(hi - lo for lo, hi in brackets)
    return Spectrum(tuple(eig), tuple(values), tuple(mults), radius, g)


@dataclass(frozen=True)
class MixedState:
    """The maximally mixed state ``I / dimension``."""

    dimension: int

    def density(self) -> np.ndarray:
        return np.eye(self.dimension) / self.dimension

    def born_weights(self, spec: Spectrum) -> np.ndarray:
        return np.asarray(spec.multiplicities, dtype=float) / self.dimension


def measure_once(spec: Spectrum, state: MixedState, rng: np.random.Generator) -> float:
    """One simulated apparatus reading: an eigenvalue of the observable."""
    if state.dimension != spec.n:
        raise ValueError("state and spectrum dimensions differ")
    return spec.eigenvalues[int(rng.integers(spec.n))]


@dataclass(frozen=True)
class Shot:
    index: int
    apparatus: int
    value: float


@dataclass(frozen=True)
class MeasurementRecord:
    shots: tuple
    seed: int | None
    config: dict = field(default_factory=dict)

    def outcomes(self) -> list[float]:
        return [s.value for s in self.shots]

    def histogram(self) -> dict:
        counts: dict = {}
        for s in self.shots:
            counts[s.value] = counts.get(s.value, 0) + 1
        return dict(sorted(counts.items()))


@dataclass(frozen=True)
class SearchResult:
    distinct_outcomes: tuple
    shots_used: int
    complete: bool
    reconstructed_poly: Polynomial
    max_residual: float | None
    record: MeasurementRecord


def default_max_shots(n: int) -> int:
    return math.ceil(n * (math.log(n) + 10))


def _cluster_add(found: list, value: float, tol: float) -> bool:
    for v in found:
        if abs(v - value) <= tol:
            return False
    found.append(value)
    return True


def run_search(
    spec: Spectrum,
    max_shots: int,
    cluster_tol: float | None = None,
    rng: np.random.Generator | None = None,
    poly: Polynomial | None = None,
    seed: int | None = None,
) -> SearchResult:
    """Measure repeatedly until every distinct eigenvalue has been seen.

    Stops early once the clustered outcome count reaches the number of
    distinct eigenvalues, otherwise after ``max_shots``.  ``poly``, when
    given, is used for the residuals ``|P(zeta)|`` of the found values.
    """
    if max_shots < 1:
        raise ValueError("max_shots must be at least 1")
    if rng is None:
        rng = np.random.default_rng(seed)
    if cluster_tol is None:
        cluster_tol = spec.default_cluster_tol()
    state = MixedState(spec.n)
    target = len(spec.values)
    found: list[float] = []
    shots = []
    while len(shots) < max_shots and len(found) < target:
        value = measure_once(spec, state, rng)
        shots.append(Shot(len(shots), 0, value))
        _cluster_add(found, value, cluster_tol)
    found.sort()

    mult = dict(zip(spec.values, spec.multiplicities))
    factors = []
    for v in found:
        factors.extend([v] * mult.get(v, 1))
    residual = None
    if poly is not None and found:
        residual = max(abs(float(evaluate(poly.as_mode(FLOAT), v))) for v in found)
    record = MeasurementRecord(
        tuple(shots), seed, {"mode": "sequential", "max_shots": max_shots}
    )
    return SearchResult(
        distinct_outcomes=tuple(found),
        shots_used=len(shots),
        complete=len(found) == target,
        reconstructed_poly=reconstruct_product(factors),
        max_residual=residual,
        record=record,
    )


def substream(root: int, apparatus_id: int) -> np.random.Generator:
    """Independent generator keyed by ``(root, apparatus_id)``.

    The counter-based Philox bit generator is seeded through a spawned
    :class:`numpy.random.SeedSequence`, so streams do not depend on the order
    in which they are created.
    """
    ss = np.random.SeedSequence(root, spawn_key=(apparatus_id,))
    return np.random.Generator(np.random.Philox(ss))


def run_parallel(
    spec: Spectrum,
    m: int,
    root: int,
    shots_per_apparatus: int = 1,
    workers: int = 1,
) -> MeasurementRecord:
    """``m`` identical apparatus measuring copies of the mixed state at once.

    Results depend only on ``(spec, m, root, shots_per_apparatus)``; the
    ``workers`` thread count does not change them.
    """
    if m < 1:
        raise ValueError("apparatus count must be at least 1")
    state = MixedState(spec.n)

    def one(a: int) -> list[float]:
        rng = substream(root, a)
        return [measure_once(spec, state, rng) for _ in range(shots_per_apparatus)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per = list(pool.map(one, range(m)))
    else:
        per = [one(a) for a in range(m)]
    shots = []
    for a, values in enumerate(per):
        for v in values:
            shots.append(Shot(len(shots), a, v))
    return MeasurementRecord(
        tuple(shots),
        root,
        {"mode": "parallel", "apparatus": m, "shots_per_apparatus": shots_per_apparatus},
    )


def reconstruct_product(roots) -> Polynomial:
    """Monic coefficients of ``prod (x - zeta)``, lowest power first."""
    coeffs = [1.0]
    for r in roots:
        r = float(r)
        nxt = [0.0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return Polynomial(coeffs, FLOAT)
