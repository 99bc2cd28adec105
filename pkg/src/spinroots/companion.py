"""Hermitean tridiagonal companion matrices via the modified Euclidean chain.

Starting from a monic ``P`` of degree ``N`` the chain is

    P_1 = P,  P_2 = P' / N,
    P_k = q_k P_{k+1} - r_k,

with ``P_{k+2} = r_k / d_k`` and ``d_k = lead(r_k)`` when ``r_k != 0``, and
``P_{k+2} = P_{k+1}' / lead(P_{k+1}')``, ``d_k = 0`` when ``r_k == 0``.  It stops
once ``P_{k+1} == 1``, with ``q_k = P_k``.  The symmetric tridiagonal matrix
with diagonal ``-q_k(0)`` and off-diagonal ``sqrt(d_k)`` then has ``P`` as its
characteristic polynomial.  A negative ``d_k`` proves that ``P`` has a
non-real zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import (
    DEFAULT_ZERO_TOL,
    FLOAT,
    RATIONAL,
    Polynomial,
    Scalar,
    derivative,
    divide_negated,
    evaluate,
    monic_normalize,
)

# float mode: negative d_k within this scale-relative band are treated as zero
DEFAULT_CLAMP_TOL = 1e-9


class ChainError(ArithmeticError):
    """Base class for chain verdicts; carries the partial chain data."""

    def __init__(self, message: str, k: int, d: list, q0: list):
        super().__init__(message)
        self.k = k
        self.d = list(d)
        self.q0 = list(q0)


class NegativeD(ChainError):
    """Some ``d_k < 0``: the polynomial does not have only real zeros."""

    def __init__(self, k: int, d_k: Scalar, d: list, q0: list):
        super().__init__(f"d_{k} = {d_k} < 0: not all zeros real", k, d, q0)
        self.d_k = d_k


class DegreeAnomaly(ChainError):
    """A quotient of degree other than one appeared before termination."""

    def __init__(self, k: int, quotient_degree: int, d: list, q0: list):
        super().__init__(
            f"quotient q_{k} has degree {quotient_degree} (expected 1)", k, d, q0
        )
        self.quotient_degree = quotient_degree


@dataclass(frozen=True)
class MeaChain:
    """Trace of one chain run.

    ``q0[k-1]`` is ``q_k(0)`` and ``d[k-1]`` is ``d_k``; ``degenerate[k-1]``
    is true when step ``k`` hit a zero remainder.
    """

    polys: tuple
    quotients: tuple
    q0: tuple
    d: tuple
    degenerate: tuple
    mode: str
    warnings: tuple = field(default=())

    @property
    def degree(self) -> int:
        return len(self.q0)


def run_mea(
    p: Polynomial,
    zero_tol: float = DEFAULT_ZERO_TOL,
    clamp_tol: float = DEFAULT_CLAMP_TOL,
) -> MeaChain:
    """Run the modified Euclidean chain on a monic polynomial.

    The arithmetic mode of ``p`` is used throughout. In float mode
    ``zero_tol`` drives the zero-remainder test and negative ``d_k`` with
    ``|d_k| <= clamp_tol * max|P_k|`` are clamped to zero with a warning.

    Raises :class:`NegativeD` or :class:`DegreeAnomaly`.
    """
    n = p.degree
    if n < 1:
        raise ValueError("chain requires degree >= 1")
    if p.leading != 1:
        raise ValueError("chain requires a monic polynomial")
    floating = p.mode == FLOAT

    polys = [p, derivative(p).scale(Fraction(1, n) if not floating else 1.0 / n)]
    quotients: list[Polynomial] = []
    q0: list[Scalar] = []
    d: list[Scalar] = []
    flags: list[bool] = []
    warnings: list[str] = []

    k = 1
    while not polys[k].is_one():
        cur, nxt = polys[k - 1], polys[k]
        div = divide_negated(cur, nxt, zero_tol)
        q, r = div.quotient, div.negated_remainder
        if q.degree != 1:
            raise DegreeAnomaly(k, q.degree, d, q0)
        quotients.append(q)
        q0.append(q.coeffs[0])

        degenerate = r.is_zero()
        if not degenerate:
            d_k = r.leading
            if d_k < 0:
                if floating and -d_k <= clamp_tol * cur.max_abs():
                    warnings.append(f"d_{k} = {d_k!r} clamped to 0")
                    degenerate = True
                else:
                    raise NegativeD(k, d_k, d, q0)
        if degenerate:
            d.append(p.coeffs[0] * 0)
            polys.append(monic_normalize(derivative(nxt)))
        else:
            d.append(d_k)
            polys.append(monic_normalize(r))
        flags.append(degenerate)
        k += 1

    last = polys[k - 1]
    if last.degree != 1:
        raise DegreeAnomaly(k, last.degree, d, q0)
    quotients.append(last)
    q0.append(last.coeffs[0])
    return MeaChain(
        polys=tuple(polys),
        quotients=tuple(quotients),
        q0=tuple(q0),
        d=tuple(d),
        degenerate=tuple(flags),
        mode=p.mode,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class TridiagonalSymmetric:
    """Real symmetric tridiagonal matrix stored as two vectors."""

    diag: tuple
    offdiag: tuple

    def __post_init__(self):
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise ValueError("offdiag must have one entry fewer than diag")
        if any(b < 0 for b in self.offdiag):
            raise ValueError("offdiag entries must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        m = np.diag(np.asarray(self.diag, dtype=float))
        if self.n > 1:
            off = np.asarray(self.offdiag, dtype=float)
            m += np.diag(off, 1) + np.diag(off, -1)
        return m

    def gershgorin_bound(self) -> float:
        """Radius of a disc about the origin containing every eigenvalue."""
        best = 0.0
        for k, a in enumerate(self.diag):
            left = self.offdiag[k - 1] if k > 0 else 0.0
            right = self.offdiag[k] if k < self.n - 1 else 0.0
            best = max(best, abs(a) + left + right)
        return best


def build_companion(chain: MeaChain) -> TridiagonalSymmetric:
    return TridiagonalSymmetric(
        diag=tuple(float(-q) + 0.0 for q in chain.q0),
        offdiag=tuple(math.sqrt(d) for d in chain.d),
    )


def companion_of(p: Polynomial, **kw) -> TridiagonalSymmetric:
    """Normalize, run the chain and build the matrix in one call."""
    return build_companion(run_mea(monic_normalize(p), **kw))


def char_poly_eval(m: TridiagonalSymmetric, x: float) -> float:
    """Monic characteristic polynomial ``(-1)^N det(C - xE)`` at ``x``.

    Uses the determinant recurrence of the leading principal minors of
    ``xE - C``, which is already sign-adjusted.
    """
    prev, cur = 1.0, 1.0
    for k, a in enumerate(m.diag):
        b2 = m.offdiag[k - 1] ** 2 if k > 0 else 0.0
        prev, cur = cur, (x - a) * cur - b2 * prev
    return cur


def sturm_count(m: TridiagonalSymmetric, x: float) -> int:
    """Number of eigenvalues strictly below ``x``.

    Same recurrence as :func:`char_poly_eval`, in ratio form
    ``u_k = D_k / D_{k-1}`` so that it cannot overflow; the count is the
    number of negative pivots of ``C - xE``.  Pivots decrease in ``x``, so
    an exact zero pivot is replaced by its positive left-hand limit.
    """
    tiny = np.finfo(float).tiny
    count = 0
    u = 1.0
    for k, a in enumerate(m.diag):
        b2 = m.offdiag[k - 1] ** 2 if k > 0 else 0.0
        u = (a - x) - (b2 / u if k > 0 else 0.0)
        if u == 0.0:
            u = tiny
        if u < 0.0:
            count += 1
    return count


@dataclass(frozen=True)
class FrobeniusCompanion:
    """Non-symmetric companion with ones on the superdiagonal."""

    coeffs: tuple  # p_0 .. p_{N-1} of the monic polynomial

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def last_row(self) -> tuple:
        return tuple(-c for c in self.coeffs)

    def dense(self) -> np.ndarray:
        n = self.n
        m = np.zeros((n, n))
        if n > 1:
            m[np.arange(n - 1), np.arange(1, n)] = 1.0
        m[-1, :] = [float(c) for c in self.last_row()]
        return m


def build_frobenius(p: Polynomial) -> FrobeniusCompanion:
    if p.degree < 1:
        raise ValueError("companion requires degree >= 1")
    if p.leading != 1:
        raise ValueError("companion requires a monic polynomial")
    return FrobeniusCompanion(tuple(p.coeffs[:-1]))


def identity_residuals(
    m: TridiagonalSymmetric, p: Polynomial, points
) -> list[float]:
    """``|char_poly_eval(m, x) - p(x)| / (1 + |p(x)|)`` at each point.

    ``p`` is evaluated exactly when it is rational.
    """
    out = []
    for x in points:
        x = float(x)
        ref = evaluate(p, Fraction(x)) if p.mode == RATIONAL else evaluate(p, x)
        ref = float(ref)
        out.append(abs(char_poly_eval(m, x) - ref) / (1.0 + abs(ref)))
    return out


def sample_points(radius: float, count: int = 20) -> np.ndarray:
    r = 1.0 + abs(radius)
    return np.linspace(-r, r, count)
