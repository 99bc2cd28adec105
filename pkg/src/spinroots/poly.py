"""Dense univariate polynomials over exact rationals or float64.

Coefficients are stored in ascending order, ``coeffs[n]`` multiplying ``x**n``.
A polynomial is *rational* when every coefficient is a :class:`Fraction` and
*float* otherwise; arithmetic between the two modes is refused so that an
exact computation can never silently degrade.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float"

# scale-relative threshold below which a float coefficient counts as zero
DEFAULT_ZERO_TOL = 1e-12


class ModeMismatch(TypeError):
    """Raised when rational and float polynomials are combined."""


def _coerce(c, mode: str | None) -> Scalar:
    if mode == RATIONAL:
        return Fraction(c)
    if mode == FLOAT:
        return float(c)
    if isinstance(c, (Fraction, int)) and not isinstance(c, bool):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    return float(c)


@dataclass(frozen=True)
class Polynomial:
    """Immutable dense polynomial, lowest power first.

    Trailing (high-order) exact zeros are trimmed on construction; the zero
    polynomial is stored as ``(0,)`` and has degree ``-1``.
    """

    coeffs: tuple

    def __init__(self, coeffs: Iterable, mode: str | None = None):
        vals = [_coerce(c, mode) for c in coeffs]
        if mode is None and any(isinstance(v, float) for v in vals):
            vals = [float(v) for v in vals]
        while len(vals) > 1 and vals[-1] == 0:
            vals.pop()
        if not vals:
            vals = [Fraction(0) if mode != FLOAT else 0.0]
        object.__setattr__(self, "coeffs", tuple(vals))

    @classmethod
    def constant(cls, c, mode: str | None = None) -> "Polynomial":
        return cls([c], mode)

    @classmethod
    def x(cls, mode: str = RATIONAL) -> "Polynomial":
        return cls([0, 1], mode)

    @property
    def mode(self) -> str:
        return FLOAT if isinstance(self.coeffs[0], float) else RATIONAL

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Scalar:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.degree < 0

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def as_mode(self, mode: str) -> "Polynomial":
        if mode == self.mode:
            return self
        return Polynomial(self.coeffs, mode)

    def max_abs(self) -> float:
        return float(max(abs(c) for c in self.coeffs))

    def _check(self, other: "Polynomial") -> None:
        if self.mode != other.mode:
            raise ModeMismatch(f"cannot combine {self.mode} and {other.mode} polynomials")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial([other], self.mode)

    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial([u + v for u, v in zip(a, b)], self.mode)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs], self.mode)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._lift(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return Polynomial([0], self.mode)
        out = [self.coeffs[0] * 0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out, self.mode)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial([1], self.mode)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = _coerce(c, self.mode)
        return Polynomial([a * c for a in self.coeffs], self.mode)

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self) -> str:
        return to_expr(self)


def evaluate(p: Polynomial, x):
    """Horner evaluation. ``x`` may be a Fraction, float or complex."""
    acc = p.coeffs[-1] * 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def derivative(p: Polynomial) -> Polynomial:
    if p.degree < 1:
        raise ValueError("derivative requires degree >= 1")
    return Polynomial([n * c for n, c in enumerate(p.coeffs)][1:], p.mode)


def monic_normalize(p: Polynomial) -> Polynomial:
    if p.is_zero():
        raise ValueError("cannot normalize the zero polynomial")
    lead = p.leading
    coeffs = [c / lead for c in p.coeffs[:-1]] + [lead / lead]
    return Polynomial(coeffs, p.mode)


@dataclass(frozen=True)
class DivisionResult:
    """``dividend == quotient * divisor - negated_remainder``."""

    quotient: Polynomial
    negated_remainder: Polynomial


def divide_negated(
    dividend: Polynomial, divisor: Polynomial, zero_tol: float = DEFAULT_ZERO_TOL
) -> DivisionResult:
    """Long division returning the *negated* remainder.

    The result satisfies ``dividend = q * divisor - r`` with
    ``deg r < deg divisor``. In float mode, remainder coefficients with
    magnitude at most ``zero_tol`` times the largest coefficient of the
    dividend or of ``q * divisor`` are set to zero; rational mode is exact.
    """
    dividend._check(divisor)
    if divisor.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if divisor.degree > dividend.degree:
        raise ValueError("divisor degree exceeds dividend degree")
    rem = list(dividend.coeffs)
    dv = divisor.coeffs
    m = divisor.degree
    qlen = dividend.degree - m + 1
    q = [rem[0] * 0] * qlen
    for i in range(qlen - 1, -1, -1):
        c = rem[i + m] / dv[m]
        q[i] = c
        for j in range(m + 1):
            rem[i + j] -= c * dv[j]
        rem[i + m] = rem[i + m] * 0  # exactly eliminated
    r = [-c for c in rem[:m]] if m > 0 else [rem[0] * 0]
    quotient = Polynomial(q, dividend.mode)
    if dividend.mode == FLOAT:
        scale = max(dividend.max_abs(), (quotient * divisor).max_abs())
        r = [0.0 if abs(c) <= zero_tol * scale else c for c in r]
    return DivisionResult(quotient, Polynomial(r, dividend.mode))


def _fmt_scalar(c: Scalar) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return repr(float(c))


def to_expr(p: Polynomial, var: str = "x") -> str:
    """Human-readable expression, highest power first; re-parseable."""
    terms = []
    for n in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[n]
        if c == 0 and not (n == 0 and not terms):
            continue
        neg = c < 0
        mag = -c if neg else c
        if n == 0:
            body = _fmt_scalar(mag)
        else:
            mono = var if n == 1 else f"{var}^{n}"
            body = mono if mag == 1 else f"{_fmt_scalar(mag)}*{mono}"
        if not terms:
            terms.append(f"-{body}" if neg else body)
        else:
            terms.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(terms)


def from_descending(values: Sequence, mode: str | None = None) -> Polynomial:
    """Build a polynomial from coefficients written highest power first."""
    return Polynomial(list(reversed(list(values))), mode)
