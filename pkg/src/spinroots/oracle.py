"""Independent classical root finder used to cross-check the spin pipeline.

Aberth-Ehrlich simultaneous iteration on the float coefficients; a second,
structurally unrelated route uses the eigenvalues of the dense Frobenius
companion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .companion import build_frobenius
from .poly import FLOAT, Polynomial, monic_normalize

MAX_ITER = 500
STEP_TOL = 1e-13


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    residuals: tuple
    converged: bool
    iterations: int


def _horner_with_derivative(c: np.ndarray, z: np.ndarray):
    """``p(z)`` and ``p'(z)`` for ascending coefficients ``c``."""
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    for a in c[-2::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def residual_bound(p: Polynomial) -> float:
    return 1e-10 * (1.0 + p.max_abs())


def find_roots(p: Polynomial, max_iter: int = MAX_ITER) -> RootSet:
    """All complex roots of ``p`` by Aberth-Ehrlich iteration.

    Starts from a slightly rotated circle whose radius is the Cauchy bound of
    the monic polynomial and stops once every correction is below
    ``1e-13 * radius``.  ``converged`` is set when all residuals meet
    :func:`residual_bound`, so slow linear convergence on multiple roots is
    still reported as converged once the residuals are at round-off level.
    """
    if p.degree < 1:
        raise ValueError("root finding requires degree >= 1")
    p = monic_normalize(p.as_mode(FLOAT))
    c = np.asarray(p.coeffs, dtype=complex)
    n = p.degree
    radius = 1.0 + max(abs(v) for v in p.coeffs[:-1])
    angles = 2 * np.pi * np.arange(n) / n + 0.4 / n + 0.01 * np.sin(np.arange(n) + 1.0)
    z = radius * np.exp(1j * angles)

    it = 0
    for it in range(1, max_iter + 1):
        val, der = _horner_with_derivative(c, z)
        hit = val == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = val / der
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            repulse = (1.0 / diff).sum(axis=1) - 1.0
            step = ratio / (1.0 - ratio * repulse)
        step = np.where(hit | ~np.isfinite(step), 0.0, step)
        z = z - step
        if np.max(np.abs(step)) <= STEP_TOL * radius:
            break

    residuals = np.abs(_horner_with_derivative(c, z)[0])
    order = np.lexsort((z.imag, z.real))
    z, residuals = z[order], residuals[order]
    converged = bool(np.all(np.isfinite(z)) and np.all(residuals <= residual_bound(p)))
    return RootSet(
        roots=tuple(complex(v) for v in z),
        residuals=tuple(float(v) for v in residuals),
        converged=converged,
        iterations=it,
    )


def real_roots_only(rs: RootSet, tol: float = 1e-6) -> list[float] | None:
    """Sorted real parts if every root is real within
    ``tol * (1 + |Re|)``, else ``None`` meaning complex roots are present."""
    if not rs.converged:
        raise ValueError("root set did not converge")
    if any(abs(z.imag) > tol * (1.0 + abs(z.real)) for z in rs.roots):
        return None
    return sorted(z.real for z in rs.roots)


def frobenius_roots(p: Polynomial) -> np.ndarray:
    """Eigenvalues of the dense Frobenius companion, sorted like RootSet."""
    frob = build_frobenius(monic_normalize(p.as_mode(FLOAT)))
    ev = np.linalg.eigvals(frob.dense())
    return ev[np.lexsort((ev.imag, ev.real))]


def cross_check(p: Polynomial) -> float:
    """Largest distance from an Aberth root to the nearest Frobenius eigenvalue."""
    rs = find_roots(p)
    ev = frobenius_roots(p)
    return float(max(np.min(np.abs(ev - z)) for z in rs.roots))
