"""Spin matrices and an orthonormal hermitean multipole basis.

A hermitean ``N x N`` matrix is read as an observable of a spin
``s = (N - 1) / 2``.  The basis is obtained by Gram-Schmidt, under the inner
product ``(A, B) = tr(A B) / N``, over the identity followed by fully
symmetrized products of ``Sx, Sy, Sz`` ordered by total degree and then
lexicographically by word (``x < y < z``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import factorial

import numpy as np

# candidates whose relative residual after projection falls below this are dependent
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SpinTriple:
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def n(self) -> int:
        return self.sz.shape[0]

    @property
    def s(self) -> float:
        return (self.n - 1) / 2

    def components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.sx, self.sy, self.sz


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def spin_matrices(n: int) -> SpinTriple:
    """Angular momentum matrices in the ``Sz`` eigenbasis ``m = s, s-1, ..., -s``."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    s = (n - 1) / 2
    m = s - np.arange(n)
    # <m+1| S+ |m> sits just above the diagonal
    raise_ = np.diag(np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1)), 1)
    lower = raise_.T
    return SpinTriple(
        sx=_frozen((raise_ + lower) / 2),
        sy=_frozen((raise_ - lower) / 2j),
        sz=_frozen(np.diag(m)),
    )


@dataclass(frozen=True)
class MultipoleBasis:
    """``elements[0]`` is the identity; ``words[nu]`` names the spin
    monomial element ``nu`` was orthonormalized from (``""`` for identity)."""

    elements: tuple
    words: tuple

    @property
    def n(self) -> int:
        return self.elements[0].shape[0]

    def gram(self) -> np.ndarray:
        n = self.n
        stack = np.array(self.elements)
        # tr(A B) = sum_ij A_ij B_ji
        return np.einsum("aij,bji->ab", stack, stack).real / n


def _symmetric_products(spins: SpinTriple, degree: int) -> dict:
    """Sum of all orderings of each monomial of the given degree, divided by
    the number of orderings.  Keys are exponent triples ``(a, b, c)``."""
    comps = spins.components()
    n = spins.n
    # level[e] = sum over all words with exponent vector e of the ordered product
    level = {(0, 0, 0): np.eye(n, dtype=complex)}
    for _ in range(degree):
        nxt: dict = {}
        for e, mat in level.items():
            for i, s in enumerate(comps):
                key = tuple(v + (j == i) for j, v in enumerate(e))
                prod = mat @ s
                if key in nxt:
                    nxt[key] = nxt[key] + prod
                else:
                    nxt[key] = prod
        level = nxt
    out = {}
    for e, mat in level.items():
        count = factorial(degree) // (factorial(e[0]) * factorial(e[1]) * factorial(e[2]))
        out[e] = mat / count
    return out


def _word(e: tuple) -> str:
    return "x" * e[0] + "y" * e[1] + "z" * e[2]


def build_multipole_basis(spins: SpinTriple) -> MultipoleBasis:
    n = spins.n
    target = n * n

    def inner(a, b):
        return np.trace(a @ b) / n

    # operators are rescaled by 1/s so high powers stay O(1)
    scale = 1.0 / spins.s if n > 1 else 1.0
    scaled = SpinTriple(spins.sx * scale, spins.sy * scale, spins.sz * scale)

    elements = [np.eye(n, dtype=complex)]
    words = [""]
    degree = 0
    while len(elements) < target:
        degree += 1
        if degree > n - 1:
            raise RuntimeError(
                f"multipole basis incomplete: {len(elements)} of {target} elements"
            )
        products = _symmetric_products(scaled, degree)
        for combo in combinations_with_replacement("xyz", degree):
            e = (combo.count("x"), combo.count("y"), combo.count("z"))
            cand = products[e]
            cand = (cand + cand.conj().T) / 2
            norm0 = np.sqrt(inner(cand, cand).real)
            v = cand
            for _ in range(2):  # re-orthogonalize once for stability
                for t in elements:
                    v = v - inner(t, v).real * t
            norm = np.sqrt(inner(v, v).real)
            if norm <= RESIDUAL_TOL * norm0:
                continue
            v = v / norm
            elements.append((v + v.conj().T) / 2)
            words.append(_word(e))
            if len(elements) == target:
                break
    return MultipoleBasis(tuple(_frozen(a) for a in elements), tuple(words))


_basis_cache: dict[int, MultipoleBasis] = {}


def multipole_basis(n: int) -> MultipoleBasis:
    """Cached :func:`build_multipole_basis` for dimension ``n``."""
    if n not in _basis_cache:
        _basis_cache[n] = build_multipole_basis(spin_matrices(n))
    return _basis_cache[n]


@dataclass(frozen=True)
class MultipoleExpansion:
    coefficients: tuple
    basis: MultipoleBasis
    max_imag: float = 0.0


def expand(c, basis: MultipoleBasis, imag_tol: float = 1e-12) -> MultipoleExpansion:
    """Coefficients ``c_nu = tr(C T_nu) / N`` of a hermitean matrix.

    ``c`` may be a :class:`~spinroots.companion.TridiagonalSymmetric` or a
    dense array.
    """
    dense = c.dense() if hasattr(c, "dense") else np.asarray(c)
    n = basis.n
    if dense.shape != (n, n):
        raise ValueError(f"matrix is {dense.shape}, basis is {n}x{n}")
    stack = np.array(basis.elements)
    raw = np.einsum("ij,aji->a", dense, stack) / n
    max_imag = float(np.max(np.abs(raw.imag)))
    if max_imag > imag_tol:
        raise ValueError(f"expansion coefficients not real (imag {max_imag:.3g})")
    return MultipoleExpansion(tuple(float(v) for v in raw.real), basis, max_imag)


def reconstruct(e: MultipoleExpansion) -> np.ndarray:
    stack = np.array(e.basis.elements)
    return np.einsum("a,aij->ij", np.asarray(e.coefficients), stack)
