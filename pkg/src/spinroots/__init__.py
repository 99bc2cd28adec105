"""Real zeros of polynomials as measured eigenvalues of a spin observable.

The pipeline turns a real-rooted polynomial into a hermitean tridiagonal
companion matrix, expands that matrix in a spin multipole basis, and samples
its eigenvalues the way a generalized Stern-Gerlach apparatus would on a
maximally mixed spin state.
"""

from .companion import (
    DegreeAnomaly,
    FrobeniusCompanion,
    MeaChain,
    NegativeD,
    TridiagonalSymmetric,
    build_companion,
    build_frobenius,
    char_poly_eval,
    companion_of,
    run_mea,
)
from .measurement import (
    MeasurementRecord,
    MixedState,
    SearchResult,
    Spectrum,
    eigenvalues_tridiagonal,
    measure_once,
    reconstruct_product,
    run_parallel,
    run_search,
)
from .multipole import MultipoleBasis, MultipoleExpansion, build_multipole_basis, expand, reconstruct, spin_matrices
from .oracle import RootSet, find_roots, real_roots_only
from .parser import ParseError, parse
from .poly import DivisionResult, Polynomial, derivative, divide_negated, evaluate, monic_normalize

__all__ = [
    "DegreeAnomaly", "FrobeniusCompanion", "MeaChain", "NegativeD", "TridiagonalSymmetric",
    "build_companion", "build_frobenius", "char_poly_eval", "companion_of", "run_mea",
    "MeasurementRecord", "MixedState", "SearchResult", "Spectrum", "eigenvalues_tridiagonal",
    "measure_once", "reconstruct_product", "run_parallel", "run_search",
    "MultipoleBasis", "MultipoleExpansion", "build_multipole_basis", "expand", "reconstruct",
    "spin_matrices", "RootSet", "find_roots", "real_roots_only", "ParseError", "parse",
    "DivisionResult", "Polynomial", "derivative", "divide_negated", "evaluate", "monic_normalize",
]

__version__ = "0.1.0"
