import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from corpus import complex_corpus, product_of_roots, real_rooted_corpus
from spinroots.companion import (
    DegreeAnomaly,
    NegativeD,
    TridiagonalSymmetric,
    build_companion,
    build_frobenius,
    char_poly_eval,
    companion_of,
    identity_residuals,
    run_mea,
    sample_points,
    sturm_count,
)
from spinroots.measurement import eigenvalues_tridiagonal
from spinroots.parser import parse
from spinroots.poly import FLOAT, Polynomial, evaluate

F = Fraction
CUBIC = Polynomial([-6, 11, -6, 1])


class TestRunMea:
    def test_x2_minus_1(self):
        chain = run_mea(parse("x^2-1"))
        assert chain.d == (1,)
        assert chain.q0 == (0, 0)
        assert chain.degenerate == (False,)

    def test_double_root_takes_degenerate_branch(self):
        chain = run_mea(parse("(x-1)^2"))
        assert chain.d == (0,)
        assert chain.q0 == (-1, -1)
        assert chain.degenerate == (True,)

    def test_x2_plus_1_negative_d(self):
        with pytest.raises(NegativeD) as exc:
            run_mea(parse("x^2+1"))
        assert exc.value.k == 1
        assert exc.value.d_k == -1

    def test_worked_cubic(self):
        chain = run_mea(CUBIC)
        assert chain.d == (F(2, 3), F(1, 3))
        assert chain.q0 == (-2, -2, -2)
        assert chain.polys[1].coeffs == (F(11, 3), -4, 1)
        assert chain.polys[2].coeffs == (-2, 1)
        assert chain.polys[-1].is_one()

    def test_linear(self):
        chain = run_mea(Polynomial([F(3, 2), 1]))
        assert chain.d == ()
        assert chain.q0 == (F(3, 2),)

    def test_degree_anomaly(self):
        # x^3 - 1: r_1 = 1 is a constant, so the chain skips a degree
        with pytest.raises(DegreeAnomaly) as exc:
            run_mea(parse("x^3-1"))
        assert exc.value.quotient_degree == 2

    def test_requires_monic(self):
        with pytest.raises(ValueError):
            run_mea(Polynomial([1, 2]))

    def test_chain_shape(self):
        for p, _ in real_rooted_corpus(30, seed=3):
            chain = run_mea(p)
            n = p.degree
            assert len(chain.q0) == n and len(chain.d) == n - 1
            assert all(q.leading == 1 for q in chain.polys)
            degs = [q.degree for q in chain.polys]
            assert degs == list(range(n, -1, -1))
            assert all(d >= 0 for d in chain.d)

    def test_multiple_roots(self):
        p = parse("(x^2-2)^3*(x+1)")
        ev = eigenvalues_tridiagonal(companion_of(p)).eigenvalues
        s = math.sqrt(2)
        assert np.allclose(ev, [-s, -s, -s, -1, s, s, s], atol=1e-12)

    def test_float_mode(self):
        chain = run_mea(CUBIC.as_mode(FLOAT))
        assert chain.mode == FLOAT
        assert chain.d == pytest.approx([2 / 3, 1 / 3], abs=1e-14)
        assert chain.q0 == pytest.approx([-2, -2, -2], abs=1e-14)

    def test_float_mode_double_root(self):
        chain = run_mea(parse("(x-3)^2*(x+1)").as_mode(FLOAT))
        assert 0.0 in chain.d or chain.warnings

    def test_float_clamp_warns(self):
        # negative d_1 inside the clamp band is zeroed instead of rejected
        eps = 1e-10
        p = Polynomial([1 + eps, -2.0, 1.0])
        chain = run_mea(p, clamp_tol=1e-9)
        assert chain.d == (0.0,)
        assert chain.warnings
        with pytest.raises(NegativeD):
            run_mea(Polynomial([1 + 1e-3, -2.0, 1.0]))


class TestBuildCompanion:
    def test_exchange(self):
        m = build_companion(run_mea(parse("x^2-1")))
        assert m.diag == (0.0, 0.0)
        assert m.offdiag == (1.0,)

    def test_identity(self):
        m = build_companion(run_mea(parse("(x-1)^2")))
        assert m.diag == (1.0, 1.0)
        assert m.offdiag == (0.0,)

    def test_cubic(self):
        m = build_companion(run_mea(CUBIC))
        assert m.diag == (2.0, 2.0, 2.0)
        assert m.offdiag == pytest.approx((math.sqrt(2 / 3), math.sqrt(1 / 3)), rel=1e-15)
        assert sorted(np.linalg.eigvalsh(m.dense())) == pytest.approx([1, 2, 3], abs=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            TridiagonalSymmetric((1.0, 2.0), (-1.0,))
        with pytest.raises(ValueError):
            TridiagonalSymmetric((1.0, 2.0), ())


class TestCharPoly:
    def test_exchange_at_zero(self):
        assert char_poly_eval(TridiagonalSymmetric((0.0, 0.0), (1.0,)), 0.0) == -1.0

    def test_cubic_root(self):
        m = build_companion(run_mea(CUBIC))
        assert abs(char_poly_eval(m, 1.0)) < 1e-14

    def test_positive_beyond_gershgorin(self):
        for p, _ in real_rooted_corpus(20, seed=4):
            m = companion_of(p)
            assert char_poly_eval(m, 2 * m.gershgorin_bound() + 1) > 0

    def test_matches_dense_determinant(self):
        rng = np.random.default_rng(0)
        for n in range(1, 8):
            m = TridiagonalSymmetric(tuple(rng.normal(size=n)), tuple(abs(rng.normal(size=n - 1))))
            for x in rng.normal(size=5):
                dense = np.linalg.det(x * np.eye(n) - m.dense())
                assert char_poly_eval(m, x) == pytest.approx(dense, rel=1e-10, abs=1e-12)

    def test_sympy_charpoly_exact(self):
        # exact characteristic polynomial of the matrix with symbolic sqrt(d_k)
        lam = sympy.Symbol("lam")
        for p, _ in real_rooted_corpus(8, seed=9, deg=(2, 6)):
            chain = run_mea(p)
            n = p.degree
            mat = sympy.zeros(n, n)
            for k in range(n):
                mat[k, k] = -sympy.Rational(chain.q0[k].numerator, chain.q0[k].denominator)
            for k, d in enumerate(chain.d):
                s = sympy.sqrt(sympy.Rational(d.numerator, d.denominator))
                mat[k, k + 1] = mat[k + 1, k] = s
            cp = sympy.Poly(sympy.expand(mat.charpoly(lam).as_expr()), lam).all_coeffs()[::-1]
            assert [Fraction(str(c)) for c in cp] == list(p.coeffs)

    def test_sturm_count(self):
        m = build_companion(run_mea(CUBIC))
        assert [sturm_count(m, x) for x in (0.5, 1.5, 2.5, 3.5)] == [0, 1, 2, 3]
        ident = TridiagonalSymmetric((1.0, 1.0), (0.0,))
        assert sturm_count(ident, 0.9) == 0 and sturm_count(ident, 1.1) == 2
        # counts eigenvalues strictly below x
        assert sturm_count(ident, 1.0) == 0


class TestIdentityProperty:
    def test_characteristic_identity_float_eval(self):
        for p, roots in real_rooted_corpus(60, seed=21):
            m = companion_of(p)
            radius = max(abs(float(r)) for r in roots)
            pf = p.as_mode(FLOAT)
            for x in sample_points(radius):
                ref = evaluate(pf, x)
                assert abs(char_poly_eval(m, x) - ref) <= 1e-8 * (1 + abs(ref))

    def test_identity_residuals_helper(self):
        for p, roots in real_rooted_corpus(20, seed=22):
            m = companion_of(p)
            assert max(identity_residuals(m, p, sample_points(float(max(map(abs, roots)))))) <= 1e-8

    def test_float_chain_identity(self):
        for p, roots in real_rooted_corpus(40, seed=23, min_gap=0.05):
            m = companion_of(p.as_mode(FLOAT))
            pts = sample_points(float(max(map(abs, roots))))
            assert max(identity_residuals(m, p, pts)) <= 1e-8

    def test_real_rooted_never_negative(self):
        for p, _ in real_rooted_corpus(200, seed=31):
            run_mea(p)

    def test_complex_pair_always_flagged(self):
        for p in complex_corpus(200, seed=32):
            with pytest.raises((NegativeD, DegreeAnomaly)):
                run_mea(p)

    def test_gershgorin_contains_spectrum(self):
        for p, _ in real_rooted_corpus(50, seed=33):
            m = companion_of(p)
            ev = np.linalg.eigvalsh(m.dense())
            assert np.all(np.abs(ev) <= m.gershgorin_bound() * (1 + 1e-12))

    def test_translation_covariance(self):
        rng = random.Random(34)
        for p, roots in real_rooted_corpus(30, seed=35, deg=(2, 8)):
            a = Fraction(rng.randint(-300, 300), 100)
            shifted = product_of_roots([r + a for r in roots])
            c1, c2 = run_mea(p), run_mea(shifted)
            assert [q2 for q2 in c2.q0] == [q1 - a for q1 in c1.q0]
            assert c2.d == c1.d
            m2 = build_companion(c2)
            pts = sample_points(float(max(abs(r + a) for r in roots)))
            assert max(identity_residuals(m2, shifted, pts)) <= 1e-8


class TestFrobenius:
    def test_last_rows(self):
        assert build_frobenius(parse("x^2-1")).last_row() == (1, 0)
        assert build_frobenius(CUBIC).last_row() == (6, -11, 6)

    def test_linear(self):
        assert build_frobenius(parse("x")).dense().tolist() == [[0.0]]

    def test_dense_structure(self):
        dense = build_frobenius(CUBIC).dense()
        assert dense.tolist() == [[0, 1, 0], [0, 0, 1], [6, -11, 6]]
        assert np.count_nonzero(np.diag(dense, 1) == 1) == 2

    def test_non_monic_rejected(self):
        with pytest.raises(ValueError):
            build_frobenius(Polynomial([1, 2]))

    def test_eigenvalues(self):
        ev = np.sort(np.linalg.eigvals(build_frobenius(CUBIC).dense()).real)
        assert ev == pytest.approx([1, 2, 3], abs=1e-12)
