import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from painleve_totals import mkdv
from painleve_totals.mkdv import (
    DensityEngine, DiffPoly, GaussianRational as G, ONE, I, U, UX, X, diff_x, partial_x, sigma,
)

E = mkdv.default_engine()
H4 = U ** 4 + X * U * U - UX * UX  # recurring combination


def q(a, b=1):
    return G(Fraction(a, b))


def iq(a, b=1):
    return G(0, Fraction(a, b))


def test_diff_x_rules():
    assert diff_x(U) == UX
    assert diff_x(UX) == U ** 3 * 2 + X * U
    assert diff_x(X) == DiffPoly.const(1)
    assert diff_x(UX * UX - X * U * U - U ** 4) == -(U * U)
    assert diff_x(U * U * q(-1, 8)) == U * UX * q(-1, 4)


def test_low_densities():
    assert E.alpha(0) == U * U * iq(-1, 2)
    assert E.alpha(1) == U * UX * q(-1, 4)
    assert E.alpha(2) == (U ** 4 + X * U * U) * iq(1, 8)


def test_alpha2_before_reduction():
    # (i/8)(u u_xx - u^4) with u_xx = 2u^3 + xu substituted
    uxx = U ** 3 * 2 + X * U
    assert (U * uxx - U ** 4) * iq(1, 8) == E.alpha(2)


def test_evaluate_respects_reduction():
    rng = random.Random(3)
    for _ in range(20):
        u, ux, x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2)), rng.uniform(-2, 2), rng.uniform(-5, 5)
        uxx = 2 * u ** 3 + x * u
        pre = 0.125j * (u * uxx - u ** 4)
        assert abs(E.alpha(2).evaluate(u, ux, x) - pre) < 1e-12 * max(1, abs(pre))


def test_lambda1_and_m():
    assert E.Lambda(1) == sigma(3, H4 * iq(1, 2))
    assert E.m(1) == sigma(1, U * q(1, 2)) + sigma(3, H4 * iq(1, 2))
    expected = (sigma(0, (U * U - H4 * H4) * q(1, 8))
                + sigma(2, (UX - U * H4) * q(-1, 4)))
    assert E.m(2) == expected


def test_L_low_orders():
    assert E.L(0) == H4 * iq(-1, 2)
    assert E.L(1) == U * U * q(-1, 8)
    golden = (X * H4 + U * UX) * iq(1, 24)
    assert E.L(2) == golden
    assert diff_x(E.L(2)) == E.alpha(2)


def test_hamiltonian():
    H = E.hamiltonian()
    assert H == (UX * UX - X * U * U - U ** 4) * q(1, 2)
    assert H == E.Lambda(1).entry(1, 1) * I
    # along solutions dH/dx reduces to the explicit x-dependence
    assert diff_x(H) == partial_x(H)
    assert partial_x(H) == U * U * q(-1, 2)


@pytest.mark.parametrize("k", range(11))
def test_antiderivative_identity(k):
    assert mkdv.antiderivative_defect(k).is_zero()


@pytest.mark.parametrize("k", [1, 3, 5, 7, 9])
def test_odd_densities_are_derivatives(k):
    assert E.alpha(k) == diff_x(E.L(k))


def test_riccati_consistency():
    for c in E.riccati_coefficients(8):
        assert c.is_zero()


def test_pauli_structure():
    for k in range(1, 9):
        assert E.Lambda(k).is_diagonal()
        assert E.F(k).is_off_diagonal()


def test_order_guard():
    eng = DensityEngine(max_order=4)
    eng.alpha(4)
    with pytest.raises(ValueError):
        eng.alpha(5)


def test_json_round_trip():
    for k in range(6):
        p = E.L(k)
        back = DiffPoly.from_records(json.loads(p.to_json()))
        assert back == p


def test_latex():
    assert E.alpha(0).to_latex() == r"-\frac{1}{2}iu^{2}"
    assert r"u\,u_{x}\,x" in E.alpha(3).to_latex()
    assert DiffPoly().to_latex() == "0"


def test_evaluate_trivial():
    assert mkdv.evaluate(E.alpha(0), 2, 0, 0) == pytest.approx(-2j)


poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 3), st.integers(0, 2)),
    st.tuples(st.integers(-9, 9), st.integers(-9, 9)),
    max_size=6,
)


def _poly(d):
    return DiffPoly({k: G(a, b) for k, (a, b) in d.items()})


@settings(max_examples=60, deadline=None)
@given(poly_terms, poly_terms, st.complex_numbers(max_magnitude=2, allow_nan=False),
       st.floats(-2, 2), st.floats(-3, 3))
def test_evaluate_linear(p, r, u, ux, x):
    a, b = _poly(p), _poly(r)
    lhs = (a + b).evaluate(u, ux, x)
    rhs = a.evaluate(u, ux, x) + b.evaluate(u, ux, x)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


@settings(max_examples=60, deadline=None)
@given(poly_terms, poly_terms)
def test_diff_x_leibniz(p, r):
    a, b = _poly(p), _poly(r)
    assert diff_x(a * b) == diff_x(a) * b + a * diff_x(b)


def test_gaussian_rational():
    assert complex(I * I) == -1
    assert (ONE / G(0, 2)) == G(0, Fraction(-1, 2))
