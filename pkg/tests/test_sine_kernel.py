import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from painleve_totals import sine_kernel as sk

TWO_OVER_PI = 2 / math.pi


def _mp_log_det(x, a, b, sign=0, degree=4):
    # plain 30-digit Nystrom on (a, b) with 3 * 2^(degree-1) mpmath nodes;
    # sign selects the +-image kernel on (0, 1)
    mpmath.mp.dps = 30
    rule = mpmath.calculus.quadrature.GaussLegendre(mpmath.mp)
    pts = rule.calc_nodes(degree, mpmath.mp.prec)
    half = (mpmath.mpf(b) - a) / 2
    mid = (mpmath.mpf(b) + a) / 2
    nodes = [mid + half * t for t, _ in pts]
    weights = [half * w for _, w in pts]
    X = mpmath.mpf(x)

    def k(z, y):
        d = z - y
        val = X / mpmath.pi if d == 0 else mpmath.sin(X * d) / (mpmath.pi * d)
        if sign:
            val += sign * mpmath.sin(X * (z + y)) / (mpmath.pi * (z + y))
        return val

    m = len(nodes)
    A = mpmath.matrix(m, m)
    for i in range(m):
        for j in range(m):
            A[i, j] = (1 if i == j else 0) - mpmath.sqrt(weights[i] * weights[j]) * k(nodes[i], nodes[j])
    return float(mpmath.log(mpmath.det(A)))


@pytest.mark.parametrize("x", [0.5, 2.0])
def test_determinants_against_mpmath(x):
    lp, lplus, lminus = sk.log_dets(x, 64)
    assert lp == pytest.approx(_mp_log_det(x, -1, 1), abs=1e-13)
    assert lplus == pytest.approx(_mp_log_det(x, 0, 1, 1), abs=1e-13)
    assert lminus == pytest.approx(_mp_log_det(x, 0, 1, -1), abs=1e-13)


def test_small_x_series():
    x = 1e-3
    lp = sk.log_dets(x, 16)[0]
    # sigma = x (log P)' = -(2/pi) x - (4/pi^2) x^2 + O(x^3)
    assert lp == pytest.approx(-TWO_OVER_PI * x - 2 / math.pi ** 2 * x * x, abs=1e-9)


def test_log_derivatives_near_zero():
    x = 1e-3
    h = 1e-4
    d = [(sk.log_dets(x + h, 16)[i] - sk.log_dets(x - h, 16)[i]) / (2 * h) for i in range(3)]
    assert d[0] == pytest.approx(-TWO_OVER_PI, abs=1e-2)
    assert d[1] == pytest.approx(-TWO_OVER_PI, abs=1e-2)
    assert d[2] == pytest.approx(0.0, abs=1e-2)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 4.0])
def test_factorization(x):
    lp, a, b = sk.log_dets(x, 64)
    assert abs(math.expm1(a + b - lp)) < 1e-12


def test_det_sine_report():
    r = sk.det_sine(3.0)
    assert r.converged
    assert r.P == pytest.approx(r.D_plus * r.D_minus, rel=1e-12)
    with pytest.raises(ValueError):
        sk.det_sine(-1.0)
    with pytest.raises(ValueError):
        sk.det_sine(1.0, order=4)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=6.0), st.floats(min_value=0.01, max_value=1.0))
def test_determinants_in_unit_interval_and_decreasing(x, dx):
    a = sk.log_dets(x, 48)
    b = sk.log_dets(x + dx, 48)
    for la, lb in zip(a, b):
        assert la < 0 and lb < la


def test_xi_at_zero(pv):
    assert pv.xi(1e-9)[0] == pytest.approx(TWO_OVER_PI, abs=1e-8)


def test_sigma_near_zero(pv):
    x = 1e-2
    assert pv.sigma(x)[0] == pytest.approx(-TWO_OVER_PI * x - 4 / math.pi ** 2 * x * x, abs=1e-5)


def test_xi_tends_to_one(pv):
    xs = np.array([4.0, 8.0, 12.0])
    gaps = np.abs(1 - pv.xi(xs))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 5e-3


def test_pv_range_guard():
    with pytest.raises(ValueError):
        sk.pv_solve(x_max=60.0)


def test_identities(pv):
    rep = sk.verify_identities(np.linspace(0.2, 5.0, 9), 128, pv)
    assert rep["sigma"] < 1e-7
    assert rep["xi2"] < 1e-6
    assert rep["D_plus"] < 1e-8 and rep["D_minus"] < 1e-8


def test_resolvent(pv):
    for row in sk.resolvent_identities([0.5, 1.0, 2.0], 64, pv):
        assert row["xi"] < 1e-7
        assert row["dlogD_plus"] < 1e-7 and row["dlogD_minus"] < 1e-7
        assert row["m11"] < 1e-6
        assert row["symmetry"] < 1e-10


def test_constant_trend(pv):
    rep = sk.constants_extraction([6.0, 9.0], 128, pv)
    r6, r9 = rep["rows"]
    assert abs(r9["dyson"]) < abs(r6["dyson"])
    assert abs(r9["D_plus"]) < abs(r6["D_plus"])


def test_table_csv(pv):
    lines = sk.table_csv([0.5, 1.0], 32, pv).splitlines()
    assert lines[0] == "x,P,D_plus,D_minus,sigma,xi"
    vals = [float(v) for v in lines[1].split(",")]
    assert vals[1] == pytest.approx(vals[2] * vals[3], rel=1e-12)
