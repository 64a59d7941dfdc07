import math
from fractions import Fraction

import pytest

from painleve_totals import acceptance, trace
from painleve_totals.mkdv import default_engine
from painleve_totals.monodromy import MonodromyData


def test_rhs_examples():
    assert trace.trace_rhs(0, -0.5j) == pytest.approx(1j / (2 * math.pi) * math.log(0.75), abs=1e-16)
    for n in range(1, 5):
        assert trace.trace_rhs(n, -0.5j) / trace.trace_rhs(0, -0.5j) == pytest.approx(1 / (4 ** n * (2 * n + 1)))
    assert trace.trace_rhs(2, 0) == 0


def test_rhs_domain():
    with pytest.raises(ValueError):
        trace.trace_rhs(0, 1j)
    with pytest.raises(ValueError):
        trace.trace_rhs(-1, 0.5j)


def test_n0_lhs_is_the_scaled_l0(real_as):
    x = -40.0
    u, ux = real_as(x)
    direct = -(-x) ** -0.5 * (-0.5j) * (u ** 4 + x * u * u - ux * ux)
    rep = trace.reg_integral_alpha(real_as, 0, x)
    assert rep.lhs == pytest.approx(complex(direct), rel=1e-13)
    assert rep.rel_err < 2e-3


def test_n1_rate():
    d = acceptance.dense_for(MonodromyData.real_as(0.5), lo=-80.0)
    r40 = trace.reg_integral_alpha(d, 1, -40.0, -80.0)
    assert r40.rel_err < 1e-2
    assert r40.rate_check > 0.5
    errs = [trace.reg_integral_alpha(d, 1, x).rel_err for x in (-20.0, -40.0, -80.0)]
    assert errs[0] > errs[1] > errs[2]


def test_zero_solution():
    z = acceptance.dense_for(MonodromyData(0, 0, 0))
    assert trace.reg_integral_alpha(z, 1, -40.0).lhs == 0
    assert trace.vp_integral_alpha(z, 0) == 0


def test_x_cut_bound(real_as):
    with pytest.raises(ValueError):
        trace.reg_integral_alpha(real_as, 0, -10.0)


def test_class_restrictions(hm):
    with pytest.raises(trace.TraceClassError):
        trace.reg_integral_alpha(hm, 0, -40.0)
    d = acceptance.dense_for(MonodromyData.imag_as(0.5))
    with pytest.raises(trace.TraceClassError):
        trace.vp_integral_alpha(d, 0)


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("x", [-12.0, -3.0, 2.0])
def test_antiderivative_by_quadrature(real_as, hm, n, x):
    assert trace.antiderivative_check(real_as, n, x) < 1e-7
    assert trace.antiderivative_check(hm, n, x) < 1e-7


def test_l0_at_right_boundary(hm):
    # L_0 from the Airy data at 8 against -int_8^inf alpha_0
    eng = default_engine()
    u, ux = hm(8.0)
    quad = hm.integrate(lambda y, v, vy: eng.alpha(0).evaluate(v, vy, y), 8.0, hm.hi) + trace._right_tail(hm, eng.alpha(0))
    assert abs(eng.L(0).evaluate(u, ux, 8.0) + quad) < 1e-8


def test_u2_identity(hm):
    lhs, rhs = trace.u2_trace(hm, -5.0)
    assert lhs == pytest.approx(rhs, abs=1e-9)


@pytest.mark.parametrize("n", [0, 1])
def test_vp_vanishes_and_is_c_independent(real_as, hm, n):
    for d in (real_as, hm):
        vals = [trace.vp_integral_alpha(d, n, c) for c in (-6.0, -1.0, 0.0)]
        assert max(abs(v) for v in vals) < 1e-6
        assert max(abs(a - b) for a in vals for b in vals) < 1e-6


def test_regularizer_leading_terms(real_as, hm):
    # F_0 is -(i/2) times 2 beta (-x)^{1/2} for AS and -(i/2)(-x^2/4) for HM;
    # the AS amplitude is fitted on the numerical solution, hence rel 1e-6
    beta = math.log(0.75) / (2 * math.pi)
    F, stray = trace.regularizer(real_as, 0)
    assert stray == 0
    assert list(F.terms) == [(Fraction(1, 2), 0)]
    assert F.terms[(Fraction(1, 2), 0)] == pytest.approx(-1j * beta, rel=1e-6)
    F, _ = trace.regularizer(hm, 0)
    assert F.terms == pytest.approx({(Fraction(2), 0): 0.125j}, rel=1e-12)


def test_csv():
    rep = trace.TraceReport(1, 1j, 2j, -40.0, 0.75, -0.5j)
    text = trace.reports_to_csv([rep])
    assert text.splitlines()[0] == ",".join(trace.CSV_HEADER)
    assert rep.rel_err == pytest.approx(0.5)
