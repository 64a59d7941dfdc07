import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from painleve_totals.numerics import (
    airy_ai, airy_ai_prime, airy_pair, airy_tail_integral, arg_gamma, zeta_prime_minus_one,
)

mpmath.mp.dps = 30


def maclaurin_ai(x, terms=60):
    # Ai(x) = c1 f(x) - c2 g(x) with the two power series; exact at x = 0
    c1 = mpmath.mpf(3) ** (-mpmath.mpf(2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
    c2 = mpmath.mpf(3) ** (-mpmath.mpf(1) / 3) / mpmath.gamma(mpmath.mpf(1) / 3)
    f = g = mpmath.mpf(0)
    tf, tg = mpmath.mpf(1), mpmath.mpf(x)
    for k in range(terms):
        f += tf
        g += tg
        tf *= mpmath.mpf(x) ** 3 / ((3 * k + 2) * (3 * k + 3))
        tg *= mpmath.mpf(x) ** 3 / ((3 * k + 3) * (3 * k + 4))
    return c1 * f - c2 * g


def test_ai_at_zero():
    assert airy_ai(0.0) == pytest.approx(0.3550280538878172, rel=1e-15, abs=0)
    assert float(maclaurin_ai(0)) == pytest.approx(0.3550280538878172, rel=1e-15)


def test_ai_prime_at_zero():
    assert airy_ai_prime(0.0) == pytest.approx(-0.2588194037928068, rel=1e-15)


@pytest.mark.parametrize("x", [-3.0, -0.7, 0.4, 1.0, 2.5])
def test_ai_matches_maclaurin_oracle(x):
    assert airy_ai(x) == pytest.approx(float(maclaurin_ai(x)), rel=1e-12, abs=1e-15)


def test_ai_far_right_leading_asymptotics():
    x = 8.0
    lead = math.exp(-(2 / 3) * x ** 1.5) / (2 * math.sqrt(math.pi) * x ** 0.25)
    assert abs(airy_ai(x) / lead - 1) < 1e-2
    assert airy_ai(x) == pytest.approx(float(mpmath.airyai(x)), rel=1e-12)


def test_ai_derivative_by_differences():
    h = 1e-4
    fd = (airy_ai(1 + h) - airy_ai(1 - h)) / (2 * h)
    assert abs(fd - airy_ai_prime(1.0)) < 1e-8


def test_vectorized_pair():
    xs = np.linspace(-5, 5, 11)
    ai, aip = airy_pair(xs)
    assert ai.shape == xs.shape
    assert np.allclose(ai, [airy_ai(x) for x in xs], rtol=0, atol=0)
    assert np.allclose(aip, [airy_ai_prime(x) for x in xs], rtol=0, atol=0)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-25.0, max_value=25.0))
def test_airy_against_mpmath(x):
    ref, refp = mpmath.airyai(x), mpmath.airyai(x, derivative=1)
    ai, aip = airy_pair(x)
    scale = max(1.0, abs(x)) ** 0.25
    assert abs(ai - float(ref)) <= 1e-12 * max(abs(float(ref)), 1e-300) + 1e-14
    assert abs(aip - float(refp)) <= 1e-12 * max(abs(float(refp)), 1e-300) + 1e-14 * scale


@pytest.mark.parametrize("x", [0.0, 2.0, 6.0])
def test_tail_integral(x):
    ref = mpmath.quad(mpmath.airyai, [x, mpmath.inf])
    assert airy_tail_integral(x) == pytest.approx(float(ref), rel=1e-12)


def test_arg_gamma_oracle():
    ref = mpmath.arg(mpmath.gamma(mpmath.mpc(0.5, 0.3)))
    assert abs(arg_gamma(0.5 + 0.3j) - float(ref)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=0.01, max_value=4.0))
def test_arg_gamma_principal_branch(re, im):
    z = complex(re, im)
    a = arg_gamma(z)
    assert -math.pi < a <= math.pi
    ref = float(mpmath.arg(mpmath.gamma(mpmath.mpc(re, im))))
    d = math.remainder(a - ref, 2 * math.pi)
    assert abs(d) < 1e-11


def test_arg_gamma_conjugate_symmetry():
    z = 0.2 + 1.7j
    assert arg_gamma(z.conjugate()) == pytest.approx(-arg_gamma(z), abs=1e-14)


def test_arg_gamma_pole():
    with pytest.raises(ValueError):
        arg_gamma(-2)


def test_zeta_prime_minus_one():
    c = zeta_prime_minus_one()
    assert c.value == pytest.approx(-0.16542114370045, abs=1e-14)
    glaisher = mpmath.glaisher
    assert c.value == pytest.approx(float(mpmath.mpf(1) / 12 - mpmath.log(glaisher)), abs=1e-16)
    assert c.value == pytest.approx(float(mpmath.zeta(-1, derivative=1)), abs=1e-16)
    assert c.provenance
