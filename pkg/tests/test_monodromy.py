import math

import pytest
from hypothesis import given, settings, strategies as st

from painleve_totals.monodromy import (
    ConstraintError, MonodromyData, SolutionClass, asym_params, classify, from_shortcut, parse_complex,
)


@pytest.mark.parametrize("triple, klass", [
    ((-0.5j, 0, 0.5j), SolutionClass.REAL_AS),
    ((-1j, 0, 1j), SolutionClass.HASTINGS_MCLEOD),
    ((1j, 0, -1j), SolutionClass.HASTINGS_MCLEOD),
    ((1, 0, -1), SolutionClass.IMAG_AS),
    ((0.5j, 0.8j, 0.5j), SolutionClass.GENERIC_IMAG),
    ((0, 0, 0), SolutionClass.REAL_AS),
])
def test_classify_examples(triple, klass):
    assert classify(MonodromyData(*triple)) is klass


def test_generic_example_satisfies_both_conditions():
    s1 = 0.5j
    s2 = (s1 - s1.conjugate()) / (1 + abs(s1) ** 2)
    assert s2 == pytest.approx(0.8j)
    assert MonodromyData.generic_imag(s1).s2 == pytest.approx(0.8j)


def test_constraint_violation():
    with pytest.raises(ConstraintError):
        MonodromyData(1, 1, 1)
    with pytest.raises(ConstraintError):
        MonodromyData(float("nan"), 0, 0)


def test_beyond_hm_is_singular():
    assert classify(MonodromyData(-2j, 0, 2j)) is SolutionClass.SINGULAR_REAL


def test_params_real_as():
    p = asym_params(MonodromyData.real_as(0.5))
    assert p.beta == pytest.approx(math.log(0.75) / (2 * math.pi), abs=1e-15)


def test_params_imag_as():
    p = asym_params(MonodromyData.imag_as(1.0))
    assert p.d ** 2 == pytest.approx(math.log(2) / math.pi, abs=1e-15)


def test_params_generic():
    p = asym_params(MonodromyData.generic_imag(0.5j))
    assert p.rho ** 2 == pytest.approx(-math.log(0.8) / math.pi, abs=1e-15)
    assert p.sigma_sign == -1
    assert asym_params(MonodromyData.generic_imag(-0.5j)).sigma_sign == 1


@pytest.mark.parametrize("text, s1", [
    ("hm", -1j), ("hm:-", 1j), ("as:0.5", -0.5j), ("imag-as:1.0", 1), ("generic:0.5i", 0.5j),
    ("-0.5i,0,0.5i", -0.5j), ("zero", 0),
])
def test_shortcuts(text, s1):
    assert from_shortcut(text).s1 == pytest.approx(s1)


@pytest.mark.parametrize("bad", ["", "foo", "as:x", "weird:1", "1,2"])
def test_bad_shortcuts(bad):
    with pytest.raises(ValueError):
        from_shortcut(bad)


def test_parse_complex():
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("-i") == -1j
    assert parse_complex(" 0.5 ") == 0.5
    with pytest.raises(ValueError):
        parse_complex("abc")


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=-0.99, max_value=0.99))
def test_real_as_family_and_negation(a):
    m = MonodromyData.real_as(a)
    assert classify(m) is SolutionClass.REAL_AS
    assert classify(-m) is SolutionClass.REAL_AS
    assert (-m).s1 == -m.s1


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=-3, max_value=3), st.floats(min_value=0.05, max_value=3))
def test_generic_family_satisfies_constraint(re, im):
    m = MonodromyData.generic_imag(complex(re, im))
    assert abs(m.s1 - m.s2 + m.s3 + m.s1 * m.s2 * m.s3) < 1e-12 * max(1, abs(m.s1) ** 3)
    assert classify(m) is SolutionClass.GENERIC_IMAG
    assert classify(-m) is SolutionClass.GENERIC_IMAG
