import json
import math

import mpmath
import numpy as np
import pytest

from painleve_totals.monodromy import ClassMismatch, MonodromyData, SolutionClass, asym_params
from painleve_totals.numerics import airy_ai
from painleve_totals.solutions import (
    AsymptoticRangeError, asym_u, check_expansion_order, ode_residual, solve, solve_dense,
)


def test_hm_left_leading_term():
    m = MonodromyData.hastings_mcleod(1)
    u, _ = asym_u(SolutionClass.HASTINGS_MCLEOD, asym_params(m), m, -100.0, "minus_inf", 0)
    assert u == pytest.approx(math.sqrt(50), rel=1e-12)


def test_right_end_is_scaled_airy():
    m = MonodromyData.real_as(0.5)
    u, _ = asym_u(SolutionClass.REAL_AS, asym_params(m), m, 9.0, "plus_inf", 0)
    assert u == pytest.approx(0.5 * airy_ai(9.0), rel=1e-14)


def test_asym_range_checks():
    m = MonodromyData.hastings_mcleod(1)
    p = asym_params(m)
    with pytest.raises(AsymptoticRangeError):
        asym_u(SolutionClass.HASTINGS_MCLEOD, p, m, 1.0, "plus_inf", 0)
    with pytest.raises(ValueError):
        asym_u(SolutionClass.HASTINGS_MCLEOD, p, m, 10.0, "sideways", 0)


def test_hm_matches_airy_at_10(hm):
    u, _ = hm(10.0)
    ref = float(mpmath.airyai(10))
    assert abs(u.real - ref) / ref < 1e-10


def test_hm_left_rate(hm):
    xs = np.linspace(-60, -20, 41)
    u, _ = hm(xs)
    scaled = np.abs(u - np.sqrt(-xs / 2)) * (-xs) ** 2.5
    assert np.max(scaled) < 1.0  # the first correction is 1/(8 sqrt2) (-x)^{-5/2}
    assert np.ptp(scaled) < 0.05


def test_residual_small(hm, real_as):
    xs = np.linspace(-15, 7, 45)
    assert np.max(ode_residual(hm, xs)) < 1e-8
    assert np.max(ode_residual(real_as, xs)) < 1e-8


@pytest.mark.parametrize("maker", [
    lambda: MonodromyData.real_as(0.3),
    lambda: MonodromyData.imag_as(0.8),
    lambda: MonodromyData.hastings_mcleod(1),
])
def test_negation_symmetry(maker):
    m = maker()
    xs = np.linspace(-10, 6, 17)
    a = solve(m, xs)
    b = solve(-m, xs)
    assert np.max(np.abs(a.u + b.u)) < 1e-9


def test_zero_solution():
    g = solve(MonodromyData(0, 0, 0), [-5.0, 0.0, 5.0])
    assert np.all(g.u == 0)


def test_singular_class_rejected():
    with pytest.raises(ClassMismatch):
        solve_dense(MonodromyData(-2j, 0, 2j))


def test_grid_outputs():
    g = solve(MonodromyData.real_as(0.5), [3.0, -4.0, 0.0, 1.0])
    assert list(g.xs) == [-4.0, 0.0, 1.0, 3.0]
    lines = g.to_csv().splitlines()
    assert lines[0] == "x,re_u,im_u,re_ux,im_ux"
    assert len(lines) == 5
    row = [float(v) for v in lines[1].split(",")]
    assert row[1] == pytest.approx(g.u[0].real, rel=0, abs=0)
    rec = json.loads(g.to_json())
    assert rec["schema"] == 1
    assert rec["class"] == "RealAblowitzSegur"
    assert rec["n_points"] == 4


def test_empty_grid():
    with pytest.raises(ValueError):
        solve(MonodromyData.real_as(0.5), [])


def test_expansion_order_needs_points():
    g = solve(MonodromyData.real_as(0.5), [-1.0, 0.0, 1.0])
    with pytest.raises(AsymptoticRangeError):
        check_expansion_order(g, "minus_inf", 0)
