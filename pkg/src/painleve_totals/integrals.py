"""Total integrals of Painleve II solutions over the whole real line.

Each family needs its own regularization: Ablowitz-Segur solutions are
integrable at both ends, Hastings-McLeod grows like sqrt(-x/2) on the left,
generic imaginary solutions grow like sqrt(x/2) on the right and carry an
extra non-integrable 1/x term.  ``total_integral`` computes the regularized
left-hand side numerically; ``closed_form`` evaluates the known value.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import cmath
import json
import math

import numpy as np

from .monodromy import SolutionClass, asym_params, classify
from .numerics import airy_ai, airy_tail_integral, arg_gamma, zeta_prime_minus_one

SQRT2 = math.sqrt(2.0)
LOG2 = math.log(2.0)


class TheoremId(str, Enum):
    REAL_AS = "RealAS"
    HM = "HM"
    IMAG_AS = "ImagAS"
    GENERIC_IMAG = "GenericImag"
    WEIGHTED_HM = "WeightedHM_twzeta"


COMPATIBLE = {
    TheoremId.REAL_AS: SolutionClass.REAL_AS,
    TheoremId.HM: SolutionClass.HASTINGS_MCLEOD,
    TheoremId.IMAG_AS: SolutionClass.IMAG_AS,
    TheoremId.GENERIC_IMAG: SolutionClass.GENERIC_IMAG,
    TheoremId.WEIGHTED_HM: SolutionClass.HASTINGS_MCLEOD,
}


def theorem_for(klass):
    for t, k in COMPATIBLE.items():
        if k is klass and t is not TheoremId.WEIGHTED_HM:
            return t
    raise ValueError(f"no total-integral formula for class {klass.value}")


class IncompatibleTheorem(ValueError):
    pass


class TailBudgetExceeded(RuntimeError):
    pass


class BranchResolutionError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegralReport:
    theorem: TheoremId
    monodromy: object
    c: float
    lhs: complex
    rhs: complex
    branch_m: int | None
    abs_err: float
    tail_budget: float
    sigma: int = 1

    def as_dict(self):
        return {
            "schema": 1,
            "theorem": self.theorem.value,
            "monodromy": self.monodromy.as_dict(),
            "c": self.c,
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "m": self.branch_m,
            "abs_err": self.abs_err,
            "tail_budget": self.tail_budget,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def _check_pair(t, m):
    klass = classify(m)
    if m.is_zero() and t in (TheoremId.REAL_AS,):
        return klass
    if COMPATIBLE[t] is not klass:
        raise IncompatibleTheorem(f"theorem {t.value} does not apply to class {klass.value}")
    return klass


def closed_form(t, m, c=0.0):
    """Right-hand side of the total-integral identity (principal branches, m = 0)."""
    t = TheoremId(t)
    _check_pair(t, m)
    s1 = m.s1
    if t is TheoremId.REAL_AS:
        a = 1j * s1
        return complex(0.5 * cmath.log((1 + a) / (1 - a)))
    if t is TheoremId.HM:
        return complex(-1j * s1 * (SQRT2 / 3) * c * math.sqrt(abs(c)) + 1j * s1 * 0.5 * LOG2)
    if t is TheoremId.IMAG_AS:
        return complex(1j * math.atan(s1.real))
    if t is TheoremId.GENERIC_IMAG:
        if c <= 0:
            raise ValueError("the generic imaginary identity needs c > 0")
        p = asym_params(m)
        rho2, sigma = p.rho ** 2, p.sigma_sign
        inner = (cmath.phase(1 + 1j * sigma * s1) - 1.25 * rho2 * LOG2
                 + arg_gamma(0.5 + 0.5j * rho2) + SQRT2 / 3 * c ** 1.5 - 0.75 * rho2 * math.log(c))
        return complex(1j * sigma * inner)
    return weighted_closed_form(c)


def weighted_closed_form(c, flipped_sign=False):
    """Constant term of the weighted Hastings-McLeod integral.

    The value follows from the left-tail constant of the Tracy-Widom GUE
    distribution, log F(s) = s^3/12 - log|s|/8 + log(2)/24 + zeta'(-1) + o(1),
    combined with F'/F = int_s^inf q^2.  That gives
    c^3/6 + log|c|/8 - 1/8 - log(2)/24 - zeta'(-1).  ``flipped_sign=True``
    returns the variant with + log(2)/24 + zeta'(-1), kept for comparison.
    """
    if c == 0:
        raise ValueError("the weighted identity has a log|c| term; c must be nonzero")
    z = zeta_prime_minus_one().value
    tail = LOG2 / 24 + z
    if not flipped_sign:
        tail = -tail
    return complex(c ** 3 / 6 + math.log(abs(c)) / 8 - 0.125 + tail)


def _dense(sol):
    dense = getattr(sol, "dense", None)
    if dense is None:
        dense = sol  # a PIISolution was passed directly
    return dense


def _drop(series, keys):
    terms = {k: v for k, v in series.terms.items() if k not in keys}
    return series._like(terms)


def _left_tail(dense, integrand=None):
    """Tail integral over (-inf, lo] with a budget from dropping the last two levels."""
    end = dense.left
    full = end.tail_integral(dense.lo, integrand)
    lower = _lower_order(end)
    if lower is None:
        return full, 0.0
    rough = lower.tail_integral(dense.lo, integrand)
    return full, abs(full - rough)


def _lower_order(end):
    """The same expansion without its last level (the budget proxy)."""
    ser = end.series
    if not ser.terms:
        return None
    es = sorted({e for e, _ in ser.terms})
    if len(es) < 2:
        return None
    return _SeriesView(_drop(ser, {k for k in ser.terms if k[0] == es[0]}), end.side)


class _SeriesView:
    def __init__(self, series, side):
        self.series = series
        self.side = side

    def tail_integral(self, x0, integrand=None):
        ser = self.series if integrand is None else integrand(self.series)
        return ser.tail_integral(self.side * x0)


def _airy_right(dense, x0):
    s1 = dense.monodromy.s1
    return 1j * s1 * airy_tail_integral(x0)


def total_integral(sol, t, c=0.0, tol=None):
    """Regularized total integral of u, compared with its closed form."""
    dense = _dense(sol)
    t = TheoremId(t)
    m = dense.monodromy
    _check_pair(t, m)
    if t is TheoremId.WEIGHTED_HM:
        return weighted_integral_twzeta(sol, c, tol)
    if m.is_zero():
        rhs = closed_form(t, m, c)
        return IntegralReport(t, m, c, 0j, rhs, 0, abs(rhs), 0.0)
    one = lambda x, u, ux: u  # noqa: E731
    budget = 0.0
    if t in (TheoremId.REAL_AS, TheoremId.IMAG_AS):
        left, budget = _left_tail(dense)
        lhs = left + dense.integrate(one, dense.lo, dense.hi) + _airy_right(dense, dense.hi)
    elif t is TheoremId.HM:
        if not dense.lo <= c <= dense.hi:
            raise ValueError(f"c = {c} outside the integrated window")
        s1 = m.s1

        lead = dense.left.series.terms[(Fraction(1, 2), 0)]

        def reg_series(ser):
            return _drop(ser, {(Fraction(1, 2), 0)})

        if abs(lead - 1j * s1 / SQRT2) > 1e-14:
            raise AssertionError("left expansion does not carry the subtracted term")
        left, budget = _left_tail(dense, reg_series)
        # the subtracted sqrt(|y|/2) is integrated in closed form (kink at 0)
        sub = 1j * s1 * (_sqrt_half_antiderivative(c) - _sqrt_half_antiderivative(dense.lo))
        lhs = left + dense.integrate(one, dense.lo, dense.hi) - sub + _airy_right(dense, dense.hi)
    else:
        lhs, budget = _generic_lhs(dense, c)
    rhs = closed_form(t, m, c)
    report = _finish(t, m, c, lhs, rhs, budget, dense)
    if tol is not None and report.tail_budget > tol:
        raise TailBudgetExceeded(f"tail budget {report.tail_budget:.2e} exceeds {tol:.2e}")
    return report


def _generic_lhs(dense, c):
    if c <= 0:
        raise ValueError("c must be positive")
    p = dense.params
    sigma, rho2 = p.sigma_sign, p.rho ** 2
    right = dense.right
    xp = min(dense.hi, _start_point(dense))
    if not dense.lo <= c <= xp:
        raise ValueError(f"c = {c} outside [{dense.lo}, {xp}]")

    # the smooth x^{1/2} and x^{-1} terms are exactly the subtracted ones
    half, inv = (Fraction(1, 2), 0), (Fraction(-1), 0)
    ser = right.series
    if abs(ser.terms[half] - 1j * sigma / SQRT2) > 1e-14 or abs(ser.terms[inv] + 0.75j * sigma * rho2) > 1e-12:
        raise AssertionError("right expansion does not carry the subtracted terms")
    tail_series = _drop(ser, {half, inv})
    right_tail = tail_series.tail_integral(xp)
    last = min(e for e, _ in tail_series.terms)
    rough = _drop(tail_series, {k for k in tail_series.terms if k[0] == last}).tail_integral(xp)
    left, b_left = _left_tail(dense)
    sub = 1j * sigma * (_sqrt_half_antiderivative(xp) - _sqrt_half_antiderivative(c)
                        - 0.75 * rho2 * math.log(xp / c))
    lhs = left + dense.integrate(lambda x, u, ux: u, dense.lo, xp) - sub + right_tail
    return lhs, b_left + abs(right_tail - rough)


def _sqrt_half_antiderivative(y):
    """Antiderivative of sqrt(|y|/2), continuous through 0."""
    return SQRT2 / 3 * y * math.sqrt(abs(y))


def _start_point(dense):
    return dense.diagnostics["right_start"]


def _finish(t, m, c, lhs, rhs, budget, dense):
    if t is TheoremId.GENERIC_IMAG:
        sigma = dense.params.sigma_sign
        k = resolve_branch_value(lhs, rhs, sigma)
        adjusted = rhs + 1j * sigma * 2 * math.pi * k
        return IntegralReport(t, m, c, lhs, rhs, k, abs(lhs - adjusted), budget, sigma)
    return IntegralReport(t, m, c, lhs, rhs, 0, abs(lhs - rhs), budget)


def resolve_branch_value(lhs, rhs, sigma):
    return int(round(((lhs - rhs) / (2j * math.pi * sigma)).real))


def resolve_branch(report, tol=1e-4):
    """Integer m in the 2 pi i sigma m ambiguity of the generic identity.

    For the other identities the reality/imaginarity of u forces m = 0;
    a large residual there means a numerical failure, not a branch jump.
    """
    if report.theorem is not TheoremId.GENERIC_IMAG:
        if report.abs_err > tol:
            raise BranchResolutionError(f"residual {report.abs_err:.2e} with m = 0")
        return 0
    k = resolve_branch_value(report.lhs, report.rhs, report.sigma)
    resid = abs(report.lhs - report.rhs - 2j * math.pi * report.sigma * k)
    if resid > tol:
        raise BranchResolutionError(f"nearest m = {k} still leaves {resid:.2e}")
    return k


def weighted_integral_twzeta(sol, c=-1.0, tol=None):
    """int_c^inf y u^2 + int_{-inf}^c (y u^2 + y^2/2 + 1/(8y)) for Hastings-McLeod."""
    dense = _dense(sol)
    m = dense.monodromy
    if c >= 0:
        raise ValueError("use c < 0 (the subtraction has a 1/y pole at 0)")
    rhs = closed_form(TheoremId.WEIGHTED_HM, m, c)
    if not dense.lo <= c <= dense.hi:
        raise ValueError(f"c = {c} outside the integrated window")

    def w(x, u, ux):
        return x * u * u

    def reg(x, u, ux):
        return x * u * u + x * x / 2 + 1 / (8 * x)

    def reg_series(ser):
        # in s = -x: y u^2 + y^2/2 + 1/(8y) = -s u^2 + s^2/2 - 1/(8s)
        s1 = ser._like({(Fraction(1), 0): -1.0})
        s2 = ser._like({(Fraction(2), 0): 0.5, (Fraction(-1), 0): -0.125})
        return (s1 * ser * ser + s2).cleaned(1e-15)

    left, budget = _left_tail(dense, reg_series)
    # y Ai(y)^2 beyond the matching point: ~1e-27, integrate it anyway
    xr = dense.hi
    nodes, weights = np.polynomial.legendre.leggauss(40)
    y = 0.5 * 20 * nodes + xr + 10
    right = -(m.s1 ** 2) * 10 * np.dot(weights, y * airy_ai(y) ** 2)
    lhs = left + dense.integrate(reg, dense.lo, c) + dense.integrate(w, c, xr) + right
    rep = IntegralReport(TheoremId.WEIGHTED_HM, m, c, complex(lhs), rhs, 0, abs(lhs - rhs), budget)
    if tol is not None and budget > tol:
        raise TailBudgetExceeded(f"tail budget {budget:.2e} exceeds {tol:.2e}")
    return rep
