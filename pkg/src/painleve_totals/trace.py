"""Trace formulae and regularized totals of the conserved densities alpha_{2n}.

The densities come from ``mkdv``; the Painleve solutions from ``solutions``.
Two routes are kept apart on purpose: ``antiderivative_check`` integrates
alpha_{2n} by quadrature and compares with the exact antiderivative L_{2n},
while ``vp_integral_alpha`` combines quadrature with the endpoint expansion
and never evaluates L_{2n} on the numerical solution.
"""

from dataclasses import dataclass
from fractions import Fraction
import csv
import io
import math

import numpy as np

from .mkdv import default_engine
from .monodromy import SolutionClass, classify
from .numerics import airy_pair
from .integrals import _dense


class TraceClassError(ValueError):
    pass


@dataclass(frozen=True)
class TraceReport:
    n: int
    lhs: complex
    rhs: complex
    x_cut: float
    rate_check: float
    s1: complex = 0j

    @property
    def rel_err(self):
        if self.rhs == 0:
            return abs(self.lhs)
        return abs(self.lhs - self.rhs) / abs(self.rhs)

    def row(self):
        return [self.n, f"{self.s1.real}{self.s1.imag:+}i", self.x_cut,
                self.lhs.real, self.lhs.imag, self.rhs.real, self.rhs.imag, self.rate_check]


CSV_HEADER = ["n", "s1", "x_cut", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rate_check"]


def reports_to_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def trace_rhs(n, s1):
    """Limit of the scaled L_{2n} at -inf for a real Ablowitz-Segur solution."""
    s1 = complex(s1)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if abs(s1) >= 1:
        raise ValueError("the trace formula needs |s1| < 1")
    if s1 == 0:
        return 0j
    mu = -math.log(1 - abs(s1) ** 2) / (2j * math.pi)
    return complex(mu / (4 ** n * (2 * n + 1)))


def _require(dense, *classes):
    m = dense.monodromy
    if m.is_zero():
        return SolutionClass.REAL_AS
    klass = classify(m)
    if klass not in classes:
        raise TraceClassError(f"class {klass.value} is not supported here")
    return klass


def scaled_L(dense, n, x, engine=None):
    eng = engine or default_engine()
    u, ux = dense(x)
    return -(-x) ** (-(2 * n + 1) / 2) * complex(eng.L(2 * n).evaluate(u, ux, x))


def reg_integral_alpha(sol, n, x_cut, x_ref=None, engine=None):
    """Scaled antiderivative at a left cut, against the trace constant.

    rate_check is the decay exponent of the residual between x_cut and
    x_ref (default 2 x_cut); the expected value is about 3/4.
    """
    dense = _dense(sol)
    _require(dense, SolutionClass.REAL_AS)
    if x_cut > -20:
        raise ValueError("x_cut must be <= -20")
    s1 = dense.monodromy.s1
    rhs = trace_rhs(n, s1)
    lhs = scaled_L(dense, n, x_cut, engine)
    if s1 == 0:
        return TraceReport(n, lhs, rhs, x_cut, 0.0, s1)
    x_ref = 2 * x_cut if x_ref is None else x_ref
    r1 = abs(lhs - rhs)
    r2 = abs(scaled_L(dense, n, x_ref, engine) - rhs)
    rate = math.log(r1 / r2) / math.log(x_ref / x_cut) if r1 > 0 and r2 > 0 else math.inf
    return TraceReport(n, lhs, rhs, x_cut, rate, s1)


# -- expansion side ---------------------------------------------------------

def _on_series(poly, end):
    """poly(u, u_x, x) as a series in s = -x along the left expansion."""
    u = end.series
    ux = -u.derivative()
    x = u._like({(Fraction(1), 0): -1.0})
    total = u._like({})
    for (a, b, c), k in poly.terms.items():
        total = total + complex(k) * (u ** a) * (ux ** b) * (x ** c)
    return total


def regularizer(sol, n, engine=None):
    """Growing smooth part F_n of L_{2n} at -inf, as a series in s = -x.

    Also returns the largest oscillating coefficient that does not decay,
    which should vanish for the regularization to make sense.
    """
    dense = _dense(sol)
    eng = engine or default_engine()
    series = _on_series(eng.L(2 * n), dense.left)
    grow = {k: c for k, c in series.terms.items() if k[0] >= 0}
    stray = max((abs(c) for k, c in grow.items() if k[1] != 0), default=0.0)
    scale = max((abs(c) for c in grow.values()), default=1.0)
    smooth = {k: c for k, c in grow.items() if k[1] == 0 and abs(c) > 1e-13 * scale}
    return series._like(smooth), stray


def _right_tail(dense, poly, width=20.0):
    # Airy decay beyond the matching point: alpha is ~exp(-30) there
    if dense.klass not in (SolutionClass.REAL_AS, SolutionClass.HASTINGS_MCLEOD):
        raise TraceClassError("no decaying right end")
    nodes, weights = np.polynomial.legendre.leggauss(40)
    y = dense.hi + 0.5 * width * (nodes + 1)
    ai, aip = airy_pair(y)
    scale = 1j * complex(dense.monodromy.s1)
    vals = poly.evaluate(scale * ai, scale * aip, y)
    return complex(0.5 * width * np.dot(weights, vals))


def vp_integral_alpha(sol, n, c=0.0, engine=None):
    """Regularized total integral of alpha_{2n}; the identity says it is 0."""
    dense = _dense(sol)
    _require(dense, SolutionClass.REAL_AS, SolutionClass.HASTINGS_MCLEOD)
    if dense.monodromy.is_zero():
        return 0j
    if c > 0 or c < dense.lo:
        raise ValueError(f"c = {c} must lie in [{dense.lo}, 0]")
    eng = engine or default_engine()
    alpha = eng.alpha(2 * n)
    F, _ = regularizer(dense, n, eng)

    def plain(x, u, ux):
        return alpha.evaluate(u, ux, x)

    def F_at(x):
        # F is a series in s = -x with nonnegative powers only
        return _at_zero(F) if x == 0 else complex(F(-x))

    # alpha - F' is integrated with F' in closed form: F has a sqrt kink at 0
    tail_series = (_on_series(alpha, dense.left) + F.derivative()).cleaned(1e-14)
    left = tail_series.tail_integral(-dense.lo)
    below = dense.integrate(plain, dense.lo, c) - (F_at(c) - F_at(dense.lo))
    above = dense.integrate(plain, c, dense.hi) + _right_tail(dense, alpha)
    return complex(left + below + above + F_at(c))


def _at_zero(series):
    # only nonnegative powers survive in F_n; at s = 0 that is the constant
    return sum((c for (e, k), c in series.terms.items() if e == 0), 0j)


def antiderivative_check(sol, n, x, engine=None):
    """|int_x^inf alpha_{2n} + L_{2n}(x)| by quadrature (no use of the identity)."""
    dense = _dense(sol)
    _require(dense, SolutionClass.REAL_AS, SolutionClass.HASTINGS_MCLEOD)
    eng = engine or default_engine()
    alpha = eng.alpha(2 * n)
    quad = dense.integrate(lambda y, u, uy: alpha.evaluate(u, uy, y), x, dense.hi) + _right_tail(dense, alpha)
    u, ux = dense(x)
    return abs(quad + complex(eng.L(2 * n).evaluate(u, ux, x)))


def u2_trace(sol, x):
    """int_x^inf u^2 against u_x^2 - x u^2 - u^4 at x."""
    dense = _dense(sol)
    sq = lambda y, u, uy: u * u  # noqa: E731
    nodes, weights = np.polynomial.legendre.leggauss(40)
    y = dense.hi + 10 * (nodes + 1)
    scale = 1j * complex(dense.monodromy.s1)
    right = 10 * np.dot(weights, (scale * airy_pair(y)[0]) ** 2)
    lhs = dense.integrate(sq, x, dense.hi) + right
    u, ux = dense(x)
    rhs = ux * ux - x * u * u - u ** 4
    return complex(lhs), complex(rhs)


def trace_constant(s1):
    """mu = -(1/(2 pi i)) log(1 - |s1|^2)."""
    return trace_rhs(0, s1)


__all__ = [
    "TraceReport", "TraceClassError", "trace_rhs", "reg_integral_alpha", "vp_integral_alpha",
    "regularizer", "antiderivative_check", "u2_trace", "reports_to_csv", "scaled_L", "trace_constant",
]
