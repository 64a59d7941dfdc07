"""Endpoint expansions of Painleve II solutions as callables in x.

Each end is described in a large positive variable s (s = -x at the left
end, s = x at the right end).  The oscillatory ends are full trans-series
built by ``oscillatory_coefficients``; the decaying right end of the
Ablowitz-Segur and Hastings-McLeod families is the Airy profile.
"""

import math

import numpy as np
from scipy.optimize import root

from .numerics import airy_pair
from .transseries import (
    TransSeries,
    hm_series,
    oscillatory_coefficients,
    series_from_coefficients,
)

SQRT2 = math.sqrt(2.0)
DEFAULT_LEVELS = 8

# y'' + Omega^2 s y + Q s^{1/2} y^2 + C y^3 + F s^{-3/2} = 0 for each oscillatory end
_REAL_LEFT = dict(omega=1.0, Q=0.0, C=-2.0, F=0.0)
_IMAG_LEFT = dict(omega=1.0, Q=0.0, C=2.0, F=0.0)
_GENERIC_RIGHT = dict(omega=SQRT2, Q=3 * SQRT2, C=2.0, F=-1.0 / (4 * SQRT2))


class SeriesEnd:
    """u(x) = prefactor * series(side * x)."""

    def __init__(self, series, side, prefactor=1.0, label=""):
        self.series = series * prefactor
        self.side = side
        self.label = label
        self._ds = self.series.derivative()

    def __call__(self, x):
        s = self.side * np.asarray(x, dtype=float)
        return self.series(s), self.side * self._ds(s)

    def tail_integral(self, x0, integrand=None):
        """Integral over the part of the line beyond x0 (towards this end).

        ``integrand`` maps the u-series to the series to integrate; it gets
        the series in s, so any explicit x must be written as side * s.
        """
        ser = self.series if integrand is None else integrand(self.series)
        return ser.tail_integral(self.side * x0)

    def s_monomial(self, e, coeff=1.0):
        return TransSeries.monomial(e, coeff, like=self.series)


class AiryEnd:
    """u = i s1 Ai(x) on the decaying side."""

    side = 1
    label = "airy"

    def __init__(self, s1):
        self.scale = 1j * complex(s1)

    def __call__(self, x):
        ai, aip = airy_pair(x)
        return self.scale * np.asarray(ai), self.scale * np.asarray(aip)


def _oscillatory(amplitude, case, levels):
    return oscillatory_coefficients(amplitude, case["omega"], case["Q"], case["C"], case["F"], levels)


def left_oscillatory(amplitude, theta0, imaginary, levels=DEFAULT_LEVELS):
    """Decaying oscillation at -inf: u = a s^{-1/4} cos(Theta) + ... (times i if imaginary)."""
    case = _IMAG_LEFT if imaginary else _REAL_LEFT
    b, nu = _oscillatory(amplitude, case, levels)
    ser = series_from_coefficients(b, case["omega"], nu, theta0)
    return SeriesEnd(ser, -1, 1j if imaginary else 1.0, "imag-left" if imaginary else "real-left")


def right_generic(amplitude, theta0, sigma, levels=DEFAULT_LEVELS):
    """u = i sigma (sqrt(s/2) + a s^{-1/4} cos(Theta) + ...) at +inf."""
    case = _GENERIC_RIGHT
    b, nu = _oscillatory(amplitude, case, levels)
    ser = series_from_coefficients(b, case["omega"], nu, theta0, base={(0.5, 0): 1 / SQRT2})
    return SeriesEnd(ser, 1, 1j * sigma, "generic-right")


def left_hm(s1, order=6):
    return SeriesEnd(hm_series(order), -1, 1j * complex(s1), "hm-left")


def fit_oscillatory(builder, x0, u0, ux0, direction, guess):
    """Find (amplitude, theta0) so that builder(a, t0) matches (u, u_x) at x0.

    ``builder(a, t0)`` returns a SeriesEnd whose values are ``direction``
    times a real function; both equations are taken along that direction
    so the unknowns stay real.  ``guess`` is (amplitude, phase at x0).
    """
    s0 = abs(x0)
    cache = {}

    def end_for(a):
        # coefficients depend on the amplitude only; reuse across phase probes
        if a not in cache:
            cache.clear()
            cache[a] = builder(a, 0.0)
        return cache[a]

    def residual(p):
        a, t0 = p
        end = end_for(a)
        end.series.theta0 = t0
        end._ds.theta0 = t0
        u, ux = end(x0)
        return [((u - u0) / direction).real, ((ux - ux0) / direction).real / math.sqrt(s0)]

    a0, big_theta = guess
    probe = end_for(a0)
    t0 = math.remainder(big_theta - float(probe.series.phase(s0)) + probe.series.theta0, 2 * math.pi)
    sol = root(residual, [a0, t0], method="hybr", options={"xtol": 1e-15})
    a, t0 = sol.x
    end = builder(a, t0)
    u, ux = end(x0)
    mismatch = max(abs(u - u0), abs(ux - ux0) / math.sqrt(s0))
    return end, float(a), float(t0), float(mismatch)


def leading_guess(x0, u0, ux0, omega, direction, base=0.0, base_slope=0.0):
    """Amplitude and phase of a s^{-1/4} cos(Theta) from a single (u, u_x) sample."""
    s = abs(x0)
    side = 1 if x0 > 0 else -1
    y = (u0 / direction).real - base
    ys = (ux0 / direction).real * side - base_slope
    q = -ys / (omega * math.sqrt(s))
    a = s ** 0.25 * math.hypot(y, q)
    return a, math.atan2(q, y)
