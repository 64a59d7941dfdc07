"""Sine-kernel determinants and the fifth Painleve transcendent behind them.

P(x) = det(1 - K) on (-1, 1) and D+-(x) on (0, 1) are computed by Nystrom
discretization on Gauss-Legendre nodes.  The Painleve V side is an ODE
solve started from a Taylor series at the regular point x = 0; it produces
xi(x), sigma(x) and the running integrals of xi and xi^2.  The resolvent
route assembles m1(x) from the integrable form of the kernel and gives a
second, independent value of xi.
"""

from dataclasses import dataclass, field
import csv
import io
import json
import math

import numpy as np
from scipy.integrate import solve_ivp

from .numerics import zeta_prime_minus_one

LOG2 = math.log(2.0)
DEFAULT_ORDER = 64
MAX_ORDER = 512
PV_START = 1e-2
PV_TERMS = 24
# integration errors grow like exp(2.4 x); beyond this xi is no longer trustworthy
PV_X_MAX = 12.0


class ConvergenceError(RuntimeError):
    pass


# -- quadrature -------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def gauss_legendre(cls, n, a=-1.0, b=1.0):
        t, w = np.polynomial.legendre.leggauss(n)
        half = 0.5 * (b - a)
        return cls(half * t + 0.5 * (a + b), half * w)

    @property
    def length(self):
        return float(self.weights.sum())


def gauss_legendre_ld(n, a=0.0, b=1.0):
    """Gauss-Legendre nodes and weights in extended precision.

    Newton polishing of the double-precision nodes on the three-term
    recurrence; the determinants near x = 8 are sensitive to the last
    bits of the kernel entries.
    """
    t, _ = np.polynomial.legendre.leggauss(n)
    t = t.astype(np.longdouble)
    for _ in range(3):
        p0 = np.ones_like(t)
        p1 = t.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * t * p1 - (k - 1) * p0) / k
        dp = n * (t * p1 - p0) / (t * t - 1)
        t = t - p1 / dp
    p0 = np.ones_like(t)
    p1 = t.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * t * p1 - (k - 1) * p0) / k
    dp = n * (t * p1 - p0) / (t * t - 1)
    w = 2 / ((1 - t * t) * dp * dp)
    half = (np.longdouble(b) - np.longdouble(a)) / 2
    return half * t + (np.longdouble(a) + np.longdouble(b)) / 2, half * w


_PI_LD = np.longdouble("3.14159265358979323846264338327950288")


def _sin_over(x, d):
    """sin(x d) / (pi d), with the d = 0 limit x / pi."""
    out = np.empty_like(d)
    zero = d == 0
    out[zero] = x / _PI_LD
    dz = d[~zero]
    out[~zero] = np.sin(x * dz) / (_PI_LD * dz)
    return out


def _kernel(x, z, zp):
    if z.dtype == np.longdouble:
        return _sin_over(np.longdouble(x), z[:, None] - zp[None, :])
    return (x / math.pi) * np.sinc(x * (z[:, None] - zp[None, :]) / math.pi)


def _kernel_pm(x, z, sign):
    x = np.longdouble(x)
    return _sin_over(x, z[:, None] - z[None, :]) + sign * _sin_over(x, z[:, None] + z[None, :])


def _cholesky_logdet(a):
    """log det of a symmetric positive definite matrix, in a's precision."""
    a = a.copy()
    n = a.shape[0]
    total = a.dtype.type(0)
    for j in range(n):
        d = a[j, j]
        if d <= 0:
            raise ConvergenceError("Nystrom matrix is not positive definite")
        total += np.log(d)
        col = a[j + 1:, j] / d
        a[j + 1:, j + 1:] -= np.outer(col, a[j, j + 1:])
    return total


def _logdet(kmat, w):
    r = np.sqrt(w)
    a = np.eye(len(w), dtype=kmat.dtype) - r[:, None] * kmat * r[None, :]
    return float(_cholesky_logdet(a))


def log_dets(x, order=DEFAULT_ORDER):
    """(log P, log D+, log D-) at a fixed quadrature order.

    P uses its own rule on (-1, 1) and D+- an independent rule on (0, 1),
    so P = D+ D- is not built into the discretization.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 0.0, 0.0, 0.0
    z, w = gauss_legendre_ld(order, -1.0, 1.0)
    zh, wh = gauss_legendre_ld(order, 0.0, 1.0)
    lp = _logdet(_kernel(x, z, z), w)
    lplus = _logdet(_kernel_pm(x, zh, 1), wh)
    lminus = _logdet(_kernel_pm(x, zh, -1), wh)
    return lp, lplus, lminus


@dataclass(frozen=True)
class DetReport:
    x: float
    P: float
    D_plus: float
    D_minus: float
    order: int
    converged: bool
    log_P: float = 0.0
    log_D_plus: float = 0.0
    log_D_minus: float = 0.0
    change: float = 0.0


def det_sine(x, order=DEFAULT_ORDER, max_order=MAX_ORDER, tol=1e-12):
    """Determinants with order doubling until the logs move by less than tol."""
    if x <= 0:
        raise ValueError("x must be positive")
    if order < 8:
        raise ValueError("order must be at least 8")
    prev = log_dets(x, order)
    while True:
        nxt_order = 2 * order
        if nxt_order > max_order:
            raise ConvergenceError(f"no convergence at x = {x} up to order {max_order}")
        cur = log_dets(x, nxt_order)
        change = max(abs(a - b) for a, b in zip(prev, cur))
        order = nxt_order
        if change < tol:
            break
        prev = cur
    lp, lplus, lminus = cur
    return DetReport(x, math.exp(lp), math.exp(lplus), math.exp(lminus), order, True,
                     lp, lplus, lminus, change)


def log_det_derivatives(x, which=0, order=128, h=1e-3):
    """First and second x-derivatives of one log-determinant (0: P, 1: D+, 2: D-).

    Five-point central differences; the stencil never crosses 0.
    """
    vals = [log_dets(x + k * h, order)[which] for k in (-2, -1, 0, 1, 2)]
    d1 = (vals[0] - 8 * vals[1] + 8 * vals[3] - vals[4]) / (12 * h)
    d2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * h * h)
    return d1, d2


# -- Painleve V ---------------------------------------------------------------

def _ser_mul(a, b):
    return np.convolve(a, b)[: len(a)]


def _ser_der(a):
    out = np.zeros_like(a)
    out[:-1] = a[1:] * np.arange(1, len(a))
    return out


def _pv_residual(a):
    """2x u (u-1) u'' minus the rest of the polynomial form of the equation."""
    n = len(a)
    x = np.zeros(n, complex)
    x[1] = 1
    one = np.zeros(n, complex)
    one[0] = 1
    up = _ser_der(a)
    upp = _ser_der(up)
    um1 = a - one
    lhs = 2 * _ser_mul(x, _ser_mul(a, _ser_mul(um1, upp)))
    rhs = (_ser_mul(x, _ser_mul(3 * a - one, _ser_mul(up, up)))
           + 4 * _ser_mul(x, _ser_mul(_ser_mul(a, a), a + one))
           + 4j * _ser_mul(_ser_mul(a, a), um1)
           - 2 * _ser_mul(a, _ser_mul(um1, up)))
    return lhs - rhs


def pv_taylor(terms=PV_TERMS):
    """Taylor coefficients of the solution regular at 0.

    u = 1 + 2i x + a2 x^2 + ..., with a2 = -(2 pi + 2i)/pi free in the
    equation (the order-2 balance is identically satisfied) and every
    later coefficient fixed by the balance at its own order, where it
    enters linearly.
    """
    a = np.zeros(terms + 2, complex)
    a[0], a[1], a[2] = 1, 2j, -(2 * math.pi + 2j) / math.pi
    for n in range(3, terms):
        a[n] = 0
        r0 = _pv_residual(a)[n]
        a[n] = 1
        r1 = _pv_residual(a)[n]
        a[n] = -r0 / (r1 - r0)
    return a[:terms]


def _ser_sqrt(w):
    # w[0] = 1
    v = np.zeros_like(w)
    v[0] = 1
    for n in range(1, len(w)):
        v[n] = (w[n] - sum(v[k] * v[n - k] for k in range(1, n))) / 2
    return v


def _ser_div(num, den):
    q = np.zeros_like(num)
    for n in range(len(num)):
        q[n] = (num[n] - sum(q[k] * den[n - k] for k in range(n))) / den[0]
    return q


def xi_taylor(terms=PV_TERMS):
    """Taylor coefficients of xi at 0, from the v = sqrt(u(2x)) relation."""
    a = pv_taylor(terms)
    w = a * 2.0 ** np.arange(terms)  # u(2x)
    v = _ser_sqrt(w)
    num = 2j * v - _ser_der(v)
    den = w.copy()
    den[0] -= 1
    # both vanish at 0; divide out one power of x
    return _ser_div(np.append(num[1:], 0), np.append(den[1:], 0))[: terms - 2]


def _poly(c, x):
    return np.polyval(c[::-1], x)


def _poly_int(c, x):
    k = np.arange(1, len(c) + 1)
    return np.polyval(np.concatenate([(c / k)[::-1], [0]]), x)


def _pv_rhs(x, y):
    w, wp = y[0], y[1]
    wpp = wp * wp * (3 * w - 1) / (2 * w * (w - 1)) + 8 * w * (w + 1) / (w - 1) + 4j * w / x - wp / x
    v = np.sqrt(w)
    xi = (2j * v - wp / (2 * v)) / (w - 1)
    return [wp, wpp, xi, xi * xi]


@dataclass(frozen=True)
class PVState:
    x: float
    sigma: float
    sigma_x: float
    xi: float


@dataclass
class PVTrajectory:
    """Dense Painleve V data: w(x) = u(2x), xi, int_0^x xi, int_0^x xi^2."""

    x0: float
    x_max: float
    sol: object
    taylor: np.ndarray
    xi_series: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def _state(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros((4, x.size), complex)
        small = x <= self.x0
        if small.any():
            xs = x[small]
            c = self.xi_series
            out[2, small] = _poly_int(c, xs)
            out[3, small] = _poly_int(_ser_mul(c, c), xs)
            wc = self.taylor * 2.0 ** np.arange(len(self.taylor))
            out[0, small] = _poly(wc, xs)
            out[1, small] = _poly(_ser_der(wc), xs)
        if (~small).any():
            if x[~small].max() > self.x_max + 1e-12:
                raise ValueError(f"x beyond the solved range {self.x_max}")
            out[:, ~small] = self.sol.sol(x[~small])
        return x, out

    def xi(self, x):
        x, s = self._state(x)
        small = x <= self.x0
        xi = np.empty(x.size)
        xi[small] = _poly(self.xi_series, x[small]).real
        w, wp = s[0, ~small], s[1, ~small]
        v = np.sqrt(w)
        xi[~small] = ((2j * v - wp / (2 * v)) / (w - 1)).real
        return xi

    def xi_prime(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(x.size)
        small = x <= self.x0
        out[small] = _poly(_ser_der(self.xi_series), x[small]).real
        if (~small).any():
            xs = x[~small]
            _, s = self._state(xs)
            w, wp = s[0], s[1]
            wpp = np.array(_pv_rhs(xs, [w, wp, 0, 0])[1])
            v = np.sqrt(w)
            vp = wp / (2 * v)
            vpp = wpp / (2 * v) - wp * wp / (4 * v ** 3)
            num = 2j * v - vp
            den = v * v - 1
            out[~small] = ((2j * vp - vpp) / den - num * 2 * v * vp / den ** 2).real
        return out

    def int_xi(self, x):
        return self._state(x)[1][2].real

    def int_xi2(self, x):
        return self._state(x)[1][3].real

    def sigma(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return x * (-2 / math.pi - self.int_xi2(x))

    def sigma_x(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return -2 / math.pi - self.int_xi2(x) - x * self.xi(x) ** 2

    def states(self, xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return [PVState(float(x), float(s), float(sx), float(q))
                for x, s, sx, q in zip(xs, self.sigma(xs), self.sigma_x(xs), self.xi(xs))]


def pv_solve(x_max=PV_X_MAX, x0=PV_START, terms=PV_TERMS, rtol=1e-13, atol=1e-15):
    """Solve for xi on (0, x_max] from the Taylor start at x0."""
    if not 0 < x_max <= PV_X_MAX:
        raise ValueError(f"x_max must lie in (0, {PV_X_MAX}]: the forward problem is unstable beyond")
    taylor = pv_taylor(terms)
    xi_c = xi_taylor(terms)
    wc = taylor * 2.0 ** np.arange(terms)
    w0 = _poly(wc, x0)
    wp0 = _poly(_ser_der(wc), x0)
    y0 = [w0, wp0, _poly_int(xi_c, x0), _poly_int(_ser_mul(xi_c, xi_c), x0)]

    def near_one(x, y):
        return abs(y[0] - 1) - 1e-6
    near_one.terminal = True

    sol = solve_ivp(_pv_rhs, (x0, x_max), np.array(y0, dtype=complex), method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True, events=near_one)
    if sol.status != 0:
        raise ConvergenceError(f"Painleve V integration stopped at x = {sol.t[-1]:.4g}: {sol.message}")
    # size of the first dropped Taylor term at the start point
    tail = abs(taylor[-1]) * (2 * x0) ** (terms - 1)
    return PVTrajectory(x0, x_max, sol, taylor, xi_c, {"taylor_tail": tail, "steps": sol.t.size})


# -- resolvent --------------------------------------------------------------

@dataclass(frozen=True)
class ResolventVectors:
    x: float
    nodes: np.ndarray
    F1: np.ndarray
    F2: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    m1: np.ndarray

    @property
    def xi(self):
        return (2j * self.m1[1, 0]).real

    def symmetry_defect(self):
        # nodes are symmetric, so reversing the array maps z to -z
        return float(np.max(np.abs(self.F1[::-1] - self.F2)))

    def dlog_D(self, sign):
        return complex(-1j * (self.m1[0, 0] - sign * self.m1[0, 1]))


def resolvent_solve(x, order=DEFAULT_ORDER):
    if x <= 0:
        raise ValueError("x must be positive")
    q = QuadratureRule.gauss_legendre(order)
    z, w = q.nodes, q.weights
    k = _kernel(x, z, z)
    f = np.stack([np.exp(1j * z * x), np.exp(-1j * z * x)], axis=1)
    g = np.stack([np.exp(-1j * z * x), -np.exp(1j * z * x)], axis=1) / (2j * math.pi)
    a = np.eye(order) - k * w[None, :]
    at = np.eye(order) - k.T * w[None, :]
    cond = np.linalg.cond(a)
    if cond > 1e12:
        raise ConvergenceError(f"Nystrom system ill-conditioned (cond {cond:.1e}) at x = {x}")
    F = np.linalg.solve(a, f)
    G = np.linalg.solve(at, g)
    m1 = (F * w[:, None]).T @ g
    return ResolventVectors(x, z, F[:, 0], F[:, 1], G[:, 0], G[:, 1], m1)


# -- identities and constants -----------------------------------------------

def dm11_dx(x, order=DEFAULT_ORDER, h=1e-3):
    vals = [resolvent_solve(x + k * h, order).m1[0, 0] for k in (-2, -1, 1, 2)]
    return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)


def verify_identities(x_grid, order=128, pv=None):
    """Maximum discrepancies of the determinant / Painleve V identities."""
    xs = np.asarray(x_grid, dtype=float)
    if xs.min() <= 0:
        raise ValueError("grid must be positive")
    pv = pv or pv_solve()
    out = {"sigma": 0.0, "xi2": 0.0, "D_plus": 0.0, "D_minus": 0.0, "Q_plus": 0.0, "Q_minus": 0.0}
    for x in xs:
        xi = float(pv.xi(x)[0])
        xip = float(pv.xi_prime(x)[0])
        ixi = float(pv.int_xi(x)[0])
        p1, p2 = log_det_derivatives(x, 0, order)
        lp, lplus, lminus = log_dets(x, order)
        out["sigma"] = max(out["sigma"], abs(x * p1 - float(pv.sigma(x)[0])))
        out["xi2"] = max(out["xi2"], abs(xi * xi + p2))
        out["D_plus"] = max(out["D_plus"], abs(lplus - 0.5 * lp + 0.5 * ixi))
        out["D_minus"] = max(out["D_minus"], abs(lminus - 0.5 * lp - 0.5 * ixi))
        _, dp2 = log_det_derivatives(x, 1, order)
        _, dm2 = log_det_derivatives(x, 2, order)
        out["Q_plus"] = max(out["Q_plus"], abs(xi * xi + xip + 2 * dp2))
        out["Q_minus"] = max(out["Q_minus"], abs(xi * xi - xip + 2 * dm2))
    return out


def resolvent_identities(xs, order=DEFAULT_ORDER, pv=None):
    """Resolvent-side checks: log-derivatives of D+-, the m11 relation, and xi."""
    pv = pv or pv_solve()
    rows = []
    for x in xs:
        r = resolvent_solve(x, order)
        dplus, _ = log_det_derivatives(x, 1, order)
        dminus, _ = log_det_derivatives(x, 2, order)
        xi = float(pv.xi(x)[0])
        rows.append({
            "x": float(x),
            "dlogD_plus": abs(dplus - r.dlog_D(1)),
            "dlogD_minus": abs(dminus - r.dlog_D(-1)),
            "m11": abs(2j * dm11_dx(x, order) - xi * xi),
            "xi": abs(r.xi - xi),
            "symmetry": r.symmetry_defect(),
        })
    return rows


def dyson_constant():
    return LOG2 / 12 + 3 * zeta_prime_minus_one().value


def d_constant(sign):
    return LOG2 / 24 + sign * LOG2 / 4 + 1.5 * zeta_prime_minus_one().value


def constants_extraction(x_samples, order=128, pv=None, c=3.0, x_far=PV_X_MAX):
    """Residuals of the large-x constants and the sigma-integral identity."""
    xs = np.asarray(x_samples, dtype=float)
    pv = pv or pv_solve()
    rows = []
    for x in xs:
        lp, lplus, lminus = log_dets(x, order)
        rows.append({
            "x": float(x),
            "dyson": lp + x * x / 2 + math.log(x) / 4 - dyson_constant(),
            "D_plus": lplus + x * x / 4 + x / 2 + math.log(x) / 8 - d_constant(1),
            "D_minus": lminus + x * x / 4 - x / 2 + math.log(x) / 8 - d_constant(-1),
            "U": float(pv.int_xi(x)[0]) - x + LOG2 / 2,
        })
    return {"rows": rows, "pvzeta": pvzeta_residual(pv, c, x_far)}


def pvzeta_residual(pv, c=3.0, x_far=PV_X_MAX):
    """Left side of the sigma-integral identity minus its closed form.

    The improper upper integral is cut at x_far; the neglected tail is
    O(1/x_far^2).
    """
    if c <= 0:
        raise ValueError("c must be positive")
    nodes, weights = np.polynomial.legendre.leggauss(40)

    def quad(f, a, b, panels):
        edges = np.linspace(a, b, panels + 1)
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            y = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
            total += 0.5 * (hi - lo) * np.dot(weights, f(y))
        return total

    sig_over_y = lambda y: pv.sigma(y) / y  # noqa: E731
    lower = quad(sig_over_y, 0.0, c, max(4, int(4 * c)))
    upper = quad(lambda y: sig_over_y(y) + y + 1 / (4 * y), c, x_far, int(4 * (x_far - c)))
    closed = -c * c / 2 - math.log(c) / 4 + dyson_constant()
    return float(lower + upper - closed)


def xi_tail_integral(pv, x_end=10.0):
    """int_0^x_end (1 - xi)."""
    return x_end - float(pv.int_xi(x_end)[0])


# -- output ------------------------------------------------------------------

def table_csv(xs, order=DEFAULT_ORDER, pv=None):
    xs = np.asarray(xs, dtype=float)
    pv = pv or pv_solve()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "P", "D_plus", "D_minus", "sigma", "xi"])
    for x in xs:
        lp, lplus, lminus = log_dets(x, order)
        w.writerow([repr(float(x)), repr(math.exp(lp)), repr(math.exp(lplus)), repr(math.exp(lminus)),
                    repr(float(pv.sigma(x)[0])), repr(float(pv.xi(x)[0]))])
    return buf.getvalue()


def identity_report_json(report):
    return json.dumps({"schema": 1, **{k: float(v) for k, v in report.items()}}, indent=2, sort_keys=True)
