"""Oscillatory power series at the ends of the real line.

A ``TransSeries`` is a finite sum of terms ``c * s**e * exp(i k Theta(s))`` in
a large positive variable ``s``, with a shared phase

    Theta(s) = (2 Omega / 3) s**1.5 + nu log s + theta0.

Such sums describe Painleve II solutions near x = -inf (s = -x) and near
x = +inf (s = x).  Products stay in the class, so polynomials in u, u_x, x
can be evaluated on an expansion and their non-oscillating part read off.

``oscillatory_coefficients`` builds the coefficients by substituting the
ansatz into

    y'' + Omega^2 s y + Q s^{1/2} y^2 + C y^3 + F s^{-3/2} = 0

level by level: the level-n block sits at s**(-1/4 - 3n/4).
"""

from fractions import Fraction
import math

import numpy as np

QUARTER = Fraction(1, 4)


class TransSeries:
    def __init__(self, terms, omega=1.0, nu=0.0, theta0=0.0, floor=Fraction(-12)):
        self.omega = float(omega)
        self.nu = float(nu)
        self.theta0 = float(theta0)
        self.floor = Fraction(floor)
        self.terms = {}
        for (e, k), c in terms.items():
            e = Fraction(e)
            if e >= self.floor and c != 0:
                self.terms[(e, int(k))] = self.terms.get((e, int(k)), 0) + complex(c)

    def _like(self, terms):
        return TransSeries(terms, self.omega, self.nu, self.theta0, self.floor)

    @classmethod
    def monomial(cls, e, coeff=1.0, like=None):
        t = {(Fraction(e), 0): coeff}
        if like is None:
            return cls(t)
        return like._like(t)

    def phase(self, s):
        s = np.asarray(s, dtype=float)
        return 2.0 * self.omega / 3.0 * s ** 1.5 + self.nu * np.log(s) + self.theta0

    def dphase(self, s):
        return self.omega * np.sqrt(s) + self.nu / s

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TransSeries):
            return other
        return self._like({(Fraction(0), 0): complex(other)})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TransSeries):
            c0 = complex(other)
            return self._like({key: c0 * c for key, c in self.terms.items()})
        out = {}
        floor = max(self.floor, other.floor)
        for (e1, k1), c1 in self.terms.items():
            for (e2, k2), c2 in other.terms.items():
                e = e1 + e2
                if e < floor:
                    continue
                key = (e, k1 + k2)
                out[key] = out.get(key, 0) + c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n == 0:
            return self._coerce(1.0)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def truncate(self, floor):
        return TransSeries(self.terms, self.omega, self.nu, self.theta0, floor)

    def cleaned(self, tol=1e-13):
        scale = max((abs(c) for c in self.terms.values()), default=0.0)
        return self._like({k: c for k, c in self.terms.items() if abs(c) > tol * max(scale, 1.0)})

    # -- calculus -----------------------------------------------------------
    def derivative(self):
        """d/ds, term by term."""
        out = {}
        for (e, k), c in self.terms.items():
            if e != 0:
                out[(e - 1, k)] = out.get((e - 1, k), 0) + c * float(e)
            if k != 0:
                out[(e + Fraction(1, 2), k)] = out.get((e + Fraction(1, 2), k), 0) + 1j * k * self.omega * c
                out[(e - 1, k)] = out.get((e - 1, k), 0) + 1j * k * self.nu * c
        return self._like(out)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        theta = self.phase(s)
        total = np.zeros(s.shape, dtype=complex)
        for (e, k), c in self.terms.items():
            total = total + c * s ** float(e) * np.exp(1j * k * theta)
        return total

    def smooth_part(self):
        return self._like({key: c for key, c in self.terms.items() if key[1] == 0})

    def oscillating_part(self):
        return self._like({key: c for key, c in self.terms.items() if key[1] != 0})

    def leading_exponent(self, tol=0.0):
        es = [e for (e, _), c in self.terms.items() if abs(c) > tol]
        return max(es) if es else None

    def tail_integral(self, T, divergence_tol=1e-12):
        """Integral of the series over [T, +inf).

        Smooth terms need exponent < -1; they are integrated exactly.
        Oscillating terms are integrated by repeated integration by parts
        against exp(i k Theta), which lowers the exponent by 3/2 per round.
        """
        total = 0.0 + 0.0j
        for (e, k), c in self.terms.items():
            if k == 0:
                if e >= -1:
                    if abs(c) > divergence_tol:
                        raise ValueError(f"non-integrable smooth term s^{e} with coefficient {c}")
                    continue
                total += -c * T ** float(e + 1) / float(e + 1)
        by_k = {}
        for (e, k), c in self.terms.items():
            if k != 0:
                by_k.setdefault(k, {})[e] = c
        for k, g in by_k.items():
            total += self._oscillatory_tail(k, g, T)
        return complex(total)

    def _oscillatory_tail(self, k, g, T, rounds=12):
        # 1/Theta' = sum_j d_j s^{-1/2 - 3j/2}
        inv = {Fraction(-1, 2) - Fraction(3 * j, 2): (1.0 / self.omega) * (-self.nu / self.omega) ** j
               for j in range(10)}
        theta_T = float(self.phase(T))
        total = 0.0 + 0.0j
        sign = 1.0
        for _ in range(rounds):
            if not g:
                break
            h = {}
            for e1, c1 in g.items():
                for e2, c2 in inv.items():
                    e = e1 + e2
                    if e < self.floor:
                        continue
                    h[e] = h.get(e, 0) + c1 * c2 / (1j * k)
            h_T = sum(c * T ** float(e) for e, c in h.items())
            total += -sign * h_T * np.exp(1j * k * theta_T)
            # next integrand is d/ds h (pure powers; the phase was peeled off)
            g = {e - 1: c * float(e) for e, c in h.items() if e != 0 and e - 1 >= self.floor}
            sign = -sign
        return total


def level_exponent(n):
    return -QUARTER - Fraction(3 * n, 4)


def oscillatory_coefficients(amplitude, omega, Q, C, F, levels):
    """Coefficients b[n][k] and log-phase rate nu for the ansatz

        y = sum_n s^{p_n} sum_k b[n][k] exp(i k Theta),  p_n = -1/4 - 3n/4,

    with b[0][+-1] = amplitude / 2.  Returns (b, nu).
    """
    a = float(amplitude)
    b = [dict() for _ in range(levels + 3)]
    b[0] = {1: a / 2, -1: a / 2}
    nu = 0.0
    om2 = omega * omega

    def get(n, k):
        if n < 0:
            return 0.0
        return b[n].get(k, 0.0)

    def conv2(m, k):
        tot = 0.0
        for i in range(0, m):
            j = m - 1 - i
            for k1, c1 in b[i].items():
                c2 = b[j].get(k - k1)
                if c2 is not None:
                    tot += c1 * c2
        return tot

    def conv3(m, k):
        tot = 0.0
        n = m - 2
        if n < 0:
            return 0.0
        for i in range(n + 1):
            for j in range(n + 1 - i):
                l = n - i - j
                for k1, c1 in b[i].items():
                    for k2, c2 in b[j].items():
                        c3 = b[l].get(k - k1 - k2)
                        if c3 is not None:
                            tot += c1 * c2 * c3
        return tot

    def residual(m, k):
        r = om2 * (1 - k * k) * get(m, k)
        p2 = float(level_exponent(m - 2))
        r += (-2 * k * k * omega * nu + 1j * k * omega * (0.5 + 2 * p2)) * get(m - 2, k)
        p4 = float(level_exponent(m - 4))
        r += (-k * k * nu * nu + 1j * k * nu * (2 * p4 - 1) + p4 * (p4 - 1)) * get(m - 4, k)
        if Q:
            r += Q * conv2(m, k)
        if C:
            r += C * conv3(m, k)
        if m == 3 and k == 0:
            r += F
        return r

    def harmonics(n):
        return [k for k in range(-(n + 1), n + 2) if (k - n - 1) % 2 == 0]

    for j in range(1, levels + 1):
        own = [k for k in harmonics(j) if abs(k) != 1]
        unknowns = [("b", j, k) for k in own]
        equations = [(j, k) for k in own]
        if (j + 1) % 2 == 0:
            if j == 1:
                unknowns.append(("nu", 0, 0))
            else:
                unknowns += [("b", j - 1, 1), ("b", j - 1, -1)]
            equations += [(j + 1, 1), (j + 1, -1)]

        def assign(z):
            nonlocal nu
            for (kind, n, k), val in zip(unknowns, z):
                if kind == "nu":
                    nu = val
                else:
                    b[n][k] = val

        nz = len(unknowns)
        zero = np.zeros(nz, dtype=complex)
        assign(zero)
        r0 = np.array([residual(m, k) for m, k in equations], dtype=complex)
        A = np.zeros((len(equations), nz), dtype=complex)
        for i in range(nz):
            e = zero.copy()
            e[i] = 1.0
            assign(e)
            A[:, i] = np.array([residual(m, k) for m, k in equations]) - r0
        sol = np.linalg.lstsq(A, -r0, rcond=None)[0]
        if any(kind == "nu" for kind, _, _ in unknowns):
            sol[-1] = sol[-1].real
        assign(sol)
        nu = float(np.real(nu))
    return b[: levels + 1], nu


def series_from_coefficients(b, omega, nu, theta0, base=None, floor=Fraction(-12)):
    terms = {}
    for n, row in enumerate(b):
        e = level_exponent(n)
        for k, c in row.items():
            if abs(c) > 0:
                terms[(e, k)] = c
    if base:
        for key, c in base.items():
            terms[key] = terms.get(key, 0) + c
    return TransSeries(terms, omega, nu, theta0, floor)


def power_series_hm(order):
    """Coefficients a_n of u = sqrt(t/2) sum a_n t^{-3n}, t = -x, for the
    solution of u'' = 2u^3 + xu growing like sqrt(-x/2).

    Exact rationals; substitution gives
        sum a_n (1/2 - 3n)(-1/2 - 3n) t^{-3-3n} = [u^3 series] - [u series].
    """
    a = [Fraction(1)]
    for N in range(1, order + 1):
        # cube of the series at index N with a_N = 0
        cube = Fraction(0)
        trial = a + [Fraction(0)]
        for i in range(N + 1):
            for j in range(N + 1 - i):
                cube += trial[i] * trial[j] * trial[N - i - j]
        prev = a[N - 1] * (Fraction(1, 2) - 3 * (N - 1)) * (Fraction(-1, 2) - 3 * (N - 1))
        # 3 a_N + cube - a_N = prev
        a.append((prev - cube) / 2)
    return a


def hm_series(order, floor=Fraction(-12)):
    coeffs = power_series_hm(order)
    r2 = 1.0 / math.sqrt(2.0)
    terms = {(Fraction(1, 2) - 3 * n, 0): r2 * float(c) for n, c in enumerate(coeffs)}
    return TransSeries(terms, floor=floor)
