"""Exact conserved densities of mKdV restricted to Painleve II solutions.

Polynomials live in Q(i)[u, u_x, x].  Every x-derivative is reduced with
u_xx = 2u^3 + xu, so two polynomials are equal as functions along every
solution iff their reduced forms agree term by term.

Two towers are built:

* the densities alpha_k from the Riccati recurrence, and
* the antiderivatives L_k from the formal expansion of the Lax solution at
  lambda = infinity, via the F / Lambda / m recurrence and a logarithm.

``DensityEngine`` memoizes both.  First computation of an order happens
under a lock, so one engine may be shared between threads; reads of already
computed orders are lock-free.
"""

from fractions import Fraction
import json
import threading


class GaussianRational:
    """re + i im with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, v):
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            return cls(Fraction(v.real), Fraction(v.imag))
        return cls(v, 0)

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.coerce(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __eq__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"


I = GaussianRational(0, 1)
ONE = GaussianRational(1, 0)


class DivisionError(ArithmeticError):
    pass


class DiffPoly:
    """Sum of coeff * u^a u_x^b x^c, stored as {(a, b, c): GaussianRational}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for mono, c in (terms or {}).items():
            c = GaussianRational.coerce(c)
            if c:
                self.terms[tuple(mono)] = c

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def mono(cls, a=0, b=0, c=0, coeff=1):
        return cls({(a, b, c): coeff})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            other = DiffPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _combine(self, other, sign):
        if not isinstance(other, DiffPoly):
            other = DiffPoly.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            v = (c if sign > 0 else -c) if v is None else (v + c if sign > 0 else v - c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return DiffPoly._raw(out)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return DiffPoly.const(other) - self

    def __neg__(self):
        return DiffPoly._raw({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            c0 = GaussianRational.coerce(other)
            if not c0:
                return DiffPoly()
            return DiffPoly._raw({k: c * c0 for k, c in self.terms.items()})
        out = {}
        for (a1, b1, c1), k1 in self.terms.items():
            for (a2, b2, c2), k2 in other.terms.items():
                key = (a1 + a2, b1 + b2, c1 + c2)
                v = out.get(key)
                out[key] = k1 * k2 if v is None else v + k1 * k2
        return DiffPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n):
        out = DiffPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def div_u(self):
        """Exact division by u; fails if some monomial has no u factor."""
        out = {}
        for (a, b, c), k in self.terms.items():
            if a == 0:
                raise DivisionError(f"monomial u^0 u_x^{b} x^{c} is not divisible by u")
            out[(a - 1, b, c)] = k
        return DiffPoly._raw(out)

    def degree(self):
        return max((sum(k) for k in self.terms), default=-1)

    def evaluate(self, u, ux, x):
        """Numerical value at (u, u_x, x); accepts numpy arrays."""
        total = 0j
        for (a, b, c), k in self.terms.items():
            total = total + complex(k) * (u ** a) * (ux ** b) * (x ** c)
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-t for t in kv[0])))

    def to_records(self):
        return [
            {"monomial": list(mono), "coeff": [c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator]}
            for mono, c in self.sorted_terms()
        ]

    @classmethod
    def from_records(cls, records):
        terms = {}
        for r in records:
            rn, rd, im_n, im_d = r["coeff"]
            terms[tuple(r["monomial"])] = GaussianRational(Fraction(rn, rd), Fraction(im_n, im_d))
        return cls(terms)

    def to_json(self):
        return json.dumps(self.to_records())

    def to_latex(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b, c), k in self.sorted_terms():
            # thin spaces keep u_x x from reading as u_{xx}
            mono = r"\,".join(
                s for s in (_latex_power("u", a), _latex_power("u_{x}", b), _latex_power("x", c)) if s
            )
            coeff = _latex_coeff(k, bool(mono))
            parts.append(coeff + mono)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*u^{a}*ux^{b}*x^{e}" for (a, b, e), c in self.sorted_terms())


def _latex_power(sym, n):
    if n == 0:
        return ""
    if n == 1:
        return sym
    return "%s^{%d}" % (sym, n)


def _latex_frac(q):
    if q.denominator == 1:
        return str(abs(q.numerator))
    return r"\frac{%d}{%d}" % (abs(q.numerator), q.denominator)


def _latex_coeff(k, has_mono):
    if k.im == 0 or k.re == 0:
        q = k.re if k.im == 0 else k.im
        sign = "-" if q < 0 else ""
        unit = "" if k.im == 0 else "i"
        mag = _latex_frac(q)
        if mag == "1" and has_mono:
            mag = ""
        body = mag + unit
        if not body:
            body = ""
        return sign + (body if body or has_mono else "1")
    return r"\left(%s\right)" % (_latex_coeff(GaussianRational(k.re), False) + ("+" if k.im > 0 else "")
                                 + _latex_coeff(GaussianRational(0, k.im), False))


U = DiffPoly.mono(1, 0, 0)
UX = DiffPoly.mono(0, 1, 0)
X = DiffPoly.mono(0, 0, 1)


def diff_x(p):
    """d/dx along solutions: u' = u_x, u_x' = 2u^3 + xu, x' = 1."""
    out = {}

    def add(key, v):
        cur = out.get(key)
        out[key] = v if cur is None else cur + v

    for (a, b, c), k in p.terms.items():
        if a:
            add((a - 1, b + 1, c), k * a)
        if b:
            add((a + 3, b - 1, c), k * (2 * b))
            add((a + 1, b - 1, c + 1), k * b)
        if c:
            add((a, b, c - 1), k * c)
    return DiffPoly._raw({key: v for key, v in out.items() if v})


def partial_x(p):
    """Derivative in the explicit x only (u and u_x held fixed)."""
    return DiffPoly({(a, b, c - 1): k * c for (a, b, c), k in p.terms.items() if c})


# -- Pauli-basis 2x2 matrices over DiffPoly ---------------------------------

class PauliMatrix:
    """c0 I + c1 sigma_1 + c2 sigma_2 + c3 sigma_3."""

    __slots__ = ("c",)

    def __init__(self, c0=None, c1=None, c2=None, c3=None):
        self.c = tuple(x if isinstance(x, DiffPoly) else DiffPoly.const(x or 0) for x in (c0, c1, c2, c3))

    def __add__(self, o):
        return PauliMatrix(*(a + b for a, b in zip(self.c, o.c)))

    def __sub__(self, o):
        return PauliMatrix(*(a - b for a, b in zip(self.c, o.c)))

    def __neg__(self):
        return PauliMatrix(*(-a for a in self.c))

    def scale(self, k):
        return PauliMatrix(*(a * k for a in self.c))

    def __mul__(self, o):
        if not isinstance(o, PauliMatrix):
            return self.scale(o)
        a0, a1, a2, a3 = self.c
        b0, b1, b2, b3 = o.c
        # (a0 + a.s)(b0 + b.s) = a0 b0 + a.b + (a0 b + b0 a + i a x b).s
        c0 = a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3
        c1 = a0 * b1 + b0 * a1 + (a2 * b3 - a3 * b2) * I
        c2 = a0 * b2 + b0 * a2 + (a3 * b1 - a1 * b3) * I
        c3 = a0 * b3 + b0 * a3 + (a1 * b2 - a2 * b1) * I
        return PauliMatrix(c0, c1, c2, c3)

    def diagonal(self):
        return PauliMatrix(self.c[0], None, None, self.c[3])

    def off_diagonal(self):
        return PauliMatrix(None, self.c[1], self.c[2], None)

    def is_diagonal(self):
        return self.c[1].is_zero() and self.c[2].is_zero()

    def is_off_diagonal(self):
        return self.c[0].is_zero() and self.c[3].is_zero()

    def entry(self, i, j):
        c0, c1, c2, c3 = self.c
        if (i, j) == (1, 1):
            return c0 + c3
        if (i, j) == (2, 2):
            return c0 - c3
        if (i, j) == (1, 2):
            return c1 - c2 * I
        if (i, j) == (2, 1):
            return c1 + c2 * I
        raise IndexError((i, j))

    def __eq__(self, o):
        return isinstance(o, PauliMatrix) and self.c == o.c

    def __repr__(self):
        return "PauliMatrix(I: %r, s1: %r, s2: %r, s3: %r)" % self.c


def sigma(k, coeff):
    parts = [None, None, None, None]
    parts[k] = coeff
    return PauliMatrix(*parts)


ZERO_M = PauliMatrix()
ID_M = PauliMatrix(1)


class DiagSeriesTerm:
    __slots__ = ("order", "F", "Lambda", "m")

    def __init__(self, order, F, Lambda, m):
        if not F.is_off_diagonal():
            raise AssertionError(f"F_{order} has a diagonal part")
        if not Lambda.is_diagonal():
            raise AssertionError(f"Lambda_{order} has an off-diagonal part")
        self.order, self.F, self.Lambda, self.m = order, F, Lambda, m


def _seed_F():
    h = GaussianRational(Fraction(1, 2))
    q = GaussianRational(Fraction(1, 4))
    F1 = sigma(1, U * h)
    F2 = sigma(2, UX * (-q))
    F3 = sigma(1, (X * U + U ** 3) * GaussianRational(Fraction(-1, 8)))
    F4 = sigma(2, (U + X * UX + U * U * UX) * GaussianRational(Fraction(1, 16)))
    return [None, F1, F2, F3, F4]


def _seed_lambda1():
    return sigma(3, (U ** 4 + X * U * U - UX * UX) * GaussianRational(0, Fraction(1, 2)))


class OrderLimitError(ValueError):
    pass


class DensityEngine:
    def __init__(self, max_order=12):
        self.max_order = max_order
        self._lock = threading.Lock()
        self._alpha = [DiffPoly.mono(2, 0, 0, GaussianRational(0, Fraction(-1, 2)))]
        self._F = _seed_F()
        self._Lambda = [None, _seed_lambda1()]
        self._m = [ID_M]
        self._G = [ID_M]
        self._L = []
        self._ell = [None]

    def _guard(self, k):
        if k < 0 or k > self.max_order:
            raise OrderLimitError(f"order {k} outside [0, {self.max_order}]")

    # -- densities ----------------------------------------------------------
    def alpha(self, k):
        self._guard(k)
        if k < len(self._alpha):
            return self._alpha[k]
        with self._lock:
            while len(self._alpha) <= k:
                j = len(self._alpha) - 1
                a = self._alpha
                conv = DiffPoly()
                for l in range(j):
                    conv = conv + a[l] * a[j - 1 - l]
                nxt = UX * a[j].div_u() - diff_x(a[j]) + conv
                a.append(nxt * GaussianRational(0, Fraction(1, 2)))
        return self._alpha[k]

    # -- matrix series ------------------------------------------------------
    def _extend_F(self, kmax):
        """Run the recurrence until Lambda_kmax and F_{kmax+3} exist."""
        F, Lam = self._F, self._Lambda
        A = sigma(1, UX * 2) + sigma(3, U * U * GaussianRational(0, 2))
        B = sigma(2, U * 4)
        ix = X * GaussianRational(0, 1)
        s3 = sigma(3, DiffPoly.const(GaussianRational(1)))
        while len(Lam) <= kmax:
            k = len(Lam)
            nxt = F[k + 1]
            comm = (s3 * nxt - nxt * s3).scale(ix)
            rhs = F[k] * k - comm - A * nxt - B * F[k + 2]
            for mm in range(1, k):
                rhs = rhs + F[k - mm] * Lam[mm] * mm
            Lam.append(rhs.diagonal() * GaussianRational(Fraction(-1, k)))
            r1, r2 = rhs.c[1], rhs.c[2]
            # 4i[sigma3, a s1 + b s2] = -8a s2 + 8b s1
            F.append(PauliMatrix(None, r2 * GaussianRational(Fraction(-1, 8)), r1 * GaussianRational(Fraction(1, 8)), None))

    def F(self, k):
        self._guard(k - 3 if k > 3 else 0)
        with self._lock:
            self._extend_F(max(1, k - 3))
        return self._F[k]

    def Lambda(self, k):
        self._guard(k)
        with self._lock:
            self._extend_F(k)
        return self._Lambda[k]

    def m(self, k):
        self._guard(k)
        if k < len(self._m):
            return self._m[k]
        with self._lock:
            self._extend_F(k)
            while len(self._G) <= k:
                n = len(self._G)
                acc = ZERO_M
                for j in range(1, n + 1):
                    acc = acc + self._Lambda[j] * self._G[n - j] * j
                self._G.append(acc * GaussianRational(Fraction(1, n)))
            while len(self._m) <= k:
                n = len(self._m)
                acc = self._G[n]
                for j in range(1, n + 1):
                    acc = acc + self._F[j] * self._G[n - j]
                self._m.append(acc)
        return self._m[k]

    def psi_series(self, K):
        self._guard(K)
        return [DiagSeriesTerm(k, self.F(k), self.Lambda(k), self.m(k)) for k in range(1, K + 1)]

    # -- antiderivatives ----------------------------------------------------
    def L(self, k):
        """Coefficient of lambda^{-k-1} in L, from exp(-sum L_k l^{-k-1}) = 1 + sum (m_k)_11 l^{-k}."""
        self._guard(k)
        if k < len(self._L):
            return self._L[k]
        M = [None] + [self.m(j).entry(1, 1) for j in range(1, k + 2)]
        with self._lock:
            ell = self._ell
            while len(ell) <= k + 1:
                n = len(ell)
                acc = M[n] * n
                for j in range(1, n):
                    acc = acc - ell[j] * M[n - j] * j
                ell.append(acc * GaussianRational(Fraction(1, n)))
            while len(self._L) <= k:
                self._L.append(-ell[len(self._L) + 1])
        return self._L[k]

    def hamiltonian(self):
        H = self.Lambda(1).entry(1, 1) * I
        expected = (UX * UX - X * U * U - U ** 4) * GaussianRational(Fraction(1, 2))
        if H != expected:
            raise AssertionError("i (Lambda_1)_11 differs from the Hamiltonian")
        return H

    def riccati_coefficients(self, jmax):
        """u times the coefficient of lambda^{-j-1} (j = -1..jmax-1) of

            alpha' - 2 i lambda alpha - alpha^2 - (u_x/u) alpha + u^2,

        with alpha = sum alpha_k lambda^{-k-1}.  All should vanish."""
        a = [self.alpha(k) for k in range(jmax + 1)]
        out = [(a[0] * GaussianRational(0, -2) + U * U) * U]
        for j in range(jmax):
            sq = DiffPoly()
            for l in range(j):
                sq = sq + a[l] * a[j - 1 - l]
            coeff = diff_x(a[j]) - a[j + 1] * GaussianRational(0, 2) - sq
            out.append(coeff * U - UX * a[j])
        return out


_DEFAULT = DensityEngine()


def default_engine():
    return _DEFAULT


def alpha(k):
    return _DEFAULT.alpha(k)


def L(k):
    return _DEFAULT.L(k)


def psi_series(K):
    return _DEFAULT.psi_series(K)


def hamiltonian():
    return _DEFAULT.hamiltonian()


def evaluate(p, u, ux, x):
    return p.evaluate(u, ux, x)


def antiderivative_defect(k, engine=None):
    """diff_x(L_k) - alpha_k; the zero polynomial when the identity holds."""
    eng = engine or _DEFAULT
    return diff_x(eng.L(k)) - eng.alpha(k)
