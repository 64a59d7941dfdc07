"""Stokes data (s1, s2, s3), the solution families they label, and the
constants that enter the endpoint asymptotics."""

from dataclasses import dataclass, asdict
from enum import Enum
import cmath
import math

from .numerics import arg_gamma

CONSTRAINT_TOL = 1e-14
CLASS_TOL = 1e-12


class ConstraintError(ValueError):
    pass


class ClassMismatch(ValueError):
    pass


class SolutionClass(str, Enum):
    REAL_AS = "RealAblowitzSegur"
    HASTINGS_MCLEOD = "HastingsMcLeod"
    IMAG_AS = "ImagAblowitzSegur"
    GENERIC_IMAG = "GenericImaginary"
    SINGULAR_REAL = "SingularReal"
    UNSUPPORTED = "Unsupported"


GLOBAL_FAMILIES = (
    SolutionClass.REAL_AS,
    SolutionClass.HASTINGS_MCLEOD,
    SolutionClass.IMAG_AS,
    SolutionClass.GENERIC_IMAG,
)


def constraint_residual(s1, s2, s3):
    return s1 - s2 + s3 + s1 * s2 * s3


@dataclass(frozen=True)
class MonodromyData:
    s1: complex
    s2: complex
    s3: complex

    def __post_init__(self):
        for name in ("s1", "s2", "s3"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ConstraintError(f"{name} is not finite")
            object.__setattr__(self, name, v)
        r = constraint_residual(self.s1, self.s2, self.s3)
        scale = max(1.0, abs(self.s1), abs(self.s2), abs(self.s3), abs(self.s1 * self.s2 * self.s3))
        if abs(r) > CONSTRAINT_TOL * scale:
            raise ConstraintError(f"s1 - s2 + s3 + s1 s2 s3 = {r:.3e}, not zero")

    def __neg__(self):
        return MonodromyData(-self.s1, -self.s2, -self.s3)

    def is_zero(self):
        return self.s1 == 0 and self.s2 == 0 and self.s3 == 0

    def as_dict(self):
        return {k: [v.real, v.imag] for k, v in (("s1", self.s1), ("s2", self.s2), ("s3", self.s3))}

    # Canonical triples for each family, constraint solved for s2, s3.
    @classmethod
    def real_as(cls, a):
        """Real Ablowitz-Segur data with i*s1 = a, |a| < 1."""
        s1 = -1j * a
        return cls(s1, 0, -s1)

    @classmethod
    def hastings_mcleod(cls, sign=1):
        s1 = -1j * sign
        return cls(s1, 0, -s1)

    @classmethod
    def imag_as(cls, s1):
        s1 = float(s1)
        return cls(s1, 0, -s1)

    @classmethod
    def generic_imag(cls, s1):
        s1 = complex(s1)
        s2 = (s1 - s1.conjugate()) / (1 + abs(s1) ** 2)
        return cls(s1, s2, -s1.conjugate())


def classify(m):
    s1, s2, s3 = m.s1, m.s2, m.s3
    tol = CLASS_TOL
    if m.is_zero():
        return SolutionClass.REAL_AS
    real = abs(s3 - s1.conjugate()) <= tol and abs(s2.imag) <= tol
    imag = abs(s3 + s1.conjugate()) <= tol and abs(s2.real) <= tol
    if real:
        if abs(s2) > tol:
            return SolutionClass.SINGULAR_REAL
        a = (1j * s1).real
        if abs(abs(a) - 1) <= tol:
            return SolutionClass.HASTINGS_MCLEOD
        if abs(a) < 1:
            return SolutionClass.REAL_AS
        return SolutionClass.SINGULAR_REAL
    if imag:
        if abs(s2) <= tol:
            return SolutionClass.IMAG_AS
        if abs(s1.imag) > tol and abs(s2) < 1 - tol:
            return SolutionClass.GENERIC_IMAG
    return SolutionClass.UNSUPPORTED


@dataclass(frozen=True)
class AsymptoticParams:
    beta: float | None = None
    phi_minus: float | None = None
    d: float | None = None
    rho: float | None = None
    sigma_sign: int | None = None
    theta_phase: float | None = None
    nu: complex | None = None

    def as_dict(self):
        out = {}
        for k, v in asdict(self).items():
            if isinstance(v, complex):
                v = [v.real, v.imag]
            out[k] = v
        return out


def _minus_inf_imag(s1):
    d2 = math.log(1 + abs(s1) ** 2) / math.pi
    phi = 1.5 * d2 * math.log(2) - math.pi / 4 - arg_gamma(0.5j * d2) - cmath.phase(s1)
    return math.sqrt(d2), phi


def asym_params(m, klass=None):
    klass = klass or classify(m)
    s1 = m.s1
    if klass not in GLOBAL_FAMILIES:
        raise ClassMismatch(f"no endpoint constants for class {klass.value}")
    if m.is_zero():
        return AsymptoticParams(beta=0.0)
    if klass is SolutionClass.REAL_AS:
        beta = math.log(1 - abs(s1) ** 2) / (2 * math.pi)
        phi = -math.pi / 4 - arg_gamma(1j * beta) - cmath.phase(s1)
        return AsymptoticParams(beta=beta, phi_minus=phi)
    if klass is SolutionClass.HASTINGS_MCLEOD:
        return AsymptoticParams()
    d, phi = _minus_inf_imag(s1)
    if klass is SolutionClass.IMAG_AS:
        return AsymptoticParams(d=d, phi_minus=phi)
    rho2 = math.log((1 + abs(s1) ** 2) / (2 * abs(s1.imag))) / math.pi
    sigma = -1 if s1.imag > 0 else 1
    theta = (-3 * math.pi / 4 - 3.5 * rho2 * math.log(2) + arg_gamma(1j * rho2)
             + cmath.phase(1 + s1 * s1))
    return AsymptoticParams(d=d, phi_minus=phi, rho=math.sqrt(rho2), sigma_sign=sigma,
                            theta_phase=theta, nu=-1j * sigma * rho2)


def parse_complex(text):
    """Accepts '0.5', '-0.5i', '1+2i', '0.3-0.1j'."""
    t = text.strip().replace(" ", "").replace("i", "j")
    if t in ("j", "+j"):
        return 1j
    if t == "-j":
        return -1j
    try:
        return complex(t)
    except ValueError as exc:
        raise ValueError(f"cannot read complex number {text!r}") from exc


def from_shortcut(text):
    """Expand 'hm', 'as:0.5', 'imag-as:1.0', 'generic:0.5i' or 's1,s2,s3'."""
    t = text.strip().lower()
    if t in ("hm", "hm:+", "hm:1"):
        return MonodromyData.hastings_mcleod(1)
    if t in ("hm:-", "hm:-1"):
        return MonodromyData.hastings_mcleod(-1)
    if t == "zero":
        return MonodromyData(0, 0, 0)
    if ":" in t:
        kind, value = t.split(":", 1)
        if kind == "as":
            return MonodromyData.real_as(float(value))
        if kind == "imag-as":
            return MonodromyData.imag_as(float(value))
        if kind == "generic":
            return MonodromyData.generic_imag(parse_complex(value))
        raise ValueError(f"unknown class shortcut {kind!r}")
    parts = t.split(",")
    if len(parts) == 3:
        return MonodromyData(*(parse_complex(p) for p in parts))
    raise ValueError(f"cannot read monodromy data {text!r}")
