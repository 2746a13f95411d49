"""Kloosterman sums and the two identities tying them to f_b at zeta_2k."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import gcd

from dedekind.arith import euler_phi, mod_inverse
from dedekind.invpoly import CycResidue, InvPoly, build_invpoly, eval_numeric

__all__ = [
    "CapabilityError",
    "FORMS",
    "KloostermanParams",
    "Prop25Result",
    "kloosterman_exact",
    "kloosterman_float",
    "prop25_case",
    "verify_prop25",
]

EXACT_PHI_CEILING = 4096


class CapabilityError(RuntimeError):
    """The exact path would exceed its configured size ceiling."""


@dataclass(frozen=True)
class KloostermanParams:
    a: int
    b: int
    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"Kloosterman modulus must be >= 2, got {self.m}")
        object.__setattr__(self, "a", self.a % self.m)
        object.__setattr__(self, "b", self.b % self.m)

    def phases(self) -> list[int]:
        """``(a x + b x^-1) mod m`` for each unit x."""
        m = self.m
        return [(self.a * x + self.b * mod_inverse(x, m)) % m
                for x in range(1, m) if gcd(x, m) == 1]


def kloosterman_float(a: int, b: int, m: int) -> complex:
    """K(a, b, m) in double precision with compensated (fsum) accumulation.

    The imaginary part is returned unfiltered for diagnostics; it should be
    at rounding level since K is real.
    """
    ks = KloostermanParams(a, b, m)
    re, im = [], []
    for v in ks.phases():
        ang = 2 * math.pi * v / m
        re.append(math.cos(ang))
        im.append(math.sin(ang))
    return complex(math.fsum(re), math.fsum(im))


def kloosterman_exact(a: int, b: int, m: int, ceiling: int = EXACT_PHI_CEILING) -> CycResidue:
    """K(a, b, m) as an exact element of Z[zeta_m]."""
    ks = KloostermanParams(a, b, m)
    if euler_phi(m) > ceiling:
        raise CapabilityError(f"phi({m}) = {euler_phi(m)} exceeds ceiling {ceiling}")
    vec = [0] * m
    for v in ks.phases():
        vec[v] += 1
    return CycResidue.from_vector(m, vec)


def prop25_case(b: int, k: int) -> str | None:
    """``"c0"`` when 4 | c, ``"c2"`` when c = 2 mod 4 and k even, else None."""
    if k < 1 or b % k:
        raise ValueError(f"{k} does not divide {b}")
    c = b // k
    if c % 4 == 0:
        return "c0"
    if c % 4 == 2 and k % 2 == 0:
        return "c2"
    return None


@dataclass
class Prop25Result:
    b: int
    k: int
    case: str | None
    lhs: complex | None = None
    rhs: complex | None = None
    error: float | None = None
    tolerance: float | None = None
    passed: bool | None = None
    exact: bool | None = None

    @property
    def applicable(self) -> bool:
        return self.case is not None

    def to_record(self) -> dict:
        rec = {"b": self.b, "k": self.k, "case": self.case or "not-applicable"}
        if self.applicable:
            rec.update(
                lhs=[self.lhs.real, self.lhs.imag],
                rhs=[self.rhs.real, self.rhs.imag],
                error=self.error,
                tolerance=self.tolerance,
                passed=self.passed,
            )
            if self.exact is not None:
                rec["exact"] = self.exact
        return rec


FORMS = ("unit-i", "phase")


def _c2_unit(c: int, form: str) -> complex:
    # unit-i: the constant i; phase: exp(-pi i c/4), which equals i only for c = 6 mod 8
    if form == "unit-i":
        return 1j
    return cmath.exp(-1j * math.pi * c / 4)


def _rhs_numeric(b: int, k: int, case: str, form: str = "unit-i") -> complex:
    c = b // k
    twist = cmath.exp(2j * math.pi / (4 * k))
    if case == "c0":
        return 0.5 * twist * kloosterman_float(c // 4, c // 4, 2 * b)
    h = c // 2
    return 0.25 * _c2_unit(c, form) * twist * kloosterman_float(h, h * (1 - b), 4 * b)


def _exact_identity(p: InvPoly, k: int, case: str, form: str = "unit-i") -> bool:
    """Both sides in Z[zeta_N], N = 8b, after clearing the 1/2 or 1/4."""
    b = p.b
    n = 8 * b
    if euler_phi(n) > EXACT_PHI_CEILING:
        raise CapabilityError(f"phi({n}) exceeds ceiling {EXACT_PHI_CEILING}")
    c = b // k
    vec = [0] * n
    scale = 2 if case == "c0" else 4
    # zeta_2k = zeta_N^(4c)
    for e, coef in p.terms.items():
        vec[(4 * c * e) % n] += scale * coef
    if case == "c0":
        # zeta_4k = zeta_N^(2c); zeta_2b = zeta_N^4
        shift, step = 2 * c, 4
        phases = KloostermanParams(c // 4, c // 4, 2 * b).phases()
    else:
        # i = zeta_N^(2b), exp(-pi i c/4) = zeta_N^(-bc); zeta_4b = zeta_N^2
        unit = 2 * b if form == "unit-i" else -b * c
        shift, step = unit + 2 * c, 2
        h = c // 2
        phases = KloostermanParams(h, h * (1 - b), 4 * b).phases()
    for v in phases:
        vec[(shift + step * v) % n] -= 1
    return CycResidue.from_vector(n, vec).is_zero()


def verify_prop25(
    b: int,
    k: int,
    exact: bool = False,
    form: str = "unit-i",
    poly: InvPoly | None = None,
) -> Prop25Result:
    """Compare f_b(exp(2 pi i/2k)) with its Kloosterman-sum expression.

    Parameters
    ----------
    form : {"unit-i", "phase"}
        For the c = 2 (mod 4) identity, ``"unit-i"`` uses the unit factor
        ``i``; ``"phase"`` uses ``exp(-pi i c/4)``.  The two differ in
        sign exactly when c = 2 (mod 8).  The c = 0 (mod 4) identity is the
        same under both.
    exact : bool
        Also decide the identity exactly in Z[zeta_8b] (phi(8b) <= 4096).

    Notes
    -----
    The numeric comparison uses tolerance ``1e-7 * max(1, phi(b))``.
    """
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    case = prop25_case(b, k)
    if case is None:
        return Prop25Result(b, k, None)
    p = poly if poly is not None else build_invpoly(b)
    lhs = eval_numeric(p, 2 * k)
    rhs = _rhs_numeric(b, k, case, form)
    tol = 1e-7 * max(1, euler_phi(b))
    err = abs(lhs - rhs)
    res = Prop25Result(b, k, case, lhs, rhs, err, tol, err <= tol)
    if exact:
        res.exact = _exact_identity(p, k, case, form)
        res.passed = res.passed and res.exact
    return res
