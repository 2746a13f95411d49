"""The inversion polynomial f_b and exact evaluation at roots of unity.

f_b(zeta_m) is computed in Z[x]/Phi_m: exponents are folded modulo m, then
the length-m vector is reduced modulo Phi_m.  Zero residue means Phi_m
divides f_b.  Scans screen every order m with a cheap evaluation in F_p at an
element of order m (p = 1 mod m); a nonzero image there certifies a nonroot,
and every surviving candidate is confirmed by the exact reduction, so
reported roots never rest on the modular screen alone.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from dedekind._backend import kernels
from dedekind.arith import cyclotomic_poly, divisors, euler_phi, is_square, root_of_unity_modp
from dedekind.inversion import inversion_table

__all__ = [
    "CheckResult",
    "CycResidue",
    "DeflationRefused",
    "InvPoly",
    "RootReport",
    "SparsePoly",
    "build_invpoly",
    "cyclotomic_root_scan",
    "eval_at_root",
    "eval_numeric",
    "eval_sparse_at_root",
    "expected_value_at_minus_one",
    "explained_orders",
    "is_root",
    "root_multiplicity",
    "structural_check",
    "triple_deflate",
]

_INT64_SAFE = 1 << 62


# --------------------------------------------------------------------------
# residues modulo Phi_m
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CycResidue:
    """An element of Z[x]/Phi_m(x), i.e. of Z[zeta_m], in canonical form.

    ``coeffs`` has length phi(m); ``coeffs[j]`` multiplies ``zeta_m**j``.
    """

    m: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_vector(cls, m: int, vec) -> "CycResidue":
        """Reduce an arbitrary integer vector (index = exponent) modulo Phi_m."""
        vec = [int(v) for v in vec]
        if len(vec) > m:
            folded = [0] * m
            for i, v in enumerate(vec):
                folded[i % m] += v
            vec = folded
        phi = cyclotomic_poly(m).coeffs
        return cls(m, tuple(int(c) for c in kernels.cyc_reduce(vec, phi)))

    @classmethod
    def zeta_power(cls, m: int, e: int) -> "CycResidue":
        vec = [0] * m
        vec[e % m] = 1
        return cls.from_vector(m, vec)

    @classmethod
    def constant(cls, m: int, c: int) -> "CycResidue":
        d = euler_phi(m)
        return cls(m, (int(c),) + (0,) * (d - 1))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check(self, other: "CycResidue") -> None:
        if other.m != self.m:
            raise ValueError(f"order mismatch: {self.m} vs {other.m}")

    def __add__(self, other: "CycResidue") -> "CycResidue":
        self._check(other)
        return CycResidue(self.m, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycResidue":
        return CycResidue(self.m, tuple(-x for x in self.coeffs))

    def __sub__(self, other: "CycResidue") -> "CycResidue":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycResidue(self.m, tuple(other * x for x in self.coeffs))
        self._check(other)
        prod = [0] * (2 * len(self.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycResidue.from_vector(self.m, prod)

    __rmul__ = __mul__

    def constant_term(self) -> int | None:
        """The integer value if this residue is a rational integer, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_complex(self) -> complex:
        re, im = [], []
        for j, c in enumerate(self.coeffs):
            if c:
                ang = 2 * math.pi * j / self.m
                re.append(c * math.cos(ang))
                im.append(c * math.sin(ang))
        return complex(math.fsum(re), math.fsum(im))


def eval_sparse_at_root(exps, coeffs, m: int) -> CycResidue:
    """Exact value of ``sum c x^e`` at zeta_m."""
    if m < 1:
        raise ValueError(f"root order must be >= 1, got {m}")
    return CycResidue.from_vector(m, _fold(exps, coeffs, m))


def _fold(exps, coeffs, m: int) -> list[int]:
    if _fits_int64(coeffs):
        return kernels.fold(np.asarray(exps, dtype=np.int64), np.asarray(coeffs, dtype=np.int64), m)
    out = [0] * m
    for e, c in zip(exps, coeffs):
        out[int(e) % m] += int(c)
    return out


def _fits_int64(coeffs) -> bool:
    if isinstance(coeffs, np.ndarray) and coeffs.dtype == np.int64:
        return True
    return all(-_INT64_SAFE < int(c) < _INT64_SAFE for c in coeffs)


@lru_cache(maxsize=8192)
def _modp_table(m: int) -> tuple[int, np.ndarray]:
    p, w = root_of_unity_modp(m)
    tab = np.empty(m, dtype=np.int64)
    acc = 1
    for j in range(m):
        tab[j] = acc
        acc = acc * w % p
    return p, tab


def _vanishes_at_root(exps, coeffs, m: int) -> bool:
    """Exact test of ``sum c zeta_m^e == 0`` with a modular pre-screen."""
    p, tab = _modp_table(m)
    if isinstance(coeffs, np.ndarray) and coeffs.dtype == np.int64 and coeffs.min() >= 0 \
            and coeffs.max() < p:
        cm = coeffs
    else:
        cm = np.asarray([int(c) % p for c in coeffs], dtype=np.int64)
    if kernels.sparse_eval_modp(exps, cm, m, p, tab) != 0:
        return False
    return eval_sparse_at_root(exps, coeffs, m).is_zero()


# --------------------------------------------------------------------------
# sparse polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SparsePoly:
    """Integer polynomial stored as ``{exponent: coefficient}`` (nonzero only)."""

    terms: dict[int, int]

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else 0

    @cached_property
    def exps(self) -> np.ndarray:
        return np.fromiter(self.terms.keys(), dtype=np.int64, count=len(self.terms))

    @cached_property
    def coeffs(self) -> np.ndarray:
        return np.fromiter(self.terms.values(), dtype=np.int64, count=len(self.terms))

    def coeff(self, e: int) -> int:
        return self.terms.get(e, 0)

    def dense(self) -> list[int]:
        """Coefficient list, index = exponent."""
        out = [0] * (self.degree + 1)
        for e, c in self.terms.items():
            out[e] = c
        return out

    def __call__(self, x):
        return sum(c * x**e for e, c in self.terms.items())


@dataclass(frozen=True)
class InvPoly(SparsePoly):
    """f_b(x) = sum over units a of x**inv(a, b)."""

    b: int = 0
    phi: int = 0

    def to_record(self) -> dict:
        return {
            "b": self.b,
            "degree": self.degree,
            "phi": self.phi,
            "terms": {str(e): c for e, c in self.terms.items()},
        }

    @classmethod
    def from_record(cls, rec: dict) -> "InvPoly":
        terms = {int(e): int(c) for e, c in rec["terms"].items()}
        return cls(dict(sorted(terms.items())), b=int(rec["b"]), phi=euler_phi(int(rec["b"])))


def build_invpoly(b: int) -> InvPoly:
    if b < 2:
        raise ValueError(f"f_b needs b >= 2, got {b}")
    terms: dict[int, int] = {}
    for v in inversion_table(b).values():
        terms[v] = terms.get(v, 0) + 1
    return InvPoly(dict(sorted(terms.items())), b=b, phi=euler_phi(b))


def eval_at_root(p: SparsePoly, m: int) -> CycResidue:
    """f(zeta_m) as an exact residue modulo Phi_m."""
    return eval_sparse_at_root(p.exps, p.coeffs, m)


def _derivative_terms(p: SparsePoly, t: int) -> tuple[np.ndarray, list[int]]:
    """Terms of ``x**t * f^(t)(x)``: exponents unchanged, coefficients c * e(e-1)...(e-t+1)."""
    exps = p.exps
    coeffs = []
    for e, c in p.terms.items():
        ff = c
        for k in range(t):
            ff *= e - k
        coeffs.append(ff)
    return exps, coeffs


def is_root(p: SparsePoly, m: int) -> bool:
    return _vanishes_at_root(p.exps, p.coeffs, m)


def root_multiplicity(p: SparsePoly, m: int, cap: int = 4) -> int:
    """Largest ``t <= cap`` with Phi_m**t dividing ``p``.

    Uses exact evaluation of successive derivatives at zeta_m.
    """
    if m < 1:
        raise ValueError(f"root order must be >= 1, got {m}")
    t = 0
    while t < cap:
        exps, coeffs = (p.exps, p.coeffs) if t == 0 else _derivative_terms(p, t)
        if not _vanishes_at_root(exps, coeffs, m):
            break
        t += 1
    return t


def explained_orders(b: int) -> set[int]:
    """{2k, 6k : k | b}: the orders Conjecture-style rules speak about."""
    ks = divisors(b)
    return {2 * k for k in ks} | {6 * k for k in ks}


@dataclass
class RootReport:
    b: int
    m_max: int
    found: list[tuple[int, int]]
    explained: list[tuple[int, int]]
    unexplained: list[tuple[int, int]]
    mult_cap: int = 4
    cap_hit: list[int] = field(default_factory=list)
    residual_degree: int = 0

    def orders(self) -> list[int]:
        return [m for m, _ in self.found]

    def unexplained_orders(self) -> list[int]:
        return [m for m, _ in self.unexplained]

    def to_record(self) -> dict:
        return {
            "b": self.b,
            "m_max": self.m_max,
            "mult_cap": self.mult_cap,
            "found": [{"m": m, "multiplicity": t} for m, t in self.found],
            "explained": [m for m, _ in self.explained],
            "unexplained": [m for m, _ in self.unexplained],
            "cap_hit": list(self.cap_hit),
            "residual_degree": self.residual_degree,
        }


def cyclotomic_root_scan(p: InvPoly, m_max: int | None = None, mult_cap: int = 4) -> RootReport:
    """Every order ``2 <= m <= m_max`` with f_b(zeta_m) = 0, with multiplicities.

    ``m_max`` defaults to ``3 * b``; roots of larger order are not searched.
    """
    b = p.b
    if m_max is None:
        m_max = 3 * b
    if m_max < 2:
        raise ValueError(f"m_max must be >= 2, got {m_max}")
    exps, coeffs = p.exps, p.coeffs
    found, cap_hit = [], []
    for m in range(2, m_max + 1):
        if _vanishes_at_root(exps, coeffs, m):
            t = root_multiplicity(p, m, cap=mult_cap)
            if t == mult_cap:
                cap_hit.append(m)
            found.append((m, t))
    known = explained_orders(b)
    explained = [(m, t) for m, t in found if m in known]
    unexplained = [(m, t) for m, t in found if m not in known]
    residual = p.degree - sum(t * euler_phi(m) for m, t in found)
    return RootReport(b, m_max, found, explained, unexplained, mult_cap, cap_hit, residual)


# --------------------------------------------------------------------------
# structural properties
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def expected_value_at_minus_one(b: int) -> int:
    """f_b(-1): 0 for odd nonsquares and multiples of 4, phi(b) otherwise."""
    if b % 2:
        return euler_phi(b) if is_square(b) else 0
    return 0 if b % 4 == 0 else euler_phi(b)


def structural_check(p: InvPoly) -> list[CheckResult]:
    b = p.b
    phi = euler_phi(b)
    deg = (b - 1) * (b - 2) // 2
    out = []

    def add(name, ok, detail=""):
        out.append(CheckResult(name, bool(ok), detail))

    add("degree", p.degree == deg, f"degree={p.degree}, expected {deg}")
    add("constant_term", p.coeff(0) == 1, f"coeff[0]={p.coeff(0)}")
    add("leading_coefficient", p.coeff(p.degree) == 1, f"coeff[deg]={p.coeff(p.degree)}")
    mirror = all(p.coeff(p.degree - e) == c for e, c in p.terms.items())
    add("palindrome", mirror)
    total = sum(p.terms.values())
    add("coefficient_sum", total == phi, f"sum={total}, phi={phi}")
    if b % 3:
        bad = [e for e in p.terms if e % 3]
        add("exponents_divisible_by_3", not bad, f"offending={bad[:3]}")
    else:
        add("exponents_divisible_by_3", True, "not applicable: 3 | b")
    at_one = eval_at_root(p, 1).constant_term()
    add("value_at_1", at_one == phi, f"f(1)={at_one}")
    at_m1 = eval_at_root(p, 2).constant_term()
    want = expected_value_at_minus_one(b)
    add("value_at_minus_1", at_m1 == want, f"f(-1)={at_m1}, expected {want}")
    if b % 4 == 2:
        odd = [e for e in p.terms if e % 2]
        add("even_exponents", not odd, f"offending={odd[:3]}")
    return out


class DeflationRefused(ValueError):
    """f is not a polynomial in x**3; ``witness`` is an exponent not divisible by 3."""

    def __init__(self, witness: int):
        super().__init__(f"exponent {witness} is not divisible by 3")
        self.witness = witness


def triple_deflate(p: SparsePoly) -> SparsePoly:
    """g with ``p(x) = g(x**3)``, or :class:`DeflationRefused`."""
    for e in p.terms:
        if e % 3:
            raise DeflationRefused(e)
    return SparsePoly({e // 3: c for e, c in p.terms.items()})


def eval_numeric(p: SparsePoly, m: int) -> complex:
    """Floating value at exp(2 pi i/m); exponents reduced mod m before the trig."""
    re, im = [], []
    for e, c in p.terms.items():
        z = cmath.exp(2j * math.pi * (e % m) / m)
        re.append(c * z.real)
        im.append(c * z.imag)
    return complex(math.fsum(re), math.fsum(im))
