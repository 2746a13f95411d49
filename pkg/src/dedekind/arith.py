"""Exact elementary number theory used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from threading import Lock

__all__ = [
    "CycPoly",
    "cyclotomic_poly",
    "divisors",
    "euler_phi",
    "factorize",
    "is_prime",
    "is_square",
    "is_squarefree",
    "jacobi_symbol",
    "mod_inverse",
    "mobius",
    "root_of_unity_modp",
    "units",
]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` by trial division."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out: dict[int, int] = {}
    while n % 2 == 0:
        out[2] = out.get(2, 0) + 1
        n //= 2
    p = 3
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError(f"euler_phi requires n >= 1, got {n}")
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def divisors(n: int) -> list[int]:
    """All positive divisors of ``n`` in increasing order."""
    if n < 1:
        raise ValueError(f"divisors requires n >= 1, got {n}")
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def mod_inverse(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` in ``[1, m-1]`` (extended Euclid).

    Raises
    ------
    ValueError
        If ``gcd(a, m) != 1`` or ``m < 2``.
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    r0, r1 = m, a % m
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if r0 != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return t0 % m


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive ``n``."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# --------------------------------------------------------------------------
# cyclotomic polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CycPoly:
    """The ``m``-th cyclotomic polynomial; ``coeffs[i]`` multiplies ``x**i``."""

    m: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def nonzero(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, c) for i, c in enumerate(self.coeffs) if c)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials; ``den`` monic (low-to-high)."""
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j, dj in enumerate(den):
                if dj:
                    num[i - dd + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return q


_cyc_lock = Lock()
_cyc_cache: dict[int, CycPoly] = {}


def cyclotomic_poly(m: int) -> CycPoly:
    """Phi_m by exact division of ``x^m - 1`` by Phi_d over proper divisors d.

    Results are memoised; the cache is guarded for single-writer insertion.
    """
    if m < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {m}")
    hit = _cyc_cache.get(m)
    if hit is not None:
        return hit
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        num = _exact_div(num, list(cyclotomic_poly(d).coeffs))
    poly = CycPoly(m, tuple(num))
    with _cyc_lock:
        _cyc_cache.setdefault(m, poly)
    return _cyc_cache[m]


# --------------------------------------------------------------------------
# primes with a root of unity of prescribed order (used as a modular filter)
# --------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def root_of_unity_modp(m: int, floor: int = 1 << 30) -> tuple[int, int]:
    """Smallest prime ``p > floor`` with ``p = 1 (mod m)`` and an element of order m.

    Returns ``(p, omega)``.  ``p`` stays below 2**31 for m up to ~10**5,
    which keeps products of residues inside signed 64-bit range.
    """
    k = floor // m + 1
    while not is_prime(k * m + 1):
        k += 1
    p = k * m + 1
    primes = list(factorize(m)) if m > 1 else []
    g = 2
    while True:
        w = pow(g, (p - 1) // m, p)
        if all(pow(w, m // q, p) != 1 for q in primes):
            return p, w
        g += 1


def units(n: int) -> list[int]:
    """Residues ``1 <= a <= n`` coprime to ``n`` (``[1]`` for n = 1)."""
    return [a for a in range(1, n + 1) if gcd(a, n) == 1]
