"""Dedekind sums and inversion numbers of the permutations ``x -> a*x mod b``.

Three independent routes to ``inv(a, b)`` live here:

* ``inv_count(..., method="oracle")`` - the literal O(b^2) pair count,
* ``inv_count(..., method="fast")`` - merge-sort counting (compiled kernel
  when available),
* ``inv_closed_form`` - the Euclidean remainder-sequence formula evaluated in
  exact rationals.

Negative ``a`` is always reduced modulo ``b`` first.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd

from dedekind._backend import kernels
from dedekind.arith import euler_phi

__all__ = [
    "InvariantError",
    "RemainderSequence",
    "dedekind_sum",
    "equal_value_classes",
    "final_prop_check",
    "final_prop_sweep",
    "integrality_criterion",
    "integrality_modulus",
    "inv_closed_form",
    "inv_count",
    "inv_from_sum",
    "inversion_table",
    "nth_smallest",
    "reciprocity_residual",
    "remainder_sequence",
    "sawtooth",
    "second_extremes",
    "sum_from_inv",
]


class InvariantError(ArithmeticError):
    """An exact identity that must hold came out false (implementation bug)."""


def _check_unit(a: int, b: int) -> None:
    if b < 1:
        raise ValueError(f"b must be positive, got {b}")
    if gcd(a, b) != 1:
        raise ValueError(f"gcd({a}, {b}) != 1")


def sawtooth(x) -> Fraction:
    """((x)): zero at integers, otherwise ``x - floor(x) - 1/2``."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - floor(x) - Fraction(1, 2)


def dedekind_sum(a: int, b: int) -> Fraction:
    """s(a, b) straight from its defining sum (O(b) exact terms)."""
    _check_unit(a, b)
    a %= b
    # i/b * ((a i / b)) summed; scale by b^2 to stay in integers until the end
    total = 0
    for i in range(1, b):
        r = (a * i) % b
        if r:
            total += i * (2 * r - b)
    return Fraction(total, 2 * b * b)


def inv_count(a: int, b: int, method: str = "fast") -> int:
    """Inversions of ``x -> a*x mod b`` on ``{1, ..., b}``.

    ``method`` is ``"fast"`` (merge count) or ``"oracle"`` (double loop).
    """
    _check_unit(a, b)
    a %= b
    # position b maps to 0 and is last: it never forms an inversion
    perm = [(a * x) % b for x in range(1, b)]
    if method == "fast":
        return kernels.inv_count_merge(perm)
    if method == "oracle":
        n = len(perm)
        return sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
    raise ValueError(f"unknown method {method!r}; expected 'fast' or 'oracle'")


@lru_cache(maxsize=512)
def _table(b: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    us, vals = kernels.inversions_all_units(b)
    return tuple(int(u) for u in us), tuple(int(v) for v in vals)


def inversion_table(b: int) -> dict[int, int]:
    """``{a: inv(a, b)}`` for every unit ``1 <= a <= b`` (fast kernel)."""
    if b < 1:
        raise ValueError(f"b must be positive, got {b}")
    us, vals = _table(b)
    return dict(zip(us, vals))


@dataclass(frozen=True)
class RemainderSequence:
    """``b, a, r_1, ..., 1`` where each term is the previous-but-one mod the previous."""

    terms: tuple[int, ...]

    @property
    def b(self) -> int:
        return self.terms[0]

    @property
    def a(self) -> int:
        return self.terms[1]

    def r(self, j: int) -> int:
        """Term ``r_j`` for ``j >= -1``."""
        return self.terms[j + 1]

    @property
    def n(self) -> int:
        """Index with ``r_{n+1} == 1``."""
        return len(self.terms) - 3


def remainder_sequence(a: int, b: int) -> RemainderSequence:
    _check_unit(a, b)
    if not 1 <= a <= b - 1:
        raise ValueError(f"need 1 <= a <= b-1, got a={a}, b={b}")
    terms = [b, a]
    while terms[-1] != 1:
        terms.append(terms[-2] % terms[-1])
    return RemainderSequence(tuple(terms))


def inv_closed_form(a: int, b: int) -> int:
    """inv(a, b) from the remainder sequence of (b, a), in exact rationals.

    Raises
    ------
    InvariantError
        If the rational result is not an integer.
    """
    _check_unit(a, b)
    if not 1 <= a <= b - 1:
        raise ValueError(f"need 1 <= a <= b-1, got a={a}, b={b}")
    if a == 1:
        return 0
    seq = remainder_sequence(a, b)
    alt = Fraction(0)
    for j in range(1, seq.n + 1):
        rj, rp = seq.r(j), seq.r(j - 1)
        alt += Fraction((-1) ** j * (rj - 1) * (rp - 1) * (rj + rp - 1), rj * rp)
    value = (
        Fraction(a - 1, 4 * a) * b * b
        + (Fraction((a - 1) * (a - 2), 4 * a) + alt / 4) * b
        - Fraction((a - 1) ** 2, 4 * a)
    )
    if value.denominator != 1:
        raise InvariantError(f"closed form gave non-integer {value} for a={a}, b={b}")
    return int(value)


def inv_from_sum(s, b: int) -> int:
    """Map a Dedekind sum value to the inversion number: ``-3bs + (b-1)(b-2)/4``."""
    v = -3 * b * Fraction(s) + Fraction((b - 1) * (b - 2), 4)
    if v.denominator != 1:
        raise ValueError(f"{s} is not a Dedekind sum value for b={b}")
    return int(v)


def sum_from_inv(v: int, b: int) -> Fraction:
    return (Fraction((b - 1) * (b - 2), 4) - v) / (3 * b)


def reciprocity_residual(a: int, b: int) -> int:
    """``a inv(a,b) + b inv(b,a) - (a-1)(b-1)(a+b-1)/4``; always zero.

    ``inv(x, 1)`` is taken as 0 (the permutation of a single point).
    """
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    _check_unit(a, b)

    def _inv(x: int, y: int) -> int:
        return 0 if y == 1 else inversion_table(y)[x % y or y]

    rhs = Fraction((a - 1) * (b - 1) * (a + b - 1), 4)
    res = a * _inv(a, b) + b * _inv(b, a) - rhs
    if res.denominator != 1:
        return res  # surfaced as-is; a non-integer residual is itself a failure
    return int(res)


def second_extremes(b: int) -> tuple[int, int]:
    """(min, max) of inv(a, b) over units ``2 <= a <= b-2`` by exhaustive scan."""
    if b < 5:
        raise ValueError(f"second_extremes needs b >= 5, got {b}")
    vals = [v for a, v in inversion_table(b).items() if 2 <= a <= b - 2]
    if not vals:
        raise ValueError(f"no units in [2, {b - 2}] for b={b}")
    return min(vals), max(vals)


def nth_smallest(b: int, n: int, mode: str = "distinct") -> int:
    """The n-th smallest inversion value for fixed ``b`` (``1 <= n <= 6``).

    ``mode="distinct"`` ranks distinct values; ``"multiset"`` ranks the
    values of all units with repetition.
    """
    if not 1 <= n <= 6:
        raise ValueError(f"n must be in 1..6, got {n}")
    vals = list(inversion_table(b).values())
    if mode == "distinct":
        vals = sorted(set(vals))
    elif mode == "multiset":
        vals.sort()
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if len(vals) < n:
        raise ValueError(f"b={b} has only {len(vals)} {mode} values, need {n}")
    return vals[n - 1]


def equal_value_classes(b: int) -> dict[int, list[int]]:
    """Group the units ``1 <= a <= b-1`` by their inversion number."""
    if b < 2:
        raise ValueError(f"b must be >= 2, got {b}")
    out: dict[int, list[int]] = defaultdict(list)
    for a, v in inversion_table(b).items():
        out[v].append(a)
    classes = {v: sorted(out[v]) for v in sorted(out)}
    if sum(map(len, classes.values())) != euler_phi(b):
        raise InvariantError(f"class sizes do not sum to phi({b})")
    return classes


def integrality_modulus(b: int, corrected: bool = False) -> int:
    """Modulus M in the test ``M | (a1-a2)(a1*a2-1)``.

    The plain form uses ``M = b``, which only decides integrality when
    neither 4 nor 9 divides b (b = 4, a = 1, 3 already fails).  The
    corrected form ``M = b * gcd(b, 12)`` is exact in every case tried.
    """
    return b * gcd(b, 12) if corrected else b


def integrality_criterion(a1: int, a2: int, b: int, corrected: bool = False) -> tuple[bool, bool]:
    """(s(a1,b) - s(a2,b) is an integer, M divides (a1-a2)(a1*a2-1)).

    ``M`` is ``b`` unless ``corrected`` is set; see :func:`integrality_modulus`.
    """
    diff = dedekind_sum(a1, b) - dedekind_sum(a2, b)
    return diff.denominator == 1, ((a1 - a2) * (a1 * a2 - 1)) % integrality_modulus(b, corrected) == 0


def _final_prop_hypotheses(b: int, a1: int, a2: int) -> bool:
    if not (1 <= a1 <= b - 1 and 1 <= a2 <= b - 1):
        return False
    if gcd(a1, b) != 1 or gcd(a2, b) != 1:
        return False
    r = b % a1
    if r == 0 or r != b % a2:
        return False
    if a1 % r != a2 % r:
        return False
    table = inversion_table(b)
    return table[a1] == table[a2]


def final_prop_check(b: int, a1: int, a2: int) -> bool | None:
    """Whether ``a1 == a2`` given the equal-remainder hypotheses.

    Returns ``None`` when the hypotheses do not hold (the triple is skipped).
    """
    if not _final_prop_hypotheses(b, a1, a2):
        return None
    return a1 == a2


def final_prop_sweep(b_max: int, b_min: int = 2) -> tuple[int, list[tuple[int, int, int]]]:
    """Search all distinct equal-inversion pairs for ``b <= b_max``.

    Returns ``(pairs_satisfying_hypotheses, violations)``; every violation is
    a triple ``(b, a1, a2)`` with ``a1 != a2``.
    """
    hits, violations = 0, []
    for b in range(max(b_min, 3), b_max + 1):
        for members in equal_value_classes(b).values():
            for i, a1 in enumerate(members):
                for a2 in members[i + 1:]:
                    ok = final_prop_check(b, a1, a2)
                    if ok is None:
                        continue
                    hits += 1
                    if not ok:
                        violations.append((b, a1, a2))
    return hits, violations
