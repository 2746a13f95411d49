"""Root-set predictions, Table-1 reproduction and exhaustive sweeps.

Every sweep returns a :class:`Verdict`.  A sweep over a proposition that
finds a counterexample is a bug somewhere; a sweep over a conjecture that
finds one is a result, and is reported with full witness data either way.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from dedekind.arith import divisors, euler_phi, is_square, jacobi_symbol
from dedekind.inversion import (
    dedekind_sum,
    equal_value_classes,
    final_prop_check,
    integrality_modulus,
    inversion_table,
    reciprocity_residual,
    second_extremes,
    sum_from_inv,
)
from dedekind.invpoly import (
    build_invpoly,
    cyclotomic_root_scan,
    eval_at_root,
    expected_value_at_minus_one,
    is_root,
    root_multiplicity,
)

__all__ = [
    "CASE_TAGS",
    "Conj21Entry",
    "Conj21Prediction",
    "STATEMENTS",
    "Verdict",
    "case_tag",
    "conj21_compare",
    "conj21_predict",
    "sweep",
    "table1_reproduce",
]

CASE_TAGS = ("i", "ii", "iii", "iv")


@dataclass
class Verdict:
    statement: str
    b_range: tuple[int, int]
    counterexamples: list = field(default_factory=list)
    status: str = "verified-at-scale"
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status != "not-applicable":
            self.status = "refuted" if self.counterexamples else "verified-at-scale"

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_record(self) -> dict:
        return {
            "statement": self.statement,
            "b_range": list(self.b_range),
            "status": self.status,
            "counterexamples": [_jsonable(c) for c in self.counterexamples],
            "info": _jsonable(self.info),
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


# --------------------------------------------------------------------------
# Conjecture 2.1 predictor
# --------------------------------------------------------------------------

def case_tag(c: int) -> str:
    """Which of the four rules governs the cofactor ``c = b/k``."""
    if c % 4 == 2:
        return "i"
    if c % 4 == 0:
        return "ii"
    if c % 3 == 0:
        # odd multiple of 3: c = 3^m n with (n, 6) = 1
        return "iii"
    assert gcd(c, 6) == 1
    return "iv"


def _strip_threes(c: int) -> int:
    while c % 3 == 0:
        c //= 3
    return c


@dataclass(frozen=True)
class Conj21Entry:
    k: int
    c: int
    tag: str
    predicted_2k: bool
    predicted_6k: bool


@dataclass
class Conj21Prediction:
    b: int
    entries: list[Conj21Entry]

    def predicted_orders(self) -> set[int]:
        out = set()
        for e in self.entries:
            if e.predicted_2k:
                out.add(2 * e.k)
            if e.predicted_6k:
                out.add(6 * e.k)
        return out

    def candidate_orders(self) -> dict[int, list[int]]:
        """``{m: [k, ...]}`` for every m of the form 2k or 6k."""
        out: dict[int, list[int]] = {}
        for e in self.entries:
            out.setdefault(2 * e.k, []).append(e.k)
            out.setdefault(6 * e.k, []).append(e.k)
        return {m: sorted(set(ks)) for m, ks in sorted(out.items())}


def conj21_predict(b: int) -> Conj21Prediction:
    if b < 2:
        raise ValueError(f"b must be >= 2, got {b}")
    entries = []
    for k in divisors(b):
        c = b // k
        tag = case_tag(c)
        if tag == "i":
            p2 = p6 = k % 8 == 4
        elif tag == "ii":
            p2 = p6 = k % 4 != 2 and k % 8 != 0
        elif tag == "iii":
            n = _strip_threes(c)
            p2, p6 = k % (3 * n) != 0 and not is_square(c), False
        else:
            p2 = p6 = k % c != 0 and not is_square(c)
        entries.append(Conj21Entry(k, c, tag, p2, p6))
    return Conj21Prediction(b, entries)


def conj21_compare(b: int, m_max: int | None = None):
    """Check both directions of the prediction against the exact root scan.

    Orders are aggregated: m counts as predicted when any decomposition
    b = ck predicts it.  ``m_max`` defaults to ``6b`` so that every 6k is
    covered; orders beyond an explicit smaller ``m_max`` are listed as
    untested.  Returns ``(Verdict, RootReport)``.
    """
    if m_max is None:
        m_max = 6 * b
    pred = conj21_predict(b)
    report = cyclotomic_root_scan(build_invpoly(b), m_max=m_max)
    observed = set(report.orders())
    predicted = pred.predicted_orders()
    ces, untested = [], []
    for m, ks in pred.candidate_orders().items():
        if m > m_max:
            untested.append(m)
            continue
        want, got = m in predicted, m in observed
        if want != got:
            ces.append({"b": b, "k": ks, "m": m, "predicted": want, "observed": got})
    v = Verdict("conj2.1", (b, b), ces, info={"untested_orders": untested})
    return v, report


# --------------------------------------------------------------------------
# Table 1
# --------------------------------------------------------------------------

def _table1_row(args):
    b, factor, orders = args
    p = build_invpoly(b)
    report = cyclotomic_root_scan(p, m_max=int(Fraction(factor) * b), mult_cap=1)
    ms = report.unexplained_orders()
    if orders == "even":
        ms = [m for m in ms if m % 2 == 0]
    return b, ms


def table1_reproduce(b_max: int, m_max_factor=3, orders: str = "even", jobs: int = 1,
                     b_min: int = 2) -> list[tuple[int, list[int]]]:
    """Rows ``(b, [m, ...])`` of roots zeta_m with m outside {2k, 6k : k | b}.

    ``orders="even"`` restricts to even m, matching the published table;
    ``orders="all"`` also reports odd-order roots.  Only rows with a
    nonempty list are returned, in ascending b.
    """
    if orders not in ("even", "all"):
        raise ValueError(f"orders must be 'even' or 'all', got {orders!r}")
    tasks = [(b, m_max_factor, orders) for b in range(max(2, b_min), b_max + 1)]
    rows = _map(_table1_row, tasks, jobs)
    return [(b, ms) for b, ms in rows if ms]


def _map(fn, items, jobs: int | None):
    jobs = _resolve_jobs(jobs)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (8 * jobs))))


def _resolve_jobs(jobs: int | None) -> int:
    if jobs is None or jobs <= 0:
        return os.cpu_count() or 1
    return jobs


# --------------------------------------------------------------------------
# per-b checks; each returns (counterexamples, info)
# --------------------------------------------------------------------------

def _check_prop22(b):
    p = build_invpoly(b)
    got = eval_at_root(p, 2).constant_term()
    want = expected_value_at_minus_one(b)
    ces = []
    if got != want:
        ces.append({"b": b, "f(-1)": got, "expected": want})
    if (b % 2 and is_square(b)) or b % 4 == 2:
        odd = [e for e in p.terms if e % 2]
        if odd:
            ces.append({"b": b, "odd_exponent": odd[0]})
    return ces, {}


def _check_prop23(b):
    if b % 4 != 1 or is_square(b):
        return [], {}
    p = build_invpoly(b)
    ces = []
    t2 = root_multiplicity(p, 2)
    if t2 < 2:
        ces.append({"b": b, "m": 2, "multiplicity": t2})
    if b % 3:
        t6 = root_multiplicity(p, 6)
        if t6 < 2:
            ces.append({"b": b, "m": 6, "multiplicity": t6})
    return ces, {"instances": 1}


def _check_prop24(b):
    if b % 2 == 0:
        return [], {}
    p = build_invpoly(b)
    ces, n = [], 0
    for k in divisors(b):
        c = b // k
        if gcd(c, k) != 1 or is_square(c):
            continue
        n += 1
        if not is_root(p, 2 * k):
            ces.append({"b": b, "c": c, "k": k, "m": 2 * k})
        if b % 3 and not is_root(p, 6 * k):
            ces.append({"b": b, "c": c, "k": k, "m": 6 * k})
    return ces, {"instances": n}


def _check_prop25(b, form="unit-i"):
    from dedekind.kloosterman import verify_prop25

    p = build_invpoly(b)
    ces, n = [], 0
    for k in divisors(b):
        r = verify_prop25(b, k, form=form, poly=p)
        if not r.applicable:
            continue
        n += 1
        if not r.passed:
            ces.append(r.to_record() | {"c_mod_8": (b // k) % 8})
    return ces, {"instances": n}


def _check_prop25_phase(b):
    return _check_prop25(b, form="phase")


def _check_prop26(b):
    if b < 5 or euler_phi(b) <= 2:
        return [], {}
    lo_bound = Fraction(b * b - 1, 8)
    hi_bound = Fraction(3 * b * b - 12 * b + 9, 8)
    lo, hi = second_extremes(b)
    ces, eq = [], []
    if lo < lo_bound or hi > hi_bound:
        ces.append({"b": b, "min": lo, "max": hi, "bounds": [lo_bound, hi_bound]})
    if b % 2:
        t = inversion_table(b)
        checks = {
            "inv(2,b)": (t[2], lo_bound),
            "inv(-2,b)": (t[b - 2], hi_bound),
            "min": (lo, lo_bound),
            "max": (hi, hi_bound),
            "s(2,b)": (sum_from_inv(t[2], b), Fraction((b - 1) * (b - 5), 24 * b)),
        }
        for name, (got, want) in checks.items():
            if got != want:
                ces.append({"b": b, "quantity": name, "got": got, "expected": want})
        eq.append(b)
    return ces, {"equality_cases": eq}


def _conj27_for(b, mode):
    t = inversion_table(b)
    vals = sorted(set(t.values())) if mode == "distinct" else sorted(t.values())
    ces, equality = [], []
    for n in range(1, 7):
        if len(vals) < n:
            continue
        bound = Fraction((n - 1) * (b + 1) * (b + 1 - n), 4 * n)
        i_n = vals[n - 1]
        if i_n < bound:
            ces.append({"b": b, "n": n, "mode": mode, "I_n": i_n, "bound": bound,
                        "kind": "inequality"})
        if (b + 1) % n == 0:
            inv_n = t[n % b or b]
            if inv_n != bound:
                ces.append({"b": b, "n": n, "mode": mode, "inv(n,b)": inv_n, "bound": bound,
                            "kind": "equality"})
            equality.append({"b": b, "n": n, "inv(n,b)": inv_n, "I_n": i_n,
                             "attained_as_I_n": i_n == bound})
    return ces, equality


def _check_conj27(b, modes=("distinct", "multiset")):
    ces, info = [], {}
    for mode in modes:
        c, eq = _conj27_for(b, mode)
        ces += c
        info[mode] = {"counterexamples": len(c), "equality_cases": eq}
    return ces, info


def _check_conj27_distinct(b):
    return _check_conj27(b, ("distinct",))


def _check_conj27_multiset(b):
    return _check_conj27(b, ("multiset",))


def _check_final_prop(b):
    ces, hits, near = [], 0, 0
    for members in equal_value_classes(b).values():
        for i, a1 in enumerate(members):
            for a2 in members[i + 1:]:
                if b % a1 == b % a2:
                    near += 1
                ok = final_prop_check(b, a1, a2)
                if ok is None:
                    continue
                hits += 1
                if not ok:
                    ces.append({"b": b, "a1": a1, "a2": a2})
    return ces, {"hypothesis_hits": hits, "same_remainder_pairs": near}


def _check_reciprocity(b):
    ces = []
    for a in range(1, b):
        if gcd(a, b) == 1:
            r = reciprocity_residual(a, b)
            if r != 0:
                ces.append({"a": a, "b": b, "residual": r})
    return ces, {}


def _check_zolotarev(b):
    if b % 2 == 0:
        return [], {}
    ces = []
    for a, v in inversion_table(b).items():
        if (-1) ** v != jacobi_symbol(a, b):
            ces.append({"a": a, "b": b, "inv": v, "jacobi": jacobi_symbol(a, b)})
    return ces, {}


def _check_integrality(b, corrected=False):
    us = [a for a in range(1, b + 1) if gcd(a, b) == 1]
    sums = {a: dedekind_sum(a, b) for a in us}
    mod = integrality_modulus(b, corrected)
    ces = []
    for a1 in us:
        for a2 in us:
            lhs = (sums[a1] - sums[a2]).denominator == 1
            rhs = ((a1 - a2) * (a1 * a2 - 1)) % mod == 0
            if lhs != rhs:
                ces.append({"a1": a1, "a2": a2, "b": b, "integral": lhs, "divides": rhs})
    return ces, {}


def _check_integrality_corrected(b):
    return _check_integrality(b, corrected=True)


def _check_conj21(b):
    v, report = conj21_compare(b)
    return v.counterexamples, {}


_CHECKS = {
    "prop2.2": _check_prop22,
    "prop2.3": _check_prop23,
    "prop2.4": _check_prop24,
    "prop2.5": _check_prop25,
    "prop2.5-phase": _check_prop25_phase,
    "prop2.6": _check_prop26,
    "conj2.1": _check_conj21,
    "conj2.7": _check_conj27,
    "conj2.7-distinct": _check_conj27_distinct,
    "conj2.7-multiset": _check_conj27_multiset,
    "final-prop": _check_final_prop,
    "reciprocity": _check_reciprocity,
    "zolotarev": _check_zolotarev,
    "integrality": _check_integrality,
    "integrality-corrected": _check_integrality_corrected,
}

STATEMENTS = tuple(_CHECKS)


def _run_one(args):
    statement, b = args
    return b, _CHECKS[statement](b)


def _merge_info(acc: dict, b: int, info: dict) -> None:
    for key, val in info.items():
        if isinstance(val, (int, float)) and not isinstance(val, bool):
            acc[key] = acc.get(key, 0) + val
        elif isinstance(val, list):
            acc.setdefault(key, []).extend(val)
        elif isinstance(val, dict):
            _merge_info(acc.setdefault(key, {}), b, val)


def sweep(statement: str, b_max: int, b_min: int = 2, jobs: int = 1) -> Verdict:
    """Exhaustively test ``statement`` for ``b_min <= b <= b_max``.

    ``statement`` is one of :data:`STATEMENTS`; results are merged in
    ascending b regardless of ``jobs``.
    """
    if statement not in _CHECKS:
        raise ValueError(f"unknown statement {statement!r}; choose from {', '.join(STATEMENTS)}")
    if b_max < 2:
        raise ValueError(f"b_max must be >= 2, got {b_max}")
    lo = max(2, b_min)
    results = _map(_run_one, [(statement, b) for b in range(lo, b_max + 1)], jobs)
    ces, info = [], {}
    for b, (c, i) in sorted(results, key=lambda r: r[0]):
        ces.extend(c)
        _merge_info(info, b, i)
    return Verdict(statement, (lo, b_max), ces, info=info)
