"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --b 211 499 --repeat 3

Both backends are imported directly, so one run compares them side by side
and checks that they agree on every input.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dedekind import _kernels_py
from dedekind.arith import cyclotomic_poly
from dedekind.invpoly import _modp_table, build_invpoly

try:
    from dedekind import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _cases(b: int):
    p = build_invpoly(b)
    exps = np.asarray(p.exps, dtype=np.int64)
    coeffs = np.asarray(p.coeffs, dtype=np.int64)
    ms = range(2, 3 * b + 1)
    tables = {m: _modp_table(m) for m in ms}
    m_red = 2 * b if b % 2 else 3 * b
    phi = cyclotomic_poly(m_red).coeffs
    return {
        "inversions_all_units": lambda k: k.inversions_all_units(b),
        "scan_modp(m<=3b)": lambda k: [k.sparse_eval_modp(exps, coeffs, m, *tables[m]) for m in ms],
        f"fold+cyc_reduce(m={m_red})": lambda k: k.cyc_reduce(k.fold(exps, coeffs, m_red), phi),
    }


def _same(x, y) -> bool:
    if isinstance(x, tuple):
        return all(np.array_equal(np.asarray(a), np.asarray(c)) for a, c in zip(x, y))
    return list(map(int, x)) == list(map(int, y)) if isinstance(x, list) else x == y


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--b", type=int, nargs="+", default=[101, 211, 424])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = [("python", _kernels_py)]
    if _compiled is not None:
        backends.append(("cython", _compiled))
    else:
        print("compiled extension unavailable; timing the fallback only")

    print(f"{'b':>5}  {'kernel':<28}" + "".join(f"{n:>12}" for n, _ in backends) + "   speedup")
    for b in args.b:
        for name, fn in _cases(b).items():
            outs = [fn(k) for _, k in backends]
            if len(outs) == 2 and not _same(outs[0], outs[1]):
                raise SystemExit(f"backends disagree on {name} for b={b}")
            times = [_best(lambda k=k: fn(k), args.repeat) for _, k in backends]
            speed = f"{times[0] / times[1]:9.1f}x" if len(times) == 2 else ""
            print(f"{b:>5}  {name:<28}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + speed)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
