"""Pure-Python implementations of the hot kernels.

Signatures mirror ``_kernels.pyx`` exactly; ``dedekind._backend`` picks one.
"""

from __future__ import annotations

from math import gcd

import numpy as np


def inv_count_merge(seq) -> int:
    """Number of pairs ``i < j`` with ``seq[i] > seq[j]`` (bottom-up merge sort)."""
    src = list(seq)
    n = len(src)
    dst = [0] * n
    count = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if src[i] <= src[j]:
                    dst[k] = src[i]
                    i += 1
                else:
                    dst[k] = src[j]
                    j += 1
                    count += mid - i
                k += 1
            dst[k:k + mid - i] = src[i:mid]
            k += mid - i
            dst[k:k + hi - j] = src[j:hi]
        src, dst = dst, src
        width *= 2
    return count


def inversions_all_units(b: int):
    """Return ``(units, invs)`` as int64 arrays for every unit ``1 <= a <= b``."""
    us, vals = [], []
    for a in range(1, b + 1):
        if gcd(a, b) != 1:
            continue
        # x = b maps to 0 and sits last, contributing no inversions
        us.append(a)
        vals.append(inv_count_merge([(a * x) % b for x in range(1, b)]))
    return np.asarray(us, dtype=np.int64), np.asarray(vals, dtype=np.int64)


def sparse_eval_modp(exps, coeffs, m: int, p: int, table) -> int:
    """``sum coeffs[i] * omega**(exps[i] mod m)  (mod p)``.

    ``table[j] = omega**j mod p``; coefficients must already lie in ``[0, p)``.
    """
    e = np.asarray(exps, dtype=np.int64) % m
    c = np.asarray(coeffs, dtype=np.int64)
    return int(((c * np.asarray(table)[e]) % p).sum() % p)


def fold(exps, coeffs, m: int) -> list:
    """Collapse a sparse polynomial modulo ``x**m - 1`` into a length-m list."""
    out = [0] * m
    for e, c in zip(exps, coeffs):
        out[int(e) % m] += int(c)
    return out


def cyc_reduce(vec, phi) -> list:
    """Remainder of ``vec`` (low-to-high) modulo the monic polynomial ``phi``."""
    r = [int(v) for v in vec]
    d = len(phi) - 1
    terms = [(j, int(c)) for j, c in enumerate(phi[:-1]) if c]
    for i in range(len(r) - 1, d - 1, -1):
        q = r[i]
        if q:
            base = i - d
            for j, c in terms:
                r[base + j] -= q * c
            r[i] = 0
    out = r[:d]
    return out + [0] * (d - len(out))
