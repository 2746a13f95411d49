"""Numerical roots of f_b, the annulus bound, and plot data for root pictures."""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from dedekind.arith import euler_phi
from dedekind.conjectures import Verdict
from dedekind.invpoly import SparsePoly

__all__ = [
    "BEST_EFFORT_B",
    "ComplexRootSet",
    "aberth",
    "annulus_bounds",
    "annulus_check",
    "emit_plot_data",
    "exact_residual",
    "find_roots",
]

GOLDEN_ANGLE = math.pi * (3 - math.sqrt(5))
BEST_EFFORT_B = 60
_EPS = np.finfo(float).eps


@dataclass
class ComplexRootSet:
    b: int
    roots: np.ndarray
    residuals: np.ndarray
    converged: np.ndarray
    iterations: int = 0
    best_effort: bool = False

    @property
    def degree(self) -> int:
        return len(self.roots)

    def clusters(self, tol: float = 1e-6) -> list[tuple[complex, int]]:
        """Group approximations closer than ``tol``; returns (mean, size) pairs."""
        left = list(range(len(self.roots)))
        out = []
        while left:
            i = left.pop(0)
            group = [i] + [j for j in left if abs(self.roots[j] - self.roots[i]) < tol]
            left = [j for j in left if j not in group]
            out.append((complex(np.mean(self.roots[group])), len(group)))
        return out


def _horner(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """p(z), p'(z) and the rounding-scale bound sum |c| |z|^k (high-to-low coeffs)."""
    p = np.full(z.shape, coeffs[0], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    az = np.abs(z)
    scale = np.full(z.shape, abs(coeffs[0]), dtype=float)
    for c in coeffs[1:]:
        dp = dp * z + p
        p = p * z + c
        scale = scale * az + abs(c)
    return p, dp, scale


def _newton_ratio(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(p/p', residual-at-rounding-level flag) without overflow for |z| > 1.

    Outside the unit disc we evaluate the reversed polynomial q(w) = w^n p(1/w)
    at w = 1/z and use p'/p = n/z - q'(w) / (q(w) z^2).
    """
    n = len(coeffs) - 1
    ratio = np.empty(z.shape, dtype=complex)
    small = np.empty(z.shape, dtype=bool)
    inside = np.abs(z) <= 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if inside.any():
            p, dp, scale = _horner(coeffs, z[inside])
            ratio[inside] = p / dp
            small[inside] = np.abs(p) <= 4 * n * _EPS * scale
        out = ~inside
        if out.any():
            zo = z[out]
            w = 1.0 / zo
            q, dq, scale = _horner(coeffs[::-1], w)
            ratio[out] = 1.0 / (n / zo - dq / (q * zo * zo))
            small[out] = np.abs(q) <= 4 * n * _EPS * scale
    return ratio, small


def aberth(coeffs, tol: float = 1e-12, max_iter: int = 1000):
    """Aberth-Ehrlich simultaneous iteration on high-to-low real coefficients.

    Returns ``(roots, converged, iterations)``.  Initial guesses sit on the
    unit circle at golden-angle spacing.  A root stops moving once its
    correction falls below ``tol * max(1, |z|)`` or its residual reaches the
    rounding level of Horner's rule.  Updates are Jacobi-style (all roots
    corrected from the same iterate), so results are deterministic.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    n = len(coeffs) - 1
    if n < 1:
        return np.empty(0, complex), np.empty(0, bool), 0
    k = np.arange(n)
    z = np.exp(1j * (GOLDEN_ANGLE * k + 0.5))
    done = np.zeros(n, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        idx = np.flatnonzero(~done)
        if len(idx) == 0:
            it -= 1
            break
        za = z[idx]
        ratio, small = _newton_ratio(coeffs, za)
        rows = np.arange(len(idx))
        with np.errstate(divide="ignore", invalid="ignore"):
            diff = za[:, None] - z[None, :]
            diff[rows, idx] = 1.0
            inv = 1.0 / diff
            inv[rows, idx] = 0.0
            w = ratio / (1.0 - ratio * inv.sum(axis=1))
        w = np.where(np.isfinite(w) & ~small, w, 0.0)
        stop = small | (np.abs(w) <= tol * np.maximum(1.0, np.abs(za)))
        z[idx] = za - w
        done[idx[stop]] = True
    return z, done, it


RESIDUAL_BITS = 192


def exact_residual(coeffs_low_to_high: list[int], z: complex, bits: int = RESIDUAL_BITS) -> float:
    """|p(z)| at the binary value of ``z``, by fixed-point Horner with ``bits`` fraction bits.

    The coordinates of ``z`` enter exactly; each step truncates the
    accumulator to ``bits`` fraction bits, so the error is at most
    ``deg * 2**-bits`` times the coefficient scale, far below double rounding.
    """
    xr, xd = float(z.real).as_integer_ratio()
    yr, yd = float(z.imag).as_integer_ratio()
    k = max(xd.bit_length(), yd.bit_length()) - 1
    x = xr << (k - xd.bit_length() + 1)
    y = yr << (k - yd.bit_length() + 1)
    re, im = 0, 0
    for c in reversed(coeffs_low_to_high):
        re, im = (re * x - im * y) >> k, (re * y + im * x) >> k
        re += c << bits
    return math.hypot(_ldexp_int(re, -bits), _ldexp_int(im, -bits))


def _ldexp_int(v: int, e: int) -> float:
    """``v * 2**e`` as a float without intermediate overflow (inf on saturation)."""
    if v == 0:
        return 0.0
    drop = max(0, abs(v).bit_length() - 64)
    mant = float(abs(v) >> drop)
    try:
        return math.copysign(math.ldexp(mant, e + drop), v)
    except OverflowError:
        return math.copysign(math.inf, v)


def find_roots(p: SparsePoly, tol: float = 1e-12, max_iter: int = 1000) -> ComplexRootSet:
    """All complex roots of ``p`` with exact-at-the-float residuals."""
    dense = p.dense()
    if len(dense) < 2:
        raise ValueError("polynomial must have degree >= 1")
    b = getattr(p, "b", 0)
    if len(dense) == 2:
        roots = np.array([complex(-dense[0] / dense[1])])
        conv = np.array([True])
        its = 0
    else:
        roots, conv, its = aberth(dense[::-1], tol=tol, max_iter=max_iter)
    res = np.array([exact_residual(dense, complex(r)) for r in roots])
    return ComplexRootSet(b, roots, res, conv, its, best_effort=b > BEST_EFFORT_B)


def annulus_bounds(b: int) -> tuple[float, float]:
    """(inner, outer) radii ``exp(-+ 8 log phi(b) / (b^2 - 1))``."""
    t = 8 * math.log(euler_phi(b)) / (b * b - 1)
    return math.exp(-t), math.exp(t)


def annulus_check(rs: ComplexRootSet, slack: float = 1e-9, near: float = 1e-6) -> Verdict:
    lo, hi = annulus_bounds(rs.b)
    ces, near_boundary = [], []
    excluded = [complex(z) for z, ok in zip(rs.roots, rs.converged) if not ok]
    for z, ok in zip(rs.roots, rs.converged):
        if not ok:
            continue
        r = abs(z)
        if not (lo + slack < r < hi - slack):
            ces.append({"root": [z.real, z.imag], "modulus": r, "bounds": [lo, hi]})
        elif r - lo < near or hi - r < near:
            near_boundary.append({"root": [z.real, z.imag], "modulus": r})
    info = {
        "bounds": [lo, hi],
        "unconverged": [[z.real, z.imag] for z in excluded],
        "near_boundary": near_boundary,
    }
    return Verdict("annulus", (rs.b, rs.b), ces, info=info)


def _ordered(rs: ComplexRootSet):
    order = sorted(range(rs.degree), key=lambda i: (cmath.phase(rs.roots[i]), abs(rs.roots[i])))
    for i in order:
        z = complex(rs.roots[i])
        yield z, bool(rs.converged[i]), float(rs.residuals[i])


def emit_plot_data(rs: ComplexRootSet, fmt: str = "csv") -> bytes:
    """Root coordinates as CSV (``re,im,converged,residual``) or JSON."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "converged", "residual"])
        for z, ok, res in _ordered(rs):
            w.writerow([f"{z.real:.16e}", f"{z.imag:.16e}", "true" if ok else "false", f"{res:.16e}"])
        return buf.getvalue().encode()
    if fmt == "json":
        rows = [{"re": z.real, "im": z.imag, "converged": ok, "residual": res}
                for z, ok, res in _ordered(rs)]
        doc = {"b": rs.b, "degree": rs.degree, "best_effort": rs.best_effort, "roots": rows}
        return (json.dumps(doc, indent=1) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")
