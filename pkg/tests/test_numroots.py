import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from dedekind.invpoly import SparsePoly, build_invpoly
from dedekind.numroots import (
    ComplexRootSet,
    aberth,
    annulus_bounds,
    annulus_check,
    emit_plot_data,
    exact_residual,
    find_roots,
)


@pytest.fixture(scope="module")
def roots():
    return {b: find_roots(build_invpoly(b)) for b in (5, 11, 14, 21)}


def _nearest(z, pts):
    return float(np.min(np.abs(pts - z)))


def test_f5_roots(roots):
    # double roots: each approximation is only good to ~sqrt(eps); cluster means are sharp
    rs = roots[5]
    want = {-1: 2, np.exp(1j * math.pi / 3): 2, np.exp(-1j * math.pi / 3): 2}
    clusters = rs.clusters(1e-6)
    assert len(clusters) == 3
    for centre, size in clusters:
        w = min(want, key=lambda w: abs(w - centre))
        assert abs(centre - w) < 1e-8
        assert size == want[w]
    for z in rs.roots:
        assert min(abs(z - w) for w in want) < 1e-6


def test_f3_linear():
    rs = find_roots(build_invpoly(3))
    assert rs.roots.tolist() == [-1 + 0j]
    assert rs.converged.all() and rs.residuals[0] == 0


def test_rejects_constant():
    with pytest.raises(ValueError):
        find_roots(build_invpoly(2))


@pytest.mark.parametrize("b", [5, 11, 14, 21])
def test_count_and_convergence(roots, b):
    rs = roots[b]
    assert rs.degree == (b - 1) * (b - 2) // 2
    assert rs.converged.all()
    assert not rs.best_effort


@pytest.mark.parametrize("b", [11, 14, 21])
def test_vieta_sum(roots, b):
    dense = build_invpoly(b).dense()
    rs = roots[b]
    want = -dense[-2] / dense[-1]
    assert abs(rs.roots.sum() - want) <= 1e-6 * rs.degree


@pytest.mark.parametrize("b", [11, 14, 21])
def test_closure_under_conjugation_and_inversion(roots, b):
    r = roots[b].roots
    assert max(_nearest(np.conj(z), r) for z in r) <= 1e-8
    assert max(_nearest(1 / z, r) for z in r) <= 1e-6


@pytest.mark.parametrize("b", [11, 14, 21])
def test_normalised_residuals(roots, b):
    rs = roots[b]
    dense = build_invpoly(b).dense()
    assert (rs.residuals / (rs.degree * max(dense))).max() <= 1e-8


def test_exact_residual_against_rationals():
    dense = build_invpoly(11).dense()
    for z in (0.3 + 0.91j, -1.02 + 1e-3j, 0.999 - 0.04j):
        x, y = Fraction(z.real), Fraction(z.imag)
        re = im = Fraction(0)
        for c in reversed(dense):
            re, im = re * x - im * y + c, re * y + im * x
        want = math.hypot(float(re), float(im))
        assert exact_residual(dense, z) == pytest.approx(want, rel=1e-12)


def test_aberth_on_known_polynomial():
    # (x - 2)(x + 0.5)(x^2 + 1)
    coeffs = np.polymul(np.polymul([1, -2], [1, 0.5]), [1, 0, 1])
    z, conv, _ = aberth(coeffs)
    assert conv.all()
    for w in (2, -0.5, 1j, -1j):
        assert _nearest(w, z) < 1e-12


def test_aberth_is_deterministic():
    c = build_invpoly(13).dense()[::-1]
    a = aberth(c)[0]
    b = aberth(c)[0]
    assert np.array_equal(a, b)


def test_unconverged_flagged_not_raised():
    rs = find_roots(build_invpoly(11), max_iter=2)
    assert not rs.converged.all()
    v = annulus_check(rs)
    assert len(v.info["unconverged"]) == int((~rs.converged).sum())


def test_annulus_bounds_b5():
    lo, hi = annulus_bounds(5)
    t = 8 * math.log(4) / 24
    assert lo == pytest.approx(math.exp(-t)) and hi == pytest.approx(math.exp(t))


@pytest.mark.parametrize("b", [5, 11, 14, 21])
def test_annulus_holds(roots, b):
    v = annulus_check(roots[b])
    assert v.ok, v.counterexamples


def test_annulus_reports_violations():
    rs = ComplexRootSet(5, np.array([3.0 + 0j, 1j]), np.zeros(2), np.array([True, True]))
    v = annulus_check(rs)
    assert not v.ok and v.counterexamples[0]["modulus"] == 3.0


def test_csv_layout(roots):
    data = emit_plot_data(roots[21], "csv").decode()
    lines = data.splitlines()
    assert lines[0] == "re,im,converged,residual"
    assert len(lines) == 191
    rows = list(csv.DictReader(io.StringIO(data)))
    assert all(r["converged"] == "true" for r in rows)
    keys = [(math.atan2(float(r["im"]), float(r["re"])), math.hypot(float(r["re"]), float(r["im"])))
            for r in rows]
    assert keys == sorted(keys)
    # 17 significant digits
    assert len(rows[0]["re"].split("e")[0].replace("-", "").replace(".", "")) == 17


@pytest.mark.parametrize("b, rows", [(5, 6), (11, 45), (14, 78), (21, 190)])
def test_csv_row_counts(roots, b, rows):
    assert emit_plot_data(roots[b]).count(b"\n") == rows + 1


def test_csv_f3():
    lines = emit_plot_data(find_roots(build_invpoly(3))).decode().splitlines()
    assert len(lines) == 2
    re, im, conv, res = lines[1].split(",")
    assert float(re) == -1.0 and float(im) == 0.0 and conv == "true"


def test_json_mirrors_csv(roots):
    doc = json.loads(emit_plot_data(roots[11], "json"))
    rows = list(csv.DictReader(io.StringIO(emit_plot_data(roots[11]).decode())))
    assert doc["degree"] == 45 and len(doc["roots"]) == 45
    for j, c in zip(doc["roots"], rows):
        assert j["re"] == float(c["re"]) and j["im"] == float(c["im"])


def test_unknown_format(roots):
    with pytest.raises(ValueError):
        emit_plot_data(roots[5], "png")


def test_best_effort_flag():
    assert find_roots(build_invpoly(61), max_iter=1).best_effort


def test_plain_sparse_poly():
    rs = find_roots(SparsePoly({0: -1, 2: 1}))
    assert sorted(rs.roots.real.round(12)) == [-1.0, 1.0]
