"""Shapes, covariograms and the voxel layer."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from nuperim import geometry as geo

import _oracles as oc


def test_interval_union_normalizes():
    iu = geo.IntervalUnion([(2.0, 3.0), (0.0, 1.0), (0.5, 1.5)])
    npt.assert_allclose(iu.intervals, [[0.0, 1.5], [2.0, 3.0]])
    assert iu.n_components == 2
    assert iu.measure == 2.5
    assert iu.diameter == 3.0


def test_interval_union_contains_half_open():
    iu = geo.IntervalUnion([(0.0, 1.0)])
    inside = iu.contains([-0.1, 0.0, 0.5, 1.0, 1.1])
    assert list(inside) == [False, True, True, False, False]


def test_interval_union_rejects_bad_input():
    with pytest.raises(ValueError):
        geo.IntervalUnion([(1.0, 1.0)])
    with pytest.raises(ValueError):
        geo.IntervalUnion([(0.0, np.inf)])


def test_autocorrelation_matches_direct_overlap():
    ivs = [(0.0, 1.0), (2.0, 2.5), (4.0, 4.2)]
    iu = geo.IntervalUnion(ivs)
    knots, vals = iu.autocorrelation()
    for y in np.linspace(0.0, 5.0, 977):
        expect = oc.overlap_length(ivs, y)
        got = float(np.interp(y, knots, vals, right=0.0))
        assert abs(got - expect) < 1e-12


def test_covariogram_even_and_lipschitz():
    iu = geo.IntervalUnion([(0.0, 1.0), (1.5, 2.0)])
    cov = geo.covariogram_exact(iu)
    r = np.linspace(0.0, 3.0, 251).reshape(-1, 1)
    g = cov(r)
    npt.assert_array_equal(cov(-r), g)          # even, bit for bit
    assert cov.volume == iu.measure
    steps = np.abs(np.diff(g.ravel())) / (r[1, 0] - r[0, 0])
    assert steps.max() <= cov.lipschitz + 1e-9


def test_disk_covariogram_closed_form():
    ball = geo.Ball([0.0, 0.0], 1.0)
    cov = geo.covariogram_exact(ball)
    for r in (0.0, 0.3, 0.9, 1.7, 2.0, 2.4):
        pts = np.array([[r, 0.0]])
        npt.assert_allclose(cov(pts)[0], oc.disk_covariogram(r), atol=1e-14)


def test_box_covariogram_is_tent_product():
    box = geo.Box([0.0, 0.0], [1.0, 2.0])
    cov = geo.covariogram_exact(box)
    rng = np.random.default_rng(5)
    pts = rng.uniform(-2.5, 2.5, size=(200, 2))
    expect = [oc.box_covariogram(p[0], p[1], 1.0, 2.0) for p in pts]
    npt.assert_allclose(cov(pts), expect, atol=1e-14)


def test_classical_perimeter_values():
    # d * varpi_d * r^(d-1): 2 pi r in the plane, 4 pi r^2 in space
    npt.assert_allclose(geo.classical_perimeter(geo.Ball([0.0, 0.0], 1.0)),
                        2.0 * math.pi, rtol=1e-12)
    npt.assert_allclose(
        geo.classical_perimeter(geo.Ball([0.0, 0.0, 0.0], 1.0)),
        4.0 * math.pi, rtol=1e-12)
    npt.assert_allclose(
        geo.classical_perimeter(geo.Box([0.0, 0.0], [1.0, 1.0])), 4.0)
    npt.assert_allclose(
        geo.classical_perimeter(geo.IntervalUnion([(0, 1), (2, 2.5)])), 4.0)
    npt.assert_allclose(
        geo.classical_perimeter(geo.l_shape(1.0, 0.5)), 4.0)


def test_l_shape_area():
    sh = geo.l_shape(1.0, 0.5)
    npt.assert_allclose(sh.volume, 0.75)
    assert sh.contains(np.array([[0.25, 0.25]]))[0]
    assert not sh.contains(np.array([[0.75, 0.75]]))[0]


def test_polygon_rejects_self_intersection():
    with pytest.raises(ValueError):
        geo.Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])


def test_regular_polygon_converges_to_disk():
    # area of an n-gon inscribed in the unit circle: n/2 sin(2 pi / n)
    for n in (3, 6, 17):
        pg = geo.regular_polygon(n, 1.0)
        npt.assert_allclose(pg.volume, 0.5 * n * math.sin(2 * math.pi / n),
                            rtol=1e-12)


def test_dyadic_set_matches_definition():
    ds = geo.dyadic_set(10)
    npt.assert_allclose(ds.intervals,
                        [(n, n + 2.0 ** (-n)) for n in range(1, 11)])
    npt.assert_allclose(ds.measure, 1.0 - 2.0 ** (-10))


def test_voxel_margin_enforced():
    mask = np.zeros((4, 4), dtype=bool)
    mask[0, 1] = True
    with pytest.raises(ValueError):
        geo.VoxelSet(mask, 0.5, [0.0, 0.0])


def test_voxel_save_load_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    mask = np.zeros((12, 9), dtype=bool)
    mask[2:9, 2:7] = rng.random((7, 5)) > 0.4
    mask[4, 4] = True
    v = geo.VoxelSet(mask, 0.125, [-1.0, 0.5])
    path = tmp_path / "set.vox"
    v.save(path)
    w = geo.VoxelSet.load(path)
    npt.assert_array_equal(w.mask, v.mask)
    assert w.spacing == v.spacing
    npt.assert_array_equal(w.origin, v.origin)


def test_rasterize_margin_and_volume():
    sh = geo.Ball([0.0, 0.0], 1.0)
    v = geo.rasterize(sh, 1.0 / 64.0)
    # one-cell margin
    assert not v.mask[0].any() and not v.mask[-1].any()
    assert not v.mask[:, 0].any() and not v.mask[:, -1].any()
    # cell-center rule: area correct to O(h * Per)
    assert abs(v.volume - math.pi) < 2.0 / 64.0 * 2.0 * math.pi


def test_covariogram_grid_converges_to_exact():
    """sup error of the sampled covariogram is O(h): halving h should
    roughly halve it (ratio in (1.3, 3) leaves room for constants)."""
    sh = geo.Ball([0.0, 0.0], 1.0)
    exact = geo.covariogram_exact(sh)
    errs = []
    for h in (1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0):
        v = geo.rasterize(sh, h)
        cov = geo.covariogram_grid(v)
        rr = np.linspace(0.0, 2.2, 301)
        pts = np.column_stack([rr, np.zeros_like(rr)])
        errs.append(np.max(np.abs(cov(pts) - exact(pts))))
    assert errs[0] > errs[1] > errs[2]
    ratio = errs[0] / errs[2]
    assert ratio > 2.5  # two halvings of O(h) error


def test_covariogram_grid_fft_equals_direct():
    rng = np.random.default_rng(3)
    mask = np.zeros((10, 11), dtype=bool)
    mask[2:8, 2:9] = rng.random((6, 7)) > 0.5
    mask[5, 5] = True
    v = geo.VoxelSet(mask, 0.25, [0.0, 0.0])
    a = geo.covariogram_grid(v, method="fft")
    b = geo.covariogram_grid(v, method="direct")
    pts = rng.uniform(-2.0, 2.0, size=(64, 2))
    npt.assert_allclose(a(pts), b(pts), atol=1e-10)
