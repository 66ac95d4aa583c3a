"""Property-based checks over randomized sets, measures, and bodies."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import nuperim as npm


@st.composite
def interval_unions(draw, max_pieces=5):
    """Disjoint interval unions built from positive gap/length increments,
    so pieces can never touch or overlap."""
    n = draw(st.integers(1, max_pieces))
    x = draw(st.floats(-5.0, 5.0))
    pieces = []
    for _ in range(n):
        x += draw(st.floats(0.05, 2.0))
        length = draw(st.floats(0.05, 2.0))
        pieces.append((x, x + length))
        x += length
    return npm.IntervalUnion(pieces)


alphas = st.floats(0.05, 0.95)


@given(interval_unions(), alphas)
@settings(max_examples=100, deadline=None)
def test_upper_bound_interval_unions(iu, a):
    m = npm.fractional_measure(1, a)
    ok, c_nu = npm.admissibility_check(m)
    assert ok
    val = npm.per_nu_interval_exact(iu, m)
    bound = c_nu * (npm.classical_perimeter(iu) + iu.measure)
    assert val <= bound * (1.0 + 1e-9)


@given(interval_unions(), alphas, st.floats(0.1, 7.0))
@settings(max_examples=100, deadline=None)
def test_scaling_homogeneity_exact_route(iu, a, lam):
    m = npm.fractional_measure(1, a)
    scaled = npm.IntervalUnion([(lam * lo, lam * hi)
                                for lo, hi in iu.intervals])
    v1 = npm.per_nu_interval_exact(iu, m)
    v2 = npm.per_nu_interval_exact(scaled, m)
    assert v2 == pytest.approx(lam ** (1.0 - a) * v1, rel=1e-9)


@given(interval_unions(max_pieces=3), alphas, st.floats(-13.0, 13.0))
@settings(max_examples=100, deadline=None)
def test_translation_invariance_exact_route(iu, a, shift):
    m = npm.fractional_measure(1, a)
    moved = iu.translate(shift)
    v1 = npm.per_nu_interval_exact(iu, m)
    v2 = npm.per_nu_interval_exact(moved, m)
    assert v2 == pytest.approx(v1, rel=1e-10)


@given(interval_unions(max_pieces=3), alphas)
@settings(max_examples=60, deadline=None)
def test_complement_symmetry_random_unions(iu, a):
    lo, hi = iu.bounding_box()
    window = npm.IntervalUnion([(float(lo[0]) - 8.0, float(hi[0]) + 8.0)])
    res = npm.symmetry_check(iu, npm.fractional_measure(1, a), window=window)
    assert res["gap"] <= 1e-8 * max(1.0, res["lhs"])


@given(interval_unions(max_pieces=4), st.data())
@settings(max_examples=50, deadline=None)
def test_coarea_identity_random_step_functions(iu, data):
    pieces = [npm.IntervalUnion([tuple(p)]) for p in iu.intervals]
    coeffs = [data.draw(st.floats(0.1, 5.0)) for _ in pieces]
    u = npm.StepFunction(list(zip(pieces, coeffs)))
    a = data.draw(alphas)
    m = npm.fractional_measure(1, a)
    f = npm.f_nu(u, m)
    c = npm.coarea_rhs(u, m)
    assert abs(f.value - c.value) <= 1e-7 * c.value + f.err + c.err


@given(interval_unions(), st.floats(0.001, 10.0))
@settings(max_examples=100, deadline=None)
def test_covariogram_bounds_random(iu, r):
    cov = npm.covariogram_exact(iu)
    g0 = cov(np.array([[0.0]]))[0]
    gr = cov(np.array([[r]]))[0]
    gmr = cov(np.array([[-r]]))[0]
    assert gr == gmr  # even, bitwise
    assert -1e-12 <= gr <= g0 + 1e-12
    assert g0 - gr <= cov.lipschitz * r * (1.0 + 1e-9) + 1e-12


@st.composite
def bodies(draw):
    kind = draw(st.sampled_from(["ellipsoid", "box", "lp"]))
    if kind == "ellipsoid":
        return npm.ellipsoid([draw(st.floats(0.2, 3.0)),
                              draw(st.floats(0.2, 3.0))])
    if kind == "box":
        return npm.box_body([draw(st.floats(0.2, 3.0)),
                             draw(st.floats(0.2, 3.0))])
    return npm.lp_ball(draw(st.floats(1.0, 6.0)),
                       radius=draw(st.floats(0.3, 2.0)))


coords = st.floats(-4.0, 4.0).filter(lambda v: abs(v) > 1e-12)


@given(bodies(), coords, coords, st.floats(0.01, 20.0))
@settings(max_examples=100, deadline=None)
def test_gauge_homogeneity(body, x, y, lam):
    p = np.array([x, y])
    g = npm.gauge_norm(body, p)
    gl = npm.gauge_norm(body, lam * p)
    assert gl == pytest.approx(lam * g, rel=1e-9)


@given(bodies(), coords, coords, coords, coords)
@settings(max_examples=100, deadline=None)
def test_gauge_triangle_inequality(body, x1, y1, x2, y2):
    p, q = np.array([x1, y1]), np.array([x2, y2])
    lhs = npm.gauge_norm(body, p + q)
    rhs = npm.gauge_norm(body, p) + npm.gauge_norm(body, q)
    assert lhs <= rhs * (1.0 + 1e-9)


@given(bodies(), coords, coords)
@settings(max_examples=100, deadline=None)
def test_polar_gauge_sandwich(body, x, y):
    p = np.array([x, y])
    r0, R0 = npm.inradius(body), npm.outradius(body)
    dual = npm.polar_gauge(body, p)
    n = float(np.hypot(x, y))
    # ||y||_K* = h_K(y) lies between r0|y| and R0|y|
    assert r0 * n * (1.0 - 1e-9) <= dual <= R0 * n * (1.0 + 1e-9)


@given(st.integers(0, 6), st.integers(0, 6), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_voxel_translation_bit_exact(dx, dy, stride):
    """Rolling the mask inside a padded canvas changes nothing at all:
    the perimeter value must be equal to the last bit."""
    base = np.zeros((24, 24), dtype=bool)
    base[5:12, 4:14] = True
    base[9:16, 8:11] = True
    rolled = np.roll(np.roll(base, dx * stride, axis=0), dy, axis=1)
    assume(not rolled[0, :].any() and not rolled[-1, :].any()
           and not rolled[:, 0].any() and not rolled[:, -1].any())
    h = 1.0 / 8.0
    m = npm.fractional_measure(2, 0.45)
    v1 = npm.per_nu(npm.VoxelSet(base, h, (0.0, 0.0)), m)
    v2 = npm.per_nu(npm.VoxelSet(rolled, h, (0.0, 0.0)), m)
    assert v1.value == v2.value
