"""Step-function functional, co-area identity, complement symmetry."""

import numpy as np
import numpy.testing as npt
import pytest

import nuperim as npm

FRAC_HALF = npm.fractional_measure(1, 0.5)


def two_piece():
    return npm.StepFunction([(npm.IntervalUnion([(0.0, 1.0)]), 1.0),
                             (npm.IntervalUnion([(2.0, 2.5)]), 3.0)])


def test_indicator_functional_is_perimeter():
    u = npm.StepFunction.indicator(npm.IntervalUnion([(0.0, 1.0)]))
    npt.assert_allclose(npm.f_nu(u, FRAC_HALF).value,
                        npm.frac_perimeter_interval(0.5), rtol=1e-9)


def test_superlevel_sets():
    u = two_piece()
    assert u.values() == [1.0, 3.0]
    npt.assert_allclose(u.superlevel(0.5).intervals,
                        [[0.0, 1.0], [2.0, 2.5]])
    npt.assert_allclose(u.superlevel(2.0).intervals, [[2.0, 2.5]])


def test_coarea_matches_layer_cake_by_hand():
    # int_0^inf Per({u > t}) dt = 1 * Per(A1 u A2) + (3 - 1) * Per(A2),
    # each layer evaluated with the exact interval routine.
    u = two_piece()
    both = npm.per_nu_interval_exact(
        npm.IntervalUnion([(0.0, 1.0), (2.0, 2.5)]), FRAC_HALF)
    top = npm.per_nu_interval_exact(npm.IntervalUnion([(2.0, 2.5)]),
                                    FRAC_HALF)
    expected = both + 2.0 * top
    res = npm.coarea_rhs(u, FRAC_HALF)
    npt.assert_allclose(res.value, expected, rtol=1e-9)
    assert res.method == "coarea"


def test_functional_equals_coarea_d1():
    u = two_piece()
    f = npm.f_nu(u, FRAC_HALF)
    c = npm.coarea_rhs(u, FRAC_HALF)
    assert abs(f.value - c.value) <= 1e-8 * c.value + f.err + c.err


def test_functional_equals_coarea_voxels_d2():
    # two disjoint regions on one grid: inner square and a framing ring
    n, h = 40, 1.0 / 16.0
    xs = (np.arange(n) + 0.5) * h - 1.25
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    inner = (np.abs(X) <= 0.5) & (np.abs(Y) <= 0.5)
    ring = (~inner) & (np.maximum(np.abs(X), np.abs(Y)) <= 0.75)
    org = (-1.25, -1.25)
    u = npm.StepFunction([(npm.VoxelSet(inner, h, org), 2.0),
                          (npm.VoxelSet(ring, h, org), 1.0)])
    m = npm.fractional_measure(2, 0.4)
    f = npm.f_nu(u, m)
    c = npm.coarea_rhs(u, m)
    assert abs(f.value - c.value) <= 1e-6 * c.value + f.err + c.err


def test_coarea_rejects_negative_values():
    u = npm.StepFunction([(npm.IntervalUnion([(0.0, 1.0)]), 1.0),
                          (npm.IntervalUnion([(2.0, 2.5)]), -2.0)])
    with pytest.raises(ValueError):
        npm.coarea_rhs(u, FRAC_HALF)
    # the functional itself is fine with signed values
    assert npm.f_nu(u, FRAC_HALF).value > 0


def test_step_function_rejects_overlap_and_zero():
    with pytest.raises(ValueError):
        npm.StepFunction([(npm.IntervalUnion([(0.0, 1.0)]), 1.0),
                          (npm.IntervalUnion([(0.5, 2.0)]), 2.0)])
    with pytest.raises(ValueError):
        npm.StepFunction([(npm.IntervalUnion([(0.0, 1.0)]), 0.0)])


def test_complement_symmetry_interval():
    res = npm.symmetry_check(npm.IntervalUnion([(0.0, 1.0)]), FRAC_HALF,
                             window=npm.IntervalUnion([(-10.0, 11.0)]))
    assert res["gap"] <= 1e-12 * res["lhs"]
    assert res["gap"] <= res["err"]


def test_complement_symmetry_square_gaussian():
    # grid-aligned spacing keeps the rasterized complement exact
    res = npm.symmetry_check(npm.unit_square(),
                             npm.kernel_measure(npm.gaussian_kernel(2)),
                             window=npm.Box([-8.0, -8.0], [9.0, 9.0]),
                             h=1.0 / 64.0)
    assert res["gap"] <= 2e-6
    assert res["gap"] <= 2.0 * res["err"]


def test_complement_symmetry_heavy_tail_err_dominates():
    """Power-law tails make the handover band expensive; the reported err
    must own the gap in that regime."""
    res = npm.symmetry_check(npm.Ball([0.0, 0.0], 1.0),
                             npm.fractional_measure(2, 0.5),
                             window=npm.Box([-9.0, -9.0], [9.0, 9.0]),
                             h=1.0 / 64.0)
    assert res["gap"] <= res["err"]


def test_symmetry_check_window_must_contain_shape():
    with pytest.raises(ValueError):
        npm.symmetry_check(npm.IntervalUnion([(0.0, 1.0)]), FRAC_HALF,
                           window=npm.IntervalUnion([(0.0, 1.0)]))
