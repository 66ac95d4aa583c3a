"""Sampling estimator: agreement with quadrature, honesty of the reported
error, and the special-case sampling paths."""

import numpy as np
import numpy.testing as npt

import nuperim as npm

SQ = npm.unit_square()


def test_zscores_against_closed_form_interval():
    # exact value 2/(a(1-a)) = 8 at a = 1/2; the reported err must cover
    # the actual deviation across independent seeds
    iu = npm.IntervalUnion([(0.0, 1.0)])
    m = npm.fractional_measure(1, 0.5)
    zs = []
    for seed in range(10):
        r = npm.per_nu_mc_oracle(iu, m, samples=30_000, seed=seed)
        zs.append((r.value - 8.0) / r.err)
    zs = np.array(zs)
    assert np.all(np.abs(zs) < 4.0), zs
    assert abs(zs.mean()) < 1.5  # no systematic bias at the 1.5/sqrt(10) level


def test_error_shrinks_with_sample_size():
    m = npm.fractional_measure(2, 0.5)
    e_small = npm.per_nu_mc_oracle(SQ, m, samples=50_000, seed=1).err
    e_big = npm.per_nu_mc_oracle(SQ, m, samples=800_000, seed=1).err
    assert e_big < e_small / 1.5


def test_radial_atom_profile_path():
    prof = npm.atom_profile([(0.3, 1.0), (0.9, 0.5)])
    m = npm.radial_spherical_measure(prof, npm.uniform_sphere(2))
    mc = npm.per_nu_mc_oracle(SQ, m, samples=150_000, seed=3)
    quad = npm.per_nu(SQ, m)
    assert abs(mc.value - quad.value) <= 3.0 * mc.err
    assert mc.breakdown["bias_bound"] == 0.0  # atoms need no truncation


def test_gauge_weighted_direction_path():
    m = npm.anisotropic_stable_measure(npm.ellipsoid([1.0, 0.6]), 0.5)
    mc = npm.per_nu_mc_oracle(SQ, m, samples=150_000, seed=4)
    quad = npm.per_nu(SQ, m)
    assert abs(mc.value - quad.value) <= 3.0 * mc.err


def test_kernel_sampler_path():
    k = npm.gaussian_kernel(2)
    mc = npm.per_nu_mc_oracle(SQ, npm.kernel_measure(k),
                              samples=150_000, seed=5)
    quad = npm.j_perimeter(SQ, k)
    assert abs(mc.value - quad.value) <= 3.0 * mc.err


def test_truncation_diagnostics_reported():
    m = npm.fractional_measure(2, 0.8)
    r = npm.per_nu_mc_oracle(SQ, m, samples=100_000, seed=0)
    bd = r.breakdown
    assert 0.0 < bd["delta0"] <= 0.25 * SQ.diameter
    assert bd["bias_bound"] > 0.0
    assert r.err >= bd["stderr"]  # err owns both noise and truncation bias
    # heavier tail exponent uses the steeper proposal
    assert bd["gamma"] == 0.5 * (1.0 + 0.8)


def test_dimension_mismatch_rejected():
    try:
        npm.per_nu_mc_oracle(SQ, npm.fractional_measure(1, 0.5))
    except ValueError:
        return
    raise AssertionError("dimension mismatch was accepted")
