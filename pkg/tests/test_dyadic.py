"""The sparse dyadic interval family: closed forms, truncation, divergence."""

import math

import numpy as np
import numpy.testing as npt
import pytest

import nuperim as npm

# Frozen with tests/_oracles.py::pw_linear_perimeter_1d — direct interval
# arithmetic plus the elementary antiderivative on each affine segment of
# the autocorrelation (adaptive quadrature loses ~1e-4 on the 2^-n scales).
# Measure: tail-normalized alpha-stable, truncation depth 40.
DYADIC_FROZEN = {0.3: 2.2103880060026695,
                 0.5: 4.7001990649891,
                 0.7: 14.237173571373566}


def test_dyadic_set_geometry():
    E = npm.dyadic_set(5)
    npt.assert_allclose(E.intervals,
                        [[n, n + 2.0 ** -n] for n in range(1, 6)])
    npt.assert_allclose(E.measure, sum(2.0 ** -n for n in range(1, 6)))


def test_inner_series_closed_form():
    # at alpha = 1/2 the series collapses to 1 + 2 sqrt(2)
    npt.assert_allclose(npm.dyadic_example_inner(0.5),
                        1.0 + 2.0 * math.sqrt(2.0), rtol=1e-12)


def test_inner_series_blows_up_like_one_minus_alpha_squared():
    vals = [(1.0 - a) ** 2 * npm.dyadic_example_inner(a)
            for a in (0.99, 0.999, 0.9999)]
    # (1-a)^2 * inner tends to a finite constant from one side
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])


@pytest.mark.parametrize("alpha", sorted(DYADIC_FROZEN))
def test_closed_form_matches_independent_oracle(alpha):
    npt.assert_allclose(npm.dyadic_per_nu_exact(alpha),
                        DYADIC_FROZEN[alpha], rtol=1e-12)


@pytest.mark.parametrize("alpha", sorted(DYADIC_FROZEN))
def test_quadrature_matches_closed_form(alpha):
    E = npm.dyadic_set(40)
    r = npm.per_nu(E, npm.levy_measure(1, alpha),
                   q=npm.QuadratureSpec(rel_tol=1e-8, max_refinements=6))
    npt.assert_allclose(r.value, npm.dyadic_per_nu_exact(alpha), rtol=1e-6)


def test_interval_exact_route_identical_to_closed_form():
    E = npm.dyadic_set(40)
    for a in (0.3, 0.5, 0.7, 0.9):
        npt.assert_allclose(
            npm.per_nu_interval_exact(E, npm.levy_measure(1, a)),
            npm.dyadic_per_nu_exact(a), rtol=1e-12)


def test_strictly_increasing_in_alpha():
    vals = [npm.dyadic_per_nu_exact(a) for a in (0.5, 0.9, 0.99)]
    assert vals[0] < vals[1] < vals[2]


def test_truncation_depth_converges():
    # each added level contributes ~ (2^-n)^(1-alpha), so increments shrink
    # by 2^(10(1-alpha)) = 32 per ten levels at alpha = 1/2; the geometric
    # tail beyond depth 40 is then below 1e-5 relative
    v20 = npm.dyadic_per_nu_exact(0.5, n_max=20)
    v30 = npm.dyadic_per_nu_exact(0.5, n_max=30)
    v40 = npm.dyadic_per_nu_exact(0.5, n_max=40)
    assert v20 < v30 < v40
    assert (v40 - v30) < 0.05 * (v30 - v20)
    assert (v40 - v30) / 31.0 < 1e-5 * v40


def test_divergence_study_classifications():
    res = npm.dyadic_divergence_study()
    assert list(res["alphas"]) == [0.5, 0.9, 0.99]
    pv = res["per_nu"]
    assert pv[0] < pv[1] < pv[2]
    mixtures = res["mixtures"]
    # interval lengths n^-1: total length diverges, so does the perimeter
    assert mixtures["n^-1"]["classification"] == "divergent"
    assert mixtures["n^-2"]["classification"] == "convergent"
    assert mixtures["n^-3"]["classification"] == "convergent"
    seq = mixtures["n^-1"]["per_nu"]
    assert seq[-1] > seq[0]
