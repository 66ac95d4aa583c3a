"""Normalized-perimeter sweeps and their limit targets.

Every limit statement handled here has the shape

    C_eps^{-1} Per_{nu_eps}(E)  ->  target(E)      as eps -> limit point,

with the regime deciding which C_eps pairs with which target:

    regime              C_eps                     target
    ------------------  ------------------------  ---------------------------
    classical_uniform   int (1 ^ |x|) nu_eps      K_{1,d}/(2 kappa) * Per(E)
    classical_mu        int (1 ^ |x|) nu_eps      1/2 sum l_i int|n_i.t| mu
    lebesgue, slow_var  nu_eps(|x| > 1)           |E|
    j_kernel            eps (shrink parameter)    C_J/2 sum l_i int|n_i.t| mu_J
    j_total_mass        1                         ||J||_L1 |E|
    aniso_moment_body   1/(1 - alpha)             Per(E, ZK)
    aniso_volume        1/alpha                   d |K| |E|
    sobolev_aniso       1/(1 - alpha)             2 sum_t gap_t Per(S_t, ZK)

Before any perimeter is computed the family's tail mass lambda_eps(B_R^c)
is probed at R in {0.1, 1, 10}: concentration regimes must push it toward
0, spreading (Lebesgue-type) regimes toward 1.  A family moving the wrong
way raises GateFailure rather than producing a confidently wrong sweep.
"""

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import convex
from .constants import directional_average, sphere_area, unit_ball_volume
from .errors import GateFailure
from .geometry import boundary_decomposition, classical_perimeter, rasterize
from .measures import (ScalingFamily, anisotropic_stable_measure, lambda_tail,
                       normalization_constant, sphere_projection,
                       _kernel_radial_reduction, _log_gl_nodes)
from .perimeter import (StepFunction, dyadic_per_nu_exact, f_nu, per_nu,
                        resolve_covariogram)
from .quadrature import QuadratureSpec

GATE_RADII = (0.1, 1.0, 10.0)

# regime -> (C_eps source, small-parameter map, gate direction)
_REGIMES = {
    "classical_uniform": ("family", "to_one", "zero"),
    "classical_mu": ("family", "to_one", "zero"),
    "lebesgue": ("family", "as_is", "one"),
    "slow_var": ("family", "log_inv", "one"),
    "j_kernel": ("param", "as_is", "zero"),
    "j_total_mass": ("one", "as_is", "one"),
    "aniso_moment_body": ("one_minus_alpha", "to_one", "zero"),
    "aniso_volume": ("inv_alpha", "as_is", "one"),
    "sobolev_aniso": ("one_minus_alpha", "to_one", "zero"),
}


def universal_constants(d):
    """The three constants every limit in this module is built from."""
    return {
        "varpi": unit_ball_volume(d),
        "kappa": sphere_area(d),
        "K1d": directional_average(d),
    }


class LimitTarget:
    def __init__(self, regime, value, detail=None):
        if not math.isfinite(value):
            raise ValueError("limit target must be finite")
        self.regime = regime
        self.value = float(value)
        self.detail = detail or {}

    def __repr__(self):
        return f"LimitTarget({self.regime}, {self.value:.10g})"


def _edge_sum(shape, directional):
    """sum over boundary pieces of length_i * directional(n_i)."""
    lengths, normals = boundary_decomposition(shape)
    return float(sum(l * directional(n) for l, n in zip(lengths, normals)))


def _mu_absmoment(mu, n_vec, n_rule=4096):
    """int |n . theta| mu(dtheta) for a (probability) spherical measure."""
    d = mu.d
    if mu.kind == "uniform":
        return directional_average(d) / sphere_area(d)
    thetas, w = mu.rule(n_rule)
    w = np.asarray(w, float)
    return float(np.sum(w * np.abs(thetas @ np.asarray(n_vec, float))))


def _kernel_directional_moment(kernel, n_vec, n_dirs=1024):
    """int |n . y| J(y) dy for a finitely supported kernel."""
    thetas, sigma, rad = _kernel_radial_reduction(kernel, n_dirs)
    hi = kernel.support_radius
    if math.isinf(hi):
        raise ValueError("directional moment needs compact support here")
    r, w = _log_gl_nodes(hi * 1e-12, hi, per_decade=16)
    dens = rad(r)  # (n_r, n_dirs) including r^{d-1}
    per_dir = (r * w) @ dens  # int r * J(r theta) r^{d-1} dr per direction
    return float(np.sum(sigma * np.abs(thetas @ np.asarray(n_vec, float))
                        * per_dir))


def limit_target(regime, shape=None, body=None, mu=None, kernel=None):
    """The paper-side constant the normalized sweep should approach."""
    if regime == "classical_uniform":
        d = shape.d
        value = directional_average(d) / (2.0 * sphere_area(d)) \
            * classical_perimeter(shape)
        return LimitTarget(regime, value, dict(per=classical_perimeter(shape)))
    if regime == "classical_mu":
        value = 0.5 * _edge_sum(shape, lambda n: _mu_absmoment(mu, n))
        return LimitTarget(regime, value)
    if regime in ("lebesgue", "slow_var"):
        return LimitTarget(regime, shape.volume)
    if regime == "j_kernel":
        if kernel.is_radial:
            if kernel.first_moment is None:
                raise ValueError("kernel needs a finite first moment")
            d = kernel.d
            value = 0.5 * kernel.first_moment \
                * directional_average(d) / sphere_area(d) \
                * classical_perimeter(shape)
        else:
            value = 0.5 * _edge_sum(
                shape, lambda n: _kernel_directional_moment(kernel, n))
        return LimitTarget(regime, value)
    if regime == "j_total_mass":
        if kernel.total_mass is None:
            raise ValueError("kernel needs finite total mass")
        return LimitTarget(regime, kernel.total_mass * shape.volume)
    if regime == "aniso_moment_body":
        value = convex.perimeter_wrt_moment_body(shape, body)
        return LimitTarget(regime, value)
    if regime == "aniso_volume":
        value = shape.d * convex.body_volume(body) * shape.volume
        return LimitTarget(regime, value)
    raise ValueError(f"unknown regime {regime!r}")


class SweepResult:
    """One normalized series with its target, gates, and extrapolation."""

    def __init__(self, regime, params, small, c_eps, per_values, per_errs,
                 normalized, runtimes_ms, row_errors, target, gates,
                 h_rule, h_values):
        self.regime = regime
        self.params = np.asarray(params, float)
        self.small = np.asarray(small, float)
        self.c_eps = np.asarray(c_eps, float)
        self.per_values = np.asarray(per_values, float)
        self.per_errs = np.asarray(per_errs, float)
        self.normalized = np.asarray(normalized, float)
        self.runtimes_ms = np.asarray(runtimes_ms, float)
        self.row_errors = row_errors
        self.target = target
        self.gates = gates
        self.h_rule = h_rule
        self.h_values = h_values
        self.extrapolated = self._extrapolate()
        if self.extrapolated is None or target is None:
            self.residual = math.nan
        else:
            self.residual = abs(self.extrapolated - target.value) \
                / abs(target.value)

    def _extrapolate(self):
        ok = np.isfinite(self.normalized)
        if np.sum(ok) < 3:
            return None
        s = self.small[ok][-3:]
        v = self.normalized[ok][-3:]
        return float(np.polyfit(s, v, 1)[1])

    def row_residuals(self):
        if self.target is None:
            return np.full_like(self.normalized, math.nan)
        return (self.normalized - self.target.value) / abs(self.target.value)

    def to_csv(self, path):
        rows = self.rows()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["regime", "param", "C_eps", "per_nu", "normalized",
                        "target", "residual", "err_est", "runtime_ms"])
            w.writerows(rows)

    def rows(self):
        res = self.row_residuals()
        tval = self.target.value if self.target else math.nan
        out = []
        for i, p in enumerate(self.params):
            out.append([self.regime, f"{p:.10g}", f"{self.c_eps[i]:.10g}",
                        f"{self.per_values[i]:.12g}",
                        f"{self.normalized[i]:.12g}", f"{tval:.12g}",
                        f"{res[i]:.6g}",
                        f"{self.per_errs[i] / max(self.c_eps[i], 1e-300):.4g}",
                        f"{self.runtimes_ms[i]:.1f}"])
        return out

    def to_dict(self):
        return {
            "regime": self.regime,
            "params": self.params.tolist(),
            "normalized": self.normalized.tolist(),
            "target": self.target.value if self.target else None,
            "extrapolated": self.extrapolated,
            "residual": self.residual,
            "gates": {f"{r:g}": list(v) for r, v in self.gates.items()},
            "h_rule": self.h_rule,
            "row_errors": [e for e in self.row_errors if e],
        }


def _check_gates(fam, grid, direction):
    """lambda_eps(B_R^c) at the coarse and extreme grid ends, with the
    movement direction asserted.  Returns {R: (coarse, extreme)}."""
    gates = {}
    for R in GATE_RADII:
        lam0 = lambda_tail(fam, grid[0], R)
        lam1 = lambda_tail(fam, grid[-1], R)
        gates[R] = (lam0, lam1)
        if direction == "zero":
            ok = lam1 <= lam0 + 1e-12 and lam1 < 0.9
        else:
            ok = lam1 >= lam0 - 1e-12 and lam1 > 0.1
        if not ok:
            raise GateFailure(
                f"lambda(B_{R:g}^c) moved {lam0:.3g} -> {lam1:.3g}, "
                f"expected -> {'0' if direction == 'zero' else '1'}")
    return gates


def _c_eps(kind, fam, p):
    if kind == "family":
        return normalization_constant(fam, p)
    if kind == "param":
        return float(p)
    if kind == "one":
        return 1.0
    if kind == "one_minus_alpha":
        return 1.0 / (1.0 - p)
    return 1.0 / p  # inv_alpha


def _run_points(fam, grid, evaluator, c_kind, threads):
    """Evaluate all grid points; failures become per-row records.

    ``evaluator(i, m)`` gets the grid index (for resolution coupling) and
    the measure, and returns something with .value and .err.
    """

    def point(i):
        t0 = time.perf_counter()
        try:
            c = _c_eps(c_kind, fam, grid[i])
            res = evaluator(i, fam.measure_at(grid[i]))
            row = (c, res.value, res.err, res.value / c, None)
        except Exception as exc:  # per-point failure, sweep continues
            row = (math.nan, math.nan, math.nan, math.nan,
                   f"{type(exc).__name__}: {exc}")
        return row + ((time.perf_counter() - t0) * 1e3,)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(point, range(len(grid))))
    else:
        rows = [point(i) for i in range(len(grid))]
    return rows


def _small_params(grid, mode):
    g = np.asarray(grid, float)
    if mode == "to_one":
        return 1.0 - g
    if mode == "log_inv":
        # slowly-varying normalizers converge like 1/log(1/eps); fitting in
        # eps itself would stall an order of magnitude short of the limit
        return 1.0 / np.log(1.0 / g)
    return g


def sweep(fam, shape, regime, grid, q=None, threads=None, h0=None,
          target=None):
    """Normalized Per_{nu_eps}(E) over a grid ordered toward the limit.

    The grid must be strictly monotone with the limit end last.  Gates run
    first; each point then computes C_eps and Per, and the limit is fit
    linearly in the small parameter over the last three good points.
    """
    if regime not in _REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    grid = [float(p) for p in grid]
    diffs = np.diff(grid)
    if len(grid) >= 2 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ValueError("grid must be strictly monotone")
    c_kind, small_mode, gate_dir = _REGIMES[regime]
    gates = _check_gates(fam, grid, gate_dir)
    if target is None:
        target = _default_target(fam, shape, regime)

    h_rule, h_values, make_cov = _coupling(shape, grid, small_mode, h0)
    if q is None:
        # limit targets carry 2-3% tolerances; 1e-5 per row is ample and
        # avoids chasing 1e-6 on endpoint measures that concentrate near 0
        q = QuadratureSpec(rel_tol=1e-5)
    rows = _run_points(fam, grid,
                       lambda i, m: per_nu(make_cov(i), m, q),
                       c_kind, threads)
    c_eps, per_v, per_e, norm, errs, runtimes = zip(*rows)
    return SweepResult(regime, grid, _small_params(grid, small_mode), c_eps,
                       per_v, per_e, norm, runtimes, list(errs), target,
                       gates, h_rule, h_values)


def _coupling(shape, grid, small_mode, h0):
    """Grid-resolution coupling h = min(h0, small/4); exact covariograms
    need none and record h_rule='exact'."""
    from .geometry import Polygon, VoxelSet

    if not isinstance(shape, (Polygon, VoxelSet)):
        cov = resolve_covariogram(shape)
        return "exact", [math.nan] * len(grid), lambda i: cov
    if isinstance(shape, VoxelSet):
        cov = resolve_covariogram(shape)
        return f"fixed h={shape.spacing:g}", [shape.spacing] * len(grid), \
            lambda i: cov
    h0 = h0 or shape.diameter / 256.0
    small = _small_params(grid, small_mode)
    hs = [min(h0, s / 4.0) if s > 0 else h0 for s in small]
    cache = {}

    def make(i):
        h = hs[i]
        if h not in cache:
            cache[h] = resolve_covariogram(shape, h)
        return cache[h]

    return "min(h0, param/4)", hs, make


def _default_target(fam, shape, regime):
    if regime in ("classical_uniform", "lebesgue", "slow_var"):
        return limit_target(regime, shape=shape)
    if regime == "classical_mu":
        mu = sphere_projection(fam, fam_extreme_hint(fam))
        return limit_target(regime, shape=shape, mu=mu)
    if regime in ("j_kernel", "j_total_mass"):
        return limit_target(regime, shape=shape, kernel=fam.base.kernel)
    if regime in ("aniso_moment_body", "aniso_volume"):
        return limit_target(regime, shape=shape, body=fam.base.body)
    raise ValueError(f"no default target for {regime!r}")


def fam_extreme_hint(fam):
    """A representative parameter for angular-marginal extraction (the
    marginal is parameter-free for all product families)."""
    return 0.5 if fam.rule == "alpha_family" else 1.0


def aniso_sweep(body, shape, direction, grid, q=None, threads=None):
    """(1-alpha) Per_alpha(E, K) -> Per(E, ZK), or alpha Per_alpha(E, K) ->
    d |K| |E|, driven by the gauge-weighted stable measures."""
    if direction not in ("alpha_up", "alpha_down"):
        raise ValueError("direction must be alpha_up or alpha_down")
    up = direction == "alpha_up"
    fam = ScalingFamily(anisotropic_stable_measure(body, 0.5), "alpha_family",
                        normalization_mode="cap_at_one" if up else "tail_at_one")
    regime = "aniso_moment_body" if up else "aniso_volume"
    return sweep(fam, shape, regime, grid, q=q, threads=threads)


def aniso_sobolev_sweep(levels, body, grid, q=None, h=1.0 / 64.0,
                        threads=None):
    """(1-alpha) * int int |u(x+y)-u(x)| / ||y||_K^{d+alpha} -> 2 ||u||_BV,ZK.

    ``levels`` is a list of (shape, coefficient) with nested shapes
    (each contained in the previous) and positive coefficients, describing
    u = sum_k c_k 1_{shape_k}; the target is the co-area sum
    2 sum_k c_k Per(shape_k, ZK).
    """
    shapes = [s for s, _ in levels]
    coeffs = [float(c) for _, c in levels]
    if any(c <= 0 for c in coeffs):
        raise ValueError("nested-level coefficients must be positive")
    target_value = 2.0 * sum(
        c * convex.perimeter_wrt_moment_body(s, body)
        for s, c in zip(shapes, coeffs))
    target = LimitTarget("sobolev_aniso", target_value)
    u = _nested_step_function(shapes, coeffs, h)
    fam = ScalingFamily(anisotropic_stable_measure(body, 0.5), "alpha_family",
                        normalization_mode="cap_at_one")
    gates = _check_gates(fam, grid, "zero")
    rows = _run_points(
        fam, grid,
        lambda i, m: _scaled(f_nu(u, m, q), 2.0),
        "one_minus_alpha", threads)
    c_eps, per_v, per_e, norm, errs, runtimes = zip(*rows)
    h_vals = [getattr(u.pieces[0][0], "spacing", math.nan)] * len(grid)
    return SweepResult("sobolev_aniso", grid, _small_params(grid, "to_one"),
                       c_eps, per_v, per_e, norm, runtimes, list(errs),
                       target, gates, f"fixed h={h:g}", h_vals)


def _scaled(res, factor):
    res.value *= factor
    res.err *= factor
    return res


def _nested_step_function(shapes, coeffs, h):
    """u = sum c_k 1_{shape_k} as disjoint step pieces (outermost rings)."""
    d = shapes[0].d
    cum = np.cumsum(coeffs)
    if d == 1:
        pieces = []
        for k, s in enumerate(shapes):
            region = s
            if k + 1 < len(shapes):
                lo, hi = s.bounding_box()
                region = s.intersect(
                    shapes[k + 1].complement_within(lo[0] - 1.0, hi[0] + 1.0))
            if region is not None:
                pieces.append((region, cum[k]))
        return StepFunction(pieces)
    base = rasterize(shapes[0], h)
    from .geometry import VoxelSet
    centers = _centers(base)
    masks = [s.contains(centers).reshape(base.mask.shape) for s in shapes]
    pieces = []
    for k in range(len(shapes)):
        m = masks[k] & ~(masks[k + 1] if k + 1 < len(shapes)
                         else np.zeros_like(masks[k]))
        if m.any():
            pieces.append((VoxelSet(m, base.spacing, base.origin), cum[k]))
    return StepFunction(pieces)


def _centers(v):
    axes = [v.origin[i] + v.spacing * (np.arange(v.mask.shape[i]) + 0.5)
            for i in range(v.d)]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([g.reshape(-1) for g in grids])


def dyadic_divergence_study(alphas=(0.5, 0.9, 0.99), n_max=40,
                            mixture_ns=(4, 16, 64, 256, 1024)):
    """Perimeter of the dyadic interval family along alpha and along the
    mixed measures nu_n = nu_{1/n} + c_n nu_{1-1/n}.

    Every value is exact (piecewise-linear autocorrelation against power
    antiderivatives), so the divergence/boundedness trichotomy in the
    classification is arithmetic, not quadrature luck:
      c_n = n^-1: the n^2-growth of Per_{nu_{1-1/n}} wins -> divergent;
      c_n = n^-2: the two rates cancel -> bounded;
      c_n = n^-3: the heavy term dies -> Per_{nu_n} -> |E| = 1.
    Caveat: the set is truncated at n_max intervals (doubles cannot even
    represent n + 2^-n beyond n ~ 52), which caps Per_{nu_{1-1/n}} once
    1 - 1/n needs more intervals than that to resolve; heavy-term limits
    quoted for the infinite set (e.g. 1 + 1/log 2 for c_n = n^-2) are
    therefore visible only at moderate n.
    """
    out = {
        "alphas": list(alphas),
        "per_nu": [dyadic_per_nu_exact(a, n_max) for a in alphas],
    }
    mixtures = {}
    for expo, name in ((1, "n^-1"), (2, "n^-2"), (3, "n^-3")):
        series = []
        for n in mixture_ns:
            light = dyadic_per_nu_exact(1.0 / n, n_max)
            heavy = dyadic_per_nu_exact(1.0 - 1.0 / n, n_max)
            series.append(light + float(n) ** (-expo) * heavy)
        mixtures[name] = {
            "n": list(mixture_ns),
            "per_nu": series,
            "classification": _classify_mixture(series),
        }
    out["mixtures"] = mixtures
    return out


def _classify_mixture(series):
    """divergent / convergent (to |E| = 1) / bounded, judged from the series.

    Growth may decelerate late in the grid (the truncated set caps the
    heavy term once the interval count stops resolving 1 - 1/n), so
    divergence is judged on overall growth, not the last increment.
    """
    s = np.asarray(series, float)
    if np.all(np.diff(s) > 0) and s[-1] > 4.0 * s[0]:
        return "divergent"
    if abs(s[-1] - 1.0) < 0.1 and abs(s[-1] - s[-2]) < abs(s[-2] - s[-3]):
        return "convergent"
    return "bounded"
