"""Nonlocal perimeters and total-variation energies.

Per_nu(E) = int |E intersect (E + y)^c| nu(dy) is computed through the
covariogram identity Per_nu(E) = int (g(0) - g(y)) nu(dy): exact covariogram
where the geometry allows one, FFT covariogram otherwise, and the singular
radial quadrature from ``quadrature``.  The same engine drives the
piecewise-constant energy f_nu, its co-area counterpart, and the symmetric
double-integral check.

``per_nu_mc_oracle`` is an independent Monte Carlo evaluation of the raw
double integral using only membership tests -- no covariograms, no shared
code path with the quadrature -- so agreement between the two is meaningful
evidence, not bookkeeping.
"""

import math

import numpy as np

from . import convex
from .errors import NonAdmissibleError, UnsupportedShapeError
from .geometry import (Ball, Box, Covariogram, IntervalUnion, Polygon,
                       VoxelSet, covariogram_exact, covariogram_grid,
                       classical_perimeter, cross_covariogram_grid, dyadic_set,
                       rasterize)
from .measures import (MeasureSpec, admissibility_check, fractional_measure,
                       kernel_measure, tail_mass)
from .quadrature import (DifferenceFn, QuadratureSpec, from_covariogram,
                         integrate_difference, power_integral_piecewise_linear)


class PerimeterResult:
    """value +- err with a per-region breakdown.

    For quadrature results err is the engine's error budget *for the
    integral of the supplied covariogram*; rasterization error is governed
    separately by the grid spacing.  For Monte Carlo results err is one
    standard error plus the analytic near-origin bias bound, and the
    breakdown carries the two separately.
    """

    def __init__(self, value, err, breakdown, method):
        self.value = float(value)
        self.err = float(err)
        self.breakdown = breakdown
        self.method = method

    @property
    def rel_err(self):
        return self.err / abs(self.value) if self.value else math.inf

    def __repr__(self):
        return (f"PerimeterResult({self.value:.10g} +- {self.err:.2e}, "
                f"{self.method})")


def resolve_covariogram(shape, h=None):
    """Covariogram for a shape: closed form if available, else FFT grid."""
    if isinstance(shape, Covariogram):
        return shape
    if isinstance(shape, (IntervalUnion, Ball, Box)):
        return covariogram_exact(shape)
    if isinstance(shape, VoxelSet):
        return covariogram_grid(shape)
    if isinstance(shape, Polygon):
        h = h or shape.diameter / 256.0
        return covariogram_grid(rasterize(shape, h))
    raise UnsupportedShapeError(f"no covariogram for {type(shape).__name__}")


def per_nu(shape, m, q=None, h=None):
    """Nonlocal perimeter of a shape (or prebuilt Covariogram) against nu."""
    ok, _ = admissibility_check(m)
    if not ok:
        raise NonAdmissibleError("measure fails the (1 ^ |x|) test")
    cov = resolve_covariogram(shape, h)
    if cov.d != m.d:
        raise ValueError("shape and measure dimensions differ")
    res = integrate_difference(from_covariogram(cov), m, q)
    return PerimeterResult(res["value"], res["err"], res["breakdown"],
                           "spectral-quadrature")


def per_nu_interval_exact(iu, m):
    """Exact Per_nu for interval unions against power-profile measures.

    The autocorrelation of a finite interval union is piecewise linear with
    knots at pairwise endpoint differences, so the radial integral is a sum
    of elementary antiderivatives -- no quadrature anywhere.
    """
    spec = m.spectral()
    if spec is None or m.d != 1:
        raise ValueError("exact path needs a one-dimensional spectral measure")
    profile, eta = spec
    cov = covariogram_exact(iu)
    knots, gvals = cov.piecewise
    return power_integral_piecewise_linear(
        knots, cov.volume - gvals, profile, eta_total=eta.total_mass())


def frac_perimeter(shape, alpha, q=None, h=None):
    """Fractional perimeter: kernel |y|^(-d-alpha), no prefactor."""
    d = getattr(shape, "d")
    return per_nu(shape, fractional_measure(d, alpha), q, h)


def j_perimeter(shape, kernel, q=None, h=None):
    """Perimeter against nu(dy) = J(y) dy."""
    return per_nu(shape, kernel_measure(kernel), q, h)


def frac_perimeter_interval(alpha):
    """Closed form 2 / (alpha (1 - alpha)) for the unit interval."""
    return 2.0 / (alpha * (1.0 - alpha))


# ---------------------------------------------------------------------------
# Monte Carlo oracle
# ---------------------------------------------------------------------------

def _sample_directions(eta, rng, n):
    d = eta.d
    if eta.kind == "atoms":
        th, w = eta.atoms
        idx = rng.choice(th.shape[0], size=n, p=w / np.sum(w))
        return th[idx]
    if eta.kind == "uniform":
        if d == 1:
            return np.where(rng.random(n) < 0.5, 1.0, -1.0)[:, None]
        z = rng.standard_normal((n, d))
        return z / np.linalg.norm(z, axis=1, keepdims=True)
    # gauge weighted: rejection against the uniform direction law
    R0 = convex.outradius(eta.body)
    out = np.empty((n, d))
    got = 0
    while got < n:
        todo = max(n - got, 1024)
        z = rng.standard_normal((todo, d))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        g = convex.gauge_norm(eta.body, z)
        accept = rng.random(todo) < (g * R0) ** (-eta.exponent)
        take = min(int(np.sum(accept)), n - got)
        out[got:got + take] = z[accept][:take]
        got += take
    return out


def _head_mass(delta0, s, pre, u1):
    """pre * int_{delta0}^{u1} r^{s-1} dr, with the s = 0 log branch."""
    if abs(s) < 1e-12:
        return pre * math.log(u1 / delta0)
    return pre * (u1 ** s - delta0 ** s) / s


def _power_quantile(v, delta0, gamma, alpha, pre, r_cut):
    """Inverse CDF of the tilted radial proposal (1^r)^gamma * rho on
    [delta0, r_cut]; v is the cumulative *mass* (not normalized)."""
    s = gamma - alpha
    u1 = min(1.0, r_cut)
    m1 = _head_mass(delta0, s, pre, u1)
    v = np.asarray(v, float)
    r = np.empty_like(v)
    head = v <= m1
    if abs(s) < 1e-12:
        r[head] = delta0 * np.exp(v[head] / pre)
    else:
        r[head] = (delta0 ** s + v[head] * s / pre) ** (1.0 / s)
    if np.any(~head):
        w = v[~head] - m1
        r[~head] = (1.0 - w * alpha / pre) ** (-1.0 / alpha)
    return r


def _proposal_mass(delta0, gamma, alpha, pre, r_cut):
    z = _head_mass(delta0, gamma - alpha, pre, min(1.0, r_cut))
    if r_cut > 1.0:
        z += pre * (1.0 - r_cut ** (-alpha)) / alpha
    return z


def per_nu_mc_oracle(shape, m, samples=1_000_000, seed=0, n_strata=64):
    """Monte Carlo estimate of Per_nu(E) from the raw double integral.

    Samples x uniformly in the bounding box and y from an importance
    proposal; the integrand is the membership product 1_E(x) 1_{E^c}(x+y).
    The geometry-free far field |y| > diam(E), where the inner integral is
    exactly |E|, is added in closed form.  For heavy radial weights
    (alpha >= 1/2) the proposal cannot have finite variance on (0, diam]
    (the classical obstruction), so the radius is truncated at delta0,
    chosen to balance the analytic bias bound L * int_0^delta0 r rho(dr)
    (reported in err) against the variance growth of the truncated weight;
    equal-mass radial strata keep the empirical standard error honest.
    """
    d = m.d
    if getattr(shape, "d") != d:
        raise ValueError("shape and measure dimensions differ")
    rng = np.random.default_rng(seed)
    lo, hi = shape.bounding_box()
    vbox = float(np.prod(hi - lo))
    vol = shape.volume
    diam = shape.diameter
    lip_half = 0.5 * classical_perimeter(shape)

    if m.kind == "kernel" and m.kernel.sampler is not None:
        return _mc_kernel(shape, m.kernel, samples, rng, vbox, vol, diam, lo, hi)

    spec = m.spectral()
    if spec is None:
        raise UnsupportedShapeError(
            "oracle needs a spectral measure or a kernel with a sampler")
    profile, eta = spec
    eta_total = eta.total_mass()
    far = vol * profile.tail(diam) * eta_total

    if profile.kind == "atoms":
        r_at, w_at = profile.quad_nodes(0.0, diam)
        mass_core = float(np.sum(w_at))
        if mass_core == 0.0:
            return PerimeterResult(far, 0.0,
                                   dict(core=0.0, far=far, stderr=0.0,
                                        bias_bound=0.0, n=0), "mc")
        idx = rng.choice(r_at.size, size=samples, p=w_at / mass_core)
        radii = r_at[idx]
        thetas = _sample_directions(eta, rng, samples)
        y = radii[:, None] * thetas
        x = lo + (hi - lo) * rng.random((samples, d))
        hit = shape.contains(x) & ~shape.contains(x + y)
        contrib = vbox * mass_core * eta_total * hit.astype(float)
        core = float(np.mean(contrib))
        stderr = float(np.std(contrib, ddof=1) / math.sqrt(samples))
        return PerimeterResult(core + far, stderr,
                               dict(core=core, far=far, stderr=stderr,
                                    bias_bound=0.0, n=samples), "mc")

    if profile.kind != "power":
        raise UnsupportedShapeError(
            "oracle supports power/atom profiles and sampler kernels")

    alpha, pre = profile.alpha, profile.prefactor
    gamma = 0.5 if alpha < 0.45 else 0.5 * (1.0 + alpha)
    # delta0 balances truncation bias ~ delta0^(1-alpha) against the
    # truncated-variance growth stderr ~ delta0^(-(gamma+alpha-1)/2)/sqrt(n);
    # equating the two exponents in n gives the rule below.  Both terms are
    # reported (bias_bound enters err), so the choice only tunes sharpness.
    s_bias = 1.0 - alpha
    s_var = max(0.0, 0.5 * (gamma + alpha - 1.0))
    delta0 = float(samples) ** (-1.0 / (2.0 * (s_bias + s_var)))
    delta0 = float(np.clip(delta0, 1e-250, 0.25 * diam))
    bias = lip_half * pre * eta_total * delta0 ** (1.0 - alpha) / (1.0 - alpha)

    z = _proposal_mass(delta0, gamma, alpha, pre, diam)
    k = int(n_strata)
    n_per = max(1, samples // k)
    sums = np.zeros(k)
    sqsums = np.zeros(k)
    for s_idx in range(k):
        v = (s_idx + rng.random(n_per)) * (z / k)
        radii = _power_quantile(v, delta0, gamma, alpha, pre, diam)
        thetas = _sample_directions(eta, rng, n_per)
        y = radii[:, None] * thetas
        x = lo + (hi - lo) * rng.random((n_per, d))
        hit = shape.contains(x) & ~shape.contains(x + y)
        w = vbox * z * eta_total * np.minimum(radii, 1.0) ** (-gamma)
        contrib = np.where(hit, w, 0.0)
        sums[s_idx] = np.sum(contrib)
        sqsums[s_idx] = np.sum(contrib * contrib)
    means = sums / n_per
    core = float(np.mean(means))
    var_s = (sqsums - n_per * means ** 2) / max(n_per - 1, 1)
    stderr = float(math.sqrt(max(np.sum(var_s / n_per), 0.0)) / k)
    return PerimeterResult(core + far, stderr + bias,
                           dict(core=core, far=far, stderr=stderr,
                                bias_bound=bias, n=k * n_per,
                                gamma=gamma, delta0=delta0), "mc")


def _mc_kernel(shape, kernel, samples, rng, vbox, vol, diam, lo, hi):
    total = kernel.total_mass
    if total is None:
        raise NonAdmissibleError("kernel oracle needs finite total mass")
    tail = float(kernel.tail_fn(diam)) if kernel.tail_fn is not None else 0.0
    far = vol * tail
    mass_core = total - tail
    got = 0
    y = np.empty((samples, kernel.d))
    while got < samples:  # resample the far tail away; it is exact already
        draw = kernel.sampler(rng, samples - got)
        keep = np.linalg.norm(draw, axis=1) <= diam
        take = int(np.sum(keep))
        y[got:got + take] = draw[keep]
        got += take
    x = lo + (hi - lo) * rng.random((samples, kernel.d))
    hit = shape.contains(x) & ~shape.contains(x + y)
    contrib = vbox * mass_core * hit.astype(float)
    core = float(np.mean(contrib))
    stderr = float(np.std(contrib, ddof=1) / math.sqrt(samples))
    return PerimeterResult(core + far, stderr,
                           dict(core=core, far=far, stderr=stderr,
                                bias_bound=0.0, n=samples), "mc")


# ---------------------------------------------------------------------------
# piecewise-constant functions: f_nu and the co-area side
# ---------------------------------------------------------------------------

class StepFunction:
    """u = sum_k c_k 1_{A_k} with disjoint regions and nonzero values.

    Regions are all IntervalUnion (d = 1) or all VoxelSet on one common grid
    (d <= 3).  u vanishes outside the union; superlevel sets therefore have
    finite measure only for positive thresholds, and the co-area route
    requires every c_k > 0.
    """

    def __init__(self, pieces):
        if not pieces:
            raise ValueError("need at least one piece")
        self.pieces = [(region, float(c)) for region, c in pieces]
        kinds = {type(r) for r, _ in self.pieces}
        if len(kinds) != 1 or not (kinds <= {IntervalUnion, VoxelSet}):
            raise ValueError("regions must be all IntervalUnion or all VoxelSet")
        self.d = self.pieces[0][0].d
        if any(c == 0.0 for _, c in self.pieces):
            raise ValueError("zero-valued pieces are not pieces")
        regions = [r for r, _ in self.pieces]
        if isinstance(regions[0], VoxelSet):
            ref = regions[0]
            for r in regions[1:]:
                if (r.mask.shape != ref.mask.shape
                        or abs(r.spacing - ref.spacing) > 1e-15
                        or not np.allclose(r.origin, ref.origin)):
                    raise ValueError("voxel regions must share one grid")
            acc = np.zeros(ref.mask.shape, dtype=int)
            for r in regions:
                acc += r.mask
            if acc.max() > 1:
                raise ValueError("regions must be disjoint")
        else:
            for i, a in enumerate(regions):
                for b in regions[i + 1:]:
                    if a.intersect(b) is not None:
                        raise ValueError("regions must be disjoint")

    @classmethod
    def indicator(cls, region, c=1.0):
        return cls([(region, c)])

    def values(self):
        return sorted({c for _, c in self.pieces})

    def superlevel(self, t):
        """The region {u > t} (None when empty)."""
        keep = [r for r, c in self.pieces if c > t]
        if not keep:
            return None
        if isinstance(keep[0], VoxelSet):
            mask = np.zeros(keep[0].mask.shape, dtype=bool)
            for r in keep:
                mask |= r.mask
            return VoxelSet(mask, keep[0].spacing, keep[0].origin)
        out = keep[0]
        for r in keep[1:]:
            out = out.union(r)
        return out


def _pair_correlograms(u, h=None):
    """Cross-correlation evaluators X_ij(y) = |A_j ^ (A_i - y)| plus bounds.

    Returns (evals, sup, lips, breaks, linear_scale): ``breaks`` holds the
    radii where some X_ij kinks (endpoint differences; exact for interval
    unions, None for sampled voxel grids where ``linear_scale`` is the grid
    spacing instead).
    """
    regions = [r for r, _ in u.pieces]
    n = len(regions)
    if isinstance(regions[0], IntervalUnion):
        def make(i, j):
            return lambda y: regions[i].overlap_with_translate(regions[j], y[:, 0])
        sup = np.zeros((n, n))
        lips = np.zeros(n)
        for i, r in enumerate(regions):
            lips[i] = float(r.n_components)
        for i in range(n):
            for j in range(n):
                (la, ha), (lb, hb) = regions[i].bounding_box(), regions[j].bounding_box()
                sup[i, j] = max(abs(ha[0] - lb[0]), abs(hb[0] - la[0]))
        evals = [[make(i, j) for j in range(n)] for i in range(n)]
        ends = np.concatenate([r.intervals.reshape(-1) for r in regions])
        diffs = np.abs(ends[:, None] - ends[None, :]).reshape(-1)
        breaks = np.unique(diffs[diffs > 1e-300])
        lin = float(breaks[0]) if breaks.size else None
        return evals, sup, lips, breaks, lin
    covs = [[cross_covariogram_grid(regions[i], regions[j])
             for j in range(n)] for i in range(n)]
    sup = np.array([[covs[i][j].support_radius for j in range(n)]
                    for i in range(n)])
    lips = np.array([0.5 * classical_perimeter(r) for r in regions])
    evals = [[covs[i][j] for j in range(n)] for i in range(n)]
    return evals, sup, lips, None, regions[0].spacing


def f_nu(u, m, q=None):
    """F_nu(u) = 1/2 int int |u(x + y) - u(x)| dx nu(dy) for step functions.

    The inner integral expands into cross correlations of the regions; the
    resulting difference function is fed to the same singular quadrature as
    the perimeters (the far value is 2 sum |c_k| |A_k|).
    """
    if u.d != m.d:
        raise ValueError("dimension mismatch")
    evals, sup, lips, breaks, lin = _pair_correlograms(u)
    cvals = np.array([c for _, c in u.pieces])
    vols = np.array([r.volume for r, _ in u.pieces])
    n = cvals.size
    far = 2.0 * float(np.sum(np.abs(cvals) * vols))

    def D(pts):
        out = np.full(pts.shape[0], 0.0)
        xs = {}
        for i in range(n):
            for j in range(n):
                xs[(i, j)] = np.asarray(evals[i][j](pts), float)
        for j in range(n):
            row_sum = np.zeros(pts.shape[0])
            col_sum = np.zeros(pts.shape[0])
            for i in range(n):
                row_sum += xs[(i, j)]
                col_sum += xs[(j, i)]
                if i != j:
                    out += abs(cvals[i] - cvals[j]) * xs[(i, j)]
            out += abs(cvals[j]) * (vols[j] - row_sum)
            out += abs(cvals[j]) * (vols[j] - col_sum)
        return np.clip(out, 0.0, None)

    lip = float(np.sum((np.abs(cvals)[:, None] + np.abs(cvals)[None, :]
                        + np.abs(cvals[:, None] - cvals[None, :]))
                       * np.minimum(lips[:, None], lips[None, :])))
    G = DifferenceFn(u.d, D, far_value=far, support_radius=float(sup.max()),
                     lipschitz=lip, linear_scale=lin, breakpoints=breaks)
    res = integrate_difference(G, m, q)
    return PerimeterResult(0.5 * res["value"], 0.5 * res["err"],
                           res["breakdown"], "spectral-quadrature")


def coarea_rhs(u, m, q=None):
    """int_0^inf Per_nu({u > t}) dt for nonnegative step functions.

    Exact in t (the integrand is constant between consecutive values), so it
    differs from f_nu only by the perimeters' quadrature error.
    """
    vals = u.values()
    if vals[0] < 0:
        raise ValueError("co-area route needs u >= 0")
    levels = [0.0] + list(vals)
    total, err = 0.0, 0.0
    terms = []
    for prev, cur in zip(levels[:-1], levels[1:]):
        gap = cur - prev
        region = u.superlevel(prev)
        res = per_nu(region, m, q)
        total += gap * res.value
        err += gap * res.err
        terms.append((cur, res.value))
    return PerimeterResult(total, err, dict(levels=terms), "coarea")


# ---------------------------------------------------------------------------
# symmetric-difference form
# ---------------------------------------------------------------------------

def symmetry_check(shape, m, window, q=None, h=None):
    """Compare int |E ^ (E+y)^c| nu(dy) with int |E^c ^ (E+y)| nu(dy).

    The complement is taken inside the window W (>= E plus the margin); for
    |y| beyond the margin the true inner integral equals |E| exactly and is
    added in closed form, with the handover band's mass reported into err.
    Returns dict(lhs, rhs, gap, err).
    """
    lhs = per_nu(shape, m, q, h)
    d = m.d
    lo_w, hi_w = window.bounding_box()
    lo_e, hi_e = shape.bounding_box()
    margin = float(min(np.min(lo_e - lo_w), np.min(hi_w - hi_e)))
    if margin <= 0:
        raise ValueError("window must strictly contain the shape")
    breaks = None
    lin = None
    if d == 1:
        comp = shape.complement_within(lo_w[0], hi_w[0])
        vol = shape.measure

        def R(pts):
            return comp.overlap_with_translate(shape, pts[:, 0])

        lip = float(comp.n_components + shape.n_components)
        ends = np.concatenate([comp.intervals.reshape(-1),
                               shape.intervals.reshape(-1)])
        diffs = np.abs(ends[:, None] - ends[None, :]).reshape(-1)
        breaks = np.unique(diffs[diffs > 1e-300])
        lin = float(breaks[0]) if breaks.size else None
    else:
        h = h or shape.diameter / 256.0
        vw = rasterize(window, h)
        centers_mask = shape.contains(_cell_centers(vw)).reshape(vw.mask.shape)
        comp_mask = vw.mask & ~centers_mask
        e_vox = VoxelSet(centers_mask, vw.spacing, vw.origin) \
            if centers_mask.any() else None
        if e_vox is None:
            raise ValueError("shape rasterized to nothing at this spacing")
        comp = VoxelSet(comp_mask, vw.spacing, vw.origin)
        cov = cross_covariogram_grid(comp, e_vox)
        vol = e_vox.volume
        R = cov
        lip = cov.lipschitz
        lin = vw.spacing
    G = DifferenceFn(d, R, far_value=vol, support_radius=margin,
                     lipschitz=lip, linear_scale=lin, breakpoints=breaks)
    res = integrate_difference(G, m, q)
    rhs = res["value"]
    # the band (margin, margin + diam) was replaced by the exact limit |E|;
    # its worst-case discrepancy is |E| * nu(margin < |y| <= margin + diam)
    band = vol * (tail_mass(m, margin) - tail_mass(m, margin + shape.diameter))
    err = lhs.err + res["err"] + band
    return dict(lhs=lhs.value, rhs=rhs, gap=abs(lhs.value - rhs), err=err)


def _cell_centers(v):
    axes = [v.origin[i] + v.spacing * (np.arange(v.mask.shape[i]) + 0.5)
            for i in range(v.d)]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([g.reshape(-1) for g in grids])


# ---------------------------------------------------------------------------
# the dyadic interval family: exact values and closed forms
# ---------------------------------------------------------------------------

def dyadic_example_inner(alpha):
    """Self-overlap closed form of the inner dyadic integral.

    For E = union of [n, n + 2^-n] and the alpha-prefactored one-dimensional
    stable measure, the contribution of each interval overlapping *itself*
    to int_{|y| <= 1} (g(0) - g(y)) nu_alpha(dy) sums to geometric series:

        (2^a - 1) (1 + q/(1-q)) + a (2^(1-a) - 1)/(1-a) * q^2/(1-q)^2,

    q = 2^(a-1).  At alpha = 1/2 this equals 1 + 2 sqrt(2) ~= 3.82843.  It
    diverges like (1-alpha)^-2.  Neighboring intervals also overlap for
    y in (1/2, 1); that correction (about 2% at alpha = 1/2) is carried by
    dyadic_inner_exact, which evaluates the truncated set exactly.
    """
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise ValueError("need alpha in (0, 1)")
    qq = 2.0 ** (a - 1.0)
    term_ends = (2.0 ** a - 1.0) * (1.0 + qq / (1.0 - qq))
    term_slope = a * (2.0 ** (1.0 - a) - 1.0) / (1.0 - a) * qq ** 2 / (1.0 - qq) ** 2
    return term_ends + term_slope


def dyadic_inner_exact(alpha, n_max=40):
    """Exact int_{|y| <= 1} (g(0) - g(y)) nu_alpha(dy) for the truncated set.

    Elementary antiderivatives throughout: the self-overlap pieces on the
    dyadic shells (2^-n-1, 2^-n], the head below 2^-n_max where all n_max
    intervals contribute slope n_max, and the adjacent-pair overlap ramps on
    (1 - 2^-m, 1].
    """
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise ValueError("need alpha in (0, 1)")
    N = int(n_max)
    total = (1.0 - 2.0 ** (-N)) * (2.0 ** a - 1.0)  # shell n = 0
    for n in range(1, N):
        shell = (2.0 ** (-n) - 2.0 ** (-N)) * (2.0 ** a - 1.0) * 2.0 ** (n * a)
        shell += (a * n * (2.0 ** (1.0 - a) - 1.0) / (1.0 - a)
                  * 2.0 ** (-(n + 1) * (1.0 - a)))
        total += shell
    total += a * N * 2.0 ** (-N * (1.0 - a)) / (1.0 - a)  # head below 2^-N
    # adjacent-pair overlaps: intervals n and n+1 meet for y in (1-2^-n, 1]
    for n in range(1, N):
        lo = 1.0 - 2.0 ** (-n)
        mid = 1.0 - 2.0 ** (-n - 1)
        ramp = a * ((mid ** (1.0 - a) - lo ** (1.0 - a)) / (1.0 - a)
                    - lo * (lo ** (-a) - mid ** (-a)) / a)
        flat = 2.0 ** (-n - 1) * (mid ** (-a) - 1.0)
        total -= ramp + flat
    return total


def dyadic_per_nu_exact(alpha, n_max=40):
    """Exact Per_{nu_alpha} of the truncated dyadic set (alpha-prefactored
    measure), via the piecewise-linear autocorrelation antiderivatives."""
    from .measures import levy_measure
    return per_nu_interval_exact(dyadic_set(n_max), levy_measure(1, alpha))
