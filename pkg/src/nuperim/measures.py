"""Interaction measures in spectral (radial x spherical) form.

A measure nu on R^d \\ {0} enters every perimeter functional only through
integrals of bounded radial-ish integrands, so the package represents nu by

* a ``RadialProfile`` rho on (0, inf): a pure power  prefactor * r^(-1-alpha) dr,
  a tabulated density, or finitely many atoms, and
* a ``SphericalMeasure`` eta on S^{d-1}: the uniform probability measure,
  atoms, or a gauge-weighted density ||theta||_K^(-p) sigma(dtheta),

with nu(f) = int_0^inf int_S f(r theta) eta(dtheta) rho(dr).  Kernel measures
J(x) dx are kept as kernels; radially symmetric ones reduce to the spectral
form with rho(dr) = kappa_{d-1} r^{d-1} J(r) dr and eta uniform.

Admissibility here means int (1 ^ |x|) nu(dx) < inf and nu({0}) = 0; the
scaling families and their normalization constants implement the small-scale
rescalings whose limits the asymptotics module chases.
"""

import math

import numpy as np
from scipy.special import gamma, gammaincc, roots_legendre

from . import convex
from .constants import sphere_area
from .errors import NonAdmissibleError

_LOG_GL_ORDER = 12


def _pow_diff(a, b, s):
    """b**s - a**s computed stably for 0 < a <= b, s != 0."""
    if a == 0.0:
        return b ** s
    return a ** s * math.expm1(s * math.log(b / a))


def _log_gl_nodes(a, b, per_decade=24, order=_LOG_GL_ORDER):
    """Gauss-Legendre nodes/weights for int_a^b f(r) dr on a log grid.

    Substituting r = e^t turns power singularities into smooth exponentials;
    weights returned already include the dr = e^t dt factor.
    """
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    ta, tb = math.log(a), math.log(b)
    decades = (tb - ta) / math.log(10.0)
    n_panels = max(1, math.ceil(decades * per_decade / order))
    edges = np.linspace(ta, tb, n_panels + 1)
    x, w = roots_legendre(order)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    t = (mid[:, None] + half[:, None] * x[None, :]).reshape(-1)
    wt = (half[:, None] * w[None, :]).reshape(-1)
    r = np.exp(t)
    return r, wt * r


class RadialProfile:
    """Radial factor rho(dr) of a spectral measure; see module docstring."""

    def __init__(self, kind, alpha=None, prefactor=1.0, density=None,
                 support=(0.0, math.inf), tail_fn=None, inner_exponent=None,
                 atoms=None):
        self.kind = kind
        self.alpha = alpha
        self.prefactor = float(prefactor)
        self.density = density
        self.support = (float(support[0]), float(support[1]))
        self.tail_fn = tail_fn
        self.inner_exponent = inner_exponent
        self.atoms = None
        if atoms is not None:
            arr = np.asarray(atoms, float).reshape(-1, 2)
            if np.any(arr[:, 0] <= 0):
                raise ValueError("atoms must sit at positive radii "
                                 "(no mass at the origin)")
            if np.any(arr[:, 1] < 0):
                raise ValueError("atom weights must be nonnegative")
            self.atoms = arr[np.argsort(arr[:, 0])]
        if kind == "power" and not (alpha is not None and 0.0 < alpha < 1.0):
            raise ValueError("power profiles need alpha in (0, 1)")
        if kind == "density" and density is None:
            raise ValueError("density profiles need a density callable")
        if kind == "atoms" and self.atoms is None:
            raise ValueError("atom profiles need atoms")

    # -- integrals ---------------------------------------------------------

    def mass(self, a, b):
        """rho((a, b])  (b may be inf)."""
        return self.moment(0, a, b)

    def moment(self, k, a, b):
        """int_a^b r^k rho(dr)   for k >= 0 (k > alpha required if b = inf)."""
        a = max(0.0, float(a))
        b = float(b)
        if b <= a:
            return 0.0
        if self.kind == "power":
            s = k - self.alpha
            if math.isinf(b):
                if s >= 0:
                    raise NonAdmissibleError(
                        f"moment r^{k} of a power profile diverges at infinity")
                if a <= 0.0:
                    raise NonAdmissibleError(
                        f"moment r^{k} of a power profile diverges at zero")
                return self.prefactor * a ** s / (-s)
            if s == 0:
                return self.prefactor * math.log(b / max(a, 1e-300))
            if a == 0.0:
                if s < 0:
                    raise NonAdmissibleError(
                        f"moment r^{k} of a power profile diverges at zero")
                return self.prefactor * b ** s / s
            return self.prefactor * _pow_diff(a, b, s) / s
        if self.kind == "atoms":
            r, w = self.atoms[:, 0], self.atoms[:, 1]
            sel = (r > a) & (r <= b)
            return self.prefactor * float(np.sum(w[sel] * r[sel] ** k))
        # density
        lo, hi = self.support
        a = max(a, lo)
        b = min(b, hi)
        if math.isinf(b):
            if self.tail_fn is None:
                raise NonAdmissibleError(
                    "density profile without tail_fn cannot integrate to inf")
            if k == 0:
                return self.prefactor * float(self.tail_fn(a)) if a > lo else \
                    self.prefactor * float(self.tail_fn(max(a, lo)))
            raise NonAdmissibleError("weighted tails need a finite cutoff")
        if b <= a:
            return 0.0
        head = 0.0
        if a <= 0.0:
            a_eff = b * 1e-14
            q = self.inner_exponent if self.inner_exponent is not None else 0.0
            if k + q + 1.0 <= 0.0:
                raise NonAdmissibleError(
                    f"moment r^{k} diverges at the origin (density ~ r^{q:g})")
            c = float(self.density(np.array([a_eff]))[0]) * a_eff ** (-q)
            head = c * a_eff ** (k + q + 1.0) / (k + q + 1.0)
            a = a_eff
        r, w = _log_gl_nodes(a, b)
        val = float(np.sum(w * r ** k * self.density(r)))
        return self.prefactor * (val + head)

    def tail(self, s):
        """rho((max(s, 0), inf))."""
        s = max(0.0, float(s))
        if self.kind == "power":
            if s == 0.0:
                return math.inf
            return self.prefactor * s ** (-self.alpha) / self.alpha
        if self.kind == "atoms":
            r, w = self.atoms[:, 0], self.atoms[:, 1]
            return self.prefactor * float(np.sum(w[r > s]))
        lo, hi = self.support
        if self.tail_fn is not None:
            return self.prefactor * float(self.tail_fn(max(s, lo)))
        if math.isinf(hi):
            raise NonAdmissibleError(
                "density profile with unbounded support needs tail_fn")
        return self.mass(s, hi)

    def quad_nodes(self, a, b, per_decade=24, order=_LOG_GL_ORDER):
        """Nodes/weights with int_a^b F(r) rho(dr) ~= sum w_i F(r_i).

        For atom profiles this is exact (the atoms in range).
        """
        if self.kind == "atoms":
            r, w = self.atoms[:, 0], self.atoms[:, 1]
            sel = (r > a) & (r <= b)
            return r[sel], self.prefactor * w[sel]
        lo, hi = self.support if self.kind == "density" else (0.0, math.inf)
        a, b = max(a, lo), min(b, hi)
        if b <= a:
            return np.empty(0), np.empty(0)
        r, w = _log_gl_nodes(a, b, per_decade, order)
        if self.kind == "power":
            dens = self.prefactor * r ** (-1.0 - self.alpha)
        else:
            dens = self.prefactor * self.density(r)
        return r, w * dens


def power_profile(alpha, prefactor=1.0):
    return RadialProfile("power", alpha=alpha, prefactor=prefactor)


def density_profile(density, support=(0.0, math.inf), tail_fn=None,
                    inner_exponent=None, prefactor=1.0):
    return RadialProfile("density", density=density, support=support,
                         tail_fn=tail_fn, inner_exponent=inner_exponent,
                         prefactor=prefactor)


def atom_profile(atoms, prefactor=1.0):
    return RadialProfile("atoms", atoms=atoms, prefactor=prefactor)


# ---------------------------------------------------------------------------
# spherical part
# ---------------------------------------------------------------------------

class SphericalMeasure:
    """Measure eta on S^{d-1}: uniform probability, atoms, or gauge-weighted.

    Gauge-weighted means weight_scale * ||theta||_K^(-exponent) sigma(dtheta),
    *not* normalized (set weight_scale to normalize).
    """

    def __init__(self, kind, d, atoms=None, body=None, exponent=None,
                 weight_scale=1.0):
        self.kind = kind
        self.d = d
        self.body = body
        self.exponent = exponent
        self.weight_scale = float(weight_scale)
        self.atoms = None
        if atoms is not None:
            thetas, weights = atoms
            thetas = np.atleast_2d(np.asarray(thetas, float))
            weights = np.asarray(weights, float).reshape(-1)
            norms = np.linalg.norm(thetas, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-9):
                raise ValueError("atom directions must be unit vectors")
            self.atoms = (thetas, weights)
        if kind == "gauge_weighted" and (body is None or exponent is None):
            raise ValueError("gauge weighting needs a body and an exponent")
        if kind == "atoms" and self.atoms is None:
            raise ValueError("atom measures need atoms")

    def rule(self, n=512, phase=0.0):
        """(thetas, weights) with int h d(eta) ~= sum w_j h(theta_j).

        Exact for atoms and for d = 1; midpoint (d = 2) and Gauss-Legendre x
        midpoint (d = 3) grids otherwise.  ``phase`` shifts the midpoint
        angles by that fraction of a cell (used to probe angular error by
        comparing against a rotated copy of the same rule; a half-cell shift
        flips the sign of the dominant aliased harmonic, so the difference
        sees errors that an interleaved subset would cancel on symmetric
        sets).
        """
        if self.kind == "atoms":
            return self.atoms
        d = self.d
        if d == 1:
            thetas = np.array([[1.0], [-1.0]])
            sig = np.array([1.0, 1.0])          # counting measure on S^0
            base_total = 2.0
        elif d == 2:
            phi = 2.0 * np.pi * (np.arange(n) + 0.5 + phase) / n
            thetas = np.column_stack([np.cos(phi), np.sin(phi)])
            sig = np.full(n, 2.0 * np.pi / n)
            base_total = 2.0 * np.pi
        elif d == 3:
            n_pol = max(8, int(round(math.sqrt(n / 2))))
            n_az = 2 * n_pol
            x, w = roots_legendre(n_pol)
            az = 2.0 * np.pi * (np.arange(n_az) + 0.5 + phase) / n_az
            s = np.sqrt(np.clip(1.0 - x ** 2, 0.0, None))
            thetas = np.empty((n_pol, n_az, 3))
            thetas[:, :, 0] = s[:, None] * np.cos(az)[None, :]
            thetas[:, :, 1] = s[:, None] * np.sin(az)[None, :]
            thetas[:, :, 2] = x[:, None]
            thetas = thetas.reshape(-1, 3)
            sig = (w[:, None] * np.full(n_az, 2.0 * np.pi / n_az)[None, :]).reshape(-1)
            base_total = 4.0 * np.pi
        else:
            raise ValueError("spheres supported for d = 1, 2, 3")
        if self.kind == "uniform":
            return thetas, sig / base_total
        # gauge weighted
        g = convex.gauge_norm(self.body, thetas)
        return thetas, self.weight_scale * sig * g ** (-self.exponent)

    def total_mass(self, n=512):
        if self.kind == "uniform":
            return 1.0
        if self.kind == "atoms":
            return float(np.sum(self.atoms[1]))
        if self.d == 2:
            def f(phi):
                th = np.column_stack([np.cos(phi), np.sin(phi)])
                return convex.gauge_norm(self.body, th) ** (-self.exponent)
            # lp-type gauges have fractional-order kinks at the axes, so the
            # halving cascade converges algebraically; allow extra splits.
            val, _ = convex._circle_integral(
                f, convex.angular_kinks(self.body), 1e-11, max_splits=12)
            return self.weight_scale * val
        _, w = self.rule(max(n, 4096 if self.d == 3 else n))
        return float(np.sum(w))


def uniform_sphere(d):
    return SphericalMeasure("uniform", d)


def sphere_atoms(thetas, weights, d=None):
    thetas = np.atleast_2d(np.asarray(thetas, float))
    return SphericalMeasure("atoms", d or thetas.shape[1],
                            atoms=(thetas, weights))


def gauge_weighted_sphere(body, exponent, weight_scale=1.0):
    return SphericalMeasure("gauge_weighted", body.d, body=body,
                            exponent=exponent, weight_scale=weight_scale)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

class Kernel:
    """Interaction kernel J >= 0 defining nu(dx) = J(x) dx.

    ``tail_fn(s)`` is the exact mass outside the ball of radius s when known;
    ``first_moment`` is int |x| J(x) dx; ``sampler(rng, n)`` draws from the
    normalized kernel when the total mass is finite; ``inner_exponent`` is
    the blow-up rate beta with J ~ |x|^-beta near the origin.
    """

    def __init__(self, name, d, fn, radial_fn=None, support_radius=math.inf,
                 tail_fn=None, first_moment=None, total_mass=None,
                 sampler=None, inner_exponent=0.0):
        self.name = name
        self.d = d
        self.fn = fn
        self.radial_fn = radial_fn
        self.support_radius = float(support_radius)
        self.tail_fn = tail_fn
        self.first_moment = first_moment
        self.total_mass = total_mass
        self.sampler = sampler
        self.inner_exponent = float(inner_exponent)

    @property
    def is_radial(self):
        return self.radial_fn is not None

    def radial_profile(self):
        """rho(dr) = kappa_{d-1} r^{d-1} J(r) dr for radial kernels."""
        if not self.is_radial:
            raise ValueError("kernel is not radially symmetric")
        kappa = sphere_area(self.d)
        d = self.d
        rf = self.radial_fn
        return density_profile(
            lambda r: kappa * r ** (d - 1) * rf(r),
            support=(0.0, self.support_radius),
            tail_fn=self.tail_fn,
            inner_exponent=(d - 1) - self.inner_exponent)


def indicator_ball_kernel(d=2, radius=1.0):
    R = float(radius)
    vol = _ball_volume(d, R)

    def fn(x):
        return (np.sum(np.atleast_2d(x) ** 2, axis=1) <= R * R).astype(float)

    def tail_fn(s):
        return max(0.0, vol - _ball_volume(d, min(s, R)))

    def sampler(rng, n):
        z = rng.standard_normal((n, d))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        return z * (R * rng.random(n) ** (1.0 / d))[:, None]

    return Kernel("indicator-ball", d, fn,
                  radial_fn=lambda r: (np.asarray(r) <= R).astype(float),
                  support_radius=R, tail_fn=tail_fn,
                  first_moment=sphere_area(d) * R ** (d + 1) / (d + 1),
                  total_mass=vol, sampler=sampler)


def gaussian_kernel(d=2, sigma=1.0):
    s2 = float(sigma) ** 2
    norm = (2.0 * np.pi * s2) ** (-d / 2.0)

    def fn(x):
        return norm * np.exp(-np.sum(np.atleast_2d(x) ** 2, axis=1) / (2.0 * s2))

    def tail_fn(t):
        return float(gammaincc(d / 2.0, t * t / (2.0 * s2)))

    def sampler(rng, n):
        return math.sqrt(s2) * rng.standard_normal((n, d))

    first = math.sqrt(2.0 * s2) * float(gamma((d + 1) / 2.0) / gamma(d / 2.0))
    return Kernel("gaussian", d, fn,
                  radial_fn=lambda r: norm * np.exp(-np.asarray(r) ** 2 / (2.0 * s2)),
                  tail_fn=tail_fn, first_moment=first, total_mass=1.0,
                  sampler=sampler)


def inverse_power_kernel(d=2, beta=1.0, radius=1.0):
    """J(x) = |x|^-beta on the ball of the given radius (beta < d + 1).

    beta = d is the slowly-varying case: infinite total mass with logarithmic
    tail function ell(s) = kappa_{d-1} log(radius / s).
    """
    R = float(radius)
    beta = float(beta)
    if beta >= d + 1:
        raise NonAdmissibleError("beta >= d + 1 is not admissible")
    kappa = sphere_area(d)

    def fn(x):
        r = np.sqrt(np.sum(np.atleast_2d(x) ** 2, axis=1))
        out = np.zeros_like(r)
        inside = (r <= R) & (r > 0)
        out[inside] = r[inside] ** (-beta)
        return out

    def tail_fn(s):
        if s >= R:
            return 0.0
        s = max(s, 0.0)
        if beta == d:
            return kappa * math.log(R / s) if s > 0 else math.inf
        return kappa * _pow_diff(s, R, d - beta) / (d - beta)

    total = kappa * R ** (d - beta) / (d - beta) if beta < d else None
    sampler = None
    if total is not None:
        expo = d - beta

        def sampler(rng, n):
            z = rng.standard_normal((n, d))
            z /= np.linalg.norm(z, axis=1, keepdims=True)
            return z * (R * rng.random(n) ** (1.0 / expo))[:, None]

    return Kernel("inverse-power-truncated", d, fn,
                  radial_fn=lambda r: np.where(
                      (np.asarray(r) <= R) & (np.asarray(r) > 0),
                      np.asarray(r, float) ** (-beta), 0.0),
                  support_radius=R, tail_fn=tail_fn,
                  first_moment=kappa * R ** (d + 1 - beta) / (d + 1 - beta),
                  total_mass=total, sampler=sampler, inner_exponent=beta)


def cone_kernel(d=2, axis=(1.0, 0.0), half_angle=0.5, radius=1.0):
    """J(x) = |x| restricted to a (two-sided-free) cone about the axis,
    truncated to the unit-ish ball; the standard non-radial test kernel."""
    axis = np.asarray(axis, float)
    axis = axis / np.linalg.norm(axis)
    R = float(radius)
    cos_half = math.cos(half_angle)

    def fn(x):
        x = np.atleast_2d(x)
        r = np.linalg.norm(x, axis=1)
        with np.errstate(invalid="ignore"):
            cosang = (x @ axis) / np.where(r > 0, r, 1.0)
        return np.where((r <= R) & (r > 0) & (cosang >= cos_half), r, 0.0)

    frac = half_angle / np.pi if d == 2 else (1.0 - cos_half) / 2.0
    total = frac * sphere_area(d) * R ** (d + 1) / (d + 1)
    return Kernel("cone", d, fn, support_radius=R, total_mass=total,
                  tail_fn=lambda s: max(
                      0.0, frac * sphere_area(d)
                      * (R ** (d + 1) - min(s, R) ** (d + 1)) / (d + 1)),
                  first_moment=frac * sphere_area(d) * R ** (d + 2) / (d + 2),
                  inner_exponent=-1.0)


KERNELS = {
    "indicator-ball": indicator_ball_kernel,
    "gaussian": gaussian_kernel,
    "inverse-power-truncated": inverse_power_kernel,
}


def _ball_volume(d, r):
    return math.pi ** (d / 2.0) / float(gamma(d / 2.0 + 1.0)) * r ** d


def shrink_kernel(k, eps):
    """J_eps(x) = eps^-d J(x / eps): mass-preserving concentration."""
    eps = float(eps)
    d = k.d

    def fn(x):
        return eps ** (-d) * k.fn(np.atleast_2d(x) / eps)

    radial = None
    if k.radial_fn is not None:
        radial = lambda r: eps ** (-d) * k.radial_fn(np.asarray(r) / eps)
    tail = None if k.tail_fn is None else (lambda s: k.tail_fn(s / eps))
    sampler = None
    if k.sampler is not None:
        sampler = lambda rng, n: eps * k.sampler(rng, n)
    return Kernel(f"{k.name}@shrink({eps:g})", d, fn, radial_fn=radial,
                  support_radius=k.support_radius * eps, tail_fn=tail,
                  first_moment=None if k.first_moment is None else eps * k.first_moment,
                  total_mass=k.total_mass, sampler=sampler,
                  inner_exponent=k.inner_exponent)


def stretch_kernel(k, eps):
    """J~_eps(x) = eps^d J(eps x): mass-preserving spreading."""
    eps = float(eps)
    d = k.d

    def fn(x):
        return eps ** d * k.fn(np.atleast_2d(x) * eps)

    radial = None
    if k.radial_fn is not None:
        radial = lambda r: eps ** d * k.radial_fn(np.asarray(r) * eps)
    tail = None if k.tail_fn is None else (lambda s: k.tail_fn(s * eps))
    sampler = None
    if k.sampler is not None:
        sampler = lambda rng, n: k.sampler(rng, n) / eps
    return Kernel(f"{k.name}@stretch({eps:g})", d, fn, radial_fn=radial,
                  support_radius=k.support_radius / eps, tail_fn=tail,
                  first_moment=None if k.first_moment is None else k.first_moment / eps,
                  total_mass=k.total_mass, sampler=sampler,
                  inner_exponent=k.inner_exponent)


# ---------------------------------------------------------------------------
# measure specs
# ---------------------------------------------------------------------------

class MeasureSpec:
    """A concrete interaction measure (see module docstring)."""

    def __init__(self, kind, d, radial=None, spherical=None, kernel=None,
                 body=None, alpha=None):
        self.kind = kind
        self.d = d
        self.radial = radial
        self.spherical = spherical
        self.kernel = kernel
        self.body = body
        self.alpha = alpha

    def spectral(self):
        """(RadialProfile, SphericalMeasure) if the measure has one."""
        if self.kind == "radial_spherical":
            return self.radial, self.spherical
        if self.kind == "anisotropic_stable":
            return (power_profile(self.alpha),
                    gauge_weighted_sphere(self.body, self.d + self.alpha))
        if self.kind == "kernel" and self.kernel.is_radial:
            return self.kernel.radial_profile(), uniform_sphere(self.d)
        return None


def radial_spherical_measure(radial, spherical):
    if isinstance(spherical, int):
        spherical = uniform_sphere(spherical)
    return MeasureSpec("radial_spherical", spherical.d, radial=radial,
                       spherical=spherical)


def stable_measure(d, alpha, prefactor=1.0):
    """prefactor * r^(-1-alpha) dr x uniform probability on directions."""
    return radial_spherical_measure(power_profile(alpha, prefactor),
                                    uniform_sphere(d))


def fractional_measure(d, alpha):
    """The raw fractional kernel |y|^(-d-alpha) dy in spectral form."""
    return stable_measure(d, alpha, prefactor=sphere_area(d))


def levy_measure(d, alpha):
    """alpha / kappa_{d-1} * |y|^(-d-alpha) dy: the normalized alpha-family
    whose cap-at-one constants stay bounded as alpha -> 0 or 1."""
    return stable_measure(d, alpha, prefactor=alpha)


def kernel_measure(kernel):
    return MeasureSpec("kernel", kernel.d, kernel=kernel)


def anisotropic_stable_measure(body, alpha):
    """Density ||x||_K^(-d-alpha) dx for an origin-symmetric body K."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("need alpha in (0, 1)")
    return MeasureSpec("anisotropic_stable", body.d, body=body, alpha=alpha)


# ---------------------------------------------------------------------------
# scaling families
# ---------------------------------------------------------------------------

class ScalingFamily:
    """A one-parameter family eps -> nu_eps plus its normalization rule.

    rules: ``kernel_shrink`` / ``kernel_stretch`` (kernel bases),
    ``set_shrink`` (spectral bases, nu_eps(A) = nu(A / eps)), and
    ``alpha_family`` (the parameter *is* alpha).

    normalization modes: ``cap_at_R`` C = int (R_eps ^ |x|) nu_eps,
    ``cap_at_one`` C = int (1 ^ R_eps |x|) nu_eps, ``total_mass``, and
    ``tail_at_one`` C = nu_eps(|x| > 1) (the slowly-varying normalizer).
    """

    def __init__(self, base, rule, normalization_mode="cap_at_R",
                 R_rule=None, prefactor_rule=None):
        if rule not in ("kernel_shrink", "kernel_stretch", "set_shrink",
                        "alpha_family"):
            raise ValueError(f"unknown scaling rule {rule!r}")
        if normalization_mode not in ("cap_at_R", "cap_at_one", "total_mass",
                                      "tail_at_one"):
            raise ValueError(f"unknown normalization {normalization_mode!r}")
        if rule in ("kernel_shrink", "kernel_stretch") and base.kind != "kernel":
            raise ValueError(f"{rule} needs a kernel base measure")
        if rule == "set_shrink" and base.spectral() is None:
            raise ValueError("set_shrink needs a spectral base measure")
        self.base = base
        self.rule = rule
        self.normalization_mode = normalization_mode
        self.R_rule = R_rule if R_rule is not None else (lambda eps: 1.0)
        self.prefactor_rule = prefactor_rule

    def measure_at(self, eps):
        eps = float(eps)
        if eps <= 0:
            raise ValueError("parameter must be positive")
        if self.rule == "alpha_family":
            alpha = eps
            if not alpha < 1.0:
                raise ValueError("alpha family needs parameter in (0, 1)")
            base = self.base
            if base.kind == "anisotropic_stable":
                return anisotropic_stable_measure(base.body, alpha)
            profile, spherical = base.spectral()
            if profile.kind != "power":
                raise ValueError("alpha family needs a power radial profile")
            pre = profile.prefactor if self.prefactor_rule is None \
                else float(self.prefactor_rule(alpha))
            return radial_spherical_measure(power_profile(alpha, pre), spherical)
        if self.rule == "kernel_shrink":
            return kernel_measure(shrink_kernel(self.base.kernel, eps))
        if self.rule == "kernel_stretch":
            return kernel_measure(stretch_kernel(self.base.kernel, eps))
        # set_shrink
        profile, spherical = self.base.spectral()
        return radial_spherical_measure(_shrink_profile(profile, eps), spherical)


def _shrink_profile(profile, eps):
    """Profile of nu_eps(A) = nu(A / eps)."""
    if profile.kind == "power":
        return power_profile(profile.alpha,
                             profile.prefactor * eps ** profile.alpha)
    if profile.kind == "atoms":
        atoms = profile.atoms.copy()
        atoms[:, 0] *= eps
        return atom_profile(atoms, prefactor=profile.prefactor)
    f = profile.density
    tail = None if profile.tail_fn is None else (lambda s: profile.tail_fn(s / eps))
    return density_profile(
        lambda r: f(np.asarray(r) / eps) / eps,
        support=(profile.support[0] * eps, profile.support[1] * eps),
        tail_fn=tail, inner_exponent=profile.inner_exponent,
        prefactor=profile.prefactor)


# ---------------------------------------------------------------------------
# measure-level operations
# ---------------------------------------------------------------------------

def _kernel_radial_reduction(kernel, n_dirs=256):
    """Per-direction radial densities for a non-radial kernel.

    Returns (thetas, sigma_weights, radial_density) with radial_density(r)
    of shape (n_r, n_dirs): J(r theta_j) r^{d-1}.
    """
    eta = uniform_sphere(kernel.d)
    thetas, w = eta.rule(n_dirs)
    sigma = w * sphere_area(kernel.d)  # back to surface measure

    def radial_density(r):
        r = np.asarray(r, float)
        pts = r[:, None, None] * thetas[None, :, :]
        vals = kernel.fn(pts.reshape(-1, kernel.d)).reshape(r.size, -1)
        return vals * (r ** (kernel.d - 1))[:, None]

    return thetas, sigma, radial_density


def _weighted_radial_integral(m, weight_fn, r_split):
    """int weight(|x|) nu(dx) with weight piecewise-smooth, kinks at r_split."""
    spec = m.spectral()
    if spec is not None:
        profile, eta = spec
        total = eta.total_mass()
        if profile.kind == "atoms":
            r, w = profile.quad_nodes(0.0, math.inf)
            return total * float(np.sum(w * weight_fn(r)))
        lo = profile.support[0] if profile.kind == "density" else 0.0
        hi = profile.support[1] if profile.kind == "density" else math.inf
        value = 0.0
        # split [lo, hi] at the weight kinks; integrate each piece
        pieces = []
        knots = [k for k in sorted(r_split) if lo < k < hi]
        edges = [lo] + knots + [hi]
        for a, b in zip(edges[:-1], edges[1:]):
            pieces.append((a, b))
        for a, b in pieces:
            if math.isinf(b):
                # weight must be constant on the last piece
                wconst = float(weight_fn(np.array([max(a, 1e-300) * 2.0]))[0])
                value += wconst * profile.tail(a)
            else:
                a_eff = a
                if a_eff <= 0.0:
                    # handle the origin via moments: weight ~ w'(0) r there
                    a_eff = b * 1e-12
                    value += float(weight_fn(np.array([a_eff]))[0] / a_eff) \
                        * profile.moment(1, 0.0, a_eff)
                r, w = profile.quad_nodes(a_eff, b)
                value += float(np.sum(w * weight_fn(r)))
        return value * total
    # non-radial kernel: product rule
    k = m.kernel
    _, sigma, rad = _kernel_radial_reduction(k)
    hi = k.support_radius
    if math.isinf(hi):
        raise NonAdmissibleError("non-radial kernels need finite support here")
    value = 0.0
    edges = [0.0] + [s for s in sorted(r_split) if 0.0 < s < hi] + [hi]
    for a, b in zip(edges[:-1], edges[1:]):
        a_eff = max(a, b * 1e-12)
        r, w = _log_gl_nodes(a_eff, b)
        dens = rad(r) @ sigma
        value += float(np.sum(w * weight_fn(r) * dens))
    return value


def admissibility_check(m, tol=1e-9):
    """(ok, value) for int (1 ^ |x|) nu(dx); ok = False on divergence."""
    try:
        value = _weighted_radial_integral(
            m, lambda r: np.minimum(r, 1.0), (1.0,))
    except NonAdmissibleError:
        return False, math.inf
    if not math.isfinite(value):
        return False, math.inf
    spec = m.spectral()
    if spec is not None and spec[0].kind == "density":
        q = spec[0].inner_exponent
        if q is not None and q <= -2.0:
            return False, math.inf
    return True, value


def tail_mass(m, s):
    """nu(|x| > s)."""
    spec = m.spectral()
    if spec is not None:
        profile, eta = spec
        return profile.tail(s) * eta.total_mass()
    k = m.kernel
    if k.tail_fn is not None:
        return float(k.tail_fn(s))
    return _weighted_radial_integral(m, lambda r: (r > s).astype(float), (s,))


def normalization_constant(fam, eps):
    """C_eps for the family's normalization mode (finite, else raises)."""
    m = fam.measure_at(eps)
    mode = fam.normalization_mode
    if mode == "cap_at_R":
        R = float(fam.R_rule(eps))
        if math.isinf(R):
            spec = m.spectral()
            if spec is not None:
                value = spec[0].moment(1, 0.0, math.inf) * spec[1].total_mass()
            else:
                if m.kernel.first_moment is None:
                    raise NonAdmissibleError("kernel first moment unknown")
                value = m.kernel.first_moment
        else:
            value = _weighted_radial_integral(m, lambda r: np.minimum(r, R), (R,))
    elif mode == "cap_at_one":
        R = float(fam.R_rule(eps))
        value = _weighted_radial_integral(
            m, lambda r: np.minimum(R * r, 1.0), (1.0 / R,))
    elif mode == "total_mass":
        value = tail_mass(m, 0.0)
    else:  # tail_at_one
        value = tail_mass(m, 1.0)
    if not (math.isfinite(value) and value > 0):
        raise NonAdmissibleError(f"normalization constant not finite: {value}")
    return value


def lambda_tail(fam, eps, R):
    """Mass of the normalized rescaled measure outside the R-ball.

    lambda_eps = C_eps^-1 * weight(x) nu_eps(dx) with the family's own
    weight; vanishing (cap modes) or unit (mass modes) tails as eps -> 0 are
    the sanity gates asserted before every sweep.
    """
    m = fam.measure_at(eps)
    C = normalization_constant(fam, eps)
    mode = fam.normalization_mode
    if mode == "cap_at_R":
        R_eps = float(fam.R_rule(eps))
        num = _weighted_radial_integral(
            m, lambda r: np.where(r > R, np.minimum(r, R_eps), 0.0),
            (R, R_eps))
    elif mode == "cap_at_one":
        R_eps = float(fam.R_rule(eps))
        num = _weighted_radial_integral(
            m, lambda r: np.where(r > R, np.minimum(R_eps * r, 1.0), 0.0),
            (R, 1.0 / R_eps))
    elif mode == "total_mass":
        num = tail_mass(m, R)
    else:
        num = tail_mass(m, max(R, 1.0))
    return num / C


def sphere_projection(fam, eps, n=512):
    """Angular marginal of the normalized rescaled measure (probability)."""
    m = fam.measure_at(eps)
    spec = m.spectral()
    if spec is not None:
        profile, eta = spec
        if eta.kind == "uniform":
            return eta
        if eta.kind == "atoms":
            th, w = eta.atoms
            return sphere_atoms(th, w / np.sum(w))
        total = eta.total_mass()
        return gauge_weighted_sphere(eta.body, eta.exponent,
                                     weight_scale=eta.weight_scale / total)
    # non-radial kernel: tabulate per-direction weighted mass
    k = m.kernel
    thetas, sigma, rad = _kernel_radial_reduction(k, n_dirs=n)
    hi = k.support_radius
    if math.isinf(hi):
        raise NonAdmissibleError("non-radial kernels need finite support here")
    r, w = _log_gl_nodes(hi * 1e-12, hi)
    # cap-at-one weight (1 ^ |x|); for kernels that factor into radial and
    # angular parts every cap weight yields the same normalized marginal
    weights = (w * np.minimum(r, 1.0)) @ rad(r) * sigma
    total = float(np.sum(weights))
    if total <= 0:
        raise NonAdmissibleError("kernel has no mass")
    return sphere_atoms(thetas, weights / total)
