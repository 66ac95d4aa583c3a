"""Independent cross-checks used to freeze expected values in the tests.

Nothing in this file goes through the package's own numerical paths: set
overlaps come from direct interval arithmetic, covariograms of the disk
and the box are textbook closed forms, and every integral is handed to
scipy's adaptive quadrature.  Where a test file quotes a frozen constant,
the comment next to it names the routine here that produced it; run

    python tests/_oracles.py

to reprint the whole table.
"""

import math

import numpy as np
from scipy import integrate


# ---------------------------------------------------------------------------
# one-dimensional sets


def overlap_length(intervals, y):
    """|E cap (E - y)| for E a union of disjoint intervals (pure python)."""
    total = 0.0
    for (a1, b1) in intervals:
        for (a2, b2) in intervals:
            lo = max(a1, a2 - y)
            hi = min(b1, b2 - y)
            if hi > lo:
                total += hi - lo
    return total


def quad_perimeter_1d(intervals, folded_density, tol=1e-12):
    """int_0^inf (g(0) - g(y)) * folded_density(y) dy by segment-summed
    adaptive quadrature.

    ``folded_density`` already accounts for both signs of y (g is even).
    The integrand is piecewise smooth between consecutive endpoint
    differences of E, so integrating segment by segment keeps quad exact.
    """
    ends = sorted({e for iv in intervals for e in iv})
    diffs = sorted({abs(a - b) for a in ends for b in ends if abs(a - b) > 0})
    g0 = sum(b - a for a, b in intervals)
    kinks = [0.0] + diffs
    total = 0.0
    for lo, hi in zip(kinks[:-1], kinks[1:]):
        val, _ = integrate.quad(
            lambda y: (g0 - overlap_length(intervals, y)) * folded_density(y),
            lo, hi, epsabs=tol, epsrel=tol, limit=200)
        total += val
    # beyond the largest difference the overlap is identically zero
    tail, _ = integrate.quad(lambda y: g0 * folded_density(y),
                             kinks[-1], np.inf, epsabs=tol, epsrel=tol)
    return total + tail


def pw_linear_perimeter_1d(intervals, alpha, pre):
    """int_0^inf (g(0) - g(y)) * pre * y^(-1-alpha) dy using the elementary
    antiderivative on each linearity segment of g.

    Between consecutive pairwise endpoint differences the overlap g is an
    affine function of y; that is *verified* here (midpoint-vs-chord check)
    rather than assumed, with the coefficients read off from two direct
    overlap evaluations.  This avoids adaptive quadrature entirely, which
    matters for sets with geometrically small features where per-segment
    roundoff would otherwise accumulate (scipy.quad warns and loses ~1e-4
    on the 40-level dyadic union).
    """
    ends = sorted({e for iv in intervals for e in iv})
    diffs = sorted({abs(a - b) for a in ends for b in ends if abs(a - b) > 0})
    g0 = sum(b - a for a, b in intervals)
    kinks = [0.0] + diffs
    total = 0.0
    for lo, hi in zip(kinks[:-1], kinks[1:]):
        if hi <= lo:
            continue
        flo = g0 - overlap_length(intervals, lo)
        fhi = g0 - overlap_length(intervals, hi)
        mid = 0.5 * (lo + hi)
        fmid = g0 - overlap_length(intervals, mid)
        if abs(fmid - 0.5 * (flo + fhi)) > 1e-9 * max(1.0, g0):
            raise AssertionError(f"not affine on ({lo}, {hi})")
        slope = (fhi - flo) / (hi - lo)
        const = flo - slope * lo          # f(y) = const + slope * y
        # int (const + slope y) y^(-1-a) dy =
        #     -const y^(-a)/a + slope y^(1-a)/(1-a)
        if lo == 0.0:
            if abs(const) > 1e-12 * max(1.0, g0):
                raise AssertionError("nonzero difference at y = 0")
            piece = slope * hi ** (1.0 - alpha) / (1.0 - alpha)
        else:
            piece = (-const / alpha * (hi ** -alpha - lo ** -alpha)
                     + slope / (1.0 - alpha)
                     * (hi ** (1.0 - alpha) - lo ** (1.0 - alpha)))
        total += piece
    tail = g0 / alpha * kinks[-1] ** -alpha
    return pre * total + tail * pre


def fractional_folded_1d(alpha):
    """density of nu(dy) = |y|^(-1-alpha) dy on R, folded onto y > 0."""
    return lambda y: 2.0 * y ** (-1.0 - alpha)


def tail_normalized_folded_1d(alpha):
    """folded density of the alpha-stable measure with nu(B_R^c) = R^-alpha."""
    return lambda y: alpha * y ** (-1.0 - alpha)


def dyadic_intervals(n_max):
    """[n, n + 2^-n] for n = 1..n_max (the infinite tail is below double
    precision long before n_max = 40)."""
    return [(float(n), float(n) + 2.0 ** (-n)) for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# closed-form covariograms in the plane


def disk_covariogram(r, R=1.0):
    """|B_R cap (B_R + y)| with r = |y| (lens area formula)."""
    if r >= 2.0 * R:
        return 0.0
    t = r / (2.0 * R)
    return 2.0 * R * R * math.acos(t) - 0.5 * r * math.sqrt(4.0 * R * R - r * r)


def box_covariogram(y1, y2, w=1.0, h=1.0):
    """|Q cap (Q + y)| for the w-by-h box: product of two tent functions."""
    return max(w - abs(y1), 0.0) * max(h - abs(y2), 0.0)


def quad_perimeter_disk(alpha, R=1.0, tol=1e-13):
    """fractional perimeter of B_R in d=2 via the radial reduction
    Per = int_0^2R (g(0) - g(r)) 2 pi r * r^(-2-alpha) dr + tail.

    Substituting r = 2R sin(t) makes the integrand smooth through r = 2R
    (the lens area closes with a half-power there) and r = 0 keeps only
    the integrable r^-alpha factor, handled by quad's endpoint weighting.
    """
    g0 = math.pi * R * R

    def fn(t):
        r = 2.0 * R * math.sin(t)
        dr = 2.0 * R * math.cos(t)
        return ((g0 - disk_covariogram(r, R)) * 2.0 * math.pi
                * r ** (-1.0 - alpha) * dr)

    core, _ = integrate.quad(fn, 0.0, math.pi / 2.0,
                             epsabs=tol, epsrel=tol, limit=400)
    tail = g0 * 2.0 * math.pi * (2.0 * R) ** (-alpha) / alpha
    return core + tail


def quad_perimeter_square(alpha, tol=1e-13):
    """fractional perimeter of the unit square in d=2.

    In the octant 0 <= phi <= pi/4 the covariogram of the unit square is
    (1 - r cos phi)(1 - r sin phi) up to its support radius 1/cos phi, so
    the radial integral against r^(-1-alpha) has a closed form and only
    the smooth angular integral is left to quad:

        Per = 8 int_0^{pi/4} (c+s) c^(a-1)/(1-a) - s c^(a-1)/(2-a)
                             + c^a / a  dphi,   c = cos phi, s = sin phi.
    """
    a = alpha

    def fn(phi):
        c, s = math.cos(phi), math.sin(phi)
        return ((c + s) * c ** (a - 1.0) / (1.0 - a)
                - s * c ** (a - 1.0) / (2.0 - a)
                + c ** a / a)

    val, _ = integrate.quad(fn, 0.0, math.pi / 4.0, epsabs=tol, epsrel=tol)
    return 8.0 * val


# ---------------------------------------------------------------------------
# convex-body quantities


def moment_gauge_brute(inside, bound, y, n=4001):
    """(d+1)/2 * int_K |y . x| dx on a midpoint grid over [-bound, bound]^2.

    ``inside`` is the indicator of the body K.  4001^2 midpoints push the
    grid error below 1e-6 for the smooth bodies used in the tests.
    """
    ax = np.linspace(-bound, bound, n, endpoint=False) + bound / n
    xx, yy = np.meshgrid(ax, ax, indexing="ij")
    mask = inside(xx, yy)
    cell = (2.0 * bound / n) ** 2
    vals = np.abs(y[0] * xx + y[1] * yy)
    return 1.5 * float(np.sum(vals[mask])) * cell


def moment_gauge_ellipse_closed(a, b, y):
    """closed form of the brute integral for an ellipse with semiaxes a, b.

    Mapping x -> (a u, b v) sends K to the unit disk and |y.x| to
    |(a y1, b y2) . (u, v)|; with int_{B_1} |u1| du = 4/3 this collapses to
    (3/2) * ab * (4/3) * |(a y1, b y2)| = 2 a b |(a y1, b y2)|.
    """
    return 2.0 * a * b * math.hypot(a * y[0], b * y[1])


def lp_ball_volume_2d(p):
    """|{ |x|^p + |y|^p <= 1 }| = (2 Gamma(1/p + 1))^2 / Gamma(2/p + 1)."""
    return (2.0 * math.gamma(1.0 / p + 1.0)) ** 2 / math.gamma(2.0 / p + 1.0)


def kernel_first_moment_2d(j_radial, r_max, tol=1e-12):
    """int |x| J(x) dx = 2 pi int r^2 J(r) dr for a radial kernel."""
    val, _ = integrate.quad(lambda r: 2.0 * math.pi * r * r * j_radial(r),
                            0.0, r_max, epsabs=tol, epsrel=tol)
    return val


# ---------------------------------------------------------------------------


def _main():
    print("Per_a([0,1]) = 2/(a(1-a)), segment quad vs closed form:")
    for a in (0.1, 0.25, 0.5, 0.75, 0.9):
        q = quad_perimeter_1d([(0.0, 1.0)], fractional_folded_1d(a))
        print(f"  a={a}: quad={q!r} closed={2.0 / (a * (1.0 - a))!r}")

    print("two intervals (0,1) u (2, 2.5), a=0.5, fractional:")
    print(" ", repr(quad_perimeter_1d([(0.0, 1.0), (2.0, 2.5)],
                                      fractional_folded_1d(0.5))))

    print("unit square, fractional d=2:")
    for a in (0.3, 0.5, 0.7):
        print(f"  a={a}:", repr(quad_perimeter_square(a)))

    print("unit disk, fractional d=2:")
    for a in (0.3, 0.5, 0.7):
        print(f"  a={a}:", repr(quad_perimeter_disk(a)))

    print("two intervals again via the affine-segment antiderivative:")
    print(" ", repr(pw_linear_perimeter_1d([(0.0, 1.0), (2.0, 2.5)],
                                           0.5, 2.0)))

    print("truncated dyadic union (N=40), tail-normalized measure")
    print("(affine-segment route; adaptive quad loses ~1e-4 here):")
    ivs = dyadic_intervals(40)
    for a in (0.3, 0.5, 0.7):
        print(f"  a={a}:", repr(pw_linear_perimeter_1d(ivs, a, a)))

    print("moment gauges, (d+1)/2 int_K |y.x| dx:")
    ell = moment_gauge_brute(lambda x, y: x ** 2 + (y / 0.5) ** 2 <= 1.0,
                             1.0, np.array([1.0, 1.0]))
    print("  ellipse scales (1, 0.5), y=(1,1): brute", repr(ell),
          "closed", repr(moment_gauge_ellipse_closed(1.0, 0.5, (1.0, 1.0))))
    # box [-1,1]^2 with y=(1, 1/2): int int |x1 + x2/2| = 13/6 by direct
    # integration (inner integral is 1 + c^2 for a shift |c| <= 1), so the
    # gauge is 1.5 * 13/6 = 13/4
    sq = moment_gauge_brute(lambda x, y: (np.abs(x) <= 1) & (np.abs(y) <= 1),
                            1.0, np.array([1.0, 0.5]))
    print("  box [-1,1]^2, y=(1,0.5): brute", repr(sq), "closed 3.25")
    dk = moment_gauge_brute(lambda x, y: x ** 2 + y ** 2 <= 1.0,
                            1.0, np.array([0.0, 2.0]))
    print("  unit disk, y=(0,2): brute", repr(dk),
          "closed", repr(moment_gauge_ellipse_closed(1.0, 1.0, (0.0, 2.0))))

    print("lp ball volumes:", repr(lp_ball_volume_2d(3.0)),
          repr(lp_ball_volume_2d(1.5)))

    print("gaussian first moment d=2 sigma=1:",
          repr(kernel_first_moment_2d(
              lambda r: math.exp(-0.5 * r * r) / (2.0 * math.pi), 40.0)),
          "= sqrt(pi/2) =", repr(math.sqrt(math.pi / 2.0)))
    print("indicator ball first moment d=2 R=1:",
          repr(kernel_first_moment_2d(lambda r: 1.0 if r <= 1.0 else 0.0,
                                      1.0)),
          "= 2 pi / 3 =", repr(2.0 * math.pi / 3.0))


if __name__ == "__main__":
    _main()
