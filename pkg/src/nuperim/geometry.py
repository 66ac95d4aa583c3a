"""Sets, covariograms and rasterization.

The measurable sets the package knows about:

* ``IntervalUnion`` -- finite unions of disjoint intervals on the line.  The
  workhorse in d = 1; its auto/cross correlations are *exact* piecewise-linear
  functions, which makes one-dimensional perimeter computations exact up to
  the radial antiderivatives.
* ``Ball``, ``Box``, ``Polygon`` -- analytic shapes in d <= 3 (polygons are
  d = 2).  Balls and boxes have closed-form covariograms.
* ``VoxelSet`` -- bitmask on a regular grid with spacing h, the fallback for
  everything else.  Covariograms are FFT autocorrelations sampled on the
  lattice with multilinear interpolation in between.

The covariogram of a set E is g(y) = |E intersect (E + y)|; every nonlocal
perimeter here is an integral of g(0) - g(y) against a measure, so this
module is where all the geometry actually happens.
"""

import math
from itertools import combinations

import numpy as np
from scipy.fft import irfftn, rfftn
from scipy.interpolate import RegularGridInterpolator

from .constants import sphere_area, unit_ball_volume
from .errors import UnsupportedShapeError


# ---------------------------------------------------------------------------
# interval unions (d = 1)
# ---------------------------------------------------------------------------

class IntervalUnion:
    """Finite union of intervals on the line, kept sorted and disjoint.

    The constructor normalizes: intervals are sorted and overlapping or
    touching intervals are merged, so ``n_components`` always counts the
    connected components.
    """

    def __init__(self, intervals):
        arr = np.atleast_2d(np.asarray(intervals, dtype=float))
        if arr.size == 0:
            raise ValueError("empty interval union")
        if arr.shape[1] != 2:
            raise ValueError("intervals must be (k, 2)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("interval endpoints must be finite")
        if np.any(arr[:, 0] >= arr[:, 1]):
            raise ValueError("each interval needs a < b")
        arr = arr[np.argsort(arr[:, 0])]
        merged = [arr[0].copy()]
        for a, b in arr[1:]:
            if a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append(np.array([a, b]))
        self.intervals = np.array(merged)
        self.d = 1

    @property
    def n_components(self):
        return self.intervals.shape[0]

    @property
    def measure(self):
        return float(np.sum(self.intervals[:, 1] - self.intervals[:, 0]))

    @property
    def volume(self):
        return self.measure

    def bounding_box(self):
        return (np.array([self.intervals[0, 0]]),
                np.array([self.intervals[-1, 1]]))

    @property
    def diameter(self):
        return float(self.intervals[-1, 1] - self.intervals[0, 0])

    def translate(self, t):
        return IntervalUnion(self.intervals + float(t))

    def contains(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(-1)
        # even index after searchsorted against the flattened endpoints
        # means "inside"; half-open on the right keeps points deterministic
        edges = self.intervals.reshape(-1)
        idx = np.searchsorted(edges, x, side="right")
        return idx % 2 == 1

    def union(self, other):
        return IntervalUnion(np.vstack([self.intervals, other.intervals]))

    def intersect(self, other):
        pieces = []
        for a, b in self.intervals:
            lo = np.maximum(a, other.intervals[:, 0])
            hi = np.minimum(b, other.intervals[:, 1])
            keep = lo < hi
            if np.any(keep):
                pieces.append(np.column_stack([lo[keep], hi[keep]]))
        if not pieces:
            return None
        return IntervalUnion(np.vstack(pieces))

    def complement_within(self, lo, hi):
        """The set [lo, hi] minus self, as an IntervalUnion (or None)."""
        pieces = []
        cur = float(lo)
        for a, b in self.intervals:
            if b <= lo or a >= hi:
                continue
            a, b = max(a, lo), min(b, hi)
            if a > cur:
                pieces.append((cur, a))
            cur = max(cur, b)
        if cur < hi:
            pieces.append((cur, hi))
        if not pieces:
            return None
        return IntervalUnion(pieces)

    # -- correlations -----------------------------------------------------

    def overlap_with_translate(self, other, y):
        """|self intersect (other + y)| evaluated exactly, vectorized in y."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.zeros_like(y)
        A = self.intervals
        B = other.intervals
        for p, q in A:
            lo = np.maximum(p, B[None, :, 0] + y[:, None])
            hi = np.minimum(q, B[None, :, 1] + y[:, None])
            out += np.sum(np.clip(hi - lo, 0.0, None), axis=1)
        return out

    def cross_correlation_knots(self, other):
        """Exact piecewise-linear representation of y -> |self ^ (other+y)|.

        Returns (knots, values): the function is linear between consecutive
        knots and zero outside [knots[0], knots[-1]].
        """
        ea = self.intervals.reshape(-1)
        eb = other.intervals.reshape(-1)
        diffs = np.unique(ea[:, None] - eb[None, :])
        vals = self.overlap_with_translate(other, diffs)
        return diffs, vals

    def autocorrelation(self):
        """Exact even piecewise-linear g(y) = |E ^ (E+y)| on knots >= 0."""
        knots, vals = self.cross_correlation_knots(self)
        keep = knots >= -1e-15
        knots, vals = knots[keep], vals[keep]
        if knots[0] > 0.0:
            knots = np.concatenate([[0.0], knots])
            vals = np.concatenate([[self.measure], vals])
        else:
            knots = knots.copy()
            knots[0] = 0.0
        return knots, vals


def dyadic_set(n_max=40):
    """The union of [n, n + 2^-n] for n = 1..n_max (default truncation 40)."""
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    n = np.arange(1, n_max + 1, dtype=float)
    return IntervalUnion(np.column_stack([n, n + 2.0 ** (-n)]))


# ---------------------------------------------------------------------------
# analytic shapes
# ---------------------------------------------------------------------------

class Ball:
    def __init__(self, center, radius):
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        self.d = self.center.size
        if self.d not in (1, 2, 3):
            raise ValueError("balls supported in d = 1, 2, 3")

    @property
    def volume(self):
        return unit_ball_volume(self.d) * self.radius ** self.d

    @property
    def diameter(self):
        return 2.0 * self.radius

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def contains(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.sum((pts - self.center) ** 2, axis=1) <= self.radius ** 2


class Box:
    def __init__(self, lo, hi):
        self.lo = np.atleast_1d(np.asarray(lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if self.lo.shape != self.hi.shape or np.any(self.lo >= self.hi):
            raise ValueError("box needs lo < hi componentwise")
        self.d = self.lo.size
        if self.d not in (1, 2, 3):
            raise ValueError("boxes supported in d = 1, 2, 3")

    @property
    def sides(self):
        return self.hi - self.lo

    @property
    def volume(self):
        return float(np.prod(self.sides))

    @property
    def diameter(self):
        return float(np.linalg.norm(self.sides))

    def bounding_box(self):
        return self.lo.copy(), self.hi.copy()

    def contains(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.all((pts >= self.lo) & (pts <= self.hi), axis=1)


def unit_square():
    return Box([0.0, 0.0], [1.0, 1.0])


class Polygon:
    """Simple polygon in the plane, vertices counter-clockwise."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("polygon needs (m >= 3, 2) vertices")
        area2 = _shoelace2(v)
        if area2 <= 0:
            raise ValueError("vertices must be counter-clockwise")
        if _self_intersects(v):
            raise ValueError("polygon must be simple")
        self.vertices = v
        self.d = 2

    @property
    def volume(self):
        return 0.5 * _shoelace2(self.vertices)

    @property
    def diameter(self):
        v = self.vertices
        d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(d2.max()))

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        inside = np.zeros(pts.shape[0], dtype=bool)
        v = self.vertices
        x1, y1 = v[:, 0], v[:, 1]
        x2, y2 = np.roll(x1, -1), np.roll(y1, -1)
        for i in range(v.shape[0]):
            crosses = (y1[i] > y) != (y2[i] > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xi = (x2[i] - x1[i]) * (y - y1[i]) / (y2[i] - y1[i]) + x1[i]
            inside ^= crosses & (x < xi)
        return inside


def _shoelace2(v):
    x, y = v[:, 0], v[:, 1]
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _self_intersects(v):
    m = v.shape[0]
    segs = [(v[i], v[(i + 1) % m]) for i in range(m)]

    def _ccw(a, b, c):
        return (c[1] - a[1]) * (b[0] - a[0]) - (b[1] - a[1]) * (c[0] - a[0])

    for i in range(m):
        for j in range(i + 1, m):
            if abs(i - j) in (0, 1, m - 1):
                continue
            a, b = segs[i]
            c, d = segs[j]
            if (_ccw(a, b, c) * _ccw(a, b, d) < 0
                    and _ccw(c, d, a) * _ccw(c, d, b) < 0):
                return True
    return False


def regular_polygon(n_sides, radius=1.0, center=(0.0, 0.0)):
    ang = 2.0 * np.pi * (np.arange(n_sides) + 0.5) / n_sides
    cx, cy = center
    return Polygon(np.column_stack([cx + radius * np.cos(ang),
                                    cy + radius * np.sin(ang)]))


def l_shape(outer=1.0, notch=0.5):
    """L-shaped polygon: the unit-ish square with one corner square removed."""
    a, b = float(outer), float(notch)
    if not 0 < b < a:
        raise ValueError("need 0 < notch < outer")
    return Polygon([(0, 0), (a, 0), (a, a - b), (a - b, a - b),
                    (a - b, a), (0, a)])


# ---------------------------------------------------------------------------
# classical perimeter and boundary decompositions
# ---------------------------------------------------------------------------

def classical_perimeter(shape):
    """Perimeter (surface measure of the boundary; counting measure in d=1)."""
    if isinstance(shape, IntervalUnion):
        return 2.0 * shape.n_components
    if isinstance(shape, Ball):
        return sphere_area(shape.d) * shape.radius ** (shape.d - 1)
    if isinstance(shape, Box):
        s = shape.sides
        if shape.d == 1:
            return 2.0
        total = 0.0
        for i in range(shape.d):
            total += 2.0 * np.prod(np.delete(s, i))
        return float(total)
    if isinstance(shape, Polygon):
        v = shape.vertices
        e = np.roll(v, -1, axis=0) - v
        return float(np.sum(np.linalg.norm(e, axis=1)))
    if isinstance(shape, VoxelSet):
        return _voxel_face_perimeter(shape)
    raise UnsupportedShapeError(f"no classical perimeter for {type(shape).__name__}")


def boundary_decomposition(shape):
    """Boundary pieces as (measures, outward unit normals).

    Supported: Polygon (edges), Box (faces), IntervalUnion (endpoint pairs,
    each with counting measure 1).  For a polygon the normals are rotated
    edge vectors, so sum(length_i * n_i) vanishes identically.
    """
    if isinstance(shape, Polygon):
        v = shape.vertices
        e = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(e, axis=1)
        normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
        return lengths, normals
    if isinstance(shape, Box):
        s = shape.sides
        lengths, normals = [], []
        for i in range(shape.d):
            face = float(np.prod(np.delete(s, i))) if shape.d > 1 else 1.0
            for sign in (-1.0, 1.0):
                n = np.zeros(shape.d)
                n[i] = sign
                lengths.append(face)
                normals.append(n)
        return np.array(lengths), np.array(normals)
    if isinstance(shape, IntervalUnion):
        k = shape.n_components
        lengths = np.ones(2 * k)
        normals = np.tile([[-1.0], [1.0]], (k, 1))
        return lengths, normals
    raise UnsupportedShapeError(
        f"no boundary decomposition for {type(shape).__name__}")


# ---------------------------------------------------------------------------
# covariograms
# ---------------------------------------------------------------------------

class Covariogram:
    """Covariogram g(y) = |E intersect (E + y)| with metadata.

    Attributes
    ----------
    d : ambient dimension
    volume : g(0) = |E|
    support_radius : g(y) = 0 for |y| >= support_radius (upper bound)
    lipschitz : an upper bound on the Lipschitz constant of g
    source : "closed_form:<kind>", "interval_union" or "sampled"
    sample_spacing : grid spacing for sampled covariograms, else None
    piecewise : (knots, values) exact representation in d = 1, else None
    radial_kinks : radii where the sphere average of g loses smoothness
    """

    def __init__(self, d, volume, support_radius, lipschitz, source,
                 evaluate, sample_spacing=None, piecewise=None,
                 radial_kinks=None):
        self.d = d
        self.volume = float(volume)
        self.support_radius = float(support_radius)
        self.lipschitz = float(lipschitz)
        self.source = source
        self._evaluate = evaluate
        self.sample_spacing = sample_spacing
        self.piecewise = piecewise
        self.radial_kinks = radial_kinks

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, self.d) if self.d > 1 else pts.reshape(-1, 1)
        return self._evaluate(pts)


def covariogram_exact(shape):
    """Closed-form covariogram for interval unions, balls and boxes.

    Polygons have no closed form here; rasterize and use covariogram_grid.
    """
    if isinstance(shape, IntervalUnion):
        knots, vals = shape.autocorrelation()
        lip = float(np.max(np.abs(np.diff(vals) / np.diff(knots)))) \
            if knots.size > 1 else 0.0

        def _eval(pts, knots=knots, vals=vals):
            r = np.abs(pts[:, 0])
            return np.interp(r, knots, vals, right=0.0)

        return Covariogram(1, shape.measure, shape.diameter, lip,
                           "interval_union", _eval, piecewise=(knots, vals))

    if isinstance(shape, Ball):
        r, d = shape.radius, shape.d

        if d == 1:
            def _eval(pts):
                return np.clip(2.0 * r - np.abs(pts[:, 0]), 0.0, None)
            lip = 1.0
        elif d == 2:
            def _eval(pts):
                s = np.linalg.norm(pts, axis=1)
                s = np.minimum(s, 2.0 * r)
                return (2.0 * r * r * np.arccos(s / (2.0 * r))
                        - 0.5 * s * np.sqrt(np.clip(4.0 * r * r - s * s, 0.0, None)))
            lip = 2.0 * r  # |g'(0)| = 2r, and |g'| decreases
        else:
            def _eval(pts):
                s = np.linalg.norm(pts, axis=1)
                s = np.minimum(s, 2.0 * r)
                return np.pi / 12.0 * (2.0 * r - s) ** 2 * (4.0 * r + s)
            lip = np.pi * r * r  # |g'(0)| = pi r^2
        return Covariogram(d, shape.volume, 2.0 * r, lip,
                           "closed_form:ball", _eval)

    if isinstance(shape, Box):
        s = shape.sides.copy()
        vol = shape.volume

        def _eval(pts, s=s):
            t = np.clip(s[None, :] - np.abs(pts), 0.0, None)
            return np.prod(t, axis=1)

        # max gradient norm of prod(s_i - |y_i|): bounded by vol * |(1/s_i)|_2
        lip = vol * float(np.linalg.norm(1.0 / s))
        # the sphere average of g kinks where r-balls first clear a face
        # span: at every norm of a nonempty subset of the side lengths
        kinks = sorted({
            float(np.linalg.norm(s[list(idx)]))
            for m in range(1, s.size + 1)
            for idx in combinations(range(s.size), m)
        })
        return Covariogram(shape.d, vol, shape.diameter, lip,
                           "closed_form:box", _eval,
                           radial_kinks=np.array(kinks))

    raise UnsupportedShapeError(
        f"no closed-form covariogram for {type(shape).__name__}; "
        "rasterize and use covariogram_grid")


# ---------------------------------------------------------------------------
# voxel sets
# ---------------------------------------------------------------------------

class VoxelSet:
    """Bitmask on a regular grid: cell (i1..id) covers origin + h*[i, i+1).

    Occupied cells must keep one empty cell of margin to every grid edge, so
    correlation stencils never clip.  The constructor enforces this.
    """

    def __init__(self, mask, spacing, origin):
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim not in (1, 2, 3):
            raise ValueError("voxel sets supported in d = 1, 2, 3")
        if not mask.any():
            raise ValueError("empty voxel set")
        for ax in range(mask.ndim):
            first = np.moveaxis(mask, ax, 0)[0]
            last = np.moveaxis(mask, ax, 0)[-1]
            if first.any() or last.any():
                raise ValueError("occupied cells must not touch the grid edge")
        self.mask = mask
        self.spacing = float(spacing)
        self.origin = np.atleast_1d(np.asarray(origin, dtype=float))
        if self.origin.size != mask.ndim:
            raise ValueError("origin dimension mismatch")
        self.d = mask.ndim

    @property
    def volume(self):
        return float(np.count_nonzero(self.mask)) * self.spacing ** self.d

    @property
    def measure(self):
        return self.volume

    def bounding_box(self):
        idx = np.nonzero(self.mask)
        lo = self.origin + self.spacing * np.array([i.min() for i in idx])
        hi = self.origin + self.spacing * np.array([i.max() + 1 for i in idx])
        return lo, hi

    @property
    def diameter(self):
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))

    def contains(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        idx = np.floor((pts - self.origin) / self.spacing).astype(int)
        ok = np.all((idx >= 0) & (idx < np.array(self.mask.shape)), axis=1)
        out = np.zeros(pts.shape[0], dtype=bool)
        if np.any(ok):
            out[ok] = self.mask[tuple(idx[ok].T)]
        return out

    def save(self, path):
        with open(path, "wb") as fh:
            header = ["nuperim-voxelset 1",
                      f"d {self.d}",
                      "shape " + " ".join(str(n) for n in self.mask.shape),
                      f"spacing {self.spacing!r}",
                      "origin " + " ".join(repr(float(x)) for x in self.origin),
                      "data u8", ""]
            fh.write("\n".join(header).encode())
            fh.write(self.mask.astype(np.uint8).tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            blob = fh.read()
        head, _, body = blob.partition(b"data u8\n")
        fields = {}
        lines = head.decode().strip().splitlines()
        if not lines or lines[0] != "nuperim-voxelset 1":
            raise ValueError("not a nuperim voxelset file")
        for line in lines[1:]:
            key, _, rest = line.partition(" ")
            fields[key] = rest
        shape = tuple(int(tok) for tok in fields["shape"].split())
        mask = np.frombuffer(body, dtype=np.uint8, count=int(np.prod(shape)))
        return cls(mask.reshape(shape).astype(bool),
                   float(fields["spacing"]),
                   [float(tok) for tok in fields["origin"].split()])


def rasterize(shape, spacing, pad=2):
    """Cell-center rasterization of an analytic shape onto a padded grid."""
    lo, hi = shape.bounding_box()
    lo = np.atleast_1d(lo) - pad * spacing
    dims = np.ceil((np.atleast_1d(hi) - lo) / spacing).astype(int) + pad
    axes = [lo[i] + spacing * (np.arange(dims[i]) + 0.5)
            for i in range(len(dims))]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([g.reshape(-1) for g in grids])
    mask = shape.contains(pts).reshape(tuple(dims))
    return VoxelSet(mask, spacing, lo)


def _voxel_face_perimeter(v):
    mask = v.mask
    h = v.spacing
    total = 0
    for ax in range(mask.ndim):
        m = np.moveaxis(mask, ax, 0).astype(np.int8)
        total += np.count_nonzero(np.diff(m, axis=0))
        total += np.count_nonzero(m[0]) + np.count_nonzero(m[-1])
    return float(total) * h ** (mask.ndim - 1)


# ---------------------------------------------------------------------------
# grid correlations
# ---------------------------------------------------------------------------

def _correlate_full_fft(a, b):
    """Full linear cross-correlation sum_k a[k] b[k - j] via FFT.

    Output axis i has length na_i + nb_i - 1 with lag 0 at index nb_i - 1.
    Power-of-two padding on every axis.
    """
    a = a.astype(float)
    b = b.astype(float)
    out_shape = [a.shape[i] + b.shape[i] - 1 for i in range(a.ndim)]
    pad = [1 << (n - 1).bit_length() for n in out_shape]
    fa = rfftn(a, pad)
    # correlation c[j] = sum_k a[k] b[k-j]: flip b spatially and convolve
    flip = tuple(slice(None, None, -1) for _ in range(b.ndim))
    fbr = rfftn(b[flip], pad)
    conv = irfftn(fa * fbr, pad)
    sl = tuple(slice(0, n) for n in out_shape)
    return conv[sl]


def _correlate_full_direct(a, b):
    """Brute-force counterpart of _correlate_full_fft (small grids only)."""
    a = a.astype(float)
    b = b.astype(float)
    out_shape = tuple(a.shape[i] + b.shape[i] - 1 for i in range(a.ndim))
    out = np.zeros(out_shape)
    it = np.ndindex(*out_shape)
    nb = b.shape
    for j in it:
        # c[j] = sum_k a[k] b[k - (j - (nb-1))]
        lag = tuple(j[i] - (nb[i] - 1) for i in range(a.ndim))
        sa, sb = [], []
        for i in range(a.ndim):
            lo = max(0, lag[i])
            hi = min(a.shape[i], b.shape[i] + lag[i])
            if lo >= hi:
                sa = None
                break
            sa.append(slice(lo, hi))
            sb.append(slice(lo - lag[i], hi - lag[i]))
        if sa is None:
            continue
        out[j] = np.sum(a[tuple(sa)] * b[tuple(sb)])
    return out


def cross_covariogram_grid(va, vb, method="fft"):
    """Sampled X(y) = |va intersect (vb + y)| for voxel sets on one grid.

    Requires equal spacing; origins may differ (the lag axes absorb the
    offset).  Returns a Covariogram-like evaluator (volume field holds X(0)).
    """
    if abs(va.spacing - vb.spacing) > 1e-15 * va.spacing:
        raise ValueError("voxel sets must share a spacing")
    h = va.spacing
    d = va.d
    if method == "fft":
        corr = _correlate_full_fft(va.mask, vb.mask)
    elif method == "direct":
        corr = _correlate_full_direct(va.mask, vb.mask)
    else:
        raise ValueError("method must be 'fft' or 'direct'")
    # masks are 0/1, so lag values are integer cell counts: snapping the
    # FFT output to them makes translated sets compare bit-for-bit equal
    if va.mask.dtype == bool and vb.mask.dtype == bool:
        corr = np.rint(corr)
    corr = np.clip(corr, 0.0, None) * h ** d
    # lag j corresponds to displacement y = origin_a - origin_b + h*(j-(nb-1))
    nb = vb.mask.shape
    axes = []
    for i in range(d):
        lags = (np.arange(corr.shape[i]) - (nb[i] - 1)) * h
        axes.append(lags + (va.origin[i] - vb.origin[i]))
    interp = RegularGridInterpolator(axes, corr, method="linear",
                                     bounds_error=False, fill_value=0.0)

    def _eval(pts):
        return np.clip(interp(pts), 0.0, None)

    grad = max(float(np.max(np.abs(np.diff(corr, axis=ax)))) / h
               for ax in range(d))
    lo_a, hi_a = va.bounding_box()
    lo_b, hi_b = vb.bounding_box()
    span = np.maximum(np.abs(hi_a - lo_b), np.abs(hi_b - lo_a))
    support = float(np.linalg.norm(span)) + h * math.sqrt(d)
    x0 = float(np.sum(va.mask & vb.mask) * h ** d) \
        if va.mask.shape == vb.mask.shape and np.allclose(va.origin, vb.origin) \
        else float(_eval(np.zeros((1, d)))[0])
    return Covariogram(d, x0, support, grad, "sampled", _eval,
                       sample_spacing=h)


def covariogram_grid(v, method="fft"):
    """FFT (or direct-sum) autocorrelation covariogram of a voxel set."""
    cov = cross_covariogram_grid(v, v, method=method)
    cov.volume = v.volume  # exact at lag zero
    return cov
