"""Run configuration: a flat INI file with strictly validated keys.

Sections and keys are whitelisted; anything unrecognized is a hard error so
a typo like ``aplha`` cannot silently fall back to a default.  Values stay
strings here; the build_* helpers convert and construct objects.
"""

import configparser

import numpy as np

from . import convex, geometry, measures
from .errors import ConfigError
from .quadrature import QuadratureSpec

_ALLOWED = {
    "run": {"command", "seed", "threads", "samples", "tolerance"},
    "set": {"kind", "intervals", "lo", "hi", "center", "radius", "side",
            "vertices", "n_sides", "n_max", "outer", "notch", "spacing",
            "path", "shapes", "coeffs"},
    "measure": {"kind", "d", "alpha", "prefactor", "kernel", "sigma",
                "radius", "beta", "axis", "half_angle"},
    "body": {"kind", "p", "radius", "scales", "half_widths", "vertices"},
    "sweep": {"regime", "family", "normalization", "grid", "direction"},
    "quadrature": {"spherical_n", "radial_per_decade", "rel_tol",
                   "max_refinements", "r_min"},
    "output": {"dir"},
}

COMMANDS = ("perimeter", "sweep", "aniso", "coarea", "oracle", "constants")


def parse_config(path, overrides=()):
    """Sections as plain dicts, with overrides applied as section.key=value."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"bad config syntax: {exc}") from exc
    cfg = {s: dict(cp.items(s)) for s in cp.sections()}
    for ov in overrides:
        if "=" not in ov or "." not in ov.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value: {ov!r}")
        target, value = ov.split("=", 1)
        section, key = target.split(".", 1)
        cfg.setdefault(section, {})[key] = value
    for section, keys in cfg.items():
        if section not in _ALLOWED:
            raise ConfigError(f"unknown section [{section}]")
        unknown = set(keys) - _ALLOWED[section]
        if unknown:
            raise ConfigError(
                f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")
    if "run" not in cfg or "command" not in cfg["run"]:
        raise ConfigError("missing [run] command")
    if cfg["run"]["command"] not in COMMANDS:
        raise ConfigError(f"unknown command {cfg['run']['command']!r}; "
                          f"choose from {', '.join(COMMANDS)}")
    return cfg


def _need(cfg, section, command):
    if section not in cfg:
        raise ConfigError(f"command {command!r} needs a [{section}] section")
    return cfg[section]


def _floats(text):
    return [float(tok) for tok in text.replace(",", " ").split()]


def _get_float(sec, key, default=None):
    if key not in sec:
        if default is None:
            raise ConfigError(f"missing key {key!r}")
        return default
    try:
        return float(sec[key])
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {sec[key]!r}") from exc


def _get_int(sec, key, default=None):
    v = _get_float(sec, key, default)
    return int(v)


def build_shape(sec):
    kind = sec.get("kind")
    if kind is None:
        raise ConfigError("[set] needs a kind")
    try:
        if kind == "interval":
            if "intervals" in sec:
                pairs = [_floats(p) for p in sec["intervals"].split(";")]
                return geometry.IntervalUnion(pairs)
            return geometry.IntervalUnion(
                [[_get_float(sec, "lo", 0.0), _get_float(sec, "hi", 1.0)]])
        if kind in ("ball", "disk"):
            center = _floats(sec.get("center", "0 0"))
            return geometry.Ball(center, _get_float(sec, "radius", 1.0))
        if kind == "box":
            return geometry.Box(_floats(sec["lo"]), _floats(sec["hi"]))
        if kind == "square":
            s = _get_float(sec, "side", 1.0)
            return geometry.Box([0.0, 0.0], [s, s])
        if kind == "polygon":
            verts = [_floats(v) for v in sec["vertices"].split(";")]
            return geometry.Polygon(verts)
        if kind == "regular_polygon":
            return geometry.regular_polygon(
                _get_int(sec, "n_sides"), _get_float(sec, "radius", 1.0))
        if kind == "l_shape":
            return geometry.l_shape(_get_float(sec, "outer", 1.0),
                                    _get_float(sec, "notch", 0.5))
        if kind == "dyadic":
            return geometry.dyadic_set(_get_int(sec, "n_max", 40))
        if kind == "voxel":
            return geometry.VoxelSet.load(sec["path"])
    except (KeyError, ValueError, OSError) as exc:
        raise ConfigError(f"bad [set] spec: {exc}") from exc
    raise ConfigError(f"unknown set kind {kind!r}")


def build_nested_levels(sec):
    """[set] shapes = spec | spec | ...; coeffs = c1 c2 ... (outer first)."""
    if "shapes" not in sec or "coeffs" not in sec:
        raise ConfigError("nested levels need 'shapes' and 'coeffs'")
    kind = sec.get("kind", "interval")
    shapes = []
    for spec in sec["shapes"].split("|"):
        vals = _floats(spec)
        if kind == "interval":
            shapes.append(geometry.IntervalUnion([vals]))
        elif kind == "box":
            half = len(vals) // 2
            shapes.append(geometry.Box(vals[:half], vals[half:]))
        else:
            raise ConfigError("nested levels support interval or box shapes")
    coeffs = _floats(sec["coeffs"])
    if len(coeffs) != len(shapes):
        raise ConfigError("shapes and coeffs must have equal length")
    return list(zip(shapes, coeffs))


def build_body(sec):
    kind = sec.get("kind")
    try:
        if kind in ("disk", "ball"):
            r = _get_float(sec, "radius", 1.0)
            d = len(_floats(sec["scales"])) if "scales" in sec else 2
            return convex.ellipsoid([r] * d)
        if kind == "ellipsoid":
            return convex.ellipsoid(_floats(sec["scales"]))
        if kind == "box":
            return convex.box_body(_floats(sec["half_widths"]))
        if kind == "lp":
            scales = _floats(sec.get("scales", "1 1"))
            return convex.ConvexBody("lp_ball", len(scales),
                                     p=_get_float(sec, "p"),
                                     scales=np.asarray(scales, float))
        if kind == "polygon":
            verts = [_floats(v) for v in sec["vertices"].split(";")]
            return convex.polygon_sym(verts)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad [body] spec: {exc}") from exc
    raise ConfigError(f"unknown body kind {kind!r}")


def build_kernel(sec):
    name = sec.get("kernel")
    d = _get_int(sec, "d", 2)
    if name == "gaussian":
        return measures.gaussian_kernel(d, _get_float(sec, "sigma", 1.0))
    if name == "indicator_ball":
        return measures.indicator_ball_kernel(d, _get_float(sec, "radius", 1.0))
    if name == "inverse_power":
        return measures.inverse_power_kernel(
            d, _get_float(sec, "beta"), _get_float(sec, "radius", 1.0))
    if name == "cone":
        return measures.cone_kernel(
            d, _floats(sec.get("axis", "1 0")),
            _get_float(sec, "half_angle", 0.5),
            _get_float(sec, "radius", 1.0))
    raise ConfigError(f"unknown kernel {name!r}")


def build_measure(sec, body=None):
    kind = sec.get("kind")
    if kind == "fractional":
        return measures.fractional_measure(_get_int(sec, "d", 2),
                                           _get_float(sec, "alpha"))
    if kind == "stable":
        return measures.stable_measure(_get_int(sec, "d", 2),
                                       _get_float(sec, "alpha"),
                                       _get_float(sec, "prefactor", 1.0))
    if kind == "levy":
        return measures.levy_measure(_get_int(sec, "d", 2),
                                     _get_float(sec, "alpha"))
    if kind == "kernel":
        return measures.kernel_measure(build_kernel(sec))
    if kind == "anisotropic":
        if body is None:
            raise ConfigError("anisotropic measure needs a [body] section")
        return measures.anisotropic_stable_measure(body,
                                                   _get_float(sec, "alpha"))
    raise ConfigError(f"unknown measure kind {kind!r}")


def build_family(sweep_sec, measure_sec, body=None):
    family = sweep_sec.get("family")
    if family is None:
        raise ConfigError("[sweep] needs a family")
    base = build_measure(measure_sec, body)
    mode = sweep_sec.get("normalization", "cap_at_one")
    try:
        return measures.ScalingFamily(base, family, normalization_mode=mode)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_grid(sweep_sec):
    """grid = explicit comma list, or 'geom:start:stop:n'."""
    text = sweep_sec.get("grid")
    if text is None:
        raise ConfigError("[sweep] needs a grid")
    if text.startswith("geom:"):
        try:
            _, start, stop, num = text.split(":")
            return list(np.geomspace(float(start), float(stop), int(num)))
        except ValueError as exc:
            raise ConfigError(f"bad geometric grid {text!r}") from exc
    vals = _floats(text)
    if not vals:
        raise ConfigError("empty grid")
    return vals


def build_quadrature(sec):
    if sec is None:
        return QuadratureSpec()
    kw = {}
    if "spherical_n" in sec:
        kw["spherical_n"] = _get_int(sec, "spherical_n")
    if "radial_per_decade" in sec:
        kw["radial_per_decade"] = _get_int(sec, "radial_per_decade")
    if "rel_tol" in sec:
        kw["rel_tol"] = _get_float(sec, "rel_tol")
    if "max_refinements" in sec:
        kw["max_refinements"] = _get_int(sec, "max_refinements")
    if "r_min" in sec:
        kw["r_min"] = _get_float(sec, "r_min")
    return QuadratureSpec(**kw)
