"""Command-line front end.

``nuperim --config run.ini [--set section.key=value ...] [--out DIR]``
executes the command named in the config's [run] section and writes
``result.json`` plus ``manifest.json`` (and ``series.csv`` with a rendered
``sweep.png`` for sweep-type commands) into the output directory.

``nuperim plot series.csv [--out DIR]`` re-reads an emitted series file and
writes a standalone gnuplot script next to a PNG rendering.

Exit codes: 0 success, 2 configuration/validation problems, 3 numerical
failures (non-admissible measures, quadrature that cannot reach tolerance,
hypothesis-gate violations).
"""

import argparse
import hashlib
import json
import platform
import sys
import time
from pathlib import Path

from . import __version__, asymptotics, config, perimeter
from .errors import (ConfigError, DivergenceError, GateFailure,
                     NonAdmissibleError, NuperimError, QuadratureError)
from .plotting import emit_plot_script, render_series_png, \
    read_series_csv, render_sweep_result

_NUMERICAL = (NonAdmissibleError, QuadratureError, DivergenceError,
              GateFailure)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "plot":
        return _plot_main(argv[1:])
    return _run_main(argv)


def _run_main(argv):
    ap = argparse.ArgumentParser(
        prog="nuperim",
        description="Nonlocal nu-perimeters: perimeters, sweeps, oracles.")
    ap.add_argument("--config", required=True, help="INI run configuration")
    ap.add_argument("--set", dest="overrides", action="append", default=[],
                    metavar="SEC.KEY=VAL", help="override a config value")
    ap.add_argument("--out", default=None, help="output directory")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args(argv)
    try:
        cfg = config.parse_config(args.config, args.overrides)
        return _dispatch(cfg, args)
    except ConfigError as exc:
        print(f"nuperim: config error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL as exc:
        print(f"nuperim: numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3
    except NuperimError as exc:
        print(f"nuperim: error: {exc}", file=sys.stderr)
        return 2


def _plot_main(argv):
    ap = argparse.ArgumentParser(prog="nuperim plot",
                                 description="Render an emitted series.csv.")
    ap.add_argument("csv", help="series file written by a sweep command")
    ap.add_argument("--out", default=None, help="output directory")
    args = ap.parse_args(argv)
    try:
        src = Path(args.csv)
        out = Path(args.out) if args.out else src.parent
        out.mkdir(parents=True, exist_ok=True)
        script = out / (src.stem + ".gp")
        emit_plot_script(src, script)
        render_series_png(read_series_csv(src), out / (src.stem + ".png"))
    except ConfigError as exc:
        print(f"nuperim: plot error: {exc}", file=sys.stderr)
        return 2
    print(str(script))
    return 0


def _dispatch(cfg, args):
    command = cfg["run"]["command"]
    seed = args.seed if args.seed is not None else \
        int(cfg["run"].get("seed", 0))
    threads = args.threads if args.threads is not None else \
        int(cfg["run"].get("threads", 1))
    out_dir = Path(args.out or cfg.get("output", {}).get("dir", "out"))
    out_dir.mkdir(parents=True, exist_ok=True)
    q = config.build_quadrature(cfg.get("quadrature"))
    inputs_hash = _hash_inputs(cfg, seed)

    body = config.build_body(cfg["body"]) if "body" in cfg else None
    result, sweep_res = _execute(command, cfg, body, q, seed, threads)
    result["inputs_hash"] = inputs_hash

    if sweep_res is not None:
        sweep_res.to_csv(out_dir / "series.csv")
        render_sweep_result(sweep_res, out_dir / "sweep.png")
    _write_json(out_dir / "result.json", result)
    _write_json(out_dir / "manifest.json", _manifest(inputs_hash, seed))
    return 0


def _execute(command, cfg, body, q, seed, threads):
    """Returns (result dict, SweepResult or None)."""
    if command == "constants":
        d = int(float(cfg.get("measure", {}).get("d", 2)))
        return dict(asymptotics.universal_constants(d), method="closed-form"), \
            None

    if command == "perimeter":
        shape = config.build_shape(_sec(cfg, "set", command))
        m = config.build_measure(_sec(cfg, "measure", command), body)
        res = perimeter.per_nu(shape, m, q)
        return _result_dict(res), None

    if command == "oracle":
        shape = config.build_shape(_sec(cfg, "set", command))
        m = config.build_measure(_sec(cfg, "measure", command), body)
        samples = int(float(cfg["run"].get("samples", 1_000_000)))
        res = perimeter.per_nu_mc_oracle(shape, m, samples=samples, seed=seed)
        return _result_dict(res), None

    if command == "coarea":
        levels = config.build_nested_levels(_sec(cfg, "set", command))
        m = config.build_measure(_sec(cfg, "measure", command), body)
        h = float(cfg["set"].get("spacing", 1.0 / 64.0))
        u = asymptotics._nested_step_function(
            [s for s, _ in levels], [c for _, c in levels], h)
        lhs = perimeter.f_nu(u, m, q)
        rhs = perimeter.coarea_rhs(u, m, q)
        return {
            "f_nu": lhs.value, "coarea": rhs.value,
            "gap": abs(lhs.value - rhs.value),
            "err": lhs.err + rhs.err, "method": "coarea-comparison",
        }, None

    if command == "sweep":
        shape = config.build_shape(_sec(cfg, "set", command))
        sweep_sec = _sec(cfg, "sweep", command)
        fam = config.build_family(sweep_sec, _sec(cfg, "measure", command),
                                  body)
        regime = sweep_sec.get("regime")
        if regime is None:
            raise ConfigError("[sweep] needs a regime")
        grid = config.build_grid(sweep_sec)
        res = asymptotics.sweep(fam, shape, regime, grid, q=q,
                                threads=threads)
        return _sweep_dict(res, cfg), res

    if command == "aniso":
        if body is None:
            raise ConfigError("command 'aniso' needs a [body] section")
        sweep_sec = _sec(cfg, "sweep", command)
        direction = sweep_sec.get("direction", "alpha_up")
        grid = config.build_grid(sweep_sec)
        if direction == "sobolev":
            levels = config.build_nested_levels(_sec(cfg, "set", command))
            res = asymptotics.aniso_sobolev_sweep(levels, body, grid, q=q,
                                                  threads=threads)
        else:
            shape = config.build_shape(_sec(cfg, "set", command))
            res = asymptotics.aniso_sweep(body, shape, direction, grid, q=q,
                                          threads=threads)
        return _sweep_dict(res, cfg), res

    raise ConfigError(f"unknown command {command!r}")


def _sec(cfg, name, command):
    if name not in cfg:
        raise ConfigError(f"command {command!r} needs a [{name}] section")
    return cfg[name]


def _result_dict(res):
    return {"value": res.value, "err": res.err,
            "breakdown": {k: _plain(v) for k, v in res.breakdown.items()},
            "method": res.method}


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    try:
        return float(v)
    except (TypeError, ValueError):
        return str(v)


def _sweep_dict(res, cfg):
    out = res.to_dict()
    tol = cfg["run"].get("tolerance")
    if tol is not None:
        tol = float(tol)
        out["tolerance"] = tol
        out["pass"] = bool(res.residual <= tol)
    return out


def _hash_inputs(cfg, seed):
    canon = json.dumps({"cfg": cfg, "seed": seed}, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()


def _manifest(inputs_hash, seed):
    import matplotlib
    import numpy
    import scipy
    return {
        "inputs_hash": inputs_hash,
        "seed": seed,
        "versions": {
            "python": platform.python_version(),
            "numpy": numpy.__version__,
            "scipy": scipy.__version__,
            "matplotlib": matplotlib.__version__,
            "nuperim": __version__,
        },
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, default=float)
        fh.write("\n")


if __name__ == "__main__":
    sys.exit(main())
