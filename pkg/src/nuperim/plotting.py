"""Rendering for sweep series: PNG report panels and a gnuplot script.

Both consumers read the same delimited schema that SweepResult.to_csv
writes; rows are grouped into one panel per regime so concatenated sweep
files plot side by side.
"""

import csv
import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .errors import ConfigError

SERIES_HEADER = ["regime", "param", "C_eps", "per_nu", "normalized",
                 "target", "residual", "err_est", "runtime_ms"]


def read_series_csv(path):
    """Rows grouped by regime; raises ConfigError on schema violations."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != SERIES_HEADER:
                raise ConfigError(f"{path}: expected header {SERIES_HEADER}")
            rows = [row for row in reader if row]
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    groups = {}
    for row in rows:
        if len(row) != len(SERIES_HEADER):
            raise ConfigError(f"{path}: malformed row {row!r}")
        rec = dict(zip(SERIES_HEADER, row))
        try:
            for key in SERIES_HEADER[1:]:
                rec[key] = float(rec[key])
        except ValueError as exc:
            raise ConfigError(f"{path}: non-numeric field in {row!r}") from exc
        groups.setdefault(rec["regime"], []).append(rec)
    return groups


def render_series_png(groups, path):
    """One panel per regime: normalized value vs parameter, target hline."""
    n = len(groups)
    fig, axes = plt.subplots(n, 1, figsize=(6.4, 3.2 * n), squeeze=False)
    for ax, (regime, recs) in zip(axes[:, 0], sorted(groups.items())):
        params = [r["param"] for r in recs]
        vals = [r["normalized"] for r in recs]
        ax.plot(params, vals, "o-", label="normalized")
        target = recs[0]["target"]
        if math.isfinite(target):
            ax.axhline(target, linestyle="--", color="k", label="target")
        if min(params) > 0 and max(params) / min(params) > 10:
            ax.set_xscale("log")
        ax.set_title(regime)
        ax.set_xlabel("parameter")
        ax.set_ylabel("normalized perimeter")
        ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_sweep_result(result, path):
    groups = {}
    for row in result.rows():
        rec = dict(zip(SERIES_HEADER, row))
        for key in SERIES_HEADER[1:]:
            rec[key] = float(rec[key])
        groups.setdefault(rec["regime"], []).append(rec)
    render_series_png(groups, path)


def emit_plot_script(csv_path, out_path):
    """A self-contained gnuplot script: inline data, one panel per regime."""
    groups = read_series_csv(csv_path)
    lines = [
        f"# generated from {csv_path}",
        "set datafile separator ','",
        "set key left top",
    ]
    names = []
    for regime, recs in sorted(groups.items()):
        block = f"$sweep_{_ident(regime)}"
        names.append((block, regime, recs[0]["target"]))
        lines.append(f"{block} << EOD")
        for r in recs:
            lines.append(f"{r['param']:.10g},{r['normalized']:.12g}")
        lines.append("EOD")
    if len(names) > 1:
        lines.append(f"set multiplot layout {len(names)},1")
    for block, regime, target in names:
        lines.append(f"set title '{regime}'")
        lines.append("set xlabel 'parameter'")
        lines.append("set ylabel 'normalized perimeter'")
        pieces = [f"{block} using 1:2 with linespoints title 'normalized'"]
        if math.isfinite(target):
            pieces.append(f"{target:.12g} with lines dashtype 2 title 'target'")
        lines.append("plot " + ", ".join(pieces))
    if len(names) > 1:
        lines.append("unset multiplot")
    with open(out_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return out_path


def _ident(name):
    return "".join(ch if ch.isalnum() else "_" for ch in name)
