"""Command-line interface: grow clusters, run experiments, emit CSV/SVG.

Commands
--------
grow          grow one cluster, write its angle sequence, optionally an SVG
fluctuations  discrete-model ensemble: samples CSV + moment report CSV
limit-field   spectral-simulator ensemble: moment report CSV
local         small-scale fluctuation experiment CSV
compare       align two moment CSVs and report cross z-scores

Every output is accompanied by a ``<output>.manifest.json`` recording the
resolved configuration, seed, and tool version; re-running with the manifest
configuration reproduces the data files bit-for-bit on the same platform.

Configuration precedence: command-line flags override ``--config`` file
entries (flat ``key=value`` lines, keys mirroring long flag names, repeatable
flags comma-separated), which override built-in defaults.

Exit codes: 0 success, 1 comparison failure, 2 usage or configuration error,
3 runtime numeric error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .cluster import GrowthConfig, Regime, grow, trace_boundary
from .conformal import DomainError
from .limitfield import default_mode_count, simulate_field_ensemble
from .stats import (
    EnsembleSpec,
    MomentReport,
    MomentRow,
    compare_to_theory,
    estimate_moments,
    local_experiment,
    run_ensemble,
)
from .theory import CovarianceSpec, covariance_cross, covariance_same, fluctuation_variance

__all__ = ["main"]

SAMPLES_HEADER = ["t", "sigma", "angle", "run", "re", "im"]
MOMENTS_HEADER = ["key_s", "key_t", "sigma", "alpha", "stat", "estimate", "se", "theory", "zscore"]
LOCAL_HEADER = ["delta", "sigma", "n", "capacity", "stat", "estimate", "se", "target"]
COMPARE_HEADER = ["key_s", "key_t", "sigma", "alpha", "stat", "estimate_a", "estimate_b", "zscore"]

_DEFAULTS = {
    "n": 2000,
    "seed": 1,
    "runs": 200,
    "t": [1.0],
    "sigma": [0.5],
    "angle": [0.0],
    "points": 4096,
    "eta": 1e-8,
    "modes": None,
    "delta": None,
    "c": None,
    "local_deltas": [0.1, 0.05, 0.025],
}


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{line_no}: expected key=value")
                key, value = line.split("=", 1)
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return out


def _resolve(args: argparse.Namespace, key: str, cast, *, repeatable: bool = False):
    """Flag value if given, else config entry, else built-in default."""
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None and flag != []:
        return flag
    config = getattr(args, "_config_values", {})
    if key in config:
        raw = config[key]
        if repeatable:
            return [cast(part) for part in raw.split(",") if part.strip()]
        return cast(raw)
    return _DEFAULTS.get(key)


@dataclass
class RunManifest:
    command: str
    config: dict
    master_seed: int
    version: str
    timestamp: str
    outputs: list[str]

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _write_manifest(command: str, config: dict, seed: int, outputs: list[str]) -> None:
    manifest = RunManifest(
        command=command,
        config=config,
        master_seed=seed,
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        outputs=outputs,
    )
    manifest.write(outputs[0] + ".manifest.json")


def _write_samples_csv(path: str, result) -> None:
    g = len(result.spec.grid)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SAMPLES_HEADER)
        for idx, s in enumerate(result.samples):
            writer.writerow(
                [_fmt(s.t), _fmt(s.sigma), _fmt(s.a), idx // g, _fmt(s.value.real), _fmt(s.value.imag)]
            )


def _write_moments_csv(path: str, report: MomentReport) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MOMENTS_HEADER)
        for row in report.rows:
            writer.writerow(
                [
                    _fmt(row.key_s), _fmt(row.key_t), _fmt(row.sigma), _fmt(row.alpha),
                    row.stat, _fmt(row.estimate), _fmt(row.se), _fmt(row.theory), _fmt(row.zscore),
                ]
            )


def _read_moments_csv(path: str) -> dict[tuple, dict]:
    out = {}
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != MOMENTS_HEADER:
                raise UsageError(f"{path}: unexpected header {reader.fieldnames}")
            for row in reader:
                key = (row["key_s"], row["key_t"], row["sigma"], row["alpha"], row["stat"])
                out[key] = {"estimate": float(row["estimate"]), "se": float(row["se"])}
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return out


def _write_boundary_svg(path: str, points: np.ndarray) -> None:
    """Single closed path over a unit-circle underlay, viewBox auto-fitted."""
    xs = points.real
    ys = -points.imag
    lim = 1.1 * max(1.0, float(np.abs(points).max()))
    size = 2.0 * lim
    parts = [f"M {xs[0]:.6f} {ys[0]:.6f}"]
    parts.extend(f"L {x:.6f} {y:.6f}" for x, y in zip(xs[1:], ys[1:]))
    parts.append("Z")
    d = " ".join(parts)
    svg = (
        f'<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{-lim:.6f} {-lim:.6f} {size:.6f} {size:.6f}">\n'
        f'  <circle cx="0" cy="0" r="1" fill="none" stroke="#999999" '
        f'stroke-width="{size / 800:.6f}"/>\n'
        f'  <path d="{d}" fill="none" stroke="#1f3b73" stroke-width="{size / 800:.6f}"/>\n'
        f"</svg>\n"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)


def _growth_config(n: int, delta, c, seed: int) -> GrowthConfig:
    if delta is not None and c is not None:
        raise UsageError("--delta and --c are mutually exclusive")
    if delta is None and c is None:
        return GrowthConfig(n=n, seed=seed, regime=Regime.UNIT)
    return GrowthConfig(n=n, seed=seed, delta=delta, capacity=c, regime=Regime.FIXED_T)


def _grid(args) -> tuple[tuple[float, float, float], ...]:
    ts = [float(x) for x in _resolve(args, "t", float, repeatable=True)]
    sigmas = [float(x) for x in _resolve(args, "sigma", float, repeatable=True)]
    angles = [float(x) for x in _resolve(args, "angle", float, repeatable=True)]
    return tuple((t, s, a) for t in ts for s in sigmas for a in angles)


def _cmd_grow(args) -> int:
    n = int(_resolve(args, "n", int))
    if n < 1:
        raise UsageError("--n must be >= 1")
    seed = int(_resolve(args, "seed", int))
    delta = _resolve(args, "delta", float)
    c = _resolve(args, "c", float)
    out = args.out or "cluster.csv"
    config = _growth_config(n, delta, c, seed)
    cluster = grow(config)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "theta"])
        for idx, theta in enumerate(cluster.angles, 1):
            writer.writerow([idx, _fmt(theta)])
    outputs = [out]
    if args.svg:
        points = trace_boundary(
            cluster, n, m_points=int(_resolve(args, "points", int)), eta=float(_resolve(args, "eta", float))
        )
        _write_boundary_svg(args.svg, points)
        outputs.append(args.svg)
    _write_manifest(
        "grow",
        {
            "n": n, "seed": seed, "delta": delta, "c": c,
            "points": int(_resolve(args, "points", int)), "eta": float(_resolve(args, "eta", float)),
            "svg": args.svg, "out": out,
        },
        seed,
        outputs,
    )
    print(f"grew {n} particles (capacity {cluster.capacity:.6g}) -> {', '.join(outputs)}")
    return 0


def _cmd_fluctuations(args) -> int:
    n = int(_resolve(args, "n", int))
    seed = int(_resolve(args, "seed", int))
    runs = int(_resolve(args, "runs", int))
    delta = _resolve(args, "delta", float)
    c = _resolve(args, "c", float)
    grid = _grid(args)
    out = args.out or "fluctuations"
    spec = EnsembleSpec(runs=runs, growth=_growth_config(n, delta, c, seed), grid=grid, master_seed=seed)
    result = run_ensemble(spec)
    report = estimate_moments(result)
    comparison = compare_to_theory(report)
    samples_path = out + ".samples.csv"
    moments_path = out + ".moments.csv"
    _write_samples_csv(samples_path, result)
    _write_moments_csv(moments_path, report)
    _write_manifest(
        "fluctuations",
        {"n": n, "seed": seed, "runs": runs, "delta": delta, "c": c,
         "t": [g[0] for g in grid], "sigma": [g[1] for g in grid], "angle": [g[2] for g in grid],
         "out": out},
        seed,
        [samples_path, moments_path],
    )
    for verdict in comparison.failures():
        row = verdict.row
        print(
            f"FAIL {row.stat} at (s={row.key_s:g}, t={row.key_t:g}, alpha={row.alpha:g}): "
            f"estimate {row.estimate:.6g} vs theory {row.theory:.6g} (tol {verdict.tolerance:.3g})",
            file=sys.stderr,
        )
    print(
        f"{runs} runs at n={n}: {len(comparison.verdicts)} comparisons, "
        f"{len(comparison.failures())} failures -> {samples_path}, {moments_path}"
    )
    return 0 if comparison.passed else 1


def _theory_report_rows_limit(grid, values) -> MomentReport:
    from .stats import _moment_rows_for_point, _pair_rows  # same estimators as the discrete path

    rows: list[MomentRow] = []
    for j, (t, sigma, a) in enumerate(grid):
        rows.extend(_moment_rows_for_point(t, sigma, a, values[:, j].real, values[:, j].imag))
    g = len(grid)
    for jp in range(g):
        for jq in range(g):
            if jp == jq:
                continue
            t_p, s_p, _ = grid[jp]
            t_q, s_q, _ = grid[jq]
            if s_p != s_q or t_p < t_q or (t_p == t_q and jp > jq):
                continue
            rows.extend(
                _pair_rows(
                    grid[jp], grid[jq],
                    values[:, jp].real, values[:, jp].imag,
                    values[:, jq].real, values[:, jq].imag,
                )
            )
    return MomentReport(rows=tuple(rows), metadata={"runs": values.shape[0]})


def _cmd_limit_field(args) -> int:
    seed = int(_resolve(args, "seed", int))
    runs = int(_resolve(args, "runs", int))
    grid = _grid(args)
    modes = _resolve(args, "modes", int)
    if modes is None:
        modes = default_mode_count(math.exp(min(g[1] for g in grid)))
    modes = int(modes)
    out = args.out or "limitfield"
    values = simulate_field_ensemble(modes, grid, runs, seed)
    report = _theory_report_rows_limit(grid, values)
    report.metadata.update({"modes": modes, "master_seed": seed})
    comparison = compare_to_theory(report)
    moments_path = out + ".moments.csv"
    _write_moments_csv(moments_path, report)
    _write_manifest(
        "limit-field",
        {"seed": seed, "runs": runs, "modes": modes,
         "t": [g[0] for g in grid], "sigma": [g[1] for g in grid], "angle": [g[2] for g in grid],
         "out": out},
        seed,
        [moments_path],
    )
    print(
        f"{runs} trajectories at K={modes}: {len(comparison.verdicts)} comparisons, "
        f"{len(comparison.failures())} failures -> {moments_path}"
    )
    return 0 if comparison.passed else 1


def _cmd_local(args) -> int:
    seed = int(_resolve(args, "seed", int))
    runs = int(_resolve(args, "runs", int))
    deltas = args.delta or _DEFAULTS["local_deltas"]
    out = args.out or "local.csv"
    report = local_experiment([float(d) for d in deltas], master_seed=seed, runs=runs)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LOCAL_HEADER)
        for row in report.rows:
            writer.writerow(
                [_fmt(row.delta), _fmt(row.sigma), row.n, _fmt(row.capacity),
                 row.stat, _fmt(row.estimate), _fmt(row.se), _fmt(row.target)]
            )
    _write_manifest("local", {"seed": seed, "runs": runs, "delta": list(deltas), "out": out}, seed, [out])
    print(f"local experiment over deltas {list(deltas)} -> {out}")
    return 0


def _cmd_compare(args) -> int:
    a = _read_moments_csv(args.report_a)
    b = _read_moments_csv(args.report_b)
    if set(a) != set(b):
        only_a = len(set(a) - set(b))
        only_b = len(set(b) - set(a))
        raise UsageError(
            f"report grids do not align: {only_a} keys only in {args.report_a}, "
            f"{only_b} only in {args.report_b}"
        )
    rows = []
    worst = 0.0
    for key in sorted(a):
        ea, eb = a[key], b[key]
        se = math.hypot(ea["se"], eb["se"])
        z = (ea["estimate"] - eb["estimate"]) / se if se > 0 else 0.0
        worst = max(worst, abs(z))
        rows.append(list(key[:4]) + [key[4], _fmt(ea["estimate"]), _fmt(eb["estimate"]), _fmt(z)])
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(COMPARE_HEADER)
            writer.writerows(rows)
        _write_manifest(
            "compare", {"report_a": args.report_a, "report_b": args.report_b, "out": args.out}, 0, [args.out]
        )
    print(f"{len(rows)} aligned statistics, max |z| = {worst:.3f}")
    return 0 if worst <= 3.0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hlzero", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, grid: bool):
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--out", help="output path or prefix")
        if grid:
            p.add_argument("--t", type=float, action="append", help="observation time (repeatable)")
            p.add_argument("--sigma", type=float, action="append", help="radial coordinate (repeatable)")
            p.add_argument("--angle", type=float, action="append", help="observation angle (repeatable)")
            p.add_argument("--runs", type=int, help="ensemble size")

    p_grow = sub.add_parser("grow", help="grow one cluster")
    p_grow.add_argument("--n", type=int, help="particle count")
    p_grow.add_argument("--delta", type=float, help="particle diameter scale")
    p_grow.add_argument("--c", type=float, help="particle capacity")
    p_grow.add_argument("--svg", help="write boundary trace SVG here")
    p_grow.add_argument("--points", type=int, help="boundary trace vertices")
    p_grow.add_argument("--eta", type=float, help="boundary radial offset")
    common(p_grow, grid=False)
    p_grow.set_defaults(func=_cmd_grow)

    p_fluc = sub.add_parser("fluctuations", help="discrete-model ensemble")
    p_fluc.add_argument("--n", type=int, help="particle count")
    p_fluc.add_argument("--delta", type=float, help="particle diameter scale")
    p_fluc.add_argument("--c", type=float, help="particle capacity")
    common(p_fluc, grid=True)
    p_fluc.set_defaults(func=_cmd_fluctuations)

    p_lim = sub.add_parser("limit-field", help="spectral-simulator ensemble")
    p_lim.add_argument("--modes", type=int, help="mode truncation K")
    common(p_lim, grid=True)
    p_lim.set_defaults(func=_cmd_limit_field)

    p_loc = sub.add_parser("local", help="small-scale fluctuation experiment")
    p_loc.add_argument("--delta", type=float, action="append", help="particle scale (repeatable)")
    p_loc.add_argument("--runs", type=int, help="ensemble size per delta")
    common(p_loc, grid=False)
    p_loc.set_defaults(func=_cmd_local)

    p_cmp = sub.add_parser("compare", help="cross z-scores of two moment reports")
    p_cmp.add_argument("report_a")
    p_cmp.add_argument("report_b")
    p_cmp.add_argument("--out", help="diff report CSV path")
    p_cmp.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    if getattr(args, "config", None):
        try:
            args._config_values = _read_config(args.config)
        except UsageError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        args._config_values = {}
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except (OverflowError, FloatingPointError, ZeroDivisionError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
