"""Command-line interface.

Two subcommands:

* ``infldiag detect``   — run one detection procedure on a CSV dataset.
* ``infldiag simulate`` — run a Monte Carlo grid from a JSON config.

Exit codes: 0 success, 2 configuration error, 3 solver/numerical failure.
"""

import argparse
import json
import os
import sys
from dataclasses import replace

from ._parallel import default_threads
from .detection import RgdConfig, clusmip, detect_single_gdf, df_lasso_detect, him_detect, mip
from .errors import ConfigError, InfldiagError, InvalidSpecError
from .io import (
    config_digest,
    load_csv,
    make_manifest,
    result_payload,
    utc_now,
    write_json,
    write_scores_csv,
)
from .selectors import SelectorSpec
from .simulation import ProcedureSpec, ScenarioConfig, run_experiment

PROCEDURE_NAMES = {
    "clusmip": "clusmip",
    "mip": "mip",
    "dflasso": "df_lasso",
    "gdf-single": "gdf_single",
    "him": "him",
}
SELECTOR_NAMES = {
    "lasso": "lasso",
    "slasso": "scaled_lasso",
    "enet": "elastic_net",
    "scad": "scad",
    "mcp": "mcp",
}
CLUSTERING_NAMES = {
    "kmeans": "kmeans",
    "kmeans++": "kmeans_pp",
    "spectral": "spectral",
}

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="infldiag",
        description="Detection of observations that unduly influence "
        "high-dimensional variable selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    det = sub.add_parser("detect", help="run a detection procedure on a CSV dataset")
    det.add_argument("--input", required=True, help="CSV file with a header row")
    det.add_argument("--response", required=True, help="name of the response column")
    det.add_argument("--procedure", required=True, choices=sorted(PROCEDURE_NAMES))
    det.add_argument("--selector", choices=sorted(SELECTOR_NAMES))
    det.add_argument("--alpha", type=float, default=0.05)
    det.add_argument("--alpha0", type=float, default=0.05)
    det.add_argument("--clustering", choices=sorted(CLUSTERING_NAMES), default="kmeans++")
    det.add_argument("--seed", type=int, default=0)
    det.add_argument("--threads", type=int, default=None)
    det.add_argument("--out-dir", required=True)
    det.add_argument("--rgd-m", type=int, default=100, help="MIP: number of random subsets")
    det.add_argument("--rgd-size", type=int, default=None, help="MIP: subset size (default n/2)")

    sim = sub.add_parser("simulate", help="run a Monte Carlo grid from a JSON config")
    sim.add_argument("--config", required=True, help="JSON scenario-grid file")
    sim.add_argument("--out-dir", required=True)
    sim.add_argument("--threads", type=int, default=None)
    return parser


def _detect_result(args, data, threads):
    procedure = PROCEDURE_NAMES[args.procedure]
    if procedure in ("mip", "him") and args.selector is not None:
        raise ConfigError(f"--procedure {args.procedure} is selector-free; drop --selector")
    if procedure == "df_lasso" and args.selector not in (None, "lasso"):
        raise ConfigError("dflasso is defined for the lasso; drop --selector")
    if procedure in ("clusmip", "gdf_single") and args.selector is None:
        raise ConfigError(f"--procedure {args.procedure} requires --selector")
    if not 0.0 < args.alpha < 1.0 or not 0.0 < args.alpha0 < 1.0:
        raise ConfigError("--alpha and --alpha0 must lie in (0, 1)")

    if procedure == "him":
        return him_detect(data, alpha=args.alpha)
    if procedure == "mip":
        cfg = RgdConfig(m=args.rgd_m, n_sub=args.rgd_size, seed=args.seed)
        return mip(data, cfg, alpha=args.alpha, threads=threads)
    spec = SelectorSpec(penalty=SELECTOR_NAMES[args.selector or "lasso"], seed=args.seed)
    if procedure == "df_lasso":
        return df_lasso_detect(data, spec, threads=threads)
    if procedure == "gdf_single":
        return detect_single_gdf(data, spec, alpha=args.alpha, threads=threads)
    return clusmip(
        data, spec, clustering=CLUSTERING_NAMES[args.clustering],
        alpha0=args.alpha0, threads=threads,
    )


def cmd_detect(args):
    threads = args.threads if args.threads is not None else default_threads()
    data = load_csv(args.input, args.response)
    started = utc_now()
    result = _detect_result(args, data, threads)
    finished = utc_now()

    os.makedirs(args.out_dir, exist_ok=True)
    config_payload = {
        "command": "detect",
        "input": os.path.abspath(args.input),
        "response": args.response,
        "procedure": args.procedure,
        "selector": args.selector,
        "alpha": args.alpha,
        "alpha0": args.alpha0,
        "clustering": args.clustering,
        "seed": args.seed,
        "rgd_m": args.rgd_m,
        "rgd_size": args.rgd_size,
    }
    write_json(os.path.join(args.out_dir, "result.json"), result_payload(result))
    write_scores_csv(os.path.join(args.out_dir, "scores.csv"), result)
    write_json(
        os.path.join(args.out_dir, "manifest.json"),
        make_manifest(config_payload, args.seed, started, finished,
                      {result.procedure_id: result.wall_time}),
    )
    n_inf = len(result.influential)
    print(f"{result.procedure_id}: flagged {n_inf} of {data.n} rows", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _parse_procedures(payload, alpha, alpha0):
    procs = []
    for entry in payload:
        if not isinstance(entry, dict) or "procedure" not in entry:
            raise ConfigError(f"bad procedure entry: {entry!r}")
        name = entry["procedure"]
        if name not in PROCEDURE_NAMES:
            raise ConfigError(f"unknown procedure {name!r}")
        procedure = PROCEDURE_NAMES[name]
        selector = None
        if "selector" in entry and entry["selector"] is not None:
            if entry["selector"] not in SELECTOR_NAMES:
                raise ConfigError(f"unknown selector {entry['selector']!r}")
            if procedure in ("mip", "him"):
                raise ConfigError(f"procedure {name} is selector-free")
            selector = SelectorSpec(penalty=SELECTOR_NAMES[entry["selector"]])
        if procedure in ("clusmip", "gdf_single") and selector is None:
            raise ConfigError(f"procedure {name} requires a selector")
        if procedure == "df_lasso" and selector is None:
            selector = SelectorSpec(penalty="lasso")
        clustering = CLUSTERING_NAMES[entry.get("clustering", "kmeans++")]
        rgd = RgdConfig(m=int(entry.get("m", 100)), n_sub=entry.get("n_sub"))
        procs.append(
            ProcedureSpec(
                procedure=procedure, selector=selector, clustering=clustering,
                alpha=alpha, alpha0=alpha0, rgd=rgd, threads=1,
            )
        )
    if not procs:
        raise ConfigError("no procedures configured")
    return procs


def _parse_sim_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        n = int(raw["n"])
        p = int(raw["p"])
        replicates = int(raw.get("replicates", 1))
        seed = int(raw.get("seed", 0))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"config needs integer n, p (and optional replicates, seed): {e}") from e
    alpha = float(raw.get("alpha", 0.05))
    alpha0 = float(raw.get("alpha0", 0.05))
    cells = raw.get("cells")
    if cells is None:
        cells = [{"scheme": None}]
    zetas = raw.get("zetas", [0.0])
    base = dict(
        n=n, p=p,
        design=raw.get("design", "toeplitz"),
        rho=float(raw.get("rho", 0.0)),
        block_size=int(raw.get("block_size", min(100, p))),
        beta=tuple(raw["beta"]) if "beta" in raw else None,
        sigma2=float(raw.get("sigma2", 1.0)),
        replicates=replicates,
        test_size=int(raw.get("test_size", 0)),
        seed=seed,
    )
    grid = []
    for cell in cells:
        if not isinstance(cell, dict):
            raise ConfigError(f"bad cell entry: {cell!r}")
        scheme = cell.get("scheme")
        for zeta in zetas if scheme is not None else [0.0]:
            try:
                cfg = ScenarioConfig(
                    scheme=scheme,
                    kappa_y=cell.get("kappa_y"),
                    kappa_x=cell.get("kappa_x"),
                    zeta=float(zeta),
                    **base,
                )
            except InvalidSpecError as e:
                raise ConfigError(f"invalid grid cell {cell} at zeta={zeta}: {e}") from e
            grid.append(cfg)
    procedures = _parse_procedures(raw.get("procedures", []), alpha, alpha0)
    return raw, grid, procedures


def _cell_key(cfg):
    return {
        "scheme": cfg.scheme or "clean",
        "kappa_y": cfg.kappa_y,
        "kappa_x": cfg.kappa_x,
        "zeta": cfg.zeta,
        "design": cfg.design,
        "rho": cfg.rho,
        "n": cfg.n,
        "p": cfg.p,
    }


PANELS = {
    "power": ("power",),
    "fpr": ("fpr",),
    "mse": ("mse_before", "mse_after"),
    "select_prob": ("select_prob_before", "select_prob_after"),
    "time": ("time_seconds",),
}


def cmd_simulate(args):
    threads = args.threads if args.threads is not None else default_threads()
    raw, grid, procedures = _parse_sim_config(args.config)

    all_rows = []
    all_failures = []
    summary = []
    wall_times = {}
    started = utc_now()
    for cfg in grid:
        records, failures, reports = run_experiment(cfg, procedures, threads=threads)
        key = _cell_key(cfg)
        for rec in records:
            all_rows.append({**key, **rec})
        all_failures.extend({**key, **f} for f in failures)
        cell_summary = {"cell": key, "procedures": {}}
        for rep in reports:
            cell_summary["procedures"][rep.procedure] = {
                "failures": rep.failures,
                **{
                    name: {"mean": m, "se": se, "n": k}
                    for name, (m, se, k) in rep.metrics.items()
                },
            }
            wall = rep.metrics.get("time_seconds")
            if wall is not None:
                wall_times[f"{rep.procedure}@{key['scheme']}-z{key['zeta']}"] = wall[0]
        summary.append(cell_summary)
    finished = utc_now()

    os.makedirs(args.out_dir, exist_ok=True)
    header = [
        "scheme", "kappa_y", "kappa_x", "zeta", "design", "rho", "n", "p",
        "replicate", "procedure", "metric", "value",
    ]
    lines = [",".join(header)]
    for row in all_rows:
        lines.append(
            ",".join("" if row.get(h) is None else str(row.get(h)) for h in header)
        )
    from .io import atomic_write_text

    atomic_write_text(os.path.join(args.out_dir, "metrics.csv"), "\n".join(lines) + "\n")
    write_json(
        os.path.join(args.out_dir, "summary.json"),
        {"cells": summary, "failures": all_failures},
    )

    plot_dir = os.path.join(args.out_dir, "plotdata")
    os.makedirs(plot_dir, exist_ok=True)
    for panel, metrics in PANELS.items():
        plines = ["scheme,kappa_y,kappa_x,zeta,procedure,metric,mean,se,n"]
        for cell in summary:
            k = cell["cell"]
            for proc, stats_ in cell["procedures"].items():
                for metric in metrics:
                    if metric not in stats_:
                        continue
                    s = stats_[metric]
                    plines.append(
                        f"{k['scheme']},{k['kappa_y']},{k['kappa_x']},{k['zeta']},"
                        f"{proc},{metric},{s['mean']},{s['se']},{s['n']}"
                    )
        atomic_write_text(os.path.join(plot_dir, f"panel_{panel}.csv"), "\n".join(plines) + "\n")

    write_json(
        os.path.join(args.out_dir, "manifest.json"),
        make_manifest(raw, raw.get("seed", 0), started, finished, wall_times),
    )
    print(
        f"simulate: {len(grid)} cells x {grid[0].replicates} replicates, "
        f"{len(all_failures)} failures", file=sys.stderr,
    )
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "detect":
            return cmd_detect(args)
        return cmd_simulate(args)
    except (ConfigError, InvalidSpecError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InfldiagError as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
