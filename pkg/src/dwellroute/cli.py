"""Command-line surface.

Subcommands: solve-single, solve-multi, bench, oracle, plot.  Exit codes:
0 success, 2 usage error, 3 input error, 4 solver error.  Every source of
randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from .dwell_opt import optimize_dwell, optimize_dwell_symmetric
from .errors import CapacityError, InstanceInputError, NumericsError
from .infogain import InfoParams
from .instance import Instance, Metric, load_json_instance, parse_tsplib
from .multi_vehicle import (
    MaximalStrategy,
    Neighborhood,
    SearchConfig,
    brute_force_multi,
    solve_multi,
)
from .single_vehicle import solve_single
from .svg_plot import render_record
from .tsp import solve_tsp
from .instance import generate_random_instance

RECORD_VERSION = 1
CSV_COLUMNS = [
    "instance", "n", "m", "alpha", "tau", "strategy", "neighborhood",
    "top_k", "seed", "initial_obj", "final_obj", "pct_improve", "wall_s",
]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_SOLVER = 4


class CliInputError(Exception):
    pass


def _load_instance(path: str, metric: str | None, depot_node: int) -> Instance:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise CliInputError(f"cannot read instance file {path}: {exc}") from None
    metric_enum = Metric(metric) if metric else None
    if p.suffix.lower() == ".tsp":
        inst = parse_tsplib(text, depot_nodes=(depot_node,), metric=metric_enum or Metric.EXACT)
    else:
        inst = load_json_instance(text)
        if metric_enum is not None and metric_enum is not inst.metric:
            inst = Instance(
                targets=inst.targets, depots=inst.depots, metric=metric_enum, name=inst.name
            )
    if not inst.name:
        inst = Instance(targets=inst.targets, depots=inst.depots, metric=inst.metric, name=p.stem)
    return inst


def _resolve_alpha(inst: Instance, mode: str, value: float, seed: int) -> tuple[float, float | None]:
    """Absolute alpha, or value / TSP* with TSP* from our own heuristic."""
    if mode == "absolute":
        return value, None
    tsp_star = solve_tsp(inst.depot_vertex(0), range(inst.n_targets), inst, seed=seed).cost
    if tsp_star <= 0:
        raise CliInputError("cannot use per-tsp alpha: reference tour has zero cost")
    return value / tsp_star, tsp_star


def _dwell_stats(dwells) -> dict:
    ds = sorted(float(d) for d in dwells)
    if not ds:
        return {"min": 0.0, "median": 0.0, "mean": 0.0, "max": 0.0}
    return {
        "min": ds[0],
        "median": statistics.median(ds),
        "mean": statistics.fmean(ds),
        "max": ds[-1],
    }


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        print(text)


# --- solve-single -------------------------------------------------------------

def cmd_solve_single(args) -> int:
    inst = _load_instance(args.instance, args.metric, args.depot_node)
    alpha, tsp_star = _resolve_alpha(inst, args.alpha_mode, args.alpha, args.seed)
    params = InfoParams.uniform(alpha, args.tau, inst.n_targets)

    t0 = time.perf_counter()
    tour = solve_tsp(inst.depot_vertex(0), range(inst.n_targets), inst, seed=args.seed)
    t_tour = time.perf_counter() - t0
    t0 = time.perf_counter()
    taus = [params.tau[t] for t in tour.order]
    dres = optimize_dwell(tour.cost, taus, alpha)
    t_dwell = time.perf_counter() - t0

    stats = _dwell_stats(dres.dwells)
    print(
        f"{inst.name}  n={inst.n_targets}  tour={tour.cost:.2f}  "
        f"alpha={alpha:.3e}  tau={args.tau:g}  "
        f"dwell[min/med/mean/max]={stats['min']:.2f}/{stats['median']:.2f}/"
        f"{stats['mean']:.2f}/{stats['max']:.2f}  "
        f"objective={dres.objective:.6f}  "
        f"tour_s={t_tour:.3f}  dwell_s={t_dwell:.3f}"
    )
    record = {
        "v": RECORD_VERSION,
        "kind": "single",
        "instance": inst.name,
        "n": inst.n_targets,
        "m": 1,
        "params": {
            "alpha_mode": args.alpha_mode,
            "alpha_arg": args.alpha,
            "alpha": alpha,
            "tau": args.tau,
            "tsp_star": tsp_star,
            "metric": inst.metric.value,
            "seed": args.seed,
        },
        "objective": dres.objective,
        "revisit_time": tour.cost + float(np.sum(dres.dwells)),
        "dwell_stats": stats,
        "targets": [[p.x, p.y] for p in inst.targets],
        "depots": [[p.x, p.y] for p in inst.depots],
        "routes": [
            {
                "vehicle": 0,
                "depot": [inst.depots[0].x, inst.depots[0].y],
                "order": list(tour.order),
                "dwells": [float(d) for d in dres.dwells],
                "objective": dres.objective,
            }
        ],
        "wall_s": t_tour + t_dwell,
    }
    if args.out:
        Path(args.out).write_text(json.dumps(record, indent=2))
    if args.svg:
        Path(args.svg).write_text(render_record(record))
    return EXIT_OK


# --- solve-multi --------------------------------------------------------------

def _search_config(args, seed: int) -> SearchConfig:
    return SearchConfig(
        neighborhood=Neighborhood(args.neighborhood),
        maximal_strategy=MaximalStrategy(args.strategy),
        top_k=args.top_k,
        restarts=args.restarts,
        rng_seed=seed,
    )


def _run_multi(inst: Instance, args, seed: int) -> dict:
    alpha, tsp_star = _resolve_alpha(inst, args.alpha_mode, args.alpha, seed)
    params = InfoParams.uniform(alpha, args.tau, inst.n_targets)
    cfg = _search_config(args, seed)
    t0 = time.perf_counter()
    sol = solve_multi(inst, params, cfg, m=args.vehicles)
    wall = time.perf_counter() - t0
    initial = sol.provenance["initial_objective"]
    pct = 100.0 * (sol.total - initial) / initial if initial > 0 else 0.0
    return {
        "v": RECORD_VERSION,
        "kind": "multi",
        "instance": inst.name,
        "n": inst.n_targets,
        "m": len(sol.routes),
        "params": {
            "alpha_mode": args.alpha_mode,
            "alpha_arg": args.alpha,
            "alpha": alpha,
            "tau": args.tau,
            "tsp_star": tsp_star,
            "metric": inst.metric.value,
            "seed": seed,
        },
        "config": {
            "strategy": cfg.maximal_strategy.value,
            "neighborhood": cfg.neighborhood.value,
            "top_k": cfg.top_k,
            "restarts": cfg.restarts,
        },
        "initial_obj": initial,
        "final_obj": sol.total,
        "pct_improve": pct,
        "incumbent_trace": sol.provenance["incumbent_trace"],
        "targets": [[p.x, p.y] for p in sol.instance.targets],
        "depots": [[p.x, p.y] for p in sol.instance.depots],
        "routes": [
            {
                "vehicle": r.vehicle_id,
                "depot": [
                    sol.instance.depots[r.vehicle_id].x,
                    sol.instance.depots[r.vehicle_id].y,
                ],
                "order": list(r.tour.order),
                "dwells": [float(d) for d in r.dwell],
                "objective": r.objective,
            }
            for r in sol.routes
        ],
        "wall_s": wall,
    }


def cmd_solve_multi(args) -> int:
    inst = _load_instance(args.instance, args.metric, args.depot_node)
    record = _run_multi(inst, args, args.seed)
    print(
        f"{record['instance']}  n={record['n']} m={record['m']}  "
        f"initial={record['initial_obj']:.6f}  final={record['final_obj']:.6f}  "
        f"improvement={record['pct_improve']:.2f}%  wall_s={record['wall_s']:.2f}"
    )
    _write_or_print(json.dumps(record, indent=2), args.out)
    return EXIT_OK


# --- bench ---------------------------------------------------------------------

BENCH_CONFIGS = {
    "move:1": ("move", 1),
    "move:2": ("move", 2),
    "move-swap:1": ("move-swap", 1),
    "move-swap:2": ("move-swap", 2),
}


def cmd_bench(args) -> int:
    directory = Path(args.instances)
    if not directory.is_dir():
        raise CliInputError(f"{args.instances} is not a directory")
    files = sorted(
        p for p in directory.iterdir() if p.suffix.lower() in (".json", ".tsp")
    )
    if not files:
        raise CliInputError(f"no .json or .tsp instances found in {args.instances}")
    config_names = args.configs.split(",") if args.configs else list(BENCH_CONFIGS)
    for name in config_names:
        if name not in BENCH_CONFIGS:
            raise CliInputError(
                f"unknown config {name!r}; choose from {','.join(BENCH_CONFIGS)}"
            )

    rows = []
    failures = 0
    for path in files:
        try:
            inst = _load_instance(str(path), args.metric, args.depot_node)
        except (CliInputError, InstanceInputError) as exc:
            print(f"skipping {path.name}: {exc}", file=sys.stderr)
            failures += 1
            continue
        for name in config_names:
            nb, top_k = BENCH_CONFIGS[name]
            run_args = argparse.Namespace(
                alpha_mode=args.alpha_mode, alpha=args.alpha, tau=args.tau,
                neighborhood=nb, strategy=args.strategy, top_k=top_k,
                restarts=args.restarts, vehicles=args.vehicles,
            )
            record = _run_multi(inst, run_args, args.seed)
            rows.append(
                {
                    "instance": record["instance"],
                    "n": record["n"],
                    "m": record["m"],
                    "alpha": record["params"]["alpha"],
                    "tau": record["params"]["tau"],
                    "strategy": record["config"]["strategy"],
                    "neighborhood": record["config"]["neighborhood"],
                    "top_k": record["config"]["top_k"],
                    "seed": record["params"]["seed"],
                    "initial_obj": record["initial_obj"],
                    "final_obj": record["final_obj"],
                    "pct_improve": record["pct_improve"],
                    "wall_s": record["wall_s"],
                }
            )
            if args.records_dir:
                rec_dir = Path(args.records_dir)
                rec_dir.mkdir(parents=True, exist_ok=True)
                rec_path = rec_dir / f"{record['instance']}__{name.replace(':', '-')}.json"
                rec_path.write_text(json.dumps(record, indent=2))
    if not rows:
        raise CliInputError("every instance in the directory failed to load")

    rows.sort(key=lambda r: (r["instance"], r["neighborhood"], r["top_k"]))
    if args.out_csv:
        with open(args.out_csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)

    print(f"{'config':>14} | {'min%':>9} | {'median%':>9} | {'mean%':>9} | {'max%':>9} | runs")
    for name in config_names:
        nb, top_k = BENCH_CONFIGS[name]
        vals = [r["pct_improve"] for r in rows if r["neighborhood"] == nb and r["top_k"] == top_k]
        if not vals:
            continue
        print(
            f"{name:>14} | {min(vals):9.4f} | {statistics.median(vals):9.4f} | "
            f"{statistics.fmean(vals):9.4f} | {max(vals):9.4f} | {len(vals)}"
        )
    if failures:
        print(f"({failures} instance file(s) skipped)", file=sys.stderr)
    return EXIT_OK


# --- oracle --------------------------------------------------------------------

def cmd_oracle(args) -> int:
    if args.instance:
        inst = _load_instance(args.instance, args.metric, args.depot_node)
    else:
        inst = generate_random_instance(args.n, args.m, seed=args.seed)
    m = args.vehicles or inst.n_vehicles
    alpha, _ = _resolve_alpha(inst, args.alpha_mode, args.alpha, args.seed)
    params = InfoParams.uniform(alpha, args.tau, inst.n_targets)

    if m == 1:
        sol = solve_single(inst, params, seed=args.seed)
        d_star = optimize_dwell_symmetric(inst.n_targets, args.tau, alpha)
        spread = float(np.max(sol.dwell.dwells) - np.min(sol.dwell.dwells))
        print(
            f"single-vehicle cross-check on {inst.name}: mean dwell "
            f"{float(np.mean(sol.dwell.dwells)):.6f} vs scalar oracle {d_star:.6f}, "
            f"spread {spread:.2e}, objective {sol.objective:.6f}"
        )
        return EXIT_OK

    heuristic = solve_multi(inst, params, SearchConfig(rng_seed=args.seed), m=m)
    exact = brute_force_multi(inst, params, m=m)
    ratio = heuristic.total / exact.total if exact.total > 0 else float("nan")
    print(
        f"{inst.name}: heuristic={heuristic.total:.6f}  oracle={exact.total:.6f}  "
        f"ratio={ratio:.4f}"
    )
    return EXIT_OK


# --- plot ----------------------------------------------------------------------

def cmd_plot(args) -> int:
    try:
        record = json.loads(Path(args.record).read_text())
    except OSError as exc:
        raise CliInputError(f"cannot read record {args.record}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliInputError(f"record is not valid JSON: {exc}") from None
    for key in ("targets", "depots", "routes"):
        if key not in record:
            raise CliInputError(f"record is missing required field {key!r}")
    Path(args.out).write_text(render_record(record))
    print(f"wrote {args.out}")
    return EXIT_OK


# --- parser --------------------------------------------------------------------

def _add_common_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha-mode", choices=["absolute", "per-tsp"], default="per-tsp",
                   help="interpret --alpha directly or as a multiple of 1/TSP*")
    p.add_argument("--alpha", type=float, default=1.0, help="discount rate (or multiplier)")
    p.add_argument("--tau", type=float, default=1.0, help="dwell sensitivity for all targets")
    p.add_argument("--metric", choices=["exact", "rounded"], default=None,
                   help="override the instance's travel metric")
    p.add_argument("--depot-node", type=int, default=1,
                   help="1-indexed TSPLIB node used as the depot")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwellroute",
        description="Route vehicles and choose dwell times to maximize "
                    "revisit-discounted information gain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-single", help="exact single-vehicle solve")
    p.add_argument("--instance", required=True)
    _add_common_params(p)
    p.add_argument("--out", help="write a run record JSON here")
    p.add_argument("--svg", help="write a route drawing here")
    p.set_defaults(func=cmd_solve_single)

    p = sub.add_parser("solve-multi", help="multi-vehicle heuristic solve")
    p.add_argument("--instance", required=True)
    p.add_argument("--vehicles", type=int, default=None,
                   help="vehicle count (default: one per instance depot)")
    p.add_argument("--strategy", choices=[s.value for s in MaximalStrategy],
                   default="combination")
    p.add_argument("--neighborhood", choices=[n.value for n in Neighborhood],
                   default="move-swap")
    p.add_argument("--top-k", type=int, choices=[1, 2], default=2)
    p.add_argument("--restarts", type=int, default=3)
    _add_common_params(p)
    p.add_argument("--out", help="write the run record JSON here (default: stdout)")
    p.set_defaults(func=cmd_solve_multi)

    p = sub.add_parser("bench", help="run a directory of instances across configs")
    p.add_argument("--instances", required=True, help="directory of .json/.tsp files")
    p.add_argument("--configs", default=None,
                   help="comma-separated subset of: " + ",".join(BENCH_CONFIGS))
    p.add_argument("--strategy", choices=[s.value for s in MaximalStrategy],
                   default="combination")
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--vehicles", type=int, default=None)
    _add_common_params(p)
    p.add_argument("--out-csv", help="write per-run rows here")
    p.add_argument("--records-dir", help="write one record JSON per run here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help="compare against exact brute force (small sizes)")
    p.add_argument("--instance", default=None)
    p.add_argument("--n", type=int, default=8, help="targets for a generated instance")
    p.add_argument("--m", type=int, default=2, help="depots for a generated instance")
    p.add_argument("--vehicles", type=int, default=None)
    _add_common_params(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("plot", help="render a run record to SVG")
    p.add_argument("--record", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliInputError, InstanceInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapacityError, NumericsError, ValueError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
