"""Command-line pipelines over the solver stack.

solve      brute-force baseline, global grid search, simplex refinement,
           final shot sampling; emits a JSON report.
landscape  depth-1 energy scan over the (gamma, beta) square; emits CSV.
hist       measurement histogram for a given angle vector; emits CSV.
brute      exact max-k-cut by enumeration; emits JSON.

Reports are canonical: keys sorted, floats in repr form, no timestamps, so a
rerun with the same inputs and seed is byte-identical.  Wall-clock timings
go to stderr only.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Sequence

import numpy as np

from .graph import (
    Graph,
    GraphFormatError,
    brute_force_max_cut,
    cut_value,
    load_graph,
    total_weight,
)
from .protes import OptimizationTrace, ProtesConfig, index_to_angles, optimize, trace_to_csv
from .qaoa_model import cut_from_energy, decode_bitstring, format_bitstring
from .refine import RefineConfig, RefineResult, refine
from .simulator import Backend, ParameterVector, expectation, make_instance, run_qaoa, sample_counts
from .tt import save_tt_text

DEFAULT_SHOTS = 4096
DEFAULT_RESOLUTION = 100
TOP_COUNT_ROWS = 16

_INT_KEYS = {"R", "K", "k", "k_gd", "N", "m", "seed", "max_evals"}
_FLOAT_KEYS = {"lambda", "initial_step", "tol"}


def parse_config_text(text: str) -> dict[str, float]:
    """Flat key = value lines; '#' starts a comment; unknown keys rejected."""
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _INT_KEYS:
            out[key] = int(value)
        elif key in _FLOAT_KEYS:
            out[key] = float(value)
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    return out


def load_config(path: str | None) -> dict[str, float]:
    if path is None:
        return {}
    with open(path) as fh:
        return parse_config_text(fh.read())


def derive_seeds(master: int) -> tuple[int, int, int]:
    """Independent child seeds for the search, refinement, and shot stages."""
    state = np.random.SeedSequence(master).generate_state(3)
    return int(state[0]), int(state[1]), int(state[2])


def resolve_seed(cli_seed: int | None, raw: dict[str, float]) -> int:
    if cli_seed is not None:
        return cli_seed
    return int(raw.get("seed", 0))


def build_configs(raw: dict[str, float], master: int) -> tuple[ProtesConfig, RefineConfig, int]:
    protes_seed, refine_seed, shots_seed = derive_seeds(master)
    protes_cfg = ProtesConfig(
        rank=int(raw.get("R", 5)),
        batch_size=int(raw.get("K", 20)),
        elite_count=int(raw.get("k", 10)),
        ascent_steps=int(raw.get("k_gd", 5)),
        learning_rate=float(raw.get("lambda", 0.05)),
        nodes_per_dim=int(raw.get("N", 100)),
        budget=int(raw.get("m", 1000)),
        seed=protes_seed,
    )
    refine_cfg = RefineConfig(
        max_evals=int(raw.get("max_evals", 10000)),
        initial_step=float(raw.get("initial_step", 0.1)),
        tol=float(raw.get("tol", 1e-9)),
        seed=refine_seed,
    )
    return protes_cfg, refine_cfg, shots_seed


def _graph_summary(g: Graph) -> dict[str, float]:
    return {"n": g.n, "edges": len(g.edges), "total_weight": total_weight(g)}


def _energy_objective(inst) -> Callable[[np.ndarray], float]:
    def objective(theta: np.ndarray) -> float:
        return expectation(run_qaoa(inst, ParameterVector.from_flat(theta)), inst.cost)

    return objective


def _count_rows(g: Graph, counts: dict[int, int], limit: int) -> list[dict[str, object]]:
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    rows = []
    for z, c in ranked[:limit]:
        coloring = decode_bitstring(z, g.n)
        rows.append(
            {
                "bitstring": format_bitstring(z, g.n),
                "count": c,
                "coloring": list(coloring),
                "cut": cut_value(g, coloring),
            }
        )
    return rows


def run_solve(
    g: Graph,
    depth: int,
    backend: Backend,
    protes_cfg: ProtesConfig,
    refine_cfg: RefineConfig,
    master_seed: int,
    shots: int,
    shots_seed: int,
) -> tuple[dict[str, object], OptimizationTrace, RefineResult]:
    """Full pipeline on one graph; returns the report plus stage results."""
    t0 = time.perf_counter()
    colors, optimal = brute_force_max_cut(g, 3)
    if optimal <= 0.0:
        raise ValueError("optimal cut is zero; approximation ratio undefined")
    t1 = time.perf_counter()
    inst = make_instance(g, depth, backend)
    flat_objective = _energy_objective(inst)

    def index_objective(idx: tuple[int, ...]) -> float:
        return flat_objective(index_to_angles(idx, protes_cfg.nodes_per_dim))

    trace = optimize(index_objective, 2 * depth, protes_cfg)
    t2 = time.perf_counter()
    search_theta = index_to_angles(trace.best_index, protes_cfg.nodes_per_dim)
    result = refine(flat_objective, search_theta, refine_cfg)
    t3 = time.perf_counter()
    state = run_qaoa(inst, ParameterVector.from_flat(result.theta))
    counts = sample_counts(state, shots, np.random.default_rng(shots_seed), color_dim=4**g.n)
    t4 = time.perf_counter()

    search_cut = cut_from_energy(trace.best_value, g)
    final_cut = cut_from_energy(result.value, g)
    report: dict[str, object] = {
        "command": "solve",
        "graph": _graph_summary(g),
        "depth": depth,
        "backend": backend.value,
        "seed": master_seed,
        "shots": shots,
        "protes_config": {
            "rank": protes_cfg.rank,
            "batch_size": protes_cfg.batch_size,
            "elite_count": protes_cfg.elite_count,
            "ascent_steps": protes_cfg.ascent_steps,
            "learning_rate": protes_cfg.learning_rate,
            "nodes_per_dim": protes_cfg.nodes_per_dim,
            "budget": protes_cfg.budget,
            "seed": protes_cfg.seed,
        },
        "refine_config": {
            "max_evals": refine_cfg.max_evals,
            "initial_step": refine_cfg.initial_step,
            "tol": refine_cfg.tol,
            "seed": refine_cfg.seed,
        },
        "optimal_cut": optimal,
        "optimal_coloring": list(colors),
        "protes": {
            "energy": trace.best_value,
            "expected_cut": search_cut,
            "ratio": search_cut / optimal,
            "evals": trace.total_evals,
            "iterations": len(trace.records),
        },
        "refine": {
            "energy": result.value,
            "expected_cut": final_cut,
            "ratio": final_cut / optimal,
            "evals": result.evals,
        },
        "theta": [float(x) for x in result.theta],
        "top_counts": _count_rows(g, counts, TOP_COUNT_ROWS),
    }
    print(
        f"timings: brute={t1 - t0:.2f}s search={t2 - t1:.2f}s "
        f"refine={t3 - t2:.2f}s sample={t4 - t3:.2f}s",
        file=sys.stderr,
    )
    return report, trace, result


def report_to_json(report: dict[str, object]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def landscape_csv(g: Graph, resolution: int, backend: Backend) -> str:
    """Depth-1 energy over the half-open angle grid, gamma outer, beta inner."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    inst = make_instance(g, 1, backend)
    angles = index_to_angles(np.arange(resolution), resolution)
    lines = ["gamma,beta,energy"]
    for gamma in angles:
        gamma = float(gamma)
        for beta in angles:
            beta = float(beta)
            energy = expectation(run_qaoa(inst, ParameterVector((gamma,), (beta,))), inst.cost)
            lines.append(f"{gamma!r},{beta!r},{energy!r}")
    return "\n".join(lines) + "\n"


def hist_csv(g: Graph, theta: Sequence[float], shots: int, seed: int, backend: Backend) -> str:
    """Counts for every observed bitstring, heaviest first, with decoded cuts."""
    inst = make_instance(g, len(theta) // 2, backend)
    state = run_qaoa(inst, ParameterVector.from_flat(theta))
    counts = sample_counts(state, shots, np.random.default_rng(seed), color_dim=4**g.n)
    lines = ["bitstring,count,coloring,cut"]
    for row in _count_rows(g, counts, len(counts)):
        coloring = "".join(str(c) for c in row["coloring"])
        lines.append(f"{row['bitstring']},{row['count']},{coloring},{row['cut']!r}")
    return "\n".join(lines) + "\n"


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_theta(args: argparse.Namespace) -> list[float]:
    if (args.theta is None) == (args.theta_file is None):
        raise ValueError("provide exactly one of --theta or --theta-file")
    if args.theta is not None:
        tokens = args.theta.replace(",", " ").split()
    else:
        with open(args.theta_file) as fh:
            tokens = fh.read().split()
    values = [float(tok) for tok in tokens]
    if not values or len(values) % 2 != 0:
        raise ValueError(f"angle vector must have even positive length, got {len(values)}")
    return values


def cmd_solve(args: argparse.Namespace) -> None:
    g = load_graph(args.graph)
    raw = load_config(args.config)
    master = resolve_seed(args.seed, raw)
    protes_cfg, refine_cfg, shots_seed = build_configs(raw, master)
    report, trace, _ = run_solve(
        g, args.p, Backend(args.backend), protes_cfg, refine_cfg, master, args.shots, shots_seed
    )
    _write_text(report_to_json(report), args.out)
    if args.trace_out is not None:
        _write_text(trace_to_csv(trace), args.trace_out)
    if args.tt_out is not None:
        save_tt_text(trace.tt, args.tt_out)


def cmd_landscape(args: argparse.Namespace) -> None:
    g = load_graph(args.graph)
    _write_text(landscape_csv(g, args.resolution, Backend(args.backend)), args.out)


def cmd_hist(args: argparse.Namespace) -> None:
    g = load_graph(args.graph)
    theta = _parse_theta(args)
    seed = args.seed if args.seed is not None else 0
    _write_text(hist_csv(g, theta, args.shots, seed, Backend(args.backend)), args.out)


def cmd_brute(args: argparse.Namespace) -> None:
    g = load_graph(args.graph)
    colors, optimal = brute_force_max_cut(g, args.k)
    report = {
        "command": "brute",
        "graph": _graph_summary(g),
        "k": args.k,
        "optimal_cut": optimal,
        "coloring": list(colors),
    }
    _write_text(report_to_json(report), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttqaoa",
        description="Hybrid grid-search plus simplex optimization of max-3-cut circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="full pipeline: brute force, grid search, refinement, sampling")
    solve.add_argument("--graph", required=True, help="edge-list file")
    solve.add_argument("--p", type=int, default=4, help="circuit depth (default 4)")
    solve.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.DIAGONAL.value)
    solve.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    solve.add_argument("--seed", type=int, default=None, help="master seed (default: config value or 0)")
    solve.add_argument("--config", default=None, help="key = value hyperparameter file")
    solve.add_argument("--out", default=None, help="JSON report path (default stdout)")
    solve.add_argument("--trace-out", default=None, help="write search trace CSV here")
    solve.add_argument("--tt-out", default=None, help="write final tensor-train checkpoint here")
    solve.set_defaults(func=cmd_solve)

    landscape = sub.add_parser("landscape", help="depth-1 energy scan over the angle square")
    landscape.add_argument("--graph", required=True)
    landscape.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    landscape.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.DIAGONAL.value)
    landscape.add_argument("--out", default=None)
    landscape.set_defaults(func=cmd_landscape)

    hist = sub.add_parser("hist", help="measurement histogram at a fixed angle vector")
    hist.add_argument("--graph", required=True)
    hist.add_argument("--theta", default=None, help="comma- or space-separated angles, gammas then betas")
    hist.add_argument("--theta-file", default=None, help="file of whitespace-separated angles")
    hist.add_argument("--shots", type=int, default=DEFAULT_SHOTS)
    hist.add_argument("--seed", type=int, default=None)
    hist.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.DIAGONAL.value)
    hist.add_argument("--out", default=None)
    hist.set_defaults(func=cmd_hist)

    brute = sub.add_parser("brute", help="exact max-k-cut by enumeration")
    brute.add_argument("--graph", required=True)
    brute.add_argument("--k", type=int, default=3, help="color count (default 3)")
    brute.add_argument("--out", default=None)
    brute.set_defaults(func=cmd_brute)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (GraphFormatError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
