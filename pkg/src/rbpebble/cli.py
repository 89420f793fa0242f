"""Command-line interface.

Subcommands: gen, validate, cost, greedy, solve, tower-solve, bounds,
reduce-vc, reduce-clique, export-dot.  Reports are stable key=value lines.
Exit codes: 0 success, 1 semantic failure (invalid trace, infeasible,
exhausted, domain error), 2 malformed input or usage error.

The environment variable PEBBLE_SEED provides the default seed for random
generation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bounds as bounds_mod
from .dag import (
    export_dot,
    format_dag_text,
    parse_dag_text,
    parse_graph_text,
)
from .errors import PebbleError, PebbleParseError
from .generators import (
    CliqueReductionParams,
    VcReductionParams,
    ZipperParams,
    artifact_from_metadata,
    artifact_metadata_dict,
    gen_chain,
    gen_clique_reduction,
    gen_fig1,
    gen_greedy_adversarial_a,
    gen_greedy_adversarial_b,
    gen_independent_chains,
    gen_io_tradeoff_decrease,
    gen_io_tradeoff_increase,
    gen_level_tower,
    gen_random_dag,
    gen_skip_chain,
    gen_subgroup_cycle,
    gen_vc_reduction,
    gen_zipper,
)
from .machine import (
    ProblemInstance,
    RuleVariant,
    TerminalMode,
    format_trace,
    parse_trace,
    validate_strategy,
)
from .solver import (
    OptStatus,
    SearchLimits,
    exact_opt,
    progression_to_strategy,
    tower_abstract_opt,
)
from .strategies import GreedyPolicy, WitnessKind, greedy_schedule, witness_strategy

GEN_FAMILIES = (
    "chain",
    "independent-chains",
    "random",
    "fig-example",
    "zipper",
    "skip-chain",
    "subgroup-cycle",
    "greedy-adversarial-a",
    "greedy-adversarial-b",
    "io-increase",
    "io-decrease",
    "level-tower",
)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


def _report(pairs):
    for key, val in pairs:
        print(f"{key}={_fmt(val)}")


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise PebbleParseError(f"cannot read {path}: {exc}") from exc


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _need(args, names: dict):
    for flag, val in names.items():
        if val is None:
            raise PebbleParseError(
                f"family {args.family!r} requires --{flag}"
            )


def _csv_ints(text: str, flag: str):
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise PebbleParseError(f"--{flag} expects comma-separated ints") from exc


def _instance_from_args(args) -> ProblemInstance:
    return ProblemInstance(
        k=args.k,
        r=args.r,
        g=args.g,
        variant=RuleVariant(args.variant),
        terminal_mode=TerminalMode(args.terminal_mode),
    )


def _load_artifact(dag_path: str, meta_path: str):
    dag = parse_dag_text(_read(dag_path))
    try:
        info = json.loads(_read(meta_path))
    except json.JSONDecodeError as exc:
        raise PebbleParseError(f"bad metadata JSON in {meta_path}: {exc}") from exc
    return artifact_from_metadata(dag, info)


def default_witness_kind(family: str, k: int) -> WitnessKind | None:
    table = {
        ("fig-example", 1): WitnessKind.FIG_1P,
        ("fig-example", 2): WitnessKind.FIG_2P,
        ("zipper", 1): WitnessKind.ZIPPER_1P,
        ("zipper", 2): WitnessKind.ZIPPER_2P,
        ("subgroup-cycle", 1): WitnessKind.SUBGROUP_CYCLE_1P,
        ("greedy-adversarial-a", 2): WitnessKind.GREEDY_ADVERSARIAL_A,
        ("greedy-adversarial-b", 2): WitnessKind.GREEDY_ADVERSARIAL_B,
        ("io-increase", 1): WitnessKind.IO_INCREASE_1P,
        ("io-increase", 2): WitnessKind.IO_INCREASE_2P,
        ("io-decrease", 1): WitnessKind.IO_DECREASE_1P,
        ("io-decrease", 2): WitnessKind.IO_DECREASE_2P,
    }
    if family == "skip-chain":
        return WitnessKind.SKIP_CHAIN
    if family == "subgroup-cycle" and k > 1:
        return WitnessKind.SUBGROUP_CYCLE_2P
    return table.get((family, k))


# ---------------------------------------------------------------------------
# Handlers


def _cmd_gen(args) -> int:
    fam = args.family
    g = args.g
    if fam == "chain":
        _need(args, {"n": args.n})
        art = gen_chain(args.n, g=g)
    elif fam == "independent-chains":
        _need(args, {"lengths": args.lengths})
        art = gen_independent_chains(_csv_ints(args.lengths, "lengths"), g=g)
    elif fam == "random":
        _need(args, {"n": args.n})
        seed = args.seed
        if seed is None:
            seed = int(os.environ.get("PEBBLE_SEED", "0"))
        art = gen_random_dag(
            args.n, seed, max_in_degree=args.max_in_degree,
            edge_prob=args.edge_prob, g=g,
        )
    elif fam == "fig-example":
        art = gen_fig1(g=g)
    elif fam == "zipper":
        _need(args, {"d": args.d, "n0": args.n0})
        art = gen_zipper(
            ZipperParams(
                d=args.d, n0=args.n0, g=g, groups=args.groups,
                antirecompute=args.antirecompute,
            )
        )
    elif fam == "skip-chain":
        _need(args, {"m": args.m})
        art = gen_skip_chain(args.m, copies=args.copies, g=g)
    elif fam == "subgroup-cycle":
        _need(args, {"k": args.k, "d": args.d, "n0": args.n0})
        art = gen_subgroup_cycle(args.k, args.d, args.n0, g=g)
    elif fam == "greedy-adversarial-a":
        _need(args, {"d": args.d, "n0": args.n0})
        art = gen_greedy_adversarial_a(args.d, args.n0, g)
    elif fam == "greedy-adversarial-b":
        _need(args, {"m": args.m})
        art = gen_greedy_adversarial_b(args.m, g)
    elif fam == "io-increase":
        art = gen_io_tradeoff_increase(g, copies=args.copies)
    elif fam == "io-decrease":
        _need(args, {"d": args.d, "m": args.m})
        art = gen_io_tradeoff_decrease(args.d, g, args.m)
    elif fam == "level-tower":
        _need(args, {"levels": args.levels})
        art = gen_level_tower(_csv_ints(args.levels, "levels"), g=g)
    else:  # argparse choices prevent this
        raise PebbleParseError(f"unknown family {fam!r}")

    _write(args.out, format_dag_text(art.dag))
    pairs = [("family", art.family), ("n", art.dag.n), ("m", art.dag.m),
             ("delta_in", art.dag.delta_in)]
    if art.prescribed_instance is not None:
        inst = art.prescribed_instance
        pairs += [("prescribed_k", inst.k), ("prescribed_r", inst.r),
                  ("prescribed_g", inst.g)]
    if args.metadata:
        _write(
            args.metadata,
            json.dumps(artifact_metadata_dict(art), sort_keys=True, indent=2)
            + "\n",
        )
        pairs.append(("metadata", args.metadata))
    pairs.append(("out", args.out))
    _report(pairs)
    return 0


def _validation_pairs(report):
    pairs = [("ok", report.ok)]
    if report.first_violation is not None:
        idx, msg = report.first_violation
        pairs += [("first_violation_step", idx), ("first_violation", msg)]
    if report.cost is not None:
        c = report.cost
        pairs += [
            ("compute_steps", c.compute_step_count),
            ("io_steps", c.io_step_count),
            ("compute_cost", c.compute_cost),
            ("io_cost", c.io_cost),
            ("total", c.total),
            ("surplus", c.surplus),
            ("recompute_count", c.recompute_count),
        ]
    return pairs


def _cmd_validate(args) -> int:
    dag = parse_dag_text(_read(args.dag))
    strat = parse_trace(_read(args.trace))
    inst = _instance_from_args(args)
    report = validate_strategy(inst, dag, strat)
    _report(_validation_pairs(report))
    return 0 if report.ok else 1


def _cmd_cost(args) -> int:
    dag = parse_dag_text(_read(args.dag))
    strat = parse_trace(_read(args.trace))
    inst = _instance_from_args(args)
    report = validate_strategy(inst, dag, strat)
    if not report.ok:
        idx, msg = report.first_violation
        print(f"invalid trace at step {idx}: {msg}", file=sys.stderr)
        return 1
    c = report.cost
    _report(
        [
            ("compute_steps", c.compute_step_count),
            ("io_steps", c.io_step_count),
            ("compute_cost", c.compute_cost),
            ("io_cost", c.io_cost),
            ("total", c.total),
            ("surplus", c.surplus),
            ("recompute_count", c.recompute_count),
        ]
    )
    return 0


def _cmd_greedy(args) -> int:
    dag = parse_dag_text(_read(args.dag))
    inst = _instance_from_args(args)
    policy = GreedyPolicy(
        score=args.score, source_score=args.source_score, eviction=args.eviction
    )
    strat = greedy_schedule(dag, inst, policy)
    report = validate_strategy(inst, dag, strat)
    if not report.ok:  # defensive: the scheduler should always emit valid steps
        idx, msg = report.first_violation
        print(f"greedy produced an invalid trace at {idx}: {msg}", file=sys.stderr)
        return 1
    c = report.cost
    pairs = [
        ("n", dag.n),
        ("k", inst.k),
        ("r", inst.r),
        ("g", inst.g),
        ("total", c.total),
        ("compute_steps", c.compute_step_count),
        ("io_steps", c.io_step_count),
    ]
    if args.metadata:
        art = _load_artifact(args.dag, args.metadata)
        kind = default_witness_kind(art.family, inst.k)
        if kind is not None:
            try:
                wit = witness_strategy(kind, art, inst)
                wrep = validate_strategy(inst, art.dag, wit)
                if wrep.ok:
                    pairs += [
                        ("witness_kind", kind.value),
                        ("witness_total", wrep.cost.total),
                        (
                            "greedy_over_witness",
                            float(c.total) / float(wrep.cost.total),
                        ),
                    ]
            except PebbleError:
                pass  # no witness at this instance shape; omit the comparison
    if args.out:
        _write(args.out, format_trace(strat))
        pairs.append(("out", args.out))
    _report(pairs)
    return 0


def _cmd_solve(args) -> int:
    dag = parse_dag_text(_read(args.dag))
    inst = _instance_from_args(args)
    limits = SearchLimits(
        max_n=args.max_n,
        max_k=args.max_k,
        max_states=args.max_states,
        max_seconds=args.max_seconds,
    )
    result = exact_opt(dag, inst, limits=limits)
    pairs = [("status", result.status.value)]
    if result.status is OptStatus.OPTIMAL:
        pairs += [
            ("opt_total", result.opt_total),
            ("opt_io_steps", result.opt_io_steps),
        ]
    pairs.append(("states_expanded", result.states_expanded))
    if result.strategy is not None and args.out:
        _write(args.out, format_trace(result.strategy))
        pairs.append(("out", args.out))
    _report(pairs)
    return 0 if result.status is OptStatus.OPTIMAL else 1


def _cmd_tower_solve(args) -> int:
    try:
        info = json.loads(_read(args.metadata))
    except json.JSONDecodeError as exc:
        raise PebbleParseError(f"bad metadata JSON: {exc}") from exc
    result = tower_abstract_opt(
        info, args.r, io_slack=args.io_slack, max_states=args.max_states
    )
    pairs = [("status", result.status)]
    if result.progression is not None:
        pairs += [("moves", len(result.progression)),
                  ("slack_used", result.slack_used)]
    pairs.append(("states_explored", result.states_explored))
    if result.feasible and args.out:
        if result.slack_used == 0:
            strat = progression_to_strategy(info, result.progression)
            _write(args.out, format_trace(strat))
            pairs.append(("out", args.out))
        else:
            pairs.append(("trace_written", False))
    _report(pairs)
    return 0 if result.feasible else 1


def _req_flags(kind: str, **vals):
    for name, v in vals.items():
        if v is None:
            raise PebbleParseError(f"bounds --kind {kind} requires --{name}")


def _cmd_bounds(args) -> int:
    kind = args.kind
    if kind == "trivial":
        _req_flags(kind, n=args.n, r=args.r, delta_in=args.delta_in)
        res = bounds_mod.trivial_bounds(args.n, args.k, args.r, args.g, args.delta_in)
        _report([("lower", res.lower), ("upper", res.upper)])
    elif kind == "transfer":
        _req_flags(kind, L=args.L)
        io = bounds_mod.transfer_io_lower_bound(args.L, args.k)
        pairs = [("io_lower", io), ("io_lower_floor", io.numerator // io.denominator)]
        if args.n is not None:
            pairs.append(
                (
                    "cost_lower",
                    bounds_mod.transfer_cost_lower_bound(args.n, args.L, args.k, args.g),
                )
            )
        _report(pairs)
    elif kind == "fft":
        _req_flags(kind, n=args.n, r=args.r)
        _report([("lower", bounds_mod.fft_mpp_lower_bound(args.n, args.r, args.k, args.g))])
    elif kind == "mmm":
        _req_flags(kind, n=args.n, r=args.r)
        _report([("lower", bounds_mod.mmm_mpp_lower_bound(args.n, args.r, args.k, args.g))])
    elif kind == "greedy-factor":
        _req_flags(kind, delta_in=args.delta_in)
        _report([("factor", bounds_mod.greedy_upper_factor(args.g, args.delta_in))])
    else:
        raise PebbleParseError(f"unknown bounds kind {kind!r}")
    return 0


def _cmd_reduce_vc(args) -> int:
    graph = parse_graph_text(_read(args.graph))
    art = gen_vc_reduction(graph, VcReductionParams(B0=args.b0, B1=args.b1, g=args.g))
    _write(args.out, format_dag_text(art.dag))
    _write(
        args.metadata,
        json.dumps(artifact_metadata_dict(art), sort_keys=True, indent=2) + "\n",
    )
    inst = art.prescribed_instance
    _report(
        [
            ("family", art.family),
            ("n", art.dag.n),
            ("graph_n", graph.n),
            ("graph_m", graph.m),
            ("r", inst.r),
            ("g", inst.g),
            ("base_io_steps", art.expected["base_io_steps"]),
            ("cover_step_factor", art.expected["cover_step_factor"]),
            ("out", args.out),
            ("metadata", args.metadata),
        ]
    )
    return 0


def _cmd_reduce_clique(args) -> int:
    graph = parse_graph_text(_read(args.graph))
    art = gen_clique_reduction(graph, CliqueReductionParams(q=args.q, T=args.t))
    _write(args.out, format_dag_text(art.dag))
    _write(
        args.metadata,
        json.dumps(artifact_metadata_dict(art), sort_keys=True, indent=2) + "\n",
    )
    _report(
        [
            ("family", art.family),
            ("n", art.dag.n),
            ("graph_n", graph.n),
            ("graph_m", graph.m),
            ("q", args.q),
            ("copies", args.t),
            ("r", art.expected["r"]),
            ("towers", len(art.metadata["towers"])),
            ("out", args.out),
            ("metadata", args.metadata),
        ]
    )
    return 0


def _cmd_export_dot(args) -> int:
    dag = parse_dag_text(_read(args.dag))
    text = export_dot(dag)
    if args.out:
        _write(args.out, text)
        _report([("nodes", dag.n), ("edges", dag.m), ("out", args.out)])
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# Parser


def _add_instance_flags(p, need_k=True):
    if need_k:
        p.add_argument("--k", type=int, required=True, help="processor count")
    p.add_argument("--r", type=int, required=True, help="red pebbles per processor")
    p.add_argument("--g", type=int, default=1, help="I/O step cost (default 1)")
    p.add_argument(
        "--variant",
        choices=[v.value for v in RuleVariant],
        default=RuleVariant.MPP.value,
    )
    p.add_argument(
        "--terminal-mode",
        choices=[t.value for t in TerminalMode],
        default=TerminalMode.ANY_PEBBLE_ON_SINKS.value,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbpebble",
        description="Multiprocessor red-blue pebbling: generators, schedulers,"
        " exact search, and cost bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a DAG family instance")
    p.add_argument("family", choices=GEN_FAMILIES)
    p.add_argument("--out", required=True, help="DAG text output path")
    p.add_argument("--metadata", help="also write artifact metadata JSON")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--n0", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--copies", type=int, default=1)
    p.add_argument("--groups", type=int, default=2)
    p.add_argument("--antirecompute", action="store_true")
    p.add_argument("--seed", type=int, help="default: PEBBLE_SEED or 0")
    p.add_argument("--max-in-degree", type=int)
    p.add_argument("--edge-prob", type=float)
    p.add_argument("--lengths", help="comma-separated chain lengths")
    p.add_argument("--levels", help="comma-separated tower level sizes")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("validate", help="validate a trace against a DAG")
    p.add_argument("--dag", required=True)
    p.add_argument("--trace", required=True)
    _add_instance_flags(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("cost", help="cost of a valid trace")
    p.add_argument("--dag", required=True)
    p.add_argument("--trace", required=True)
    _add_instance_flags(p)
    p.set_defaults(func=_cmd_cost)

    p = sub.add_parser("greedy", help="run the greedy scheduler")
    p.add_argument("--dag", required=True)
    p.add_argument("--metadata", help="artifact metadata (enables witness ratio)")
    p.add_argument("--out", help="write the trace here")
    p.add_argument("--score", choices=["count-red", "fraction-red"],
                   default="count-red")
    p.add_argument("--source-score", type=float, choices=[0.0, 1.0], default=0.0)
    p.add_argument("--eviction", choices=["farthest", "lru"], default="farthest")
    _add_instance_flags(p)
    p.set_defaults(func=_cmd_greedy)

    p = sub.add_parser("solve", help="exact optimum by state-space search")
    p.add_argument("--dag", required=True)
    p.add_argument("--out", help="write an optimal trace here")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--max-k", type=int, default=2)
    p.add_argument("--max-states", type=int, default=4_000_000)
    p.add_argument("--max-seconds", type=float, default=300.0)
    _add_instance_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser(
        "tower-solve", help="tower-abstraction search on reduction metadata"
    )
    p.add_argument("--metadata", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--io-slack", type=int, default=0)
    p.add_argument("--max-states", type=int, default=2_000_000)
    p.add_argument("--out", help="write the lowered trace here (slack 0 only)")
    p.set_defaults(func=_cmd_tower_solve)

    p = sub.add_parser("bounds", help="closed-form cost bounds")
    p.add_argument(
        "--kind",
        required=True,
        choices=["trivial", "transfer", "fft", "mmm", "greedy-factor"],
    )
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--r", type=int)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--delta-in", type=int)
    p.add_argument("--L", type=int)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("reduce-vc", help="vertex-cover cost reduction")
    p.add_argument("--graph", required=True)
    p.add_argument("--b0", type=int, required=True)
    p.add_argument("--b1", type=int, required=True)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--metadata", required=True)
    p.set_defaults(func=_cmd_reduce_vc)

    p = sub.add_parser("reduce-clique", help="q-clique zero-I/O reduction")
    p.add_argument("--graph", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int, default=1, help="serial copies")
    p.add_argument("--out", required=True)
    p.add_argument("--metadata", required=True)
    p.set_defaults(func=_cmd_reduce_clique)

    p = sub.add_parser("export-dot", help="DAG text to Graphviz DOT")
    p.add_argument("--dag", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PebbleParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PebbleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
