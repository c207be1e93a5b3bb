"""Command-line interface.

Subcommands: track (circuit -> frames), order (frames -> time order),
schedule (graph + order/frames -> frontier), gen (random instances),
sweep (seeded experiment grids -> CSV), validate (schedule checker).

Exit codes: 0 success (including partial search results), 2 input errors
(unparseable files, bad arguments), 3 semantic errors (dependency cycles,
invalid schedules).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time as _time
from concurrent.futures import ProcessPoolExecutor

from .circuit import CircuitError, parse_circuit, run_circuit
from .instances import InstanceSpec, density_for_size, random_frames, random_graph
from .schedule import (
    CycleError,
    Graph,
    OrderDag,
    Schedule,
    order_from_frames,
    trivial_time_optimal,
    validate_schedule,
)
from .search import ParetoFront, SearchConfig, SearchResult, search
from .search import _mix as _mix_seed
from .tracker import FramesTracker

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SEMANTIC = 3

SWEEP_COLUMNS = [
    "n", "pe", "pc", "seed", "mode", "space", "time", "wall_seconds", "partial",
]


def dumps_canonical(obj) -> str:
    """Canonical JSON used for all CLI output (stable field order)."""
    return json.dumps(obj, sort_keys=True)


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _default_workers() -> int:
    env = os.environ.get("PAULI_SCHED_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def cmd_track(args: argparse.Namespace) -> int:
    try:
        with open(args.circuit, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail(EXIT_INPUT, str(exc))
    tracker = FramesTracker(backend=args.backend)
    try:
        run_circuit(tracker, parse_circuit(text))
    except CircuitError as exc:
        return _fail(EXIT_INPUT, str(exc))
    print(dumps_canonical(tracker.to_json()))
    return EXIT_OK


def cmd_order(args: argparse.Namespace) -> int:
    try:
        frames = _load_json(args.frames)
        dag = order_from_frames(frames)
    except CycleError as exc:
        return _fail(EXIT_SEMANTIC, str(exc))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(EXIT_INPUT, f"bad frames input: {exc}")
    print(dumps_canonical(dag.to_json()))
    return EXIT_OK


def _load_instance(args: argparse.Namespace) -> tuple[Graph, OrderDag]:
    graph = Graph.from_json(_load_json(args.graph))
    if args.order:
        dag = OrderDag.from_json(_load_json(args.order), graph.n)
    else:
        dag = order_from_frames(_load_json(args.frames), n=graph.n)
    return graph, dag


def cmd_schedule(args: argparse.Namespace) -> int:
    try:
        graph, dag = _load_instance(args)
    except CycleError as exc:
        return _fail(EXIT_SEMANTIC, str(exc))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(EXIT_INPUT, f"bad input: {exc}")
    if args.mode == "approximate" and args.seed is None:
        return _fail(EXIT_INPUT, "--approximate needs --seed")

    started = _time.perf_counter()
    if args.mode == "trivial_time":
        sched = trivial_time_optimal(graph, dag)
        frontier = ParetoFront()
        frontier.offer(sched.cost(), sched)
        result = SearchResult(
            frontier, False, args.seed or 0, _time.perf_counter() - started
        )
    else:
        cfg = SearchConfig(
            mode=args.mode,
            timeout_scale=args.timeout_scale,
            seed=args.seed,
            workers=args.workers,
            paper_faithful_pruning=args.paper_faithful_pruning,
        )
        result = search(graph, dag, cfg)
    print(dumps_canonical(result.to_json()))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        if args.spec:
            spec = InstanceSpec.from_json(_load_json(args.spec))
        else:
            if None in (args.n, args.seed):
                return _fail(EXIT_INPUT, "gen needs --spec or --n and --seed")
            pe = args.pe if args.pe is not None else density_for_size(args.n)
            pc = args.pc if args.pc is not None else density_for_size(args.n)
            spec = InstanceSpec(args.n, pe, pc, args.seed)
        graph = random_graph(spec)
        frames = random_frames(spec)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(EXIT_INPUT, f"bad spec: {exc}")
    graph_json = graph.to_json()
    frames_json = frames.to_json()
    if args.graph_out:
        with open(args.graph_out, "w", encoding="utf-8") as fh:
            fh.write(dumps_canonical(graph_json) + "\n")
    if args.frames_out:
        with open(args.frames_out, "w", encoding="utf-8") as fh:
            fh.write(dumps_canonical(frames_json) + "\n")
    if not (args.graph_out or args.frames_out):
        print(dumps_canonical({"graph": graph_json, "frames": frames_json}))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        graph = Graph.from_json(_load_json(args.graph))
        dag = OrderDag.from_json(_load_json(args.order), graph.n)
        sched = Schedule.from_json(_load_json(args.schedule))
    except CycleError as exc:
        return _fail(EXIT_SEMANTIC, str(exc))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(EXIT_INPUT, f"bad input: {exc}")
    violation = validate_schedule(graph, dag, sched)
    if violation is None:
        print(dumps_canonical({"ok": True}))
        return EXIT_OK
    print(
        dumps_canonical(
            {
                "ok": False,
                "condition": violation.condition,
                "step": violation.step,
                "message": violation.message,
            }
        )
    )
    return EXIT_SEMANTIC


def _sweep_cell(job: tuple) -> list[dict]:
    """One (cell, sample): generate the instance and run every mode."""
    n, pe, pc, seed, modes, timeout_scale = job
    spec = InstanceSpec(n, pe, pc, seed)
    graph = random_graph(spec)
    dag = order_from_frames(random_frames(spec), n=n)
    rows = []
    for mode in modes:
        started = _time.perf_counter()
        if mode == "trivial_time":
            cost = trivial_time_optimal(graph, dag).cost()
            partial = False
        else:
            cfg = SearchConfig(
                mode=mode, timeout_scale=timeout_scale, seed=seed, workers=1
            )
            result = search(graph, dag, cfg)
            # Space-optimal endpoint; the schedule command exposes the rest.
            cost = result.frontier.min_space_entry().cost
            partial = result.partial
        rows.append(
            {
                "n": n,
                "pe": pe,
                "pc": pc,
                "seed": seed,
                "mode": mode,
                "space": cost.space,
                "time": cost.time,
                "wall_seconds": round(_time.perf_counter() - started, 6),
                "partial": partial,
            }
        )
    return rows


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def _parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


VALID_MODES = ("trivial_time", "exact", "approximate")


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        if args.spec:
            spec = _load_json(args.spec)
            ns = [int(v) for v in spec["n"]]
            pes = [float(v) for v in spec["pe"]]
            pcs = [float(v) for v in spec["pc"]]
            samples = int(spec.get("samples", 1))
            modes = list(spec.get("modes", ["trivial_time"]))
            seed = int(spec.get("seed", 0))
            timeout_scale = float(spec.get("timeout_scale", 0.01))
        else:
            ns = _parse_ints(args.n or "")
            pes = _parse_floats(args.pe or "")
            pcs = _parse_floats(args.pc or "")
            samples = args.samples
            modes = [m for m in (args.modes or "").split(",") if m]
            seed = args.seed or 0
            timeout_scale = args.timeout_scale
        if not ns or not pes or not pcs or not modes or samples < 1:
            return _fail(EXIT_INPUT, "sweep needs a nonempty grid, modes and samples")
        for mode in modes:
            if mode not in VALID_MODES:
                return _fail(EXIT_INPUT, f"unknown mode {mode!r}")
    except (OSError, ValueError, KeyError, TypeError) as exc:
        return _fail(EXIT_INPUT, f"bad sweep spec: {exc}")

    jobs = []
    index = 0
    for n in ns:
        for pe in pes:
            for pc in pcs:
                for _ in range(samples):
                    cell_seed = _mix_seed(seed, index)
                    jobs.append((n, pe, pc, cell_seed, tuple(modes), timeout_scale))
                    index += 1

    writer = csv.DictWriter(sys.stdout, fieldnames=SWEEP_COLUMNS)
    writer.writeheader()
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            for rows in pool.map(_sweep_cell, jobs):
                writer.writerows(rows)
    else:
        for job in jobs:
            writer.writerows(_sweep_cell(job))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pauli-sched",
        description="Pauli frame tracking and measurement scheduling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_track = sub.add_parser("track", help="run a circuit file, print frames JSON")
    p_track.add_argument("circuit")
    p_track.add_argument("--backend", choices=("plain", "packed"), default="plain")
    p_track.set_defaults(func=cmd_track)

    p_order = sub.add_parser("order", help="extract the time order from frames JSON")
    p_order.add_argument("frames")
    p_order.set_defaults(func=cmd_order)

    p_sched = sub.add_parser("schedule", help="search schedules for an instance")
    p_sched.add_argument("graph")
    src = p_sched.add_mutually_exclusive_group(required=True)
    src.add_argument("--order")
    src.add_argument("--frames")
    mode = p_sched.add_mutually_exclusive_group(required=True)
    mode.add_argument(
        "--exact", dest="mode", action="store_const", const="exact"
    )
    mode.add_argument(
        "--approximate", dest="mode", action="store_const", const="approximate"
    )
    mode.add_argument(
        "--trivial-time", dest="mode", action="store_const", const="trivial_time"
    )
    p_sched.add_argument("--seed", type=int, default=None)
    p_sched.add_argument("--timeout-scale", type=float, default=0.01)
    p_sched.add_argument("--workers", type=int, default=_default_workers())
    p_sched.add_argument("--paper-faithful-pruning", action="store_true")
    p_sched.set_defaults(func=cmd_schedule)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("--spec")
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--pe", type=float)
    p_gen.add_argument("--pc", type=float)
    p_gen.add_argument("--seed", type=int)
    p_gen.add_argument("--graph-out")
    p_gen.add_argument("--frames-out")
    p_gen.set_defaults(func=cmd_gen)

    p_sweep = sub.add_parser("sweep", help="run a seeded experiment grid, print CSV")
    p_sweep.add_argument("--spec")
    p_sweep.add_argument("--n")
    p_sweep.add_argument("--pe")
    p_sweep.add_argument("--pc")
    p_sweep.add_argument("--samples", type=int, default=1)
    p_sweep.add_argument("--modes", default="trivial_time")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--timeout-scale", type=float, default=0.01)
    p_sweep.add_argument("--workers", type=int, default=_default_workers())
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="check a schedule against an instance")
    p_val.add_argument("graph")
    p_val.add_argument("order")
    p_val.add_argument("schedule")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
