"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete. The statistical criteria (7 and 8) are seeded and
were verified against independent runs before the thresholds were frozen.
"""

from __future__ import annotations

import csv
import functools
import io
import itertools
import math
import random
import statistics
import time

import pytest

from pauli_sched import (
    FramesTracker,
    GateKind,
    Graph,
    LiveTracker,
    OrderDag,
    PauliEnc,
    SearchConfig,
    accept_probability,
    apply_gate_rule,
    cost_of,
    parse_circuit,
    run_circuit,
    schedule_from_pattern,
    search_approximate,
    search_exact,
    trivial_time_optimal,
    validate_schedule,
)
from pauli_sched.cli import main as cli_main
from pauli_sched.instances import (
    InstanceSpec,
    density_for_size,
    random_frames,
    random_graph,
)
from pauli_sched.schedule import order_from_frames

from circuits import TELEPORT, random_gate_pauli_circuit
from oracles import (
    GATE_MATRICES,
    all_valid_alive_families,
    brute_force_frontier,
    conjugate_dense,
    dense_pauli_to_bits,
    longest_chain_oracle,
    pauli_matrix_n,
    proportional,
    run_circuit_dense,
)


def report(number: int, description: str):
    """Decorator printing the criterion's pass/fail line."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] criterion {number}: {description}")
                raise
            print(f"[PASS] criterion {number}: {description}")

        return run

    return wrap


ALL_PAULIS = [PauliEnc(z, x) for z in (0, 1) for x in (0, 1)]


@report(1, "gate rules match dense matrix conjugation exhaustively")
def test_criterion_1_conjugation_oracle():
    started = time.perf_counter()
    for gate in (GateKind.H, GateKind.S, GateKind.SDG):
        for p in ALL_PAULIS:
            out = apply_gate_rule(gate, [p])
            dense = conjugate_dense(
                GATE_MATRICES[gate.value], pauli_matrix_n([(p.z, p.x)])
            )
            assert proportional(
                dense, pauli_matrix_n([(out[0].z, out[0].x)])
            ), f"{gate} on {p}"
    for gate in (GateKind.CZ, GateKind.CX, GateKind.SWAP):
        for pa, pb in itertools.product(ALL_PAULIS, repeat=2):
            out = apply_gate_rule(gate, [pa, pb])
            dense = conjugate_dense(
                GATE_MATRICES[gate.value],
                pauli_matrix_n([(pa.z, pa.x), (pb.z, pb.x)]),
            )
            assert proportional(
                dense, pauli_matrix_n([(q.z, q.x) for q in out])
            ), f"{gate} on {pa},{pb}"
    assert time.perf_counter() - started < 1.0


@report(2, "500 random circuits agree with the dense conjugation oracle")
def test_criterion_2_tracking_differential():
    started = time.perf_counter()
    rng = random.Random(0xDEF3)
    for trial in range(500):
        n = rng.randint(1, 5)
        instructions = random_gate_pauli_circuit(rng, n, rng.randint(1, 64))
        tracker = LiveTracker()
        for q in range(n):
            tracker.new_qubit(q)
        for instr in instructions:
            if instr[0] == "pauli":
                tracker.track_pauli(instr[2], PauliEnc.from_name(instr[1]))
            else:
                tracker.apply_gate(GateKind(instr[1]), list(instr[2]))
        dense = run_circuit_dense(n, instructions)
        tracked = pauli_matrix_n(
            [(tracker.paulis[q].z, tracker.paulis[q].x) for q in range(n)]
        )
        assert proportional(dense, tracked), f"trial {trial}"
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"took {elapsed:.1f}s"


@report(3, "teleportation circuit leaves exactly one Z on the output qubit")
def test_criterion_3_teleportation():
    tracker = run_circuit(FramesTracker(), parse_circuit(TELEPORT))
    # Only the output qubit survives, carrying a Z in the tracked frame.
    assert tracker.qubits() == [2]
    assert tracker.frame_count == 1
    assert tracker.pauli_at(2, 0) == PauliEnc(1, 0)
    # Nothing else is nontrivial: the measured qubits carried nothing out,
    # and the output has no X component that could block anything.
    for stack in tracker.measured.values():
        assert set(stack.z_bits) <= {0} and set(stack.x_bits) <= {0}
    data = tracker.to_json()
    assert data["stacks"] == {"2": {"z": [1], "x": [0]}}


def random_dag_edges(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    perm = list(range(n))
    rng.shuffle(perm)
    return [
        (perm[i], perm[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]


def random_pattern(rng: random.Random, order: OrderDag) -> list[set[int]]:
    measured: set[int] = set()
    pattern = []
    while len(measured) < order.n:
        measured_mask = 0
        for v in measured:
            measured_mask |= 1 << v
        allowed = [
            v
            for v in range(order.n)
            if v not in measured
            and order.ancestor_mask[v] & ~measured_mask == 0
        ]
        chosen = set(rng.sample(allowed, rng.randint(1, len(allowed))))
        pattern.append(chosen)
        measured |= chosen
    return pattern


@report(4, "minimal schedules always validate; minimality brute-forced at |V|<=5")
def test_criterion_4_construction_soundness():
    rng = random.Random(0xAB5)
    checked_minimality = 0
    for trial in range(1000):
        n = rng.randint(1, 8)
        graph_edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < rng.random()
        ]
        graph = Graph(n, graph_edges)
        order = OrderDag(n, random_dag_edges(rng, n, rng.uniform(0.0, 0.5)))
        pattern = random_pattern(rng, order)
        schedule = schedule_from_pattern(graph, order, pattern)
        assert validate_schedule(graph, order, schedule) is None, f"trial {trial}"
        if n <= 5:
            constructed = [set(a) for _, a in schedule.steps]
            pattern_sets = [set(m) for m, _ in schedule.steps]
            for family in all_valid_alive_families(n, graph_edges, pattern_sets):
                for j_set, i_set in zip(family, constructed):
                    assert not j_set < i_set, (
                        f"trial {trial}: valid alive family beats construction"
                    )
            checked_minimality += 1
    assert checked_minimality >= 300


@functools.lru_cache(maxsize=1)
def small_corpus():
    """Seeded corpus of >= 100 instances with |V| <= 6 plus exact results."""
    rng = random.Random(0x5EED)
    out = []
    for trial in range(110):
        n = rng.randint(1, 6)
        pe = rng.uniform(0.0, 1.0)
        pc = rng.uniform(0.0, 0.8)
        spec = InstanceSpec(n, pe, pc, seed=50_000 + trial)
        graph = random_graph(spec)
        order = order_from_frames(random_frames(spec), n=n)
        result = search_exact(graph, order)
        assert not result.partial
        out.append((spec, graph, order, result))
    return out


@report(5, "exact search equals brute-force pattern enumeration on |V|<=6 corpus")
def test_criterion_5_exact_oracle():
    started = time.perf_counter()
    for spec, graph, order, result in small_corpus():
        expected = brute_force_frontier(graph.n, graph.edges(), order.edges)
        got = {(c.space, c.time) for c in result.frontier.costs()}
        assert got == expected, f"spec {spec}"
        for entry in result.frontier.entries:
            assert validate_schedule(graph, order, entry.schedule) is None
            assert cost_of(entry.schedule) == entry.cost
    elapsed = time.perf_counter() - started
    assert elapsed < 300.0, f"took {elapsed:.1f}s"


@report(6, "min-time frontier entries are chain-optimal and graph-independent")
def test_criterion_6_time_optimality():
    for spec, graph, order, result in small_corpus():
        chain = longest_chain_oracle(order.n, order.edges)
        trivial = trivial_time_optimal(graph, order)
        entry = result.frontier.min_time_entry()
        assert entry.cost.time == chain
        assert cost_of(trivial).time == chain
        assert entry.cost.space <= cost_of(trivial).space
        # Re-randomized edges, same order: trivial time cost must not move.
        for flip in range(1, 3):
            other = random_graph(
                InstanceSpec(spec.n, 1.0 - spec.p_e, spec.p_c, spec.seed + flip)
            )
            assert cost_of(trivial_time_optimal(other, order)).time == chain


def run_sweep(capsys, *argv: str) -> list[dict]:
    code = cli_main(["sweep", *argv])
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return list(csv.DictReader(io.StringIO(captured.out)))


GRID = ",".join(f"{k / 10:.1f}" for k in range(1, 10))


@report(7, "density-sweep trends at n=20: flat-in-pe trivial time, rising approx space")
def test_criterion_7_density_trends(capsys):
    started = time.perf_counter()
    pes = [k / 10 for k in range(1, 10)]

    # (a) trivial time cost: 9x9 grid, 20 samples per cell.
    rows = run_sweep(
        capsys,
        "--n", "20", "--pe", GRID, "--pc", GRID,
        "--samples", "20", "--modes", "trivial_time", "--seed", "2024",
    )
    times: dict[tuple[float, float], list[int]] = {}
    for row in rows:
        key = (float(row["pe"]), float(row["pc"]))
        times.setdefault(key, []).append(int(row["time"]))
    grand_means = {}
    for pc in pes:
        means = [statistics.mean(times[(pe, pc)]) for pe in pes]
        pooled = [t for pe in pes for t in times[(pe, pc)]]
        se = statistics.pstdev(pooled) / math.sqrt(20)
        grand = statistics.mean(means)
        grand_means[pc] = grand
        deviation = max(abs(m - grand) for m in means)
        assert deviation <= 5 * se, (
            f"pc={pc}: per-pe spread {deviation:.2f} exceeds 5*SE {5 * se:.2f}"
        )
        diffs = [b - a for a, b in zip(means, means[1:])]
        assert not all(d > 0 for d in diffs) and not all(d < 0 for d in diffs), (
            f"pc={pc}: trivial time cost trends monotonically across pe: {means}"
        )
    assert grand_means[0.9] > grand_means[0.1] + 3, "time cost must rise with pc"

    # (b) approximate space cost: nondecreasing in pe at fixed pc.
    rows = run_sweep(
        capsys,
        "--n", "20", "--pe", GRID, "--pc", "0.3,0.6,0.9",
        "--samples", "20", "--modes", "approximate",
        "--seed", "2025", "--timeout-scale", "0.002",
    )
    spaces: dict[tuple[float, float], list[int]] = {}
    for row in rows:
        key = (float(row["pe"]), float(row["pc"]))
        spaces.setdefault(key, []).append(int(row["space"]))
    for pc in (0.3, 0.6, 0.9):
        means = [statistics.mean(spaces[(pe, pc)]) for pe in pes]
        inversions = sum(1 for a, b in zip(means, means[1:]) if b < a)
        assert inversions <= 1, f"pc={pc}: approx space means not rising: {means}"
        assert means[-1] > means[0], f"pc={pc}: no overall increase: {means}"
    elapsed = time.perf_counter() - started
    assert elapsed < 1800.0, f"took {elapsed:.1f}s"


@report(8, "size scan at scaling density: approx space <= trivial, exact time-endpoint")
def test_criterion_8_size_scan():
    wins = 0
    total = 0
    for n in (5, 10, 15, 20):
        p = density_for_size(n)
        for sample in range(10):
            spec = InstanceSpec(n, p, p, seed=90_000 + 100 * n + sample)
            graph = random_graph(spec)
            order = order_from_frames(random_frames(spec), n=n)
            trivial_cost = cost_of(trivial_time_optimal(graph, order))
            approx = search_approximate(
                graph,
                order,
                SearchConfig(
                    mode="approximate", seed=spec.seed, timeout_scale=0.002
                ),
            )
            total += 1
            if approx.frontier.min_space_entry().cost.space <= trivial_cost.space:
                wins += 1
            if n <= 12:
                exact = search_exact(
                    graph, order, SearchConfig(mode="exact", timeout_scale=1.0)
                )
                assert not exact.partial
                exact_time_entry = exact.frontier.min_time_entry()
                assert exact_time_entry.cost.time == trivial_cost.time
                assert exact_time_entry.cost.space <= trivial_cost.space
    assert wins >= 0.8 * total, f"approx beat trivial on only {wins}/{total}"


@report(9, "order extraction from 1000-vertex dense frames stays fast")
def test_criterion_9_polynomial_order_extraction():
    frames = random_frames(InstanceSpec(1000, 0.5, 0.5, seed=31))
    started = time.perf_counter()
    dag = order_from_frames(frames, n=1000)
    elapsed = time.perf_counter() - started
    assert dag.n == 1000
    assert dag.chain_length() >= 1
    assert elapsed < 60.0, f"took {elapsed:.1f}s"


@report(10, "acceptance function: step at zero, clamping, tagged examples")
def test_criterion_10_acceptance_function():
    assert accept_probability(0, 20, 5) == 0.0
    assert accept_probability(-1, 20, 5) == 0.0
    assert accept_probability(-100, 3, 2) == 0.0
    # v=20, m=20, delta=3: exponent 0, raw 400, clamped to 1.
    assert accept_probability(3, 20, 20) == 1.0
    # v=20, m=5, delta=2: exponent -20*15/(8*5) = -7.5, raw ~0.22, unclamped.
    value = accept_probability(2, 20, 5)
    assert 0.0 < value < 1.0
    assert value == pytest.approx(400 * math.exp(-7.5))
    with pytest.raises(ValueError):
        accept_probability(1, 20, 0)
