"""Scheduling data model: graphs, measurement orders, patterns and schedules.

A scheduling instance is an undirected simple graph (the entanglement
structure) together with a strict partial order on its vertices (the
measurement time order, extracted from tracked frames). A measurement
schedule is a sequence of (measure-set, alive-set) steps; its space cost is
the largest alive set and its time cost the number of steps.

The neighborhood conditions are evaluated over not-yet-measured neighbors
only: a neighbor measured in an earlier step was necessarily alive and
entangled while both vertices were, so it imposes nothing on later steps.
Taken over all neighbors instead, the aliveness conditions would contradict
each other on something as small as a path graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class CycleError(Exception):
    """The supposed partial order contains a cycle; carries a witness."""

    def __init__(self, cycle: list[int]) -> None:
        super().__init__(f"dependency cycle: {' -> '.join(map(str, cycle))}")
        self.cycle = cycle


class PatternError(ValueError):
    """Invalid measurement pattern; carries the first violating step index."""

    def __init__(self, index: int, message: str) -> None:
        super().__init__(f"step {index + 1}: {message}")
        self.index = index


class Graph:
    """Undirected simple graph on vertices 0..n-1 with sorted adjacency."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        self.n = n
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.adjacency = [sorted(s) for s in adj]
        self.adj_mask = [_mask(s) for s in adj]

    def neighbors(self, v: int) -> list[int]:
        return self.adjacency[v]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), [tuple(e) for e in data["edges"]])


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class OrderDag:
    """Strict partial order stored as a transitively reduced DAG with layers.

    `layer_of[v]` is 0 for minimal vertices and 1 + the maximum layer of the
    predecessors otherwise; the layers partition the vertices and give the
    measurement pattern of the trivial time-optimal schedule. Reports index
    layers from 1, matching the time-cost convention.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]) -> None:
        raw = sorted({(u, v) for u, v in edges})
        for u, v in raw:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"order edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise CycleError([u, u])
        self.n = n
        succ_raw: list[list[int]] = [[] for _ in range(n)]
        pred_raw: list[list[int]] = [[] for _ in range(n)]
        for u, v in raw:
            succ_raw[u].append(v)
            pred_raw[v].append(u)

        topo = _topo_order(n, succ_raw, pred_raw)

        # Strict-descendant masks, built in reverse topological order.
        desc = [0] * n
        for v in reversed(topo):
            m = 0
            for w in succ_raw[v]:
                m |= desc[w] | (1 << w)
            desc[v] = m

        # An edge is redundant exactly when its target is a strict
        # descendant of another direct successor.
        reduced: list[tuple[int, int]] = []
        for u in range(n):
            redundant = 0
            for w in succ_raw[u]:
                redundant |= desc[w]
            for w in succ_raw[u]:
                if not (redundant >> w) & 1:
                    reduced.append((u, w))
        self.edges = sorted(reduced)

        self.ancestor_mask = [0] * n
        self.layer_of = [0] * n
        for v in topo:
            for u in pred_raw[v]:
                self.ancestor_mask[v] |= self.ancestor_mask[u] | (1 << u)
                self.layer_of[v] = max(self.layer_of[v], self.layer_of[u] + 1)

        self.succ_reduced: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            self.succ_reduced[u].append(v)
        # Longest chain (vertex count) starting at each vertex.
        self.height_of = [0] * n
        for v in reversed(topo):
            self.height_of[v] = 1 + max(
                (self.height_of[w] for w in self.succ_reduced[v]), default=0
            )

    def layers(self) -> list[list[int]]:
        if self.n == 0:
            return []
        count = max(self.layer_of) + 1
        out: list[list[int]] = [[] for _ in range(count)]
        for v in range(self.n):
            out[self.layer_of[v]].append(v)
        return out

    def chain_length(self) -> int:
        return max(self.height_of, default=0)

    def predecessors_mask(self, vertices: Iterable[int]) -> int:
        m = 0
        for v in vertices:
            m |= self.ancestor_mask[v]
        return m

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict, n: int) -> "OrderDag":
        return cls(n, [tuple(e) for e in data["edges"]])


def _topo_order(
    n: int, succ: Sequence[Sequence[int]], pred: Sequence[Sequence[int]]
) -> list[int]:
    indeg = [len(p) for p in pred]
    queue = [v for v in range(n) if indeg[v] == 0]
    topo: list[int] = []
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        topo.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(topo) != n:
        raise CycleError(_witness_cycle(n, succ, set(topo)))
    return topo


def _witness_cycle(
    n: int, succ: Sequence[Sequence[int]], done: set[int]
) -> list[int]:
    remaining = next(v for v in range(n) if v not in done)
    seen: dict[int, int] = {}
    path: list[int] = []
    v = remaining
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = next(w for w in succ[v] if w not in done)
    return path[seen[v] :] + [v]


def transitive_reduction(
    edges: Iterable[tuple[int, int]]
) -> list[tuple[int, int]]:
    """Unique minimal edge list with the same reachability (DAG input).

    Vertices are whatever ints appear in the edges. Raises CycleError when
    the input is not acyclic.
    """
    edge_list = sorted({(u, v) for u, v in edges})
    vertices = sorted({u for e in edge_list for u in e})
    index = {v: i for i, v in enumerate(vertices)}
    dag = OrderDag(
        len(vertices), [(index[u], index[v]) for u, v in edge_list]
    )
    return [(vertices[u], vertices[v]) for u, v in dag.edges]


class Cost(NamedTuple):
    space: int
    time: int


@dataclass(frozen=True)
class Schedule:
    """Sequence of (measure, alive) steps."""

    steps: tuple[tuple[frozenset[int], frozenset[int]], ...]

    def cost(self) -> Cost:
        return cost_of(self)

    def to_json(self) -> dict:
        space, time = self.cost()
        return {
            "steps": [
                {"measure": sorted(m), "alive": sorted(a)} for m, a in self.steps
            ],
            "space": space,
            "time": time,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Schedule":
        return cls(
            tuple(
                (frozenset(step["measure"]), frozenset(step["alive"]))
                for step in data["steps"]
            )
        )


def cost_of(s: Schedule) -> Cost:
    if not s.steps:
        return Cost(0, 0)
    return Cost(max(len(a) for _, a in s.steps), len(s.steps))


@dataclass(frozen=True)
class Violation:
    """First failed schedule condition: its number (1-4) and 1-based step."""

    condition: int
    step: int
    message: str


def order_from_frames(
    frames, measured_order: Sequence[int] | None = None, n: int | None = None
) -> OrderDag:
    """Extract the measurement time order from tracked frames.

    `frames` is a frames JSON dict or a tracker with `to_json`. Each frame
    contributes the relation origin(f) < v for every vertex v != origin(f)
    on which the frame holds a nonidentity correction. `measured_order`
    optionally supplies the per-frame origin qubits, overriding the recorded
    origins. The result is transitively reduced and layered; a cycle in the
    input raises CycleError with a witness.
    """
    if hasattr(frames, "to_json"):
        frames = frames.to_json()
    frame_count = int(frames["frame_count"])
    stacks = frames.get("stacks", {})
    if measured_order is not None:
        if len(measured_order) < frame_count:
            raise ValueError(
                f"measured_order covers {len(measured_order)} of "
                f"{frame_count} frames"
            )
        origins = {f: int(measured_order[f]) for f in range(frame_count)}
    else:
        origins = {int(f): int(q) for f, q in frames.get("origins", {}).items()}
        missing = [f for f in range(frame_count) if f not in origins]
        if missing:
            raise ValueError(f"frames without recorded origin: {missing}")

    mentioned = set(origins.values()) | {int(q) for q in stacks}
    if n is None:
        n = max(mentioned, default=-1) + 1
    elif mentioned and max(mentioned) >= n:
        raise ValueError(f"frames mention vertex {max(mentioned)} but n={n}")

    edges = set()
    for q_str, parts in stacks.items():
        q = int(q_str)
        zbits, xbits = parts["z"], parts["x"]
        for f in range(frame_count):
            z = zbits[f] if f < len(zbits) else 0
            x = xbits[f] if f < len(xbits) else 0
            if (z or x) and origins[f] != q:
                edges.add((origins[f], q))
    return OrderDag(n, edges)


def validate_pattern(
    n: int, order: OrderDag, pattern: Sequence[Iterable[int]]
) -> list[frozenset[int]]:
    """Check the pattern conditions; returns the steps as frozensets."""
    steps = [frozenset(m) for m in pattern]
    measured = 0
    for i, m in enumerate(steps):
        if not m:
            raise PatternError(i, "empty measurement set")
        m_mask = _mask(m)
        if m_mask & measured:
            dup = sorted(_bits(m_mask & measured))
            raise PatternError(i, f"vertices measured twice: {dup}")
        for v in m:
            if not 0 <= v < n:
                raise PatternError(i, f"vertex {v} out of range")
        pre = order.predecessors_mask(m)
        if pre & ~measured:
            missing = sorted(_bits(pre & ~measured))
            raise PatternError(
                i, f"predecessors not yet measured: {missing}"
            )
        measured |= m_mask
    if measured != (1 << n) - 1:
        missing = sorted(set(range(n)) - set(_bits(measured)))
        raise PatternError(
            len(steps) - 1 if steps else 0, f"unmeasured vertices: {missing}"
        )
    return steps


def schedule_from_pattern(
    g: Graph, order: OrderDag, pattern: Sequence[Iterable[int]]
) -> Schedule:
    """Minimal schedule for a valid pattern.

    Alive sets follow the recursion
    I_i = M_i | (N(M_i) minus measured) | (I_{i-1} minus M_{i-1}),
    with neighborhoods restricted to not-yet-measured vertices. The result
    is space optimal among all schedules sharing the measurement sets.
    """
    steps = validate_pattern(g.n, order, pattern)
    out = []
    measured = 0
    carry = 0
    for m in steps:
        m_mask = _mask(m)
        nbrs = 0
        for v in m:
            nbrs |= g.adj_mask[v]
        alive = m_mask | (nbrs & ~measured) | carry
        out.append((m, frozenset(_bits(alive))))
        measured |= m_mask
        carry = alive & ~m_mask
    return Schedule(tuple(out))


def validate_schedule(g: Graph, order: OrderDag, s: Schedule) -> Violation | None:
    """Check the four schedule conditions; None when valid.

    Per step i: (1) the measured set and its not-yet-measured neighbors are
    alive; (2) all order-predecessors were measured earlier; (3) measure
    sets are disjoint and cover every vertex (completeness reported at the
    last step); (4) alive sets carry over and avoid measured vertices.
    """
    n = g.n
    full = (1 << n) - 1
    measured = 0
    carry = 0
    for i, (m, alive) in enumerate(s.steps, start=1):
        m_mask = _mask(m)
        a_mask = _mask(alive)
        if (m_mask | a_mask) & ~full:
            return Violation(4, i, "vertex out of range")
        nbrs = 0
        for v in m:
            nbrs |= g.adj_mask[v]
        needed = m_mask | (nbrs & ~measured)
        if needed & ~a_mask:
            missing = sorted(_bits(needed & ~a_mask))
            return Violation(
                1, i, f"measured vertices or their neighbors not alive: {missing}"
            )
        pre = order.predecessors_mask(m)
        if pre & ~measured:
            return Violation(
                2, i, f"unmeasured predecessors: {sorted(_bits(pre & ~measured))}"
            )
        if m_mask & measured:
            return Violation(
                3, i, f"vertices measured twice: {sorted(_bits(m_mask & measured))}"
            )
        if carry & ~a_mask:
            return Violation(
                4, i, f"alive vertices dropped early: {sorted(_bits(carry & ~a_mask))}"
            )
        if a_mask & measured:
            return Violation(
                4, i, f"alive set contains measured vertices: {sorted(_bits(a_mask & measured))}"
            )
        measured |= m_mask
        carry = a_mask & ~m_mask
    if measured != full:
        missing = sorted(_bits(full & ~measured))
        return Violation(
            3, len(s.steps), f"vertices never measured: {missing}"
        )
    return None


def trivial_time_optimal(g: Graph, order: OrderDag) -> Schedule:
    """Greedy time-optimal schedule from the order's layers.

    Measures every currently allowed vertex each step; the time cost equals
    the longest chain of the order and does not depend on the graph edges.
    """
    layers = order.layers()
    if not layers:
        return Schedule(())
    return schedule_from_pattern(g, order, layers)
