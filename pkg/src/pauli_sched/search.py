"""Measurement-pattern search: exact branch and bound, and a probabilistic
approximate variant.

Both searches walk measurement patterns depth first with per-level candidate
iterators; there is no restarting from scratch. At every state the candidate
next measurement sets are nonempty subsets of the currently measurable
vertices; each candidate extends the partial schedule through the
minimal-alive-set recursion, and branches whose best possible completion is
already matched by the frontier are discarded. The exact search enumerates
all candidates largest-first (time-optimal bias) and returns the true Pareto
frontier over (space, time). The approximate search bounds each level's
iterator (the full measurable set first, then a cheap-singleton heuristic
and seeded random subsets) and gates every candidate on a probabilistic
acceptance function of the potential space improvement, so sparse instances
finish early and hard ones stop on a budget that grows quadratically with
the vertex count.

Determinism: with workers=1 and a fixed seed both searches are reproducible
bit for bit. To keep that true, the quadratic time budget is accounted in
deterministic work units (candidate evaluations) converted from the
configured seconds coefficient with a fixed calibration constant, never from
the wall clock.
"""

from __future__ import annotations

import itertools
import math
import random
import threading
import time as _time
from dataclasses import dataclass, field

from .schedule import (
    Cost,
    Graph,
    OrderDag,
    Schedule,
    cost_of,
    validate_schedule,
)

# Calibration: candidate evaluations per second of budget, measured on a
# mid-range machine. Only the product timeout_scale * n^2 * this constant
# matters, and it is deliberately conservative.
UNITS_PER_SECOND = 100_000


@dataclass(frozen=True)
class AcceptanceParams:
    """Coefficients of the acceptance function; (1, 1) is the default form."""

    prefactor_scale: float = 1.0
    decay_scale: float = 1.0


def accept_probability(
    delta: int, v: int, m: int, params: AcceptanceParams | None = None
) -> float:
    """Probability of accepting a candidate measurement set.

    `delta` is the space improvement (best space found so far minus the
    space required so far), `v` the vertex count and `m` the number of
    vertices measured so far including the candidate set. Candidates that do
    not improve on the best space (delta <= 0) are always rejected; the raw
    value v^2 * exp(-v*(v-m) / (|delta|^3 * m)) is clamped into [0, 1].
    """
    if not 0 < m <= v:
        raise ValueError(f"need 0 < m <= v, got m={m}, v={v}")
    if delta <= 0:
        return 0.0
    params = params or AcceptanceParams()
    exponent = -params.decay_scale * v * (v - m) / (abs(delta) ** 3 * m)
    raw = params.prefactor_scale * v * v * math.exp(exponent)
    return min(1.0, raw)


@dataclass
class SearchConfig:
    """Knobs for both search modes.

    `timeout_scale` is the seconds coefficient c of the c*|V|^2 budget;
    `max_units` overrides the derived deterministic work-unit budget
    directly. The seed is required in approximate mode.
    """

    mode: str = "exact"
    timeout_scale: float = 1.0
    acceptance: AcceptanceParams = field(default_factory=AcceptanceParams)
    seed: int | None = None
    workers: int = 1
    paper_faithful_pruning: bool = False
    max_units: int | None = None

    def budget_units(self, n: int) -> int:
        if self.max_units is not None:
            return self.max_units
        if self.timeout_scale <= 0:
            raise ValueError("timeout_scale must be positive")
        return max(1, int(self.timeout_scale * n * n * UNITS_PER_SECOND))


@dataclass(frozen=True)
class FrontierEntry:
    cost: Cost
    schedule: Schedule


class ParetoFront:
    """Dominance-free set of (cost, schedule) entries.

    Entries are kept sorted by time ascending, which for a dominance-free
    set means space strictly decreasing. Thread safe; `offer` refuses
    entries that are weakly dominated and evicts entries the newcomer
    strictly dominates.
    """

    def __init__(self) -> None:
        self._entries: list[FrontierEntry] = []
        self._lock = threading.Lock()

    def offer(self, cost: Cost, schedule: Schedule) -> bool:
        with self._lock:
            for e in self._entries:
                if e.cost.space <= cost.space and e.cost.time <= cost.time:
                    return False
            self._entries = [
                e
                for e in self._entries
                if not (cost.space <= e.cost.space and cost.time <= e.cost.time)
            ]
            self._entries.append(FrontierEntry(cost, schedule))
            self._entries.sort(key=lambda e: e.cost.time)
            return True

    def weakly_dominates(self, space: int, time: int) -> bool:
        with self._lock:
            return any(
                e.cost.space <= space and e.cost.time <= time
                for e in self._entries
            )

    def best_space(self) -> int | None:
        with self._lock:
            return min((e.cost.space for e in self._entries), default=None)

    @property
    def entries(self) -> list[FrontierEntry]:
        with self._lock:
            return list(self._entries)

    def costs(self) -> list[Cost]:
        return [e.cost for e in self.entries]

    def min_time_entry(self) -> FrontierEntry:
        return self.entries[0]

    def min_space_entry(self) -> FrontierEntry:
        return self.entries[-1]

    def to_json(self) -> list[dict]:
        return [
            {
                "space": e.cost.space,
                "time": e.cost.time,
                "schedule": e.schedule.to_json(),
            }
            for e in self.entries
        ]


@dataclass
class SearchResult:
    frontier: ParetoFront
    partial: bool
    seed: int
    wall_seconds: float

    def to_json(self) -> dict:
        return {
            "frontier": self.frontier.to_json(),
            "partial": self.partial,
            "seed": self.seed,
            "wall_seconds": self.wall_seconds,
        }


def measurable_now(order: OrderDag, measured) -> set[int]:
    """Unmeasured vertices whose order-predecessors are all measured."""
    measured_mask = 0
    for v in measured:
        measured_mask |= 1 << v
    return {
        v
        for v in range(order.n)
        if not (measured_mask >> v) & 1
        and order.ancestor_mask[v] & ~measured_mask == 0
    }


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def _mix(*parts: int) -> int:
    acc = 0
    for p in parts:
        acc = _splitmix64(acc ^ (p & 0xFFFFFFFFFFFFFFFF) ^ ((p >> 64) * 0x9E37))
    return acc


class _Exhausted(Exception):
    pass


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, units: int) -> None:
        self.remaining = units

    def spend(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise _Exhausted


class _Searcher:
    """One worker's view of the search; the frontier is shared."""

    def __init__(
        self,
        graph: Graph,
        order: OrderDag,
        cfg: SearchConfig,
        frontier: ParetoFront,
        budget: _Budget,
        approximate: bool,
        worker_id: int,
    ) -> None:
        self.n = graph.n
        self.full = (1 << graph.n) - 1
        self.adj = graph.adj_mask
        self.anc = order.ancestor_mask
        self.height = order.height_of
        self.height_desc = sorted(range(graph.n), key=lambda v: -self.height[v])
        self.cfg = cfg
        self.frontier = frontier
        self.budget = budget
        self.approximate = approximate
        self.worker_id = worker_id
        self.memo: dict[int, list[tuple[int, int]]] = {}
        self.graph = graph
        self.order = order

    # -- helpers ----------------------------------------------------------

    def _measurable(self, measured: int) -> list[int]:
        return [
            v
            for v in range(self.n)
            if not (measured >> v) & 1 and self.anc[v] & ~measured == 0
        ]

    def _nbr_mask(self, m_mask: int) -> int:
        out = 0
        m = m_mask
        while m:
            low = m & -m
            out |= self.adj[low.bit_length() - 1]
            m ^= low
        return out

    def _chain_rest(self, measured: int) -> int:
        for v in self.height_desc:
            if not (measured >> v) & 1:
                return self.height[v]
        return 0

    def _emit(self, steps: list[tuple[int, int]]) -> None:
        sched = Schedule(
            tuple(
                (frozenset(_mask_bits(m)), frozenset(_mask_bits(a)))
                for m, a in steps
            )
        )
        cost = cost_of(sched)
        violation = validate_schedule(self.graph, self.order, sched)
        if violation is not None:  # pragma: no cover - internal invariant
            raise AssertionError(f"search emitted invalid schedule: {violation}")
        self.frontier.offer(cost, sched)

    # -- exact ------------------------------------------------------------

    def run_exact(self) -> None:
        self._dfs_exact(0, 0, 0, 0, [], 0)

    def _dfs_exact(
        self,
        measured: int,
        nbr_acc: int,
        space: int,
        time: int,
        steps: list[tuple[int, int]],
        depth: int,
    ) -> None:
        if measured == self.full:
            self._emit(steps)
            return
        av = self._measurable(measured)
        workers = self.cfg.workers
        index = -1
        for k in range(len(av), 0, -1):
            for combo in itertools.combinations(av, k):
                index += 1
                if depth == 0 and workers > 1 and index % workers != self.worker_id:
                    continue
                self.budget.spend()
                m_mask = 0
                for v in combo:
                    m_mask |= 1 << v
                i_mask = m_mask | ((nbr_acc | self._nbr_mask(m_mask)) & ~measured)
                new_space = max(space, i_mask.bit_count())
                new_time = time + 1
                new_measured = measured | m_mask
                if new_measured != self.full:
                    if self.cfg.paper_faithful_pruning:
                        opt_time = new_time + 1
                    else:
                        opt_time = new_time + self._chain_rest(new_measured)
                else:
                    opt_time = new_time
                if self.frontier.weakly_dominates(new_space, opt_time):
                    continue
                if not self._memo_admit(new_measured, new_space, new_time):
                    continue
                steps.append((m_mask, i_mask))
                self._dfs_exact(
                    new_measured,
                    nbr_acc | self._nbr_mask(m_mask),
                    new_space,
                    new_time,
                    steps,
                    depth + 1,
                )
                steps.pop()

    def _memo_admit(self, measured: int, space: int, time: int) -> bool:
        arrivals = self.memo.setdefault(measured, [])
        for s, t in arrivals:
            if s <= space and t <= time:
                return False
        arrivals[:] = [
            (s, t) for s, t in arrivals if not (space <= s and time <= t)
        ]
        arrivals.append((space, time))
        return True

    # -- approximate ------------------------------------------------------

    def run_approximate(self) -> None:
        # One depth-first tree; per-level candidate iterators are bounded, so
        # sparse instances exhaust organically and only hard ones run into
        # the budget (_Exhausted propagates to the caller). Workers share the
        # root seed and take disjoint slices of the root candidate list.
        self._dfs_approx(0, 0, 0, 0, [], _mix(self.cfg.seed or 0), 0)

    def _dfs_approx(
        self,
        measured: int,
        nbr_acc: int,
        space: int,
        time: int,
        steps: list[tuple[int, int]],
        node_seed: int,
        depth: int,
    ) -> None:
        if measured == self.full:
            self._emit(steps)
            return
        av = self._measurable(measured)
        # Candidate generation and acceptance draws use separate streams so
        # the candidate list does not depend on how many draws were taken.
        gen_rng = random.Random(node_seed)
        accept_rng = random.Random(_mix(node_seed, 0xACCE97))
        workers = self.cfg.workers
        for index, m_mask in enumerate(
            self._approx_candidates(av, gen_rng, measured, nbr_acc)
        ):
            if depth == 0 and workers > 1 and index % workers != self.worker_id:
                continue
            self.budget.spend()
            i_mask = m_mask | ((nbr_acc | self._nbr_mask(m_mask)) & ~measured)
            new_space = max(space, i_mask.bit_count())
            new_time = time + 1
            new_measured = measured | m_mask
            best = self.frontier.best_space()
            if best is not None:
                delta = best - new_space
                if delta <= 0:
                    continue
                p = accept_probability(
                    delta, self.n, new_measured.bit_count(), self.cfg.acceptance
                )
                if accept_rng.random() >= p:
                    continue
            steps.append((m_mask, i_mask))
            self._dfs_approx(
                new_measured,
                nbr_acc | self._nbr_mask(m_mask),
                new_space,
                new_time,
                steps,
                _mix(node_seed, m_mask % 0xFFFFFFFFFFFFFFC5, depth),
                depth + 1,
            )
            steps.pop()

    def _approx_candidates(self, av, rng, measured, nbr_acc):
        full_mask = 0
        for v in av:
            full_mask |= 1 << v
        yield full_mask
        seen = {full_mask}
        if len(av) > 1:
            best_v = min(
                av,
                key=lambda v: (
                    ((1 << v) | ((nbr_acc | self.adj[v]) & ~measured)).bit_count(),
                    v,
                ),
            )
            single = 1 << best_v
            if single not in seen:
                seen.add(single)
                yield single
        draws = max(8, 2 * len(av))
        for _ in range(draws):
            k = rng.randint(1, len(av))
            m_mask = 0
            for v in rng.sample(av, k):
                m_mask |= 1 << v
            if m_mask not in seen:
                seen.add(m_mask)
                yield m_mask


def _mask_bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _empty_result(cfg: SearchConfig, started: float) -> SearchResult:
    frontier = ParetoFront()
    frontier.offer(Cost(0, 0), Schedule(()))
    return SearchResult(
        frontier, False, cfg.seed or 0, _time.perf_counter() - started
    )


def search_exact(
    g: Graph, order: OrderDag, cfg: SearchConfig | None = None
) -> SearchResult:
    """Exact Pareto frontier over all schedules constructible from patterns.

    Deterministic for fixed inputs. If the work budget runs out the frontier
    found so far is returned with `partial` set.
    """
    cfg = cfg or SearchConfig(mode="exact")
    if cfg.mode != "exact":
        raise ValueError(f"config mode is {cfg.mode!r}, expected 'exact'")
    started = _time.perf_counter()
    if g.n == 0:
        return _empty_result(cfg, started)
    frontier = ParetoFront()
    budget_total = cfg.budget_units(g.n)
    partial = False
    if cfg.workers <= 1:
        searcher = _Searcher(g, order, cfg, frontier, _Budget(budget_total), False, 0)
        try:
            searcher.run_exact()
        except _Exhausted:
            partial = True
    else:
        partial = _run_workers(g, order, cfg, frontier, budget_total, False)
    return SearchResult(
        frontier, partial, cfg.seed or 0, _time.perf_counter() - started
    )


def search_approximate(
    g: Graph, order: OrderDag, cfg: SearchConfig
) -> SearchResult:
    """Probabilistic space-focused search: one gated DFS over bounded
    per-level candidate sets, returning the best frontier found when the
    tree or the quadratic budget is exhausted. Reproducible for workers=1
    and a fixed seed.
    """
    if cfg.mode != "approximate":
        raise ValueError(f"config mode is {cfg.mode!r}, expected 'approximate'")
    if cfg.seed is None:
        raise ValueError("approximate search needs a seed")
    started = _time.perf_counter()
    if g.n == 0:
        return _empty_result(cfg, started)
    frontier = ParetoFront()
    budget_total = cfg.budget_units(g.n)
    if cfg.workers <= 1:
        searcher = _Searcher(g, order, cfg, frontier, _Budget(budget_total), True, 0)
        try:
            searcher.run_approximate()
        except _Exhausted:
            pass
    else:
        _run_workers(g, order, cfg, frontier, budget_total, True)
    return SearchResult(
        frontier, False, cfg.seed or 0, _time.perf_counter() - started
    )


def _run_workers(
    g: Graph,
    order: OrderDag,
    cfg: SearchConfig,
    frontier: ParetoFront,
    budget_total: int,
    approximate: bool,
) -> bool:
    """Run worker threads on disjoint root shards; True when any ran out."""
    exhausted = [False] * cfg.workers

    def work(wid: int) -> None:
        searcher = _Searcher(
            g, order, cfg, frontier, _Budget(budget_total // cfg.workers), approximate, wid
        )
        try:
            if approximate:
                searcher.run_approximate()
            else:
                searcher.run_exact()
        except _Exhausted:
            exhausted[wid] = True

    threads = [
        threading.Thread(target=work, args=(w,)) for w in range(cfg.workers)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    return any(exhausted) and not approximate


def search(g: Graph, order: OrderDag, cfg: SearchConfig) -> SearchResult:
    if cfg.mode == "exact":
        return search_exact(g, order, cfg)
    if cfg.mode == "approximate":
        return search_approximate(g, order, cfg)
    raise ValueError(f"unknown search mode {cfg.mode!r}")
