"""Seeded random scheduling instances: graphs plus correction frames.

Randomness comes from numpy's Philox generator (counter based, 4x64 with 10
rounds), which is portable enough that other implementations can reproduce
instances bit for bit. The key is the pair (seed, domain) with domain 0 for
graph edges and domain 1 for frames, so the two artifacts of one spec are
independent streams.

Draw order, fixed for portability:

* graph: one uniform per vertex pair (i, j), i < j, in lexicographic order;
  the edge exists when the uniform is < p_e.
* frames: first a permutation of the vertices (numpy `permutation`), taken
  as the pick order. For the k-th picked vertex u, every not-yet-picked
  vertex v is visited in increasing index order; one uniform decides whether
  v gets a correction (< p_c) and, if so, one more uniform decides the kind
  (< 0.5 means Z, else X).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import pauli
from .schedule import Graph
from .tracker import FramesTracker

_GRAPH_DOMAIN = 0
_FRAMES_DOMAIN = 1


@dataclass(frozen=True)
class InstanceSpec:
    """Vertex count, edge density, correction density and seed."""

    n: int
    p_e: float
    p_c: float
    seed: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        for name, p in (("p_e", self.p_e), ("p_c", self.p_c)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")

    def to_json(self) -> dict:
        return {"n": self.n, "pe": self.p_e, "pc": self.p_c, "seed": self.seed}

    @classmethod
    def from_json(cls, data: dict) -> "InstanceSpec":
        return cls(
            int(data["n"]), float(data["pe"]), float(data["pc"]), int(data["seed"])
        )


def _generator(seed: int, domain: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, domain], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def random_graph(spec: InstanceSpec) -> Graph:
    """Erdos-Renyi graph: each of the n(n-1)/2 edges drawn with p_e."""
    rng = _generator(spec.seed, _GRAPH_DOMAIN)
    n = spec.n
    pair_count = n * (n - 1) // 2
    draws = rng.random(pair_count)
    edges = []
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if draws[idx] < spec.p_e:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges)


def random_frames(spec: InstanceSpec) -> FramesTracker:
    """Random correction frames over a random measurement pick order.

    Vertices are picked one by one in a uniformly random order; each picked
    vertex captures one frame (origin = the vertex) holding corrections on
    the not-yet-picked vertices, each present with probability p_c and drawn
    uniformly from {X, Z}. The induced time order always follows the pick
    order, so it is acyclic by construction.
    """
    rng = _generator(spec.seed, _FRAMES_DOMAIN)
    n = spec.n
    tracker = FramesTracker()
    for q in range(n):
        tracker.new_qubit(q)
    pick_order = [int(v) for v in rng.permutation(n)]
    remaining = set(range(n))
    for u in pick_order:
        remaining.discard(u)
        corrections = {}
        for v in sorted(remaining):
            if rng.random() < spec.p_c:
                kind = pauli.Z if rng.random() < 0.5 else pauli.X
                corrections[v] = kind
        tracker.new_frame(u, corrections)
    return tracker


def density_for_size(n: int) -> float:
    """Density 0.5 / sqrt(n - 1), used for both p_e and p_c in size sweeps."""
    if n < 2:
        raise ValueError(f"density_for_size needs n >= 2, got {n}")
    return 0.5 / math.sqrt(n - 1)
