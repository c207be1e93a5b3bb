"""Thin scripting wrapper over the tracking and scheduling library.

Exposes three things: :class:`Tracker` (multi-frame tracking over the plain
bit-vector backend), :class:`Scheduler` (order extraction plus schedule
search) and :func:`gen_instance`. Handles delegate every operation to the
underlying library; nothing is reimplemented here, and outputs are
structurally identical to the CLI's JSON. Errors surface as
:class:`InputError` (the CLI's exit-2 class) or :class:`SemanticError`
(exit 3).

A handle belongs to one thread; share the produced plain data instead.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import pauli_sched as _lib

__all__ = [
    "InputError",
    "SemanticError",
    "Scheduler",
    "Tracker",
    "gen_instance",
]

__version__ = "0.1.0"


class InputError(ValueError):
    """Unparseable or malformed input (CLI exit code 2)."""


class SemanticError(RuntimeError):
    """Semantically invalid input such as a dependency cycle (exit code 3)."""


class Tracker:
    """Multi-frame Pauli tracker handle (plain bit-vector backend only)."""

    def __init__(self) -> None:
        self._tracker = _lib.FramesTracker(backend="plain")

    def run(self, circuit: str | Sequence[str]):
        """Run circuit instructions (text or lines); returns self."""
        if not isinstance(circuit, str):
            circuit = "\n".join(circuit)
        try:
            instructions = _lib.parse_circuit(circuit)
            _lib.run_circuit(self._tracker, instructions)
        except _lib.CircuitError as exc:
            raise InputError(str(exc)) from exc
        return self

    def new_qubit(self, q: int) -> None:
        self._tracker.new_qubit(q)

    def apply_gate(self, name: str, *qubits: int) -> None:
        try:
            kind = _lib.GateKind(name.lower())
        except ValueError as exc:
            raise InputError(f"unknown gate {name!r}") from exc
        self._tracker.apply_gate(kind, list(qubits))

    def track_pauli(self, q: int, pauli: str, frame: int | None = None) -> None:
        self._tracker.track_pauli(q, _lib.PauliEnc.from_name(pauli), frame=frame)

    def new_frame(self, origin: int, corrections: Mapping[int, str]) -> int:
        return self._tracker.new_frame(
            origin,
            {q: _lib.PauliEnc.from_name(p) for q, p in corrections.items()},
        )

    def remove_part(self, q: int, part: str) -> None:
        self._tracker.remove_part(q, part)

    def move_part(self, src: int, dst: int, mapping: str) -> None:
        self._tracker.move_part(src, dst, mapping)

    def measure(self, q: int) -> dict:
        stack = self._tracker.measure(q)
        return {
            "qubit": stack.qubit,
            "z": list(stack.z_bits),
            "x": list(stack.x_bits),
        }

    def frames(self) -> dict:
        """Frames as nested dicts, structurally equal to the frames JSON."""
        return self._tracker.to_json()

    def order(self, measured_order: Sequence[int] | None = None) -> dict:
        """Extract the measurement time order from the tracked frames."""
        try:
            dag = _lib.order_from_frames(self._tracker, measured_order)
        except _lib.CycleError as exc:
            raise SemanticError(str(exc)) from exc
        return dag.to_json()


def run(circuit: str | Sequence[str]) -> dict:
    """One-shot tracking: circuit in, frames out."""
    return Tracker().run(circuit).frames()


class Scheduler:
    """Schedule search handle over a graph and a time order."""

    def __init__(self, graph: Mapping, order: Mapping | None = None,
                 frames: Mapping | None = None) -> None:
        try:
            self._graph = _lib.Graph.from_json(dict(graph))
            if order is not None:
                self._order = _lib.OrderDag.from_json(dict(order), self._graph.n)
            elif frames is not None:
                self._order = _lib.order_from_frames(dict(frames), n=self._graph.n)
            else:
                self._order = _lib.OrderDag(self._graph.n, [])
        except _lib.CycleError as exc:
            raise SemanticError(str(exc)) from exc
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"bad instance: {exc}") from exc

    def trivial_time(self) -> dict:
        schedule = _lib.trivial_time_optimal(self._graph, self._order)
        front = _lib.ParetoFront()
        front.offer(schedule.cost(), schedule)
        return _lib.SearchResult(front, False, 0, 0.0).to_json()

    def run(
        self,
        mode: str = "exact",
        seed: int | None = None,
        timeout_scale: float = 0.01,
        workers: int = 1,
        paper_faithful_pruning: bool = False,
    ) -> dict:
        if mode == "trivial_time":
            return self.trivial_time()
        try:
            cfg = _lib.SearchConfig(
                mode=mode,
                seed=seed,
                timeout_scale=timeout_scale,
                workers=workers,
                paper_faithful_pruning=paper_faithful_pruning,
            )
            return _lib.search(self._graph, self._order, cfg).to_json()
        except ValueError as exc:
            raise InputError(str(exc)) from exc


def gen_instance(n: int, pe: float, pc: float, seed: int) -> dict:
    """Seeded random instance, structurally equal to the CLI `gen` output."""
    try:
        spec = _lib.InstanceSpec(n, pe, pc, seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return {
        "graph": _lib.random_graph(spec).to_json(),
        "frames": _lib.random_frames(spec).to_json(),
    }
