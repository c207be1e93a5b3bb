"""Pauli frame trackers.

Two modes:

* :class:`LiveTracker` keeps one Pauli per qubit and is meant for use while a
  circuit executes. Memory is linear in the number of qubits.
* :class:`FramesTracker` keeps one bit-vector stack per qubit part (Z and X),
  indexed by frame number, in major-qubit-minor-frame order. One frame is
  captured per potentially induced correction (see :meth:`new_frame`), and
  gates update all frames at once through whole-vector XORs and swaps, so a
  gate costs O(frame_count) bit operations on the touched qubits only.

Both trackers support the commute (gates), remove and move operations plus
measurement, which removes a qubit's stack and hands it back as an immutable
:class:`MeasuredStack`.

A tracker instance is single-writer: hand it between threads freely, but do
not mutate it concurrently. Measured stacks and JSON snapshots are plain
immutable data and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitvec import new_bits
from .pauli import GateKind, PauliEnc, apply_gate_rule


class TrackerError(Exception):
    """Raised on tracker misuse (unknown or duplicate qubits, bad moves)."""


@dataclass(frozen=True)
class MeasuredStack:
    """Snapshot of a qubit's correction stack at measurement time."""

    qubit: int
    z_bits: tuple[int, ...]
    x_bits: tuple[int, ...]


PART_Z = "z"
PART_X = "x"

# move_part maps: source part -> destination part.
MOVE_MAPS = ("zz", "zx", "xz", "xx")


def _check_qubit(store, q: int) -> None:
    if q not in store:
        raise TrackerError(f"unknown qubit {q}")


class LiveTracker:
    """Single-frame tracker: one PauliEnc per live qubit."""

    def __init__(self) -> None:
        self.paulis: dict[int, PauliEnc] = {}
        self.measured: dict[int, MeasuredStack] = {}

    def new_qubit(self, q: int) -> None:
        if q in self.paulis:
            raise TrackerError(f"duplicate qubit {q}")
        self.paulis[q] = PauliEnc(0, 0)

    def track_pauli(self, q: int, p: PauliEnc, frame: int | None = None) -> None:
        # Live mode ignores the frame selector.
        _check_qubit(self.paulis, q)
        self.paulis[q] = self.paulis[q] ^ p

    def apply_gate(self, g: GateKind, qubits: list[int]) -> None:
        if g.is_pauli:
            raise TrackerError(
                f"gate {g.value} is a frame multiplication; use track_pauli"
            )
        if len(qubits) != g.arity:
            raise TrackerError(
                f"gate {g.value} expects {g.arity} qubit(s), got {len(qubits)}"
            )
        if g.arity == 2 and qubits[0] == qubits[1]:
            raise TrackerError(f"gate {g.value} needs distinct qubits")
        for q in qubits:
            _check_qubit(self.paulis, q)
        outs = apply_gate_rule(g, [self.paulis[q] for q in qubits])
        for q, p in zip(qubits, outs):
            self.paulis[q] = p

    def remove_part(self, q: int, part: str) -> None:
        _check_qubit(self.paulis, q)
        p = self.paulis[q]
        self.paulis[q] = PauliEnc(0, p.x) if part == PART_Z else PauliEnc(p.z, 0)

    def move_part(self, src: int, dst: int, mapping: str) -> None:
        if src == dst:
            raise TrackerError("move source and destination must differ")
        _check_qubit(self.paulis, src)
        _check_qubit(self.paulis, dst)
        if mapping not in MOVE_MAPS:
            raise TrackerError(f"unknown move map {mapping!r}")
        sp, dp = self.paulis[src], self.paulis[dst]
        bit = sp.z if mapping[0] == "z" else sp.x
        if mapping[1] == "z":
            dp = PauliEnc(dp.z ^ bit, dp.x)
        else:
            dp = PauliEnc(dp.z, dp.x ^ bit)
        self.paulis[dst] = dp
        self.paulis[src] = (
            PauliEnc(0, sp.x) if mapping[0] == "z" else PauliEnc(sp.z, 0)
        )

    def measure(self, q: int) -> MeasuredStack:
        _check_qubit(self.paulis, q)
        p = self.paulis.pop(q)
        stack = MeasuredStack(q, (p.z,), (p.x,))
        self.measured[q] = stack
        return stack

    def qubits(self) -> list[int]:
        return sorted(self.paulis)


class FramesTracker:
    """Multi-frame tracker with per-qubit (Z, X) bit-vector stacks."""

    def __init__(self, backend: str = "plain") -> None:
        self.backend = backend
        self.stacks: dict[int, tuple] = {}
        self.frame_count = 0
        self.frame_origin: dict[int, int] = {}
        self.measured: dict[int, MeasuredStack] = {}
        self._origins_seen: set[int] = set()

    def new_qubit(self, q: int) -> None:
        if q in self.stacks:
            raise TrackerError(f"duplicate qubit {q}")
        self.stacks[q] = (new_bits(self.backend), new_bits(self.backend))

    def track_pauli(self, q: int, p: PauliEnc, frame: int | None = None) -> None:
        _check_qubit(self.stacks, q)
        if frame is None:
            raise TrackerError(
                "frames tracker needs an explicit frame index to track a Pauli"
            )
        if not 0 <= frame < self.frame_count:
            raise TrackerError(
                f"frame {frame} out of range (frame_count={self.frame_count})"
            )
        zvec, xvec = self.stacks[q]
        if p.z:
            zvec.flip(frame)
        if p.x:
            xvec.flip(frame)

    def new_frame(self, origin: int, corrections: dict[int, PauliEnc]) -> int:
        """Append one frame holding the given corrections; returns its index.

        `origin` is the measurement event (qubit id) that induces the
        corrections; each origin may capture at most one frame.
        """
        for q in corrections:
            _check_qubit(self.stacks, q)
        if origin in self._origins_seen:
            raise TrackerError(f"origin {origin} already captured a frame")
        frame = self.frame_count
        self.frame_count += 1
        self.frame_origin[frame] = origin
        self._origins_seen.add(origin)
        for q, p in corrections.items():
            zvec, xvec = self.stacks[q]
            if p.z:
                zvec.flip(frame)
            if p.x:
                xvec.flip(frame)
        return frame

    def apply_gate(self, g: GateKind, qubits: list[int]) -> None:
        if g.is_pauli:
            raise TrackerError(
                f"gate {g.value} is a frame multiplication; use track_pauli"
            )
        if len(qubits) != g.arity:
            raise TrackerError(
                f"gate {g.value} expects {g.arity} qubit(s), got {len(qubits)}"
            )
        if g.arity == 2 and qubits[0] == qubits[1]:
            raise TrackerError(f"gate {g.value} needs distinct qubits")
        for q in qubits:
            _check_qubit(self.stacks, q)
        if g in (GateKind.H,):
            zvec, xvec = self.stacks[qubits[0]]
            self.stacks[qubits[0]] = (xvec, zvec)
        elif g in (GateKind.S, GateKind.SDG):
            zvec, xvec = self.stacks[qubits[0]]
            zvec.xor_in(xvec)
        elif g is GateKind.CZ:
            (za, xa), (zb, xb) = self.stacks[qubits[0]], self.stacks[qubits[1]]
            za.xor_in(xb)
            zb.xor_in(xa)
        elif g is GateKind.CX:
            self._cx(qubits[0], qubits[1])
        elif g is GateKind.SWAP:
            a, b = qubits
            self._cx(a, b)
            self._cx(b, a)
            self._cx(a, b)
        else:  # pragma: no cover - enum is closed
            raise TrackerError(f"unhandled gate {g}")

    def _cx(self, c: int, t: int) -> None:
        (zc, xc), (zt, xt) = self.stacks[c], self.stacks[t]
        zc.xor_in(zt)
        xt.xor_in(xc)

    def remove_part(self, q: int, part: str) -> None:
        _check_qubit(self.stacks, q)
        zvec, xvec = self.stacks[q]
        (zvec if part == PART_Z else xvec).clear()

    def move_part(self, src: int, dst: int, mapping: str) -> None:
        if src == dst:
            raise TrackerError("move source and destination must differ")
        _check_qubit(self.stacks, src)
        _check_qubit(self.stacks, dst)
        if mapping not in MOVE_MAPS:
            raise TrackerError(f"unknown move map {mapping!r}")
        src_vec = self.stacks[src][0 if mapping[0] == "z" else 1]
        dst_vec = self.stacks[dst][0 if mapping[1] == "z" else 1]
        dst_vec.xor_in(src_vec)
        src_vec.clear()

    def measure(self, q: int) -> MeasuredStack:
        _check_qubit(self.stacks, q)
        zvec, xvec = self.stacks.pop(q)
        stack = MeasuredStack(
            q,
            tuple(zvec.as_list(self.frame_count)),
            tuple(xvec.as_list(self.frame_count)),
        )
        self.measured[q] = stack
        return stack

    def qubits(self) -> list[int]:
        return sorted(self.stacks)

    def pauli_at(self, q: int, frame: int) -> PauliEnc:
        _check_qubit(self.stacks, q)
        zvec, xvec = self.stacks[q]
        return PauliEnc(zvec.get(frame), xvec.get(frame))

    def to_json(self) -> dict:
        """Frames output: live stacks padded to frame_count, plus origins."""
        return {
            "frame_count": self.frame_count,
            "stacks": {
                str(q): {
                    "z": zvec.as_list(self.frame_count),
                    "x": xvec.as_list(self.frame_count),
                }
                for q, (zvec, xvec) in sorted(self.stacks.items())
            },
            "origins": {
                str(f): q for f, q in sorted(self.frame_origin.items())
            },
        }

    @classmethod
    def from_json(cls, data: dict, backend: str = "plain") -> "FramesTracker":
        t = cls(backend=backend)
        t.frame_count = int(data["frame_count"])
        for f_str, origin in data.get("origins", {}).items():
            f = int(f_str)
            t.frame_origin[f] = int(origin)
            t._origins_seen.add(int(origin))
        for q_str, parts in data.get("stacks", {}).items():
            q = int(q_str)
            t.new_qubit(q)
            zvec, xvec = t.stacks[q]
            for i, b in enumerate(parts["z"]):
                if b:
                    zvec.flip(i)
            for i, b in enumerate(parts["x"]):
                if b:
                    xvec.flip(i)
        return t
