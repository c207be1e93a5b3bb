"""Line-oriented circuit format and instruction execution.

One instruction per line; blank lines and ``#`` comments are skipped:

    q <id>                   declare a qubit
    h|s|sdg <id>             single-qubit Clifford
    cz <a> <b>               controlled-Z
    cx <c> <t>               controlled-X (control first)
    swap <a> <b>             swap
    x|y|z <id> [frame]       track a Pauli (frame index needed in frames mode)
    frame <origin> (<id>:<P>)*   capture a frame of corrections, P in {X,Y,Z}
    rmx|rmz <id>             remove the X or Z part
    mv<zz|zx|xz|xx> <src> <dst>  move a part between qubits
    measure <id>             measure a qubit out of the tracker
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pauli import GateKind, PauliEnc
from .tracker import MOVE_MAPS, PART_X, PART_Z, TrackerError


class CircuitError(Exception):
    """Parse or execution error, carrying the 1-based source line."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass
class Instruction:
    op: str
    qubits: tuple[int, ...] = ()
    pauli: PauliEnc | None = None
    frame: int | None = None
    corrections: dict[int, PauliEnc] = field(default_factory=dict)
    line: int = 0


_GATES = {"h", "s", "sdg", "cz", "cx", "swap"}
_PAULIS = {"x", "y", "z"}
_MOVES = {f"mv{m}" for m in MOVE_MAPS}


def _int(tok: str, line: int, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise CircuitError(line, f"{what} must be an integer, got {tok!r}") from None
    if value < 0:
        raise CircuitError(line, f"{what} must be non-negative, got {value}")
    return value


def parse_circuit(text: str) -> list[Instruction]:
    """Parse the text format into instructions; raises CircuitError."""
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        tokens = stripped.split()
        op, args = tokens[0].lower(), tokens[1:]
        if op == "q" or op == "measure":
            if len(args) != 1:
                raise CircuitError(lineno, f"{op} takes one qubit id")
            instructions.append(
                Instruction(op, (_int(args[0], lineno, "qubit"),), line=lineno)
            )
        elif op in _GATES:
            kind = GateKind(op)
            if len(args) != kind.arity:
                raise CircuitError(lineno, f"{op} takes {kind.arity} qubit id(s)")
            qubits = tuple(_int(a, lineno, "qubit") for a in args)
            instructions.append(Instruction(op, qubits, line=lineno))
        elif op in _PAULIS:
            if len(args) not in (1, 2):
                raise CircuitError(lineno, f"{op} takes a qubit id and optional frame")
            frame = _int(args[1], lineno, "frame") if len(args) == 2 else None
            instructions.append(
                Instruction(
                    "pauli",
                    (_int(args[0], lineno, "qubit"),),
                    pauli=PauliEnc.from_name(op),
                    frame=frame,
                    line=lineno,
                )
            )
        elif op == "frame":
            if not args:
                raise CircuitError(lineno, "frame needs an origin qubit")
            origin = _int(args[0], lineno, "origin")
            corrections: dict[int, PauliEnc] = {}
            for tok in args[1:]:
                if ":" not in tok:
                    raise CircuitError(lineno, f"correction {tok!r} must be <id>:<P>")
                q_str, p_str = tok.split(":", 1)
                q = _int(q_str, lineno, "qubit")
                try:
                    p = PauliEnc.from_name(p_str)
                except ValueError:
                    raise CircuitError(lineno, f"unknown Pauli {p_str!r}") from None
                corrections[q] = corrections.get(q, PauliEnc(0, 0)) ^ p
            instructions.append(
                Instruction("frame", (origin,), corrections=corrections, line=lineno)
            )
        elif op in ("rmx", "rmz"):
            if len(args) != 1:
                raise CircuitError(lineno, f"{op} takes one qubit id")
            instructions.append(
                Instruction(op, (_int(args[0], lineno, "qubit"),), line=lineno)
            )
        elif op in _MOVES:
            if len(args) != 2:
                raise CircuitError(lineno, f"{op} takes source and destination")
            qubits = tuple(_int(a, lineno, "qubit") for a in args)
            instructions.append(Instruction(op, qubits, line=lineno))
        else:
            raise CircuitError(lineno, f"unknown instruction {op!r}")
    return instructions


def run_circuit(tracker, instructions: list[Instruction]):
    """Fold the instructions into the tracker in order.

    The first failing instruction aborts with a CircuitError carrying its
    source line. Returns the tracker.
    """
    for instr in instructions:
        try:
            _apply(tracker, instr)
        except TrackerError as exc:
            raise CircuitError(instr.line, str(exc)) from exc
    return tracker


def _apply(tracker, instr: Instruction) -> None:
    op = instr.op
    if op == "q":
        tracker.new_qubit(instr.qubits[0])
    elif op in _GATES:
        tracker.apply_gate(GateKind(op), list(instr.qubits))
    elif op == "pauli":
        tracker.track_pauli(instr.qubits[0], instr.pauli, frame=instr.frame)
    elif op == "frame":
        if not hasattr(tracker, "new_frame"):
            raise TrackerError("live tracker does not capture frames")
        tracker.new_frame(instr.qubits[0], instr.corrections)
    elif op == "rmx":
        tracker.remove_part(instr.qubits[0], PART_X)
    elif op == "rmz":
        tracker.remove_part(instr.qubits[0], PART_Z)
    elif op.startswith("mv"):
        tracker.move_part(instr.qubits[0], instr.qubits[1], op[2:])
    elif op == "measure":
        tracker.measure(instr.qubits[0])
    else:  # pragma: no cover - parser is exhaustive
        raise TrackerError(f"unknown instruction {op!r}")
