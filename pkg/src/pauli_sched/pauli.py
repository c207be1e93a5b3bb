"""Projective single-qubit Pauli encoding and Clifford conjugation rules.

A Pauli operator on one qubit is encoded, up to phase, by a pair of bits
(z, x) standing for Z^z X^x:

    (0, 0) = I,  (1, 0) = Z,  (0, 1) = X,  (1, 1) = Y  (ZX up to phase).

Multiplication is componentwise XOR, every element is its own inverse, and
the group is abelian. Conjugating by a Clifford gate acts linearly on these
bit pairs; the closed-form rules below are the whole gate table. Signs and
phases are dropped throughout: the encoding has no sign bit.
"""

from __future__ import annotations

import enum
from typing import NamedTuple


class PauliEnc(NamedTuple):
    """One projective Pauli as a (z, x) bit pair."""

    z: int
    x: int

    def __xor__(self, other: "PauliEnc") -> "PauliEnc":
        return PauliEnc(self.z ^ other.z, self.x ^ other.x)

    @property
    def is_identity(self) -> bool:
        return self.z == 0 and self.x == 0

    @property
    def name(self) -> str:
        return _NAMES[(self.z, self.x)]

    @classmethod
    def from_name(cls, name: str) -> "PauliEnc":
        try:
            return _BY_NAME[name.upper()]
        except KeyError:
            raise ValueError(f"unknown Pauli name: {name!r}") from None


I = PauliEnc(0, 0)
Z = PauliEnc(1, 0)
X = PauliEnc(0, 1)
Y = PauliEnc(1, 1)

_NAMES = {(0, 0): "I", (1, 0): "Z", (0, 1): "X", (1, 1): "Y"}
_BY_NAME = {"I": I, "Z": Z, "X": X, "Y": Y}


class GateKind(enum.Enum):
    """Supported gates.

    H, S and CZ generate the Clifford group; SDG, CX and SWAP are the derived
    extras we keep on the oracle-verified surface. X, Y, Z are not
    conjugations at all: they multiply into the tracked frame and are handled
    by the trackers, never by :func:`apply_gate_rule`.
    """

    H = "h"
    S = "s"
    SDG = "sdg"
    CZ = "cz"
    CX = "cx"
    SWAP = "swap"
    X = "x"
    Y = "y"
    Z = "z"

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CZ, GateKind.CX, GateKind.SWAP) else 1

    @property
    def is_pauli(self) -> bool:
        return self in (GateKind.X, GateKind.Y, GateKind.Z)


def conjugate_h(p: PauliEnc) -> PauliEnc:
    """H swaps the Z and X components."""
    return PauliEnc(p.x, p.z)


def conjugate_s(p: PauliEnc) -> PauliEnc:
    """S (and projectively S†) turns X into ZX: z picks up x."""
    return PauliEnc(p.z ^ p.x, p.x)


def conjugate_cz(pa: PauliEnc, pb: PauliEnc) -> tuple[PauliEnc, PauliEnc]:
    """CZ copies each side's X component onto the other side's Z component."""
    return PauliEnc(pa.z ^ pb.x, pa.x), PauliEnc(pb.z ^ pa.x, pb.x)


def conjugate_cx(pc: PauliEnc, pt: PauliEnc) -> tuple[PauliEnc, PauliEnc]:
    """CX copies X from control to target and Z from target to control."""
    return PauliEnc(pc.z ^ pt.z, pc.x), PauliEnc(pt.z, pt.x ^ pc.x)


def conjugate_swap(pa: PauliEnc, pb: PauliEnc) -> tuple[PauliEnc, PauliEnc]:
    # SWAP as three CX, per the derived-gate convention.
    pa, pb = conjugate_cx(pa, pb)
    pb, pa = conjugate_cx(pb, pa)
    pa, pb = conjugate_cx(pa, pb)
    return pa, pb


_RULES = {
    GateKind.H: conjugate_h,
    GateKind.S: conjugate_s,
    GateKind.SDG: conjugate_s,
    GateKind.CZ: conjugate_cz,
    GateKind.CX: conjugate_cx,
    GateKind.SWAP: conjugate_swap,
}


def apply_gate_rule(g: GateKind, inputs: list[PauliEnc]) -> list[PauliEnc]:
    """Conjugate the given per-qubit encodings by gate `g`.

    Raises ValueError when the input length does not match the gate arity or
    when `g` is a Pauli gate (those multiply into the frame and belong to the
    tracker, not to conjugation).
    """
    if g.is_pauli:
        raise ValueError(
            f"gate {g.value} is a frame multiplication, not a conjugation"
        )
    if len(inputs) != g.arity:
        raise ValueError(
            f"gate {g.value} expects {g.arity} operand(s), got {len(inputs)}"
        )
    rule = _RULES[g]
    if g.arity == 1:
        return [rule(inputs[0])]
    return list(rule(inputs[0], inputs[1]))
