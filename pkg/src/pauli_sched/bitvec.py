"""Bit-vector storage backends for frame stacks.

The multi-frame tracker stores, per qubit, one bit vector for the Z
components and one for the X components, indexed by frame number. Two
interchangeable backends are provided and selected by the caller:

* ``"plain"`` (:class:`ListBits`): a growable list of 0/1 ints. Cheap random
  access, one Python op per frame for vector updates.
* ``"packed"`` (:class:`IntBits`): a single arbitrary-precision integer used
  as a bit set, i.e. machine-word packed. Vector XORs run over whole words.

Vectors have no fixed length; bits past the written range read as zero, which
implements the zero-padding semantics for frames created late or qubits
created early. Mutating calls bump ``mutations`` so tests can assert which
stacks a gate touched.
"""

from __future__ import annotations


class ListBits:
    """Plain bit vector backed by a list of 0/1 ints."""

    __slots__ = ("bits", "mutations")

    def __init__(self) -> None:
        self.bits: list[int] = []
        self.mutations = 0

    def get(self, i: int) -> int:
        return self.bits[i] if i < len(self.bits) else 0

    def flip(self, i: int) -> None:
        if i >= len(self.bits):
            self.bits.extend([0] * (i + 1 - len(self.bits)))
        self.bits[i] ^= 1
        self.mutations += 1

    def xor_in(self, other: "ListBits") -> None:
        if len(other.bits) > len(self.bits):
            self.bits.extend([0] * (len(other.bits) - len(self.bits)))
        for i, b in enumerate(other.bits):
            self.bits[i] ^= b
        self.mutations += 1

    def clear(self) -> None:
        self.bits = []
        self.mutations += 1

    def any(self) -> bool:
        return any(self.bits)

    def as_list(self, length: int) -> list[int]:
        out = self.bits[:length]
        out.extend([0] * (length - len(out)))
        return out

    def copy(self) -> "ListBits":
        new = ListBits()
        new.bits = list(self.bits)
        return new


class IntBits:
    """Packed bit vector backed by one big integer."""

    __slots__ = ("value", "mutations")

    def __init__(self) -> None:
        self.value = 0
        self.mutations = 0

    def get(self, i: int) -> int:
        return (self.value >> i) & 1

    def flip(self, i: int) -> None:
        self.value ^= 1 << i
        self.mutations += 1

    def xor_in(self, other: "IntBits") -> None:
        self.value ^= other.value
        self.mutations += 1

    def clear(self) -> None:
        self.value = 0
        self.mutations += 1

    def any(self) -> bool:
        return self.value != 0

    def as_list(self, length: int) -> list[int]:
        return [(self.value >> i) & 1 for i in range(length)]

    def copy(self) -> "IntBits":
        new = IntBits()
        new.value = self.value
        return new


BACKENDS = {"plain": ListBits, "packed": IntBits}


def new_bits(backend: str):
    try:
        return BACKENDS[backend]()
    except KeyError:
        raise ValueError(
            f"unknown storage backend {backend!r}; choose from {sorted(BACKENDS)}"
        ) from None
