"""Exact counting of singlet (decoherence-free) dimensions.

Everything here is big-integer arithmetic; floats appear only in
:func:`encoded_qubit_count`, after the exact count is known.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Spin = Union[int, float, str, Fraction]


class DomainError(ValueError):
    """Raised when a spin quantum number is incompatible with the register size."""


@dataclass(frozen=True)
class YoungDiagram:
    row_lengths: tuple[int, ...]

    def __post_init__(self) -> None:
        rows = tuple(int(r) for r in self.row_lengths)
        if not rows or any(r <= 0 for r in rows):
            raise ValueError("row lengths must be positive")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"row lengths must be non-increasing, got {rows}")
        object.__setattr__(self, "row_lengths", rows)

    @classmethod
    def rectangle(cls, columns: int, rows: int) -> YoungDiagram:
        """Rectangular diagram with ``columns`` boxes in each of ``rows`` rows."""
        return cls((columns,) * rows)

    @classmethod
    def singlet_shape(cls, num_qubits: int) -> YoungDiagram:
        """Two rows of K/2 boxes: the shape carrying the su(2) singlets of K qubits."""
        if num_qubits < 2 or num_qubits % 2:
            raise DomainError(f"singlet shape needs an even register size, got {num_qubits}")
        return cls.rectangle(num_qubits // 2, 2)

    @property
    def size(self) -> int:
        return sum(self.row_lengths)

    def column_lengths(self) -> tuple[int, ...]:
        return tuple(sum(1 for r in self.row_lengths if r > c) for c in range(self.row_lengths[0]))


def hook_lengths(diagram: YoungDiagram) -> list[list[int]]:
    """Per-box hook length: boxes to the right + boxes below + 1."""
    cols = diagram.column_lengths()
    return [
        [(length - c - 1) + (cols[c] - r - 1) + 1 for c in range(length)]
        for r, length in enumerate(diagram.row_lengths)
    ]


def standard_tableaux_count(diagram: YoungDiagram) -> int:
    """Number of standard Young tableaux, n! / prod(hooks)."""
    product = math.prod(h for row in hook_lengths(diagram) for h in row)
    count, remainder = divmod(math.factorial(diagram.size), product)
    assert remainder == 0
    return count


def _twice_spin(num_qubits: int, spin: Spin) -> int:
    s = Fraction(spin)
    two_s = 2 * s
    if two_s.denominator != 1:
        raise DomainError(f"spin {spin} is not a multiple of 1/2")
    two_s = int(two_s)
    if two_s < 0 or two_s > num_qubits:
        raise DomainError(f"spin {spin} outside 0..{num_qubits}/2")
    if (num_qubits - two_s) % 2:
        raise DomainError(f"spin {spin} has the wrong parity for {num_qubits} qubits")
    return two_s


def dicke_multiplicity(num_qubits: int, spin: Spin) -> int:
    """How many spin-S multiplets appear in K spin-1/2 particles.

    K! (2S+1) / ((K/2 + S + 1)! (K/2 - S)!), exact. ``spin`` may be an int,
    a half-integer float, a ``Fraction`` or a string such as ``"3/2"``.
    """
    if num_qubits < 1:
        raise DomainError("register size must be positive")
    two_s = _twice_spin(num_qubits, spin)
    upper = (num_qubits + two_s) // 2 + 1
    lower = (num_qubits - two_s) // 2
    count, remainder = divmod(
        math.factorial(num_qubits) * (two_s + 1), math.factorial(upper) * math.factorial(lower)
    )
    assert remainder == 0
    return count


def singlet_multiplicity(num_qubits: int) -> int:
    """K! / ((K/2+1)! (K/2)!), the Catalan number C_{K/2}."""
    if num_qubits < 2 or num_qubits % 2:
        raise DomainError(f"singlets need an even register size, got {num_qubits}")
    half = num_qubits // 2
    return math.factorial(num_qubits) // (math.factorial(half + 1) * math.factorial(half))


def encoded_qubit_count(num_qubits: int) -> float:
    """log2 of the singlet count; approaches K - 1.5 log2 K for large K."""
    return math.log2(singlet_multiplicity(num_qubits))


@dataclass(frozen=True)
class MultiplicityTable:
    num_qubits: int
    entries: dict[Fraction, int]

    @classmethod
    def build(cls, num_qubits: int) -> MultiplicityTable:
        spins = [Fraction(two_s, 2) for two_s in range(num_qubits % 2, num_qubits + 1, 2)]
        return cls(num_qubits, {s: dicke_multiplicity(num_qubits, s) for s in spins})

    def state_count(self) -> int:
        """sum_S multiplicity(S) * (2S+1); equals 2**K for a complete table."""
        return sum(m * int(2 * s + 1) for s, m in self.entries.items())

    def is_complete(self) -> bool:
        return self.state_count() == 2**self.num_qubits

    def to_json(self) -> str:
        # spins as exact strings ("3/2"), multiplicities as JSON integers
        rows = [{"S": str(s), "multiplicity": m} for s, m in sorted(self.entries.items())]
        return json.dumps({"num_qubits": self.num_qubits, "multiplicities": rows}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> MultiplicityTable:
        data = json.loads(text)
        entries = {Fraction(r["S"]): int(r["multiplicity"]) for r in data["multiplicities"]}
        return cls(int(data["num_qubits"]), entries)
