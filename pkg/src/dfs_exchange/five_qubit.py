"""The [[5,1,3]] perfect code on abstract qubits: encoding, syndromes, correction."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .operators import ATOL_EXACT, SparseOperator, StateVector, pauli_string_operator

GENERATORS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
LOGICAL_X = "XXXXX"
LOGICAL_Z = "ZZZZZ"


class ValidationError(ValueError):
    pass


class InconsistentStateError(RuntimeError):
    """A syndrome outcome expected to be deterministic was not."""


def _symplectic(label: str) -> tuple[np.ndarray, np.ndarray]:
    x = np.array([p in "XY" for p in label], dtype=int)
    z = np.array([p in "ZY" for p in label], dtype=int)
    return x, z


def paulis_commute(a: str, b: str) -> bool:
    """Symplectic test: Pauli strings commute iff x_a.z_b + z_a.x_b is even."""
    xa, za = _symplectic(a)
    xb, zb = _symplectic(b)
    return int(xa @ zb + za @ xb) % 2 == 0


def single_slot_paulis(n: int = 5) -> list[str]:
    """The 3n weight-one Pauli strings, slot-major (X1, Y1, Z1, X2, ...)."""
    out = []
    for slot in range(n):
        for p in "XYZ":
            label = ["I"] * n
            label[slot] = p
            out.append("".join(label))
    return out


def syndrome_bits_to_str(bits: tuple[int, ...]) -> str:
    return "".join(str(b) for b in bits)


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    n: int
    k: int
    generators: tuple[str, ...]
    logical_x: str
    logical_z: str
    syndrome_table: dict[tuple[int, ...], str] = field(repr=False)

    def syndrome_of(self, pauli: str) -> tuple[int, ...]:
        """Bit r is 1 iff the Pauli anticommutes with generator r."""
        return tuple(0 if paulis_commute(pauli, g) else 1 for g in self.generators)

    @cached_property
    def generator_operators(self) -> tuple[SparseOperator, ...]:
        return tuple(pauli_string_operator(g) for g in self.generators)

    @cached_property
    def codewords(self) -> tuple[StateVector, StateVector]:
        """(|0_L>, |1_L>).

        |0_L> is prod_g (I+g)/2 applied to |0...0>, normalized, with the first
        largest-magnitude amplitude made real positive. |1_L> = X_L |0_L>, so the
        logical X acts exactly as the encoded bit flip.
        """
        state = StateVector.basis("0" * self.n)
        ident = SparseOperator.identity(self.n)
        for g in self.generator_operators:
            state = 0.5 * (ident + g) @ state
        state = state.normalized()
        amps = state.amplitudes
        lead = int(np.argmax(np.abs(amps) > np.abs(amps).max() - 1e-12))
        state = state * (abs(amps[lead]) / amps[lead])
        return state, pauli_string_operator(self.logical_x) @ state

    def syndrome_table_text(self) -> str:
        """16-row table: syndrome bits and the correcting Pauli string."""
        lines = ["syndrome correction"]
        for bits in sorted(self.syndrome_table):
            lines.append(f"{syndrome_bits_to_str(bits)}     {self.syndrome_table[bits]}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def five_qubit_code() -> StabilizerCode:
    """Cyclic generators XZZXI and shifts; X_L = XXXXX, Z_L = ZZZZZ."""
    probe = StabilizerCode(5, 1, GENERATORS, LOGICAL_X, LOGICAL_Z, {})
    table: dict[tuple[int, ...], str] = {probe.syndrome_of("IIIII"): "IIIII"}
    for err in single_slot_paulis(5):
        syn = probe.syndrome_of(err)
        if syn in table:
            raise RuntimeError(f"{err} shares syndrome {syn} with {table[syn]}")
        table[syn] = err
    return StabilizerCode(5, 1, GENERATORS, LOGICAL_X, LOGICAL_Z, table)


def encode(logical: StateVector, code: StabilizerCode | None = None) -> StateVector:
    """alpha|0> + beta|1>  ->  alpha|0_L> + beta|1_L>."""
    code = code or five_qubit_code()
    if logical.num_qubits != 1:
        raise ValidationError(f"expected a 1-qubit state, got {logical.num_qubits} qubits")
    if abs(logical.norm() - 1.0) > ATOL_EXACT:
        raise ValidationError(f"logical state is not normalized (norm {logical.norm():.6g})")
    alpha, beta = logical.amplitudes
    zero_l, one_l = code.codewords
    return alpha * zero_l + beta * one_l


def measure_syndrome(
    state: StateVector,
    rng: np.random.Generator | None = None,
    code: StabilizerCode | None = None,
    deterministic: bool = False,
    tol: float = ATOL_EXACT,
) -> tuple[tuple[int, ...], StateVector]:
    """Projectively measure every generator in order.

    Returns the syndrome bits (0 for eigenvalue +1) and the renormalized
    post-measurement state. One uniform draw is consumed per generator when
    ``rng`` is given, so replay with the same seed is exact. With
    ``deterministic=True`` (or no ``rng``) each outcome must have probability
    1 within ``tol``; otherwise :class:`InconsistentStateError` is raised.
    """
    code = code or five_qubit_code()
    if state.num_qubits != code.n:
        raise ValidationError(f"expected a {code.n}-qubit state")
    ident = SparseOperator.identity(code.n)
    bits = []
    for g in code.generator_operators:
        plus = 0.5 * (ident + g) @ state
        p_plus = min(1.0, plus.norm() ** 2 / state.norm() ** 2)
        draw = rng.random() if rng is not None else None
        if deterministic or rng is None:
            if p_plus > 1 - tol:
                outcome = 0
            elif p_plus < tol:
                outcome = 1
            else:
                raise InconsistentStateError(f"generator outcome is random (P(+1) = {p_plus:.6g})")
        else:
            outcome = 0 if draw < p_plus else 1
        projected = plus if outcome == 0 else state - plus
        if projected.norm() == 0.0:
            raise InconsistentStateError("measurement projected onto the zero vector")
        state = projected.normalized()
        bits.append(outcome)
    return tuple(bits), state


def correct(state: StateVector, syndrome: tuple[int, ...], code: StabilizerCode | None = None) -> StateVector:
    code = code or five_qubit_code()
    fix = code.syndrome_table[tuple(syndrome)]
    if fix == "I" * code.n:
        return state
    return pauli_string_operator(fix) @ state
