"""Singlet bases, the DFS condition, leakage checks and encoded operators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .operators import (
    ATOL_CHAINED,
    ATOL_EXACT,
    AXES,
    DimensionMismatchError,
    ExchangeModel,
    SparseOperator,
    StateVector,
    exchange_hamiltonian,
    total_spin_operator,
    total_spin_squared,
)

KERNEL_THRESHOLD = 1e-8

# encoded Paulis in the ordered basis (|0~>, |1~>)
PAULI_2x2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class NoSingletError(ValueError):
    """Odd registers have no total-spin-zero states."""


class UnsupportedDimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DFSBasis:
    num_qubits: int
    vectors: tuple[StateVector, ...]

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> np.ndarray:
        """2**K x d array whose columns are the basis vectors."""
        return np.column_stack([v.amplitudes for v in self.vectors])

    def projector(self) -> np.ndarray:
        v = self.matrix
        return v @ v.conj().T

    def to_text(self) -> str:
        """JSON document listing nonzero amplitudes with 17 significant digits."""
        width = self.num_qubits
        vec_blocks = []
        for v in self.vectors:
            triples = [
                f'["{idx:0{width}b}", {a.real:.16e}, {a.imag:.16e}]'
                for idx, a in enumerate(v.amplitudes)
                if a != 0
            ]
            vec_blocks.append("    [\n      " + ",\n      ".join(triples) + "\n    ]")
        return (
            "{\n"
            f'  "num_qubits": {self.num_qubits},\n'
            f'  "dimension": {self.dimension},\n'
            '  "vectors": [\n' + ",\n".join(vec_blocks) + "\n  ]\n}\n"
        )

    @classmethod
    def from_text(cls, text: str) -> DFSBasis:
        data = json.loads(text)
        k = int(data["num_qubits"])
        vectors = []
        for triples in data["vectors"]:
            amps = np.zeros(2**k, dtype=complex)
            for bits, re, im in triples:
                amps[int(bits, 2)] = complex(re, im)
            vectors.append(StateVector(k, amps))
        if len(vectors) != int(data["dimension"]):
            raise ValueError("dimension field disagrees with vector count")
        return cls(k, tuple(vectors))


@dataclass(frozen=True, eq=False)
class EncodedOperator:
    """d x d matrix of an operator in the ordering of a DFSBasis."""

    matrix: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: EncodedOperator) -> EncodedOperator:
        return EncodedOperator(self.matrix @ other.matrix)

    def max_abs_diff(self, other) -> float:
        target = other.matrix if isinstance(other, EncodedOperator) else np.asarray(other)
        return float(np.max(np.abs(self.matrix - target)))

    def is_hermitian(self, atol: float = ATOL_CHAINED) -> bool:
        return self.max_abs_diff(self.matrix.conj().T) <= atol

    def is_unitary(self, atol: float = ATOL_CHAINED) -> bool:
        eye = np.eye(self.dimension)
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - eye))) <= atol


def four_qubit_logical_states() -> tuple[StateVector, StateVector]:
    """|0~> = (|a> - |b>)/2 and |1~> = (2|c> - |a> - |b>)/(2 sqrt 3)."""
    a = StateVector.basis("0110") + StateVector.basis("1001")
    b = StateVector.basis("1010") + StateVector.basis("0101")
    c = StateVector.basis("0011") + StateVector.basis("1100")
    zero = 0.5 * (a - b)
    one = (1 / (2 * np.sqrt(3))) * (2 * c - a - b)
    return zero, one


def _singlet_kernel(num_qubits: int) -> np.ndarray:
    s2 = total_spin_squared(num_qubits).to_dense()
    # S^2 is real symmetric in the computational basis
    evals, evecs = np.linalg.eigh(s2.real)
    return evecs[:, evals < KERNEL_THRESHOLD]


def _canonical_kernel_basis(kernel: np.ndarray) -> np.ndarray:
    """Basis of span(kernel) that does not depend on how eigh rotated it.

    Columns of the kernel projector are taken in increasing computational
    index, keeping those with a substantial component outside the span of
    the ones already kept; the kept columns are then orthonormalized and each
    vector's first nonzero amplitude is made positive.
    """
    proj = kernel @ kernel.T
    d = kernel.shape[1]
    chosen: list[int] = []
    q = np.zeros((proj.shape[0], 0))
    for k in range(proj.shape[0]):
        col = proj[:, k]
        col_norm = np.linalg.norm(col)
        if col_norm < 1e-6:
            continue
        resid = col - q @ (q.T @ col)
        if np.linalg.norm(resid) > 0.1 * col_norm:
            chosen.append(k)
            q = np.linalg.qr(proj[:, chosen])[0]
            if len(chosen) == d:
                break
    basis = np.linalg.qr(proj[:, chosen])[0]
    # re-project to wash out rounding picked up by the QR step
    basis = kernel @ (kernel.T @ basis)
    basis = np.linalg.qr(basis)[0]
    for col in range(basis.shape[1]):
        lead = np.flatnonzero(np.abs(basis[:, col]) > 1e-10)[0]
        if basis[lead, col] < 0:
            basis[:, col] *= -1
    return basis


@lru_cache(maxsize=None)
def dfs_basis(num_qubits: int) -> DFSBasis:
    """Orthonormal basis of the singlet subspace (kernel of S^2).

    For K=4 the basis is the closed-form pair (|0~>, |1~>), after checking that
    it spans the computed kernel.
    """
    if num_qubits < 2 or num_qubits % 2:
        raise NoSingletError(f"no singlet states exist for {num_qubits} qubits")
    kernel = _singlet_kernel(num_qubits)
    if num_qubits == 4:
        closed = np.column_stack([v.amplitudes for v in four_qubit_logical_states()])
        if kernel.shape[1] != 2 or np.max(np.abs(kernel @ kernel.T - closed @ closed.conj().T)) > ATOL_CHAINED:
            raise RuntimeError("closed-form K=4 singlets do not span the S^2 kernel")
        return DFSBasis(4, four_qubit_logical_states())
    basis = _canonical_kernel_basis(kernel)
    return DFSBasis(num_qubits, tuple(StateVector(num_qubits, basis[:, c]) for c in range(basis.shape[1])))


@dataclass(frozen=True)
class DFSConditionReport:
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance


def check_dfs_condition(basis: DFSBasis, tol: float = ATOL_EXACT) -> DFSConditionReport:
    """max over axes and basis vectors of ||S_axis v||."""
    worst = 0.0
    for axis in AXES:
        s = total_spin_operator(basis.num_qubits, axis)
        for v in basis.vectors:
            worst = max(worst, (s @ v).norm())
    return DFSConditionReport(worst, tol)


def _check_dims(op: SparseOperator, basis: DFSBasis) -> None:
    if op.num_qubits != basis.num_qubits:
        raise DimensionMismatchError(
            f"operator on {op.num_qubits} qubits, basis on {basis.num_qubits}"
        )


def project_operator(op: SparseOperator, basis: DFSBasis) -> EncodedOperator:
    """M[r, c] = <v_r| op |v_c>."""
    _check_dims(op, basis)
    v = basis.matrix
    return EncodedOperator(v.conj().T @ (op.matrix @ v))


@dataclass(frozen=True)
class InvarianceReport:
    leakage: float
    tolerance: float

    @property
    def invariant(self) -> bool:
        return self.leakage < self.tolerance


def check_invariance(op: SparseOperator, basis: DFSBasis, tol: float = ATOL_EXACT) -> InvarianceReport:
    """Spectral norm of (I - P) op P, P the projector onto span(basis)."""
    _check_dims(op, basis)
    v = basis.matrix
    image = op.matrix @ v
    outside = image - v @ (v.conj().T @ image)
    # ||(I-P) op P|| = ||(I-P) op V|| because V is an isometry onto range(P)
    leakage = float(np.linalg.norm(outside, 2)) if outside.size else 0.0
    return InvarianceReport(leakage, tol)


def encoded_pauli_decomposition(enc: EncodedOperator) -> dict[str, complex]:
    """Coefficients c_P with enc = sum_P c_P P over encoded {I, X, Y, Z}."""
    if enc.dimension != 2:
        raise UnsupportedDimensionError(
            f"encoded Pauli decomposition needs a 2-dimensional DFS, got d={enc.dimension}"
        )
    coeffs = {p: complex(np.trace(m.conj().T @ enc.matrix) / 2) for p, m in PAULI_2x2.items()}
    rebuilt = sum(c * PAULI_2x2[p] for p, c in coeffs.items())
    assert np.max(np.abs(rebuilt - enc.matrix)) < ATOL_EXACT
    return coeffs


def reflection_rotation(theta: float) -> np.ndarray:
    """R(theta) Z: reflect about the x axis, then rotate counter-clockwise by theta."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]]) @ PAULI_2x2["Z"].real


def expected_four_qubit_exchange() -> dict[tuple[int, int], np.ndarray]:
    """Closed-form encoded action of the six K=4 exchange operators."""
    minus_z = -PAULI_2x2["Z"].real
    r_plus = reflection_rotation(np.pi / 3)
    r_minus = reflection_rotation(-np.pi / 3)
    return {
        (1, 2): minus_z,
        (3, 4): minus_z,
        (1, 3): r_plus,
        (2, 4): r_plus,
        (1, 4): r_minus,
        (2, 3): r_minus,
    }


@dataclass(frozen=True)
class ConstantJReport:
    num_qubits: int
    coupling_total: float
    pair_coupling: float
    identity_residual: float
    nu_value: float
    eigen_residual: float
    tolerance: float

    @property
    def phase_only(self) -> bool:
        return self.identity_residual < self.tolerance and self.eigen_residual < self.tolerance

    def as_dict(self) -> dict:
        return {
            "K": self.num_qubits,
            "J": self.coupling_total,
            "J_over_K": self.pair_coupling,
            "identity_residual": self.identity_residual,
            "nu_value": self.nu_value,
            "eigen_residual": self.eigen_residual,
            "phase_only": self.phase_only,
        }


def constant_j_phase(num_qubits: int, coupling: float) -> float:
    """nu = (J/K)(K^2 - 4K)/8, the eigenvalue of H_ex on every singlet."""
    k = num_qubits
    return (coupling / k) * (k * k - 4 * k) / 8


def verify_constant_j(num_qubits: int, coupling: float = 1.0, tol: float = ATOL_CHAINED) -> ConstantJReport:
    """Check that uniform exchange (J_ij = J/K) only multiplies singlets by a phase.

    Two residuals are reported: the entrywise gap between H_ex and
    (J/8K)[(K^2-4K) I + S^2], and max_v ||H_ex v - nu v|| over the DFS basis.
    """
    k = num_qubits
    if k < 2 or k % 2:
        raise NoSingletError(f"no singlet states exist for {k} qubits")
    pair_coupling = coupling / k
    h = exchange_hamiltonian(ExchangeModel.uniform(k, pair_coupling))
    closed = (coupling / (8 * k)) * (
        (k * k - 4 * k) * SparseOperator.identity(k) + total_spin_squared(k)
    )
    nu = constant_j_phase(k, coupling)
    eigen_residual = max(((h @ v) - nu * v).norm() for v in dfs_basis(k).vectors)
    return ConstantJReport(
        num_qubits=k,
        coupling_total=float(coupling),
        pair_coupling=pair_coupling,
        identity_residual=h.max_abs_diff(closed),
        nu_value=nu,
        eigen_residual=eigen_residual,
        tolerance=tol,
    )


def all_pairs(num_qubits: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, num_qubits + 1), 2))
