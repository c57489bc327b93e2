"""Sparse operators and statevectors on K-qubit registers.

Conventions used throughout the package:

* Qubits are numbered 1..K. Basis index ``i`` encodes ``|e_1 ... e_K>`` with
  qubit 1 the most significant bit, so ``|0110>`` is index 6.
* Pauli matrices are unnormalized (eigenvalues +-1). Total spin operators are
  plain sums of Paulis, so ``[S_x, S_y] = 2i S_z`` and the K=1 value of
  ``S^2`` is ``3 I``.
* hbar = 1. An exchange error of strength ``J_ij`` acting for time ``t`` is the
  unitary ``exp(-i theta E_ij)`` with ``theta = J_ij * t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from pathlib import Path
from typing import Union

import numpy as np
import scipy.sparse as sp

ATOL_EXACT = 1e-12
ATOL_CHAINED = 1e-10

PAULI_LABELS = ("I", "X", "Y", "Z")
AXES = ("x", "y", "z")

Scalar = Union[int, float, complex]


class InvalidPairError(ValueError):
    """Raised when an exchange pair does not name two distinct qubits."""


class DimensionMismatchError(ValueError):
    pass


def _canonical(matrix: sp.spmatrix) -> sp.csr_matrix:
    m = sp.csr_matrix(matrix, dtype=np.complex128)
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


def _bit_position(site: int, num_qubits: int) -> int:
    # qubit 1 is the most significant bit
    return num_qubits - site


def _check_site(site: int, num_qubits: int) -> None:
    if not 1 <= site <= num_qubits:
        raise IndexError(f"qubit {site} out of range 1..{num_qubits}")


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Complex sparse matrix acting on a 2**num_qubits dimensional register.

    The matrix is stored in canonical CSR form (sorted indices, no explicit
    zeros), so two operators with the same entries have identical storage.
    """

    num_qubits: int
    matrix: sp.csr_matrix = field(repr=False)

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be positive")
        dim = 2**self.num_qubits
        if self.matrix.shape != (dim, dim):
            raise DimensionMismatchError(
                f"matrix shape {self.matrix.shape} does not match {self.num_qubits} qubits"
            )
        object.__setattr__(self, "matrix", _canonical(self.matrix))

    @classmethod
    def from_entries(cls, num_qubits: int, entries: dict[tuple[int, int], complex]) -> SparseOperator:
        dim = 2**num_qubits
        if entries:
            rows, cols = zip(*entries.keys())
            if max(rows) >= dim or max(cols) >= dim or min(rows) < 0 or min(cols) < 0:
                raise IndexError("entry index outside register dimension")
            data = list(entries.values())
        else:
            rows, cols, data = (), (), ()
        return cls(num_qubits, sp.coo_matrix((data, (rows, cols)), shape=(dim, dim)))

    @classmethod
    def identity(cls, num_qubits: int) -> SparseOperator:
        return cls(num_qubits, sp.identity(2**num_qubits, dtype=np.complex128, format="csr"))

    @classmethod
    def zero(cls, num_qubits: int) -> SparseOperator:
        dim = 2**num_qubits
        return cls(num_qubits, sp.csr_matrix((dim, dim), dtype=np.complex128))

    @property
    def dimension(self) -> int:
        return 2**self.num_qubits

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    @property
    def entries(self) -> dict[tuple[int, int], complex]:
        coo = self.matrix.tocoo()
        return {(int(r), int(c)): complex(v) for r, c, v in zip(coo.row, coo.col, coo.data)}

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def adjoint(self) -> SparseOperator:
        return SparseOperator(self.num_qubits, self.matrix.conj().T)

    def _check_same(self, other: SparseOperator) -> None:
        if not isinstance(other, SparseOperator):
            raise TypeError(f"expected SparseOperator, got {type(other).__name__}")
        if other.num_qubits != self.num_qubits:
            raise DimensionMismatchError(
                f"operators act on {self.num_qubits} and {other.num_qubits} qubits"
            )

    def __add__(self, other: SparseOperator) -> SparseOperator:
        self._check_same(other)
        return SparseOperator(self.num_qubits, self.matrix + other.matrix)

    def __sub__(self, other: SparseOperator) -> SparseOperator:
        self._check_same(other)
        return SparseOperator(self.num_qubits, self.matrix - other.matrix)

    def __neg__(self) -> SparseOperator:
        return SparseOperator(self.num_qubits, -self.matrix)

    def __mul__(self, scalar: Scalar) -> SparseOperator:
        if not np.isscalar(scalar):
            return NotImplemented
        return SparseOperator(self.num_qubits, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            self._check_same(other)
            return SparseOperator(self.num_qubits, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            return apply(self, other)
        return NotImplemented

    def max_abs(self) -> float:
        """Largest entry magnitude (0.0 for the zero operator)."""
        return float(np.abs(self.matrix.data).max()) if self.matrix.nnz else 0.0

    def max_abs_diff(self, other: SparseOperator) -> float:
        return (self - other).max_abs()

    def allclose(self, other: SparseOperator, atol: float = ATOL_EXACT) -> bool:
        return self.max_abs_diff(other) <= atol

    def is_hermitian(self, atol: float = ATOL_EXACT) -> bool:
        return self.max_abs_diff(self.adjoint()) <= atol

    def is_unitary(self, atol: float = ATOL_EXACT) -> bool:
        return (self.adjoint() @ self).allclose(SparseOperator.identity(self.num_qubits), atol)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Dense complex amplitudes over K qubits (qubit 1 = most significant bit).

    The amplitude array is made read-only on construction.
    """

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 2**self.num_qubits:
            raise DimensionMismatchError(
                f"{amps.size} amplitudes do not match {self.num_qubits} qubits"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = True) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        num_qubits = int(round(np.log2(amps.size)))
        if amps.size < 2 or 2**num_qubits != amps.size:
            raise DimensionMismatchError(f"length {amps.size} is not a power of two >= 2")
        state = cls(num_qubits, amps)
        return state.normalized() if normalize else state

    @classmethod
    def basis(cls, bits: str) -> StateVector:
        """Computational basis state from a bitstring such as ``"0110"``."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"invalid bitstring {bits!r}")
        amps = np.zeros(2 ** len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.num_qubits, self.amplitudes / n)

    def inner(self, other: StateVector) -> complex:
        """<self|other>."""
        self._check_same(other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: StateVector) -> float:
        """|<self|other>| clipped to [0, 1]; insensitive to global phase."""
        return float(min(1.0, abs(self.inner(other))))

    def _check_same(self, other: StateVector) -> None:
        if other.num_qubits != self.num_qubits:
            raise DimensionMismatchError(
                f"states live on {self.num_qubits} and {other.num_qubits} qubits"
            )

    def __add__(self, other: StateVector) -> StateVector:
        self._check_same(other)
        return StateVector(self.num_qubits, self.amplitudes + other.amplitudes)

    def __sub__(self, other: StateVector) -> StateVector:
        self._check_same(other)
        return StateVector(self.num_qubits, self.amplitudes - other.amplitudes)

    def __mul__(self, scalar: Scalar) -> StateVector:
        if not np.isscalar(scalar):
            return NotImplemented
        return StateVector(self.num_qubits, self.amplitudes * complex(scalar))

    __rmul__ = __mul__

    def allclose(self, other: StateVector, atol: float = ATOL_EXACT) -> bool:
        self._check_same(other)
        return bool(np.max(np.abs(self.amplitudes - other.amplitudes)) <= atol)


@dataclass(frozen=True, eq=False)
class ExchangeModel:
    """Symmetric exchange couplings J_ij with zero diagonal (hbar = 1)."""

    num_qubits: int
    couplings: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        j = np.array(self.couplings, dtype=float)
        k = self.num_qubits
        if k < 1 or j.shape != (k, k):
            raise ValueError(f"couplings must be a {k}x{k} matrix, got shape {j.shape}")
        if not np.all(np.isfinite(j)):
            raise ValueError("couplings must be finite")
        if np.any(np.diag(j) != 0.0):
            raise ValueError("couplings must have a zero diagonal")
        if np.any(j != j.T):
            raise ValueError("couplings must be symmetric")
        j.setflags(write=False)
        object.__setattr__(self, "couplings", j)

    @classmethod
    def uniform(cls, num_qubits: int, coupling: float) -> ExchangeModel:
        """All pairs coupled with the same J_ij."""
        j = np.full((num_qubits, num_qubits), float(coupling))
        np.fill_diagonal(j, 0.0)
        return cls(num_qubits, j)

    @classmethod
    def from_json(cls, text: str) -> ExchangeModel:
        data = json.loads(text)
        try:
            return cls(int(data["num_qubits"]), np.array(data["couplings"], dtype=float))
        except KeyError as exc:
            raise ValueError(f"exchange model is missing field {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> ExchangeModel:
        return cls.from_json(Path(path).read_text())

    def to_json(self) -> str:
        return json.dumps(
            {"num_qubits": self.num_qubits, "couplings": self.couplings.tolist()}, indent=2
        )

    def coupling(self, i: int, j: int) -> float:
        return float(self.couplings[i - 1, j - 1])


def embed_single_qubit(pauli_label: str, site: int, num_qubits: int) -> SparseOperator:
    """Pauli ``pauli_label`` on qubit ``site``, identity on every other qubit."""
    label = pauli_label.upper()
    if label not in PAULI_LABELS:
        raise ValueError(f"unknown Pauli label {pauli_label!r}")
    _check_site(site, num_qubits)
    dim = 2**num_qubits
    cols = np.arange(dim)
    bit = (cols >> _bit_position(site, num_qubits)) & 1
    mask = 1 << _bit_position(site, num_qubits)
    if label == "I":
        rows, data = cols, np.ones(dim, dtype=np.complex128)
    elif label == "X":
        rows, data = cols ^ mask, np.ones(dim, dtype=np.complex128)
    elif label == "Y":
        # Y|0> = i|1>, Y|1> = -i|0>
        rows, data = cols ^ mask, np.where(bit == 0, 1j, -1j)
    else:
        rows, data = cols, np.where(bit == 0, 1.0, -1.0).astype(np.complex128)
    return SparseOperator(num_qubits, sp.csr_matrix((data, (rows, cols)), shape=(dim, dim)))


def pauli_string_operator(label: str) -> SparseOperator:
    """Tensor product of single-qubit Paulis, e.g. ``"XZZXI"`` (leftmost = qubit 1)."""
    num_qubits = len(label)
    ops = [embed_single_qubit(p, q, num_qubits) for q, p in enumerate(label, start=1) if p.upper() != "I"]
    return reduce(lambda a, b: a @ b, ops, SparseOperator.identity(num_qubits))


def _check_pair(num_qubits: int, i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise InvalidPairError(f"exchange pair needs two distinct qubits, got ({i}, {j})")
    _check_site(i, num_qubits)
    _check_site(j, num_qubits)
    return (i, j) if i < j else (j, i)


def exchange_permutation(num_qubits: int, i: int, j: int) -> np.ndarray:
    """Index map p with E_ij|b> = |p[b]>; an involution, so (E_ij psi)[b] = psi[p[b]]."""
    i, j = _check_pair(num_qubits, i, j)
    idx = np.arange(2**num_qubits, dtype=np.int64)
    pi, pj = _bit_position(i, num_qubits), _bit_position(j, num_qubits)
    differ = ((idx >> pi) ^ (idx >> pj)) & 1
    return idx ^ ((differ << pi) | (differ << pj))


def exchange_operator(num_qubits: int, i: int, j: int) -> SparseOperator:
    """Permutation matrix E_ij swapping qubits i and j."""
    perm = exchange_permutation(num_qubits, i, j)
    dim = perm.size
    data = np.ones(dim, dtype=np.complex128)
    return SparseOperator(num_qubits, sp.csr_matrix((data, (perm, np.arange(dim))), shape=(dim, dim)))


def heisenberg_exchange(num_qubits: int, i: int, j: int) -> SparseOperator:
    """E_ij written as (I + X_iX_j + Y_iY_j + Z_iZ_j) / 2, built from Pauli products."""
    i, j = _check_pair(num_qubits, i, j)
    total = SparseOperator.identity(num_qubits)
    for p in "XYZ":
        total = total + embed_single_qubit(p, i, num_qubits) @ embed_single_qubit(p, j, num_qubits)
    return 0.5 * total


def total_spin_operator(num_qubits: int, axis: str) -> SparseOperator:
    """S_axis = sum_i sigma_i^axis."""
    axis = axis.lower()
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    label = axis.upper()
    return reduce(
        lambda a, b: a + b,
        (embed_single_qubit(label, q, num_qubits) for q in range(1, num_qubits + 1)),
    )


def total_spin_squared(num_qubits: int) -> SparseOperator:
    total = SparseOperator.zero(num_qubits)
    for axis in AXES:
        s = total_spin_operator(num_qubits, axis)
        total = total + s @ s
    return total


def pair_correlation_sum(num_qubits: int) -> SparseOperator:
    """sum over unordered pairs i<j of X_iX_j + Y_iY_j + Z_iZ_j."""
    total = SparseOperator.zero(num_qubits)
    for i, j in combinations(range(1, num_qubits + 1), 2):
        for p in "XYZ":
            total = total + embed_single_qubit(p, i, num_qubits) @ embed_single_qubit(p, j, num_qubits)
    return total


def exchange_hamiltonian(model: ExchangeModel) -> SparseOperator:
    """H_ex = 1/2 sum_{i<j} J_ij E_ij, each unordered pair counted once.

    With J_ij = J/K on every pair this equals (J/8K)[(K^2 - 4K) I + S^2].
    """
    k = model.num_qubits
    if k < 2:
        return SparseOperator.zero(k)
    total = SparseOperator.zero(k)
    for i, j in combinations(range(1, k + 1), 2):
        jij = model.coupling(i, j)
        if jij != 0.0:
            total = total + (0.5 * jij) * exchange_operator(k, i, j)
    return total


def exchange_unitary(num_qubits: int, i: int, j: int, theta: float) -> SparseOperator:
    """exp(-i theta E_ij) = cos(theta) I - i sin(theta) E_ij, exact because E_ij^2 = I."""
    e = exchange_operator(num_qubits, i, j)
    return np.cos(theta) * SparseOperator.identity(num_qubits) + (-1j * np.sin(theta)) * e


def commutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b - b @ a


def apply(op: SparseOperator, state: StateVector) -> StateVector:
    """Matrix-vector product. The result is not renormalized."""
    if op.num_qubits != state.num_qubits:
        raise DimensionMismatchError(
            f"operator on {op.num_qubits} qubits applied to state on {state.num_qubits}"
        )
    return StateVector(state.num_qubits, op.matrix @ state.amplitudes)
