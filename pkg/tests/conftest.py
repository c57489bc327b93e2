"""Dense reference constructions built from np.kron, independent of the package's
bit-twiddling sparse builders."""

from functools import reduce

import numpy as np
import pytest

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(label: str, site: int, k: int) -> np.ndarray:
    """Kronecker product with qubit 1 as the leftmost factor."""
    return reduce(np.kron, [PAULI[label] if q == site else PAULI["I"] for q in range(1, k + 1)])


def dense_swap(k: int, i: int, j: int) -> np.ndarray:
    """Swap built by permuting bitstrings explicitly."""
    dim = 2**k
    m = np.zeros((dim, dim))
    for col in range(dim):
        bits = list(format(col, f"0{k}b"))
        bits[i - 1], bits[j - 1] = bits[j - 1], bits[i - 1]
        m[int("".join(bits), 2), col] = 1
    return m


def dense_total_spin(k: int, axis: str) -> np.ndarray:
    return sum(dense_pauli(axis.upper(), q, k) for q in range(1, k + 1))


def dense_s2(k: int) -> np.ndarray:
    return sum(dense_total_spin(k, a) @ dense_total_spin(k, a) for a in "xyz")


def ket(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
