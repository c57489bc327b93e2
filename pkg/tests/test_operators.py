import json
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfs_exchange.operators import (
    DimensionMismatchError,
    ExchangeModel,
    InvalidPairError,
    SparseOperator,
    StateVector,
    apply,
    commutator,
    embed_single_qubit,
    exchange_hamiltonian,
    exchange_operator,
    exchange_unitary,
    heisenberg_exchange,
    pair_correlation_sum,
    pauli_string_operator,
    total_spin_operator,
    total_spin_squared,
)

from conftest import dense_pauli, dense_s2, dense_swap, dense_total_spin, ket


class TestEmbedSingleQubit:
    def test_z_on_one_qubit(self):
        assert np.array_equal(embed_single_qubit("Z", 1, 1).to_dense(), np.diag([1, -1]))

    def test_x_flips_second_qubit(self):
        out = embed_single_qubit("X", 2, 2) @ StateVector.basis("00")
        assert out.allclose(StateVector.basis("01"))

    def test_y_on_zero(self):
        out = embed_single_qubit("Y", 1, 2) @ StateVector.basis("00")
        assert out.allclose(1j * StateVector.basis("10"))

    @pytest.mark.parametrize("label", "IXYZ")
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_matches_kron(self, label, k):
        for site in range(1, k + 1):
            op = embed_single_qubit(label, site, k)
            assert np.array_equal(op.to_dense(), dense_pauli(label, site, k))
            assert op.nnz <= 2**k

    @pytest.mark.parametrize("site", [0, 4, -1])
    def test_site_out_of_range(self, site):
        with pytest.raises(IndexError):
            embed_single_qubit("X", site, 3)

    def test_bad_label(self):
        with pytest.raises(ValueError):
            embed_single_qubit("W", 1, 2)


class TestExchangeOperator:
    def test_swaps_01(self):
        assert (exchange_operator(2, 1, 2) @ StateVector.basis("01")).allclose(StateVector.basis("10"))

    def test_equals_heisenberg_form_two_qubits(self):
        heis = 0.5 * sum(dense_pauli(p, 1, 2) @ dense_pauli(p, 2, 2) for p in "XYZ") + 0.5 * np.eye(4)
        assert np.allclose(exchange_operator(2, 1, 2).to_dense(), heis, atol=1e-14, rtol=0)

    def test_square_is_identity(self):
        e = exchange_operator(4, 2, 3)
        assert (e @ e).allclose(SparseOperator.identity(4), atol=0)

    def test_same_qubit_rejected(self):
        with pytest.raises(InvalidPairError):
            exchange_operator(3, 2, 2)

    @pytest.mark.parametrize("k", range(2, 7))
    def test_structure_and_oracle(self, k):
        for i, j in combinations(range(1, k + 1), 2):
            e = exchange_operator(k, i, j)
            assert e.nnz == 2**k
            assert set(e.entries.values()) == {1 + 0j}
            assert np.array_equal(e.to_dense(), dense_swap(k, i, j))
            assert e.allclose(heisenberg_exchange(k, i, j), atol=1e-14)
            assert (e @ e).max_abs_diff(SparseOperator.identity(k)) == 0.0


class TestTotalSpin:
    def test_one_qubit(self):
        assert np.array_equal(total_spin_operator(1, "z").to_dense(), np.diag([1, -1]))

    def test_singlet_annihilated(self):
        singlet = StateVector.from_amplitudes((ket("01") - ket("10")) / np.sqrt(2))
        assert (total_spin_operator(2, "z") @ singlet).norm() == 0.0

    @pytest.mark.parametrize("k", range(1, 7))
    def test_su2_relations(self, k):
        s = {a: total_spin_operator(k, a) for a in "xyz"}
        for a, b, c in (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")):
            assert commutator(s[a], s[b]).allclose(2j * s[c], atol=1e-12)
            assert commutator(s[b], s[a]).allclose(-2j * s[c], atol=1e-12)

    @pytest.mark.parametrize("k", range(1, 5))
    def test_matches_kron(self, k):
        for a in "xyz":
            assert np.allclose(total_spin_operator(k, a).to_dense(), dense_total_spin(k, a), atol=0)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_hermitian(self, k):
        for a in "xyz":
            assert total_spin_operator(k, a).is_hermitian()
        assert total_spin_squared(k).is_hermitian()

    def test_bad_axis(self):
        with pytest.raises(ValueError):
            total_spin_operator(2, "w")


class TestTotalSpinSquared:
    def test_single_qubit_oracle(self):
        # diagonalize Sx^2+Sy^2+Sz^2 for K=1 independently
        evals = np.linalg.eigvalsh(dense_s2(1))
        assert np.allclose(evals, [3, 3])
        assert total_spin_squared(1).allclose(3 * SparseOperator.identity(1))

    def test_two_qubit_singlet_eigenvalue_zero(self):
        singlet = StateVector.from_amplitudes(ket("01") - ket("10"))
        assert (total_spin_squared(2) @ singlet).norm() < 1e-14

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_pair_identity(self, k):
        # S^2 = 3K I + 2 sum_{i<j} (XX + YY + ZZ)
        rhs = 3 * k * SparseOperator.identity(k) + 2 * pair_correlation_sum(k)
        assert total_spin_squared(k).allclose(rhs, atol=1e-12)

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_positive_semidefinite(self, k):
        assert np.linalg.eigvalsh(total_spin_squared(k).to_dense()).min() > -1e-12


class TestExchangeHamiltonian:
    def test_zero_couplings(self):
        h = exchange_hamiltonian(ExchangeModel.uniform(3, 0.0))
        assert h.nnz == 0

    def test_two_qubits_counts_pair_once(self):
        model = ExchangeModel(2, np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert exchange_hamiltonian(model).allclose(0.5 * exchange_operator(2, 1, 2), atol=0)

    def test_uniform_four_qubit_closed_form(self):
        k, j = 4, 1.3
        h = exchange_hamiltonian(ExchangeModel.uniform(k, j / k))
        closed = (j / (8 * k)) * ((k * k - 4 * k) * SparseOperator.identity(k) + total_spin_squared(k))
        assert h.allclose(closed, atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 5), st.integers(0, 2**32 - 1))
    def test_random_models_hermitian(self, k, seed):
        r = np.random.default_rng(seed)
        j = r.normal(size=(k, k))
        j = j + j.T
        np.fill_diagonal(j, 0.0)
        assert exchange_hamiltonian(ExchangeModel(k, j)).is_hermitian(atol=1e-12)


class TestExchangeUnitary:
    def test_zero_angle(self):
        assert exchange_unitary(3, 1, 3, 0.0).allclose(SparseOperator.identity(3), atol=0)

    def test_quarter_turn(self):
        assert exchange_unitary(3, 1, 3, np.pi / 2).allclose(-1j * exchange_operator(3, 1, 3), atol=1e-15)

    def test_matches_eigendecomposition(self):
        e = dense_swap(4, 2, 4)
        evals, evecs = np.linalg.eigh(e)
        oracle = evecs @ np.diag(np.exp(-1j * 0.7 * evals)) @ evecs.conj().T
        assert np.max(np.abs(exchange_unitary(4, 2, 4, 0.7).to_dense() - oracle)) < 1e-12

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-10, 10, allow_nan=False), st.sampled_from([(1, 2), (1, 4), (2, 3), (3, 4)]))
    def test_inverse_and_unitary(self, theta, pair):
        u = exchange_unitary(4, *pair, theta)
        assert (u @ exchange_unitary(4, *pair, -theta)).allclose(SparseOperator.identity(4), atol=1e-12)
        assert u.is_unitary(atol=1e-12)


class TestCommutatorAndApply:
    @pytest.mark.parametrize("k", range(2, 7))
    def test_spin_commutes_with_exchange(self, k):
        for a in "xyz":
            s = total_spin_operator(k, a)
            for i, j in combinations(range(1, k + 1), 2):
                assert commutator(s, exchange_operator(k, i, j)).max_abs() < 1e-12

    def test_self_commutator(self):
        a = total_spin_squared(3) + 0.3j * embed_single_qubit("Y", 2, 3)
        assert commutator(a, a).max_abs() == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            commutator(SparseOperator.identity(2), SparseOperator.identity(3))
        with pytest.raises(DimensionMismatchError):
            apply(SparseOperator.identity(2), StateVector.basis("000"))

    def test_identity_preserves(self, rng):
        psi = StateVector.from_amplitudes(rng.normal(size=8) + 1j * rng.normal(size=8))
        assert apply(SparseOperator.identity(3), psi).allclose(psi, atol=0)

    def test_apply_examples(self):
        assert apply(exchange_operator(2, 1, 2), StateVector.basis("01")).allclose(StateVector.basis("10"))
        out = apply(total_spin_operator(2, "z"), StateVector.basis("00"))
        assert out.allclose(2 * StateVector.basis("00"))
        assert out.norm() == 2.0  # no renormalization


class TestSparseOperator:
    def test_canonical_storage(self):
        a = SparseOperator.from_entries(2, {(1, 0): 1.0, (0, 1): 2.0, (3, 3): 0.0})
        assert a.entries == {(0, 1): 2 + 0j, (1, 0): 1 + 0j}

    def test_entry_out_of_range(self):
        with pytest.raises(IndexError):
            SparseOperator.from_entries(1, {(2, 0): 1.0})

    def test_pauli_string(self):
        assert np.array_equal(
            pauli_string_operator("XZY").to_dense(),
            dense_pauli("X", 1, 3) @ dense_pauli("Z", 2, 3) @ dense_pauli("Y", 3, 3),
        )

    def test_hermiticity_flag(self):
        assert not SparseOperator.from_entries(1, {(0, 1): 1j}).is_hermitian()


class TestStateVector:
    def test_normalized_constructor(self, rng):
        psi = StateVector.from_amplitudes(rng.normal(size=16) * 7)
        assert abs(psi.norm() - 1) < 1e-12

    def test_bit_convention(self):
        # qubit 1 is the most significant bit
        assert StateVector.basis("0110").amplitudes[6] == 1

    def test_immutable(self):
        psi = StateVector.basis("01")
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 1

    def test_zero_norm_rejected(self):
        with pytest.raises(ValueError):
            StateVector.from_amplitudes([0, 0])


class TestExchangeModel:
    def test_roundtrip(self, tmp_path):
        model = ExchangeModel(3, np.array([[0, 0.5, -1], [0.5, 0, 2], [-1, 2, 0]]))
        path = tmp_path / "model.json"
        path.write_text(model.to_json())
        back = ExchangeModel.load(path)
        assert np.array_equal(back.couplings, model.couplings)

    @pytest.mark.parametrize(
        "couplings",
        [
            [[0, 1], [1.0000000000000002, 0]],
            [[1e-300, 1], [1, 0]],
            [[0, 1, 0], [1, 0, 0]],
        ],
    )
    def test_loader_is_bit_exact(self, couplings):
        with pytest.raises(ValueError):
            ExchangeModel.from_json(json.dumps({"num_qubits": 2, "couplings": couplings}))

    def test_missing_field(self):
        with pytest.raises(ValueError, match="couplings"):
            ExchangeModel.from_json('{"num_qubits": 2}')
