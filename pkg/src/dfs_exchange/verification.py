"""Batch of numerical identity checks behind ``dfs-exchange verify``."""

from __future__ import annotations

from dataclasses import dataclass

from .combinatorics import (
    YoungDiagram,
    dicke_multiplicity,
    encoded_qubit_count,
    singlet_multiplicity,
    standard_tableaux_count,
)
from .dfs import (
    NoSingletError,
    check_dfs_condition,
    check_invariance,
    dfs_basis,
    expected_four_qubit_exchange,
    project_operator,
    all_pairs,
    verify_constant_j,
)
from .operators import (
    AXES,
    ExchangeModel,
    commutator,
    exchange_hamiltonian,
    exchange_operator,
    heisenberg_exchange,
    total_spin_operator,
)

MAX_VERIFY_QUBITS = 8


@dataclass(frozen=True)
class Check:
    name: str
    residual: float | None
    status: str  # "pass", "fail" or "skipped"
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "residual": self.residual, "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class VerificationReport:
    num_qubits: int
    tolerance: float
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "K": self.num_qubits,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }


def _graded(name: str, residual: float, tol: float, detail: str = "") -> Check:
    return Check(name, float(residual), "pass" if residual < tol else "fail", detail)


def run_verification(
    num_qubits: int,
    tol: float = 1e-10,
    coupling: float = 1.0,
    model: ExchangeModel | None = None,
) -> VerificationReport:
    k = num_qubits
    if k < 2 or k % 2 or k > MAX_VERIFY_QUBITS:
        raise NoSingletError(f"verification needs an even K in 2..{MAX_VERIFY_QUBITS}, got {k}")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if model is not None and model.num_qubits != k:
        raise ValueError(f"exchange model has {model.num_qubits} qubits, expected {k}")

    spins = {a: total_spin_operator(k, a) for a in AXES}
    pairs = all_pairs(k)
    exchanges = {p: exchange_operator(k, *p) for p in pairs}
    checks = []

    su2 = max(
        commutator(spins[a], spins[b]).max_abs_diff(2j * spins[c])
        for a, b, c in (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y"))
    )
    checks.append(_graded("su2_commutators", su2, tol, "[S_a, S_b] = 2i S_c"))

    heis = max(exchanges[p].max_abs_diff(heisenberg_exchange(k, *p)) for p in pairs)
    checks.append(_graded("heisenberg_exchange_form", heis, tol, "E_ij = (I + X X + Y Y + Z Z)/2"))

    comm = max(commutator(spins[a], exchanges[p]).max_abs() for a in AXES for p in pairs)
    checks.append(_graded("spin_exchange_commute", comm, tol, "[S_a, E_ij] = 0"))

    basis = dfs_basis(k)
    checks.append(_graded("dfs_condition", check_dfs_condition(basis, tol).max_residual, tol, f"d={basis.dimension}"))

    leak = max(check_invariance(exchanges[p], basis, tol).leakage for p in pairs)
    checks.append(_graded("exchange_leakage", leak, tol, "||(I-P) E_ij P||"))

    cj = verify_constant_j(k, coupling, tol)
    checks.append(_graded("uniform_exchange_identity", cj.identity_residual, tol, "H_ex = (J/8K)[(K^2-4K) I + S^2]"))
    checks.append(_graded("uniform_exchange_phase", cj.eigen_residual, tol, f"nu={cj.nu_value!r}"))

    if basis.dimension == 2:
        expected = expected_four_qubit_exchange()
        err = max(project_operator(exchanges[p], basis).max_abs_diff(m) for p, m in expected.items())
        checks.append(_graded("encoded_exchange_matrices", err, tol, "six K=4 encoded exchange matrices"))
    else:
        checks.append(Check("encoded_exchange_matrices", None, "skipped", f"skipped: d={basis.dimension}"))

    if model is not None:
        leak_h = check_invariance(exchange_hamiltonian(model), basis, tol).leakage
        checks.append(_graded("model_hamiltonian_leakage", leak_h, tol, "||(I-P) H_ex P|| for the supplied couplings"))

    return VerificationReport(k, tol, tuple(checks))


def dims_rows(k_max: int, kernel_max: int = 0) -> list[dict]:
    """Exact DFS dimensions for every even K <= k_max.

    ``kernel_max`` > 0 adds the numerically computed kernel dimension of S^2
    for K up to that bound.
    """
    if k_max < 2:
        raise ValueError(f"K_max must be at least 2, got {k_max}")
    rows = []
    for k in range(2, k_max + 1, 2):
        dim = singlet_multiplicity(k)
        hooks = standard_tableaux_count(YoungDiagram.singlet_shape(k))
        row = {
            "K": k,
            "dfs_dimension": dim,
            "encoded_qubits": encoded_qubit_count(k),
            "hook_check": hooks == dim == dicke_multiplicity(k, 0),
        }
        if k <= kernel_max:
            row["kernel_dimension"] = dfs_basis(k).dimension
        rows.append(row)
    return rows

