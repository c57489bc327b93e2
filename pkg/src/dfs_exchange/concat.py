"""Concatenated DFS + five-qubit code on clusters of four physical qubits.

Each cluster holds one encoded qubit in the K=4 singlet space (|0~>, |1~>).
Five clusters form one codeword of the perfect code, 20 physical qubits in
total. Cluster 1 occupies the four most significant physical qubits.

The production path runs on the 32-dimensional encoded register. The
physical register (2**(4n) amplitudes, n <= 5) is kept as an oracle: every
exchange event can be applied there too, and the two paths must agree.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from .dfs import dfs_basis, project_operator
from .five_qubit import correct, encode, measure_syndrome, syndrome_bits_to_str
from .operators import ExchangeModel, StateVector, exchange_operator, exchange_permutation

CLUSTER_SIZE = 4
MAX_CLUSTERS = 5
LEAKAGE_TOL = 1e-10
SCHEMA_VERSION = 1
SWEEP_THETAS = (0.1, 0.5, 1.0, math.pi / 3)
CLUSTER_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


class UnsupportedClusterCountError(ValueError):
    pass


class DFSViolationError(RuntimeError):
    """The physical state has weight outside the per-cluster singlet spaces."""


class ConfigError(ValueError):
    pass


@lru_cache(maxsize=None)
def _isometry() -> np.ndarray:
    """16 x 2 map |0> -> |0~>, |1> -> |1~>."""
    return dfs_basis(CLUSTER_SIZE).matrix


@lru_cache(maxsize=None)
def encoded_exchange_matrix(i: int, j: int) -> np.ndarray:
    """2x2 action of E_ij on one cluster's encoded qubit."""
    return project_operator(exchange_operator(CLUSTER_SIZE, i, j), dfs_basis(CLUSTER_SIZE)).matrix


def encoded_exchange_unitary(i: int, j: int, theta: float) -> np.ndarray:
    return np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * encoded_exchange_matrix(i, j)


def _check_clusters(n_clusters: int) -> None:
    if not 1 <= n_clusters <= MAX_CLUSTERS:
        raise UnsupportedClusterCountError(f"cluster count must be in 1..{MAX_CLUSTERS}, got {n_clusters}")


def _map_every_axis(amplitudes: np.ndarray, n: int, matrix: np.ndarray) -> np.ndarray:
    """(matrix)^{tensor n} applied to a flat amplitude vector."""
    out_dim, in_dim = matrix.shape
    tensor = amplitudes.reshape((in_dim,) * n)
    for axis in range(n):
        tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis)
    return tensor.reshape(out_dim**n)


def lift_encoded_to_physical(state: StateVector) -> StateVector:
    """Replace every encoded qubit by its four-qubit singlet state."""
    n = state.num_qubits
    _check_clusters(n)
    amps = _map_every_axis(state.amplitudes, n, _isometry())
    return StateVector(CLUSTER_SIZE * n, amps)


def project_physical_to_encoded(state: StateVector) -> tuple[StateVector, float]:
    """Pull a physical state back through the isometry.

    Returns the encoded state and the leakage norm ||psi - V V^dag psi||.
    """
    if state.num_qubits % CLUSTER_SIZE:
        raise UnsupportedClusterCountError(f"{state.num_qubits} qubits is not a whole number of clusters")
    n = state.num_qubits // CLUSTER_SIZE
    _check_clusters(n)
    encoded = StateVector(n, _map_every_axis(state.amplitudes, n, _isometry().conj().T))
    leakage = (state - lift_encoded_to_physical(encoded)).norm()
    return encoded, leakage


@dataclass(frozen=True)
class ErrorEvent:
    cluster: int
    pair: tuple[int, int]
    theta: float

    def __post_init__(self) -> None:
        i, j = self.pair
        if not (1 <= i < j <= CLUSTER_SIZE):
            raise ValueError(f"pair must satisfy 1 <= i < j <= 4, got {self.pair}")
        if not 1 <= self.cluster <= MAX_CLUSTERS:
            raise ValueError(f"cluster must be in 1..{MAX_CLUSTERS}, got {self.cluster}")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "pair", (int(i), int(j)))

    def as_dict(self) -> dict:
        return {"cluster": self.cluster, "pair": list(self.pair), "theta": self.theta}


@dataclass(frozen=True, eq=False)
class ConcatState:
    level: Literal["encoded", "physical"]
    vector: StateVector

    def __post_init__(self) -> None:
        if self.level not in ("encoded", "physical"):
            raise ValueError(f"unknown level {self.level!r}")
        per = 1 if self.level == "encoded" else CLUSTER_SIZE
        if self.vector.num_qubits % per:
            raise UnsupportedClusterCountError("physical register is not a whole number of clusters")
        _check_clusters(self.vector.num_qubits // per)

    @property
    def n_clusters(self) -> int:
        return self.vector.num_qubits // (1 if self.level == "encoded" else CLUSTER_SIZE)

    def to_physical(self) -> ConcatState:
        if self.level == "physical":
            return self
        return ConcatState("physical", lift_encoded_to_physical(self.vector))

    def to_encoded(self, leakage_tol: float = LEAKAGE_TOL) -> ConcatState:
        if self.level == "encoded":
            return self
        encoded, leakage = project_physical_to_encoded(self.vector)
        if leakage > leakage_tol:
            raise DFSViolationError(f"leakage {leakage:.3e} out of the DFS exceeds {leakage_tol:.1e}")
        return ConcatState("encoded", encoded)

    def leakage(self) -> float:
        if self.level == "encoded":
            return 0.0
        return project_physical_to_encoded(self.vector)[1]


def apply_exchange_event(state: ConcatState, event: ErrorEvent) -> ConcatState:
    """exp(-i theta E_ij) on one cluster, at whichever level ``state`` lives."""
    if event.cluster > state.n_clusters:
        raise ValueError(f"event targets cluster {event.cluster} of a {state.n_clusters}-cluster state")
    i, j = event.pair
    c, s = math.cos(event.theta), math.sin(event.theta)
    if state.level == "encoded":
        n = state.n_clusters
        u = encoded_exchange_unitary(i, j, event.theta)
        tensor = state.vector.amplitudes.reshape((2,) * n)
        axis = event.cluster - 1
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [axis])), 0, axis)
        return ConcatState("encoded", StateVector(n, tensor.reshape(-1)))
    k = state.vector.num_qubits
    offset = CLUSTER_SIZE * (event.cluster - 1)
    perm = exchange_permutation(k, offset + i, offset + j)
    amps = state.vector.amplitudes
    # E_ij is an involutive permutation: (E psi)[b] = psi[perm[b]]
    return ConcatState("physical", StateVector(k, c * amps - 1j * s * amps[perm]))


@dataclass(frozen=True)
class TrialReport:
    seed: int | None
    events: tuple[ErrorEvent, ...]
    syndromes: tuple[str, ...]
    fidelity_before: float
    fidelity_after: float
    trial: int | None = None

    def as_dict(self) -> dict:
        return {
            "trial": self.trial,
            "seed": self.seed,
            "events": [e.as_dict() for e in self.events],
            "syndromes": list(self.syndromes),
            "fidelity_before": self.fidelity_before,
            "fidelity_after": self.fidelity_after,
        }


def recover(
    state: ConcatState,
    reference: StateVector,
    rng: np.random.Generator,
    *,
    events: Sequence[ErrorEvent] = (),
    seed: int | None = None,
    trial: int | None = None,
    leakage_tol: float = LEAKAGE_TOL,
) -> tuple[ConcatState, TrialReport]:
    """One round of perfect-code syndrome measurement and correction.

    Physical states are first projected to the encoded level; any leakage
    above ``leakage_tol`` raises :class:`DFSViolationError`. Fidelities are
    |<reference|psi>| so global phases never count as failures.
    """
    encoded = state.to_encoded(leakage_tol)
    if encoded.n_clusters != MAX_CLUSTERS:
        raise UnsupportedClusterCountError("recovery needs all five clusters")
    before = reference.fidelity(encoded.vector)
    syndrome, collapsed = measure_syndrome(encoded.vector, rng)
    fixed = correct(collapsed, syndrome)
    report = TrialReport(
        seed=seed,
        events=tuple(events),
        syndromes=(syndrome_bits_to_str(syndrome),),
        fidelity_before=before,
        fidelity_after=reference.fidelity(fixed),
        trial=trial,
    )
    return ConcatState("encoded", fixed), report


def random_logical_state(rng: np.random.Generator) -> StateVector:
    """Haar-random single-qubit state."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return StateVector.from_amplitudes(v)


@dataclass(frozen=True)
class ErrorRateModel:
    """Poisson exchange-event model for one correction cycle.

    Pair (i, j) of every cluster fires on average 2|J_ij| * cycle_time times
    per cycle (events arrive on the 1/(2|J_ij|) timescale). Each event's
    angle is uniform on [0, theta_max).
    """

    cycle_time: float = 0.0
    couplings: tuple[tuple[float, ...], ...] = field(
        default_factory=lambda: tuple(tuple(0.0 if a == b else 1.0 for b in range(4)) for a in range(4))
    )
    theta_max: float = math.pi

    def __post_init__(self) -> None:
        if not math.isfinite(self.cycle_time) or self.cycle_time < 0:
            raise ConfigError(f"cycle_time must be a finite non-negative number, got {self.cycle_time}")
        if not math.isfinite(self.theta_max) or self.theta_max <= 0:
            raise ConfigError(f"theta_max must be positive, got {self.theta_max}")
        try:
            ExchangeModel(CLUSTER_SIZE, np.array(self.couplings, dtype=float))
        except ValueError as exc:
            raise ConfigError(f"invalid cluster couplings: {exc}") from None

    @classmethod
    def from_rate(cls, rate: float, theta_max: float = math.pi) -> ErrorRateModel:
        """Uniform |J_ij| = 1 with ``rate`` mean events per pair per cycle."""
        if not math.isfinite(rate) or rate < 0:
            raise ConfigError(f"rate must be a finite non-negative number, got {rate}")
        return cls(cycle_time=rate / 2, theta_max=theta_max)

    def pair_rates(self) -> dict[tuple[int, int], float]:
        return {(i, j): 2 * abs(self.couplings[i - 1][j - 1]) * self.cycle_time for i, j in CLUSTER_PAIRS}

    def sample_events(self, rng: np.random.Generator) -> list[ErrorEvent]:
        events = []
        rates = self.pair_rates()
        for cluster in range(1, MAX_CLUSTERS + 1):
            for pair in CLUSTER_PAIRS:
                for _ in range(int(rng.poisson(rates[pair]))):
                    events.append(ErrorEvent(cluster, pair, float(rng.uniform(0.0, self.theta_max))))
        order = rng.permutation(len(events)) if events else []
        return [events[k] for k in order]

    def as_dict(self) -> dict:
        return {
            "cycle_time": self.cycle_time,
            "couplings": [list(r) for r in self.couplings],
            "theta_max": self.theta_max,
        }


def run_trial(
    events: Sequence[ErrorEvent],
    rng: np.random.Generator,
    *,
    logical: StateVector | None = None,
    seed: int | None = None,
    trial: int | None = None,
) -> TrialReport:
    """Encode a logical state, apply ``events`` at the encoded level, recover."""
    logical = logical if logical is not None else random_logical_state(rng)
    reference = encode(logical)
    state = ConcatState("encoded", reference)
    for event in events:
        state = apply_exchange_event(state, event)
    _, report = recover(state, reference, rng, events=events, seed=seed, trial=trial)
    return report


def _trial_worker(args: tuple[int, np.random.SeedSequence, ErrorRateModel]) -> TrialReport:
    index, seq, model = args
    rng = np.random.default_rng(seq)
    events = model.sample_events(rng)
    return run_trial(events, rng, seed=int(seq.generate_state(1, np.uint64)[0]), trial=index)


@dataclass(frozen=True)
class MonteCarloResult:
    seed: int
    n_trials: int
    model: ErrorRateModel
    trials: tuple[TrialReport, ...]

    @property
    def mean_fidelity(self) -> float:
        return math.fsum(t.fidelity_after for t in self.trials) / len(self.trials)

    @property
    def min_fidelity(self) -> float:
        return min(t.fidelity_after for t in self.trials)

    def syndrome_histogram(self) -> dict[str, int]:
        hist: dict[str, int] = {}
        for t in self.trials:
            for s in t.syndromes:
                hist[s] = hist.get(s, 0) + 1
        return dict(sorted(hist.items()))

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "n_trials": self.n_trials,
            "model": self.model.as_dict(),
            "trials": [t.as_dict() for t in self.trials],
            "aggregate": {
                "mean_fidelity": self.mean_fidelity,
                "min_fidelity": self.min_fidelity,
                "syndrome_histogram": self.syndrome_histogram(),
            },
        }


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def run_monte_carlo(n_trials: int, model: ErrorRateModel, seed: int, workers: int = 1) -> MonteCarloResult:
    """Independent trials, each with its own spawned random stream.

    Results are ordered by trial index, so ``workers`` never changes the output.
    """
    if n_trials < 1:
        raise ConfigError(f"n_trials must be at least 1, got {n_trials}")
    seed = check_seed(seed)
    children = np.random.SeedSequence(seed).spawn(n_trials)
    jobs = [(index, seq, model) for index, seq in enumerate(children)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(_trial_worker, jobs, chunksize=max(1, n_trials // (4 * workers))))
    else:
        trials = [_trial_worker(job) for job in jobs]
    return MonteCarloResult(seed, n_trials, model, tuple(trials))


def single_event_sweep(seed: int, thetas: Sequence[float] = SWEEP_THETAS) -> list[TrialReport]:
    """One trial per (cluster, pair, theta): 5 x 6 x len(thetas) reports."""
    seed = check_seed(seed)
    rng = np.random.default_rng(seed)
    reports = []
    for cluster in range(1, MAX_CLUSTERS + 1):
        for pair in CLUSTER_PAIRS:
            for theta in thetas:
                event = ErrorEvent(cluster, pair, float(theta))
                reports.append(run_trial([event], rng, seed=seed, trial=len(reports)))
    return reports
