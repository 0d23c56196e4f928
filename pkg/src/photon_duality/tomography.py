"""Joint Pauli tomography of the path (x) polarization two-qubit state.

Measurement model: both qubits are measured projectively in Pauli eigenbases.
A setting is a pair of operators (path_op, internal_op) from {I, X, Y, Z};
the 15 settings other than (I, I) are informationally complete.  Each shot
yields a joint eigenvalue outcome in {+1, -1}^2, sampled from the exact
four-outcome distribution of the commuting pair's eigenprojectors.  For an
identity operator the -1 outcomes carry zero projectors, so their
probability is exactly zero and the empirical expectation reduces to the
marginal of the other qubit.

Reconstruction routes:
  * linear inversion - Pauli-basis expansion with empirical expectations;
    exactly invertible, but shot noise can push eigenvalues below zero.
  * maximum likelihood - iterative reweighted sandwich updates starting at
    the maximally mixed state; always physical.  The inner loop dispatches
    to a numba or pure-numpy kernel (see ``_kernels``).

Counts are reproducible bit-for-bit from their seed; a record built by
``exact_record`` instead carries the infinite-shot limit (outcome
probabilities as fractional counts with shots = 1) for noise-free checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import _kernels
from .metrics import DualityTriple
from .seeding import check_seed, make_rng
from .states import DensityMatrix, wootters_concurrence

PAULI: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
for _m in PAULI.values():
    _m.setflags(write=False)

OUTCOMES: tuple[tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class MeasurementSetting:
    """One joint Pauli measurement: path qubit op (x) internal qubit op."""

    path_op: str
    internal_op: str

    def __post_init__(self):
        for op in (self.path_op, self.internal_op):
            if op not in PAULI:
                raise ValueError(f"operator must be one of I, X, Y, Z, got {op!r}")

    @property
    def is_trivial(self) -> bool:
        return self.path_op == "I" and self.internal_op == "I"

    def operator(self) -> np.ndarray:
        return np.kron(PAULI[self.path_op], PAULI[self.internal_op])

    def outcome_projectors(self) -> list[np.ndarray]:
        """4 x 4 joint eigenprojectors, ordered as ``OUTCOMES``.

        For an identity factor the +1 projector is the full identity and the
        -1 projector is zero.
        """

        def single(op: str, sign: int) -> np.ndarray:
            if op == "I":
                return PAULI["I"] if sign == 1 else np.zeros((2, 2), dtype=np.complex128)
            return 0.5 * (PAULI["I"] + sign * PAULI[op])

        return [
            np.kron(single(self.path_op, s), single(self.internal_op, t))
            for s, t in OUTCOMES
        ]

    def label(self) -> str:
        return f"{self.path_op}{self.internal_op}"


ALL_SETTINGS: tuple[MeasurementSetting, ...] = tuple(
    MeasurementSetting(p, i) for p in "IXYZ" for i in "IXYZ"
)
NONTRIVIAL_SETTINGS: tuple[MeasurementSetting, ...] = tuple(
    m for m in ALL_SETTINGS if not m.is_trivial
)


def _require_two_qubits(rho: DensityMatrix) -> None:
    if rho.matrix.shape[0] != 4:
        raise ValueError(
            f"tomography supports d = 2 only (4 x 4 matrices), got {rho.matrix.shape}"
        )


def pauli_expectation(rho: DensityMatrix, m: MeasurementSetting) -> float:
    """Tr(rho * sigma_path (x) sigma_internal)."""
    _require_two_qubits(rho)
    return float(np.trace(rho.matrix @ m.operator()).real)


def outcome_probabilities(rho: DensityMatrix, m: MeasurementSetting) -> np.ndarray:
    """Exact joint-outcome distribution, ordered as ``OUTCOMES``."""
    _require_two_qubits(rho)
    p = np.array(
        [np.trace(rho.matrix @ proj).real for proj in m.outcome_projectors()]
    )
    p = np.clip(p, 0.0, None)  # physicality tolerance can leave ~-1e-8 dust
    return p / p.sum()


@dataclass(frozen=True)
class CountRecord:
    """Outcome counts for one measurement setting.

    Sampled records carry integer counts summing to ``shots``.  Records from
    ``exact_record`` carry the outcome probabilities themselves as fractional
    counts with shots = 1 (the infinite-shot idealization).
    """

    setting: MeasurementSetting
    counts: Mapping[tuple[int, int], float]
    shots: int
    seed: int

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if set(self.counts) != set(OUTCOMES):
            raise ValueError(f"counts must cover exactly the outcomes {OUTCOMES}")
        values = np.array([self.counts[o] for o in OUTCOMES], dtype=np.float64)
        if np.any(values < 0.0):
            raise ValueError("counts must be non-negative")
        total = float(values.sum())
        if abs(total - self.shots) > 1e-9 * max(1.0, self.shots):
            raise ValueError(f"counts sum to {total}, expected shots = {self.shots}")
        object.__setattr__(self, "counts", dict(self.counts))

    def frequencies(self) -> np.ndarray:
        """Outcome frequencies ordered as ``OUTCOMES``."""
        return np.array([self.counts[o] / self.shots for o in OUTCOMES])

    def empirical_expectation(self) -> float:
        """Empirical <sigma (x) sigma> = sum of (s * t) weighted frequencies."""
        return float(sum(s * t * f for (s, t), f in zip(OUTCOMES, self.frequencies())))


def sample_counts(
    rho: DensityMatrix, m: MeasurementSetting, shots: int, seed: int
) -> CountRecord:
    """Multinomial draw from the exact outcome distribution; seed-deterministic."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if m.is_trivial:
        raise ValueError("the (I, I) setting is trivially 1 and is never sampled")
    seed = check_seed(seed)
    draws = make_rng(seed).multinomial(shots, outcome_probabilities(rho, m))
    return CountRecord(
        setting=m,
        counts={o: int(n) for o, n in zip(OUTCOMES, draws)},
        shots=int(shots),
        seed=seed,
    )


def exact_record(rho: DensityMatrix, m: MeasurementSetting) -> CountRecord:
    """Infinite-shot record: fractional counts equal to the exact distribution."""
    if m.is_trivial:
        raise ValueError("the (I, I) setting is trivially 1 and is never recorded")
    p = outcome_probabilities(rho, m)
    return CountRecord(
        setting=m,
        counts={o: float(v) for o, v in zip(OUTCOMES, p)},
        shots=1,
        seed=0,
    )


@dataclass(frozen=True)
class TomographyResult:
    rho_hat: DensityMatrix
    method: str
    iterations: int
    log_likelihood: float
    converged: bool


def _collect(records) -> list[CountRecord]:
    """Validate and order a record set: exactly the 15 nontrivial settings."""
    by_setting: dict[MeasurementSetting, CountRecord] = {}
    for rec in records:
        if rec.setting in by_setting:
            raise ValueError(f"duplicate records for setting {rec.setting.label()}")
        by_setting[rec.setting] = rec
    missing = [m.label() for m in NONTRIVIAL_SETTINGS if m not in by_setting]
    extra = [m.label() for m in by_setting if m.is_trivial]
    if missing or extra:
        raise ValueError(
            f"need exactly the 15 nontrivial settings; missing {missing}, extra {extra}"
        )
    return [by_setting[m] for m in NONTRIVIAL_SETTINGS]


def _measurement_arrays(ordered: list[CountRecord]):
    """Stack per-outcome projectors, counts, and frequencies over all settings."""
    projs, counts, freqs = [], [], []
    for rec in ordered:
        projs.extend(rec.setting.outcome_projectors())
        counts.extend(rec.counts[o] for o in OUTCOMES)
        freqs.extend(rec.frequencies())
    return (
        np.array(projs, dtype=np.complex128),
        np.array(counts, dtype=np.float64),
        np.array(freqs, dtype=np.float64),
    )


def _log_likelihood(rho_mat: np.ndarray, ordered: list[CountRecord]) -> float:
    ll = 0.0
    for rec in ordered:
        p = np.array(
            [np.trace(rho_mat @ proj).real for proj in rec.setting.outcome_projectors()]
        )
        p = np.maximum(p, _kernels.P_FLOOR)
        n = np.array([rec.counts[o] for o in OUTCOMES])
        ll += float(np.sum(n[n > 0] * np.log(p[n > 0])))
    return ll


def linear_inversion(records) -> TomographyResult:
    """Pauli-basis inversion from empirical expectations.

    Exact on exact records; on sampled records the estimate is Hermitian and
    unit trace but may have (slightly) negative eigenvalues, so the returned
    density matrix skips the positivity check.
    """
    ordered = _collect(records)
    rho_mat = 0.25 * np.eye(4, dtype=np.complex128)  # <I (x) I> := 1
    for rec in ordered:
        rho_mat += 0.25 * rec.empirical_expectation() * rec.setting.operator()
    return TomographyResult(
        rho_hat=DensityMatrix(rho_mat, check_positive=False),
        method="linear_inversion",
        iterations=0,
        log_likelihood=_log_likelihood(rho_mat, ordered),
        converged=True,
    )


def mle_reconstruct(records, max_iter: int = 2000, tol: float = 1e-10) -> TomographyResult:
    """Maximum-likelihood reconstruction (always physical).

    Iterates the reweighted-sandwich fixed point from the maximally mixed
    state, accepting only likelihood-non-decreasing steps (full step when it
    improves, diluted otherwise).  ``converged`` reports whether the
    likelihood gain fell below ``tol`` within ``max_iter`` iterations;
    non-convergence is reported, never raised.
    """
    ordered = _collect(records)
    projs, counts, freqs = _measurement_arrays(ordered)
    rho0 = 0.25 * np.eye(4, dtype=np.complex128)
    rho_mat, iterations, ll, converged = _kernels.mle_loop(
        projs, counts, freqs, rho0, max_iter, tol
    )
    return TomographyResult(
        rho_hat=DensityMatrix(rho_mat),
        method="mle",
        iterations=iterations,
        log_likelihood=ll,
        converged=converged,
    )


def estimate_vdc_from_rho(rho_hat: DensityMatrix) -> DualityTriple:
    """Read the duality triple off a reconstructed two-qubit density matrix.

    D = |Tr rho_AA - Tr rho_BB| (path populations), V = 2 |Tr rho_AB| (the
    internal trace of the off-diagonal path block), C = Wootters concurrence.
    ``gamma`` is the effective overlap conj(Tr rho_AB) / sqrt(p_a * p_b)
    (zero when a path is empty); it matches |gamma| of a pure source but its
    phase also absorbs the path-amplitude phases.  The residual is reported
    as-is: nothing forces a reconstructed state onto the unit sphere.
    """
    _require_two_qubits(rho_hat)
    if not rho_hat.is_physical():
        raise ValueError("duality estimation needs a physical density matrix")
    mat = rho_hat.matrix
    p_a = float(np.trace(mat[:2, :2]).real)
    p_b = float(np.trace(mat[2:, 2:]).real)
    cross = complex(np.trace(mat[:2, 2:]))
    v = min(1.0, 2.0 * abs(cross))
    d = min(1.0, abs(p_a - p_b))
    c = wootters_concurrence(rho_hat)
    gamma = cross.conjugate() / np.sqrt(p_a * p_b) if p_a * p_b > 1e-12 else 0j
    return DualityTriple(
        visibility=v,
        distinguishability=d,
        concurrence=c,
        gamma=gamma,
        residual=v * v + d * d + c * c - 1.0,
    )
