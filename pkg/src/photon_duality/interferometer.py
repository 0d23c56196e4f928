"""Mach-Zehnder model: fringes, visibility fitting, arm blocking, arm rotations.

The recombiner is an ideal lossless 50/50 splitter.  With relative arm phase
``phi`` applied to arm A, the bright-port detection probability is

    p(phi) = 0.5 * || e^{i phi} c_a |phi_a>  +  c_b |phi_b> ||^2
           = 0.5 * (1 + V cos(phi + theta0)),   theta0 = arg(c_a conj(c_b) conj(gamma))

and the second port carries 1 - p.  Port 1 is the "+" combination; only
relative phases are physically meaningful.  Phases are plain floats in
radians throughout (reduced mod 2*pi for reporting only, never on storage).

Visibility is extracted from a scan by linear least squares on the basis
{1, cos phi, sin phi}, which solves the model form exactly and degrades
gracefully under shot noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .states import MATRIX_ATOL, InternalState, PathLabel, TwoPathState

DEFAULT_PHASE_POINTS = 64
# A scan must cover at least this fraction of a full period to be fittable.
MIN_SPAN = 2.0 * math.pi * 7.0 / 8.0


def phase_grid(n: int = DEFAULT_PHASE_POINTS) -> np.ndarray:
    """Uniform grid of n phases on [0, 2*pi), endpoint excluded."""
    if n < 8:
        raise ValueError(f"need at least 8 phase points, got {n}")
    return np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)


@dataclass(frozen=True, eq=False)
class FringeScan:
    """Detection probability sampled (or evaluated exactly) over a phase grid.

    ``shots_per_point`` is 0 for exact scans and >= 1 for Monte Carlo ones;
    ``noisy`` must agree with it.
    """

    phases: np.ndarray
    probabilities: np.ndarray
    noisy: bool
    shots_per_point: int

    def __post_init__(self):
        phases = np.array(self.phases, dtype=np.float64)
        probs = np.array(self.probabilities, dtype=np.float64)
        if phases.ndim != 1 or phases.shape != probs.shape:
            raise ValueError("phases and probabilities must be matching 1-D arrays")
        if phases.size < 8:
            raise ValueError(f"a scan needs at least 8 points, got {phases.size}")
        if not np.all(np.isfinite(phases)) or not np.all(np.isfinite(probs)):
            raise ValueError("scan contains non-finite values")
        if np.any(np.diff(phases) <= 0.0):
            raise ValueError("phases must be strictly increasing")
        if np.any(probs < 0.0) or np.any(probs > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.noisy != (self.shots_per_point > 0):
            raise ValueError("noisy flag inconsistent with shots_per_point")
        if self.shots_per_point < 0:
            raise ValueError("shots_per_point must be >= 0")
        phases.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "probabilities", probs)


def _port_amplitudes(s: TwoPathState, phases: np.ndarray, port: int) -> np.ndarray:
    sign = 1.0 if port == 1 else -1.0
    return (
        np.exp(1j * phases)[:, None] * s.c_a * s.phi_a.amplitudes[None, :]
        + sign * s.c_b * s.phi_b.amplitudes[None, :]
    )


def detection_probabilities(s: TwoPathState, phases: np.ndarray, port: int = 1) -> np.ndarray:
    """Exact detection probabilities at the chosen output port over a grid."""
    if port not in (1, 2):
        raise ValueError(f"port must be 1 or 2, got {port}")
    phases = np.asarray(phases, dtype=np.float64)
    amps = _port_amplitudes(s, phases, port)
    p = 0.5 * np.sum(np.abs(amps) ** 2, axis=1)
    return np.clip(p, 0.0, 1.0)


def detection_probability(s: TwoPathState, phi: float, port: int = 1) -> float:
    """Exact detection probability at one phase setting."""
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    return float(detection_probabilities(s, np.array([phi]), port)[0])


def fringe_scan(s: TwoPathState, phases: np.ndarray | None = None) -> FringeScan:
    """Exact (noise-free) fringe scan; defaults to 64 uniform points on [0, 2*pi)."""
    if phases is None:
        phases = phase_grid()
    return FringeScan(
        phases=phases,
        probabilities=detection_probabilities(s, phases),
        noisy=False,
        shots_per_point=0,
    )


def sample_fringe_scan(
    s: TwoPathState,
    shots_per_point: int,
    rng: np.random.Generator,
    phases: np.ndarray | None = None,
) -> FringeScan:
    """Monte Carlo fringe scan: binomial counts at each phase point."""
    if shots_per_point < 1:
        raise ValueError(f"shots_per_point must be >= 1, got {shots_per_point}")
    if phases is None:
        phases = phase_grid()
    p = detection_probabilities(s, np.asarray(phases, dtype=np.float64))
    counts = rng.binomial(shots_per_point, p)
    return FringeScan(
        phases=phases,
        probabilities=counts / float(shots_per_point),
        noisy=True,
        shots_per_point=int(shots_per_point),
    )


class FringeFit(NamedTuple):
    v_hat: float
    theta0_hat: float
    offset: float
    amplitude: float
    rmse: float


def fit_fringe(scan: FringeScan) -> FringeFit:
    """Least-squares fit of p(phi) = A + B cos(phi + theta) to a scan.

    Returns the clamped contrast ``v_hat = B/A`` in [0, 1] along with the
    fitted phase origin, offset, raw amplitude, and fit RMSE.  Raises on
    scans that cannot carry a fringe (insufficient span, offset ~ 0).
    """
    span = float(scan.phases[-1] - scan.phases[0])
    if span < MIN_SPAN:
        raise ValueError(
            f"scan spans {span:.4f} rad; need >= {MIN_SPAN:.4f} to fit a fringe"
        )
    design = np.column_stack(
        [np.ones_like(scan.phases), np.cos(scan.phases), np.sin(scan.phases)]
    )
    coef, *_ = np.linalg.lstsq(design, scan.probabilities, rcond=None)
    a0, bc, bs = (float(c) for c in coef)
    if not all(math.isfinite(c) for c in (a0, bc, bs)) or abs(a0) < 1e-9:
        raise ValueError("degenerate scan: fitted offset is ~0, no fringe to extract")
    amplitude = math.hypot(bc, bs)
    theta0 = math.atan2(-bs, bc)
    residuals = scan.probabilities - design @ coef
    rmse = float(np.sqrt(np.mean(residuals**2)))
    v_hat = min(1.0, max(0.0, amplitude / a0))
    return FringeFit(v_hat=v_hat, theta0_hat=theta0, offset=a0, amplitude=amplitude, rmse=rmse)


def extract_visibility(scan: FringeScan) -> tuple[float, float]:
    """(v_hat, theta0_hat) of a scan; see ``fit_fringe`` for the details."""
    fit = fit_fringe(scan)
    return fit.v_hat, fit.theta0_hat


def block_arm(s: TwoPathState, blocked: PathLabel) -> float:
    """Probability that the photon survives when one arm is blocked.

    Blocking A leaves p_b, blocking B leaves p_a; together the two blocking
    runs recover the path probabilities used for distinguishability.
    """
    if blocked == PathLabel.A:
        return abs(s.c_b) ** 2
    if blocked == PathLabel.B:
        return abs(s.c_a) ** 2
    raise ValueError(f"unknown arm {blocked!r}")


@dataclass(frozen=True, eq=False)
class ArmUnitary:
    """A d x d unitary acting on one arm's internal state only."""

    matrix: np.ndarray
    arm: PathLabel

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"arm unitary must be square, got shape {mat.shape}")
        dev = np.max(np.abs(mat @ mat.conj().T - np.eye(mat.shape[0])))
        if dev > MATRIX_ATOL:
            raise ValueError(f"matrix is not unitary (deviation {dev:.3e})")
        if not isinstance(self.arm, PathLabel):
            raise ValueError(f"arm must be a PathLabel, got {self.arm!r}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def apply_arm_unitary(s: TwoPathState, u: ArmUnitary) -> TwoPathState:
    """Rotate one arm's internal state; path amplitudes (and hence D) untouched."""
    if u.matrix.shape[0] != s.dim:
        raise ValueError(
            f"unitary dimension {u.matrix.shape[0]} does not match state dimension {s.dim}"
        )
    rotated = {
        PathLabel.A: (InternalState(u.matrix @ s.phi_a.amplitudes), s.phi_b),
        PathLabel.B: (s.phi_a, InternalState(u.matrix @ s.phi_b.amplitudes)),
    }[u.arm]
    return TwoPathState(s.c_a, s.c_b, rotated[0], rotated[1])


def internal_rotation(angle: float) -> np.ndarray:
    """Real 2 x 2 rotation; rotating one arm by beta takes |gamma| to |cos beta|
    when both arms start aligned.  Handy for dialing in a target overlap."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)
