"""Two-path single-photon state algebra.

A photon split over two interferometer arms A and B is described by a pair of
path amplitudes (c_a, c_b) with |c_a|^2 + |c_b|^2 = 1, each arm tagging the
photon with a normalized internal state (polarization, ...) of a common
dimension d >= 2:

    |state> = c_a |A> (x) |phi_a>  +  c_b |B> (x) |phi_b>

This module owns construction and validation of such states, the internal
overlap gamma = <phi_a|phi_b>, Schmidt decomposition of the path/internal
bipartition, density matrices, partial traces, and two-qubit concurrence.

Tensor convention (fixed throughout the package): path-major ordering. A
joint vector index is path*d + internal, so arm A occupies the first d
entries of a 2d vector and the top-left d x d block of a density matrix.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from enum import Enum

import numpy as np

# Constructors reject inputs beyond this; no silent renormalization.
NORM_ATOL = 1e-9
# Consistency of derived quantities (Hermiticity, traces, Schmidt weights).
MATRIX_ATOL = 1e-10
# Eigenvalue slack below zero that still counts as a physical density matrix.
PSD_ATOL = 1e-8


class PathLabel(Enum):
    """The two interferometer arms."""

    A = "A"
    B = "B"


def _as_readonly_complex(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D amplitude vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError(f"{name} contains non-finite amplitudes")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class InternalState:
    """Normalized amplitude vector for the photon's internal degrees of freedom.

    The dimension d = len(amplitudes) is fixed per state and must be >= 2.
    Construction rejects vectors whose Euclidean norm deviates from 1 by more
    than ``NORM_ATOL``; nothing is renormalized behind the caller's back.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = _as_readonly_complex(self.amplitudes, "internal state")
        if arr.size < 2:
            raise ValueError(f"internal state needs dimension >= 2, got {arr.size}")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"internal state norm is {norm!r}, expected 1 within {NORM_ATOL}")
        object.__setattr__(self, "amplitudes", arr)

    def __eq__(self, other):
        if not isinstance(other, InternalState):
            return NotImplemented
        return np.array_equal(self.amplitudes, other.amplitudes)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class TwoPathState:
    """Pure state of one photon over two paths with internal tags.

    ``c_a`` and ``c_b`` are the path amplitudes, normalized so that
    |c_a|^2 + |c_b|^2 = 1 (within ``NORM_ATOL``); ``phi_a`` and ``phi_b`` are
    the internal states carried along each arm and must share one dimension.
    Either amplitude may be zero; the internal states are kept regardless, so
    the overlap stays well defined.
    """

    c_a: complex
    c_b: complex
    phi_a: InternalState
    phi_b: InternalState

    def __post_init__(self):
        object.__setattr__(self, "c_a", complex(self.c_a))
        object.__setattr__(self, "c_b", complex(self.c_b))
        for arm in ("phi_a", "phi_b"):
            value = getattr(self, arm)
            if not isinstance(value, InternalState):
                object.__setattr__(self, arm, InternalState(value))
        total = abs(self.c_a) ** 2 + abs(self.c_b) ** 2
        if abs(total - 1.0) > NORM_ATOL:
            raise ValueError(
                f"|c_a|^2 + |c_b|^2 = {total!r}, expected 1 within {NORM_ATOL}"
            )
        if self.phi_a.dim != self.phi_b.dim:
            raise ValueError(
                f"internal dimensions differ: {self.phi_a.dim} vs {self.phi_b.dim}"
            )

    @property
    def dim(self) -> int:
        """Internal dimension d shared by both arms."""
        return self.phi_a.dim


def internal_overlap(a: InternalState, b: InternalState) -> complex:
    """Conjugate-linear inner product <a|b> of two internal states."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def overlap(s: TwoPathState) -> complex:
    """Partial correlation gamma = <phi_a|phi_b> between the two arms' tags.

    |gamma| = 1 means the arms are unmarked (full fringe capability);
    |gamma| = 0 means the internal state fully marks the path.
    """
    return internal_overlap(s.phi_a, s.phi_b)


def coefficient_matrix(s: TwoPathState) -> np.ndarray:
    """2 x d matrix M with row A = c_a * phi_a and row B = c_b * phi_b.

    Flattening M row-major gives the joint state vector in the path-major
    tensor basis.
    """
    return np.vstack([s.c_a * s.phi_a.amplitudes, s.c_b * s.phi_b.amplitudes])


def state_vector(s: TwoPathState) -> np.ndarray:
    """Joint 2d state vector in the path-major basis."""
    return coefficient_matrix(s).reshape(-1)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Biorthogonal form of a two-path state.

    ``path_basis[k]`` (a 2-vector) and ``internal_basis[k]`` (a d-vector) are
    the k-th Schmidt pair; the coefficient matrix is reconstructed as
    sum_k lambda_k * outer(path_basis[k], internal_basis[k]).
    """

    lambda1: float
    lambda2: float
    path_basis: np.ndarray
    internal_basis: np.ndarray

    def __post_init__(self):
        if not (self.lambda1 >= self.lambda2 >= 0.0):
            raise ValueError(
                f"Schmidt coefficients must be descending and non-negative, "
                f"got ({self.lambda1}, {self.lambda2})"
            )
        weight = self.lambda1**2 + self.lambda2**2
        if abs(weight - 1.0) > MATRIX_ATOL * 100:
            raise ValueError(f"Schmidt weights sum to {weight!r}, expected 1")
        for name in ("path_basis", "internal_basis"):
            arr = np.asarray(getattr(self, name), dtype=np.complex128).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def schmidt_decompose(s: TwoPathState) -> SchmidtDecomposition:
    """Schmidt decomposition via SVD of the 2 x d coefficient matrix."""
    u, sv, vh = np.linalg.svd(coefficient_matrix(s))
    return SchmidtDecomposition(
        lambda1=float(sv[0]),
        lambda2=float(sv[1]),
        path_basis=u.T[:2],
        internal_basis=vh[:2],
    )


def concurrence_pure(sd: SchmidtDecomposition) -> float:
    """Pure-state concurrence 2*lambda1*lambda2, clipped into [0, 1]."""
    return min(1.0, max(0.0, 2.0 * sd.lambda1 * sd.lambda2))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """2d x 2d Hermitian, unit-trace operator in the path-major basis.

    Hermiticity and unit trace are always enforced.  Positivity (eigenvalues
    >= -PSD_ATOL) is checked by default; linear-inversion tomography passes
    ``check_positive=False`` because its output is allowed to dip below zero.
    """

    matrix: np.ndarray
    check_positive: InitVar[bool] = True

    def __post_init__(self, check_positive: bool):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        n = mat.shape[0]
        if n < 4 or n % 2 != 0:
            raise ValueError(f"expected a 2d x 2d matrix with d >= 2, got {n} x {n}")
        if not np.all(np.isfinite(mat.view(np.float64))):
            raise ValueError("density matrix contains non-finite entries")
        herm_err = np.max(np.abs(mat - mat.conj().T))
        if herm_err > MATRIX_ATOL:
            raise ValueError(f"density matrix not Hermitian (max deviation {herm_err:.3e})")
        trace_err = abs(np.trace(mat).real - 1.0) + abs(np.trace(mat).imag)
        if trace_err > MATRIX_ATOL:
            raise ValueError(f"density matrix trace deviates from 1 by {trace_err:.3e}")
        if check_positive and not _is_psd(mat, PSD_ATOL):
            raise ValueError(
                f"density matrix has eigenvalues below -{PSD_ATOL} (not physical)"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim_internal(self) -> int:
        return self.matrix.shape[0] // 2

    def is_physical(self, tol: float = PSD_ATOL) -> bool:
        return _is_psd(self.matrix, tol)


def _is_psd(mat: np.ndarray, tol: float) -> bool:
    return float(np.linalg.eigvalsh(mat)[0]) >= -tol


def to_density_matrix(s: TwoPathState) -> DensityMatrix:
    """Rank-1 projector onto the state in the path (x) internal basis."""
    psi = state_vector(s)
    return DensityMatrix(np.outer(psi, psi.conj()))


def partial_trace(rho: DensityMatrix, keep: str) -> np.ndarray:
    """Reduced matrix after tracing out one subsystem.

    ``keep`` is ``"path"`` (returns 2 x 2) or ``"internal"`` (returns d x d).
    The trace is preserved.
    """
    d = rho.dim_internal
    blocks = rho.matrix.reshape(2, d, 2, d)
    if keep == "path":
        return np.einsum("aibi->ab", blocks)
    if keep == "internal":
        return np.einsum("aiaj->ij", blocks)
    raise ValueError(f"keep must be 'path' or 'internal', got {keep!r}")


_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Two-qubit mixed-state concurrence from the spin-flip spectrum.

    C = max(0, sqrt(e1) - sqrt(e2) - sqrt(e3) - sqrt(e4)) with e_i the
    descending eigenvalues of rho * (Y(x)Y) conj(rho) (Y(x)Y).  Defined for
    d = 2 only.  Roundoff negatives in the spectrum (within the physicality
    tolerance) are clamped to zero; anything lower is rejected as
    non-physical input.

    The sqrt(e_i) are evaluated as singular values of A^dag (Y(x)Y) conj(A)
    with rho = A A^dag, which is the same spectrum without the precision
    loss of squaring: near-zero roots come out at ~1e-16 instead of ~1e-8.
    """
    if rho.matrix.shape[0] != 4:
        raise ValueError(
            f"Wootters concurrence needs a 4 x 4 matrix (d = 2), got {rho.matrix.shape}"
        )
    if not rho.is_physical():
        raise ValueError("Wootters concurrence input is not physical within tolerance")
    evals, vecs = np.linalg.eigh(rho.matrix)
    factor = vecs * np.sqrt(np.clip(evals, 0.0, None))
    roots = np.linalg.svd(factor.conj().T @ _YY @ factor.conj(), compute_uv=False)
    return min(1.0, max(0.0, float(roots[0] - roots[1] - roots[2] - roots[3])))


def pure_state_fidelity(rho: DensityMatrix, s: TwoPathState) -> float:
    """Fidelity <psi|rho|psi> of a density matrix against a known pure state."""
    psi = state_vector(s)
    return float(np.vdot(psi, rho.matrix @ psi).real)


def random_two_path_state(rng: np.random.Generator, dim: int = 2) -> TwoPathState:
    """Haar-random internal states with uniformly random path amplitudes."""

    def unit(n: int) -> np.ndarray:
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        return v / np.linalg.norm(v)

    c = unit(2)
    return TwoPathState(c[0], c[1], InternalState(unit(dim)), InternalState(unit(dim)))
