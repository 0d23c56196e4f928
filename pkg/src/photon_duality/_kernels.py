"""Hot inner loop of the likelihood-maximizing reconstruction.

The iteration sandwiches the state between reweighting operators built from
observed frequencies (R rho R, renormalized), falling back to a diluted step
(I + eps R) rho (I + eps R) whenever the full step would lower the
likelihood; only improving steps are ever accepted.

Two interchangeable implementations live here: an explicit-loop version
compiled with numba, and a vectorized pure-numpy version.  Selection is by
the ``PHOTON_DUALITY_BACKEND`` environment variable ("auto", "numba" or
"numpy"; default "auto" = numba when importable).  The variable is read at
call time, so tests and benchmarks can flip backends freely.  Both paths
implement the identical update rule; results agree to float-roundoff.
"""

from __future__ import annotations

import os

import numpy as np

BACKEND_ENV = "PHOTON_DUALITY_BACKEND"

# Model probabilities are floored here before dividing or taking logs.
P_FLOOR = 1e-12
# Dilution retreats by halving eps from 0.5 down to this before giving up.
EPS_MIN = 1e-8
# Steps whose likelihood change is within this many ulps of the current
# log-likelihood count as non-decreasing: near convergence the true (always
# non-negative) gain of a full step drops below what float64 can resolve,
# and rejecting such steps would freeze the state short of the optimum.
_ULP_SLACK = 16.0 * 2.220446049250313e-16

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    _HAVE_NUMBA = False


def available_backends() -> tuple[str, ...]:
    return ("numba", "numpy") if _HAVE_NUMBA else ("numpy",)


def active_backend() -> str:
    """Backend the next ``mle_loop`` call will use."""
    requested = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if requested in ("", "auto"):
        return "numba" if _HAVE_NUMBA else "numpy"
    if requested == "numpy":
        return "numpy"
    if requested == "numba":
        if not _HAVE_NUMBA:
            raise RuntimeError(f"{BACKEND_ENV}=numba but numba is not importable")
        return "numba"
    raise RuntimeError(f"{BACKEND_ENV} must be 'auto', 'numba' or 'numpy', got {requested!r}")


def mle_loop(
    projs: np.ndarray,
    counts: np.ndarray,
    freqs: np.ndarray,
    rho0: np.ndarray,
    max_iter: int,
    tol: float,
) -> tuple[np.ndarray, int, float, bool]:
    """Run the fixed-point iteration on the active backend.

    projs:  (K, n, n) stacked Hermitian outcome projectors.
    counts: (K,) observed counts (log-likelihood weights).
    freqs:  (K,) per-setting outcome frequencies (reweighting numerators).
    rho0:   (n, n) starting state.
    Returns (rho, iterations, log_likelihood, converged).
    """
    args = (
        np.ascontiguousarray(projs, dtype=np.complex128),
        np.ascontiguousarray(counts, dtype=np.float64),
        np.ascontiguousarray(freqs, dtype=np.float64),
        np.ascontiguousarray(rho0, dtype=np.complex128),
        int(max_iter),
        float(tol),
    )
    if active_backend() == "numba":
        rho, it, ll, conv = _mle_loop_numba(*args)
    else:
        rho, it, ll, conv = _mle_loop_numpy(*args)
    return rho, int(it), float(ll), bool(conv)


def _mle_loop_numpy(projs, counts, freqs, rho0, max_iter, tol):
    eye = np.eye(rho0.shape[0], dtype=np.complex128)
    mask = counts > 0.0

    def probs(rho):
        return np.maximum(np.einsum("kab,ba->k", projs, rho).real, P_FLOOR)

    def loglik(p):
        return float(np.sum(counts[mask] * np.log(p[mask])))

    def sandwich(op, rho):
        cand = op @ rho @ op
        cand = 0.5 * (cand + cand.conj().T)
        return cand / np.trace(cand).real

    rho = rho0.copy()
    p = probs(rho)
    ll = loglik(p)
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        slack = _ULP_SLACK * (1.0 + abs(ll))
        reweight = np.einsum("k,kab->ab", freqs / p, projs)
        cand = sandwich(reweight, rho)
        p_cand = probs(cand)
        ll_cand = loglik(p_cand)
        if ll_cand < ll - slack:
            eps = 0.5
            improved = False
            while eps >= EPS_MIN:
                cand = sandwich(eye + eps * reweight, rho)
                p_cand = probs(cand)
                ll_cand = loglik(p_cand)
                if ll_cand >= ll - slack:
                    improved = True
                    break
                eps *= 0.5
            if not improved:
                converged = True  # no admissible step improves: gain is below tol
                break
        gain = max(ll_cand - ll, 0.0)
        rho, p, ll = cand, p_cand, ll_cand
        if gain < tol:
            converged = True
            break
    return rho, iterations, ll, converged


def _mle_loop_loops(projs, counts, freqs, rho0, max_iter, tol):  # pragma: no cover
    # Compiled by numba; the numpy path above is the readable reference.
    K = projs.shape[0]
    n = rho0.shape[0]
    rho = rho0.copy()
    eye = np.eye(n, dtype=np.complex128)
    p = np.empty(K, dtype=np.float64)

    def _probs(projs, rho, p):
        K = projs.shape[0]
        n = rho.shape[0]
        for k in range(K):
            acc = 0.0
            for a in range(n):
                for b in range(n):
                    acc += (projs[k, a, b] * rho[b, a]).real
            p[k] = acc if acc > P_FLOOR else P_FLOOR

    def _loglik(counts, p):
        ll = 0.0
        for k in range(counts.shape[0]):
            if counts[k] > 0.0:
                ll += counts[k] * np.log(p[k])
        return ll

    def _sandwich(op, rho):
        cand = np.dot(np.dot(op, rho), op)
        cand = 0.5 * (cand + cand.conj().T)
        tr = 0.0
        for a in range(cand.shape[0]):
            tr += cand[a, a].real
        return cand / tr

    _probs(projs, rho, p)
    ll = _loglik(counts, p)
    iterations = 0
    converged = False
    p_cand = np.empty(K, dtype=np.float64)
    for iterations in range(1, max_iter + 1):
        slack = _ULP_SLACK * (1.0 + abs(ll))
        reweight = np.zeros((n, n), dtype=np.complex128)
        for k in range(K):
            w = freqs[k] / p[k]
            for a in range(n):
                for b in range(n):
                    reweight[a, b] += w * projs[k, a, b]
        cand = _sandwich(reweight, rho)
        _probs(projs, cand, p_cand)
        ll_cand = _loglik(counts, p_cand)
        if ll_cand < ll - slack:
            eps = 0.5
            improved = False
            while eps >= EPS_MIN:
                cand = _sandwich(eye + eps * reweight, rho)
                _probs(projs, cand, p_cand)
                ll_cand = _loglik(counts, p_cand)
                if ll_cand >= ll - slack:
                    improved = True
                    break
                eps *= 0.5
            if not improved:
                converged = True
                break
        gain = ll_cand - ll
        if gain < 0.0:
            gain = 0.0
        rho = cand
        for k in range(K):
            p[k] = p_cand[k]
        ll = ll_cand
        if gain < tol:
            converged = True
            break
    return rho, iterations, ll, converged


if _HAVE_NUMBA:
    _mle_loop_numba = njit(cache=True)(_mle_loop_loops)
else:  # pragma: no cover
    _mle_loop_numba = None
