"""Haar moments of the character: spectral and Cesaro limits of T_p."""

import logging
import time
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator

from qwalk.config import get_policy
from qwalk.errors import EigenSolverError
from qwalk.models.magic import MagicModel

from .reports import MomentReport
from .transfer import transfer_matrix, transfer_operator

logger = logging.getLogger(__name__)

METHODS = ("spectral", "cesaro")


def transfer_spectrum(T: np.ndarray) -> np.ndarray:
    """Eigenvalues of T, using the Hermitian solver when T is Hermitian."""
    try:
        if np.allclose(T, T.conj().T, atol=1e-12, rtol=0.0):
            return scipy.linalg.eigvalsh(T).astype(complex)
        return scipy.linalg.eigvals(T)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"eigensolve of a {T.shape[0]}x{T.shape[0]} transfer matrix failed: {exc}") from exc


def cesaro_tail_bound(eigenvalues: np.ndarray, rounds: int, tol: float) -> float:
    """Bound on |Cesaro average - fixed-space dimension| after `rounds` terms.

    Tr(T^r) = sum of lambda^r, so every eigenvalue away from 1 contributes
    lambda (1 - lambda^R) / ((1 - lambda) R) to the average.
    """
    far = eigenvalues[np.abs(eigenvalues - 1.0) >= tol]
    if far.size == 0:
        return 0.0
    terms = np.abs(far) * np.abs(1.0 - far ** rounds) / (np.abs(1.0 - far) * rounds)
    return float(np.sum(terms))


def _running_averages(T: np.ndarray, rounds: int) -> np.ndarray:
    power = np.eye(T.shape[0], dtype=complex)
    traces = np.empty(rounds)
    for r in range(rounds):
        power = power @ T
        traces[r] = np.trace(power).real
    return np.cumsum(traces) / np.arange(1, rounds + 1)


def _sampled_averages(op: LinearOperator, rounds: int, samples: int, seed: int) -> Tuple[np.ndarray, float, int]:
    """Running Cesaro averages with Tr(T^r) read off sample vectors.

    With at least as many samples as rows the standard basis is used and the
    traces are exact; otherwise Rademacher vectors give unbiased estimates.
    """
    rows = op.shape[0]
    exact = samples >= rows
    if exact:
        Z = np.eye(rows)
    else:
        Z = np.random.default_rng(seed).choice([-1.0, 1.0], size=(rows, samples))
    W = Z.astype(complex)
    traces = np.empty((rounds, Z.shape[1]))
    for r in range(rounds):
        W = op.matmat(W)
        traces[r] = np.einsum("ij,ij->j", Z, W).real
    per_vector = np.cumsum(traces, axis=0) / np.arange(1, rounds + 1)[:, None]
    if exact:
        return per_vector.sum(axis=1), 0.0, rows
    stderr = float(np.std(per_vector[-1], ddof=1) / np.sqrt(samples))
    return per_vector.mean(axis=1), stderr, samples


def cesaro_profile(U: MagicModel, p: int, rounds: int) -> np.ndarray:
    """Running Cesaro averages (1/R) sum_{r <= R} Tr(T_p^r) for R = 1..rounds."""
    return _running_averages(transfer_matrix(U, p).matrix, rounds)


def haar_moment(
    U: MagicModel,
    p: int,
    method: str = "spectral",
    *,
    rounds: Optional[int] = None,
    tol: Optional[float] = None,
    dense_rows: Optional[int] = None,
    samples: Optional[int] = None,
    seed: int = 0,
) -> MomentReport:
    """Haar moment of the character from the transfer matrix T_p.

    spectral: number of eigenvalues with |lambda - 1| < tol.
    cesaro: (1/R) sum_{r=1..R} Tr(T_p^r); the uncertainty is the magnitude of
    the last increment. Up to `dense_rows` rows T_p is built densely and the
    report carries the spectral tail bound. Larger T_p are applied matrix-free
    with the traces estimated from `samples` Rademacher vectors, and the
    uncertainty also covers the trace standard error.

    Raises:
        ValueError: If p < 1, the method is unknown or samples < 2
        EigenSolverError: If the eigensolve fails
        ResourceCapExceeded: If n^p exceeds the dense row cap (spectral) or
            the Cesaro row cap
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    policy = get_policy()
    tol = policy.tolerances.spectral if tol is None else tol
    dense_rows = policy.caps.transfer_rows if dense_rows is None else dense_rows
    rows = U.index_size ** p
    started = time.perf_counter()
    params = {"tol": tol}

    if method == "spectral" or rows <= dense_rows:
        T = transfer_matrix(U, p, row_cap=dense_rows).matrix
        eigenvalues = transfer_spectrum(T)
        extras = {"spectral_radius": float(np.max(np.abs(eigenvalues)))}
    if method == "spectral":
        value = float(np.count_nonzero(np.abs(eigenvalues - 1.0) < tol))
        uncertainty = 0.0
    else:
        rounds = policy.sampling.cesaro_rounds if rounds is None else rounds
        params["rounds"] = rounds
        if rows <= dense_rows:
            averages = _running_averages(T, rounds)
            extras["tail_bound"] = cesaro_tail_bound(eigenvalues, rounds, tol)
            stderr = 0.0
        else:
            samples = policy.sampling.cesaro_samples if samples is None else samples
            if samples < 2:
                raise ValueError("matrix-free Cesaro needs at least 2 samples")
            averages, stderr, used = _sampled_averages(transfer_operator(U, p), rounds, samples, seed)
            params.update(samples=used, seed=seed)
            extras = {"matrix_free": True, "trace_stderr": stderr}
        value = float(averages[-1])
        increment = float(abs(averages[-1] - averages[-2])) if rounds > 1 else 0.0
        uncertainty = max(increment, stderr)

    elapsed = (time.perf_counter() - started) * 1000
    logger.info(f"haar_moment: {U.name}, p={p}, method={method}, value={value:.6g}")
    return MomentReport(
        method=method,
        model=U.name,
        p=p,
        params=params,
        value=value,
        uncertainty=uncertainty,
        seed=params.get("seed"),
        wall_time_ms=elapsed,
        extras=extras,
    )
