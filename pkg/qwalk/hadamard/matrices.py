"""Complex Hadamard matrices and their deformed tensor products."""

import logging
from typing import Union

import numpy as np

from qwalk.errors import HadamardValidationError, ShapeMismatchError

from .phase import PhaseMatrix, phase_array
from .reports import HadamardReport

logger = logging.getLogger(__name__)

SIDES = ("right", "left")


def validate_hadamard(H, tol: float = 1e-9, raise_on_fail: bool = False) -> HadamardReport:
    """Check unit-modulus entries and pairwise orthogonal rows.

    Args:
        H: Square complex matrix
        tol: Acceptance threshold for both defects
        raise_on_fail: Raise instead of returning a failing report

    Returns:
        HadamardReport with both defects

    Raises:
        ShapeMismatchError: If H is not square
        HadamardValidationError: If raise_on_fail and H is not Hadamard
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ShapeMismatchError(f"Hadamard matrix must be square, got shape {H.shape}")
    n = H.shape[0]
    modulus = float(np.max(np.abs(np.abs(H) - 1.0))) if n else 0.0
    gram = H @ H.conj().T
    off = gram - np.diag(np.diag(gram))
    orthogonality = float(np.max(np.abs(off))) if n > 1 else 0.0
    report = HadamardReport(
        is_hadamard=modulus <= tol and orthogonality <= tol,
        dimension=n,
        max_modulus_defect=modulus,
        max_orthogonality_defect=orthogonality,
        tol=tol,
    )
    if raise_on_fail and not report.is_hadamard:
        raise HadamardValidationError(
            f"not Hadamard: modulus defect {modulus:.3e}, orthogonality defect {orthogonality:.3e}"
        )
    return report


def deformed_tensor(H, K, Q: Union[PhaseMatrix, np.ndarray], side: str = "right") -> np.ndarray:
    """Deformed tensor product of Hadamard matrices.

    Rows are (i, a), columns (j, b), flattened X outer. The right product has
    entries Q_ib H_ij K_ab, the left product Q_ja H_ij K_ab.

    Raises:
        ShapeMismatchError: If Q is not M x N or side is unknown
    """
    H = np.asarray(H, dtype=complex)
    K = np.asarray(K, dtype=complex)
    q = phase_array(Q)
    M, N = H.shape[0], K.shape[0]
    if H.shape != (M, M) or K.shape != (N, N):
        raise ShapeMismatchError(f"H and K must be square, got {H.shape} and {K.shape}")
    if q.shape != (M, N):
        raise ShapeMismatchError(f"Q has shape {q.shape}, expected {(M, N)}")
    if side == "right":
        W = np.einsum("ib,ij,ab->iajb", q, H, K)
    elif side == "left":
        W = np.einsum("ja,ij,ab->iajb", q, H, K)
    else:
        raise ShapeMismatchError(f"side must be one of {SIDES}, got {side!r}")
    return W.reshape(M * N, M * N)


def gram_quantities(H) -> np.ndarray:
    """C[a, b, c, d] = (1/N) <H_a / H_b, H_c / H_d> for the rows of H."""
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    quotients = H[:, None, :] / H[None, :, :]
    return np.einsum("abk,cdk->abcd", quotients, quotients.conj()) / n
