"""Structural checks on magic models."""

import logging
from typing import Optional

import numpy as np

from qwalk.config import get_policy
from qwalk.errors import ModelInvariantError, ShapeMismatchError
from qwalk.groups import AbelianGroup

from .magic import MagicModel, dual
from .reports import MagicReport, PositivityReport, ProjectiveReport, WreathReport

logger = logging.getLogger(__name__)


def check_magic(U: MagicModel, tol: Optional[float] = None, raise_on_fail: bool = False) -> MagicReport:
    """Check self-adjointness, idempotency and row/column sums of every block.

    Args:
        U: Model to check
        tol: Defect threshold (default from config)
        raise_on_fail: Raise ModelInvariantError instead of reporting

    Returns:
        MagicReport with the worst defect per invariant
    """
    tol = get_policy().tolerances.magic if tol is None else tol
    defects = U.defects()
    report = MagicReport(passed=max(defects.values()) <= tol, model=U.name, tol=tol, worst_defects=defects)
    if not report.passed:
        logger.warning(f"check_magic: {U.name} fails at tol={tol:g}: {defects}")
        if raise_on_fail:
            raise ModelInvariantError(f"{U.name} is not magic: {defects}")
    return report


def check_projective(U: MagicModel, tol: Optional[float] = None) -> ProjectiveReport:
    """Magic check of U and, for square models, of its flip dual."""
    own = check_magic(U, tol)
    flipped = check_magic(dual(U), tol) if U.is_square else None
    passed = own.passed and (flipped is None or flipped.passed)
    return ProjectiveReport(passed=passed, model=own, dual=flipped)


def check_positive(U: MagicModel, p_max: int, tol: Optional[float] = None) -> PositivityReport:
    """True iff every entry of T_p is >= -tol for all p <= p_max."""
    # moments builds on models, so the transfer matrix is imported here
    from qwalk.moments.transfer import transfer_matrix

    if p_max < 1:
        raise ValueError("p_max must be at least 1")
    tol = get_policy().tolerances.positivity if tol is None else tol
    worst, worst_p, max_imag = np.inf, 1, 0.0
    for p in range(1, p_max + 1):
        T = transfer_matrix(U, p).matrix
        low = float(np.min(T.real))
        max_imag = max(max_imag, float(np.max(np.abs(T.imag))))
        if low < worst:
            worst, worst_p = low, p
    return PositivityReport(
        positive=worst >= -tol,
        worst_entry=worst,
        worst_p=worst_p,
        p_max=p_max,
        max_imaginary=max_imag,
    )


def verify_wreath_structure(
    W: MagicModel,
    X: AbelianGroup,
    Y: AbelianGroup,
    tol: Optional[float] = None,
) -> WreathReport:
    """Check the block-sum factorization of a model indexed by X x Y.

    (1) sum_a W_{ia,jb} does not depend on b.
    (2) sum_j W_{ia,jb} depends on (i, a - b) only.
    """
    tol = get_policy().tolerances.magic if tol is None else tol
    M, N = X.size, Y.size
    if W.index_size != M * N:
        raise ShapeMismatchError(f"model index size {W.index_size} is not |X||Y| = {M * N}")
    D = W.block_dim
    blocks = W.blocks.reshape(M, N, M, N, D, D)

    over_a = blocks.sum(axis=1)
    column_dev = float(np.max(np.abs(over_a - over_a[:, :, :1])))

    over_j = blocks.sum(axis=2)
    sub = Y.sub_table()
    # representative for difference a - b is the pair (a - b, 0)
    reference = over_j[:, sub, 0]
    row_dev = float(np.max(np.abs(over_j - reference)))

    return WreathReport(
        passed=max(column_dev, row_dev) <= tol,
        tol=tol,
        column_sum_deviation=column_dev,
        row_sum_deviation=row_dev,
    )


def block_ranks(U: MagicModel, tol: float = 1e-8) -> np.ndarray:
    """Numerical rank of every block."""
    return np.linalg.matrix_rank(U.blocks, tol=tol)
