"""Transfer matrices, truncated moments and Haar moments of matrix models."""

from .transfer import (
    ExponentWord,
    TransferMatrix,
    dual_transfer_moment,
    duality_check,
    rescaled_truncated_moments,
    transfer_matrix,
    transfer_operator,
    truncated_moment,
)
from .haar import METHODS, cesaro_profile, cesaro_tail_bound, haar_moment, transfer_spectrum
from .deformed import phase_sum_moment, tensor_bound_check
from .reports import CSV_COLUMNS, BoundReport, DualityReport, MomentReport

__all__ = [
    'CSV_COLUMNS',
    'METHODS',
    'BoundReport',
    'DualityReport',
    'ExponentWord',
    'MomentReport',
    'TransferMatrix',
    'cesaro_profile',
    'cesaro_tail_bound',
    'dual_transfer_moment',
    'duality_check',
    'haar_moment',
    'phase_sum_moment',
    'rescaled_truncated_moments',
    'tensor_bound_check',
    'transfer_matrix',
    'transfer_operator',
    'transfer_spectrum',
]
