"""Complex Hadamard matrices, parameter matrices Q and deformed products."""

from .matrices import SIDES, deformed_tensor, gram_quantities, validate_hadamard
from .phase import (
    PhaseMatrix,
    dephase,
    dump_phase_matrix,
    generic_q,
    load_phase_matrix,
    phase_array,
)
from .reports import HadamardReport

__all__ = [
    'SIDES',
    'HadamardReport',
    'PhaseMatrix',
    'deformed_tensor',
    'dephase',
    'dump_phase_matrix',
    'generic_q',
    'gram_quantities',
    'load_phase_matrix',
    'phase_array',
    'validate_hadamard',
]
