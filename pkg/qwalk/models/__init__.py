"""Magic-unitary matrix models and their structural checks."""

from .magic import MagicModel, deform, dual, dump_model, fourier_model, from_hadamard, load_model, tensor_model
from .checks import block_ranks, check_magic, check_positive, check_projective, verify_wreath_structure
from .reports import MagicReport, PositivityReport, ProjectiveReport, WreathReport

__all__ = [
    'MagicModel',
    'MagicReport',
    'PositivityReport',
    'ProjectiveReport',
    'WreathReport',
    'block_ranks',
    'check_magic',
    'check_positive',
    'check_projective',
    'deform',
    'dual',
    'dump_model',
    'fourier_model',
    'from_hadamard',
    'load_model',
    'tensor_model',
    'verify_wreath_structure',
]
