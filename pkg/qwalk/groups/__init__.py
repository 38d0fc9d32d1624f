"""Finite abelian groups and their Fourier matrices."""

from .abelian import AbelianGroup, GroupElt, group_arithmetic
from .fourier import fourier_matrix, root_of_unity

__all__ = [
    'AbelianGroup',
    'GroupElt',
    'group_arithmetic',
    'fourier_matrix',
    'root_of_unity',
]
