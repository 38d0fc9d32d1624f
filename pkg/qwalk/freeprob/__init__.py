"""Noncrossing partitions, free Poisson laws and the large-K walk law."""

from .partitions import (
    SetPartition,
    all_set_partitions,
    delta_pair,
    enumerate_nc,
    free_poisson_moment,
    kreweras,
    narayana_count,
)
from .laws import (
    AsymptoticLaw,
    DensityPiece,
    SpectralLaw,
    asymptotic_law,
    dilate,
    export_law_csv,
    free_poisson_law,
    law_cdf,
    law_moment,
    mixture,
    scale_mass,
)

__all__ = [
    'AsymptoticLaw',
    'DensityPiece',
    'SetPartition',
    'SpectralLaw',
    'all_set_partitions',
    'asymptotic_law',
    'delta_pair',
    'dilate',
    'enumerate_nc',
    'export_law_csv',
    'free_poisson_law',
    'free_poisson_moment',
    'kreweras',
    'law_cdf',
    'law_moment',
    'mixture',
    'narayana_count',
    'scale_mass',
]
