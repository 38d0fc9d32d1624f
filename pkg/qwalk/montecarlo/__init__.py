"""Monte Carlo over the torus: Gram matrices, moment estimates and spectra."""

from .gram import (
    GramSample,
    Histogram,
    chunk_generator,
    gram_stream,
    histogram_csv,
    mc_moment,
    mc_spectrum,
    reference_law,
    sample_gram,
    spectrum_ks,
)

__all__ = [
    'GramSample',
    'Histogram',
    'chunk_generator',
    'gram_stream',
    'histogram_csv',
    'mc_moment',
    'mc_spectrum',
    'reference_law',
    'sample_gram',
    'spectrum_ks',
]
