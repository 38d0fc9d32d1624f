"""qwalk: random walks on deformed Fourier quantum groups.

Exact, spectral, Monte Carlo and asymptotic computations of the character
moments of deformed Fourier matrix models.
"""

__version__ = "0.1.0"
