"""Fourier matrices of finite abelian groups."""

import numpy as np

from .abelian import AbelianGroup


def root_of_unity(turns) -> np.ndarray:
    """exp(2 pi i t) for angles t given in turns."""
    return np.exp(2j * np.pi * np.asarray(turns, dtype=float))


def fourier_matrix(X: AbelianGroup) -> np.ndarray:
    """Character table F_X with F[x, y] = prod_j exp(2 pi i x_j y_j / n_j).

    Angles are accumulated in turns and reduced mod 1 before exponentiating,
    so F_X equals the Kronecker product of the cyclic factors in canonical
    order.
    """
    res = X.residues()
    turns = np.zeros((X.size, X.size))
    for j, n in enumerate(X.orders):
        turns += np.outer(res[:, j], res[:, j]) % n / n
    return root_of_unity(turns % 1.0)
