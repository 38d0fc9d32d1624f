"""theta-representations pi^k of Gamma_{X,Y} and the bridge to the matrix model."""

import logging
from typing import Callable, Iterable, Optional

import numpy as np

from qwalk.config import get_policy
from qwalk.errors import ShapeMismatchError
from qwalk.groups import fourier_matrix
from qwalk.hadamard import PhaseMatrix
from qwalk.models.magic import MagicModel

from .reports import ProbeReport, RepReport
from .semidirect import GammaContext, GeneratorLetter, t_word

logger = logging.getLogger(__name__)

ThetaTable = Callable[[PhaseMatrix], np.ndarray]


def theta_table(Q: PhaseMatrix) -> np.ndarray:
    """theta[i, c, k, e] = Q_{i,e-c} Q_{i-k,e} / (Q_{ie} Q_{i-k,e-c})."""
    q = Q.entries
    xsub, ysub = Q.x.sub_table(), Q.y.sub_table()
    i = np.arange(Q.x.size)[:, None, None, None]
    c = np.arange(Q.y.size)[None, :, None, None]
    k = np.arange(Q.x.size)[None, None, :, None]
    e = np.arange(Q.y.size)[None, None, None, :]
    e_c = ysub[e, c]
    i_k = xsub[i, k]
    return q[i, e_c] * q[i_k, e] / (q[i, e] * q[i_k, e_c])


def theta(Q: PhaseMatrix, i, c, k, e) -> complex:
    """Single value theta_{ic}^{ke}; group arguments may be indices or elements."""
    X, Y = Q.x, Q.y
    i_, k_ = X.index(X.coerce(i)), X.index(X.coerce(k))
    c_, e_ = Y.index(Y.coerce(c)), Y.index(Y.coerce(e))
    e_c = int(Y.sub_table()[e_, c_])
    i_k = int(X.sub_table()[i_, k_])
    q = Q.entries
    return complex(q[i_, e_c] * q[i_k, e_] / (q[i_, e_] * q[i_k, e_c]))


def _generator_matrix(Q: PhaseMatrix, table: np.ndarray, k: int, letter: GeneratorLetter) -> np.ndarray:
    N = Q.y.size
    ysub = Q.y.sub_table()
    e = np.arange(N)
    G = np.zeros((N, N), dtype=complex)
    G[ysub[e, letter.c], e] = table[letter.i, letter.c, k, e]
    return G


def rep_pi_k(
    Q: PhaseMatrix,
    k: int,
    word: Iterable[GeneratorLetter],
    theta_fn: Optional[ThetaTable] = None,
) -> np.ndarray:
    """pi^k of a word: product of the monomial matrices eps_e -> theta_{ic}^{ke} eps_{e-c}."""
    table = (theta_fn or theta_table)(Q)
    result = np.eye(Q.y.size, dtype=complex)
    for letter in word:
        result = result @ _generator_matrix(Q, table, k, letter)
    return result


def scalar_spread(matrix: np.ndarray) -> float:
    """Distance of a diagonal matrix from the scalars: max |D_ee - D_00|."""
    diagonal = np.diag(matrix)
    return float(np.max(np.abs(diagonal - diagonal[0])))


def faithfulness_probe(
    Q: PhaseMatrix,
    n_words: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
    max_exponent: int = 3,
    theta_fn: Optional[ThetaTable] = None,
) -> ProbeReport:
    """Check that sampled nontrivial T-words have a non-scalar image under some pi^k.

    T-words are products of ((-c)^(0) c^(i))^{R_ic} with R drawn uniformly
    from [-max_exponent, max_exponent] and conditioned to be nonzero.
    """
    ctx = GammaContext(Q.x, Q.y)
    M, N = Q.x.size, Q.y.size
    if (M - 1) * (N - 1) == 0:
        # T is trivial, there is no nontrivial word to sample
        logger.info(f"faithfulness_probe: T is trivial for {Q.x.label}, {Q.y.label}")
        return ProbeReport(passed=True, n_words=0, detected=0, seed=seed, tol=tol, min_spread=0.0)
    rng = np.random.default_rng(seed)
    detected, min_spread, max_off = 0, np.inf, 0.0
    undetected = []
    for _ in range(n_words):
        R = np.zeros((M - 1, N - 1), dtype=np.int64)
        while not R.any():
            R = rng.integers(-max_exponent, max_exponent + 1, size=(M - 1, N - 1))
        word = t_word(ctx, R)
        best = 0.0
        for k in range(M):
            image = rep_pi_k(Q, k, word, theta_fn)
            max_off = max(max_off, float(np.max(np.abs(image - np.diag(np.diag(image))))))
            best = max(best, scalar_spread(image))
        min_spread = min(min_spread, best)
        if best > tol:
            detected += 1
        else:
            undetected.append(R.tolist())
    if n_words == 0:
        min_spread = 0.0
    logger.info(f"faithfulness_probe: {detected}/{n_words} detected, min spread {min_spread:.3e}")
    return ProbeReport(
        passed=detected == n_words,
        n_words=n_words,
        detected=detected,
        seed=seed,
        tol=tol,
        min_spread=float(min_spread),
        max_offdiagonal=max_off,
        undetected=undetected[:10],
    )


def verify_model_rep(
    W: MagicModel,
    Q: PhaseMatrix,
    tol: Optional[float] = None,
    theta_fn: Optional[ThetaTable] = None,
) -> RepReport:
    """Check pi(c^(i)) eps_ke = theta_{ic}^{ke} eps_{k,e-c} on the model W.

    W must be the right deformation of the Fourier models of X and Y by Q.
    pi(c^(i)) = sum_{a,j} L_ac W_{ia,j0} and eps_ke = sum_i K_ik e_ie, with
    K = F_X and L = F_Y.
    """
    tol = get_policy().tolerances.magic if tol is None else tol
    X, Y = Q.x, Q.y
    M, N = X.size, Y.size
    D = W.block_dim
    if W.index_size != M * N or D != M * N:
        raise ShapeMismatchError(f"model of size {W.index_size}/{D} does not live over {X.label} x {Y.label}")
    K, L = fourier_matrix(X), fourier_matrix(Y)
    blocks = W.blocks.reshape(M, N, M, N, D, D)
    pi = np.einsum("ac,iajxy->icxy", L, blocks[:, :, :, 0])

    eps = np.einsum("xk,ef->kexf", K, np.eye(N)).reshape(M, N, D)
    image = np.einsum("icxy,key->ickex", pi, eps)
    ysub = Y.sub_table()
    table = (theta_fn or theta_table)(Q)
    # shifted[c, k, e] = eps_{k, e-c}
    shifted = np.transpose(eps[:, ysub], (2, 0, 1, 3))
    expected = table[..., None] * shifted[None]
    deviation = np.abs(image - expected)
    worst = float(np.max(deviation))
    where = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
    return RepReport(
        passed=worst <= tol,
        tol=tol,
        max_deviation=worst,
        worst_case={"i": int(where[0]), "c": int(where[1]), "k": int(where[2]), "e": int(where[3])},
    )
