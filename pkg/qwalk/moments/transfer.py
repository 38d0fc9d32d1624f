"""Transfer matrices T_eps and truncated moments c_p^r.

T_eps is indexed by p-tuples of model indices, encoded as
sum_r idx(i_r) n^{p-r}. Its entries are block traces normalized by the block
dimension D; c_p^r = Tr(T_p^r) uses the unnormalized trace over the n^p rows.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np
from scipy.sparse.linalg import LinearOperator

from qwalk.config import get_policy
from qwalk.errors import ResourceCapExceeded
from qwalk.models.magic import MagicModel, dual

from .reports import DualityReport

logger = logging.getLogger(__name__)

PLAIN, STAR = "plain", "star"
_ALIASES = {"plain": PLAIN, "1": PLAIN, "star": STAR, "*": STAR}


@dataclass(frozen=True)
class ExponentWord:
    """Exponents eps_1 .. eps_p, each plain or star."""
    letters: Tuple[str, ...]

    def __post_init__(self):
        letters = tuple(_ALIASES.get(str(x).strip().lower(), None) for x in self.letters)
        if not letters:
            raise ValueError("an exponent word needs at least one letter")
        if None in letters:
            raise ValueError(f"unknown exponent letters in {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def plain(cls, p: int) -> "ExponentWord":
        return cls((PLAIN,) * p)

    @classmethod
    def parse(cls, text: str) -> "ExponentWord":
        """Parse a string such as "1*1" or "plain,star"."""
        parts = text.split(",") if "," in text else list(text)
        return cls(tuple(parts))

    @classmethod
    def coerce(cls, word: Union["ExponentWord", int, str, Iterable[str]]) -> "ExponentWord":
        if isinstance(word, ExponentWord):
            return word
        if isinstance(word, (int, np.integer)):
            return cls.plain(int(word))
        if isinstance(word, str):
            return cls.parse(word)
        return cls(tuple(word))

    @property
    def length(self) -> int:
        return len(self.letters)


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Dense n^p x n^p matrix of normalized block traces."""
    word: ExponentWord
    base: int
    matrix: np.ndarray

    @property
    def p(self) -> int:
        return self.word.length

    def power_trace(self, r: int) -> complex:
        return complex(np.trace(np.linalg.matrix_power(self.matrix, r)))


def _oriented(blocks: np.ndarray, letter: str) -> np.ndarray:
    if letter == STAR:
        return np.conj(np.swapaxes(blocks, -1, -2))
    return blocks


def transfer_matrix(
    U: MagicModel,
    word: Union[ExponentWord, int, str] = 1,
    *,
    row_cap: Optional[int] = None,
    entry_cap: Optional[int] = None,
) -> TransferMatrix:
    """Build T_eps with entries tr(U_{i1 j1}^{eps_1} ... U_{ip jp}^{eps_p}).

    Args:
        U: Magic model
        word: Exponent word, or p for the all-plain word
        row_cap: Maximum n^p (default from config)
        entry_cap: Maximum size of the assembled prefix product (default from config)

    Raises:
        ResourceCapExceeded: If n^p or the working set exceeds its cap
    """
    caps = get_policy().caps
    row_cap = caps.transfer_rows if row_cap is None else row_cap
    entry_cap = caps.transfer_entries if entry_cap is None else entry_cap
    word = ExponentWord.coerce(word)
    n, D, p = U.index_size, U.block_dim, word.length

    rows = n ** p
    if rows > row_cap:
        raise ResourceCapExceeded("transfer matrix rows n^p", rows, row_cap)
    # only the prefix product of the first p - 1 letters is materialized
    working = n ** (2 * (p - 1)) * D * D if p >= 3 else 0
    if working > entry_cap:
        raise ResourceCapExceeded("transfer matrix working set", working, entry_cap)

    factors = [_oriented(U.blocks, letter) for letter in word.letters]
    if p == 1:
        T = np.trace(factors[0], axis1=2, axis2=3) / D
    else:
        prefix = factors[0]
        for B in factors[1:-1]:
            k = prefix.shape[0]
            prefix = np.einsum("IJxy,ijyz->IiJjxz", prefix, B).reshape(k * n, k * n, D, D)
        T = np.einsum("IJxy,ijyx->IiJj", prefix, factors[-1]).reshape(rows, rows) / D
    logger.debug(f"transfer_matrix: {U.name}, p={p}, rows={rows}")
    return TransferMatrix(word=word, base=n, matrix=T)


def transfer_operator(
    U: MagicModel,
    word: Union[ExponentWord, int, str] = 1,
    *,
    row_cap: Optional[int] = None,
    entry_cap: Optional[int] = None,
) -> LinearOperator:
    """T_eps as a matrix-free operator; v -> T v costs O(n^{p+1} D^3).

    The letters are applied right to left, so the largest intermediate holds
    n^p blocks of size D x D.

    Raises:
        ResourceCapExceeded: If n^p exceeds the Cesaro row cap or n^p D^2
            exceeds the entry cap
    """
    caps = get_policy().caps
    row_cap = caps.cesaro_rows if row_cap is None else row_cap
    entry_cap = caps.transfer_entries if entry_cap is None else entry_cap
    word = ExponentWord.coerce(word)
    n, D, p = U.index_size, U.block_dim, word.length

    rows = n ** p
    if rows > row_cap:
        raise ResourceCapExceeded("transfer operator rows n^p", rows, row_cap)
    if rows * D * D > entry_cap:
        raise ResourceCapExceeded("transfer operator working set", rows * D * D, entry_cap)

    factors = [_oriented(U.blocks, letter) for letter in word.letters]

    def matvec(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex).reshape(rows // n, n)
        S = np.einsum("aj,ijxy->aixy", v, factors[-1])
        for B in reversed(factors[:-1]):
            m, k = S.shape[0] // n, S.shape[1]
            S = np.einsum("ijxy,ajbyz->aibxz", B, S.reshape(m, n, k, D, D)).reshape(m, n * k, D, D)
        return np.trace(S[0], axis1=1, axis2=2) / D

    logger.debug(f"transfer_operator: {U.name}, p={p}, rows={rows}")
    return LinearOperator((rows, rows), matvec=matvec, dtype=complex)


def truncated_moment(
    U: MagicModel,
    p: int,
    r: int,
    word: Optional[Union[ExponentWord, str]] = None,
) -> float:
    """c_p^r = Tr(T_eps^r), the unnormalized trace of the r-th power."""
    if p < 1 or r < 1:
        raise ValueError("p and r must be at least 1")
    word = ExponentWord.plain(p) if word is None else ExponentWord.coerce(word)
    if word.length != p:
        raise ValueError(f"exponent word has length {word.length}, expected {p}")
    return transfer_matrix(U, word).power_trace(r).real


def rescaled_truncated_moments(U: MagicModel, p: int, r: int) -> float:
    """gamma_p^r = c_p^r / n^p."""
    return truncated_moment(U, p, r) / U.index_size ** p


def dual_transfer_moment(U: MagicModel, p: int, r: int) -> float:
    """tr((T'_r)^p) with T'_r = T_r(U') and tr normalized by n^r.

    These are the moments of the law eta^r and coincide with gamma_p^r(U).
    """
    T_dual = transfer_matrix(dual(U), r)
    return T_dual.power_trace(p).real / U.index_size ** r


def duality_check(U: MagicModel, p_max: int = 3, r_max: int = 3, tol: Optional[float] = None) -> DualityReport:
    """Compare gamma_p^r(U) with gamma_r^p(U') for p <= p_max, r <= r_max."""
    tol = get_policy().tolerances.magic if tol is None else tol
    U_dual = dual(U)
    worst, worst_pair, values = 0.0, [1, 1], {}
    for p in range(1, p_max + 1):
        for r in range(1, r_max + 1):
            own = rescaled_truncated_moments(U, p, r)
            flipped = rescaled_truncated_moments(U_dual, r, p)
            values[f"{p},{r}"] = own
            defect = abs(own - flipped)
            if defect > worst:
                worst, worst_pair = defect, [p, r]
    return DualityReport(
        passed=worst <= tol,
        model=U.name,
        tol=tol,
        worst_defect=worst,
        worst_pair=worst_pair,
        values=values,
    )
