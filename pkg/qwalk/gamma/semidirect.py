"""Exact arithmetic in Z^{(|X|-1)|Y|} x| Y, the model of Gamma_{X,Y}.

An element (a, s) has an integer vector a indexed by pairs (i, c) with
i in X minus {0}, c in Y, stored as an array of shape (|X|-1, |Y|), and
s in Y. Y acts by shifting the second coordinate:
(a, s)(b, t) = (a + shift_s(b), s + t), shift_s moving (i, c) to (i, c + s).
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from qwalk.errors import GroupError
from qwalk.groups import AbelianGroup


@dataclass(frozen=True)
class GammaContext:
    """The pair (X, Y) fixing the ambient group."""
    x: AbelianGroup
    y: AbelianGroup

    @property
    def vec_shape(self) -> Tuple[int, int]:
        return (self.x.size - 1, self.y.size)

    def identity(self) -> "SemidirectElt":
        return SemidirectElt(self, (0,) * (self.vec_shape[0] * self.vec_shape[1]), 0)

    def letters(self) -> List["GeneratorLetter"]:
        """All letters c^(i), i in X, c in Y, in code order i * |Y| + c."""
        return [GeneratorLetter(i, c) for i in range(self.x.size) for c in range(self.y.size)]

    def letter_vectors(self) -> np.ndarray:
        """Embedded vectors of every letter, shape (|X||Y|, |X|-1, |Y|)."""
        M, N = self.x.size, self.y.size
        vecs = np.zeros((M * N, M - 1, N), dtype=np.int64)
        for i in range(1, M):
            for c in range(1, N):
                vecs[i * N + c, i - 1, 0] += 1
                vecs[i * N + c, i - 1, c] -= 1
        return vecs


@dataclass(frozen=True)
class GeneratorLetter:
    """The generator c^(i): element c of the i-th copy of Y."""
    i: int
    c: int


@dataclass(frozen=True)
class SemidirectElt:
    """Element (vec, y) with exact integer coordinates."""
    context: GammaContext
    vec: Tuple[int, ...]
    y: int

    def __post_init__(self):
        object.__setattr__(self, "vec", tuple(int(v) for v in self.vec))
        object.__setattr__(self, "y", int(self.y))

    def array(self) -> np.ndarray:
        return np.array(self.vec, dtype=np.int64).reshape(self.context.vec_shape)

    @property
    def is_identity(self) -> bool:
        return self.y == 0 and not any(self.vec)

    def __mul__(self, other: "SemidirectElt") -> "SemidirectElt":
        return semidirect_mul(self, other)


def _shift(context: GammaContext, a: np.ndarray, s: int) -> np.ndarray:
    """shift_s(a)[i, c] = a[i, c - s]."""
    sub = context.y.sub_table()
    return a[:, sub[:, s]]


def _from_array(context: GammaContext, a: np.ndarray, y: int) -> SemidirectElt:
    return SemidirectElt(context, tuple(a.ravel().tolist()), y)


def semidirect_mul(g: SemidirectElt, h: SemidirectElt) -> SemidirectElt:
    """(a, s)(b, t) = (a + shift_s(b), s + t).

    Raises:
        GroupError: If g and h live over different (X, Y)
    """
    if g.context != h.context:
        raise GroupError("cannot multiply elements over different (X, Y)")
    ctx = g.context
    vec = g.array() + _shift(ctx, h.array(), g.y)
    return _from_array(ctx, vec, int(ctx.y.add_table()[g.y, h.y]))


def semidirect_inverse(g: SemidirectElt) -> SemidirectElt:
    """(a, s)^{-1} = (-shift_{-s}(a), -s)."""
    ctx = g.context
    minus_s = int(ctx.y.neg_table()[g.y])
    return _from_array(ctx, -_shift(ctx, g.array(), minus_s), minus_s)


def embed_generator(context: GammaContext, letter: GeneratorLetter) -> SemidirectElt:
    """c^(0) -> (0, c); c^(i) -> (b_{i0} - b_{ic}, c) for i != 0."""
    M, N = context.x.size, context.y.size
    i, c = int(letter.i), int(letter.c)
    if not (0 <= i < M and 0 <= c < N):
        raise GroupError(f"letter ({i}, {c}) outside {context.x.label} x {context.y.label}")
    vec = np.zeros(context.vec_shape, dtype=np.int64)
    if i != 0:
        vec[i - 1, 0] += 1
        vec[i - 1, c] -= 1
    return _from_array(context, vec, c)


def word_product(context: GammaContext, word: Iterable[GeneratorLetter]) -> SemidirectElt:
    """Embedded product of a word of generators, left to right."""
    result = context.identity()
    for letter in word:
        result = semidirect_mul(result, embed_generator(context, letter))
    return result


def t_word(context: GammaContext, exponents: Sequence[Sequence[int]]) -> List[GeneratorLetter]:
    """Word for prod over i, c != 0 of ((-c)^(0) c^(i))^{R_ic}.

    Args:
        context: Ambient (X, Y)
        exponents: Integer array R of shape (|X|-1, |Y|-1)
    """
    R = np.asarray(exponents, dtype=np.int64)
    M, N = context.x.size, context.y.size
    if R.shape != (M - 1, N - 1):
        raise GroupError(f"exponent array has shape {R.shape}, expected {(M - 1, N - 1)}")
    neg = context.y.neg_table()
    word: List[GeneratorLetter] = []
    for i in range(1, M):
        for c in range(1, N):
            k = int(R[i - 1, c - 1])
            if k > 0:
                word.extend([GeneratorLetter(0, int(neg[c])), GeneratorLetter(i, c)] * k)
            elif k < 0:
                word.extend([GeneratorLetter(i, int(neg[c])), GeneratorLetter(0, c)] * (-k))
    return word
