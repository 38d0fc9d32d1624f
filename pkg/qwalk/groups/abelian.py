"""Finite abelian groups Z_{n1} x ... x Z_{nk}.

Elements are enumerated mixed-radix with the FIRST cyclic factor most
significant: index((r_1, ..., r_k)) = ((r_1 n_2 + r_2) n_3 + r_3) ... .
Every module addresses group elements through these integer indices.
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np

from qwalk.errors import GroupError

_FACTOR = re.compile(r"^[zZ](\d+)$")


@dataclass(frozen=True)
class GroupElt:
    """Element of a finite abelian group, stored as reduced residues."""
    residues: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "residues", tuple(int(r) for r in self.residues))

    def __iter__(self) -> Iterator[int]:
        return iter(self.residues)

    def __len__(self) -> int:
        return len(self.residues)


EltLike = Union[GroupElt, Sequence[int], int]


@lru_cache(maxsize=64)
def _residue_table(orders: Tuple[int, ...]) -> np.ndarray:
    size = prod(orders)
    table = np.empty((size, len(orders)), dtype=np.int64)
    idx = np.arange(size, dtype=np.int64)
    for j in range(len(orders) - 1, -1, -1):
        table[:, j] = idx % orders[j]
        idx //= orders[j]
    table.setflags(write=False)
    return table


def _weights(orders: Tuple[int, ...]) -> np.ndarray:
    return np.array([prod(orders[j + 1:]) for j in range(len(orders))], dtype=np.int64)


@lru_cache(maxsize=64)
def _add_table(orders: Tuple[int, ...]) -> np.ndarray:
    res = _residue_table(orders)
    mods = np.array(orders, dtype=np.int64)
    summed = (res[:, None, :] + res[None, :, :]) % mods
    table = summed @ _weights(orders)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=64)
def _neg_table(orders: Tuple[int, ...]) -> np.ndarray:
    res = _residue_table(orders)
    mods = np.array(orders, dtype=np.int64)
    table = ((-res) % mods) @ _weights(orders)
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class AbelianGroup:
    """The group Z_{n1} x ... x Z_{nk} with canonical mixed-radix enumeration."""
    orders: Tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders:
            raise GroupError("a group needs at least one cyclic factor")
        if any(n < 1 for n in orders):
            raise GroupError(f"cyclic orders must be positive, got {orders}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls((n,))

    @classmethod
    def parse(cls, descriptor: str) -> "AbelianGroup":
        """Parse a descriptor such as "Z2xZ3".

        Args:
            descriptor: Cyclic factors "Zn" joined by "x"

        Returns:
            The described group

        Raises:
            GroupError: If the descriptor is empty or malformed
        """
        text = (descriptor or "").strip()
        if not text:
            raise GroupError("empty group descriptor")
        orders = []
        for part in re.split(r"[xX]", text):
            match = _FACTOR.match(part.strip())
            if match is None:
                raise GroupError(f"malformed group descriptor: {descriptor!r}")
            orders.append(int(match.group(1)))
        return cls(tuple(orders))

    @property
    def size(self) -> int:
        return prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def label(self) -> str:
        return "x".join(f"Z{n}" for n in self.orders)

    def __str__(self) -> str:
        return self.label

    # ------------------------------------------------------------------
    # element <-> index
    # ------------------------------------------------------------------

    def coerce(self, elt: EltLike) -> GroupElt:
        """Turn an index, residue sequence or GroupElt into a reduced element."""
        if isinstance(elt, (int, np.integer)):
            return self.element(int(elt))
        residues = tuple(elt)
        if len(residues) != self.rank:
            raise GroupError(
                f"element arity {len(residues)} does not match {self.label} (rank {self.rank})"
            )
        return GroupElt(tuple(int(r) % n for r, n in zip(residues, self.orders)))

    def element(self, idx: int) -> GroupElt:
        if not 0 <= idx < self.size:
            raise GroupError(f"index {idx} outside [0, {self.size}) for {self.label}")
        return GroupElt(tuple(_residue_table(self.orders)[idx]))

    def index(self, elt: EltLike) -> int:
        g = self.coerce(elt)
        return int(np.dot(g.residues, _weights(self.orders)))

    def elements(self) -> List[GroupElt]:
        return [GroupElt(tuple(row)) for row in _residue_table(self.orders)]

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def zero(self) -> GroupElt:
        return GroupElt((0,) * self.rank)

    def add(self, g: EltLike, h: EltLike) -> GroupElt:
        a, b = self.coerce(g), self.coerce(h)
        return GroupElt(tuple((x + y) % n for x, y, n in zip(a, b, self.orders)))

    def negate(self, g: EltLike) -> GroupElt:
        a = self.coerce(g)
        return GroupElt(tuple((-x) % n for x, n in zip(a, self.orders)))

    def sub(self, g: EltLike, h: EltLike) -> GroupElt:
        return self.add(g, self.negate(h))

    # ------------------------------------------------------------------
    # index tables (read-only, shared)
    # ------------------------------------------------------------------

    def residues(self) -> np.ndarray:
        """(size, rank) array of residues in canonical order."""
        return _residue_table(self.orders)

    def add_table(self) -> np.ndarray:
        """add_table()[x, y] = index(x + y)."""
        return _add_table(self.orders)

    def neg_table(self) -> np.ndarray:
        """neg_table()[x] = index(-x)."""
        return _neg_table(self.orders)

    def sub_table(self) -> np.ndarray:
        """sub_table()[x, y] = index(x - y)."""
        return self.add_table()[:, self.neg_table()]


def group_arithmetic(X: AbelianGroup, op: str, *args: EltLike) -> Union[GroupElt, List[GroupElt]]:
    """Dispatch add / negate / zero / enumerate on X."""
    if op == "add":
        if len(args) != 2:
            raise GroupError("add takes two elements")
        return X.add(args[0], args[1])
    if op == "negate":
        if len(args) != 1:
            raise GroupError("negate takes one element")
        return X.negate(args[0])
    if op == "zero":
        return X.zero()
    if op == "enumerate":
        return X.elements()
    raise GroupError(f"unknown group operation: {op!r}")
