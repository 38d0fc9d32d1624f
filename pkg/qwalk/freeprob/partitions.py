"""Set partitions of {1..p}, noncrossing enumeration and Kreweras complements."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from qwalk.config import get_policy
from qwalk.errors import PartitionError

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


@dataclass(frozen=True)
class SetPartition:
    """Partition of {1..p} into sorted blocks, ordered by their minima."""
    p: int
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(int(x) for x in b)) for b in self.blocks if len(b)), key=lambda b: b[0]))
        members = [x for b in blocks for x in b]
        if sorted(members) != list(range(1, self.p + 1)):
            raise PartitionError(f"blocks {blocks} do not partition {{1..{self.p}}}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "SetPartition":
        """Partition whose block of element j + 1 is labels[j]."""
        groups: Dict[int, List[int]] = {}
        for j, label in enumerate(labels):
            groups.setdefault(label, []).append(j + 1)
        return cls(len(labels), tuple(tuple(g) for g in groups.values()))

    @classmethod
    def one_block(cls, p: int) -> "SetPartition":
        return cls(p, (tuple(range(1, p + 1)),))

    @classmethod
    def singletons(cls, p: int) -> "SetPartition":
        return cls(p, tuple((j,) for j in range(1, p + 1)))

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def size(self) -> int:
        """|pi|, the number of blocks."""
        return len(self.blocks)

    def block_of(self, x: int) -> Block:
        for b in self.blocks:
            if x in b:
                return b
        raise PartitionError(f"{x} not in {{1..{self.p}}}")

    @property
    def is_noncrossing(self) -> bool:
        return not _has_crossing(self.blocks)

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def _interleaved(first: Block, second: Block) -> bool:
    return any(a < b < c < d for a in first for c in first for b in second for d in second)


def _has_crossing(blocks: Sequence[Block]) -> bool:
    """Four-point test: a < b < c < d with a, c in one block and b, d in another."""
    return any(
        _interleaved(first, second) or _interleaved(second, first)
        for s, first in enumerate(blocks)
        for second in blocks[s + 1:]
    )


def _straddles(block: List[int], y: int) -> bool:
    return block[0] < y < block[-1]


def _nc_labels(p: int) -> Iterator[Tuple[int, ...]]:
    """Restricted-growth labels of noncrossing partitions, pruned incrementally.

    A crossing is detected when its largest point is placed: element m may
    join block L only if no other block straddles a member of L.
    """
    blocks: List[List[int]] = []
    labels: List[int] = []

    def extend(m: int) -> Iterator[Tuple[int, ...]]:
        if m > p:
            yield tuple(labels)
            return
        for label, block in enumerate(blocks):
            if any(_straddles(other, y) for y in block for o, other in enumerate(blocks) if o != label):
                continue
            block.append(m)
            labels.append(label)
            yield from extend(m + 1)
            labels.pop()
            block.pop()
        blocks.append([m])
        labels.append(len(blocks) - 1)
        yield from extend(m + 1)
        labels.pop()
        blocks.pop()

    yield from extend(1)


def _check_size(p: int, cap: Optional[int]) -> None:
    cap = get_policy().caps.nc_size if cap is None else cap
    if not 1 <= p <= cap:
        raise PartitionError(f"p must lie in [1, {cap}], got {p}")


@lru_cache(maxsize=None)
def _nc_cached(p: int) -> Tuple[SetPartition, ...]:
    found = tuple(SetPartition.from_labels(labels) for labels in _nc_labels(p))
    logger.debug(f"enumerate_nc: |NC({p})| = {len(found)}")
    return found


def enumerate_nc(p: int, cap: Optional[int] = None) -> List[SetPartition]:
    """All noncrossing partitions of {1..p}.

    Raises:
        PartitionError: If p is outside [1, cap]
    """
    _check_size(p, cap)
    return list(_nc_cached(p))


def all_set_partitions(p: int) -> Iterator[SetPartition]:
    """Every set partition of {1..p} by restricted-growth strings."""
    if p < 1:
        raise PartitionError(f"p must be positive, got {p}")

    def extend(labels: List[int], top: int) -> Iterator[SetPartition]:
        if len(labels) == p:
            yield SetPartition.from_labels(labels)
            return
        for label in range(top + 2):
            yield from extend(labels + [label], max(top, label))

    yield from extend([0], 0)


def narayana_count(p: int, r: int, cap: Optional[int] = None) -> int:
    """#{pi in NC(p) : |pi| = r}, counted by enumeration."""
    _check_size(p, cap)
    if not 1 <= r <= p:
        raise PartitionError(f"r must lie in [1, {p}], got {r}")
    return sum(1 for pi in _nc_cached(p) if pi.size == r)


def free_poisson_moment(t: float, p: int, cap: Optional[int] = None) -> float:
    """p-th moment of pi_t: sum over NC(p) of t^{|pi|}."""
    _check_size(p, cap)
    return float(sum(t ** pi.size for pi in _nc_cached(p)))


def _cycle_permutation(pi: SetPartition) -> Dict[int, int]:
    """Each block as an increasing cycle."""
    perm = {}
    for b in pi.blocks:
        for s, x in enumerate(b):
            perm[x] = b[(s + 1) % len(b)]
    return perm


def kreweras(pi: SetPartition) -> SetPartition:
    """Kreweras complement, the cycles of pi^{-1} o (1 2 ... p).

    Raises:
        PartitionError: If pi is crossing
    """
    if not pi.is_noncrossing:
        raise PartitionError(f"kreweras needs a noncrossing partition, got {pi}")
    p = pi.p
    inverse = {v: k for k, v in _cycle_permutation(pi).items()}
    complement = {x: inverse[x % p + 1] for x in range(1, p + 1)}
    seen, blocks = set(), []
    for start in range(1, p + 1):
        if start in seen:
            continue
        cycle, x = [], start
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = complement[x]
        blocks.append(tuple(cycle))
    return SetPartition(p, tuple(blocks))


def delta_pair(pi: SetPartition, sigma: SetPartition) -> int:
    """1 if |b & c| = |(b - 1) & c| for all blocks b of pi, c of sigma, else 0.

    b - 1 shifts every element down by one, cyclically on {1..p}.
    """
    if pi.p != sigma.p:
        raise PartitionError(f"ground sizes differ: {pi.p} and {sigma.p}")
    p = pi.p
    for b in pi.blocks:
        shifted = {(x - 2) % p + 1 for x in b}
        members = set(b)
        for c in sigma.blocks:
            if len(members.intersection(c)) != len(shifted.intersection(c)):
                return 0
    return 1
