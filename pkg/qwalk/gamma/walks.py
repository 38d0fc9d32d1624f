"""Exact character moments of G_Q by enumeration.

Two independent counts:

multiset: (1/(MN)) #{(i, d) in X^p x Y^p : [(i_r, d_r)] = [(i_r, d_{r-1})]}
          as multisets, with d_0 = d_p;
group:    (1/M) #{letter words of length p with trivial product in Gamma_{X,Y}}.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from qwalk.config import get_policy
from qwalk.errors import ResourceCapExceeded
from qwalk.groups import AbelianGroup

from .reports import WalkReport
from .semidirect import GammaContext

logger = logging.getLogger(__name__)

WALK_METHODS = ("multiset", "group")
_CHUNK = 1 << 16


def _digits(codes: np.ndarray, base: int, p: int) -> np.ndarray:
    powers = base ** np.arange(p - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // powers) % base


def _multiset_counter(X: AbelianGroup, Y: AbelianGroup, p: int) -> Callable[[int, int], int]:
    N = Y.size
    base = X.size * N

    def count(start: int, stop: int) -> int:
        letters = _digits(np.arange(start, stop, dtype=np.int64), base, p)
        i, d = letters // N, letters % N
        d_prev = np.roll(d, 1, axis=1)
        left = np.sort(i * N + d, axis=1)
        right = np.sort(i * N + d_prev, axis=1)
        return int(np.count_nonzero(np.all(left == right, axis=1)))

    return count


def _group_counter(X: AbelianGroup, Y: AbelianGroup, p: int) -> Callable[[int, int], int]:
    ctx = GammaContext(X, Y)
    M, N = X.size, Y.size
    letter_vecs = ctx.letter_vectors()
    add, sub = Y.add_table(), Y.sub_table()

    def count(start: int, stop: int) -> int:
        codes = _digits(np.arange(start, stop, dtype=np.int64), M * N, p)
        batch = codes.shape[0]
        vec = np.zeros((batch, M - 1, N), dtype=np.int64)
        y = np.zeros(batch, dtype=np.int64)
        for r in range(p):
            step = letter_vecs[codes[:, r]]
            # right multiplication: vec += shift_y(step)
            gather = np.broadcast_to(sub[:, y].T[:, None, :], step.shape)
            vec += np.take_along_axis(step, gather, axis=2)
            y = add[y, codes[:, r] % N]
        trivial = np.all(vec.reshape(batch, -1) == 0, axis=1) & (y == 0)
        return int(np.count_nonzero(trivial))

    return count


def walk_moment(
    X: AbelianGroup,
    Y: AbelianGroup,
    p: int,
    method: str = "multiset",
    *,
    cap: Optional[int] = None,
    threads: Optional[int] = None,
) -> WalkReport:
    """Exact p-th moment of the main character of G_Q at generic Q.

    Args:
        X: First group (|X| = M)
        Y: Second group (|Y| = N)
        p: Moment order
        method: "multiset" or "group"
        cap: Maximum (MN)^p (default from config)
        threads: Worker threads for the chunked enumeration

    Raises:
        ResourceCapExceeded: If (MN)^p exceeds the cap
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if method not in WALK_METHODS:
        raise ValueError(f"method must be one of {WALK_METHODS}, got {method!r}")
    policy = get_policy()
    cap = policy.caps.walk_enumeration if cap is None else cap
    threads = policy.sampling.threads if threads is None else threads
    M, N = X.size, Y.size
    total = (M * N) ** p
    if total > cap:
        raise ResourceCapExceeded("walk enumeration (MN)^p", total, cap)

    started = time.perf_counter()
    counter = _multiset_counter(X, Y, p) if method == "multiset" else _group_counter(X, Y, p)
    bounds = [(lo, min(lo + _CHUNK, total)) for lo in range(0, total, _CHUNK)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partial = list(pool.map(lambda b: counter(*b), bounds))
    else:
        partial = [counter(lo, hi) for lo, hi in bounds]
    # chunk order is fixed, so the sum is deterministic
    count = sum(partial)

    denominator = M * N if method == "multiset" else M
    exact = Fraction(count, denominator)
    elapsed = (time.perf_counter() - started) * 1000
    logger.info(f"walk_moment: {X.label},{Y.label}, p={p}, method={method}, value={exact}")
    return WalkReport(
        method=method,
        x=X.label,
        y=Y.label,
        p=p,
        count=count,
        numerator=exact.numerator,
        denominator=exact.denominator,
        value=float(exact),
        wall_time_ms=elapsed,
    )
