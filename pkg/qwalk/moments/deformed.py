"""Truncated moments of deformed tensor products.

phase_sum_moment evaluates c_p^r(U deformed by Q with V) from the transfer
matrices of U and of the dual V' alone:

  c_p^r(W) = (MN)^{-r} sum_{i, b} Delta_U(i) Delta_V'(b^t) prod_{s,t} phase(s, t)

with i, b ranging over r x p arrays, Delta_U(i) = M^r prod_s T_p^U[i^s, i^{s+1}],
Delta_V'(b^t) = N^p prod_t T_r^V'[b_t, b_{t+1}] and the phase of cell (s, t)
equal to Q(i_t^s, b_t^s) Q(i_t^{s+1}, b_{t+1}^s) / (Q(i_t^s, b_{t+1}^s) Q(i_t^{s+1}, b_t^s)),
all indices cyclic.
"""

import logging
from typing import Optional, Union

import numpy as np

from qwalk.config import get_policy
from qwalk.errors import ResourceCapExceeded, ShapeMismatchError
from qwalk.hadamard import PhaseMatrix, phase_array
from qwalk.models.checks import check_positive
from qwalk.models.magic import MagicModel, deform, dual

from .reports import BoundReport
from .transfer import transfer_matrix, truncated_moment

logger = logging.getLogger(__name__)


def _all_tuples(base: int, length: int) -> np.ndarray:
    """All length-tuples over [0, base) in lexicographic order."""
    grids = np.unravel_index(np.arange(base ** length), (base,) * length)
    return np.stack(grids, axis=-1).astype(np.int64)


def _digits(codes: np.ndarray, base: int, ndigits: int) -> np.ndarray:
    """Split tuple codes into digits, most significant first."""
    powers = base ** np.arange(ndigits - 1, -1, -1, dtype=np.int64)
    return (codes[..., None] // powers) % base


def phase_sum_moment(
    U: MagicModel,
    Vdual: MagicModel,
    Q: Union[PhaseMatrix, np.ndarray],
    p: int,
    r: int,
    *,
    cap: Optional[int] = None,
) -> float:
    """c_p^r of the right deformation of U and V, without building it.

    Args:
        U: Model indexed by X (|X| = M)
        Vdual: Flip dual of the model indexed by Y (|Y| = N)
        Q: Parameter matrix M x N
        p: Moment order
        r: Truncation order

    Raises:
        ResourceCapExceeded: If M^{rp} N^{rp} exceeds the cap
    """
    if p < 1 or r < 1:
        raise ValueError("p and r must be at least 1")
    cap = get_policy().caps.phase_sum_terms if cap is None else cap
    q = phase_array(Q)
    M, N = U.index_size, Vdual.index_size
    if q.shape != (M, N):
        raise ShapeMismatchError(f"Q has shape {q.shape}, expected {(M, N)}")
    count = M ** (r * p) * N ** (r * p)
    if count > cap:
        raise ResourceCapExceeded("phase-sum terms M^{rp} N^{rp}", count, cap)

    TU = transfer_matrix(U, p).matrix
    TV = transfer_matrix(Vdual, r).matrix

    # rows i^s of the index array, one code per s
    i_codes = _all_tuples(M ** p, r)
    delta_u = np.full(len(i_codes), float(M) ** r, dtype=complex)
    for s in range(r):
        delta_u *= TU[i_codes[:, s], i_codes[:, (s + 1) % r]]
    i_dig = _digits(i_codes, M, p)  # [.., s, t] = i_t^s

    # columns b_t of the index array, one code per t
    b_codes = _all_tuples(N ** r, p)
    delta_v = np.full(len(b_codes), float(N) ** p, dtype=complex)
    for t in range(p):
        delta_v *= TV[b_codes[:, t], b_codes[:, (t + 1) % p]]
    b_dig = _digits(b_codes, N, r)  # [.., t, s] = b_t^s

    phase = np.ones((len(i_codes), len(b_codes)), dtype=complex)
    for s in range(r):
        s_next = (s + 1) % r
        for t in range(p):
            t_next = (t + 1) % p
            i_here = i_dig[:, s, t][:, None]
            i_next = i_dig[:, s_next, t][:, None]
            b_here = b_dig[:, t, s][None, :]
            b_next = b_dig[:, t_next, s][None, :]
            phase *= q[i_here, b_here] * q[i_next, b_next] / (q[i_here, b_next] * q[i_next, b_here])

    total = delta_u @ phase @ delta_v / float(M * N) ** r
    logger.debug(f"phase_sum_moment: p={p}, r={r}, terms={count}, imag={total.imag:.2e}")
    return float(total.real)


def tensor_bound_check(
    U: MagicModel,
    V: MagicModel,
    Q: Union[PhaseMatrix, np.ndarray],
    p: int,
    r: int,
) -> BoundReport:
    """Check |c_p^r(W)| <= c_p^r(U) c_p^r(V) for W = U deformed by Q with V.

    Positivity of U and V' is the hypothesis of the bound; a failure is
    reported in the result rather than raised.
    """
    order = max(p, r)
    pos_u = check_positive(U, order)
    pos_v = check_positive(dual(V), order)
    W = deform(U, V, Q, "right")
    c_w = truncated_moment(W, p, r)
    c_u = truncated_moment(U, p, r)
    c_v = truncated_moment(V, p, r)
    bound = c_u * c_v
    slack = bound - abs(c_w)
    return BoundReport(
        holds=slack >= -1e-9 * max(1.0, abs(bound)),
        p=p,
        r=r,
        c_w=c_w,
        c_u=c_u,
        c_v=c_v,
        slack=slack,
        positivity_ok=pos_u.positive and pos_v.positive,
        positivity_detail={"U": pos_u.worst_entry, "V_dual": pos_v.worst_entry},
    )
