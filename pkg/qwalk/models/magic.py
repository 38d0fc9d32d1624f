"""Magic-unitary matrix models.

A model is an n x n array of D x D complex blocks U_ij, stored densely as an
array of shape (n, n, D, D). Pair indices over X x Y are flattened X outer:
index(i, a) = i * |Y| + a.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from qwalk.config import get_policy
from qwalk.errors import ModelInvariantError, ShapeMismatchError
from qwalk.groups import AbelianGroup, fourier_matrix
from qwalk.hadamard import SIDES, PhaseMatrix, phase_array, validate_hadamard

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MagicModel:
    """n x n array of D x D blocks with magic row and column structure."""
    blocks: np.ndarray
    labels: Tuple[str, ...] = ()
    name: str = "model"

    def __post_init__(self):
        blocks = np.array(self.blocks, dtype=complex)
        if blocks.ndim != 4 or blocks.shape[0] != blocks.shape[1] or blocks.shape[2] != blocks.shape[3]:
            raise ShapeMismatchError(f"model blocks must have shape (n, n, D, D), got {blocks.shape}")
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def index_size(self) -> int:
        return self.blocks.shape[0]

    @property
    def block_dim(self) -> int:
        return self.blocks.shape[2]

    @property
    def is_square(self) -> bool:
        return self.index_size == self.block_dim

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j]

    def defects(self) -> Dict[str, float]:
        """Worst operator-norm defect of each magic invariant."""
        B = self.blocks
        eye = np.eye(self.block_dim)

        def worst(stack) -> float:
            return float(np.max(np.linalg.norm(stack, ord=2, axis=(-2, -1))))

        return {
            "self_adjoint": worst(B - np.conj(np.swapaxes(B, -1, -2))),
            "idempotent": worst(B @ B - B),
            "row_sum": worst(B.sum(axis=1) - eye),
            "column_sum": worst(B.sum(axis=0) - eye),
        }


def _phase_ratios(q: np.ndarray) -> np.ndarray:
    """R[i, j, c, d] = q_ic q_jd / (q_id q_jc)."""
    return (q[:, None, :, None] * q[None, :, None, :]) / (q[:, None, None, :] * q[None, :, :, None])


def _require_magic(model: MagicModel, tol: float) -> MagicModel:
    defects = model.defects()
    worst = max(defects.values())
    if worst > tol:
        raise ModelInvariantError(f"{model.name}: magic invariants fail ({defects})")
    return model


def from_hadamard(H, tol: Optional[float] = None, name: str = "hadamard") -> MagicModel:
    """Projective model U_ij = Proj(H_i / H_j).

    Block (i, j) has entries (1/n) H_ik H_jl / (H_il H_jk).

    Raises:
        HadamardValidationError: If H is not Hadamard
    """
    tol = get_policy().tolerances.magic if tol is None else tol
    H = np.asarray(H, dtype=complex)
    validate_hadamard(H, tol=tol, raise_on_fail=True)
    n = H.shape[0]
    blocks = (H[:, None, :, None] * H[None, :, None, :]) / (H[:, None, None, :] * H[None, :, :, None]) / n
    return MagicModel(blocks, labels=(f"n={n}",), name=name)


def fourier_model(X: AbelianGroup) -> MagicModel:
    """Fourier model (U_ij)_kl = (1/|X|) F_{i-j, k-l}."""
    F = fourier_matrix(X)
    sub = X.sub_table()
    blocks = F[sub[:, :, None, None], sub[None, None, :, :]] / X.size
    return MagicModel(blocks, labels=(X.label,), name=f"fourier({X.label})")


def deform(
    U: MagicModel,
    V: MagicModel,
    Q: Union[PhaseMatrix, np.ndarray],
    side: str = "right",
    tol: Optional[float] = None,
) -> MagicModel:
    """Deformed tensor product of two models.

    right: (W_{ia,jb})_{kc,ld} = Q_ic Q_jd / (Q_id Q_jc) (U_ij)_kl (V_ab)_cd
    left:  (W_{ia,jb})_{kc,ld} = Q_ka Q_lb / (Q_kb Q_la) (U_ij)_kl (V_ab)_cd

    Args:
        U: Model indexed by X
        V: Model indexed by Y
        Q: Parameter matrix of shape |X| x |Y|
        side: "right" or "left"
        tol: Magic-check tolerance for the result

    Raises:
        ShapeMismatchError: If Q or the block sizes do not fit
        ModelInvariantError: If the result is not magic within tol
    """
    tol = get_policy().tolerances.magic if tol is None else tol
    q = phase_array(Q)
    M, N = U.index_size, V.index_size
    Du, Dv = U.block_dim, V.block_dim
    if q.shape != (M, N):
        raise ShapeMismatchError(f"Q has shape {q.shape}, expected {(M, N)}")
    if side == "right":
        if Dv != N:
            raise ShapeMismatchError(f"right deformation needs block_dim(V) = {N}, got {Dv}")
        W = np.einsum("ijcd,ijkl,abcd->iajbkcld", _phase_ratios(q), U.blocks, V.blocks)
    elif side == "left":
        if Du != M:
            raise ShapeMismatchError(f"left deformation needs block_dim(U) = {M}, got {Du}")
        W = np.einsum("klab,ijkl,abcd->iajbkcld", _phase_ratios(q), U.blocks, V.blocks)
    else:
        raise ShapeMismatchError(f"side must be one of {SIDES}, got {side!r}")
    W = W.reshape(M * N, M * N, Du * Dv, Du * Dv)
    model = MagicModel(W, labels=U.labels + V.labels, name=f"{U.name}*{side}*{V.name}")
    logger.debug(f"deform: {model.name}, index_size={M * N}, block_dim={Du * Dv}")
    return _require_magic(model, tol)


def tensor_model(U: MagicModel, V: MagicModel) -> MagicModel:
    """Undeformed product, the Q = 1 case of deform."""
    ones = np.ones((U.index_size, V.index_size), dtype=complex)
    side = "right" if V.is_square else "left"
    return deform(U, V, ones, side=side)


def dual(U: MagicModel) -> MagicModel:
    """Flip dual (U'_kl)_ij = (U_ij)_kl.

    Raises:
        ShapeMismatchError: If index_size != block_dim
    """
    if not U.is_square:
        raise ShapeMismatchError(
            f"dual needs index_size = block_dim, got {U.index_size} and {U.block_dim}"
        )
    return MagicModel(np.transpose(U.blocks, (2, 3, 0, 1)), labels=U.labels, name=f"dual({U.name})")


def dump_model(U: MagicModel, path: Union[str, Path], tol: Optional[float] = None) -> Path:
    """Write a model as JSON with blocks as nested [re, im] pairs."""
    tol = get_policy().tolerances.magic if tol is None else tol
    pairs = np.stack([U.blocks.real, U.blocks.imag], axis=-1)
    payload = {
        "name": U.name,
        "labels": list(U.labels),
        "index_size": U.index_size,
        "block_dim": U.block_dim,
        "tol": tol,
        "blocks": pairs.tolist(),
    }
    path = Path(path)
    path.write_text(json.dumps(payload))
    return path


def load_model(path: Union[str, Path]) -> MagicModel:
    """Read a model written by dump_model."""
    payload = json.loads(Path(path).read_text())
    pairs = np.asarray(payload["blocks"], dtype=float)
    blocks = pairs[..., 0] + 1j * pairs[..., 1]
    expected = (payload["index_size"],) * 2 + (payload["block_dim"],) * 2
    if blocks.shape != expected:
        raise ShapeMismatchError(f"model file {path}: blocks have shape {blocks.shape}, expected {expected}")
    return MagicModel(blocks, labels=tuple(payload.get("labels", ())), name=payload.get("name", "model"))
