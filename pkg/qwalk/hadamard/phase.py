"""Parameter matrices Q indexed by X x Y.

A PhaseMatrix holds unit-modulus entries. In dephased form the first row and
the first column are exactly 1; deformed models only see the ratios
Q_ic Q_jd / (Q_id Q_jc), which dephasing leaves unchanged.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from qwalk.errors import PhaseMatrixError
from qwalk.groups import AbelianGroup, root_of_unity

logger = logging.getLogger(__name__)

_MODULUS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PhaseMatrix:
    """Unit-modulus M x N matrix over X x Y."""
    x: AbelianGroup
    y: AbelianGroup
    entries: np.ndarray
    dephased: bool = True

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        shape = (self.x.size, self.y.size)
        if entries.shape != shape:
            raise PhaseMatrixError(f"Q has shape {entries.shape}, expected {shape}")
        defect = float(np.max(np.abs(np.abs(entries) - 1.0)))
        if defect > _MODULUS_TOL:
            raise PhaseMatrixError(f"Q entries must have modulus 1 (defect {defect:.3e})")
        if self.dephased and (np.any(entries[0, :] != 1) or np.any(entries[:, 0] != 1)):
            raise PhaseMatrixError("dephased Q must have first row and column exactly 1")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def turns(self) -> np.ndarray:
        """Angles of the entries in turns, reduced to [0, 1)."""
        return (np.angle(self.entries) / (2 * np.pi)) % 1.0

    def __getitem__(self, key):
        return self.entries[key]

    @classmethod
    def ones(cls, x: AbelianGroup, y: AbelianGroup) -> "PhaseMatrix":
        return cls(x, y, np.ones((x.size, y.size), dtype=complex), dephased=True)

    @classmethod
    def from_angles(
        cls,
        x: AbelianGroup,
        y: AbelianGroup,
        angles_turns: Sequence[Sequence[float]],
        dephased: bool = True,
    ) -> "PhaseMatrix":
        """Build Q from angles in turns.

        Args:
            x: Row group X
            y: Column group Y
            angles_turns: M x N angles, entry = exp(2 pi i angle)
            dephased: Require zero angles (mod 1) on the first row and column

        Raises:
            PhaseMatrixError: On shape mismatch or a non-dephased border
        """
        turns = np.asarray(angles_turns, dtype=float) % 1.0
        if turns.shape != (x.size, y.size):
            raise PhaseMatrixError(f"angles have shape {turns.shape}, expected {(x.size, y.size)}")
        if dephased:
            border = np.concatenate([turns[0, :], turns[:, 0]])
            # 0.9999... is zero mod 1 as well
            offset = np.minimum(border, 1.0 - border)
            if np.any(offset > _MODULUS_TOL):
                raise PhaseMatrixError("dephased Q must have zero angles on the first row and column")
            turns = turns.copy()
            turns[0, :] = 0.0
            turns[:, 0] = 0.0
        return cls(x, y, root_of_unity(turns), dephased=dephased)


def generic_q(x: AbelianGroup, y: AbelianGroup, seed: int) -> PhaseMatrix:
    """Random dephased Q with independent uniform phases off the border.

    Root independence holds almost surely for such phases; the seed makes
    any degenerate draw reproducible.
    """
    rng = np.random.default_rng(seed)
    turns = np.zeros((x.size, y.size))
    turns[1:, 1:] = rng.random((x.size - 1, y.size - 1))
    logger.debug(f"generic_q: {x.label} x {y.label}, seed={seed}")
    return PhaseMatrix(x, y, root_of_unity(turns), dephased=True)


def dephase(q: PhaseMatrix) -> PhaseMatrix:
    """Normal form Q_ic Q_00 / (Q_i0 Q_0c)."""
    e = q.entries
    normal = e * e[0, 0] / (e[:, :1] * e[:1, :])
    normal[0, :] = 1.0
    normal[:, 0] = 1.0
    return PhaseMatrix(q.x, q.y, normal, dephased=True)


def phase_array(q: Union[PhaseMatrix, np.ndarray]) -> np.ndarray:
    """Entries of q as a complex array."""
    if isinstance(q, PhaseMatrix):
        return q.entries
    return np.asarray(q, dtype=complex)


def dump_phase_matrix(q: PhaseMatrix, path: Union[str, Path]) -> Path:
    """Write Q in the JSON angle format."""
    path = Path(path)
    payload = {
        "x": q.x.label,
        "y": q.y.label,
        "angles_turns": q.turns.tolist(),
        "dephased": q.dephased,
    }
    path.write_text(json.dumps(payload, indent=2))
    return path


def load_phase_matrix(path: Union[str, Path], dephased: Optional[bool] = None) -> PhaseMatrix:
    """Read Q from {"x": "Z2", "y": "Z2", "angles_turns": [[...]], "dephased": true}.

    Raises:
        FileNotFoundError: If the file does not exist
        PhaseMatrixError: If the payload is malformed
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Q file not found: {path}")
    try:
        payload = json.loads(path.read_text())
        x = AbelianGroup.parse(payload["x"])
        y = AbelianGroup.parse(payload["y"])
        angles = payload["angles_turns"]
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise PhaseMatrixError(f"malformed Q file {path}: {exc}") from exc
    flag = payload.get("dephased", False) if dephased is None else dephased
    return PhaseMatrix.from_angles(x, y, angles, dephased=bool(flag))
