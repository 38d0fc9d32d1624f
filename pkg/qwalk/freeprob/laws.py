"""Spectral laws built from atoms and algebraic-weight density pieces.

A density piece on [a, b] has density smooth(x) (x - a)^e1 (b - x)^e2, so
square-root edges and the 1/sqrt(x) edge of pi_1 are integrated with the
'alg' weight of scipy.integrate.quad.
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Tuple, Union

import numpy as np
from scipy import integrate

from qwalk.errors import QuadratureError

from .partitions import narayana_count

logger = logging.getLogger(__name__)

_QUAD_EPSABS = 1e-8
_QUAD_LIMIT = 200


def _quad(func: Callable[[float], float], a: float, b: float, wvar: Tuple[float, float]) -> float:
    result = integrate.quad(
        func, a, b, weight="alg", wvar=wvar, epsabs=_QUAD_EPSABS, limit=_QUAD_LIMIT, full_output=1
    )
    if len(result) > 3:
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: {result[3]}")
    return float(result[0])


@dataclass(frozen=True)
class DensityPiece:
    """density(x) = smooth(x) (x - a)^e1 (b - x)^e2 on [a, b]."""
    a: float
    b: float
    smooth: Callable[[float], float]
    wvar: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"density piece needs a < b, got [{self.a}, {self.b}]")
        if min(self.wvar) <= -1:
            raise ValueError(f"edge exponents must exceed -1, got {self.wvar}")

    def density(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > self.a) & (x < self.b)
        safe = np.where(inside, x, (self.a + self.b) / 2)
        e1, e2 = self.wvar
        values = np.vectorize(self.smooth, otypes=[float])(safe) * (safe - self.a) ** e1 * (self.b - safe) ** e2
        return np.where(inside, values, 0.0)

    def moment(self, p: int) -> float:
        return _quad(lambda x: x ** p * self.smooth(x), self.a, self.b, self.wvar)

    def cdf(self, x: float) -> float:
        if x <= self.a:
            return 0.0
        if x >= self.b:
            return self.moment(0)
        e1, e2 = self.wvar
        return _quad(lambda t: self.smooth(t) * (self.b - t) ** e2, self.a, x, (e1, 0.0))


@dataclass(frozen=True)
class SpectralLaw:
    """Finite measure on the real line: atoms plus density pieces."""
    atoms: Tuple[Tuple[float, float], ...] = ()
    pieces: Tuple[DensityPiece, ...] = ()
    total: float = 1.0
    name: str = "law"

    def __post_init__(self):
        atoms = tuple((float(x), float(w)) for x, w in self.atoms if w != 0)
        if any(w < 0 for _, w in atoms):
            raise ValueError(f"{self.name}: atom masses must be nonnegative")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @property
    def atom_mass(self) -> float:
        return sum(w for _, w in self.atoms)

    def continuous_mass(self) -> float:
        return sum(piece.moment(0) for piece in self.pieces)

    def mass_defect(self) -> float:
        return abs(self.atom_mass + self.continuous_mass() - self.total)

    def validate(self, tol: float = 1e-6) -> "SpectralLaw":
        """Check that atoms and quadrature add up to the declared total.

        Raises:
            QuadratureError: If the masses disagree beyond tol
        """
        defect = self.mass_defect()
        if defect > tol:
            raise QuadratureError(f"{self.name}: mass defect {defect:.3e} exceeds {tol}")
        return self

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return sum((piece.density(x) for piece in self.pieces), np.zeros_like(x))


def law_moment(law: SpectralLaw, p: int) -> float:
    """Sum of atom mass * location^p plus the quadrature of x^p density."""
    atoms = sum(w * (1.0 if p == 0 else x ** p) for x, w in law.atoms)
    return atoms + sum(piece.moment(p) for piece in law.pieces)


def law_cdf(law: SpectralLaw, x):
    """law((-inf, x]) for a scalar or an array of points."""
    def single(t: float) -> float:
        atoms = sum(w for loc, w in law.atoms if loc <= t)
        return atoms + sum(piece.cdf(t) for piece in law.pieces)

    if np.ndim(x) == 0:
        return single(float(x))
    return np.array([single(float(t)) for t in np.asarray(x, dtype=float)])


def free_poisson_law(t: float) -> SpectralLaw:
    """Marchenko-Pastur law pi_t with p-th moment sum over NC(p) of t^{|pi|}."""
    if t < 0:
        raise ValueError(f"free Poisson rate must be nonnegative, got {t}")
    if t == 0:
        return SpectralLaw(atoms=((0.0, 1.0),), name="pi_0")
    a, b = (1 - math.sqrt(t)) ** 2, (1 + math.sqrt(t)) ** 2
    if t == 1:
        piece = DensityPiece(0.0, 4.0, lambda x: 1 / (2 * math.pi), (-0.5, 0.5))
    else:
        piece = DensityPiece(a, b, lambda x: 1 / (2 * math.pi * x), (0.5, 0.5))
    atoms = ((0.0, 1 - t),) if t < 1 else ()
    return SpectralLaw(atoms=atoms, pieces=(piece,), name=f"pi_{t:g}").validate()


def _dilate_piece(piece: DensityPiece, r: float) -> DensityPiece:
    e1, e2 = piece.wvar
    factor = r ** (-1 - e1 - e2)
    smooth = piece.smooth
    return DensityPiece(r * piece.a, r * piece.b, lambda x: smooth(x / r) * factor, piece.wvar)


def dilate(law: SpectralLaw, r: float) -> SpectralLaw:
    """D_r(law), the law of rX when X has law `law`.

    Raises:
        QuadratureError: If the input law does not carry its declared mass
    """
    if r <= 0:
        raise ValueError(f"dilation factor must be positive, got {r}")
    return SpectralLaw(
        atoms=tuple((r * x, w) for x, w in law.atoms),
        pieces=tuple(_dilate_piece(piece, r) for piece in law.pieces),
        total=law.total,
        name=f"D_{r:g}({law.name})",
    ).validate()


def scale_mass(law: SpectralLaw, w: float) -> SpectralLaw:
    """w * law."""
    if w < 0:
        raise ValueError(f"mass factor must be nonnegative, got {w}")
    pieces = tuple(
        DensityPiece(piece.a, piece.b, (lambda s: lambda x: w * s(x))(piece.smooth), piece.wvar)
        for piece in law.pieces
    )
    return SpectralLaw(
        atoms=tuple((x, w * m) for x, m in law.atoms),
        pieces=pieces,
        total=w * law.total,
        name=f"{w:g}*{law.name}",
    ).validate()


def mixture(*laws: SpectralLaw) -> SpectralLaw:
    """Sum of measures; atoms at the same location are merged."""
    merged = {}
    for law in laws:
        for x, w in law.atoms:
            merged[x] = merged.get(x, 0.0) + w
    return SpectralLaw(
        atoms=tuple(sorted(merged.items())),
        pieces=tuple(piece for law in laws for piece in law.pieces),
        total=sum(law.total for law in laws),
        name="+".join(law.name for law in laws),
    ).validate()


@dataclass(frozen=True)
class AsymptoticLaw:
    """Large-K law of the main character at M = alpha K, N = beta K, with its Narayana predictor.

    The continuous piece has density
    (1/(alpha beta K^2)) sqrt(4 alpha beta K^2 - (x - alpha K - beta K)^2) / (2 pi x)
    on [(sqrt a - sqrt b)^2 K, (sqrt a + sqrt b)^2 K], mass 1/(max(alpha, beta) K).
    The atom at 0 carries the rest.
    """
    alpha: float
    beta: float
    K: float
    law: SpectralLaw = field(repr=False)

    def predicted_moment(self, p: int) -> float:
        """K^{p-1} sum_r Nar(p, r) alpha^{r-1} beta^{p-r}."""
        total = sum(
            narayana_count(p, r) * self.alpha ** (r - 1) * self.beta ** (p - r) for r in range(1, p + 1)
        )
        return self.K ** (p - 1) * total

    @property
    def continuous_mass(self) -> float:
        return 1.0 / (max(self.alpha, self.beta) * self.K)


def asymptotic_law(alpha: float, beta: float, K: float) -> AsymptoticLaw:
    """Law whose moments are the large-K walk moments at M = alpha K, N = beta K."""
    if min(alpha, beta, K) <= 0:
        raise ValueError(f"alpha, beta and K must be positive, got {alpha}, {beta}, {K}")
    # below 1 the continuous mass exceeds 1 and the atom at 0 would be negative
    if max(alpha, beta) * K < 1:
        raise ValueError(f"max(alpha, beta) K must be at least 1, got {max(alpha, beta) * K}")
    scale = alpha * beta * K * K
    a = (math.sqrt(alpha) - math.sqrt(beta)) ** 2 * K
    b = (math.sqrt(alpha) + math.sqrt(beta)) ** 2 * K
    if a == 0.0:
        piece = DensityPiece(0.0, b, lambda x: 1 / (2 * math.pi * scale), (-0.5, 0.5))
    else:
        piece = DensityPiece(a, b, lambda x: 1 / (2 * math.pi * scale * x), (0.5, 0.5))
    atom = 1.0 - 1.0 / (max(alpha, beta) * K)
    law = SpectralLaw(
        atoms=((0.0, atom),) if atom > 0 else (),
        pieces=(piece,),
        name=f"asympt(alpha={alpha:g}, beta={beta:g}, K={K:g})",
    )
    logger.debug(f"asymptotic_law: support [{a:.4g}, {b:.4g}], atom {atom:.4g}")
    return AsymptoticLaw(alpha=alpha, beta=beta, K=K, law=law.validate())


def export_law_csv(law: SpectralLaw, path: Union[str, Path], points: int = 400) -> Path:
    """Write (section, x, value) rows: density samples, then atoms."""
    path = Path(path)
    rows: List[Tuple[str, float, float]] = []
    for piece in law.pieces:
        # open interval, edges may be singular
        xs = np.linspace(piece.a, piece.b, points + 2)[1:-1]
        rows.extend(("density", float(x), float(f)) for x, f in zip(xs, piece.density(xs)))
    rows.extend(("atom", x, w) for x, w in law.atoms)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["section", "x", "value"])
        writer.writerows(rows)
    logger.info(f"export_law_csv: wrote {len(rows)} rows to {path}")
    return path
