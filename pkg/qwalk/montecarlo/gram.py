"""Torus Gram matrices A(q) = q q* and Monte Carlo estimates of walk moments.

For q in T^{MN} with independent uniform entries, the p-th moment of the main
character at generic Q equals (1/N) E[tr A(q)^p] with tr = Tr / M.

Samples come in chunks; chunk c is drawn from Philox keyed by the seed with
counter c << 128, so any chunk can be regenerated on its own and results do
not depend on the number of threads.
"""

import csv
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Union

import numpy as np
from scipy import stats

from qwalk.config import get_policy
from qwalk.errors import EigenSolverError
from qwalk.freeprob import SpectralLaw, dilate, free_poisson_law, law_cdf
from qwalk.moments.reports import MomentReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GramSample:
    """One Gram matrix with the stream coordinates it came from."""
    matrix: np.ndarray
    seed: int
    counter: int


@dataclass(frozen=True, eq=False)
class Histogram:
    """Pooled eigenvalue histogram of A/N, normalised as a density."""
    edges: np.ndarray
    density: np.ndarray
    eigenvalues: np.ndarray
    m: int
    n: int
    samples: int
    seed: int

    @property
    def mass(self) -> float:
        return float(np.sum(self.density * np.diff(self.edges)))

    @property
    def mean(self) -> float:
        return float(np.mean(self.eigenvalues))


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """Philox stream for one chunk."""
    return np.random.Generator(np.random.Philox(key=seed, counter=chunk << 128))


def gram_stream(M: int, N: int, seed: int, chunk: int, size: int) -> np.ndarray:
    """Stack of `size` Gram matrices from chunk `chunk`, shape (size, M, M)."""
    if M < 1 or N < 1:
        raise ValueError(f"M and N must be positive, got {M}, {N}")
    rng = chunk_generator(seed, chunk)
    q = np.exp(2j * np.pi * rng.random((size, M, N)))
    return q @ np.conj(np.swapaxes(q, -1, -2))


def sample_gram(M: int, N: int, seed: int = 0, counter: int = 0) -> GramSample:
    """A(q) for a single sample point q."""
    return GramSample(gram_stream(M, N, seed, counter, 1)[0], seed=seed, counter=counter)


def _chunks(samples: int, chunk_size: int) -> List[int]:
    full, rest = divmod(samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _map_chunks(fn: Callable[[int, int], np.ndarray], sizes: List[int], threads: int) -> np.ndarray:
    tasks = list(enumerate(sizes))
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda task: fn(*task), tasks))
    else:
        parts = [fn(*task) for task in tasks]
    # concatenation in chunk order keeps the reduction deterministic
    return np.concatenate(parts)


def mc_moment(
    M: int,
    N: int,
    p: int,
    samples: int,
    seed: int = 0,
    *,
    threads: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> MomentReport:
    """Monte Carlo estimate of c_p = (1/N) E[Tr(A^p) / M] with its standard error."""
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    if p < 1:
        raise ValueError("p must be at least 1")
    policy = get_policy()
    threads = policy.sampling.threads if threads is None else threads
    chunk_size = policy.sampling.mc_chunk_size if chunk_size is None else chunk_size
    started = time.perf_counter()

    def traces(chunk: int, size: int) -> np.ndarray:
        A = gram_stream(M, N, seed, chunk, size)
        return np.real(np.trace(np.linalg.matrix_power(A, p), axis1=-2, axis2=-1)) / (M * N)

    values = _map_chunks(traces, _chunks(samples, chunk_size), threads)
    estimate = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / np.sqrt(samples))
    elapsed = (time.perf_counter() - started) * 1000
    logger.info(f"mc_moment: M={M}, N={N}, p={p}, samples={samples}, estimate={estimate:.6g} +- {stderr:.2g}")
    return MomentReport(
        method="montecarlo",
        model=f"torus({M}x{N})",
        p=p,
        params={"M": M, "N": N, "samples": samples, "chunk_size": chunk_size},
        value=estimate,
        uncertainty=stderr,
        seed=seed,
        wall_time_ms=elapsed,
    )


def mc_spectrum(
    M: int,
    N: int,
    samples: int,
    seed: int = 0,
    bins: int = 50,
    *,
    threads: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> Histogram:
    """Pooled eigenvalues of A/N over the samples, with a density histogram.

    Raises:
        EigenSolverError: If the Hermitian eigensolve fails
    """
    if M < 2:
        raise ValueError(f"spectra need M >= 2, got {M}")
    policy = get_policy()
    threads = policy.sampling.threads if threads is None else threads
    chunk_size = policy.sampling.mc_chunk_size if chunk_size is None else chunk_size

    def eigenvalues(chunk: int, size: int) -> np.ndarray:
        A = gram_stream(M, N, seed, chunk, size) / N
        try:
            return np.linalg.eigvalsh(A).ravel()
        except np.linalg.LinAlgError as exc:
            raise EigenSolverError(f"eigvalsh failed on chunk {chunk}: {exc}") from exc

    eigs = _map_chunks(eigenvalues, _chunks(samples, chunk_size), threads)
    density, edges = np.histogram(eigs, bins=bins, density=True)
    logger.debug(f"mc_spectrum: {eigs.size} eigenvalues in {bins} bins")
    return Histogram(edges=edges, density=density, eigenvalues=eigs, m=M, n=N, samples=samples, seed=seed)


def reference_law(M: int, N: int) -> SpectralLaw:
    """Large-size law of the eigenvalues of A/N: D_{M/N}(pi_{N/M})."""
    return dilate(free_poisson_law(N / M), M / N)


def spectrum_ks(hist: Histogram, law: Optional[SpectralLaw] = None) -> float:
    """Kolmogorov-Smirnov distance of the pooled eigenvalues to a law's CDF."""
    law = reference_law(hist.m, hist.n) if law is None else law
    result = stats.kstest(hist.eigenvalues, lambda x: law_cdf(law, x))
    return float(result.statistic)


def histogram_csv(hist: Histogram, path: Union[str, Path]) -> Path:
    """Write bin_left, bin_right, density rows."""
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["bin_left", "bin_right", "density"])
        for left, right, value in zip(hist.edges[:-1], hist.edges[1:], hist.density):
            writer.writerow([float(left), float(right), float(value)])
    logger.info(f"histogram_csv: wrote {hist.density.size} bins to {path}")
    return path
