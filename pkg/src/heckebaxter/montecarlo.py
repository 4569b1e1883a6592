"""Seeded sampling on O(n) and matrix space, plus a block Monte Carlo engine.

Reproducibility contract: a (seed, stream_id) pair fixes every draw.  The
expectation engine splits the sample budget into fixed-size blocks, derives
one child generator per block from (seed, stream_id, block), and merges the
per-block partial sums in block order.  Results are therefore bit-identical
for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFiniteIntegrandError
from .exterior import minor_batch
from .params import Signature, graded_dimension

DEFAULT_BLOCK_SIZE = 1 << 16


class RandomStream:
    """Deterministic random source addressed by (seed, stream_id).

    `generator()` returns a persistent generator for sequential draws;
    `block_generator(b)` derives an independent child for block number b;
    `substream(k)` derives an independent stream for a sub-experiment.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        if seed < 0 or stream_id < 0:
            raise ValueError("seed and stream_id must be non-negative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._sequential = None

    def generator(self) -> np.random.Generator:
        if self._sequential is None:
            self._sequential = self.block_generator(0)
        return self._sequential

    def block_generator(self, block: int) -> np.random.Generator:
        key = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, block))
        return np.random.default_rng(key)

    def substream(self, offset: int) -> "RandomStream":
        return RandomStream(self.seed, (self.stream_id + 1) * 1024 + offset)

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with its standard error and the sample count.

    For complex estimates the standard error combines the real and
    imaginary components in quadrature, giving one scalar uncertainty.
    """

    mean: complex
    stderr: float
    samples: int

    def z_score(self, reference: complex) -> float:
        """Distance from a reference value in units of the standard error."""
        if self.stderr == 0.0:
            return 0.0 if self.mean == reference else math.inf
        return abs(self.mean - reference) / self.stderr

    def combined_sigma(self, other: "MCEstimate") -> float:
        return math.hypot(self.stderr, other.stderr)

    def agrees_with(self, other: "MCEstimate", tol_sigma: float = 4.0) -> bool:
        return abs(self.mean - other.mean) <= tol_sigma * self.combined_sigma(other)


def haar_orthogonal_batch(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Haar-distributed sample of `count` matrices from O(n).

    Gaussian matrix, QR, then the Q-columns are flipped to make the
    R-diagonal positive; both determinant components come out equally likely.
    """
    z = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(z)
    d = np.where(np.diagonal(r, axis1=-2, axis2=-1) < 0, -1.0, 1.0)
    return q * d[..., None, :]


def gaussian_matrix_batch(rng: np.random.Generator, n: int, c: float, count: int) -> np.ndarray:
    """Matrices with i.i.d. N(0, 1/(2c)) entries, the density proportional
    to e^(-c tr(g^T g))."""
    return rng.standard_normal((count, n, n)) / math.sqrt(2.0 * c)


def haar_orthogonal_sampler(n: int) -> Callable[[np.random.Generator, int], np.ndarray]:
    return lambda rng, count: haar_orthogonal_batch(rng, n, count)


def gaussian_matrix_sampler(n: int, c: float) -> Callable[[np.random.Generator, int], np.ndarray]:
    if c <= 0:
        raise ValueError("rate c must be positive")
    return lambda rng, count: gaussian_matrix_batch(rng, n, c, count)


def sample_orthogonal(n: int, stream: RandomStream) -> np.ndarray:
    """Draw the next Haar-orthogonal matrix from the stream."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return haar_orthogonal_batch(stream.generator(), n, 1)[0]


def sample_gaussian_matrix(n: int, c: float, stream: RandomStream) -> np.ndarray:
    """Draw the next Gaussian matrix at rate c from the stream."""
    if c <= 0:
        raise ValueError("rate c must be positive")
    return gaussian_matrix_batch(stream.generator(), n, c, 1)[0]


def _block_partial(f, sampler, rng, count, offset):
    samples = sampler(rng, count)
    values = np.asarray(f(samples))
    if values.shape != (count,):
        raise ValueError(
            f"integrand returned shape {values.shape} for a block of {count} samples"
        )
    finite = np.isfinite(values.real) & np.isfinite(values.imag)
    if not np.all(finite):
        bad = int(np.argmin(finite))
        return None, offset + bad
    return (
        complex(values.sum()),
        float((values.real**2).sum()),
        float((values.imag**2).sum()),
    ), None


def mc_expectation(
    f: Callable[[np.ndarray], np.ndarray],
    sampler: Callable[[np.random.Generator, int], np.ndarray],
    n_samples: int,
    stream: RandomStream,
    *,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> MCEstimate:
    """Sample mean and standard error of f over the sampler's distribution.

    `f` maps a stacked sample array (count, ...) to a complex array of
    length count.  The estimate is deterministic for fixed (stream,
    n_samples, block_size) regardless of `workers`.

    Raises `NonFiniteIntegrandError` naming the first offending sample index
    (in block order) if the integrand misbehaves.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    blocks = []
    start = 0
    index = 0
    while start < n_samples:
        count = min(block_size, n_samples - start)
        blocks.append((index, start, count))
        start += count
        index += 1

    def run(block):
        idx, offset, count = block
        return _block_partial(f, sampler, stream.block_generator(idx), count, offset)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(b) for b in blocks]

    total = 0j
    total_re2 = 0.0
    total_im2 = 0.0
    for partial, bad_index in results:
        if bad_index is not None:
            raise NonFiniteIntegrandError(bad_index)
        s, re2, im2 = partial
        total += s
        total_re2 += re2
        total_im2 += im2

    mean = total / n_samples
    var_re = max(total_re2 / n_samples - mean.real**2, 0.0) * n_samples / (n_samples - 1)
    var_im = max(total_im2 / n_samples - mean.imag**2, 0.0) * n_samples / (n_samples - 1)
    stderr = math.sqrt((var_re + var_im) / n_samples)
    return MCEstimate(mean=mean, stderr=stderr, samples=n_samples)


def schur_orthogonality_check(
    grade1: int,
    grade2: int,
    e1: Signature,
    e1p: Signature,
    e2: Signature,
    e2p: Signature,
    n_samples: int,
    stream: RandomStream,
    *,
    workers: int = 1,
) -> MCEstimate:
    """Monte Carlo estimate of the paired matrix-element integral
    int dk (v_e1, pi(k) v_e1p) (v_e2, pi(k^-1) v_e2p) over Haar O(n).

    Compare against `schur_orthogonality_reference`.
    """
    e1, e1p, e2, e2p = map(Signature.of, (e1, e1p, e2, e2p))
    n = len(e1)
    if not (len(e1p) == len(e2) == len(e2p) == n):
        raise ValueError("signatures must share one length")
    if (e1.weight, e1p.weight) != (grade1, grade1) or (e2.weight, e2p.weight) != (grade2, grade2):
        raise ValueError("signature weights must match their stated grades")

    def integrand(k):
        kt = np.swapaxes(k, -1, -2)
        return minor_batch(k, e1, e1p) * minor_batch(kt, e2, e2p)

    return mc_expectation(
        integrand, haar_orthogonal_sampler(n), n_samples, stream, workers=workers
    )


def schur_orthogonality_reference(
    grade1: int, grade2: int, e1: Signature, e1p: Signature, e2: Signature, e2p: Signature
) -> float:
    """Closed-form value of the paired integral: inequivalent grades are
    orthogonal, and within one grade it is delta pairings over the dimension."""
    e1, e1p, e2, e2p = map(Signature.of, (e1, e1p, e2, e2p))
    if grade1 != grade2:
        return 0.0
    d = graded_dimension(len(e1), grade1)
    return (1.0 if e1 == e2p else 0.0) * (1.0 if e2 == e1p else 0.0) / d


def compact_convolution(
    f1: Callable[[np.ndarray], np.ndarray],
    f2: Callable[[np.ndarray], np.ndarray],
    k_eval: np.ndarray,
    n_samples: int,
    stream: RandomStream,
    *,
    workers: int = 1,
) -> MCEstimate:
    """Convolution (f1 * f2)(k_eval) = int dk f1(k) f2(k^-1 k_eval) on O(n).

    f1 and f2 must accept stacked (count, n, n) input.
    """
    k_eval = np.asarray(k_eval, dtype=float)
    n = k_eval.shape[-1]
    if np.linalg.norm(k_eval.T @ k_eval - np.eye(n)) > 1e-8:
        raise ValueError("evaluation point must be orthogonal")

    def integrand(k):
        shifted = np.swapaxes(k, -1, -2) @ k_eval
        return np.asarray(f1(k)) * np.asarray(f2(shifted))

    return mc_expectation(
        integrand, haar_orthogonal_sampler(n), n_samples, stream, workers=workers
    )
