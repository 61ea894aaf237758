import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class SeedSpec:
    """
        Key of one independent random stream.

        :param master_seed: 64-bit unsigned experiment seed
        :param stream_index: replication number
        :param domain: extra key separating unrelated uses of the same master seed
    """
    master_seed: int
    stream_index: int = 0
    domain: Tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.master_seed <= MAX_SEED:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.stream_index < 0:
            raise ValueError(f"stream_index must be nonnegative, got {self.stream_index}")

    def rng(self) -> np.random.Generator:
        # Philox is counter-based; the spawn key picks the stream
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(*self.domain, self.stream_index))
        return np.random.Generator(np.random.Philox(seq))

    def child(self, *domain: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.stream_index, self.domain + tuple(domain))


def derive_seed(master_seed: int, *keys: int) -> int:
    """
    Derive a new 64-bit master seed from a parent seed and integer keys
    """
    seq = np.random.SeedSequence(master_seed, spawn_key=keys)
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def sample_categorical(rng: np.random.Generator, cdf: np.ndarray, size: int) -> np.ndarray:
    """
    Inverse-CDF sampling, one uniform per draw
    """
    u = rng.random(size)
    idx = np.searchsorted(cdf, u, side="right")
    # guards against cdf[-1] falling a rounding error short of 1
    return np.minimum(idx, len(cdf) - 1)


def _gamma_shape_ge_one(rng: np.random.Generator, alpha: float) -> float:
    d = alpha - 1 / 3
    c = 1 / math.sqrt(9 * d)
    while True:
        v = 0.0
        while v <= 0:
            x = rng.standard_normal()
            v = 1 + c * x
        v = v ** 3
        u = rng.random()
        if u < 1 - 0.0331 * x ** 4:
            return d * v
        if math.log(u) < 0.5 * x ** 2 + d * (1 - v + math.log(v)):
            return d * v


def sample_gamma(rng: np.random.Generator, alpha: float, scale: float = 1.0) -> float:
    """
    Gamma(alpha, scale) by the Marsaglia-Tsang squeeze method; alpha < 1 uses the u^(1/alpha) boost.
    """
    if alpha <= 0 or scale <= 0:
        raise ValueError(f"gamma parameters must be positive, got alpha={alpha}, scale={scale}")
    if alpha >= 1:
        return scale * _gamma_shape_ge_one(rng, alpha)
    u = rng.random()
    return scale * _gamma_shape_ge_one(rng, 1 + alpha) * u ** (1 / alpha)


def sample_beta(rng: np.random.Generator, a: float, b: float, size=None):
    """
    Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b)
    """
    if size is None:
        x = sample_gamma(rng, a)
        y = sample_gamma(rng, b)
        return x / (x + y)
    out = np.empty(size, dtype=np.float64)
    flat = out.reshape(-1)
    for k in range(flat.size):
        x = sample_gamma(rng, a)
        y = sample_gamma(rng, b)
        flat[k] = x / (x + y)
    return out


def sample_simplex(rng: np.random.Generator, dim: int) -> np.ndarray:
    """
    Uniform point on the probability simplex via normalized unit-rate exponentials
    """
    e = rng.standard_exponential(dim)
    return e / e.sum()
