import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from fair_alloc.utils.sampling import SeedSpec, sample_categorical

PROB_TOLERANCE = 1e-12


class DistributionFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ArrivalDistribution:
    """
        Finite-support IID law of the marginal utility vectors.

        :param support: L x n matrix, row l is the utility vector beta_l of a type-l arrival
        :param probs: length-L probability vector p
    """
    support: np.ndarray
    probs: np.ndarray
    cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        support = np.array(self.support, dtype=np.float64)
        probs = np.array(self.probs, dtype=np.float64)
        if support.ndim != 2 or support.shape[0] < 1 or support.shape[1] < 1:
            raise ValueError(f"support must be an L x n matrix with L, n >= 1, got shape {support.shape}")
        if probs.shape != (support.shape[0],):
            raise ValueError(f"probs must have length L={support.shape[0]}, got shape {probs.shape}")
        for row, beta in enumerate(support):
            if not np.all(np.isfinite(beta)) or np.any(beta < 0) or np.any(beta > 1):
                raise ValueError(f"support row {row} has entries outside [0, 1]: {beta.tolist()}")
        for row, p in enumerate(probs):
            if not p > 0:
                raise ValueError(f"probability of type {row} must be strictly positive, got {p}")
        if abs(probs.sum() - 1) > PROB_TOLERANCE:
            raise ValueError(f"probabilities must sum to 1, got {probs.sum()!r}")
        support.setflags(write=False)
        probs.setflags(write=False)
        cdf = np.cumsum(probs)
        cdf.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "cdf", cdf)

    @property
    def n_types(self) -> int:
        return self.support.shape[0]

    @property
    def n_agents(self) -> int:
        return self.support.shape[1]

    def digest(self) -> str:
        h = hashlib.sha1()
        h.update(np.asarray(self.support.shape, dtype=np.int64).tobytes())
        h.update(self.support.tobytes())
        h.update(self.probs.tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, ArrivalDistribution):
            return NotImplemented
        return np.array_equal(self.support, other.support) and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash(self.digest())

    def to_dict(self) -> dict:
        return {"support": self.support.tolist(), "probs": self.probs.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> "ArrivalDistribution":
        if not isinstance(data, dict) or "support" not in data or "probs" not in data:
            raise DistributionFormatError('distribution must be an object with "support" and "probs" keys')
        try:
            return cls(np.asarray(data["support"], dtype=np.float64), np.asarray(data["probs"], dtype=np.float64))
        except (TypeError, ValueError) as e:
            raise DistributionFormatError(str(e)) from None

    @classmethod
    def from_json(cls, text: str, source: str = "<string>") -> "ArrivalDistribution":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DistributionFormatError(f"{source}, line {e.lineno}, column {e.colno}: {e.msg}") from None
        try:
            return cls.from_dict(data)
        except DistributionFormatError as e:
            raise DistributionFormatError(f"{source}: {e}") from None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ArrivalDistribution":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise DistributionFormatError(f"cannot read distribution file {path}: {e.strerror}") from None
        return cls.from_json(text, source=str(path))


@dataclass(frozen=True, eq=False)
class ArrivalSequence:
    """
        Realized type indices b_1..b_T (0-based type numbers)
    """
    types: np.ndarray

    @property
    def horizon(self) -> int:
        return len(self.types)

    def __len__(self):
        return len(self.types)


@dataclass(frozen=True, eq=False)
class TypeCounts:
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def key(self) -> tuple:
        return tuple(int(c) for c in self.counts)


def sample_sequence(dist: ArrivalDistribution, horizon: int, seed: SeedSpec) -> ArrivalSequence:
    """
    Draw T i.i.d. arrival types; deterministic given the seed.

    :param dist: the arrival distribution
    :param horizon: number of periods T >= 0
    :param seed: stream key
    """
    if horizon < 0:
        raise ValueError(f"horizon must be nonnegative, got {horizon}")
    if horizon == 0:
        return ArrivalSequence(np.zeros(0, dtype=np.int64))
    rng = seed.rng()
    return ArrivalSequence(sample_categorical(rng, dist.cdf, horizon).astype(np.int64))


def count_types(seq: ArrivalSequence, n_types: int) -> TypeCounts:
    types = np.asarray(seq.types, dtype=np.int64)
    if types.size and (types.min() < 0 or types.max() >= n_types):
        raise ValueError(f"corrupt arrival sequence: type index outside [0, {n_types})")
    return TypeCounts(np.bincount(types, minlength=n_types).astype(np.int64))


def binomial_abs_deviation(horizon: int, reps: int, seed: SeedSpec) -> float:
    """
    Monte Carlo estimate of E|N - T/2| / sqrt(T) for N ~ Bin(T, 1/2); tends to 1/sqrt(2 pi)
    """
    if horizon < 1 or reps < 1:
        raise ValueError(f"need horizon >= 1 and reps >= 1, got {horizon}, {reps}")
    n = seed.rng().binomial(horizon, 0.5, size=reps)
    return float(np.mean(np.abs(n - horizon / 2)) / np.sqrt(horizon))
