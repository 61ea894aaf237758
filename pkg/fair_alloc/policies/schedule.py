import math
from dataclasses import dataclass
from typing import Tuple

DEFAULT_ETA = 1.05
MIN_SCHEDULED_HORIZON = 4


@dataclass(frozen=True)
class ResolveSchedule:
    """
        Backward re-solving epochs and their thresholds.

        :param horizon: T
        :param eta: schedule growth parameter
        :param n_agents: n, enters the thresholds
        :param K: number of re-solving epochs after t = 0 before clamping
        :param epochs: distinct epochs t_0* = 0 < t_1* < ... (clamped and merged)
        :param thresholds: gamma for each epoch in `epochs`
    """
    horizon: int
    eta: float
    n_agents: int
    K: int
    epochs: Tuple[int, ...]
    thresholds: Tuple[float, ...]

    def __len__(self):
        return len(self.epochs)

    def end_of(self, k: int) -> int:
        # t_{k+1}*, with t_{K+1}* = T
        return self.epochs[k + 1] if k + 1 < len(self.epochs) else self.horizon

    def to_dict(self) -> dict:
        return {
            "T": self.horizon,
            "eta": self.eta,
            "n": self.n_agents,
            "K": self.K,
            "epochs": list(self.epochs),
            "thresholds": list(self.thresholds),
        }


def n_epochs(horizon: int, eta: float) -> int:
    """
    K = ceil(log log T / log eta), 0 below the smallest horizon with a schedule
    """
    if horizon < MIN_SCHEDULED_HORIZON:
        return 0
    return max(0, math.ceil(math.log(math.log(horizon)) / math.log(eta)))


def make_schedule(horizon: int, eta: float = DEFAULT_ETA, n_agents: int = 2) -> ResolveSchedule:
    """
    Build the backward schedule t_k* = T - floor(exp(eta^(K-k))) with thresholds
    gamma_k = (T - t_{k+1}*) / (2 n^2 (T - t_k*)) and gamma_K = 0.

    Epochs at or below 0 are clamped to 0; equal epochs are merged, keeping the later threshold.

    :param horizon: T >= 1
    :param eta: growth parameter, > 1
    :param n_agents: n >= 1
    """
    if horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    if not eta > 1:
        raise ValueError(f"eta must be greater than 1, got {eta}")
    if n_agents < 1:
        raise ValueError(f"n_agents must be at least 1, got {n_agents}")

    K = n_epochs(horizon, eta)
    raw = [0] + [max(0, horizon - math.floor(math.exp(eta ** (K - k)))) for k in range(1, K + 1)]
    raw.append(horizon)  # sentinel t_{K+1}*

    gammas = []
    for k in range(K + 1):
        if k == K:
            gammas.append(0.0)
        else:
            gammas.append((horizon - raw[k + 1]) / (2 * n_agents ** 2 * (horizon - raw[k])))

    epochs, thresholds = [], []
    for t, gamma in zip(raw[:-1], gammas):
        if epochs and epochs[-1] == t:
            thresholds[-1] = gamma
        else:
            epochs.append(t)
            thresholds.append(gamma)
    return ResolveSchedule(horizon, float(eta), n_agents, K, tuple(epochs), tuple(thresholds))
