from dataclasses import dataclass
from typing import Optional

import numpy as np

from fair_alloc.arrivals import ArrivalDistribution
from fair_alloc.policies.fluid_policy import FluidPolicy
from fair_alloc.policies.policy import Policy, PolicyState
from fair_alloc.policies.resolving_policy import FrequentResolvingPolicy, BackwardResolvingPolicy
from fair_alloc.policies.schedule import DEFAULT_ETA
from fair_alloc.solvers.static_policy import SolverConfig, DEFAULT_CONFIG
from fair_alloc.welfare import WelfareParam

POLICY_NAMES = ("f", "fr", "bir", "birt")
SCHEDULED = ("bir", "birt")


@dataclass(frozen=True)
class PolicyKind:
    """
        Which policy to run and for which welfare metric.

        :param name: one of f, fr, bir, birt
        :param welfare: welfare exponent
        :param eta: schedule parameter, only for bir and birt
    """
    name: str
    welfare: WelfareParam
    eta: Optional[float] = None

    def __post_init__(self):
        if self.name not in POLICY_NAMES:
            raise ValueError(f"unknown policy {self.name!r}, expected one of {', '.join(POLICY_NAMES)}")
        if self.name in SCHEDULED:
            if self.eta is None or not self.eta > 1:
                raise ValueError(f"policy {self.name} needs eta > 1, got {self.eta}")
        elif self.eta is not None:
            raise ValueError(f"policy {self.name} has no schedule, eta must be None")

    @classmethod
    def parse(cls, token: str, q, eta: float = DEFAULT_ETA) -> "PolicyKind":
        name = token.strip().lower()
        return cls(name, WelfareParam.of(q), float(eta) if name in SCHEDULED else None)

    @property
    def scheduled(self) -> bool:
        return self.name in SCHEDULED

    def __str__(self):
        suffix = f", eta={self.eta}" if self.scheduled else ""
        return f"{self.name}(q={self.welfare}{suffix})"


def make_policy(kind: PolicyKind, cfg: SolverConfig = DEFAULT_CONFIG) -> Policy:
    if kind.name == "f":
        return FluidPolicy(kind.welfare, cfg)
    if kind.name == "fr":
        return FrequentResolvingPolicy(kind.welfare, cfg)
    return BackwardResolvingPolicy(kind.welfare, kind.eta, thresholded=kind.name == "birt", cfg=cfg)


def init_policy(kind: PolicyKind, dist: ArrivalDistribution, horizon: int,
                cfg: SolverConfig = DEFAULT_CONFIG) -> PolicyState:
    return make_policy(kind, cfg).reset(dist, horizon)


def step(state: PolicyState, kind: PolicyKind, dist: ArrivalDistribution, horizon: int, arrived: int,
         cfg: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    if horizon != state.horizon:
        raise ValueError(f"state was initialized for T={state.horizon}, got T={horizon}")
    return make_policy(kind, cfg).step(state, dist, arrived)
