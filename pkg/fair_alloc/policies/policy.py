from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from fair_alloc.arrivals import ArrivalDistribution
from fair_alloc.policies.schedule import ResolveSchedule
from fair_alloc.solvers.hindsight import solve_static
from fair_alloc.solvers.static_policy import SolveResult, SolverConfig, DEFAULT_CONFIG
from fair_alloc.welfare import WelfareParam


@dataclass
class PolicyState:
    """
        Everything a policy carries along one trajectory.

        :param horizon: T
        :param utilities: cumulative utilities B_t
        :param policy: static policy in force
        :param t: periods elapsed
        :param next_epoch: index into the schedule of the next re-solve (schedule-driven policies)
        :param n_solves: solves performed so far, the initial one included
        :param last_solve: result of the latest solve, reused as warm start
        :param schedule: re-solving schedule, if the policy has one
    """
    horizon: int
    utilities: np.ndarray
    policy: np.ndarray
    t: int = 0
    next_epoch: int = 1
    n_solves: int = 0
    last_solve: Optional[SolveResult] = None
    schedule: Optional[ResolveSchedule] = None

    @property
    def done(self) -> bool:
        return self.t >= self.horizon


class Policy(ABC):
    """
        Online allocation policy. Policy objects only hold configuration; all per-trajectory
        data lives in the PolicyState returned by `reset`, so one policy can drive many
        trajectories at once.

        :param q: welfare exponent the policy optimizes
        :param cfg: solver tolerances
    """

    def __init__(self, q, cfg: SolverConfig = DEFAULT_CONFIG):
        self.welfare = WelfareParam.of(q)
        self.cfg = cfg

    @property
    @abstractmethod
    def name(self) -> str: raise NotImplementedError

    @abstractmethod
    def reset(self, dist: ArrivalDistribution, horizon: int) -> PolicyState: raise NotImplementedError

    @abstractmethod
    def before_period(self, state: PolicyState, dist: ArrivalDistribution): raise NotImplementedError

    @abstractmethod
    def next_event(self, state: PolicyState) -> int: raise NotImplementedError

    def solve(self, state: PolicyState, dist: ArrivalDistribution) -> SolveResult:
        """
        Solve the fluid problem updated with the utilities so far and the remaining horizon
        """
        remaining = state.horizon - state.t
        result = solve_static(self.welfare, dist.support, remaining * dist.probs, state.utilities,
                              self.cfg, warm=state.last_solve)
        state.last_solve = result
        state.n_solves += 1
        return result

    def _initial_state(self, dist: ArrivalDistribution, horizon: int, schedule=None) -> PolicyState:
        if horizon < 0:
            raise ValueError(f"horizon must be nonnegative, got {horizon}")
        n_types, n_agents = dist.support.shape
        return PolicyState(horizon, np.zeros(n_agents), np.full((n_types, n_agents), 1 / n_agents),
                           schedule=schedule)

    def step(self, state: PolicyState, dist: ArrivalDistribution, arrived: int) -> np.ndarray:
        """
        Allocate the next arrival

        :param state: trajectory state, updated in place
        :param dist: arrival distribution
        :param arrived: type index of the arrival
        :return: allocation x_t on the n-simplex
        """
        if state.done:
            raise ValueError(f"cannot step past the horizon T={state.horizon}")
        if not 0 <= arrived < dist.n_types:
            raise ValueError(f"arrival type {arrived} outside [0, {dist.n_types})")
        self.before_period(state, dist)
        x = state.policy[arrived].copy()
        state.utilities = state.utilities + dist.support[arrived] * x
        state.t += 1
        return x

    @staticmethod
    @numba.njit
    def _accumulate_numba(utilities, types, gains):
        for t in range(types.shape[0]):
            row = types[t]
            for i in range(utilities.shape[0]):
                utilities[i] += gains[row, i]
        return utilities

    def play(self, state: PolicyState, dist: ArrivalDistribution, types) -> PolicyState:
        """
        Advance through a run of arrivals; identical to calling `step` on each, but
        every static stretch between re-solves is accumulated in one pass.
        """
        types = np.ascontiguousarray(types, dtype=np.int64)
        if state.t + types.size > state.horizon:
            raise ValueError(f"{types.size} arrivals would step past the horizon T={state.horizon}")
        if types.size and (types.min() < 0 or types.max() >= dist.n_types):
            raise ValueError(f"arrival type outside [0, {dist.n_types})")
        pos = 0
        while pos < types.size:
            self.before_period(state, dist)
            stop = min(types.size, pos + self.next_event(state) - state.t)
            gains = dist.support * state.policy
            state.utilities = self._accumulate_numba(state.utilities.copy(), types[pos:stop], gains)
            state.t += stop - pos
            pos = stop
        return state
