from fair_alloc.arrivals import ArrivalDistribution
from fair_alloc.policies.policy import Policy, PolicyState


class FluidPolicy(Policy):
    """
        Solves the fluid problem once at t = 0 and allocates by that static policy for the whole horizon.
    """

    @property
    def name(self) -> str:
        return "f"

    def reset(self, dist: ArrivalDistribution, horizon: int) -> PolicyState:
        state = self._initial_state(dist, horizon)
        state.policy = self.solve(state, dist).policy
        return state

    def before_period(self, state: PolicyState, dist: ArrivalDistribution):
        pass

    def next_event(self, state: PolicyState) -> int:
        return state.horizon
