from fair_alloc.arrivals import ArrivalDistribution
from fair_alloc.policies.policy import Policy, PolicyState
from fair_alloc.policies.schedule import DEFAULT_ETA, make_schedule
from fair_alloc.policies.thresholding import threshold_policy
from fair_alloc.solvers.static_policy import SolverConfig, DEFAULT_CONFIG


class FrequentResolvingPolicy(Policy):
    """
        Re-solves the fluid problem with the utilities accrued so far before every allocation,
        T solves per trajectory.
    """

    @property
    def name(self) -> str:
        return "fr"

    def reset(self, dist: ArrivalDistribution, horizon: int) -> PolicyState:
        state = self._initial_state(dist, horizon)
        state.policy = self.solve(state, dist).policy
        return state

    def before_period(self, state: PolicyState, dist: ArrivalDistribution):
        # one solve per elapsed period, the t = 0 solve done in reset
        if state.n_solves <= state.t:
            state.policy = self.solve(state, dist).policy

    def next_event(self, state: PolicyState) -> int:
        return state.t + 1


class BackwardResolvingPolicy(Policy):
    """
        Re-solves only at the backward epochs t_k* = T - floor(exp(eta^(K-k))), K + 1 solves in total.
        With `thresholded`, each fresh policy has its shares below gamma_k zeroed before it is used.

        :param q: welfare exponent
        :param eta: schedule growth parameter, > 1
        :param thresholded: apply the thresholding rule (BIRT) or not (BIR)
        :param cfg: solver tolerances
    """

    def __init__(self, q, eta: float = DEFAULT_ETA, thresholded: bool = True, cfg: SolverConfig = DEFAULT_CONFIG):
        super().__init__(q, cfg)
        if not eta > 1:
            raise ValueError(f"eta must be greater than 1, got {eta}")
        self.eta = float(eta)
        self.thresholded = thresholded

    @property
    def name(self) -> str:
        return "birt" if self.thresholded else "bir"

    def _adopt(self, state: PolicyState, dist: ArrivalDistribution, k: int):
        result = self.solve(state, dist)
        if self.thresholded:
            state.policy = threshold_policy(result.policy, state.schedule.thresholds[k])
        else:
            state.policy = result.policy
        state.next_epoch = k + 1

    def reset(self, dist: ArrivalDistribution, horizon: int) -> PolicyState:
        if horizon < 1:
            state = self._initial_state(dist, horizon)
            state.policy = self.solve(state, dist).policy
            return state
        schedule = make_schedule(horizon, self.eta, dist.n_agents)
        state = self._initial_state(dist, horizon, schedule)
        self._adopt(state, dist, 0)
        return state

    def before_period(self, state: PolicyState, dist: ArrivalDistribution):
        schedule = state.schedule
        k = state.next_epoch
        if schedule is not None and k < len(schedule) and schedule.epochs[k] == state.t:
            self._adopt(state, dist, k)

    def next_event(self, state: PolicyState) -> int:
        if state.schedule is None:
            return state.horizon
        return state.schedule.end_of(state.next_epoch - 1)
