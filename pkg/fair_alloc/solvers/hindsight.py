import numpy as np

from fair_alloc.arrivals import ArrivalDistribution, TypeCounts
from fair_alloc.solvers.egalitarian import solve_egalitarian
from fair_alloc.solvers.smooth import solve_smooth
from fair_alloc.solvers.static_policy import SolveResult, SolverConfig, DEFAULT_CONFIG, SolveStatus, uniform_policy
from fair_alloc.welfare import WelfareParam, evaluate


def solve_static(q, support, weights, b0=None, cfg: SolverConfig = DEFAULT_CONFIG, warm: SolveResult = None) -> SolveResult:
    """
    Dispatch to the LP (q = -inf) or the smooth solver, reusing a previous result as warm start
    """
    param = WelfareParam.of(q)
    if param.is_egalitarian:
        return solve_egalitarian(support, weights, b0, cfg, basis=warm.basis if warm is not None else None)
    return solve_smooth(param, support, weights, b0, cfg, start=warm.policy if warm is not None else None)


def solve_fluid(q, dist: ArrivalDistribution, horizon: int, cfg: SolverConfig = DEFAULT_CONFIG) -> SolveResult:
    """
    The fluid problem: expected type counts T p in place of the realized ones
    """
    return solve_static(q, dist.support, horizon * dist.probs, None, cfg)


def hindsight_opt(q, dist: ArrivalDistribution, counts: TypeCounts, cfg: SolverConfig = DEFAULT_CONFIG,
                  warm: SolveResult = None) -> SolveResult:
    """
    Hindsight optimum of a realized arrival sequence, which depends on it only through the type counts.

    Types that never arrived are dropped before solving and come back as uniform rows.

    :param q: welfare exponent
    :param dist: arrival distribution
    :param counts: realized type counts N
    :param cfg: solver tolerances
    :param warm: optional result of a related solve (e.g. the fluid policy) used as warm start
    """
    param = WelfareParam.of(q)
    n = np.asarray(counts.counts, dtype=np.float64)
    if n.shape != (dist.n_types,):
        raise ValueError(f"counts must have length L={dist.n_types}, got shape {n.shape}")
    present = n > 0
    policy = uniform_policy(dist.n_types, dist.n_agents)
    if not present.any():
        return SolveResult(policy, evaluate(param, np.zeros(dist.n_agents)), SolveStatus.OPTIMAL)

    if present.all():
        return solve_static(param, dist.support, n, None, cfg, warm)

    sub_warm = None
    if warm is not None and not param.is_egalitarian:
        # a basis does not survive dropping columns, a policy does
        sub_warm = SolveResult(warm.policy[present], warm.value, warm.status)
    result = solve_static(param, dist.support[present], n[present], None, cfg, sub_warm)
    policy[present] = result.policy
    return SolveResult(policy, result.value, result.status, result.iterations)
