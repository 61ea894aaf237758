import functools

import numpy as np

from fair_alloc.arrivals import ArrivalDistribution, sample_sequence, count_types, TypeCounts
from fair_alloc.policies.policy_kind import PolicyKind, make_policy
from fair_alloc.solvers.hindsight import hindsight_opt, solve_fluid
from fair_alloc.solvers.static_policy import SolverConfig, DEFAULT_CONFIG, SolveResult, SolverError
from fair_alloc.trajectory_result import TrajectoryResult
from fair_alloc.utils.sampling import SeedSpec
from fair_alloc.welfare import WelfareParam, evaluate


def require_optimal(result: SolveResult, what: str) -> SolveResult:
    # benchmark values must come from converged solves
    if not result.optimal:
        raise SolverError(f"{what} solve stopped with status {result.status.value} "
                          f"after {result.iterations} iterations")
    return result


@functools.lru_cache(maxsize=256)
def cached_fluid(q: WelfareParam, dist: ArrivalDistribution, horizon: int, cfg: SolverConfig) -> SolveResult:
    return require_optimal(solve_fluid(q, dist, horizon, cfg), f"fluid (q={q}, T={horizon})")


@functools.lru_cache(maxsize=65536)
def _cached_hindsight(q: WelfareParam, dist: ArrivalDistribution, counts: tuple, horizon: int,
                      cfg: SolverConfig) -> float:
    warm = cached_fluid(q, dist, horizon, cfg)
    result = hindsight_opt(q, dist, TypeCounts(np.asarray(counts, dtype=np.int64)), cfg, warm=warm)
    return require_optimal(result, f"hindsight (q={q}, counts={counts})").value


def hindsight_value(q, dist: ArrivalDistribution, counts: TypeCounts, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """
    Hindsight optimum, cached per (q, distribution, counts); the sequence matters only through its counts
    """
    return _cached_hindsight(WelfareParam.of(q), dist, counts.key(), counts.total, cfg)


def generate_trajectory(kind: PolicyKind, dist: ArrivalDistribution, horizon: int, seed: SeedSpec,
                        cfg: SolverConfig = DEFAULT_CONFIG) -> TrajectoryResult:
    """
    Draw one arrival sequence, run the policy through it and solve the same sequence in hindsight
    """
    seq = sample_sequence(dist, horizon, seed)
    counts = count_types(seq, dist.n_types)
    policy = make_policy(kind, cfg)

    state = None
    try:
        state = policy.reset(dist, horizon)
        policy.play(state, dist, seq.types)
    except (RuntimeError, ValueError) as e:
        t = state.t if state is not None else 0
        raise type(e)(f"{kind} failed on stream {seed.stream_index} of master seed {seed.master_seed} "
                      f"at t={t} (T={horizon}): {e}") from e

    alg = evaluate(kind.welfare, state.utilities)
    opt = hindsight_value(kind.welfare, dist, counts, cfg)
    return TrajectoryResult(alg, opt, seed, counts, state.n_solves)
