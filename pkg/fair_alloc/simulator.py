import functools
import time
from dataclasses import dataclass
from typing import List, Optional

from fair_alloc.arrivals import ArrivalDistribution
from fair_alloc.policies.policy_kind import PolicyKind
from fair_alloc.replication.base_replication_runner import BaseReplicationRunner
from fair_alloc.replication.pool_replication_runner import PoolReplicationRunner
from fair_alloc.replication.serial_replication_runner import SerialReplicationRunner
from fair_alloc.solvers.static_policy import SolverConfig, DEFAULT_CONFIG
from fair_alloc.trajectory_result import TrajectoryResult
from fair_alloc.utils.generate_trajectory import generate_trajectory, cached_fluid
from fair_alloc.utils.sampling import SeedSpec
from fair_alloc.utils.stat_trackers.common_trackers import MeanRegret, RegretStderr, MeanOpt, OptStderr, MeanAlg, \
    AlgStderr, MeanSolves
from fair_alloc.utils.stat_trackers.stat_tracker import StatTracker
from fair_alloc.welfare import WelfareParam

# ALG may beat OPT by at most this much, relative to max(1, OPT)
DOMINANCE_TOLERANCE = 1e-6


class NegativeRegretError(RuntimeError):
    pass


@dataclass(frozen=True)
class RegretEstimate:
    """
        Monte Carlo estimate of E[OPT - ALG].

        :param mean_regret: mean of OPT - ALG over the replications
        :param stderr: standard error of mean_regret
        :param mean_opt: mean hindsight optimum
        :param rel_regret: mean_regret / mean_opt, 0 when mean_opt is 0
        :param reps: number of replications
    """
    mean_regret: float
    stderr: float
    mean_opt: float
    rel_regret: float
    reps: int
    opt_stderr: float = 0.0
    mean_alg: float = 0.0
    alg_stderr: float = 0.0
    mean_solves: float = 0.0


def run_trajectory(kind: PolicyKind, dist: ArrivalDistribution, horizon: int, seed: SeedSpec,
                   cfg: SolverConfig = DEFAULT_CONFIG) -> TrajectoryResult:
    """
    One replication: sample arrivals, run the policy, compare with the hindsight optimum.

    :raises NegativeRegretError: when the policy beats the hindsight optimum, which means a solver is wrong
    """
    result = generate_trajectory(kind, dist, horizon, seed, cfg)
    if result.alg_welfare > result.opt_welfare + DOMINANCE_TOLERANCE * max(1.0, result.opt_welfare):
        raise NegativeRegretError(
            f"{kind} beat the hindsight optimum on stream {seed.stream_index} of master seed {seed.master_seed} "
            f"(T={horizon}, counts={result.counts.key()}): ALG={result.alg_welfare!r} > OPT={result.opt_welfare!r}"
        )
    return result


def _replication(kind, dist, horizon, master_seed, cfg, index) -> TrajectoryResult:
    return run_trajectory(kind, dist, horizon, SeedSpec(master_seed, index), cfg)


def fluid_value(q, dist: ArrivalDistribution, horizon: int, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    """
    FLU, the optimum of the fluid problem, an upper bound on E[OPT]
    """
    return cached_fluid(WelfareParam.of(q), dist, horizon, cfg).value


def make_runner(workers: int = 1, quiet=True) -> BaseReplicationRunner:
    if workers > 1:
        return PoolReplicationRunner(workers, quiet=quiet)
    return SerialReplicationRunner(quiet=quiet)


class RegretEstimator:
    """
        Runs replications of one (policy, distribution, horizon) setup and reduces them to a RegretEstimate.

        :param runner: how replications are executed
        :param cfg: solver tolerances
        :param logger: optional wandb run; estimates are logged with commit=False
        :param trackers: extra stat trackers, logged as stat/<name>
    """

    def __init__(self, runner: Optional[BaseReplicationRunner] = None, cfg: SolverConfig = DEFAULT_CONFIG,
                 logger=None, trackers: Optional[List[StatTracker]] = None):
        self.runner = runner or SerialReplicationRunner()
        self.cfg = cfg
        self.logger = logger
        self.extra_trackers = list(trackers or [])

    def estimate(self, kind: PolicyKind, dist: ArrivalDistribution, horizon: int, reps: int,
                 master_seed: int) -> RegretEstimate:
        if reps < 2:
            raise ValueError(f"reps must be at least 2, got {reps}")
        t0 = time.time_ns()

        regret, regret_se = MeanRegret(), RegretStderr()
        opt, opt_se = MeanOpt(), OptStderr()
        alg, alg_se = MeanAlg(), AlgStderr()
        solves = MeanSolves()
        trackers = [regret, regret_se, opt, opt_se, alg, alg_se, solves] + self.extra_trackers
        for tracker in trackers:
            tracker.reset()

        job = functools.partial(_replication, kind, dist, horizon, master_seed, self.cfg)
        for result in self.runner.run(job, reps):
            for tracker in trackers:
                tracker.update(result)

        mean_opt = opt.get_stat()
        mean_regret = regret.get_stat()
        estimate = RegretEstimate(
            mean_regret=mean_regret,
            stderr=regret_se.get_stat(),
            mean_opt=mean_opt,
            rel_regret=mean_regret / mean_opt if mean_opt != 0 else 0.0,
            reps=reps,
            opt_stderr=opt_se.get_stat(),
            mean_alg=alg.get_stat(),
            alg_stderr=alg_se.get_stat(),
            mean_solves=solves.get_stat(),
        )

        if self.logger is not None:
            stats = {
                "regret/mean": estimate.mean_regret,
                "regret/stderr": estimate.stderr,
                "regret/relative": estimate.rel_regret,
                "opt/mean": estimate.mean_opt,
                "alg/mean": estimate.mean_alg,
                "fluid/value": fluid_value(kind.welfare, dist, horizon, self.cfg),
                "solver/solves_per_trajectory": estimate.mean_solves,
                "time/wall_ms": (time.time_ns() - t0) / 1e6,
            }
            stats.update({f"stat/{t.name}": t.get_stat() for t in self.extra_trackers})
            self.logger.log(stats, commit=False)
        return estimate


def estimate_regret(kind: PolicyKind, dist: ArrivalDistribution, horizon: int, reps: int, master_seed: int,
                    cfg: SolverConfig = DEFAULT_CONFIG, workers: int = 1, logger=None, quiet=True) -> RegretEstimate:
    """
    Estimate regret over stream indices 0..reps-1 of `master_seed`.

    The reduction runs in stream order, so serial and pooled runs agree bit for bit.

    :param kind: policy and welfare metric
    :param dist: arrival distribution
    :param horizon: T
    :param reps: replications, at least 2
    :param master_seed: experiment seed shared by all policies (common random numbers)
    :param cfg: solver tolerances
    :param workers: process count; 1 runs in-process
    :param logger: optional wandb run
    :param quiet: hide progress bars
    """
    estimator = RegretEstimator(make_runner(workers, quiet), cfg, logger)
    return estimator.estimate(kind, dist, horizon, reps, master_seed)
