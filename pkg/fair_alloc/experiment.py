import json
import math
import time
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from fair_alloc.arrivals import ArrivalDistribution
from fair_alloc.policies.policy_kind import PolicyKind, POLICY_NAMES
from fair_alloc.policies.schedule import DEFAULT_ETA, make_schedule
from fair_alloc.results import ResultRow, summarize_relative_regret
from fair_alloc.simulator import estimate_regret, fluid_value, NegativeRegretError
from fair_alloc.solvers.degeneracy import check_degeneracy
from fair_alloc.solvers.static_policy import SolverConfig, DEFAULT_CONFIG, SolverError
from fair_alloc.utils.generate_trajectory import cached_fluid
from fair_alloc.utils.sampling import SeedSpec, derive_seed, sample_beta, sample_simplex, MAX_SEED
from fair_alloc.welfare import WelfareParam, EGALITARIAN

MODES = ("single", "randomized", "special", "schedule")
SPECIAL_GRID = tuple(16 * 4 ** k for k in range(7))  # 16 .. 65536
RANDOMIZED_GRID = (16, 64, 256, 1024, 4096)
RANDOMIZED_Q = ("-inf", "-1", "0")
LARGE_HORIZON = 4096
REPS_SMALL_T = 2000
REPS_LARGE_T = 500
INSTANCE_DOMAIN = 1

_SPECIAL_SUPPORT = ((1.0, 0.5), (0.5, 1.0))
SPECIAL_INSTANCES = {
    "degenerate": ArrivalDistribution(np.array(_SPECIAL_SUPPORT), np.array([0.5, 0.5])),
    "nondegenerate": ArrivalDistribution(np.array(_SPECIAL_SUPPORT), np.array([0.4, 0.6])),
}


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass(frozen=True)
class ExperimentConfig:
    """
        Everything one CLI run needs.

        :param mode: single, randomized, special or schedule
        :param policies: policy tokens, a subset of f, fr, bir, birt
        :param q_list: welfare exponents
        :param T_grid: horizons, ascending
        :param reps: replications per job, None for 2000 up to T = 4096 and 500 above
        :param master_seed: 64-bit seed every stream derives from
        :param eta: schedule parameter of bir and birt
        :param dist: arrival distribution (single mode)
        :param n_agents: n of the randomized instances
        :param n_types: L of the randomized instances
        :param instances: number of randomized instances
        :param alpha: first Beta parameter of the randomized utilities
        :param beta: second Beta parameter of the randomized utilities
        :param workers: replication processes
        :param quiet: suppress progress output
        :param experiment_id: label of the experiment column, the mode by default
    """
    mode: str
    policies: Tuple[str, ...] = POLICY_NAMES
    q_list: Tuple[WelfareParam, ...] = (EGALITARIAN,)
    T_grid: Tuple[int, ...] = SPECIAL_GRID
    reps: Optional[int] = None
    master_seed: int = 0
    eta: float = DEFAULT_ETA
    dist: Optional[ArrivalDistribution] = None
    n_agents: int = 4
    n_types: int = 5
    instances: int = 30
    alpha: float = 0.5
    beta: float = 0.5
    workers: int = 1
    quiet: bool = False
    experiment_id: Optional[str] = None
    solver: SolverConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError("mode", f"expected one of {', '.join(MODES)}, got {self.mode!r}")
        object.__setattr__(self, "policies", tuple(p.strip().lower() for p in self.policies))
        bad = [p for p in self.policies if p not in POLICY_NAMES]
        if bad or not self.policies:
            raise ConfigError("policy", f"expected tokens from {', '.join(POLICY_NAMES)}, got {list(self.policies)}")
        try:
            object.__setattr__(self, "q_list", tuple(WelfareParam.of(q) for q in self.q_list))
        except ValueError as e:
            raise ConfigError("q", str(e)) from None
        if not self.q_list:
            raise ConfigError("q", "at least one welfare exponent is needed")
        grid = tuple(int(t) for t in self.T_grid)
        if not grid or any(t < 1 for t in grid):
            raise ConfigError("T", f"horizons must be at least 1, got {list(self.T_grid)}")
        if any(a >= b for a, b in zip(grid, grid[1:])):
            raise ConfigError("T", f"horizons must be strictly ascending, got {list(grid)}")
        object.__setattr__(self, "T_grid", grid)
        if self.reps is not None and self.reps < 2:
            raise ConfigError("reps", f"must be at least 2, got {self.reps}")
        if not 0 <= self.master_seed <= MAX_SEED:
            raise ConfigError("seed", f"must be a 64-bit unsigned integer, got {self.master_seed}")
        if not (math.isfinite(self.eta) and self.eta > 1):
            raise ConfigError("eta", f"must be greater than 1, got {self.eta}")
        if self.mode == "single" and self.dist is None:
            raise ConfigError("dist", "single mode needs an arrival distribution")
        if self.mode == "randomized":
            for name in ("n_agents", "n_types", "instances"):
                if getattr(self, name) < 1:
                    raise ConfigError(name, f"must be at least 1, got {getattr(self, name)}")
            for name in ("alpha", "beta"):
                if not getattr(self, name) > 0:
                    raise ConfigError(name, f"must be positive, got {getattr(self, name)}")
        if self.workers < 1:
            raise ConfigError("workers", f"must be at least 1, got {self.workers}")

    @property
    def label(self) -> str:
        return self.experiment_id or self.mode

    def reps_for(self, horizon: int) -> int:
        if self.reps is not None:
            return self.reps
        return REPS_SMALL_T if horizon <= LARGE_HORIZON else REPS_LARGE_T

    def kinds(self) -> List[PolicyKind]:
        return [PolicyKind.parse(p, q, self.eta) for q in self.q_list for p in self.policies]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "experiment": self.label,
            "policies": list(self.policies),
            "q": [q.token() for q in self.q_list],
            "T": list(self.T_grid),
            "reps": self.reps if self.reps is not None else {f"T<={LARGE_HORIZON}": REPS_SMALL_T,
                                                              f"T>{LARGE_HORIZON}": REPS_LARGE_T},
            "master_seed": self.master_seed,
            "eta": self.eta,
            "n": self.n_agents,
            "L": self.n_types,
            "instances": self.instances,
            "alpha": self.alpha,
            "beta": self.beta,
            "workers": self.workers,
            "dist": self.dist.to_dict() if self.dist is not None else None,
            "solver": {
                "lp_tolerance": self.solver.lp_tolerance,
                "grad_tolerance": self.solver.grad_tolerance,
                "max_iters": self.solver.max_iters,
                "degeneracy_tolerance": self.solver.degeneracy_tolerance,
            },
        }


def is_degenerate(dist: ArrivalDistribution, horizon: int, cfg: SolverConfig = DEFAULT_CONFIG) -> bool:
    """
    Degeneracy of the egalitarian fluid LP, whatever metric the row is about
    """
    fluid = cached_fluid(EGALITARIAN, dist, horizon, cfg)
    return check_degeneracy(fluid.policy, dist.support, horizon * dist.probs, fluid.value, cfg).degenerate


def _run_instance(config: ExperimentConfig, instance: str, instance_index: int, dist: ArrivalDistribution,
                  failures: Optional[list], logger) -> Iterator[ResultRow]:
    for horizon in config.T_grid:
        # all policies of one (instance, T) share their arrival streams
        job_seed = derive_seed(config.master_seed, instance_index, horizon)
        reps = config.reps_for(horizon)
        for kind in config.kinds():
            t0 = time.time_ns()
            try:
                degenerate = is_degenerate(dist, horizon, config.solver)
                flu = fluid_value(kind.welfare, dist, horizon, config.solver)
                est = estimate_regret(kind, dist, horizon, reps, job_seed, config.solver, config.workers, logger,
                                      quiet=config.quiet)
            except (SolverError, NegativeRegretError) as e:
                if not config.quiet:
                    print(f"WARNING: {instance} {kind} T={horizon} failed: {e}")
                if failures is not None:
                    failures.append({"instance": instance, "policy": kind.name, "q": kind.welfare.token(),
                                     "eta": kind.eta, "T": horizon, "error": type(e).__name__, "message": str(e)})
                continue
            wall_ms = (time.time_ns() - t0) / 1e6
            row = ResultRow(config.label, instance, kind.name, kind.welfare, kind.eta, horizon, reps,
                            est.mean_alg, est.mean_opt, est.mean_regret, est.stderr, est.rel_regret, flu,
                            degenerate, wall_ms)
            if logger is not None:
                logger.log({"experiment/T": horizon, "experiment/instance": instance_index})
            if not config.quiet:
                print(f"{instance} {kind} T={horizon}: regret {est.mean_regret:.4g} "
                      f"(stderr {est.stderr:.2g}, relative {est.rel_regret:.3g}) in {wall_ms / 1000:.1f}s")
            yield row


def run_single(config: ExperimentConfig, failures: Optional[list] = None, logger=None) -> Iterator[ResultRow]:
    """
    Every (q, policy, T) of the configuration on its one distribution
    """
    if config.dist is None:
        raise ConfigError("dist", "single mode needs an arrival distribution")
    if not config.quiet:
        print(f"Running {config.label} on {config.dist.n_types} types x {config.dist.n_agents} agents...")
    yield from _run_instance(config, "0", 0, config.dist, failures, logger)


def randomized_instances(config: ExperimentConfig) -> Dict[str, ArrivalDistribution]:
    """
    Draw the instance distributions: p uniform on the simplex, utilities i.i.d. Beta(alpha, beta)
    """
    instances = {}
    for m in range(config.instances):
        rng = SeedSpec(config.master_seed, m, (INSTANCE_DOMAIN,)).rng()
        probs = sample_simplex(rng, config.n_types)
        support = sample_beta(rng, config.alpha, config.beta, size=(config.n_types, config.n_agents))
        instances[str(m)] = ArrivalDistribution(support, probs)
    return instances


def run_randomized(config: ExperimentConfig, failures: Optional[list] = None, logger=None) -> Iterator[ResultRow]:
    """
    Per-instance rows for every drawn instance, then one summary row per (policy, q, T)
    holding the average relative regret across instances
    """
    instances = randomized_instances(config)
    if not config.quiet:
        print(f"Running {config.label} over {len(instances)} instances "
              f"(n={config.n_agents}, L={config.n_types}, Beta({config.alpha}, {config.beta}))...")
    rows = []
    for m, (instance, dist) in enumerate(instances.items()):
        for row in _run_instance(config, instance, m, dist, failures, logger):
            rows.append(row)
            yield row
    yield from summarize_relative_regret(rows)


def run_special(config: ExperimentConfig, failures: Optional[list] = None, logger=None) -> Iterator[ResultRow]:
    """
    The two built-in two-agent instances, one degenerate and one not
    """
    if not config.quiet:
        print(f"Running {config.label} on the built-in instances {', '.join(SPECIAL_INSTANCES)}...")
    for m, (instance, dist) in enumerate(SPECIAL_INSTANCES.items()):
        yield from _run_instance(config, instance, m, dist, failures, logger)


def print_schedule(horizon: int, eta: float = DEFAULT_ETA, n_agents: int = 2) -> str:
    """
    Human-readable table of the re-solving schedule followed by its JSON dump
    """
    schedule = make_schedule(horizon, eta, n_agents)
    lines = [f"T={schedule.horizon} eta={schedule.eta} n={schedule.n_agents} K={schedule.K} "
             f"({len(schedule)} distinct epochs)"]
    for k, (t, gamma) in enumerate(zip(schedule.epochs, schedule.thresholds)):
        lines.append(f"  epoch {k:>3}: t*={t:<10} runs to {schedule.end_of(k):<10} gamma={gamma:.6g}")
    lines.append(json.dumps(schedule.to_dict()))
    return "\n".join(lines)


RUNNERS = {
    "single": run_single,
    "randomized": run_randomized,
    "special": run_special,
}
