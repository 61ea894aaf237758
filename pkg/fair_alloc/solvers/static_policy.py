from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

ROW_SUM_TOLERANCE = 1e-9


class SolverError(RuntimeError):
    pass


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    MAX_ITERS = "max_iters"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolverConfig:
    """
        Solver tolerances shared by the LP and smooth solvers.

        :param lp_tolerance: optimality/feasibility tolerance of the tableau simplex (scaled problem)
        :param grad_tolerance: projected-gradient norm at which the smooth solver stops
        :param max_iters: iteration cap of the smooth solver (and pivot cap of the simplex)
        :param degeneracy_tolerance: slack within which a constraint counts as active
    """
    lp_tolerance: float = 1e-9
    grad_tolerance: float = 1e-8
    max_iters: int = 100_000
    degeneracy_tolerance: float = 1e-7

    def __post_init__(self):
        for name in ("lp_tolerance", "grad_tolerance", "degeneracy_tolerance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")


DEFAULT_CONFIG = SolverConfig()


def check_static_policy(xi) -> np.ndarray:
    """
    Validate an L x n matrix whose rows lie on the n-simplex
    """
    xi = np.asarray(xi, dtype=np.float64)
    if xi.ndim != 2:
        raise ValueError(f"static policy must be an L x n matrix, got shape {xi.shape}")
    if np.any(xi < -ROW_SUM_TOLERANCE):
        raise ValueError("static policy has negative shares")
    sums = xi.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1) > ROW_SUM_TOLERANCE)
    if bad.size:
        raise ValueError(f"static policy row {bad[0]} sums to {sums[bad[0]]!r}, not 1")
    return xi


def uniform_policy(n_types: int, n_agents: int) -> np.ndarray:
    return np.full((n_types, n_agents), 1 / n_agents)


def check_weights(weights, n_types: int) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (n_types,):
        raise ValueError(f"weights must have length L={n_types}, got shape {weights.shape}")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise ValueError("weights must be finite and nonnegative")
    return weights


def check_initial_utilities(b0, n_agents: int) -> np.ndarray:
    if b0 is None:
        return np.zeros(n_agents)
    b0 = np.asarray(b0, dtype=np.float64)
    if b0.shape != (n_agents,):
        raise ValueError(f"initial utilities must have length n={n_agents}, got shape {b0.shape}")
    if np.any(b0 < 0) or not np.all(np.isfinite(b0)):
        raise ValueError("initial utilities must be finite and nonnegative")
    return b0


def expected_utilities(support: np.ndarray, weights: np.ndarray, xi: np.ndarray, b0=None) -> np.ndarray:
    """
    B0 + sum_l weights_l * beta_l * xi_l
    """
    utilities = weights @ (support * xi)
    if b0 is not None:
        utilities = utilities + b0
    return utilities


@dataclass(frozen=True, eq=False)
class SolveResult:
    """
        :param policy: the optimal (or last) static policy
        :param value: welfare of the policy's expected utilities
        :param status: solver termination status
        :param iterations: pivots (LP) or gradient steps (smooth)
        :param basis: final simplex basis, usable as a warm start (LP only)
    """
    policy: np.ndarray
    value: float
    status: SolveStatus
    iterations: int = 0
    basis: Optional[tuple] = None

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL
