from dataclasses import dataclass

import numpy as np

from fair_alloc.solvers.static_policy import SolverConfig, DEFAULT_CONFIG, check_static_policy, check_weights, \
    expected_utilities


@dataclass(frozen=True)
class DegeneracyReport:
    active_agents: int
    full_types: int
    zero_shares: int
    dimension: int  # nL + 1

    @property
    def tally(self) -> int:
        return self.active_agents + self.full_types + self.zero_shares

    @property
    def degenerate(self) -> bool:
        return self.tally > self.dimension


def check_degeneracy(policy, support, weights, value: float, cfg: SolverConfig = DEFAULT_CONFIG) -> DegeneracyReport:
    """
    Count the constraints of the egalitarian epigraph LP that are active at an optimal policy;
    the policy is degenerate when the count exceeds the nL + 1 optimization variables.

    :param policy: optimal static policy
    :param support: L x n utility matrix
    :param weights: type masses the policy was optimized for
    :param value: the optimal value for these weights
    :param cfg: degeneracy_tolerance is used as relative slack
    """
    support = np.asarray(support, dtype=np.float64)
    xi = check_static_policy(policy)
    n_types, n_agents = support.shape
    if xi.shape != support.shape:
        raise ValueError(f"policy shape {xi.shape} does not match support shape {support.shape}")
    weights = check_weights(weights, n_types)
    tol = cfg.degeneracy_tolerance

    utilities = expected_utilities(support, weights, xi)
    active = int(np.sum(np.abs(utilities - value) <= tol * max(1.0, abs(value))))
    full = int(np.sum(np.abs(xi.sum(axis=1) - 1) <= tol))
    zeros = int(np.sum(xi <= tol))
    return DegeneracyReport(active, full, zeros, n_agents * n_types + 1)
