from typing import Optional, Sequence

import numpy as np

from fair_alloc.solvers.simplex_tableau import Tableau
from fair_alloc.solvers.static_policy import SolveResult, SolverConfig, DEFAULT_CONFIG, check_weights, \
    check_initial_utilities, expected_utilities


def complete_rows(xi: np.ndarray, support: np.ndarray) -> np.ndarray:
    """
    Push each row of a sub-stochastic policy onto the simplex by giving the leftover
    share to the agent valuing the type most (lowest index on ties).
    """
    xi = np.maximum(xi, 0)
    sums = xi.sum(axis=1)
    over = sums > 1
    xi[over] /= sums[over, None]
    leftover = 1 - xi.sum(axis=1)
    best = np.argmax(support, axis=1)
    xi[np.arange(xi.shape[0]), best] += leftover
    return xi


def build_epigraph_lp(support: np.ndarray, weights: np.ndarray, b0: np.ndarray):
    """
    Variables [u, xi_11, .., xi_1n, .., xi_Ln]; rows: one epigraph row per agent, then one
    simplex row per type.
    """
    n_types, n_agents = support.shape
    n_vars = 1 + n_types * n_agents
    A = np.zeros((n_agents + n_types, n_vars))
    A[:n_agents, 0] = 1
    coef = weights[:, None] * support  # L x n
    for i in range(n_agents):
        A[i, 1 + i::n_agents] = -coef[:, i]
    for l in range(n_types):
        A[n_agents + l, 1 + l * n_agents:1 + (l + 1) * n_agents] = 1
    b = np.concatenate((b0, np.ones(n_types)))
    c = np.zeros(n_vars)
    c[0] = 1
    return c, A, b


def solve_egalitarian(support, weights, b0=None, cfg: SolverConfig = DEFAULT_CONFIG,
                      basis: Optional[Sequence[int]] = None) -> SolveResult:
    """
    Maximize min_i (B0^i + sum_l weights_l beta_l^i xi_l^i) over static policies, as the epigraph LP.

    weights = T p gives the fluid problem, (T - t) p with B0 = B_t the re-solving problem and
    weights = N with B0 = 0 the hindsight optimum.

    :param support: L x n utility matrix
    :param weights: length-L nonnegative type masses
    :param b0: initial utilities (zeros if None)
    :param cfg: solver tolerances
    :param basis: optional warm-start basis from a previous solve of the same shape
    """
    support = np.asarray(support, dtype=np.float64)
    n_types, n_agents = support.shape
    weights = check_weights(weights, n_types)
    b0 = check_initial_utilities(b0, n_agents)

    # value is homogeneous, so solve with data of order one
    scale = max(1.0, float(b0.max()), float(weights.sum()))
    c, A, b = build_epigraph_lp(support, weights / scale, b0 / scale)

    tableau = Tableau(c, A, b, tol=cfg.lp_tolerance, basis=basis)
    status = tableau.solve(max_pivots=cfg.max_iters)

    x = tableau.solution()
    xi = complete_rows(x[1:].reshape(n_types, n_agents), support)
    value = float(expected_utilities(support, weights, xi, b0).min())
    return SolveResult(xi, value, status, iterations=tableau.pivots, basis=tuple(int(j) for j in tableau.basis))
