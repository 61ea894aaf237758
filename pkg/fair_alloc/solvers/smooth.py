import numba
import numpy as np

from fair_alloc.solvers.static_policy import SolveResult, SolverConfig, DEFAULT_CONFIG, SolveStatus, check_weights, \
    check_initial_utilities, expected_utilities, uniform_policy
from fair_alloc.welfare import WelfareParam, WelfareKind, evaluate

ARMIJO_SIGMA = 1e-4
MAX_STEP = 1e6
MIN_STEP = 1e-18
# utilities below this (scaled problem) are lifted when forming gradients
UTILITY_FLOOR = 1e-12


@numba.njit
def project_rows(v):
    """
    Euclidean projection of every row of v onto the probability simplex
    """
    n_rows, n_cols = v.shape
    out = np.empty_like(v)
    for r in range(n_rows):
        u = np.sort(v[r])[::-1]
        css = 0.0
        theta = 0.0
        for k in range(n_cols):
            css += u[k]
            t = (css - 1.0) / (k + 1)
            if u[k] - t > 0:
                theta = t
        for i in range(n_cols):
            out[r, i] = max(v[r, i] - theta, 0.0)
    return out


def _welfare_gradient(param: WelfareParam, b: np.ndarray) -> np.ndarray:
    n = b.size
    if param.kind is WelfareKind.UTILITARIAN:
        return np.full(n, 1 / n)
    b = np.maximum(b, UTILITY_FLOOR)
    w = evaluate(param, b)
    if param.kind is WelfareKind.NASH:
        return w / (n * b)
    return (b / w) ** (param.q - 1) / n


def _utilitarian(support, weights, b0) -> SolveResult:
    n_types, n_agents = support.shape
    xi = np.zeros((n_types, n_agents))
    xi[np.arange(n_types), np.argmax(support, axis=1)] = 1
    value = evaluate(1, expected_utilities(support, weights, xi, b0))
    return SolveResult(xi, value, SolveStatus.OPTIMAL)


def solve_smooth(q, support, weights, b0=None, cfg: SolverConfig = DEFAULT_CONFIG, start=None) -> SolveResult:
    """
    Maximize w_q(B0 + sum_l weights_l beta_l * xi_l) over products of simplices for finite q,
    by projected gradient ascent with an Armijo backtracking line search.

    :param q: finite welfare exponent in (-inf, 1]
    :param support: L x n utility matrix
    :param weights: length-L nonnegative type masses
    :param b0: initial utilities (zeros if None)
    :param cfg: solver tolerances
    :param start: optional warm-start policy; replaced by the uniform policy if it has zero welfare for q <= 0
    """
    param = WelfareParam.of(q)
    if param.is_egalitarian:
        raise ValueError("solve_smooth needs a finite q, use solve_egalitarian for q = -inf")
    support = np.asarray(support, dtype=np.float64)
    n_types, n_agents = support.shape
    weights = check_weights(weights, n_types)
    b0 = check_initial_utilities(b0, n_agents)

    if param.kind is WelfareKind.UTILITARIAN:
        return _utilitarian(support, weights, b0)

    scale = max(1.0, float(b0.max()), float(weights.sum()))
    coef = (weights / scale)[:, None] * support
    c0 = b0 / scale

    def objective(x):
        return evaluate(param, c0 + (coef * x).sum(axis=0))

    xi = uniform_policy(n_types, n_agents)
    if param.q <= 0 and np.any((c0 == 0) & (coef.sum(axis=0) == 0)):
        # some agent can never get utility, so every policy has welfare 0
        return SolveResult(xi, 0.0, SolveStatus.OPTIMAL)

    if start is not None:
        start = project_rows(np.array(start, dtype=np.float64).reshape(n_types, n_agents))
        if param.q > 0 or objective(start) > 0:
            xi = start

    f = objective(xi)
    last_step = 0.5
    status = SolveStatus.MAX_ITERS
    it = 0
    while it < cfg.max_iters:
        g = _welfare_gradient(param, c0 + (coef * xi).sum(axis=0))
        ascent = coef * g[None, :]
        if np.linalg.norm(xi - project_rows(xi + ascent)) < cfg.grad_tolerance:
            status = SolveStatus.OPTIMAL
            break

        step = min(2 * last_step, MAX_STEP)
        while step >= MIN_STEP:
            candidate = project_rows(xi + step * ascent)
            fc = objective(candidate)
            if fc >= f + ARMIJO_SIGMA * np.sum(ascent * (candidate - xi)):
                break
            step /= 2
        it += 1
        if step < MIN_STEP:
            # no ascent left at machine precision
            status = SolveStatus.OPTIMAL
            break
        xi, f, last_step = candidate, fc, step

    value = evaluate(param, expected_utilities(support, weights, xi, b0))
    return SolveResult(xi, value, status, iterations=it)
