import numpy as np

from fair_alloc.solvers.static_policy import check_static_policy


def threshold_policy(xi, gamma: float) -> np.ndarray:
    """
    Per type, zero every share below gamma except the largest one (lowest index on ties),
    which absorbs the withheld mass.

    :param xi: L x n static policy
    :param gamma: threshold in [0, 1/n)
    :return: thresholded static policy, every entry in {0} U [gamma, 1]
    """
    xi = check_static_policy(xi)
    n_agents = xi.shape[1]
    if not 0 <= gamma < 1 / n_agents:
        raise ValueError(f"threshold must lie in [0, 1/n) = [0, {1 / n_agents}), got {gamma}")
    if gamma == 0:
        return xi.copy()

    rows = np.arange(xi.shape[0])
    j = np.argmax(xi, axis=1)
    out = np.where(xi >= gamma, xi, 0.0)
    out[rows, j] = 0
    out[rows, j] = 1 - out.sum(axis=1)
    return out
