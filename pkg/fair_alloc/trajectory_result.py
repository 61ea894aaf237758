from dataclasses import dataclass

from fair_alloc.arrivals import TypeCounts
from fair_alloc.utils.sampling import SeedSpec


@dataclass(frozen=True, eq=False)
class TrajectoryResult:
    """
        Outcome of one replication.

        :param alg_welfare: w_q(B_T) under the policy
        :param opt_welfare: hindsight optimum of the same arrival sequence
        :param seed: stream the arrivals were drawn from
        :param counts: realized type counts
        :param n_solves: static solves the policy performed
    """
    alg_welfare: float
    opt_welfare: float
    seed: SeedSpec
    counts: TypeCounts
    n_solves: int = 0

    @property
    def regret(self) -> float:
        return self.opt_welfare - self.alg_welfare
