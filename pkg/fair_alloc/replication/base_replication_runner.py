from abc import ABC, abstractmethod
from typing import Callable, Iterator

from fair_alloc.trajectory_result import TrajectoryResult

ReplicationJob = Callable[[int], TrajectoryResult]


class BaseReplicationRunner(ABC):
    """
        Runs a replication job for stream indices 0..n-1 and yields the results in index order.
    """

    @abstractmethod
    def run(self, job: ReplicationJob, n: int) -> Iterator[TrajectoryResult]:
        raise NotImplementedError
