from typing import Iterator

from tqdm import tqdm

from fair_alloc.replication.base_replication_runner import BaseReplicationRunner, ReplicationJob
from fair_alloc.trajectory_result import TrajectoryResult


class SerialReplicationRunner(BaseReplicationRunner):
    def __init__(self, quiet=True):
        self.quiet = quiet

    def run(self, job: ReplicationJob, n: int) -> Iterator[TrajectoryResult]:
        for i in tqdm(range(n), desc="replications", disable=self.quiet, leave=False):
            yield job(i)
