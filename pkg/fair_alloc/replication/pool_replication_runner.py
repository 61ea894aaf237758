import multiprocessing as mp
from typing import Iterator

from tqdm import tqdm

from fair_alloc.replication.base_replication_runner import BaseReplicationRunner, ReplicationJob
from fair_alloc.trajectory_result import TrajectoryResult
from fair_alloc.utils.util import CloudpickleWrapper

_worker_job = None


def _init_worker(wrapped: CloudpickleWrapper):
    global _worker_job
    _worker_job = wrapped.var


def _run_job(index: int) -> TrajectoryResult:
    return _worker_job(index)


class PoolReplicationRunner(BaseReplicationRunner):
    """
        Fans replications out to a process pool. `imap` keeps results in index order, so the
        aggregate is the same as with SerialReplicationRunner.

        :param workers: number of processes
        :param chunksize: stream indices handed to a worker at a time
        :param quiet: hide the progress bar
    """

    def __init__(self, workers: int, chunksize: int = 16, quiet=True):
        if workers < 1:
            raise ValueError(f"workers must be at least 1, got {workers}")
        self.workers = workers
        self.chunksize = chunksize
        self.quiet = quiet

    def run(self, job: ReplicationJob, n: int) -> Iterator[TrajectoryResult]:
        with mp.Pool(self.workers, initializer=_init_worker, initargs=(CloudpickleWrapper(job),)) as pool:
            results = pool.imap(_run_job, range(n), chunksize=self.chunksize)
            yield from tqdm(results, total=n, desc="replications", disable=self.quiet, leave=False)
