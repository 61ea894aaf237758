import abc

from fair_alloc.trajectory_result import TrajectoryResult


class StatTracker(abc.ABC):
    def __init__(self, name):
        self.name = name

    def reset(self):  # Called before every batch of replications
        raise NotImplementedError

    def update(self, result: TrajectoryResult):
        raise NotImplementedError

    def get_stat(self):
        raise NotImplementedError
