import numpy as np

from fair_alloc.trajectory_result import TrajectoryResult
from fair_alloc.utils.stat_trackers.stat_tracker import StatTracker


class _ValueTracker(StatTracker):
    # values are kept in arrival order so the reduction is the same however they were produced
    def __init__(self, name):
        super().__init__(name)
        self.values = []

    def reset(self):
        self.values = []

    def value_of(self, result: TrajectoryResult) -> float:
        raise NotImplementedError

    def update(self, result: TrajectoryResult):
        self.values.append(self.value_of(result))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


class _Mean(_ValueTracker):
    def get_stat(self):
        return float(np.mean(self.as_array())) if self.values else 0.0


class _Stderr(_ValueTracker):
    def get_stat(self):
        if len(self.values) < 2:
            return 0.0
        return float(np.std(self.as_array(), ddof=1) / np.sqrt(len(self.values)))


class MeanRegret(_Mean):
    def __init__(self):
        super().__init__("mean_regret")

    def value_of(self, result):
        return result.regret


class RegretStderr(_Stderr):
    def __init__(self):
        super().__init__("regret_stderr")

    def value_of(self, result):
        return result.regret


class MeanOpt(_Mean):
    def __init__(self):
        super().__init__("mean_opt")

    def value_of(self, result):
        return result.opt_welfare


class OptStderr(_Stderr):
    def __init__(self):
        super().__init__("opt_stderr")

    def value_of(self, result):
        return result.opt_welfare


class MeanAlg(_Mean):
    def __init__(self):
        super().__init__("mean_alg")

    def value_of(self, result):
        return result.alg_welfare


class AlgStderr(_Stderr):
    def __init__(self):
        super().__init__("alg_stderr")

    def value_of(self, result):
        return result.alg_welfare


class MeanSolves(_Mean):
    def __init__(self):
        super().__init__("mean_solves")

    def value_of(self, result):
        return result.n_solves
