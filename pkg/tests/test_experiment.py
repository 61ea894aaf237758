import dataclasses
import json
import math

import pytest

import fair_alloc.experiment as experiment
from fair_alloc.experiment import ExperimentConfig, ConfigError, SPECIAL_INSTANCES, is_degenerate, run_special, \
    run_randomized, run_single, randomized_instances, print_schedule
from fair_alloc.results import SUMMARY_INSTANCE
from fair_alloc.solvers.static_policy import SolverConfig, SolverError


def _quiet(mode="special", **kwargs):
    kwargs.setdefault("reps", 4)
    return ExperimentConfig(mode, quiet=True, **kwargs)


def _without_time(rows):
    return [dataclasses.replace(r, wall_time_ms=0.0) for r in rows]


class TestConfig:
    @pytest.mark.parametrize("kwargs, field", [
        (dict(mode="bogus"), "mode"),
        (dict(mode="special", policies=("lp",)), "policy"),
        (dict(mode="special", policies=()), "policy"),
        (dict(mode="special", q_list=("abc",)), "q"),
        (dict(mode="special", q_list=(2,)), "q"),
        (dict(mode="special", T_grid=(64, 16)), "T"),
        (dict(mode="special", T_grid=(0,)), "T"),
        (dict(mode="special", reps=1), "reps"),
        (dict(mode="special", master_seed=-1), "seed"),
        (dict(mode="special", eta=1.0), "eta"),
        (dict(mode="single"), "dist"),
        (dict(mode="randomized", n_agents=0), "n_agents"),
        (dict(mode="randomized", alpha=0.0), "alpha"),
        (dict(mode="special", workers=0), "workers"),
    ])
    def test_rejects(self, kwargs, field):
        with pytest.raises(ConfigError) as info:
            ExperimentConfig(**kwargs)
        assert info.value.field_name == field

    def test_normalizes(self):
        config = ExperimentConfig("special", policies=(" BIRT", "f"), q_list=("-inf", -1, "0"), T_grid=[16, 64])
        assert config.policies == ("birt", "f")
        assert [q.token() for q in config.q_list] == ["-inf", "-1.0", "0.0"]
        assert config.T_grid == (16, 64)
        assert [str(k) for k in config.kinds()][:2] == ["birt(q=-inf, eta=1.05)", "f(q=-inf)"]

    def test_default_reps(self):
        config = ExperimentConfig("special")
        assert config.reps_for(4096) == 2000
        assert config.reps_for(16384) == 500
        assert ExperimentConfig("special", reps=7).reps_for(65536) == 7

    def test_to_dict_is_json(self):
        config = ExperimentConfig("single", dist=SPECIAL_INSTANCES["degenerate"])
        echoed = json.loads(json.dumps(config.to_dict()))
        assert echoed["q"] == ["-inf"]
        assert echoed["dist"]["probs"] == [0.5, 0.5]


def test_special_instance_degeneracy():
    assert is_degenerate(SPECIAL_INSTANCES["degenerate"], 1024)
    assert not is_degenerate(SPECIAL_INSTANCES["nondegenerate"], 1024)


class TestRuns:
    def test_special(self):
        rows = list(run_special(_quiet(T_grid=(16, 64))))
        assert len(rows) == 2 * 2 * 4
        for row in rows:
            assert (row.eta is None) == (row.policy in ("f", "fr"))
            assert row.degenerate == (row.instance == "degenerate")
            assert row.reps == 4
            assert row.regret >= -1e-6 * max(1.0, row.mean_opt)

    def test_one_period(self):
        rows = list(run_special(_quiet(T_grid=(1,))))
        for row in rows:
            assert -1e-9 <= row.regret <= 1

    def test_single(self):
        dist = SPECIAL_INSTANCES["nondegenerate"]
        config = _quiet("single", dist=dist, policies=("f", "birt"), q_list=("-inf", 0), T_grid=(32,))
        rows = list(run_single(config))
        assert [(r.policy, r.q.token()) for r in rows] == [("f", "-inf"), ("birt", "-inf"), ("f", "0.0"),
                                                           ("birt", "0.0")]
        assert {r.instance for r in rows} == {"0"}

    def test_randomized(self):
        config = _quiet("randomized", policies=("f", "birt"), T_grid=(16,), reps=3, instances=2, n_agents=2,
                        n_types=2)
        rows = list(run_randomized(config))
        assert [r.instance for r in rows] == ["0", "0", "1", "1", SUMMARY_INSTANCE, SUMMARY_INSTANCE]
        by_policy = {r.policy: r for r in rows[-2:]}
        for name, summary in by_policy.items():
            instance_rows = [r for r in rows[:4] if r.policy == name]
            assert summary.rel_regret == pytest.approx(sum(r.rel_regret for r in instance_rows) / 2)
        assert _without_time(rows) == _without_time(run_randomized(config))

    def test_randomized_instances(self):
        config = _quiet("randomized", instances=3, n_agents=4, n_types=5)
        instances = randomized_instances(config)
        assert list(instances) == ["0", "1", "2"]
        for dist in instances.values():
            assert dist.support.shape == (5, 4)
            assert dist.probs.sum() == pytest.approx(1)
        assert randomized_instances(config)["2"] == instances["2"]
        assert randomized_instances(dataclasses.replace(config, master_seed=1))["0"] != instances["0"]

    def test_failures_are_recorded(self, monkeypatch):
        def broken(*args, **kwargs):
            raise SolverError("pivot limit")

        monkeypatch.setattr(experiment, "estimate_regret", broken)
        failures = []
        rows = list(run_special(_quiet(policies=("f",), T_grid=(16,)), failures))
        assert rows == []
        assert len(failures) == 2
        assert failures[0]["error"] == "SolverError" and failures[0]["T"] == 16


def test_print_schedule():
    text = print_schedule(1000, 1.05, 2)
    *table, last = text.splitlines()
    schedule = json.loads(last)
    assert schedule["T"] == 1000
    assert schedule["epochs"][0] == 0
    assert schedule["K"] == math.ceil(math.log(math.log(1000)) / math.log(1.05))
    assert len(table) == len(schedule["epochs"]) + 1


def test_print_schedule_small_horizon():
    schedule = json.loads(print_schedule(16, 1.25, 2).splitlines()[-1])
    assert schedule["epochs"] == [0, 5, 9, 12, 13, 14]


def test_special_instances_dump():
    assert SPECIAL_INSTANCES["degenerate"].to_dict() == {"support": [[1.0, 0.5], [0.5, 1.0]], "probs": [0.5, 0.5]}
    assert SPECIAL_INSTANCES["nondegenerate"].to_dict() == {"support": [[1.0, 0.5], [0.5, 1.0]], "probs": [0.4, 0.6]}


def test_unconverged_benchmark_solve_is_a_failure():
    config = _quiet("single", dist=SPECIAL_INSTANCES["nondegenerate"], policies=("f",), q_list=(-1,), T_grid=(16,),
                    reps=2, solver=SolverConfig(max_iters=3))
    failures = []
    assert list(run_single(config, failures)) == []
    failure, = failures
    assert failure["error"] == "SolverError"
    assert failure["q"] == "-1.0" and failure["T"] == 16
