import math

import numpy as np
import pytest

from fair_alloc.arrivals import sample_sequence
from fair_alloc.policies.fluid_policy import FluidPolicy
from fair_alloc.policies.policy_kind import PolicyKind, make_policy, init_policy, step
from fair_alloc.policies.resolving_policy import BackwardResolvingPolicy, FrequentResolvingPolicy
from fair_alloc.policies.schedule import make_schedule
from fair_alloc.utils.sampling import SeedSpec
from fair_alloc.welfare import WelfareParam

KINDS = ["f", "fr", "bir", "birt"]
QS = [-math.inf, -1, 0]


def _kind(name, q=-math.inf, eta=1.25):
    return PolicyKind.parse(name, q, eta)


class TestPolicyKind:
    def test_parse(self):
        kind = PolicyKind.parse("BIRT", "-inf", 1.05)
        assert kind.name == "birt" and kind.eta == 1.05 and kind.welfare.is_egalitarian
        assert PolicyKind.parse("fr", 0).eta is None

    def test_rejects_bad_kinds(self):
        with pytest.raises(ValueError):
            PolicyKind.parse("lp", 0)
        with pytest.raises(ValueError):
            PolicyKind.parse("birt", 0, 1.0)
        with pytest.raises(ValueError):
            PolicyKind("f", WelfareParam.of(0), 1.05)

    def test_make_policy(self):
        assert isinstance(make_policy(_kind("f")), FluidPolicy)
        assert isinstance(make_policy(_kind("fr")), FrequentResolvingPolicy)
        bir, birt = make_policy(_kind("bir")), make_policy(_kind("birt"))
        assert isinstance(bir, BackwardResolvingPolicy) and not bir.thresholded
        assert birt.thresholded and birt.name == "birt"


class TestFluidPolicy:
    def test_degenerate_instance(self, degenerate_dist):
        state = init_policy(_kind("f"), degenerate_dist, 64)
        np.testing.assert_allclose(state.policy, np.eye(2), atol=1e-9)
        assert state.n_solves == 1
        for _ in range(10):
            np.testing.assert_allclose(step(state, _kind("f"), degenerate_dist, 64, 0), [1, 0], atol=1e-9)
        np.testing.assert_allclose(state.utilities, [10, 0], atol=1e-9)
        assert state.t == 10

    def test_fr_and_f_start_alike(self, random_dist):
        for q in QS:
            f = init_policy(_kind("f", q), random_dist, 100)
            fr = init_policy(_kind("fr", q), random_dist, 100)
            assert np.array_equal(f.policy, fr.policy)


class TestResolving:
    @pytest.mark.parametrize("q", QS)
    def test_solve_counts(self, q, random_dist):
        T = 40
        types = sample_sequence(random_dist, T, SeedSpec(3)).types
        for name, expected in (("f", 1), ("fr", T), ("birt", len(make_schedule(T, 1.25, 3)))):
            policy = make_policy(_kind(name, q))
            state = policy.play(policy.reset(random_dist, T), random_dist, types)
            assert state.n_solves == expected
            assert state.done

    def test_birt_solves_bounded_by_schedule(self, random_dist):
        T = 1000
        policy = make_policy(_kind("birt", eta=1.05))
        types = sample_sequence(random_dist, T, SeedSpec(0)).types
        state = policy.play(policy.reset(random_dist, T), random_dist, types)
        K = math.ceil(math.log(math.log(T)) / math.log(1.05))
        assert state.n_solves == len(state.schedule) <= K + 1

    def test_thresholded_entries(self, random_dist):
        T = 200
        kind = _kind("birt", -math.inf)
        state = init_policy(kind, random_dist, T)
        schedule = state.schedule
        types = sample_sequence(random_dist, T, SeedSpec(4)).types
        seen = set()
        for arrived in types:
            step(state, kind, random_dist, T, int(arrived))
            k = state.next_epoch - 1
            if k not in seen:
                seen.add(k)
                gamma = schedule.thresholds[k]
                assert np.all((state.policy == 0) | (state.policy >= gamma))
        assert seen == set(range(len(schedule)))

    def test_bir_equals_birt_without_thresholds(self, random_dist):
        # below T = 4 the schedule is the single epoch 0 with gamma = 0
        for T in (1, 2, 3):
            types = sample_sequence(random_dist, T, SeedSpec(5)).types
            runs = []
            for name in ("bir", "birt"):
                policy = make_policy(_kind(name))
                state = policy.reset(random_dist, T)
                runs.append([policy.step(state, random_dist, int(a)) for a in types])
            for a, b in zip(*runs):
                assert np.array_equal(a, b)

    def test_fr_tracks_lagging_agent(self, degenerate_dist):
        # after a run of type 1 arrivals agent 2 lags, so FR hands it the next type 2 in full
        kind = _kind("fr")
        state = init_policy(kind, degenerate_dist, 20)
        for _ in range(8):
            step(state, kind, degenerate_dist, 20, 0)
        x = step(state, kind, degenerate_dist, 20, 1)
        np.testing.assert_allclose(x, [0, 1], atol=1e-9)


@pytest.mark.parametrize("name", KINDS)
@pytest.mark.parametrize("q", QS)
class TestSequentialContract:
    def test_allocations_on_simplex_and_monotone(self, name, q, random_dist):
        T = 60
        policy = make_policy(_kind(name, q))
        state = policy.reset(random_dist, T)
        before = state.utilities.copy()
        for arrived in sample_sequence(random_dist, T, SeedSpec(1)).types:
            x = policy.step(state, random_dist, int(arrived))
            assert np.all(x >= -1e-12)
            assert x.sum() == pytest.approx(1, abs=1e-9)
            assert np.all(state.utilities >= before)
            before = state.utilities.copy()

    def test_play_matches_step(self, name, q, random_dist):
        T = 60
        types = sample_sequence(random_dist, T, SeedSpec(2)).types
        policy = make_policy(_kind(name, q))
        stepped = policy.reset(random_dist, T)
        for arrived in types:
            policy.step(stepped, random_dist, int(arrived))
        played = policy.play(policy.reset(random_dist, T), random_dist, types)
        assert np.array_equal(stepped.utilities, played.utilities)
        assert stepped.n_solves == played.n_solves
        assert np.array_equal(stepped.policy, played.policy)

    def test_play_in_pieces(self, name, q, random_dist):
        T = 60
        types = sample_sequence(random_dist, T, SeedSpec(6)).types
        policy = make_policy(_kind(name, q))
        whole = policy.play(policy.reset(random_dist, T), random_dist, types)
        pieces = policy.reset(random_dist, T)
        for chunk in np.array_split(types, 7):
            policy.play(pieces, random_dist, chunk)
        assert np.array_equal(whole.utilities, pieces.utilities)

    def test_non_anticipative(self, name, q, random_dist):
        T = 50
        prefix = sample_sequence(random_dist, 30, SeedSpec(7)).types
        allocations = []
        for stream in (8, 9):
            suffix = sample_sequence(random_dist, T - 30, SeedSpec(stream)).types
            policy = make_policy(_kind(name, q))
            state = policy.reset(random_dist, T)
            allocations.append([policy.step(state, random_dist, int(a)) for a in np.concatenate((prefix, suffix))])
        for a, b in zip(allocations[0][:30], allocations[1][:30]):
            assert np.array_equal(a, b)

    def test_cannot_step_past_horizon(self, name, q, random_dist):
        policy = make_policy(_kind(name, q))
        state = policy.reset(random_dist, 3)
        for _ in range(3):
            policy.step(state, random_dist, 0)
        with pytest.raises(ValueError):
            policy.step(state, random_dist, 0)
        with pytest.raises(ValueError):
            policy.play(policy.reset(random_dist, 3), random_dist, np.zeros(4, dtype=np.int64))


def test_step_rejects_invalid_type(random_dist):
    kind = _kind("f")
    state = init_policy(kind, random_dist, 5)
    with pytest.raises(ValueError):
        step(state, kind, random_dist, 5, 3)
    with pytest.raises(ValueError):
        step(state, kind, random_dist, 6, 0)
