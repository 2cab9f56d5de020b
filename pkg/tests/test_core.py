import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import budgeted_secretary as bs
from budgeted_secretary.core import SimState, _run_large, _run_small
from budgeted_secretary.errors import (BudgetInsufficient, IllegalAction,
                                       QueryWithoutBudget)
from budgeted_secretary import montecarlo, oracle

from conftest import make_spec


class AlwaysStop(bs.Policy):
    def decide(self, state, obs, compare_result=None):
        return bs.STOP


class NeverStop(bs.Policy):
    def decide(self, state, obs, compare_result=None):
        return bs.SKIP


def test_spec_validation():
    with pytest.raises(ValueError):
        bs.ProblemSpec(n_candidates=0, n_groups=1, group_probs=(1.0,), budget=0)
    with pytest.raises(ValueError):
        make_spec(5, probs=(0.5, 0.4))
    with pytest.raises(ValueError):
        make_spec(5, probs=(1.1, -0.1))
    with pytest.raises(ValueError):
        make_spec(5, budget=-1)
    with pytest.raises(ValueError):
        bs.ProblemSpec(n_candidates=5, n_groups=3, group_probs=(0.5, 0.5),
                       budget=0)


def test_sample_arrival_single_candidate():
    spec = make_spec(1, k=1, probs=(1.0,))
    seq = bs.sample_arrival(spec, 123)
    assert list(seq.global_ranks) == [1]
    assert list(seq.groups) == [1]


def test_sample_arrival_deterministic():
    spec = make_spec(3, probs=(0.5, 0.5))
    a = bs.sample_arrival(spec, 77)
    b = bs.sample_arrival(spec, 77)
    assert np.array_equal(a.global_ranks, b.global_ranks)
    assert np.array_equal(a.groups, b.groups)
    c = bs.sample_arrival(spec, 78)
    assert (not np.array_equal(a.global_ranks, c.global_ranks)
            or not np.array_equal(a.groups, c.groups))
    a.validate(spec)


def test_sample_arrival_group_frequency():
    # P(g_1 = 1) = 0.7 across seeds
    spec = make_spec(2, probs=(0.7, 0.3))
    hits = sum(bs.sample_arrival(spec, s).groups[0] == 1 for s in range(30000))
    assert abs(hits / 30000 - 0.7) < 0.01


def test_sample_arrival_label_marginal():
    # i.i.d. labels: empirical frequency over one long draw within binomial CI
    spec = make_spec(100000, probs=(0.7, 0.3))
    seq = bs.sample_arrival(spec, 5)
    freq = np.mean(np.asarray(seq.groups) == 1)
    assert abs(freq - 0.7) < 4 * math.sqrt(0.7 * 0.3 / 100000)


def test_sample_arrival_rank_position_uniform():
    # position of the best candidate is uniform over steps
    spec = make_spec(5, probs=(0.5, 0.5))
    pos = np.zeros(5)
    for s in range(5000):
        seq = bs.sample_arrival(spec, (1000, s))
        pos[int(np.argmin(seq.global_ranks))] += 1
    assert np.all(np.abs(pos / 5000 - 0.2) < 0.02)


def test_observe_examples():
    seq = bs.ArrivalSequence(global_ranks=[2, 1, 3], groups=[1, 1, 1])
    assert bs.observe(seq, SimState(1, 0, [0])).is_group_best
    assert bs.observe(seq, SimState(2, 0, [1])).is_group_best
    seq = bs.ArrivalSequence(global_ranks=[1, 2, 3], groups=[1, 2, 1])
    obs = bs.observe(seq, SimState(3, 0, [1, 1]))
    assert not obs.is_group_best
    assert obs.group == 1 and obs.step == 3


def test_query_overall_examples():
    seq = bs.ArrivalSequence(global_ranks=[2, 1], groups=[1, 2])
    assert bs.query_overall(seq, SimState(1, 1, [0, 0]))
    assert bs.query_overall(seq, SimState(2, 1, [1, 0]))
    seq = bs.ArrivalSequence(global_ranks=[1, 2], groups=[1, 2])
    assert not bs.query_overall(seq, SimState(2, 1, [1, 0]))
    with pytest.raises(QueryWithoutBudget):
        bs.query_overall(seq, SimState(2, 0, [1, 0]))


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_query_implies_group_best(seed):
    # overall record implies in-group record, at every step
    spec = make_spec(12, probs=(0.6, 0.4), budget=12)
    seq = bs.sample_arrival(spec, seed)
    counts = [0, 0]
    for t in range(1, 13):
        state = SimState(t, spec.budget, list(counts))
        if bs.query_overall(seq, state):
            assert bs.observe(seq, state).is_group_best
        counts[seq.groups[t - 1] - 1] += 1
    # step 1 is always a record both ways
    assert bs.observe(seq, SimState(1, 1, [0, 0])).is_group_best
    assert bs.query_overall(seq, SimState(1, 1, [0, 0]))


def test_run_policy_single_candidate():
    spec = make_spec(1, k=1, probs=(1.0,))
    out = bs.run_policy(bs.sample_arrival(spec, 0), bs.single_threshold(spec, 1.0), spec)
    assert out.success and out.stop_time == 1


def test_run_policy_classical_one_over_e():
    # K=1 threshold rule at floor(N/e) succeeds with probability ~1/e
    spec = make_spec(1000, k=1, probs=(1.0,))
    pol = bs.single_threshold(spec, 1 / math.e)
    hits = sum(bs.run_policy(bs.sample_arrival(spec, (3, i)), pol, spec).success
               for i in range(100000))
    assert abs(hits / 100000 - 0.368) < 0.01


def test_run_policy_never_stop_fails():
    spec = make_spec(20, probs=(0.5, 0.5))
    out = bs.run_policy(bs.sample_arrival(spec, 1), NeverStop(), spec)
    assert not out.success and out.stop_time is None
    assert out.comparisons_used == 0 and out.first_compare_time is None


def test_run_policy_small_instance_matches_oracle_mc():
    # N=4 double threshold: exact oracle value vs Monte Carlo, 3 s.e.
    spec = make_spec(4, probs=(0.5, 0.5), budget=1)
    pol = bs.double_threshold(spec, 0.5, 0.5)
    exact = oracle.exact_policy_success(spec, pol).success_prob
    est = montecarlo.estimate_success(spec, pol, 30000, seed=11)
    se = math.sqrt(exact * (1 - exact) / est.trials)
    assert abs(est.rate - exact) <= 3 * se + 1e-9


def test_illegal_actions():
    class CompareAlways(bs.Policy):
        def decide(self, state, obs, compare_result=None):
            return bs.COMPARE

    spec = make_spec(10, probs=(0.5, 0.5), budget=0)
    with pytest.raises(IllegalAction):
        bs.run_policy(bs.sample_arrival(spec, 2), CompareAlways(), spec)
    spec1 = make_spec(10, probs=(0.5, 0.5), budget=1)
    with pytest.raises(IllegalAction):
        # second compare within the same step
        bs.run_policy(bs.sample_arrival(spec1, 2), CompareAlways(), spec1)

    class Gibberish(bs.Policy):
        def decide(self, state, obs, compare_result=None):
            return "select"

    with pytest.raises(IllegalAction):
        bs.run_policy(bs.sample_arrival(spec, 2), Gibberish(), spec)


def test_budget_never_exceeded():
    # comparisons_used <= B over many random trials and threshold tables
    r = np.random.default_rng(9)
    for trial in range(10000):
        n = int(r.integers(2, 30))
        budget = int(r.integers(0, 4))
        spec = make_spec(n, probs=(0.5, 0.5), budget=budget)
        table = r.uniform(0.0, 1.0, size=(2, budget + 1))
        pol = bs.dt_policy(spec, table)
        out = bs.run_policy(bs.sample_arrival(spec, (7, trial)), pol, spec)
        assert out.comparisons_used <= budget
        if out.success:
            assert out.stop_time is not None


@given(st.integers(0, 100_000), st.integers(2, 60), st.integers(0, 3))
@settings(max_examples=120, deadline=None)
def test_small_and_vectorized_paths_agree(seed, n, budget):
    spec = make_spec(n, probs=(0.55, 0.45), budget=budget)
    seq = bs.sample_arrival(spec, seed)
    pol = bs.double_threshold(spec, 0.3, 0.7)
    assert _run_small(seq, pol, spec, True) == _run_large(seq, pol, spec, True)
    generic = AlwaysStop()
    assert (_run_small(seq, generic, spec, False)
            == _run_large(seq, generic, spec, False))


def test_pairwise_adapter_identity_for_two_groups():
    base = make_spec(150, probs=(0.5, 0.5), budget=1)
    pw = make_spec(150, probs=(0.5, 0.5), budget=1,
                   comparison_model=bs.ComparisonModel.PAIRWISE)
    for i in range(500):
        a = bs.run_policy(bs.sample_arrival(base, (5, i)),
                          bs.double_threshold(base, 0.3, 0.5), base)
        b = bs.run_policy(bs.sample_arrival(pw, (5, i)),
                          bs.pairwise_cost_adapter(bs.double_threshold(pw, 0.3, 0.5), pw),
                          pw)
        assert a == b


def test_pairwise_adapter_budget_insufficient():
    spec = make_spec(40, k=3, probs=(0.4, 0.3, 0.3), budget=1,
                     comparison_model=bs.ComparisonModel.PAIRWISE)
    pol = bs.pairwise_cost_adapter(bs.single_threshold(spec, 0.3), spec)
    raised = False
    for i in range(100):
        try:
            bs.run_policy(bs.sample_arrival(spec, (13, i)), pol, spec)
        except BudgetInsufficient:
            raised = True
            break
    assert raised


def test_pairwise_adapter_first_query_cost():
    spec = make_spec(40, k=3, probs=(0.4, 0.3, 0.3), budget=2,
                     comparison_model=bs.ComparisonModel.PAIRWISE)
    pol = bs.pairwise_cost_adapter(bs.single_threshold(spec, 0.4), spec)
    queried = 0
    for i in range(400):
        out = bs.run_policy(bs.sample_arrival(spec, (17, i)), pol, spec)
        assert out.comparisons_used <= 2
        if out.first_compare_time is not None:
            queried += 1
            assert out.comparisons_used >= 2
    assert queried > 50
