import numpy as np
import pytest

from budgeted_secretary import ProblemSpec


@pytest.fixture
def two_group_spec():
    return ProblemSpec(n_candidates=100, n_groups=2, group_probs=(0.6, 0.4),
                       budget=1)


def make_spec(n, k=2, probs=None, budget=0, **kw):
    if probs is None:
        probs = tuple(1.0 / k for _ in range(k))
    return ProblemSpec(n_candidates=n, n_groups=k, group_probs=probs,
                       budget=budget, **kw)


def rng(seed=0):
    return np.random.default_rng(seed)
