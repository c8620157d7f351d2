import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsubgrad.stepsizes import (Constant, Diminishing, Dynamic, FrameworkConstants,
                                diminishing_partial_sum_lower, rule_from_params, stepsize)

UNIT = FrameworkConstants(alpha=2.0, beta=1.0, gamma=1.0, alpha_inf=2.0, beta_sup=1.0,
                          eps=0.0, p=1.0)


def test_stepsize_examples():
    assert stepsize(Constant(0.3), 7, 1.0, UNIT) == 0.3
    assert stepsize(Diminishing(1.0, 0.5), 4, 1.0, UNIT) == 0.5
    assert stepsize(Dynamic(1.0, target=0.0), 1, -0.5, UNIT) == 0.0
    assert stepsize(Dynamic(1.0, target=0.0), 1, 0.0, UNIT) == 0.0
    # L = p = 1, lambda = 1, gap 2: alpha*lambda/(2 beta) * gap = 2
    assert stepsize(Dynamic(1.0, target=0.0), 1, 2.0, UNIT) == 2.0


def test_dynamic_respects_holder_order():
    c = FrameworkConstants(alpha=2 * 4.0 ** -2, beta=1, gamma=1, alpha_inf=2 * 4.0 ** -2,
                           beta_sup=1, eps=0, p=0.5)
    # (alpha lambda / 2 beta) * gap^(1/p) with alpha = 1/8, lambda = 1, gap = 3
    assert stepsize(Dynamic(1.0, 0.0, p=0.5), 1, 3.0, c) == pytest.approx(9 / 16)


def test_alternating_schedule():
    rule = Dynamic((0.5, 1.5), target=0.0)
    assert (rule.lam_lower, rule.lam_upper) == (0.5, 1.5)
    assert [rule.lam(k) for k in range(1, 5)] == [0.5, 1.5, 0.5, 1.5]
    assert rule(2, 1.0, UNIT) == 1.5


def test_rule_validation():
    with pytest.raises(ValueError):
        Constant(0.0)
    with pytest.raises(ValueError, match=r"s must lie in \(0,1\)"):
        Diminishing(1.0, 1.5)
    with pytest.raises(ValueError):
        Diminishing(-1.0, 0.5)
    with pytest.raises(ValueError):
        Dynamic(2.0, 0.0)
    with pytest.raises(ValueError):
        Dynamic((0.5, 0.0), 0.0)
    with pytest.raises(ValueError):
        stepsize(Constant(1.0), 0, 1.0, UNIT)
    with pytest.raises(ValueError):
        FrameworkConstants(alpha=1, beta=1, gamma=1, alpha_inf=2, beta_sup=1, eps=0, p=1)


def test_rule_from_params():
    assert rule_from_params("constant", {"v": 0.1}) == Constant(0.1)
    assert rule_from_params("diminishing", {"c": 1, "s": 0.5}) == Diminishing(1, 0.5)
    rule = rule_from_params("dynamic", {"lambda": [0.5, 1.0]}, target=0.2)
    assert rule.schedule == (0.5, 1.0) and rule.target == 0.2
    with pytest.raises(ValueError):
        rule_from_params("armijo", {})


@settings(max_examples=100, deadline=None)
@given(c=st.floats(0.01, 10), s=st.floats(0.01, 0.99), K=st.integers(1, 2000))
def test_diminishing_properties(c, s, K):
    rule = Diminishing(c, s)
    v = np.array([stepsize(rule, k, 0.0, UNIT) for k in range(1, K + 2)])
    assert np.all(v > 0)
    assert np.all(np.diff(v) < 0)
    assert v[:K].sum() >= diminishing_partial_sum_lower(c, s, K) * (1 - 1e-12)


@settings(max_examples=200, deadline=None)
@given(f=st.floats(-10, 10), target=st.floats(-5, 5), lam=st.floats(0.01, 1.99))
def test_dynamic_nonnegative_and_zero_exactly_below_target(f, target, lam):
    v = stepsize(Dynamic(lam, target), 1, f, UNIT)
    assert v >= 0
    assert (v == 0) == (f <= target)


def test_partial_sum_bound_diverges():
    assert diminishing_partial_sum_lower(1.0, 0.5, 10 ** 6) > 1000
    assert math.isclose(diminishing_partial_sum_lower(1.0, 0.5, 3), 2 * (2 - 1))
