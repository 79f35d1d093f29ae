
import sys
import os
import math

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))
import qembound.util


@pytest.mark.parametrize('num, den, result', [
    (0, 0, 0),
    (1, 0, math.inf),
    (1, math.inf, 0),
    (math.inf, math.inf, math.inf),
    (3, 2, 1.5),
])
def test_safe_ratio(num, den, result):
    assert qembound.util.safe_ratio(num, den) == result


def test_first_argmax_ties():
    assert qembound.util.first_argmax([1, 3, 3, 2]) == 1
    assert qembound.util.first_argmin([2, 1, 1]) == 1
    assert qembound.util.first_argmax([]) is None


@pytest.mark.parametrize('successes, trials', [(0, 10), (5, 10), (10, 10)])
def test_wilson_below_proportion(successes, trials):
    lower = qembound.util.wilson_lower_bound(successes, trials)
    assert 0 <= lower <= successes / trials


def test_wilson_value():
    # z = 1.96, 95 of 100
    assert qembound.util.wilson_lower_bound(95, 100) == pytest.approx(
        .8882, abs=1e-3
    )


def test_wilson_no_trials():
    with pytest.raises(ValueError):
        qembound.util.wilson_lower_bound(0, 0)


def test_loglinear_slope():
    xs = [1, 2, 3, 4]
    ys = [math.exp(.7 * x + 1) for x in xs]
    assert qembound.util.loglinear_slope(xs, ys) == pytest.approx(.7)


def test_loglinear_slope_skips_invalid():
    slope = qembound.util.loglinear_slope(
        [1, 2, 3, 4], [math.e, None, math.e ** 3, math.inf]
    )
    assert slope == pytest.approx(1)
    assert math.isnan(qembound.util.loglinear_slope([1], [2]))


def test_matrix_hash_stable():
    m = np.eye(2)
    assert qembound.util.matrix_hash(m) == qembound.util.matrix_hash(m.copy())
    assert qembound.util.matrix_hash(m) != qembound.util.matrix_hash(2 * m)
    assert len(qembound.util.matrix_hash(m)) == 16


def test_pairs():
    assert list(qembound.util.unordered_pairs(3)) == [(0, 1), (0, 2), (1, 2)]
    assert len(list(qembound.util.ordered_pairs(3))) == 6
