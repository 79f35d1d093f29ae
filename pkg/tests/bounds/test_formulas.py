import sys
import os

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))
import qembound.bounds
import qembound.bounds.formulas
from qembound.numkit import InvalidArgument


@pytest.mark.parametrize('formula_id, inputs, value', [
    ('thm4', {'M': 2, 'L': 5, 'gamma': .1, 'epsilon': .25}, .25856),
    ('thm5', {'M': 1, 'L': 3, 'gamma': .2, 'sigma_max': .1, 'd_o': 1.},
     .66227),
    ('thm1_fid', {'F': .9, 'epsilon': .1}, 9.6958),
    ('thm1_rel', {'S': .1, 'epsilon': .1}, 18.4664),
    ('thm3', {'d_o': 1., 'F': .9, 'sigma_max': .5}, 2.7307),
    ('prop2', {'eta': 1., 'delta': .1, 'epsilon': .1}, 2.2887),
    ('appE1', {'M': 1, 'L': 10, 'gamma': .2, 'epsilon': .1}, 2.3045),
])
def test_evaluate(formula_id, inputs, value):
    report = qembound.bounds.evaluate_formula(formula_id, **inputs)
    assert report.formula_id == formula_id
    assert report.value == pytest.approx(value, rel=1e-3)


def test_none_inputs_dropped():
    report = qembound.bounds.evaluate_formula(
        'thm5', M=1, L=3, gamma=.2, sigma_max=.1, d_o=1., b_max=None
    )
    assert report.value == pytest.approx(.66227, abs=1e-4)


def test_moment_variants_registered():
    for formula_id in ('appE2', 'appE3', 'appE4', 'thm6_prob',
                       'thm6_moment'):
        assert formula_id in qembound.bounds.BOUNDS


def test_thm6_variants():
    prob = qembound.bounds.evaluate_formula('thm6_prob', M=1, L=3, xi=.64,
                                            epsilon=.1)
    thm4 = qembound.bounds.evaluate_formula('thm4', M=1, L=3, gamma=.2,
                                            epsilon=.1)
    assert prob.value == pytest.approx(thm4.value, rel=1e-12)


def test_unknown_formula():
    with pytest.raises(InvalidArgument):
        qembound.bounds.evaluate_formula('thm9', M=1)


def test_incomplete_inputs():
    with pytest.raises(InvalidArgument):
        qembound.bounds.evaluate_formula('thm4', M=2, L=5)


def test_domain_errors_propagate():
    with pytest.raises(InvalidArgument):
        qembound.bounds.evaluate_formula('thm4', M=2, L=5, gamma=1.5,
                                         epsilon=.1)
