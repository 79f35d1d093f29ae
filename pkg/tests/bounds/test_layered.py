import sys
import os
import math
import itertools

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))
import qembound.bounds.core
import qembound.bounds.layered
import qembound.contraction
from qembound.bounds.core import AccuracyTarget, LayeredSpec, MomentTarget
from qembound.numkit import InvalidArgument


GRID = list(itertools.product([1, 2, 3, 5], [1, 2, 5, 10, 20],
                              [.01, .05, .1, .2, .5]))


def test_thm4_value():
    report = qembound.bounds.layered.thm4_bound(LayeredSpec(2, 5, .1),
                                                AccuracyTarget(0, .25))
    assert report.value == pytest.approx(.25856, abs=1e-4)
    assert report.inputs == {'M': 2, 'L': 5, 'gamma': .1, 'epsilon': .25}


def test_thm5_value():
    report = qembound.bounds.layered.thm5_bound(
        LayeredSpec(1, 3, .2), MomentTarget(.1), 1.
    )
    assert report.value == pytest.approx(.66227, abs=1e-4)


def test_appendix_e_values():
    e1, e2 = qembound.bounds.layered.appendixE_bounds(
        LayeredSpec(1, 10, .2), target=AccuracyTarget(0, .1)
    )
    assert e1.value == pytest.approx(2.3045, rel=1e-3)
    assert e2.value is not None
    assert e2.details['domain_value'] == pytest.approx(.1264, abs=1e-4)


def test_appendix_e_domain_violated():
    e1, e2 = qembound.bounds.layered.appendixE_bounds(
        LayeredSpec(2, 1, .1), target=AccuracyTarget(0, .1)
    )
    assert e2.value is None
    assert qembound.bounds.core.DOMAIN_VIOLATED in e2.flags
    assert e1.value > 0


def test_appendix_e_moment_mode():
    reports = qembound.bounds.layered.appendixE_bounds(
        LayeredSpec(1, 10, .2), target=AccuracyTarget(0, .1),
        moments=MomentTarget(.1), d_o=1.
    )
    assert [r.formula_id for r in reports] == ['appE1', 'appE2', 'appE3',
                                               'appE4']


def test_appendix_e_no_mode():
    with pytest.raises(InvalidArgument):
        qembound.bounds.layered.appendixE_bounds(LayeredSpec(1, 1, .1))
    with pytest.raises(InvalidArgument):
        qembound.bounds.layered.appendixE_bounds(LayeredSpec(1, 1, .1),
                                                 moments=MomentTarget(.1))


@pytest.mark.parametrize('m, layers, gamma', GRID)
def test_thm6_recovers_thm4_thm5(m, layers, gamma):
    spec = LayeredSpec(m, layers, gamma)
    xi = (1 - gamma) ** 2
    target = AccuracyTarget(0, .1)
    moments = MomentTarget(.2, .05)
    prob = qembound.bounds.layered.thm6_bound(m, layers, xi, target=target)
    assert abs(prob.value - qembound.bounds.layered.thm4_bound(
        spec, target
    ).value) <= 1e-12 * prob.value
    moment = qembound.bounds.layered.thm6_bound(m, layers, xi,
                                                moments=moments, d_o=1.)
    assert abs(moment.value - qembound.bounds.layered.thm5_bound(
        spec, moments, 1.
    ).value) <= 1e-12 * moment.value


def test_thm6_no_depth_dependence():
    values = {qembound.bounds.layered.thm6_bound(
        2, layers, 1., target=AccuracyTarget(0, .1)
    ).value for layers in (1, 5, 50)}
    assert len(values) == 1
    assert values.pop() == pytest.approx(.64 / (2 * math.log(2) * 2))


def test_thm6_pauli_value():
    xi = qembound.contraction.pauli_renyi2_contraction(.1, .1, .1)
    report = qembound.bounds.layered.thm6_bound(
        1, 4, xi, target=AccuracyTarget(0, .1)
    )
    assert report.value == pytest.approx(8.8, abs=.05)


@pytest.mark.parametrize('kwargs', [
    {'xi': 0., 'target': AccuracyTarget(0, .1)},
    {'xi': 1.2, 'target': AccuracyTarget(0, .1)},
    {'xi': .5},
    {'xi': .5, 'target': AccuracyTarget(0, .1), 'moments': MomentTarget(.1)},
    {'xi': .5, 'moments': MomentTarget(.1)},
])
def test_thm6_invalid(kwargs):
    with pytest.raises(InvalidArgument):
        qembound.bounds.layered.thm6_bound(1, 2, **kwargs)


@pytest.mark.parametrize('gamma', [.05, .2, .5])
def test_strictly_increasing_in_depth(gamma):
    target = AccuracyTarget(0, .1)
    moments = MomentTarget(.2)
    for formula in ('thm4', 'thm5', 'appE1'):
        values = []
        for layers in range(1, 8):
            spec = LayeredSpec(2, layers, gamma)
            if formula == 'thm4':
                report = qembound.bounds.layered.thm4_bound(spec, target)
            elif formula == 'thm5':
                report = qembound.bounds.layered.thm5_bound(spec, moments, 1.)
            else:
                report = qembound.bounds.layered.appendixE_bounds(
                    spec, target=target
                )[0]
            values.append(report.value)
        assert all(a < b for a, b in zip(values[:-1], values[1:]))


def test_epsilon_monotone():
    spec = LayeredSpec(2, 4, .1)
    values = [qembound.bounds.layered.thm4_bound(
        spec, AccuracyTarget(0, eps)
    ).value for eps in (.01, .1, .3, .5)]
    assert values == sorted(values, reverse=True)
    assert values[-1] == 0


def test_noiseless_thm4():
    report = qembound.bounds.layered.thm4_bound(LayeredSpec(1, 3, 0.),
                                                AccuracyTarget(0, .1))
    assert report.value == pytest.approx(.64 / (2 * math.log(2)))
