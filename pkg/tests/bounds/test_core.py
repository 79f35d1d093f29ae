import sys
import os
import math

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))
import qembound.bounds.core
import qembound.channels
import qembound.numkit
from qembound.bounds.core import (
    AccuracyTarget, BoundReport, LayeredSpec, MomentTarget, StateSet,
)
from qembound.divergences import ObservableSet
from qembound.numkit import InvalidArgument


ZERO = qembound.numkit.ket_state('0')
ONE = qembound.numkit.ket_state('1')
Z_SET = ObservableSet.explicit([qembound.numkit.pauli('Z')])
BASIS = StateSet.explicit([ZERO, ONE])
DEP04 = qembound.channels.make_depolarizing(.4)


@pytest.mark.parametrize('delta, epsilon', [
    (-.1, .1), (math.inf, .1), (.1, -.1), (.1, .6),
])
def test_accuracy_target_invalid(delta, epsilon):
    with pytest.raises(InvalidArgument):
        AccuracyTarget(delta, epsilon)


def test_moment_target_invalid():
    with pytest.raises(InvalidArgument):
        MomentTarget(-1.)
    with pytest.raises(InvalidArgument):
        MomentTarget(.1, math.inf)


@pytest.mark.parametrize('args', [(0, 1, .1), (1, 0, .1), (1, 1, 1.), (1, 1, -.1)])
def test_layered_spec_invalid(args):
    with pytest.raises(InvalidArgument):
        LayeredSpec(*args)


def test_layered_spec_unitaries():
    with pytest.raises(InvalidArgument):
        LayeredSpec(1, 2, .1, unitaries=[np.eye(2)])
    with pytest.raises(InvalidArgument):
        LayeredSpec(1, 1, .1, unitaries=[np.eye(4)])
    with pytest.raises(InvalidArgument):
        LayeredSpec(1, 1, .1, unitaries=[2 * np.eye(2)])


def test_layered_spec_sandwich_unital():
    damping = qembound.channels.make_amplitude_damping(.3)
    with pytest.raises(InvalidArgument):
        LayeredSpec(1, 1, .1, sandwich=[(damping, None)])
    spec = LayeredSpec(1, 1, .1, sandwich=[(DEP04, None)])
    assert spec.sandwich[0][0] is DEP04


def test_report_negative():
    with pytest.raises(InvalidArgument):
        BoundReport('thm4', -1.)


def test_report_record():
    report = BoundReport('thm1_fid', math.inf, {'F': 1., 'epsilon': .1},
                         flags=['Diverges', 'Diverges'])
    record = report.to_record()
    assert record['value'] == 'inf'
    assert record['flags'] == ['Diverges']
    assert record['witness'] is None


@pytest.mark.parametrize('kwargs, value', [
    ({'fidelity': .9}, 9.6958),
    ({'relative_entropy': .1}, 18.4664),
    ({'fidelity': .64}, 2.2887),
])
def test_thm1_scalar(kwargs, value):
    report = qembound.bounds.core.thm1_scalar(.1, **kwargs)
    assert report.value == pytest.approx(value, rel=1e-3)
    assert not report.flags


def test_thm1_scalar_edges():
    zero_fid = qembound.bounds.core.thm1_scalar(.1, fidelity=0.)
    assert zero_fid.value == 0
    assert zero_fid.flags == (qembound.bounds.core.PERFECTLY_DISTINGUISHABLE,)
    inf_rel = qembound.bounds.core.thm1_scalar(.1, relative_entropy=math.inf)
    assert inf_rel.value == 0
    unit_fid = qembound.bounds.core.thm1_scalar(.1, fidelity=1.)
    assert math.isinf(unit_fid.value)
    assert qembound.bounds.core.DIVERGES in unit_fid.flags
    half = qembound.bounds.core.thm1_scalar(.5, fidelity=.5)
    assert half.value == 0


def test_thm1_scalar_inputs():
    with pytest.raises(InvalidArgument):
        qembound.bounds.core.thm1_scalar(.1)
    with pytest.raises(InvalidArgument):
        qembound.bounds.core.thm1_scalar(.1, fidelity=.5, relative_entropy=.1)
    with pytest.raises(InvalidArgument):
        qembound.bounds.core.thm1_scalar(.1, fidelity=1.5)


def test_thm1_scalar_epsilon_monotone():
    values = [qembound.bounds.core.thm1_scalar(eps, fidelity=.8).value
              for eps in (.01, .1, .2, .4)]
    assert values == sorted(values, reverse=True)


def test_thm1_bound_depolarized_basis():
    fid, rel = qembound.bounds.core.thm1_bound(
        BASIS, DEP04, Z_SET, AccuracyTarget(.5, .1)
    )
    assert fid.value == pytest.approx(2.2887, rel=1e-3)
    assert fid.witness['channel_index'] == 0
    assert fid.witness['indices'] == (0, 1)
    assert fid.inputs['pairs_admissible'] == 2
    expected_rel = qembound.bounds.core.thm1_scalar(
        .1, relative_entropy=qembound.divergences.relative_entropy(
            np.diag([.8, .2]), np.diag([.2, .8])
        )
    ).value
    assert rel.value == pytest.approx(expected_rel)


def test_thm1_bound_weakest_channel():
    weak = qembound.channels.make_depolarizing(.1)
    fid, rel = qembound.bounds.core.thm1_bound(
        BASIS, [weak, DEP04], Z_SET, AccuracyTarget(.5, .1)
    )
    assert fid.witness['channel_index'] == 0
    alone, _ = qembound.bounds.core.thm1_bound(
        BASIS, weak, Z_SET, AccuracyTarget(.5, .1)
    )
    assert fid.value == pytest.approx(alone.value)


def test_thm1_bound_empty_feasible():
    fid, rel = qembound.bounds.core.thm1_bound(
        BASIS, DEP04, Z_SET, AccuracyTarget(1.5, .1)
    )
    assert fid.value == 0
    assert qembound.bounds.core.EMPTY_FEASIBLE_SET in fid.flags
    assert qembound.bounds.core.EMPTY_FEASIBLE_SET in rel.flags


def test_thm1_bound_identity_perfect():
    fid, rel = qembound.bounds.core.thm1_bound(
        BASIS, qembound.channels.identity_channel(2), Z_SET,
        AccuracyTarget(.5, .1)
    )
    assert fid.value == 0
    assert qembound.bounds.core.PERFECTLY_DISTINGUISHABLE in fid.flags


def test_thm1_bound_dimension_mismatch():
    with pytest.raises(InvalidArgument):
        qembound.bounds.core.thm1_bound(
            BASIS, qembound.channels.identity_channel(4),
            ObservableSet.all_effects(4), AccuracyTarget(.1, .1)
        )


def test_thm1_bound_all_pure_reproducible():
    states = StateSet.all_pure(2, samples=20)
    first = qembound.bounds.core.thm1_bound(
        states, DEP04, ObservableSet.all_effects(2), AccuracyTarget(.1, .1),
        rng=5,
    )
    again = qembound.bounds.core.thm1_bound(
        states, DEP04, ObservableSet.all_effects(2), AccuracyTarget(.1, .1),
        rng=5,
    )
    assert first[0].value == again[0].value
    assert first[1].value == again[1].value
    assert first[0].value > 0


def test_thm3_scalar_value():
    report = qembound.bounds.core.thm3_scalar(1., .9, MomentTarget(.5))
    assert report.value == pytest.approx(2.7307, rel=1e-3)


def test_thm3_scalar_edges():
    assert math.isinf(
        qembound.bounds.core.thm3_scalar(1., .9, MomentTarget(0.)).value
    )
    assert qembound.bounds.core.thm3_scalar(
        1., .9, MomentTarget(.5, .5)
    ).value == 0
    with pytest.raises(InvalidArgument):
        qembound.bounds.core.thm3_scalar(.5, .9, MomentTarget(.5, .5))


def test_thm3_moment_monotone():
    by_sigma = [qembound.bounds.core.thm3_scalar(1., .9,
                                                 MomentTarget(s)).value
                for s in (.1, .3, .5)]
    by_bias = [qembound.bounds.core.thm3_scalar(1., .9,
                                                MomentTarget(.3, b)).value
               for b in (0, .1, .3)]
    assert by_sigma == sorted(by_sigma, reverse=True)
    assert by_bias == sorted(by_bias, reverse=True)


def test_thm3_bound_search():
    report = qembound.bounds.core.thm3_bound(
        BASIS, DEP04, Z_SET, MomentTarget(.5)
    )
    expected = qembound.bounds.core.thm3_scalar(2., .64, MomentTarget(.5))
    assert report.value == pytest.approx(expected.value)
    assert report.formula_id == 'thm3'


def test_prop2_value():
    report = qembound.bounds.core.prop2_bound(1., AccuracyTarget(.1, .1))
    assert report.value == pytest.approx(2.2887, rel=1e-3)
    assert report.details['approximation'] > 0


def test_prop2_diverges_at_zero_delta():
    report = qembound.bounds.core.prop2_bound(1., AccuracyTarget(0., .1))
    assert math.isinf(report.value)
    assert qembound.bounds.core.DIVERGES in report.flags


def test_prop2_domain():
    with pytest.raises(InvalidArgument):
        qembound.bounds.core.prop2_bound(1., AccuracyTarget(.5, .1))


def test_state_set_invalid():
    with pytest.raises(InvalidArgument):
        StateSet('all_pure')
    with pytest.raises(InvalidArgument):
        StateSet.explicit([ZERO, qembound.numkit.ket_state('00')])
    with pytest.raises(InvalidArgument):
        StateSet('random')


def test_explicit_pairs_ordered():
    pairs = list(BASIS.pairs())
    assert [indices for indices, rho, sigma in pairs] == [(0, 1), (1, 0)]
