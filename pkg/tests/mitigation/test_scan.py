
import sys
import os
import math

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))
import qembound.numkit
import qembound.mitigation.scan
from qembound.bounds.core import AccuracyTarget, BoundReport, LayeredSpec
from qembound.mitigation.circuit import LayeredCircuit
from qembound.mitigation.protocols import ProtocolSpec
from qembound.mitigation.scan import ScanRow
from qembound.numkit import InvalidArgument


BASIS = [qembound.numkit.ket_state('0'), qembound.numkit.ket_state('1')]
Z = qembound.numkit.pauli('Z')
X = qembound.numkit.pauli('X')
TARGET = AccuracyTarget(.1, .1)


@pytest.mark.parametrize('protocol, size', [
    (ProtocolSpec('none'), 1),
    (ProtocolSpec('pec'), 1),
    (ProtocolSpec('zne', scale_factors=[1, 2, 3]), 3),
])
def test_induced_ensemble_single_qubit(protocol, size):
    c = LayeredCircuit.build(LayeredSpec(1, 2, .1), rng=0)
    ensemble = qembound.mitigation.scan.induced_ensemble(c, protocol)
    assert len(ensemble) == size


def test_induced_ensemble_pec_unresolved():
    c = LayeredCircuit.build(LayeredSpec(2, 1, .1), rng=0)
    assert qembound.mitigation.scan.induced_ensemble(
        c, ProtocolSpec('pec')
    ) is None


def test_depth_bounds_all_present():
    c = LayeredCircuit.build(LayeredSpec(1, 3, .1), unitaries='identity')
    bounds, flags = qembound.mitigation.scan.depth_bounds(
        c, BASIS, Z, ProtocolSpec('pec'), TARGET
    )
    assert set(bounds) == {'thm4', 'appE1', 'appE2', 'thm1_fid', 'thm1_rel'}
    assert flags == []


def test_depth_bounds_premise_unmet():
    c = LayeredCircuit.build(LayeredSpec(1, 1, .1, unitaries=[np.eye(2)]))
    bounds, flags = qembound.mitigation.scan.depth_bounds(
        c, BASIS, X, ProtocolSpec('none'), TARGET
    )
    assert 'thm4' not in bounds
    assert qembound.mitigation.scan.PREMISE_UNMET in flags


def test_depth_bounds_unresolved_ensemble():
    c = LayeredCircuit.build(LayeredSpec(2, 1, .1), unitaries='identity')
    inputs = [qembound.numkit.ket_state('00'),
              qembound.numkit.ket_state('11')]
    bounds, flags = qembound.mitigation.scan.depth_bounds(
        c, inputs, qembound.numkit.pauli('ZI'), ProtocolSpec('pec'), TARGET
    )
    assert 'thm1_fid' not in bounds
    assert flags == [qembound.mitigation.scan.ENSEMBLE_UNRESOLVED]


def test_row_violations():
    row = ScanRow(2, {'thm4': BoundReport('thm4', 10.),
                      'appE1': BoundReport('appE1', 3.),
                      'appE2': None}, 5)
    assert row.violations() == [('thm4', 10.)]
    assert row.bound_value('appE2') is None
    assert ScanRow(2, {'thm4': BoundReport('thm4', 10.)}, None).violations() \
        == []


@pytest.mark.parametrize('layer_range', [[], [0, 1]])
def test_scan_invalid_range(layer_range):
    with pytest.raises(InvalidArgument):
        qembound.mitigation.scan.layered_scan(1, layer_range, .1, TARGET,
                                              ProtocolSpec('pec'))


def test_scan_pec_small():
    target = AccuracyTarget(.4, .2)
    result = qembound.mitigation.scan.layered_scan(
        1, [1, 2], .1, target, ProtocolSpec('pec'), trials=40, rng=3,
        unitaries='identity',
    )
    assert [row.layers for row in result.rows] == [1, 2]
    assert all(row.n_hat is not None for row in result.rows)
    assert result.violations() == []
    assert result.bound_slope == pytest.approx(-2 * math.log(.9))
    rows = result.csv_rows()
    assert list(rows[0]) == list(qembound.mitigation.scan.CSV_COLUMNS)
    record = result.to_record()
    assert len(record['rows']) == 2
    assert 'thm4' in record['rows'][0]['bounds']


def test_scan_biased_unachievable():
    result = qembound.mitigation.scan.layered_scan(
        1, [3], .3, AccuracyTarget(.05, .1), ProtocolSpec('none'),
        trials=30, n_max=16, rng=0, unitaries='identity',
    )
    row = result.rows[0]
    assert row.n_hat is None
    assert qembound.mitigation.scan.UNACHIEVABLE in row.flags
    assert math.isnan(result.slope_fit)


@pytest.mark.slow
def test_scan_pec_depth_grid():
    target = AccuracyTarget(.2, .1)
    result = qembound.mitigation.scan.layered_scan(
        1, range(1, 7), .2, target, ProtocolSpec('pec'), trials=400, rng=17,
        threads=8, unitaries='identity',
    )
    assert [row.layers for row in result.rows] == [1, 2, 3, 4, 5, 6]
    for row in result.rows:
        assert row.n_hat is not None
        assert row.bound_value('thm4') is not None
        assert row.n_hat >= row.bound_value('thm4')
    assert result.violations() == []
    assert result.bound_slope == pytest.approx(2 * math.log(1 / .8))
    assert result.slope_fit >= .75 * result.bound_slope
