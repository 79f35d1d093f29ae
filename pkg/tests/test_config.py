
import sys
import os
import json

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))
import qembound.config
from qembound.config import ConfigError, ExperimentConfig


SCAN_PARAMS = {'M': 1, 'L_range': [1, 4], 'gamma': .2, 'delta': .1,
               'epsilon': .1}
THM1_PARAMS = {'formula': 'thm1', 'channels': [{'type': 'depolarizing',
                                                'p': .4}],
               'states': ['0', '1'], 'observables': ['Z'], 'delta': .5,
               'epsilon': .1}
THERMAL_GENERATOR = {'kind': 'thermal', 'hamiltonian': [[.5, 0], [0, -.5]]}
QUTRIT_GENERATOR = {'kind': 'thermal',
                    'hamiltonian': [[1, 0, 0], [0, 0, 0], [0, 0, -1]]}


def resolved(command, parameters, seed=1):
    return qembound.config.resolve(ExperimentConfig(command, seed, parameters))


@pytest.mark.parametrize('data, key', [
    ({'command': 'verify', 'seed': 1, 'extra': 2}, 'extra'),
    ({'command': 'plot', 'seed': 1}, 'command'),
    ({'command': 'verify'}, 'seed'),
    ({'command': 'verify', 'seed': -1}, 'seed'),
    ({'command': 'verify', 'seed': True}, 'seed'),
    ({'command': 'verify', 'seed': 1, 'threads': 0}, 'threads'),
    ({'command': 'verify', 'seed': 1, 'output': {'format': 'xml'}},
     'output.format'),
    ({'command': 'verify', 'seed': 1, 'parameters': {'sample': 5}},
     'parameters.sample'),
    ({'command': 'layered-scan', 'seed': 1, 'parameters': {'M': 1}},
     'parameters.L_range'),
])
def test_invalid_top_level(data, key):
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_dict(data)
    assert err.value.key == key


def test_bound_needs_no_seed():
    cfg = ExperimentConfig.from_dict({'command': 'bound', 'parameters': {
        'formula': 'thm4', 'inputs': {'M': 1, 'L': 1, 'gamma': .1,
                                      'epsilon': .1},
    }})
    assert cfg.seed is None
    assert cfg.parameters['delta'] == 0


def test_defaults_completed():
    cfg = ExperimentConfig('verify', 3, {})
    assert cfg.parameters == {'suites': None, 'samples': 500}
    assert cfg.output_format == 'json'


def test_with_overrides():
    cfg = ExperimentConfig('layered-scan', 3, SCAN_PARAMS)
    changed = cfg.with_overrides(seed=9, gamma=.3, trials=None)
    assert changed.seed == 9
    assert changed.parameters['gamma'] == .3
    assert changed.parameters['trials'] == 400
    assert cfg.parameters['gamma'] == .2


def test_output_dir_env(monkeypatch):
    monkeypatch.setenv(qembound.config.ENV_OUTPUT_DIR, '/tmp/qem')
    assert ExperimentConfig('verify', 1, {}).output_dir() == '/tmp/qem'
    assert ExperimentConfig('verify', 1, {},
                            output_path='out').output_dir() == 'out'
    monkeypatch.delenv(qembound.config.ENV_OUTPUT_DIR)
    assert ExperimentConfig('verify', 1, {}).output_dir() is None


def test_load_file(tmp_path):
    path = tmp_path / 'scan.json'
    path.write_text(json.dumps({'command': 'layered-scan', 'seed': 5,
                                'threads': 2, 'parameters': SCAN_PARAMS}))
    cfg = qembound.config.load(str(path), overrides={'threads': 4})
    assert cfg.command == 'layered-scan'
    assert cfg.threads == 4
    assert cfg.to_dict()['parameters']['L_range'] == [1, 4]


def test_load_invalid_json(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"command": ')
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.load(str(path))
    assert err.value.key == '<file>'


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.load(str(tmp_path / 'none.json'))


@pytest.mark.parametrize('layer_range, layers', [
    ([1, 4], [1, 2, 3, 4]),
    ([2, 2], [2]),
    ([5, 1], [5, 1]),
    ([1, 3, 8], [1, 3, 8]),
])
def test_layer_range(layer_range, layers):
    params = dict(SCAN_PARAMS, L_range=layer_range)
    assert resolved('layered-scan', params)['layers'] == layers


@pytest.mark.parametrize('override, key', [
    ({'L_range': [0, 2]}, 'parameters.L_range'),
    ({'L_range': []}, 'parameters.L_range'),
    ({'L_range': [1.5, 3]}, 'parameters.L_range'),
    ({'L_range': ['a', 3]}, 'parameters.L_range'),
    ({'L_range': [True, 3]}, 'parameters.L_range'),
    ({'L_range': [2, None]}, 'parameters.L_range'),
    ({'gamma': 1.}, 'parameters.gamma'),
    ({'M': 7}, 'parameters.M'),
    ({'M': 1.5}, 'parameters.M'),
    ({'epsilon': .6}, 'parameters.epsilon'),
    ({'protocol': {'kind': 'zne', 'scale_factors': [2]}},
     'parameters.protocol'),
    ({'unitaries': 'clifford'}, 'parameters.unitaries'),
])
def test_scan_invalid(override, key):
    with pytest.raises(ConfigError) as err:
        resolved('layered-scan', dict(SCAN_PARAMS, **override))
    assert err.value.key == key


def test_resolve_thm1():
    objects = resolved('bound', THM1_PARAMS)
    assert len(objects['ensemble']) == 1
    assert objects['target'].delta == .5
    assert objects['oset'].dim == 2


def test_resolve_thm1_missing_epsilon():
    params = dict(THM1_PARAMS, epsilon=None)
    with pytest.raises(ConfigError) as err:
        resolved('bound', params)
    assert err.value.key == 'parameters.epsilon'


def test_resolve_thm3_needs_sigma():
    params = dict(THM1_PARAMS, formula='thm3')
    with pytest.raises(ConfigError) as err:
        resolved('bound', params)
    assert err.value.key == 'parameters.sigma_max'


def test_resolve_unknown_formula():
    with pytest.raises(ConfigError) as err:
        resolved('bound', {'formula': 'thm9'})
    assert err.value.key == 'parameters.formula'


def test_resolve_bad_channel():
    params = dict(THM1_PARAMS, channels=[{'type': 'depolarizing', 'p': 2.}])
    with pytest.raises(ConfigError) as err:
        resolved('bound', params)
    assert err.value.key == 'parameters.channels'


def test_resolve_contraction_check():
    objects = resolved('contraction', {
        'channels': {'type': 'depolarizing', 'p': .2},
        'check': {'xi': .8, 'divergence': 'renyi2'},
    })
    assert np.allclose(objects['check']['fixed'], np.eye(2) / 2)
    assert objects['check']['samples'] == 500
    with pytest.raises(ConfigError):
        resolved('contraction', {
            'channels': {'type': 'depolarizing', 'p': .2},
            'check': {'xi': 0.},
        })


def test_resolve_mitigate_defaults():
    objects = resolved('mitigate', {'M': 2, 'L': 2, 'gamma': .1, 'n': 10,
                                    'delta': .1})
    assert np.allclose(objects['input'], np.diag([1., 0, 0, 0]))
    assert objects['observable'].shape == (4, 4)
    assert 'target' not in objects
    assert objects['protocol'].kind == 'none'


def test_resolve_mitigate_observable_dim():
    with pytest.raises(ConfigError) as err:
        resolved('mitigate', {'M': 2, 'L': 2, 'gamma': .1, 'n': 10,
                              'delta': .1, 'observable': 'Z'})
    assert err.value.key == 'parameters.observable'


def test_resolve_thermal():
    objects = resolved('thermal', {'generator': THERMAL_GENERATOR,
                                   'beta': 1., 't_grid': [0, 1, 2],
                                   'epsilon': .1, 'input': '+'})
    assert objects['generator'].dim == 2
    assert np.allclose(objects['input'], np.full((2, 2), .5))
    with pytest.raises(ConfigError):
        resolved('thermal', {'generator': THERMAL_GENERATOR, 'beta': 1.,
                             't_grid': [-1], 'epsilon': .1})


@pytest.mark.parametrize('given, expected', [
    (None, np.eye(3) / 3),
    ('maximally_mixed', np.eye(3) / 3),
    ([[1, 0, 0], [0, 0, 0], [0, 0, 0]], np.diag([1., 0., 0.])),
])
def test_resolve_thermal_qutrit(given, expected):
    objects = resolved('thermal', {'generator': QUTRIT_GENERATOR,
                                   'beta': 1., 't_grid': [1],
                                   'epsilon': .1, 'input': given})
    assert objects['generator'].dim == 3
    assert np.allclose(objects['input'], expected)


def test_resolve_thermal_default_qubit_input():
    objects = resolved('thermal', {'generator': THERMAL_GENERATOR,
                                   'beta': 1., 't_grid': [1], 'epsilon': .1})
    assert np.allclose(objects['input'], np.diag([1., 0.]))


def test_resolve_verify_unknown_suite():
    with pytest.raises(ConfigError) as err:
        resolved('verify', {'suites': ['pinsker', 'triangle']})
    assert err.value.key == 'parameters.suites'


def test_parse_state_forms():
    assert np.allclose(qembound.config.parse_state('maximally_mixed', 4),
                       np.eye(4) / 4)
    assert np.allclose(qembound.config.parse_state([[0, 0], [0, 1]]),
                       np.diag([0, 1]))
    with pytest.raises(ValueError):
        qembound.config.parse_state('maximally_mixed')
    with pytest.raises(ValueError):
        qembound.config.parse_state('01', 2)
