"""Experiment configuration files.

An experiment configuration is a JSON object::

    {
        "command": "layered-scan",
        "seed": 20240501,
        "threads": 4,
        "output": {"path": "results", "format": "both"},
        "parameters": {"M": 1, "L_range": [1, 6], "gamma": 0.2, ...}
    }

The ``command`` is one of :data:`COMMANDS` and the ``parameters`` are
specific to it; the accepted keys and their defaults are listed in
:data:`PARAMETERS`. The master ``seed`` is mandatory for every command
using randomness. If no output path is configured, the ``QEMBOUND_OUT``
environment variable gives the output directory; without it, results go
to standard output.

The whole configuration is checked by :func:`resolve` before anything is
computed, which also builds the channels, states and protocols it
describes.
"""

import os
import json
import math
import logging
from typing import Any, Dict, List, Optional

import numpy as np

from qembound import bounds
from qembound import channels
from qembound import numkit
from qembound import persist
from qembound import verify
from qembound.bounds.core import AccuracyTarget, MomentTarget, StateSet
from qembound.divergences import ObservableSet
from qembound.mitigation.protocols import ProtocolSpec
from qembound.numkit import QEMError


logger = logging.getLogger(__name__)

ENV_OUTPUT_DIR = 'QEMBOUND_OUT'
COMMANDS = ('verify', 'bound', 'contraction', 'layered-scan', 'mitigate',
            'thermal')
SEARCH_FORMULAS = ('thm1', 'thm3')
FORMATS = ('json', 'csv', 'both')
UNSEEDED_COMMANDS = ('bound',)

REQUIRED = object()

PARAMETERS: Dict[str, Dict[str, Any]] = {
    'verify': {'suites': None, 'samples': verify.DEFAULT_SAMPLES},
    'bound': {
        'formula': REQUIRED, 'inputs': {}, 'states': None, 'channels': None,
        'observables': 'all_effects', 'delta': 0., 'epsilon': None,
        'sigma_max': None, 'b_max': 0., 'pure_samples': 256,
    },
    'contraction': {
        'channels': REQUIRED, 'observables': 'all_effects', 'restarts': 16,
        'refine_steps': 64, 'delta': None, 'epsilon': None, 'check': None,
    },
    'layered-scan': {
        'M': REQUIRED, 'L_range': REQUIRED, 'gamma': REQUIRED,
        'delta': REQUIRED, 'epsilon': REQUIRED, 'protocol': {'kind': 'pec'},
        'trials': 400, 'n_max': 2 ** 20, 'unitaries': 'random',
    },
    'mitigate': {
        'M': REQUIRED, 'L': REQUIRED, 'gamma': REQUIRED, 'protocol': {},
        'n': REQUIRED, 'trials': 400, 'delta': REQUIRED, 'epsilon': None,
        'n_max': 2 ** 20, 'input': None, 'observable': None,
        'unitaries': 'random',
    },
    'thermal': {
        'generator': REQUIRED, 'beta': REQUIRED, 't_grid': REQUIRED,
        'epsilon': REQUIRED, 'input': None, 'alpha_samples': 400,
        'refine_steps': 20,
    },
}


class ConfigError(QEMError):
    """An experiment configuration is invalid.

    :param key: The offending configuration key.
    :param reason: What is wrong with it.
    """

    def __init__(self, key: str, reason: str):
        super().__init__(f'invalid configuration at {key!r}: {reason}')
        self.key = key
        self.reason = reason


class ExperimentConfig:
    """A validated experiment configuration.

    :param command: One of :data:`COMMANDS`.
    :param seed: Master seed; may only be None for unseeded commands.
    :param parameters: Command parameters, completed with defaults.
    :param threads: Worker threads for Monte Carlo trials.
    :param output_path: Output directory, or None for standard output.
    :param output_format: ``json``, ``csv`` or ``both``.
    """

    def __init__(self,
                 command: str,
                 seed: Optional[int],
                 parameters: Dict[str, Any],
                 threads: int = 1,
                 output_path: Optional[str] = None,
                 output_format: str = 'json',
                 ):
        if command not in COMMANDS:
            raise ConfigError('command', f'{command!r} is not one of '
                                         + ', '.join(COMMANDS))
        if seed is None and command not in UNSEEDED_COMMANDS:
            raise ConfigError('seed', 'a master seed is required')
        if seed is not None and (isinstance(seed, bool)
                                 or not isinstance(seed, int) or seed < 0):
            raise ConfigError('seed', f'{seed!r} is not a nonnegative integer')
        if isinstance(threads, bool) or not isinstance(threads, int) \
                or threads < 1:
            raise ConfigError('threads', f'{threads!r} is not a positive '
                                         'integer')
        if output_format not in FORMATS:
            raise ConfigError('output.format', f'{output_format!r} is not '
                                               'one of ' + ', '.join(FORMATS))
        self.command = command
        self.seed = seed
        self.parameters = _complete(command, parameters)
        self.threads = threads
        self.output_path = output_path
        self.output_format = output_format

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        if not isinstance(data, dict):
            raise ConfigError('<root>', 'a JSON object is required')
        unknown = set(data) - {'command', 'seed', 'threads', 'output',
                               'parameters'}
        if unknown:
            raise ConfigError(sorted(unknown)[0], 'unknown key')
        output = data.get('output') or {}
        if not isinstance(output, dict):
            raise ConfigError('output', 'an object is required')
        return cls(
            command=data.get('command'),
            seed=data.get('seed'),
            parameters=data.get('parameters') or {},
            threads=data.get('threads', 1),
            output_path=output.get('path'),
            output_format=output.get('format', 'json'),
        )

    @classmethod
    def load(cls, path: str) -> 'ExperimentConfig':
        try:
            with open(path, encoding='utf8') as infile:
                data = json.load(infile)
        except OSError as err:
            raise ConfigError('<file>', f'cannot read {path}: {err}')
        except json.JSONDecodeError as err:
            raise ConfigError('<file>', f'invalid JSON: {err}')
        return cls.from_dict(data)

    def with_overrides(self, **overrides) -> 'ExperimentConfig':
        """A copy with top-level fields or parameters replaced.

        Keys ``seed``, ``threads``, ``output_path`` and ``output_format``
        replace the fields; all other non-None values replace parameters.
        """
        fields = {
            'seed': self.seed,
            'threads': self.threads,
            'output_path': self.output_path,
            'output_format': self.output_format,
        }
        parameters = dict(self.parameters)
        for key, value in overrides.items():
            if value is None:
                continue
            if key in fields:
                fields[key] = value
            else:
                parameters[key] = value
        return ExperimentConfig(self.command, parameters=parameters, **fields)

    def output_dir(self) -> Optional[str]:
        """The configured output directory, or the environment default."""
        return self.output_path or os.environ.get(ENV_OUTPUT_DIR) or None

    def to_dict(self) -> Dict[str, Any]:
        """The configuration echo included in every result record."""
        return {
            'command': self.command,
            'seed': self.seed,
            'threads': self.threads,
            'output': {'path': self.output_path,
                       'format': self.output_format},
            'parameters': persist.serialize_value(self.parameters),
        }

    def __repr__(self):
        return f'<ExperimentConfig {self.command} seed={self.seed}>'


def _complete(command: str, parameters: Dict[str, Any]) -> Dict[str, Any]:
    if not isinstance(parameters, dict):
        raise ConfigError('parameters', 'an object is required')
    accepted = PARAMETERS[command]
    unknown = set(parameters) - set(accepted)
    if unknown:
        raise ConfigError(f'parameters.{sorted(unknown)[0]}',
                          f'unknown for {command}; accepted: '
                          + ', '.join(accepted))
    complete = {}
    for key, default in accepted.items():
        value = parameters.get(key, default)
        if value is REQUIRED:
            raise ConfigError(f'parameters.{key}', 'required')
        complete[key] = value
    return complete


def _number(params: Dict[str, Any],
            key: str,
            low: float = -math.inf,
            high: float = math.inf,
            integer: bool = False,
            low_open: bool = False,
            high_open: bool = False,
            ) -> Any:
    value = params[key]
    kinds = (int, np.integer) if integer else (int, float, np.number)
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise ConfigError(f'parameters.{key}', f'{value!r} is not '
                          + ('an integer' if integer else 'a number'))
    too_low = value <= low if low_open else value < low
    too_high = value >= high if high_open else value > high
    if too_low or too_high or (not integer and math.isnan(value)):
        raise ConfigError(
            f'parameters.{key}',
            f'{value!r} outside {"(" if low_open else "["}{low}, '
            f'{high}{")" if high_open else "]"}'
        )
    return value


def _building(key: str, builder, *args):
    # turn construction failures into configuration errors
    try:
        return builder(*args)
    except (QEMError, ValueError, KeyError, TypeError) as err:
        raise ConfigError(key, str(err))


def parse_state(value: Any, dim: Optional[int] = None) -> np.ndarray:
    """A state from a basis label such as ``"01"`` or ``"+"``, the string
    ``maximally_mixed`` or a matrix."""
    if value == 'maximally_mixed':
        if dim is None:
            raise ValueError('maximally mixed state needs a dimension')
        state = numkit.maximally_mixed(dim)
    elif isinstance(value, str):
        state = numkit.ket_state(value)
    else:
        state = numkit.check_state(persist.matrix_from_json(value))
    if dim is not None and state.shape[0] != dim:
        raise ValueError(f'state dimension {state.shape[0]}, expected {dim}')
    return state


def parse_observable(value: Any) -> np.ndarray:
    """An observable from a Pauli label such as ``"ZI"`` or a matrix."""
    if isinstance(value, str):
        return numkit.pauli(value)
    return numkit.check_observable(persist.matrix_from_json(value))


def parse_observable_set(value: Any, dim: int) -> ObservableSet:
    if value == 'all_effects':
        return ObservableSet.all_effects(dim)
    if not isinstance(value, list):
        raise ValueError('observables must be "all_effects" or a list')
    return ObservableSet.explicit([parse_observable(v) for v in value])


def _channel_list(value: Any, key: str) -> channels.NoiseEnsemble:
    specs = value if isinstance(value, list) else [value]
    if not specs:
        raise ConfigError(key, 'at least one channel is required')
    return _building(key, lambda: channels.NoiseEnsemble(
        [channels.from_spec(spec) for spec in specs]
    ))


def _resolve_verify(params):
    suites = params['suites']
    if suites is not None:
        if not isinstance(suites, list):
            raise ConfigError('parameters.suites', 'a list is required')
        for name in suites:
            _building('parameters.suites', verify.get_suite, name)
    _number(params, 'samples', 1, integer=True)
    return {}


def _resolve_bound(params):
    formula = params['formula']
    if formula in SEARCH_FORMULAS:
        return _resolve_search_bound(params)
    if formula not in bounds.BOUNDS:
        raise ConfigError(
            'parameters.formula',
            f'unknown formula {formula!r}; valid: '
            + ', '.join(sorted(bounds.BOUNDS) + list(SEARCH_FORMULAS))
        )
    inputs = params['inputs']
    if not isinstance(inputs, dict):
        raise ConfigError('parameters.inputs', 'an object is required')
    for key, value in inputs.items():
        if value is not None and not isinstance(value, (int, float)):
            raise ConfigError(f'parameters.inputs.{key}',
                              f'{value!r} is not a number')
    return {}


def _resolve_search_bound(params):
    ensemble = _channel_list(params['channels'], 'parameters.channels')
    dim = ensemble.dim
    if params['states'] is None:
        _number(params, 'pure_samples', 1, integer=True)
        states = _building('parameters.pure_samples', StateSet.all_pure, dim,
                           params['pure_samples'])
    else:
        states = _building('parameters.states', lambda: StateSet.explicit(
            [parse_state(s, dim) for s in params['states']]
        ))
    oset = _building('parameters.observables', parse_observable_set,
                     params['observables'], dim)
    resolved = {'states': states, 'ensemble': ensemble, 'oset': oset}
    if params['formula'] == 'thm1':
        resolved['target'] = _target(params)
    else:
        resolved['moments'] = _moments(params)
    return resolved


def _target(params) -> AccuracyTarget:
    if params.get('epsilon') is None:
        raise ConfigError('parameters.epsilon', 'required')
    _number(params, 'delta', 0)
    _number(params, 'epsilon', 0, .5)
    return AccuracyTarget(params['delta'], params['epsilon'])


def _moments(params) -> MomentTarget:
    if params.get('sigma_max') is None:
        raise ConfigError('parameters.sigma_max', 'required')
    _number(params, 'sigma_max', 0)
    _number(params, 'b_max', 0)
    return MomentTarget(params['sigma_max'], params['b_max'])


def _resolve_contraction(params):
    ensemble = _channel_list(params['channels'], 'parameters.channels')
    oset = _building('parameters.observables', parse_observable_set,
                     params['observables'], ensemble.dim)
    _number(params, 'restarts', 1, integer=True)
    _number(params, 'refine_steps', 0, integer=True)
    resolved = {'ensemble': ensemble, 'oset': oset}
    if params['delta'] is not None or params['epsilon'] is not None:
        resolved['target'] = _target(params)
    check = params['check']
    if check is not None:
        if not isinstance(check, dict) or 'xi' not in check:
            raise ConfigError('parameters.check',
                              'an object with at least "xi" is required')
        _number(check, 'xi', 0, 1, low_open=True)
        divergence = check.get('divergence', 'relative_entropy')
        if divergence not in ('relative_entropy', 'renyi2'):
            raise ConfigError('parameters.check.divergence',
                              f'{divergence!r} is not relative_entropy or '
                              'renyi2')
        samples = check.get('samples', 500)
        _number({'samples': samples}, 'samples', 1, integer=True)
        resolved['check'] = {
            'fixed': _building('parameters.check.fixed', parse_state,
                               check.get('fixed', 'maximally_mixed'),
                               ensemble.dim),
            'xi': check['xi'],
            'divergence': divergence,
            'samples': samples,
        }
    return resolved


def _layer_range(value) -> List[int]:
    if not isinstance(value, list) or not value:
        raise ConfigError('parameters.L_range', 'a nonempty list is required')
    for layer in value:
        if isinstance(layer, bool) or not isinstance(layer, int) or layer < 1:
            raise ConfigError('parameters.L_range',
                              f'{layer!r} is not a positive integer')
    if len(value) == 2 and value[0] <= value[1]:
        return list(range(value[0], value[1] + 1))
    return list(value)


def _protocol(value) -> ProtocolSpec:
    if not isinstance(value, dict):
        raise ConfigError('parameters.protocol', 'an object is required')
    return _building('parameters.protocol', lambda: ProtocolSpec(**value))


def _circuit_common(params):
    _number(params, 'M', 1, 6, integer=True)
    _number(params, 'gamma', 0, 1, high_open=True)
    _number(params, 'trials', 1, integer=True)
    _number(params, 'n_max', 1, integer=True)
    if params['unitaries'] not in ('random', 'identity'):
        raise ConfigError('parameters.unitaries',
                          f'{params["unitaries"]!r} is not random or identity')


def _resolve_layered_scan(params):
    _circuit_common(params)
    return {
        'layers': _layer_range(params['L_range']),
        'target': _target(params),
        'protocol': _protocol(params['protocol']),
    }


def _resolve_mitigate(params):
    _circuit_common(params)
    _number(params, 'L', 1, integer=True)
    _number(params, 'n', 1, integer=True)
    _number(params, 'delta', 0)
    m = params['M']
    resolved = {
        'protocol': _protocol(params['protocol']),
        'input': _building('parameters.input', parse_state,
                           params['input'] or '0' * m, 2 ** m),
        'observable': _building('parameters.observable', parse_observable,
                                params['observable'] or 'Z' + 'I' * (m - 1)),
    }
    if resolved['observable'].shape[0] != 2 ** m:
        raise ConfigError('parameters.observable', f'dimension must be {2 ** m}')
    if params['epsilon'] is not None:
        resolved['target'] = _target(params)
    return resolved


def _resolve_thermal(params):
    _number(params, 'beta', 0, low_open=True)
    _number(params, 'epsilon', 0, .5)
    _number(params, 'alpha_samples', 0, integer=True)
    _number(params, 'refine_steps', 0, integer=True)
    if not isinstance(params['generator'], dict):
        raise ConfigError('parameters.generator', 'an object is required')
    generator = _building('parameters.generator', channels.liouvillian_from_spec,
                          params['generator'], params['beta'])
    t_grid = params['t_grid']
    if not isinstance(t_grid, list) or not t_grid:
        raise ConfigError('parameters.t_grid', 'a nonempty list is required')
    for t in t_grid:
        _number({'t_grid': t}, 't_grid', 0)
    default_input = params['input'] or _default_thermal_input(generator.dim)
    return {
        'generator': generator,
        'input': _building('parameters.input', parse_state, default_input,
                           generator.dim),
    }


def _default_thermal_input(dim: int) -> str:
    if dim & (dim - 1):
        return 'maximally_mixed'
    return '0' * numkit.n_qubits_of(dim)


RESOLVERS = {
    'verify': _resolve_verify,
    'bound': _resolve_bound,
    'contraction': _resolve_contraction,
    'layered-scan': _resolve_layered_scan,
    'mitigate': _resolve_mitigate,
    'thermal': _resolve_thermal,
}


def resolve(config: ExperimentConfig) -> Dict[str, Any]:
    """Validate the parameters of a configuration and build the objects
    they describe.

    :raises ConfigError: At the first invalid parameter.
    """
    resolved = RESOLVERS[config.command](config.parameters)
    logger.debug('configuration for %s resolved', config.command)
    return resolved


def load(path: str, overrides: Optional[Dict[str, Any]] = None,
         ) -> ExperimentConfig:
    config = ExperimentConfig.load(path)
    if overrides:
        config = config.with_overrides(**overrides)
    return config
