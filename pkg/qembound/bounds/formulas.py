"""Scalar bound formulas by identifier.

Every formula that needs only scalar inputs is registered in
:data:`BOUNDS` under its report identifier and evaluated from keyword
arguments with uniform names (``M``, ``L``, ``gamma``, ``epsilon``,
``delta``, ``xi``, ``sigma_max``, ``b_max``, ``d_o``, ``eta``, ``F``,
``S``) by :func:`evaluate_formula`.
"""

from typing import Callable, Dict, List

from qembound import registry
from qembound.bounds import core
from qembound.bounds import layered
from qembound.bounds.core import (
    AccuracyTarget, BoundReport, LayeredSpec, MomentTarget,
)
from qembound.numkit import InvalidArgument


BOUNDS: Dict[str, Callable[..., BoundReport]] = {}
bound_formula, get, construct = registry.register_functions(
    BOUNDS, 'bound formula', Callable[..., BoundReport]
)


def _target(epsilon, delta=0.):
    return AccuracyTarget(delta=delta, epsilon=epsilon)


def _spec(M, L, gamma):
    return LayeredSpec(qubits=M, layers=L, gamma=gamma)


@bound_formula(key='thm1_fid')
def _thm1_fid(F, epsilon):
    return core.thm1_scalar(epsilon, fidelity=F)


@bound_formula(key='thm1_rel')
def _thm1_rel(S, epsilon):
    return core.thm1_scalar(epsilon, relative_entropy=S)


@bound_formula(key='prop2')
def _prop2(eta, delta, epsilon):
    return core.prop2_bound(eta, _target(epsilon, delta))


@bound_formula(key='thm3')
def _thm3(d_o, F, sigma_max, b_max=0.):
    return core.thm3_scalar(d_o, F, MomentTarget(sigma_max, b_max))


@bound_formula(key='thm4')
def _thm4(M, L, gamma, epsilon):
    return layered.thm4_bound(_spec(M, L, gamma), _target(epsilon))


@bound_formula(key='thm5')
def _thm5(M, L, gamma, sigma_max, d_o, b_max=0.):
    return layered.thm5_bound(_spec(M, L, gamma),
                              MomentTarget(sigma_max, b_max), d_o)


@bound_formula(key='appE1')
def _appe1(M, L, gamma, epsilon):
    return layered.appendixE_bounds(_spec(M, L, gamma),
                                    target=_target(epsilon))[0]


@bound_formula(key='appE2')
def _appe2(M, L, gamma, epsilon):
    return layered.appendixE_bounds(_spec(M, L, gamma),
                                    target=_target(epsilon))[1]


@bound_formula(key='appE3')
def _appe3(M, L, gamma, sigma_max, d_o, b_max=0.):
    return layered.appendixE_bounds(
        _spec(M, L, gamma), moments=MomentTarget(sigma_max, b_max), d_o=d_o
    )[0]


@bound_formula(key='appE4')
def _appe4(M, L, gamma, sigma_max, d_o, b_max=0.):
    return layered.appendixE_bounds(
        _spec(M, L, gamma), moments=MomentTarget(sigma_max, b_max), d_o=d_o
    )[1]


@bound_formula(key='thm6_prob')
def _thm6_prob(M, L, xi, epsilon):
    return layered.thm6_bound(M, L, xi, target=_target(epsilon))


@bound_formula(key='thm6_moment')
def _thm6_moment(M, L, xi, sigma_max, d_o, b_max=0.):
    return layered.thm6_bound(M, L, xi, moments=MomentTarget(sigma_max, b_max),
                              d_o=d_o)


def evaluate_formula(formula_id: str, **inputs) -> BoundReport:
    """Evaluate a registered scalar formula.

    Inputs given as None are dropped, so that optional parameters fall
    back to their defaults.

    :raises InvalidArgument: If the formula is unknown or its inputs are
        incomplete.
    """
    try:
        formula = get(formula_id)
    except KeyError:
        raise InvalidArgument('formula', formula_id, ', '.join(sorted(BOUNDS)))
    given = {key: value for key, value in inputs.items() if value is not None}
    try:
        return formula(**given)
    except TypeError as err:
        raise InvalidArgument(f'inputs of {formula_id}', sorted(given),
                              f'a valid argument set ({err})')
