"""Sampling bounds for layered circuits under local depolarizing noise.

The bounds here grow exponentially with the circuit depth ``L``. They need
only the qubit count, depth and noise strength of a
:class:`~qembound.bounds.core.LayeredSpec`, plus either an accuracy target
(probabilistic mode) or limits on the estimator moments (moment mode).

-   :func:`thm4_bound` and :func:`thm5_bound` use the relative entropy
    contraction ``(1 - gamma)^2`` per layer,
-   :func:`appendixE_bounds` reach the same scaling through continuity
    bounds of the relative entropy and the minimum eigenvalue
    ``(gamma / 2)^M`` of the noisy states,
-   :func:`thm6_bound` generalizes the first pair to any per-layer
    contraction constant ``xi`` toward a fixed state, e.g. from
    :mod:`qembound.contraction`.
"""

import math
from typing import List, Optional

from qembound.bounds.core import (
    AccuracyTarget, BoundReport, LayeredSpec, MomentTarget,
    DIVERGES, DOMAIN_VIOLATED,
    moment_bracket, moment_numerator, prob_numerator,
)
from qembound.numkit import InvalidArgument
from qembound.util import safe_ratio


def _check_ml(qubits: int, layers: int) -> None:
    if qubits < 1 or layers < 0:
        raise InvalidArgument('circuit size (M, L)', (qubits, layers),
                              'M >= 1 and L >= 0')


def _flagged(formula_id, value, inputs, **kwargs) -> BoundReport:
    flags = [DIVERGES] if value is not None and math.isinf(value) else []
    return BoundReport(formula_id, value, inputs, flags=flags, **kwargs)


def thm6_bound(qubits: int,
               layers: int,
               xi: float,
               target: Optional[AccuracyTarget] = None,
               moments: Optional[MomentTarget] = None,
               d_o: Optional[float] = None,
               formula_id: Optional[str] = None,
               ) -> BoundReport:
    """Sampling bound from a per-layer contraction constant ``xi``.

    In probabilistic mode (``target`` given) the bound is
    ``(1 - 2 eps)^2 / (2 ln 2 M xi^L)``; in moment mode (``moments`` and
    ``d_o`` given) it is ``bracket / (4 M xi^L)``.

    :param xi: Contraction constant in (0, 1].
    :param formula_id: Override of the report identifier.
    """
    _check_ml(qubits, layers)
    if not 0 < xi <= 1:
        raise InvalidArgument('contraction constant xi', xi, 'in (0, 1]')
    if (target is None) == (moments is None):
        raise InvalidArgument('bound mode', (target, moments),
                              'exactly one of target or moments')
    decay = qubits * xi ** layers
    if target is not None:
        inputs = {'M': qubits, 'L': layers, 'xi': xi,
                  'epsilon': target.epsilon}
        value = safe_ratio((1 - 2 * target.epsilon) ** 2,
                           2 * math.log(2) * decay)
        return _flagged(formula_id or 'thm6_prob', value, inputs)
    else:
        if d_o is None:
            raise InvalidArgument('distinguishability', d_o,
                                  'given in moment mode')
        inputs = {'M': qubits, 'L': layers, 'xi': xi, 'd_o': d_o,
                  'sigma_max': moments.sigma_max, 'b_max': moments.b_max}
        value = safe_ratio(
            moment_bracket(moments.sigma_max, moments.b_max, d_o), 4 * decay
        )
        return _flagged(formula_id or 'thm6_moment', value, inputs)


def thm4_bound(spec: LayeredSpec, target: AccuracyTarget) -> BoundReport:
    """``(1 - 2 eps)^2 / (2 ln 2 M (1 - gamma)^(2L))``."""
    report = thm6_bound(spec.qubits, spec.layers, (1 - spec.gamma) ** 2,
                        target=target, formula_id='thm4')
    report.inputs = {'M': spec.qubits, 'L': spec.layers,
                     'gamma': spec.gamma, 'epsilon': target.epsilon}
    return report


def thm5_bound(spec: LayeredSpec,
               moments: MomentTarget,
               d_o: float,
               ) -> BoundReport:
    """``bracket / (4 M (1 - gamma)^(2L))`` with the moment bracket
    ``(1 / (2 sigma / (D - 2b) + 1))^2``."""
    report = thm6_bound(spec.qubits, spec.layers, (1 - spec.gamma) ** 2,
                        moments=moments, d_o=d_o, formula_id='thm5')
    report.inputs = {'M': spec.qubits, 'L': spec.layers, 'gamma': spec.gamma,
                     'd_o': d_o, 'sigma_max': moments.sigma_max,
                     'b_max': moments.b_max}
    return report


def e2_domain_value(qubits: int, layers: int, gamma: float) -> float:
    """``sqrt(2 ln 2 M) (1 - gamma)^L``; the logarithmic continuity variants
    require it to be at most 1/2."""
    return math.sqrt(2 * math.log(2) * qubits) * (1 - gamma) ** layers


def _quadratic_variant(numerator: float, spec: LayeredSpec) -> float:
    m, layers, gamma = spec.qubits, spec.layers, spec.gamma
    return safe_ratio(
        numerator * (gamma / 2) ** m,
        8 * math.log(2) * m * (1 - gamma) ** (2 * layers)
    )


def _log_variant(numerator: float, spec: LayeredSpec) -> Optional[float]:
    m, layers, gamma = spec.qubits, spec.layers, spec.gamma
    if e2_domain_value(m, layers, gamma) > .5:
        return None
    penalty = (
        layers * math.log2(2 / (1 - gamma))
        + m
        - .5 * math.log2(m * math.log(2) / 2)
        + (m / 2) * math.log2(2 / gamma)
    )
    return safe_ratio(
        numerator * math.sqrt(math.log(2)),
        math.sqrt(8 * m) * (1 - gamma) ** layers * penalty
    )


def appendixE_bounds(spec: LayeredSpec,
                     target: Optional[AccuracyTarget] = None,
                     moments: Optional[MomentTarget] = None,
                     d_o: Optional[float] = None,
                     ) -> List[BoundReport]:
    """The continuity-bound variants of the layered sampling bounds.

    With an accuracy target, reports ``appE1`` (quadratic continuity,
    carrying the ``(gamma/2)^M`` eigenvalue factor) and ``appE2``
    (logarithmic continuity); with moment limits and ``d_o``, ``appE3``
    and ``appE4`` likewise. A logarithmic variant outside its domain is
    reported without a value and flagged.
    """
    if target is None and moments is None:
        raise InvalidArgument('bound mode', None,
                              'an accuracy target and/or moment limits')
    base = {'M': spec.qubits, 'L': spec.layers, 'gamma': spec.gamma}
    domain = e2_domain_value(spec.qubits, spec.layers, spec.gamma)
    reports = []
    if target is not None:
        numerator = prob_numerator(target.epsilon)
        inputs = dict(base, epsilon=target.epsilon)
        reports.append(_flagged('appE1', _quadratic_variant(numerator, spec),
                                inputs))
        reports.append(_log_report('appE2', _log_variant(numerator, spec),
                                   inputs, domain))
    if moments is not None:
        if d_o is None:
            raise InvalidArgument('distinguishability', d_o,
                                  'given with moment limits')
        numerator = moment_numerator(moments.sigma_max, moments.b_max, d_o)
        inputs = dict(base, d_o=d_o, sigma_max=moments.sigma_max,
                      b_max=moments.b_max)
        reports.append(_flagged('appE3', _quadratic_variant(numerator, spec),
                                inputs))
        reports.append(_log_report('appE4', _log_variant(numerator, spec),
                                   inputs, domain))
    return reports


def _log_report(formula_id, value, inputs, domain) -> BoundReport:
    details = {'domain_value': domain}
    if value is None:
        return BoundReport(formula_id, None, inputs, flags=[DOMAIN_VIOLATED],
                           details=details)
    return _flagged(formula_id, value, inputs, details=details)
