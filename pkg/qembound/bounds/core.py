"""Accuracy targets, state sets, bound reports and the general bounds.

The general bounds relate the number of noisy samples an error mitigation
protocol consumes to how indistinguishable the noise makes the ideal states.
They come in two levels:

-   scalar formulas taking a fidelity, relative entropy or contraction
    coefficient directly (:func:`thm1_scalar`, :func:`thm3_scalar`,
    :func:`prop2_bound`),
-   searches over pairs of states from a :class:`StateSet` that the
    observables distinguish well enough, taking the weakest noise channel
    of a :class:`~qembound.channels.NoiseEnsemble` for each pair
    (:func:`thm1_bound`, :func:`thm3_bound`).

All logarithms are binary. Every result is a :class:`BoundReport`, whose
value may be zero (no constraint) or infinite (the target cannot be met
with finitely many samples); degenerate situations are marked by the flags
listed in this module.
"""

import math
import logging
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from qembound import channels
from qembound import divergences
from qembound import numkit
from qembound import persist
from qembound import util
from qembound.channels import NoiseEnsemble
from qembound.divergences import ObservableSet
from qembound.numkit import DensityMatrix, InvalidArgument
from qembound.util import INF


logger = logging.getLogger(__name__)

PERFECTLY_DISTINGUISHABLE = 'PerfectlyDistinguishable'
EMPTY_FEASIBLE_SET = 'EmptyFeasibleSet'
DOMAIN_VIOLATED = 'DomainViolated'
DIVERGES = 'Diverges'

ADMISSIBILITY_TOL: float = 1e-12


@persist.simple_serialization
class AccuracyTarget:
    """Target accuracy ``delta`` reached with failure probability at most
    ``epsilon``."""

    def __init__(self, delta: float, epsilon: float):
        if not delta >= 0 or math.isinf(delta):
            raise InvalidArgument('accuracy delta', delta,
                                  'finite and nonnegative')
        if not 0 <= epsilon <= .5:
            raise InvalidArgument('failure probability epsilon', epsilon,
                                  'in [0, 1/2]')
        self.delta = float(delta)
        self.epsilon = float(epsilon)

    def __repr__(self):
        return f'<AccuracyTarget delta={self.delta} epsilon={self.epsilon}>'


@persist.simple_serialization
class MomentTarget:
    """Limits on the estimator standard deviation and absolute bias."""

    def __init__(self, sigma_max: float, b_max: float = 0.):
        for name, value in (('sigma_max', sigma_max), ('b_max', b_max)):
            if not value >= 0 or math.isinf(value):
                raise InvalidArgument(name, value, 'finite and nonnegative')
        self.sigma_max = float(sigma_max)
        self.b_max = float(b_max)

    def __repr__(self):
        return (f'<MomentTarget sigma_max={self.sigma_max} '
                f'b_max={self.b_max}>')


@persist.simple_serialization
class LayeredSpec:
    """A layered circuit under local depolarizing noise.

    Layer ``l`` applies the unital channel ``Lambda_l``, the unitary
    ``U_l``, the unital channel ``Xi_l`` and finally depolarizing noise of
    strength at least ``gamma`` on every qubit.

    :param qubits: Number of qubits ``M``.
    :param layers: Number of layers ``L``.
    :param gamma: Depolarizing strength floor, in [0, 1).
    :param unitaries: ``L`` unitaries of size ``2^M``; drawn at random
        from ``seed`` when building a circuit if not given.
    :param sandwich: ``L`` pairs ``(Lambda_l, Xi_l)`` of unital channels
        or None entries for no sandwich.
    :param seed: Seed recorded for random unitaries.
    """

    def __init__(self,
                 qubits: int,
                 layers: int,
                 gamma: float,
                 unitaries: Optional[Sequence[np.ndarray]] = None,
                 sandwich: Optional[Sequence[Optional[Tuple[Any, Any]]]] = None,
                 seed: Optional[int] = None,
                 ):
        if not isinstance(qubits, (int, np.integer)) or qubits < 1:
            raise InvalidArgument('qubit count', qubits, 'a positive integer')
        if not isinstance(layers, (int, np.integer)) or layers < 1:
            raise InvalidArgument('layer count', layers, 'a positive integer')
        if not 0 <= gamma < 1:
            raise InvalidArgument('depolarizing strength', gamma, 'in [0, 1)')
        self.qubits = int(qubits)
        self.layers = int(layers)
        self.gamma = float(gamma)
        self.dim = 2 ** self.qubits
        if unitaries is not None:
            unitaries = [numkit.as_square(u) for u in unitaries]
            if len(unitaries) != self.layers:
                raise InvalidArgument('unitary count', len(unitaries),
                                      str(self.layers))
            for u in unitaries:
                channels.make_unitary_channel(u)
                if u.shape[0] != self.dim:
                    raise InvalidArgument('unitary size', u.shape[0],
                                          str(self.dim))
        if sandwich is not None:
            sandwich = list(sandwich)
            if len(sandwich) != self.layers:
                raise InvalidArgument('sandwich count', len(sandwich),
                                      str(self.layers))
            for pair in sandwich:
                for op in (pair or ()):
                    if op is None:
                        continue
                    if op.dim != self.dim or not channels.is_unital(op):
                        raise InvalidArgument(
                            'sandwich channel', op,
                            f'a unital channel of dimension {self.dim}'
                        )
        self.unitaries = unitaries
        self.sandwich = sandwich
        self.seed = seed

    def __repr__(self):
        return (f'<LayeredSpec M={self.qubits} L={self.layers} '
                f'gamma={self.gamma}>')


class StateSet:
    """A set of ideal states over which the bounds search for pairs.

    :param kind: ``explicit`` for given members, ``all_pure`` for all pure
        states of a dimension (searched by sampling ``samples`` pairs).
    :param members: States of an explicit set.
    :param dim: Dimension for ``all_pure`` sets.
    :param samples: Number of random pairs drawn for ``all_pure`` sets.
    """
    KINDS = ('explicit', 'all_pure')

    def __init__(self,
                 kind: str = 'explicit',
                 members: Sequence[DensityMatrix] = (),
                 dim: Optional[int] = None,
                 samples: int = 256,
                 ):
        if kind not in self.KINDS:
            raise InvalidArgument('state set kind', kind,
                                  ' or '.join(self.KINDS))
        members = tuple(numkit.check_state(m) for m in members)
        if kind == 'explicit':
            dims = {m.shape[0] for m in members}
            if len(dims) > 1:
                raise InvalidArgument('state dimensions', dims, 'all equal')
            dim = dims.pop() if dims else dim
        elif dim is None or samples < 1:
            raise InvalidArgument('all_pure set', (dim, samples),
                                  'a dimension and positive sample budget')
        self.kind = kind
        self.members = members
        self.dim = dim
        self.samples = samples

    @classmethod
    def explicit(cls, members: Sequence[DensityMatrix]) -> 'StateSet':
        return cls('explicit', members)

    @classmethod
    def all_pure(cls, dim: int, samples: int = 256) -> 'StateSet':
        return cls('all_pure', dim=dim, samples=samples)

    def pairs(self,
              rng: numkit.RandomLike = None,
              ) -> Iterable[Tuple[Tuple[int, int], DensityMatrix, DensityMatrix]]:
        """Yield ordered state pairs with their indices.

        For ``all_pure`` sets, the indices count the sampled states.
        """
        if self.kind == 'explicit':
            for i, j in util.ordered_pairs(len(self.members)):
                yield (i, j), self.members[i], self.members[j]
        else:
            rng = numkit.make_rng(rng)
            for k in range(self.samples):
                rho = numkit.random_state(self.dim, 'pure', rng)
                sigma = numkit.random_state(self.dim, 'pure', rng)
                yield (2 * k, 2 * k + 1), rho, sigma

    def __repr__(self):
        return f'<StateSet {self.kind} dim={self.dim}>'


class BoundReport:
    """A lower bound on the number of noisy samples.

    :param formula_id: Which bound was evaluated.
    :param value: The bound; zero for vacuous, infinity for diverging and
        None when the formula is outside its domain.
    :param inputs: All scalar inputs of the evaluation.
    :param witness: For searches, a dictionary with the ``states`` pair,
        their ``indices`` and the ``channel_index`` achieving the value.
    :param flags: Degeneracy markers.
    :param details: Further reported quantities, e.g. approximations.
    """

    def __init__(self,
                 formula_id: str,
                 value: Optional[float],
                 inputs: Optional[Dict[str, Any]] = None,
                 witness: Optional[Dict[str, Any]] = None,
                 flags: Sequence[str] = (),
                 details: Optional[Dict[str, Any]] = None,
                 ):
        if value is not None and not value >= 0:
            raise InvalidArgument('bound value', value, 'nonnegative')
        self.formula_id = formula_id
        self.value = value
        self.inputs = inputs or {}
        self.witness = witness
        self.flags = tuple(dict.fromkeys(flags))
        self.details = details or {}

    def to_record(self) -> Dict[str, Any]:
        """A JSON-ready record; witness states are given as hashes."""
        witness = None
        if self.witness is not None:
            witness = {
                'state_hashes': [
                    util.matrix_hash(state)
                    for state in self.witness.get('states', ())
                ],
                'indices': list(self.witness.get('indices', ())),
                'channel_index': self.witness.get('channel_index'),
            }
        return {
            'formula_id': self.formula_id,
            'value': persist.serialize_value(self.value),
            'inputs': persist.serialize_value(self.inputs),
            'witness': witness,
            'flags': list(self.flags),
            'details': persist.serialize_value(self.details),
        }

    def __repr__(self):
        return (f'<BoundReport {self.formula_id} value={self.value} '
                f'flags={list(self.flags)}>')


def prob_numerator(epsilon: float) -> float:
    """``log(1 / (4 eps (1 - eps)))``, infinite at zero."""
    if epsilon == 0:
        return INF
    return max(math.log2(1 / (4 * epsilon * (1 - epsilon))), 0.)


def moment_bracket(sigma_max: float, b_max: float, d_o: float) -> float:
    """``(1 / (1 + 2 sigma / (D - 2b)))^2``; zero when ``D = 2b``.

    :raises InvalidArgument: If ``D < 2b``.
    """
    gap = d_o - 2 * b_max
    if gap < -ADMISSIBILITY_TOL:
        raise InvalidArgument('distinguishability', d_o,
                              f'at least 2 b_max = {2 * b_max}')
    if gap <= 0:
        return 0.
    return (1 / (1 + 2 * sigma_max / gap)) ** 2


def moment_numerator(sigma_max: float, b_max: float, d_o: float) -> float:
    """``log(1 / (1 - bracket))``, infinite for zero deviation."""
    bracket = moment_bracket(sigma_max, b_max, d_o)
    if bracket >= 1:
        return INF
    return -math.log2(1 - bracket)


def _scalar_quotient(numerator: float,
                     denominator: float,
                     ) -> Tuple[float, List[str]]:
    value = util.safe_ratio(numerator, denominator)
    return value, [DIVERGES] if math.isinf(value) else []


def thm1_scalar(epsilon: float,
                fidelity: Optional[float] = None,
                relative_entropy: Optional[float] = None,
                ) -> BoundReport:
    """The general sampling bound from one fidelity or relative entropy.

    Exactly one of ``fidelity`` or ``relative_entropy`` is given. The
    bound is ``log(1/(4 eps(1-eps))) / log(1/F)`` or
    ``2 (1 - 2 eps)^2 / (ln 2 S)`` respectively. Zero fidelity and infinite
    relative entropy give a zero bound flagged as perfectly
    distinguishable.
    """
    if (fidelity is None) == (relative_entropy is None):
        raise InvalidArgument('bound input', (fidelity, relative_entropy),
                              'exactly one of fidelity or relative entropy')
    if not 0 <= epsilon <= .5:
        raise InvalidArgument('failure probability epsilon', epsilon,
                              'in [0, 1/2]')
    flags = []
    if fidelity is not None:
        if not 0 <= fidelity <= 1:
            raise InvalidArgument('fidelity', fidelity, 'in [0, 1]')
        inputs = {'F': fidelity, 'epsilon': epsilon}
        if fidelity == 0:
            return BoundReport('thm1_fid', 0., inputs,
                               flags=[PERFECTLY_DISTINGUISHABLE])
        value, flags = _scalar_quotient(prob_numerator(epsilon),
                                        -math.log2(fidelity))
        return BoundReport('thm1_fid', value, inputs, flags=flags)
    else:
        if not relative_entropy >= 0:
            raise InvalidArgument('relative entropy', relative_entropy,
                                  'nonnegative')
        inputs = {'S': relative_entropy, 'epsilon': epsilon}
        if math.isinf(relative_entropy):
            return BoundReport('thm1_rel', 0., inputs,
                               flags=[PERFECTLY_DISTINGUISHABLE])
        value, flags = _scalar_quotient(
            2 * (1 - 2 * epsilon) ** 2 / math.log(2), relative_entropy
        )
        return BoundReport('thm1_rel', value, inputs, flags=flags)


def thm3_scalar(d_o: float,
                fidelity: float,
                moments: MomentTarget,
                ) -> BoundReport:
    """The moment-based sampling bound for one state pair."""
    inputs = {'d_o': d_o, 'F': fidelity, 'sigma_max': moments.sigma_max,
              'b_max': moments.b_max}
    if not 0 <= fidelity <= 1:
        raise InvalidArgument('fidelity', fidelity, 'in [0, 1]')
    if fidelity == 0:
        return BoundReport('thm3', 0., inputs,
                           flags=[PERFECTLY_DISTINGUISHABLE])
    value, flags = _scalar_quotient(
        moment_numerator(moments.sigma_max, moments.b_max, d_o),
        -math.log2(fidelity)
    )
    return BoundReport('thm3', value, inputs, flags=flags)


def prop2_bound(eta: float, target: AccuracyTarget) -> BoundReport:
    """The sampling bound from a contraction coefficient for the set of all
    pure states, with the small-parameter approximation
    ``log(1/(4 eps)) / (4 eta delta)`` in the details.

    :raises InvalidArgument: If ``2 eta delta >= 1``.
    """
    if not eta >= 0:
        raise InvalidArgument('contraction coefficient', eta, 'nonnegative')
    shrink = 2 * eta * target.delta
    if shrink >= 1:
        raise InvalidArgument('2 eta delta', shrink, 'below 1')
    inputs = {'eta': eta, 'delta': target.delta, 'epsilon': target.epsilon}
    value, flags = _scalar_quotient(
        prob_numerator(target.epsilon), -2 * math.log2(1 - shrink)
    )
    if target.epsilon == 0:
        approximation = INF
    else:
        approximation = util.safe_ratio(
            max(math.log2(1 / (4 * target.epsilon)), 0.),
            4 * eta * target.delta
        )
    return BoundReport('prop2', value, inputs, flags=flags,
                       details={'approximation': approximation})


def _pair_search(formula_id: str,
                 states: StateSet,
                 ensemble,
                 oset: ObservableSet,
                 admissible: Callable[[float], bool],
                 scalar: Callable[[DensityMatrix, DensityMatrix, float],
                                  BoundReport],
                 inputs: Dict[str, Any],
                 rng: numkit.RandomLike = None,
                 ) -> BoundReport:
    ensemble = NoiseEnsemble.of(ensemble)
    if states.dim is not None and states.dim != ensemble.dim:
        raise InvalidArgument('state dimension', states.dim,
                              str(ensemble.dim))
    if oset.dim != ensemble.dim:
        raise InvalidArgument('observable set dimension', oset.dim,
                              str(ensemble.dim))
    best = None
    best_witness = None
    n_admissible = 0
    for indices, rho, sigma in states.pairs(rng):
        d_o = divergences.observable_distinguishability(rho, sigma, oset)
        if not admissible(d_o):
            continue
        n_admissible += 1
        weakest = None
        weakest_k = None
        for k, channel in enumerate(ensemble):
            report = scalar(channel(rho), channel(sigma), d_o)
            if weakest is None or report.value < weakest.value:
                weakest, weakest_k = report, k
        if best is None or weakest.value > best.value:
            best = weakest
            best_witness = {
                'states': (rho, sigma),
                'indices': indices,
                'channel_index': weakest_k,
            }
    inputs = dict(inputs, pairs_admissible=n_admissible)
    if best is None:
        logger.info('%s: no admissible state pair', formula_id)
        return BoundReport(formula_id, 0., inputs, flags=[EMPTY_FEASIBLE_SET])
    logger.debug('%s: best value %s over %d admissible pairs',
                 formula_id, best.value, n_admissible)
    return BoundReport(formula_id, best.value, inputs, witness=best_witness,
                       flags=best.flags, details=best.inputs)


def thm1_bound(states: StateSet,
               ensemble,
               oset: ObservableSet,
               target: AccuracyTarget,
               rng: numkit.RandomLike = None,
               ) -> Tuple[BoundReport, BoundReport]:
    """The general sampling bound over a state set and noise ensemble.

    Searches pairs of states whose observable distinguishability is at
    least ``2 delta``; for each takes the noise channel giving the weakest
    bound and reports the strongest pair.

    :returns: The fidelity route and relative entropy route reports.
    """
    def admissible(d_o):
        return d_o >= 2 * target.delta - ADMISSIBILITY_TOL

    inputs = {'delta': target.delta, 'epsilon': target.epsilon}
    seed = numkit.draw_seed(rng)
    fid_report = _pair_search(
        'thm1_fid', states, ensemble, oset, admissible,
        lambda rho, sigma, d_o: thm1_scalar(
            target.epsilon, fidelity=divergences.fidelity(rho, sigma)
        ),
        inputs, rng=seed,
    )
    rel_report = _pair_search(
        'thm1_rel', states, ensemble, oset, admissible,
        lambda rho, sigma, d_o: thm1_scalar(
            target.epsilon,
            relative_entropy=divergences.relative_entropy(rho, sigma)
        ),
        inputs, rng=seed,
    )
    return fid_report, rel_report


def thm3_bound(states: StateSet,
               ensemble,
               oset: ObservableSet,
               moments: MomentTarget,
               rng: numkit.RandomLike = None,
               ) -> BoundReport:
    """The moment-based sampling bound over a state set and noise ensemble.

    Pairs with distinguishability below ``2 b_max`` are skipped.
    """
    def admissible(d_o):
        return d_o - 2 * moments.b_max >= -ADMISSIBILITY_TOL

    return _pair_search(
        'thm3', states, ensemble, oset, admissible,
        lambda rho, sigma, d_o: thm3_scalar(
            max(d_o, 2 * moments.b_max),
            divergences.fidelity(rho, sigma), moments
        ),
        {'sigma_max': moments.sigma_max, 'b_max': moments.b_max},
        rng=rng,
    )
