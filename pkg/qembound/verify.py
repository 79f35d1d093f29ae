"""Numerical checks of the inequalities the bounds rest on.

Every check is a suite registered in :data:`SUITES` by name. A suite draws
random instances (states, channels, observables and layered circuits),
evaluates one inequality ``lhs <= rhs`` on each and reports the number of
instances, the number of violations beyond the suite tolerance and the
largest observed slack ``lhs - rhs`` (negative when all instances hold
strictly).

Suites over states use dimensions 2, 4 and 8 and draw ``samples``
instances per dimension. Each suite gets its own generator derived from the
master seed and its name position in the register, so running a subset of
suites reproduces their results from a full run.
"""

import math
import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from qembound import channels
from qembound import contraction
from qembound import divergences
from qembound import numkit
from qembound import registry
from qembound.bounds.core import LayeredSpec
from qembound.mitigation import circuit
from qembound.numkit import DensityMatrix, InvalidArgument


logger = logging.getLogger(__name__)

DIMENSIONS: Tuple[int, ...] = (2, 4, 8)
DEFAULT_SAMPLES: int = 500
CONTRACTION_GAMMAS: Tuple[float, ...] = (.05, .1, .2, .5)
PAULI_PROBABILITIES: Tuple[Tuple[float, float, float], ...] = (
    (.1, .1, .1),
    (.05, .2, .0),
    (.3, .1, .25),
)


class SuiteReport:
    """Outcome of one inequality suite.

    :param name: The suite name.
    :param instances: Number of instances checked.
    :param violations: Instances violating the inequality beyond the
        tolerance.
    :param max_slack: Largest ``lhs - rhs`` over the instances.
    """

    def __init__(self,
                 name: str,
                 instances: int,
                 violations: int,
                 max_slack: float,
                 ):
        self.name = name
        self.instances = instances
        self.violations = violations
        self.max_slack = max_slack

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_record(self) -> Dict[str, object]:
        return {
            'name': self.name,
            'instances': self.instances,
            'violations': self.violations,
            'max_slack': self.max_slack,
            'passed': self.passed,
        }

    def __repr__(self):
        return (f'<SuiteReport {self.name}: {self.violations} violations '
                f'in {self.instances}>')


class _Tally:
    def __init__(self, name: str, tol: float):
        self.name = name
        self.tol = tol
        self.instances = 0
        self.violations = 0
        self.max_slack = -math.inf

    def check(self, lhs: float, rhs: float) -> None:
        slack = lhs - rhs
        self.instances += 1
        self.max_slack = max(self.max_slack, slack)
        if slack > self.tol:
            self.violations += 1
            logger.debug('%s violated: %.12g > %.12g', self.name, lhs, rhs)

    def equal(self, left: float, right: float) -> None:
        self.check(abs(left - right), 0.)

    def add_contraction(self, report: contraction.ContractionReport,
                        xi: float) -> None:
        self.instances += report.samples_used
        self.violations += report.violation_count
        self.max_slack = max(self.max_slack, report.max_ratio - xi)

    def report(self) -> SuiteReport:
        return SuiteReport(self.name, self.instances, self.violations,
                           self.max_slack)


SUITES: Dict[str, Callable[[int, np.random.Generator], SuiteReport]] = {}
suite, get_suite, construct_suite = registry.register_functions(
    SUITES, 'verification suite',
    Callable[[int, np.random.Generator], SuiteReport]
)


def _random_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    # mostly full rank, some pure and low rank
    kind = rng.choice(['full_rank', 'full_rank', 'pure', 'rank_k'])
    if kind == 'rank_k':
        return numkit.random_state(dim, 'rank_k', rng,
                                   rank=int(rng.integers(1, dim)) if dim > 2 else 1)
    return numkit.random_state(dim, str(kind), rng)


def _state_pairs(samples: int,
                 rng: np.random.Generator,
                 full_rank: bool = False,
                 dims: Sequence[int] = DIMENSIONS,
                 ) -> Iterable[Tuple[DensityMatrix, DensityMatrix]]:
    for dim in dims:
        for i in range(samples):
            if full_rank:
                yield (numkit.random_state(dim, 'full_rank', rng),
                       numkit.random_state(dim, 'full_rank', rng))
            else:
                yield _random_state(dim, rng), _random_state(dim, rng)


@suite
def fuchs_van_de_graaf(samples, rng):
    """``1 - sqrt(F) <= D_tr <= sqrt(1 - F)``."""
    tally = _Tally('fuchs_van_de_graaf', 1e-9)
    for rho, sigma in _state_pairs(samples, rng):
        dist = divergences.trace_distance(rho, sigma)
        fid = divergences.fidelity(rho, sigma)
        tally.check(1 - math.sqrt(fid), dist)
        tally.check(dist, math.sqrt(1 - fid))
    return tally.report()


@suite
def pinsker(samples, rng):
    """``D_tr <= sqrt(ln 2 / 2) sqrt(S)`` wherever ``S`` is finite."""
    tally = _Tally('pinsker', 1e-9)
    for rho, sigma in _state_pairs(samples, rng):
        rel = divergences.relative_entropy(rho, sigma)
        if math.isinf(rel):
            continue
        tally.check(divergences.trace_distance(rho, sigma),
                    math.sqrt(math.log(2) / 2 * rel))
    return tally.report()


@suite
def fidelity_multiplicativity(samples, rng):
    tally = _Tally('fidelity_multiplicativity', 1e-8)
    for rho1, sigma1 in _state_pairs(samples, rng, dims=(2, 4)):
        rho2 = _random_state(2, rng)
        sigma2 = _random_state(2, rng)
        tally.equal(
            divergences.fidelity(numkit.tensor(rho1, rho2),
                                 numkit.tensor(sigma1, sigma2)),
            divergences.fidelity(rho1, sigma1)
            * divergences.fidelity(rho2, sigma2)
        )
    return tally.report()


@suite
def relent_additivity(samples, rng):
    tally = _Tally('relent_additivity', 1e-8)
    for rho1, sigma1 in _state_pairs(samples, rng, full_rank=True,
                                     dims=(2, 4)):
        rho2 = numkit.random_state(2, 'full_rank', rng)
        sigma2 = numkit.random_state(2, 'full_rank', rng)
        tally.equal(
            divergences.relative_entropy(numkit.tensor(rho1, rho2),
                                         numkit.tensor(sigma1, sigma2)),
            divergences.relative_entropy(rho1, sigma1)
            + divergences.relative_entropy(rho2, sigma2)
        )
    return tally.report()


@suite
def data_processing(samples, rng):
    """Trace distance and relative entropy shrink and fidelity grows under
    random channels."""
    tally = _Tally('data_processing', 1e-8)
    for rho, sigma in _state_pairs(samples, rng, full_rank=True):
        dim = rho.shape[0]
        channel = channels.random_channel(dim, int(rng.integers(1, 4)), rng)
        out_rho, out_sigma = channel(rho), channel(sigma)
        tally.check(divergences.trace_distance(out_rho, out_sigma),
                    divergences.trace_distance(rho, sigma))
        tally.check(divergences.fidelity(rho, sigma),
                    divergences.fidelity(out_rho, out_sigma))
        tally.check(divergences.relative_entropy(out_rho, out_sigma),
                    divergences.relative_entropy(rho, sigma))
    return tally.report()


@suite
def distance_fluctuation(samples, rng):
    """``|<O>_eta - <O>_tau| <= D_F (sd_eta(O) + sd_tau(O) + |<O>_eta -
    <O>_tau|)``."""
    tally = _Tally('distance_fluctuation', 1e-9)
    for eta, tau in _state_pairs(samples, rng):
        obs = numkit.random_observable(eta.shape[0], rng)
        gap = abs(divergences.expectation(obs, eta)
                  - divergences.expectation(obs, tau))
        spread = (divergences.observable_std_dev(obs, eta)
                  + divergences.observable_std_dev(obs, tau))
        tally.check(gap,
                    divergences.purified_distance(eta, tau) * (spread + gap))
    return tally.report()


@suite
def fidelity_trace_distance(samples, rng):
    """``(1 - D_tr)^2 <= F``."""
    tally = _Tally('fidelity_trace_distance', 1e-9)
    for rho, sigma in _state_pairs(samples, rng):
        tally.check((1 - divergences.trace_distance(rho, sigma)) ** 2,
                    divergences.fidelity(rho, sigma))
    return tally.report()


@suite
def purified_distance_relent(samples, rng):
    """``D_F <= sqrt(S)`` wherever ``S`` is finite."""
    tally = _Tally('purified_distance_relent', 1e-8)
    for rho, sigma in _state_pairs(samples, rng):
        rel = divergences.relative_entropy(rho, sigma)
        if not math.isinf(rel):
            tally.check(divergences.purified_distance(rho, sigma),
                        math.sqrt(rel))
    return tally.report()


@suite
def log_fidelity(samples, rng):
    """``log(1/F) <= S``."""
    tally = _Tally('log_fidelity', 1e-8)
    for rho, sigma in _state_pairs(samples, rng, full_rank=True):
        tally.check(-divergences.log_fidelity_gap(rho, sigma), 0.)
    return tally.report()


@suite
def renyi2_dominates(samples, rng):
    """``S <= S_2`` for full-rank references."""
    tally = _Tally('renyi2_dominates', 1e-8)
    for rho, sigma in _state_pairs(samples, rng, full_rank=True):
        tally.check(divergences.relative_entropy(rho, sigma),
                    divergences.renyi2_sandwiched(rho, sigma))
    return tally.report()


@suite
def relent_continuity(samples, rng):
    """Both continuity bounds dominate the relative entropy; the
    logarithmic one where the trace distance is at most 1/2."""
    tally = _Tally('relent_continuity', 1e-8)
    for rho, sigma in _state_pairs(samples, rng, full_rank=True):
        # pull rho toward sigma so that the logarithmic bound applies often
        weight = rng.uniform(0, 1)
        rho = weight * rho + (1 - weight) * sigma
        rel = divergences.relative_entropy(rho, sigma)
        dist = divergences.trace_distance(rho, sigma)
        lam = divergences.min_eigenvalue(sigma)
        tally.check(rel, divergences.relent_continuity_quadratic(dist, lam))
        if dist <= .5:
            tally.check(rel, divergences.relent_continuity_log(
                dist, lam, rho.shape[0]
            ))
    return tally.report()


@suite
def depolarizing_contraction(samples, rng):
    """Relative entropy to the maximally mixed state contracts by
    ``(1 - gamma)^2`` under local depolarizing noise on 1 to 3 qubits."""
    tally = _Tally('depolarizing_contraction', contraction.VIOLATION_TOL)
    for qubits in (1, 2, 3):
        for gamma in CONTRACTION_GAMMAS:
            noise = channels.tensor_channels(
                *[channels.make_depolarizing(gamma)] * qubits
            )
            xi = contraction.depolarizing_rel_ent_contraction(gamma)
            tally.add_contraction(contraction.verify_contraction(
                noise, numkit.maximally_mixed(2 ** qubits), xi,
                samples=samples, rng=rng,
            ), xi)
    return tally.report()


@suite
def unital_sandwich_contraction(samples, rng):
    """The depolarizing contraction survives unital channels and unitaries
    applied before the noise."""
    tally = _Tally('unital_sandwich_contraction', contraction.VIOLATION_TOL)
    for qubits in (1, 2):
        dim = 2 ** qubits
        for gamma in CONTRACTION_GAMMAS:
            layer = channels.chain([
                channels.random_unital_channel(dim, 3, rng),
                channels.make_unitary_channel(numkit.random_unitary(dim, rng)),
                channels.random_unital_channel(dim, 2, rng),
                channels.tensor_channels(
                    *[channels.make_depolarizing(gamma)] * qubits
                ),
            ])
            xi = contraction.depolarizing_rel_ent_contraction(gamma)
            tally.add_contraction(contraction.verify_contraction(
                layer, numkit.maximally_mixed(dim), xi,
                samples=samples, rng=rng,
            ), xi)
    return tally.report()


@suite
def pauli_renyi2_contraction(samples, rng):
    """The Renyi-2 divergence to the maximally mixed state contracts by
    ``q^(1/ln 2)`` under stochastic Pauli noise on 1 and 2 qubits."""
    tally = _Tally('pauli_renyi2_contraction', contraction.VIOLATION_TOL)
    for qubits in (1, 2):
        for probs in PAULI_PROBABILITIES:
            noise = channels.tensor_channels(
                *[channels.make_stochastic_pauli(*probs)] * qubits
            )
            xi = contraction.pauli_renyi2_contraction(*probs)
            tally.add_contraction(contraction.verify_contraction(
                noise, numkit.maximally_mixed(2 ** qubits), xi,
                divergence='renyi2', samples=samples, rng=rng,
            ), xi)
    return tally.report()


@suite
def layered_min_eigenvalue(samples, rng):
    """Noisy layered circuit outputs have minimum eigenvalue at least
    ``(gamma / 2)^M``."""
    tally = _Tally('layered_min_eigenvalue', 1e-9)
    for qubits in (1, 2):
        for layers in (1, 2, 3, 4):
            gamma = float(rng.uniform(.05, .5))
            c = circuit.LayeredCircuit.build(
                LayeredSpec(qubits, layers, gamma), rng
            )
            for i in range(max(samples // 4, 1)):
                state = _random_state(2 ** qubits, rng)
                tally.check((gamma / 2) ** qubits,
                            numkit.min_eigenvalue(circuit.noisy_state(c, state)))
    return tally.report()


@suite
def transfer_matrix_composition(samples, rng):
    """The Pauli transfer matrix of a composition is the product."""
    tally = _Tally('transfer_matrix_composition', 1e-9)
    for dim in (2, 4):
        for i in range(max(samples // 10, 1)):
            first = channels.random_channel(dim, 2, rng)
            second = channels.random_channel(dim, 2, rng)
            composed = channels.pauli_transfer_matrix(
                channels.compose(second, first)
            )
            product = (channels.pauli_transfer_matrix(second)
                       @ channels.pauli_transfer_matrix(first))
            tally.equal(float(np.max(np.abs(composed - product))), 0.)
    return tally.report()


@suite
def sqrt_roundtrip(samples, rng):
    """``sqrt(P)^2 = P`` for states, to ``1e-10`` relative to the norm."""
    tally = _Tally('sqrt_roundtrip', 1e-10)
    for dim in DIMENSIONS:
        for i in range(samples):
            state = _random_state(dim, rng)
            root = numkit.matrix_fn_psd(state, 'sqrt')
            tally.equal(
                float(np.max(np.abs(root @ root - state))
                      / max(np.max(np.abs(state)), 1e-300)),
                0.
            )
    return tally.report()


def run_suites(names: Optional[Sequence[str]] = None,
               samples: int = DEFAULT_SAMPLES,
               rng: numkit.RandomLike = None,
               ) -> List[SuiteReport]:
    """Run the named suites (all by default) in register order.

    :raises InvalidArgument: If the sample count is not positive.
    :raises KeyError: For an unknown suite name.
    """
    if samples < 1:
        raise InvalidArgument('sample count', samples, 'positive')
    names = list(SUITES) if names is None else list(names)
    for name in names:
        get_suite(name)
    seed = numkit.draw_seed(rng)
    reports = []
    for name in names:
        index = list(SUITES).index(name)
        report = SUITES[name](samples, numkit.derive_rng(seed, index))
        log = logger.info if report.passed else logger.error
        log('suite %s: %d instances, %d violations, max slack %.3g',
            name, report.instances, report.violations, report.max_slack)
        reports.append(report)
    return reports
