"""Contraction coefficients of noise channels.

The generalized contraction coefficient of a noise ensemble with respect to
a set of observables is the largest ratio of the trace distance between the
noisy images of two states to their observable distinguishability. It is
only estimated from below here, by a randomized search over pure state
pairs with local refinement; every estimate carries the witness pair that
reproduces its value.

Closed-form constants are provided for the noise families where they are
known:

-   local depolarizing noise contracts the relative entropy to the
    maximally mixed state by ``(1 - gamma)^2``,
-   global depolarizing noise toward a full-rank state contracts the
    relative entropy to it by ``(1 - gamma)^(2 alpha_1)``, with ``alpha_1``
    given by a one-dimensional minimization over binary divergences,
-   stochastic Pauli noise contracts the sandwiched Renyi-2 divergence to
    the maximally mixed state by ``q^(1/ln 2)``.

:func:`verify_contraction` checks any claimed constant numerically.
"""

import math
import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import scipy.optimize

from qembound import channels
from qembound import divergences
from qembound import generate
from qembound import numkit
from qembound.channels import KrausChannel, NoiseEnsemble, NotAFixedPoint
from qembound.divergences import ObservableSet
from qembound.numkit import DensityMatrix, InvalidArgument


logger = logging.getLogger(__name__)

MIN_DISTINGUISHABILITY: float = 1e-9
MIN_DIVERGENCE: float = 1e-10
MIN_FIXED_DISTANCE: float = 1e-8
FIXED_POINT_TOL: float = 1e-8
VIOLATION_TOL: float = 1e-7
ALPHA_GRID_POINTS: int = 20001

DIVERGENCES: Dict[str, Callable[[DensityMatrix, DensityMatrix], float]] = {
    'relative_entropy': divergences.relative_entropy,
    'renyi2': divergences.renyi2_sandwiched,
}


class ContractionEstimate:
    """A contraction coefficient value with its provenance.

    :param value: The coefficient (a certified lower bound for searches).
    :param witness: The state pair attaining ``value`` in a search.
    :param method: ``analytic`` or ``search``.
    :param iterations: Number of ratio evaluations performed.
    :param budget: The search budget used.
    """

    def __init__(self,
                 value: float,
                 witness: Optional[Tuple[DensityMatrix, DensityMatrix]] = None,
                 method: str = 'search',
                 iterations: int = 0,
                 budget: Optional[Dict[str, int]] = None,
                 ):
        self.value = value
        self.witness = witness
        self.method = method
        self.iterations = iterations
        self.budget = budget or {}

    def __repr__(self):
        return (f'<ContractionEstimate {self.method} value={self.value:.8g} '
                f'iterations={self.iterations}>')


class ContractionReport:
    """Result of a numerical contraction check."""

    def __init__(self,
                 max_ratio: float,
                 violation_count: int,
                 samples_used: int,
                 samples_skipped: int,
                 ):
        self.max_ratio = max_ratio
        self.violation_count = violation_count
        self.samples_used = samples_used
        self.samples_skipped = samples_skipped

    def __repr__(self):
        return (f'<ContractionReport max_ratio={self.max_ratio:.8g} '
                f'violations={self.violation_count} '
                f'samples={self.samples_used}>')


def contraction_ratio(ensemble: NoiseEnsemble,
                      oset: ObservableSet,
                      rho: DensityMatrix,
                      sigma: DensityMatrix,
                      ) -> Optional[float]:
    """Largest trace distance ratio over the ensemble for one state pair.

    Returns None when the pair is not distinguishable by the observables.
    """
    d_o = divergences.observable_distinguishability(rho, sigma, oset)
    if d_o < MIN_DISTINGUISHABILITY:
        return None
    return max(
        divergences.trace_distance(channel(rho), channel(sigma))
        for channel in ensemble
    ) / d_o


def _pure(vector: np.ndarray) -> DensityMatrix:
    vector = vector / np.linalg.norm(vector)
    return np.outer(vector, vector.conj())


def _gaussian_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


def estimate_eta(ensemble,
                 oset: ObservableSet,
                 restarts: int = 16,
                 refine_steps: int = 64,
                 rng: numkit.RandomLike = None,
                 ) -> ContractionEstimate:
    """Estimate the generalized contraction coefficient from below.

    Each restart draws a random pure state pair from its own generator
    derived from the master seed and hill-climbs on the ratio by Gaussian
    perturbation of the state vectors, shrinking the step on rejection.
    More restarts under the same seed never lower the result.

    :param ensemble: A channel or a :class:`NoiseEnsemble`.
    :param oset: Observables defining the distinguishability.
    :param restarts: Number of independent starting pairs, positive.
    :param refine_steps: Local refinement proposals per restart.
    :param rng: Seed or generator for the master seed.
    """
    ensemble = NoiseEnsemble.of(ensemble)
    if restarts < 1 or refine_steps < 0:
        raise InvalidArgument('search budget', (restarts, refine_steps),
                              'at least one restart')
    if oset.dim != ensemble.dim:
        raise InvalidArgument('observable set dimension', oset.dim,
                              str(ensemble.dim))
    seed = numkit.draw_seed(rng)
    best_value = 0.
    best_pair = None
    evaluations = 0
    for restart in range(restarts):
        restart_rng = numkit.derive_rng(seed, restart)
        vectors = [_gaussian_vector(ensemble.dim, restart_rng)
                   for i in range(2)]
        pair = tuple(_pure(v) for v in vectors)
        ratio = contraction_ratio(ensemble, oset, *pair)
        evaluations += 1
        current = -math.inf if ratio is None else ratio
        step = .5
        for i in range(refine_steps):
            proposal = [
                v / np.linalg.norm(v)
                + step * _gaussian_vector(ensemble.dim, restart_rng)
                for v in vectors
            ]
            proposed_pair = tuple(_pure(v) for v in proposal)
            ratio = contraction_ratio(ensemble, oset, *proposed_pair)
            evaluations += 1
            if ratio is not None and ratio > current:
                vectors, pair, current = proposal, proposed_pair, ratio
            else:
                step = max(step * .7, 1e-4)
        if current > best_value or (best_pair is None and current >= 0):
            best_value, best_pair = current, pair
        logger.debug('eta restart %d: best ratio %.10g', restart, current)
    return ContractionEstimate(
        value=max(best_value, 0.),
        witness=best_pair,
        method='search',
        iterations=evaluations,
        budget={'restarts': restarts, 'refine_steps': refine_steps},
    )


def depolarizing_rel_ent_contraction(gamma: float) -> float:
    """Relative entropy contraction toward the maximally mixed state under
    local depolarizing noise of strength ``gamma``."""
    if not 0 <= gamma <= 1:
        raise InvalidArgument('depolarizing strength', gamma, 'in [0, 1]')
    return (1 - gamma) ** 2


def q_ratio(y: float, x: float) -> float:
    """``D2(y||x) / D2(x||y)`` with its limit 1 at ``x = y``."""
    if abs(x - y) < 1e-12:
        return 1.
    return (divergences.binary_relative_entropy(y, x)
            / divergences.binary_relative_entropy(x, y))


def _q_ratio_array(y: float, xs: np.ndarray) -> np.ndarray:
    def d2(a, b):
        return (a * np.log2(a / b) + (1 - a) * np.log2((1 - a) / (1 - b)))
    return d2(y, xs) / d2(xs, y)


def global_depolarizing_alpha1(lambda_min: float) -> float:
    """The exponent ``alpha_1 = min_x (1 + q_lambda(x)) / 2``.

    Minimized over a dense grid on the open unit interval with bounded
    scalar refinement around the best grid point. Points within ``1e-5``
    of ``lambda_min`` are replaced by the limit value.

    :param lambda_min: Minimum eigenvalue of the fixed point, in (0, 1/2].
    """
    if not 0 < lambda_min <= .5:
        raise InvalidArgument('minimum eigenvalue', lambda_min, 'in (0, 1/2]')
    grid = np.linspace(0, 1, ALPHA_GRID_POINTS)[1:-1]
    grid = grid[np.abs(grid - lambda_min) > 1e-5]
    values = _q_ratio_array(lambda_min, grid)
    best_i = int(np.argmin(values))
    best = min(float(values[best_i]), 1.)
    low = grid[max(best_i - 1, 0)]
    high = grid[min(best_i + 1, len(grid) - 1)]
    if high > low and not low <= lambda_min <= high:
        refined = scipy.optimize.minimize_scalar(
            lambda x: q_ratio(lambda_min, x),
            bounds=(low, high), method='bounded',
            options={'xatol': 1e-12},
        )
        if refined.success:
            best = min(best, float(refined.fun))
    return .5 * (1 + best)


def global_depolarizing_xi(gamma: float, lambda_min: float) -> float:
    """Relative entropy contraction constant ``(1 - gamma)^(2 alpha_1)``
    of the global depolarizing channel toward a fixed point with minimum
    eigenvalue ``lambda_min``."""
    if not 0 <= gamma <= 1:
        raise InvalidArgument('depolarizing strength', gamma, 'in [0, 1]')
    return (1 - gamma) ** (2 * global_depolarizing_alpha1(lambda_min))


def pauli_renyi2_contraction(qx: float, qy: float, qz: float) -> float:
    """Renyi-2 contraction factor ``q^(1/ln 2)`` of stochastic Pauli noise
    with ``q = |1 - 2 min(qx + qy, qy + qz, qx + qz)|``."""
    probs = (qx, qy, qz)
    if min(probs) < 0 or sum(probs) > 1 + 1e-12:
        raise InvalidArgument('Pauli probabilities', probs,
                              'nonnegative, summing to at most 1')
    q = abs(1 - 2 * min(qx + qy, qy + qz, qx + qz))
    return q ** (1 / math.log(2)) if q > 0 else 0.


def verify_contraction(channel: KrausChannel,
                       fixed: DensityMatrix,
                       xi_claimed: float,
                       divergence: str = 'relative_entropy',
                       samples: int = 500,
                       rng: numkit.RandomLike = None,
                       ) -> ContractionReport:
    """Check ``S(N(rho)||fixed) <= xi S(rho||fixed)`` on random states.

    States are drawn from :func:`qembound.generate.probe_sampler`. States
    within ``MIN_FIXED_DISTANCE`` trace distance of the fixed point or with
    divergence below ``MIN_DIVERGENCE`` are skipped.

    :param divergence: ``relative_entropy`` or ``renyi2``.
    :raises NotAFixedPoint: If the channel moves ``fixed`` by more than
        ``FIXED_POINT_TOL`` in trace norm.
    """
    try:
        div_fx = DIVERGENCES[divergence]
    except KeyError:
        raise InvalidArgument('divergence', divergence,
                              ' or '.join(DIVERGENCES))
    fixed = numkit.check_state(fixed)
    residual = channels.fixed_point_residual(channel, fixed)
    if residual > FIXED_POINT_TOL:
        raise NotAFixedPoint(residual)
    max_ratio = 0.
    violations = 0
    used = 0
    skipped = 0
    sampler = generate.probe_sampler(channel.dim, fixed)
    for state in sampler.sample(samples, rng):
        if divergences.trace_distance(state, fixed) < MIN_FIXED_DISTANCE:
            skipped += 1
            continue
        before = div_fx(state, fixed)
        if before < MIN_DIVERGENCE or math.isinf(before):
            skipped += 1
            continue
        ratio = div_fx(channel(state), fixed) / before
        used += 1
        max_ratio = max(max_ratio, ratio)
        if ratio > xi_claimed + VIOLATION_TOL:
            violations += 1
    logger.info('contraction check (%s): max ratio %.10g vs claimed %.10g, '
                '%d violations in %d samples',
                divergence, max_ratio, xi_claimed, violations, used)
    return ContractionReport(max_ratio, violations, used, skipped)
