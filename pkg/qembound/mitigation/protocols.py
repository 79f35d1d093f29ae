"""Error mitigation protocols.

Three estimators of an ideal expectation value are implemented on
simulated layered circuits:

-   ``none`` - the plain sample mean of measurements of the noisy output,
    biased by the noise,
-   ``pec`` - probabilistic error cancellation: every noisy site is
    followed by a Pauli drawn from the quasiprobability decomposition of
    the inverse depolarizing channel, and each outcome is reweighted by the
    sign and one-norm of the drawn corrections; unbiased when the assumed
    strengths are the true ones,
-   ``zne`` - zero noise extrapolation: the noisy expectation is estimated
    at several noise scale factors and extrapolated to zero noise by a fit
    model registered in :data:`ZNE_FITS`.

Each protocol is prepared once for a given circuit, input and observable
as a :class:`ProtocolRunner`, which caches everything deterministic, and
then run any number of times with different sample counts and generators.
"""

import abc
import math
import logging
import warnings
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.optimize

from qembound import numkit
from qembound import persist
from qembound import registry
from qembound.mitigation import circuit
from qembound.mitigation.circuit import LayeredCircuit
from qembound.numkit import (
    ComplexMatrix, DensityMatrix, InvalidArgument, Observable, QEMError,
)


logger = logging.getLogger(__name__)

PROTOCOL_MISMATCH = 'ProtocolMismatch'
FIT_FALLBACK = 'FitFallback'

MAX_CACHED_PATTERNS: int = 1 << 16

Flags = Tuple[str, ...]


class Noninvertible(QEMError, ValueError):
    """The depolarizing channel of full strength has no inverse."""

    def __init__(self, gamma: float):
        super().__init__(f'depolarizing strength {gamma} is not invertible')
        self.gamma = gamma


class FitDegenerate(QEMError, ValueError):
    """An extrapolation model cannot be fitted to the given values."""

    def __init__(self, fit: str, reason: str):
        super().__init__(f'{fit} fit failed: {reason}')
        self.fit = fit
        self.reason = reason


class PECDecomposition:
    """Quasiprobability decomposition of the inverse of single-qubit
    depolarizing noise over Pauli conjugations.

    :param gamma: The depolarizing strength to invert, in [0, 1).
    """
    LABELS = 'IXYZ'

    def __init__(self, gamma: float):
        self.gamma = gamma
        off = -gamma / (4 * (1 - gamma))
        self.coefficients = np.array(
            [(4 - gamma) / (4 * (1 - gamma)), off, off, off]
        )
        self.one_norm = float(np.abs(self.coefficients).sum())
        self.probabilities = np.abs(self.coefficients) / self.one_norm
        self.signs = np.where(self.coefficients < 0, -1., 1.)

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(self.LABELS, self.coefficients.tolist()))

    def apply(self, x: ComplexMatrix) -> ComplexMatrix:
        """The signed mixture of Pauli conjugations on a single qubit."""
        x = numkit.as_square(x)
        return sum(
            coef * (numkit.pauli(label) @ x @ numkit.pauli(label))
            for coef, label in zip(self.coefficients, self.LABELS)
        )

    def transfer_matrix(self) -> np.ndarray:
        """Diagonal Pauli transfer matrix of the signed mixture."""
        c_i, c_x, c_y, c_z = self.coefficients
        return np.diag([
            c_i + c_x + c_y + c_z,
            c_i + c_x - c_y - c_z,
            c_i - c_x + c_y - c_z,
            c_i - c_x - c_y + c_z,
        ])

    def __repr__(self):
        return (f'<PECDecomposition gamma={self.gamma} '
                f'one_norm={self.one_norm:.10g}>')


def pec_decomposition(gamma: float) -> PECDecomposition:
    """Decompose the inverse of depolarizing noise of strength ``gamma``.

    :raises Noninvertible: If ``gamma`` is 1.
    """
    if gamma == 1:
        raise Noninvertible(gamma)
    if not 0 <= gamma < 1:
        raise InvalidArgument('depolarizing strength', gamma, 'in [0, 1)')
    return PECDecomposition(float(gamma))


ZNE_FITS: Dict[str, Callable[[np.ndarray, np.ndarray], float]] = {}
zne_fit, get_fit, construct_fit = registry.register_functions(
    ZNE_FITS, 'extrapolation fit', Callable[[np.ndarray, np.ndarray], float]
)


@zne_fit
def richardson(scales: np.ndarray, values: np.ndarray) -> float:
    """Lagrange polynomial through all points, evaluated at zero."""
    total = 0.
    for i, x_i in enumerate(scales):
        weight = 1.
        for j, x_j in enumerate(scales):
            if j != i:
                weight *= x_j / (x_j - x_i)
        total += weight * values[i]
    return float(total)


@zne_fit
def linear(scales: np.ndarray, values: np.ndarray) -> float:
    """Least squares line, evaluated at zero."""
    if len(scales) == 1:
        return float(values[0])
    return float(np.polyfit(scales, values, 1)[1])


def _exp_model(x, amplitude, rate):
    return amplitude * np.exp(-rate * x)


@zne_fit
def exponential(scales: np.ndarray, values: np.ndarray) -> float:
    """Least squares fit of ``a exp(-b x)``, evaluated at zero.

    Started from the log-linear fit of the magnitudes, which is kept if the
    nonlinear fit does not improve on it.

    :raises FitDegenerate: With fewer than two points, values that vanish,
        change sign or are not monotone in magnitude, or if the nonlinear
        fit fails.
    """
    if len(scales) < 2:
        raise FitDegenerate('exponential', 'at least two points needed')
    signs = np.sign(values)
    if signs[0] == 0 or (signs != signs[0]).any():
        raise FitDegenerate('exponential', 'values vanish or change sign')
    steps = np.diff(np.abs(values))
    if not ((steps <= 0).all() or (steps >= 0).all()):
        raise FitDegenerate('exponential', 'values not monotone')
    slope, intercept = np.polyfit(scales, np.log(np.abs(values)), 1)
    guess = np.array([signs[0] * math.exp(intercept), -slope])
    try:
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', scipy.optimize.OptimizeWarning)
            params, _ = scipy.optimize.curve_fit(
                _exp_model, scales, values, p0=guess, maxfev=2000
            )
    except (RuntimeError, ValueError) as err:
        raise FitDegenerate('exponential', str(err))
    if not np.isfinite(params).all():
        raise FitDegenerate('exponential', 'non-finite parameters')

    def sq_error(p):
        return float(np.sum((_exp_model(scales, *p) - values) ** 2))

    best = params if sq_error(params) < sq_error(guess) else guess
    return float(best[0])


def extrapolate(scales: Sequence[float],
                values: Sequence[float],
                fit: Union[str, Callable] = 'richardson',
                ) -> float:
    """Extrapolate expectation values measured at noise scale factors to
    zero noise.

    :param fit: Name of a model in :data:`ZNE_FITS` or a custom callable.
    :raises FitDegenerate: If the model cannot be fitted.
    """
    scales = np.asarray(scales, dtype=float)
    values = np.asarray(values, dtype=float)
    if scales.shape != values.shape or scales.size == 0:
        raise InvalidArgument('extrapolation points', (scales, values),
                              'equally many scales and values')
    return construct_fit(fit)(scales, values)


def extrapolate_with_fallback(scales: Sequence[float],
                              values: Sequence[float],
                              fit: Union[str, Callable] = 'richardson',
                              ) -> Tuple[float, Flags]:
    """Extrapolate, falling back to the linear model when the fit fails."""
    try:
        return extrapolate(scales, values, fit), ()
    except FitDegenerate as err:
        logger.warning('%s; falling back to linear extrapolation', err)
        return extrapolate(scales, values, 'linear'), (FIT_FALLBACK,)


@persist.simple_serialization
class ProtocolSpec:
    """Which mitigation protocol to run, with its parameters.

    :param kind: ``none``, ``pec`` or ``zne``.
    :param assumed_gamma: For PEC, the depolarizing strengths to invert,
        as a scalar or an ``L x M`` nested list; the circuit's true ones if
        not given.
    :param scale_factors: For ZNE, strictly increasing noise scale factors
        starting at 1.
    :param fit: For ZNE, the extrapolation model name.
    """
    KINDS = ('none', 'pec', 'zne')

    def __init__(self,
                 kind: str = 'none',
                 assumed_gamma: Union[None, float, Sequence] = None,
                 scale_factors: Sequence[float] = (1., 2., 3.),
                 fit: str = 'richardson',
                 ):
        if kind not in self.KINDS:
            raise InvalidArgument('protocol kind', kind, ' or '.join(self.KINDS))
        scale_factors = [float(s) for s in scale_factors]
        if not scale_factors or scale_factors[0] != 1 or any(
            a >= b for a, b in zip(scale_factors[:-1], scale_factors[1:])
        ):
            raise InvalidArgument('scale factors', scale_factors,
                                  'strictly increasing, starting at 1')
        if fit not in ZNE_FITS:
            raise InvalidArgument('extrapolation fit', fit,
                                  ' or '.join(sorted(ZNE_FITS)))
        if assumed_gamma is not None:
            gammas = np.asarray(assumed_gamma, dtype=float)
            if ((gammas < 0) | (gammas >= 1)).any():
                raise InvalidArgument('assumed strengths', assumed_gamma,
                                      'within [0, 1)')
        self.kind = kind
        self.assumed_gamma = assumed_gamma
        self.scale_factors = tuple(scale_factors)
        self.fit = fit

    def __repr__(self):
        return f'<ProtocolSpec {self.kind}>'


def _check_shots(n: int) -> int:
    if n < 1:
        raise InvalidArgument('sample count', n, 'positive')
    return int(n)


class ProtocolRunner(metaclass=abc.ABCMeta):
    """A protocol prepared for one circuit, input state and observable."""
    min_samples: int = 1

    @abc.abstractmethod
    def run(self,
            n: int,
            rng: numkit.RandomLike = None,
            ) -> Tuple[float, Flags]:
        """Produce one estimate from ``n`` noisy samples, with flags."""
        raise NotImplementedError


class DirectRunner(ProtocolRunner):
    """Sample mean of measurements of the noisy output at one noise scale."""

    def __init__(self,
                 c: LayeredCircuit,
                 rho_in: DensityMatrix,
                 a: Observable,
                 scale: float = 1.,
                 ):
        self.values, self.probs = circuit.outcome_distribution(
            circuit.noisy_state(c, rho_in, scale), numkit.check_observable(a)
        )

    def run(self, n, rng=None):
        n = _check_shots(n)
        rng = numkit.make_rng(rng)
        return float(rng.choice(self.values, size=n, p=self.probs).mean()), ()


class PECSampler:
    """Draw reweighted outcomes of probabilistic error cancellation.

    Output distributions are cached per drawn correction pattern, so that
    trajectories sharing a pattern are simulated once.

    :param assumed: Strengths to invert (scalar or ``L x M``); the
        circuit's true ones if not given.
    """

    def __init__(self,
                 c: LayeredCircuit,
                 rho_in: DensityMatrix,
                 a: Observable,
                 assumed: Union[None, float, Sequence] = None,
                 ):
        a = numkit.check_observable(a)
        self.circuit = c
        self.rho_in = circuit.check_input(c, rho_in)
        gammas = c.strengths if assumed is None else np.broadcast_to(
            np.asarray(assumed, dtype=float), c.strengths.shape
        )
        self.mismatch = not np.allclose(gammas, c.strengths, rtol=0,
                                        atol=1e-12)
        decomps = [pec_decomposition(g) for g in gammas.ravel()]
        self.probabilities = np.array([d.probabilities for d in decomps])
        self.signs = np.array([d.signs for d in decomps])
        self.weight = float(np.prod([d.one_norm for d in decomps]))
        self.values, self._vectors = numkit.eig_hermitian(a)
        self._cdfs = {}

    def _cdf(self, pattern: np.ndarray) -> np.ndarray:
        key = pattern.tobytes()
        cdf = self._cdfs.get(key)
        if cdf is None:
            c = self.circuit
            state = circuit.evolve(
                c, self.rho_in, insertions=pattern.reshape(c.layers, c.qubits)
            )
            probs = np.einsum('ij,ik,kj->j', self._vectors.conj(), state,
                              self._vectors).real
            cdf = np.cumsum(np.clip(probs, 0, None))
            cdf /= cdf[-1]
            if len(self._cdfs) < MAX_CACHED_PATTERNS:
                self._cdfs[key] = cdf
        return cdf

    def sample(self, n: int, rng: numkit.RandomLike = None) -> np.ndarray:
        """Draw ``n`` weighted outcomes ``sign * one_norm * eigenvalue``."""
        n = _check_shots(n)
        rng = numkit.make_rng(rng)
        sites = len(self.probabilities)
        patterns = np.empty((n, sites), dtype=np.int8)
        for site in range(sites):
            patterns[:, site] = rng.choice(4, size=n,
                                           p=self.probabilities[site])
        signs = np.prod(self.signs[np.arange(sites), patterns], axis=1)
        unique, inverse = np.unique(patterns, axis=0, return_inverse=True)
        cdfs = np.array([self._cdf(row) for row in unique])
        draws = rng.random(n)
        outcome = (draws[:, None] >= cdfs[inverse.reshape(-1)]).sum(axis=1)
        outcome = np.minimum(outcome, len(self.values) - 1)
        return signs * self.weight * self.values[outcome]


class PECRunner(ProtocolRunner):
    def __init__(self, c, rho_in, a, assumed=None):
        self.sampler = PECSampler(c, rho_in, a, assumed)
        self.flags = (PROTOCOL_MISMATCH,) if self.sampler.mismatch else ()

    def run(self, n, rng=None):
        return float(self.sampler.sample(n, rng).mean()), self.flags


class ZNERunner(ProtocolRunner):
    """Zero noise extrapolation over the protocol's scale factors.

    The ``n`` samples are split equally between the scale factors; the
    remainder goes to the smallest one.
    """

    def __init__(self, c, rho_in, a, protocol: ProtocolSpec):
        self.scales = np.array(protocol.scale_factors)
        self.fit = protocol.fit
        self.direct = [DirectRunner(c, rho_in, a, s) for s in self.scales]
        self.min_samples = len(self.scales)

    def run(self, n, rng=None):
        n = _check_shots(n)
        k = len(self.scales)
        if n < k:
            raise InvalidArgument('sample count', n,
                                  f'at least one per scale factor ({k})')
        rng = numkit.make_rng(rng)
        shots = [n // k] * k
        shots[0] += n % k
        means = [runner.run(m, rng)[0] for runner, m in zip(self.direct, shots)]
        return extrapolate_with_fallback(self.scales, means, self.fit)


def make_runner(c: LayeredCircuit,
                rho_in: DensityMatrix,
                a: Observable,
                protocol: ProtocolSpec,
                ) -> ProtocolRunner:
    """Prepare a protocol for repeated runs."""
    if protocol.kind == 'pec':
        return PECRunner(c, rho_in, a, protocol.assumed_gamma)
    elif protocol.kind == 'zne':
        return ZNERunner(c, rho_in, a, protocol)
    else:
        return DirectRunner(c, rho_in, a)


def run_protocol(c: LayeredCircuit,
                 rho_in: DensityMatrix,
                 a: Observable,
                 protocol: ProtocolSpec,
                 n: int,
                 rng: numkit.RandomLike = None,
                 ) -> Tuple[float, Flags]:
    return make_runner(c, rho_in, a, protocol).run(n, rng)


def run_direct(c: LayeredCircuit,
               rho_in: DensityMatrix,
               a: Observable,
               n: int,
               rng: numkit.RandomLike = None,
               ) -> float:
    return DirectRunner(c, rho_in, a).run(n, rng)[0]


def run_pec(c: LayeredCircuit,
            rho_in: DensityMatrix,
            a: Observable,
            n: int,
            rng: numkit.RandomLike = None,
            assumed_gamma: Optional[Union[float, Sequence]] = None,
            ) -> float:
    """Estimate the ideal expectation by probabilistic error cancellation.

    Each of the ``n`` samples draws one Pauli correction per noisy site from
    the inverse decomposition, runs the corrected circuit, takes one
    measurement and weights it by the product of signs and one-norms.

    :param assumed_gamma: Strengths to invert; the true ones if not given,
        which makes the estimate unbiased.
    """
    runner = PECRunner(c, rho_in, a, assumed_gamma)
    if runner.flags:
        logger.warning('PEC assumes strengths different from the circuit; '
                       'the estimate is biased')
    return runner.run(n, rng)[0]


def run_zne(c: LayeredCircuit,
            rho_in: DensityMatrix,
            a: Observable,
            n: int,
            protocol: ProtocolSpec,
            rng: numkit.RandomLike = None,
            ) -> float:
    """Estimate the ideal expectation by zero noise extrapolation.

    Noise is scaled by multiplying every depolarizing strength (clamped at
    1). A failing fit falls back to linear extrapolation with a warning.
    """
    return ZNERunner(c, rho_in, a, protocol).run(n, rng)[0]
