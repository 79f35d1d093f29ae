"""Monte Carlo measurement of estimator quality and sample requirements.

:func:`estimator_stats` runs a protocol repeatedly with a fixed number of
noisy samples per run and reports the bias, spread and the fraction of
runs within the target accuracy of the ideal value.
:func:`empirical_sample_requirement` searches for the smallest sample
count at which that fraction is certified to reach ``1 - epsilon``.

Every trial draws from its own generator derived from the master seed,
the sample count and the trial index, so results do not depend on the
number of worker threads or on which counts were probed before.
"""

import math
import logging
import concurrent.futures
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from qembound import numkit
from qembound import util
from qembound.bounds.core import AccuracyTarget
from qembound.mitigation import circuit
from qembound.mitigation.circuit import LayeredCircuit
from qembound.mitigation.protocols import ProtocolRunner, ProtocolSpec, make_runner
from qembound.numkit import DensityMatrix, InvalidArgument, Observable, QEMError


logger = logging.getLogger(__name__)

FEW_TRIALS = 'FewTrials'

MIN_TRIALS: int = 30
DEFAULT_TRIALS: int = 400
DEFAULT_N_MAX: int = 2 ** 20
CONFIDENCE: float = .95


class Unachievable(QEMError):
    """The success probability stays below target up to the sample limit.

    :param plateau: The highest success probability observed.
    :param n_max: The sample limit.
    """

    def __init__(self, plateau: float, n_max: int):
        super().__init__(
            f'success probability plateaus at {plateau:.4f} '
            f'up to {n_max} samples'
        )
        self.plateau = plateau
        self.n_max = n_max


class EstimatorStats:
    """Statistics of a protocol's estimates over repeated trials.

    :param mean: Mean estimate.
    :param bias: Mean estimate minus the ideal value.
    :param std_dev: Sample standard deviation of the estimates.
    :param success_prob: Fraction of trials within ``delta`` of the ideal
        value.
    :param trials: Number of trials.
    :param n_per_trial: Noisy samples consumed per trial.
    :param flags: Markers raised by the protocol or by too few trials.
    """

    def __init__(self,
                 mean: float,
                 bias: float,
                 std_dev: float,
                 success_prob: float,
                 trials: int,
                 n_per_trial: int,
                 flags: Sequence[str] = (),
                 ):
        self.mean = mean
        self.bias = bias
        self.std_dev = std_dev
        self.success_prob = success_prob
        self.trials = trials
        self.n_per_trial = n_per_trial
        self.flags = tuple(dict.fromkeys(flags))

    @property
    def successes(self) -> int:
        return int(round(self.success_prob * self.trials))

    @property
    def std_error(self) -> float:
        """Standard error of the mean estimate."""
        return self.std_dev / math.sqrt(self.trials)

    def to_record(self) -> Dict[str, object]:
        return {
            'mean': self.mean,
            'bias': self.bias,
            'std_dev': self.std_dev,
            'success_prob': self.success_prob,
            'trials': self.trials,
            'n_per_trial': self.n_per_trial,
            'flags': list(self.flags),
        }

    def __repr__(self):
        return (f'<EstimatorStats n={self.n_per_trial} bias={self.bias:.4g} '
                f'std_dev={self.std_dev:.4g} '
                f'success={self.success_prob:.3f}>')


class CurvePoint(NamedTuple):
    n: int
    success_prob: float
    wilson_lb: float
    bias: float
    std_dev: float


class SampleRequirement:
    """The minimal certified sample count and the measured curve.

    :param n_hat: Smallest probed sample count whose Wilson lower bound on
        the success probability reaches ``1 - epsilon``.
    :param curve: All probed points, by increasing sample count.
    """

    def __init__(self,
                 n_hat: int,
                 curve: List[CurvePoint],
                 flags: Sequence[str] = (),
                 ):
        self.n_hat = n_hat
        self.curve = curve
        self.flags = tuple(dict.fromkeys(flags))

    def __repr__(self):
        return f'<SampleRequirement n_hat={self.n_hat}>'


def _trial_estimates(runner: ProtocolRunner,
                     n: int,
                     trials: int,
                     seed: int,
                     threads: int,
                     ) -> List[Tuple[float, Tuple[str, ...]]]:
    def one_trial(k):
        return runner.run(n, numkit.derive_rng(seed, n, k))

    if threads <= 1:
        return [one_trial(k) for k in range(trials)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one_trial, range(trials)))


def _stats_from_runner(runner: ProtocolRunner,
                       truth: float,
                       n: int,
                       trials: int,
                       delta: float,
                       seed: int,
                       threads: int,
                       ) -> EstimatorStats:
    results = _trial_estimates(runner, n, trials, seed, threads)
    estimates = np.array([value for value, flags in results])
    flags = [flag for value, trial_flags in results for flag in trial_flags]
    if trials < MIN_TRIALS:
        flags.append(FEW_TRIALS)
    mean = float(estimates.mean())
    return EstimatorStats(
        mean=mean,
        bias=mean - truth,
        std_dev=float(estimates.std(ddof=1)) if trials > 1 else 0.,
        success_prob=float(np.mean(np.abs(estimates - truth) <= delta)),
        trials=trials,
        n_per_trial=n,
        flags=flags,
    )


def _check_budget(n: int, trials: int, delta: float) -> None:
    if n < 1 or trials < 1:
        raise InvalidArgument('sample and trial counts', (n, trials),
                              'both positive')
    if not delta >= 0:
        raise InvalidArgument('accuracy delta', delta, 'nonnegative')


def estimator_stats(c: LayeredCircuit,
                    rho_in: DensityMatrix,
                    a: Observable,
                    protocol: ProtocolSpec,
                    n: int,
                    trials: int,
                    delta: float,
                    rng: numkit.RandomLike = None,
                    threads: int = 1,
                    ) -> EstimatorStats:
    """Run a protocol ``trials`` times with ``n`` samples each.

    The bias is measured against the exact ideal expectation. Fewer than
    ``MIN_TRIALS`` trials raise the ``FewTrials`` flag.

    :param threads: Number of worker threads for the trials.
    """
    _check_budget(n, trials, delta)
    truth = circuit.ideal_expectation(c, rho_in, a)
    runner = make_runner(c, rho_in, a, protocol)
    return _stats_from_runner(runner, truth, n, trials, delta,
                              numkit.draw_seed(rng), threads)


class _Prober:
    # success statistics per sample count, computed once
    def __init__(self, runner, truth, target, trials, seed, threads,
                 confidence):
        self.runner = runner
        self.truth = truth
        self.target = target
        self.trials = trials
        self.seed = seed
        self.threads = threads
        self.confidence = confidence
        self.points: Dict[int, CurvePoint] = {}

    def certified(self, n: int) -> bool:
        if n not in self.points:
            stats = _stats_from_runner(
                self.runner, self.truth, n, self.trials, self.target.delta,
                self.seed, self.threads,
            )
            lower = util.wilson_lower_bound(stats.successes, self.trials,
                                            self.confidence)
            self.points[n] = CurvePoint(n, stats.success_prob, lower,
                                        stats.bias, stats.std_dev)
            logger.info('probe n=%d: success %.4f, Wilson bound %.4f',
                        n, stats.success_prob, lower)
        return self.points[n].wilson_lb >= 1 - self.target.epsilon

    def curve(self) -> List[CurvePoint]:
        return [self.points[n] for n in sorted(self.points)]


def _single_requirement(c, rho_in, a, protocol, target, trials, seed,
                        n_max, threads, confidence) -> SampleRequirement:
    truth = circuit.ideal_expectation(c, rho_in, a)
    runner = make_runner(c, rho_in, a, protocol)
    prober = _Prober(runner, truth, target, trials, seed, threads, confidence)
    n = runner.min_samples
    while not prober.certified(n):
        if n >= n_max:
            plateau = max(p.success_prob for p in prober.points.values())
            raise Unachievable(plateau, n_max)
        n = min(2 * n, n_max)
    low, high = max(n // 2, runner.min_samples - 1), n
    while high - low > 1:
        mid = (low + high) // 2
        if prober.certified(mid):
            high = mid
        else:
            low = mid
    flags = [FEW_TRIALS] if trials < MIN_TRIALS else []
    return SampleRequirement(high, prober.curve(), flags)


def empirical_sample_requirement(c: LayeredCircuit,
                                 rho_in: DensityMatrix,
                                 a: Observable,
                                 protocol: ProtocolSpec,
                                 target: AccuracyTarget,
                                 trials: int = DEFAULT_TRIALS,
                                 rng: numkit.RandomLike = None,
                                 n_max: int = DEFAULT_N_MAX,
                                 threads: int = 1,
                                 grid: Optional[Sequence[Tuple[DensityMatrix, Observable]]] = None,
                                 confidence: float = CONFIDENCE,
                                 ) -> SampleRequirement:
    """Find the smallest sample count meeting the accuracy target.

    Doubles the sample count from 1 until the Wilson lower confidence bound
    on the success probability over ``trials`` runs reaches
    ``1 - epsilon``, then bisects between the last two powers of two. The
    success probability is not exactly monotone in the sample count, so the
    result is the smallest certified count found by this search.

    :param grid: Further ``(rho_in, a)`` pairs; the largest requirement
        over the grid (including the given pair) is returned with its
        curve.
    :param n_max: Largest sample count tried.
    :raises Unachievable: If no count up to ``n_max`` is certified,
        typically for biased protocols with bias above ``delta``.
    """
    if trials < 1 or n_max < 1:
        raise InvalidArgument('trials and n_max', (trials, n_max),
                              'both positive')
    seed = numkit.draw_seed(rng)
    pairs = [(rho_in, a)] + list(grid or ())
    best = None
    for i, (rho, obs) in enumerate(pairs):
        found = _single_requirement(c, rho, obs, protocol, target, trials,
                                    seed + i, n_max,
                                    threads, confidence)
        logger.info('sample requirement for input %d: %d', i, found.n_hat)
        if best is None or found.n_hat > best.n_hat:
            best = found
    return best
