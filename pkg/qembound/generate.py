"""Generate random quantum states for verification and search.

Samplers yield density matrices from an explicit random generator. The
number of random draws consumed per state is fixed for every sampler here,
so sampling ``n + m`` states from a given seed reproduces the first ``n``
states of a run sampling only ``n``. Searches rely on this to be monotone
in their budget.

The state mixture used to probe contraction inequalities combines:

-   Haar-random pure states (:class:`HaarPureSampler`),
-   full-rank Hilbert-Schmidt states (:class:`WishartSampler`),
-   convex blends pulled toward a fixed point of the channel under test
    (:class:`BlendSampler`), which probe the regime where divergences
    are small.
"""

import abc
import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from qembound import numkit
from qembound.numkit import DensityMatrix, InvalidArgument


class Sampler(metaclass=abc.ABCMeta):
    """A generic state sampler interface."""
    dim: int

    @abc.abstractmethod
    def sample(self,
               n: int,
               rng: numkit.RandomLike = None,
               ) -> Iterable[DensityMatrix]:
        raise NotImplementedError


class HaarPureSampler(Sampler):
    """Sample Haar-random pure states."""

    def __init__(self, dim: int):
        self.dim = dim

    def sample(self, n, rng=None):
        rng = numkit.make_rng(rng)
        for i in range(n):
            yield numkit.random_state(self.dim, 'pure', rng)


class WishartSampler(Sampler):
    """Sample mixed states ``G G^dagger / tr`` from complex Gaussian ``G``.

    :param dim: State dimension.
    :param rank: Number of columns of ``G``; full rank if not given.
    """

    def __init__(self, dim: int, rank: Optional[int] = None):
        self.dim = dim
        self.rank = rank

    def sample(self, n, rng=None):
        rng = numkit.make_rng(rng)
        for i in range(n):
            if self.rank is None:
                yield numkit.random_state(self.dim, 'full_rank', rng)
            else:
                yield numkit.random_state(self.dim, 'rank_k', rng,
                                          rank=self.rank)


class BlendSampler(Sampler):
    """Blend inner samples toward a fixed state.

    Each output is ``t rho + (1 - t) fixed`` where ``rho`` comes from the
    inner sampler and ``t`` is log-uniform between the weight bounds, so
    that states very close to the fixed state are drawn regularly.

    :param inner: The sampler to wrap.
    :param fixed: The state to blend toward.
    :param weight_range: Bounds of the inner state weight ``t``.
    """

    def __init__(self,
                 inner: Sampler,
                 fixed: DensityMatrix,
                 weight_range: Tuple[float, float] = (1e-3, 1.),
                 ):
        self.inner = inner
        self.fixed = numkit.check_state(fixed)
        if self.fixed.shape[0] != inner.dim:
            raise InvalidArgument('fixed state dimension',
                                  self.fixed.shape[0], str(inner.dim))
        low, high = weight_range
        if not 0 < low <= high <= 1:
            raise InvalidArgument('blend weight range', weight_range,
                                  'within (0, 1]')
        self.dim = inner.dim
        self.weight_range = weight_range

    def sample(self, n, rng=None):
        rng = numkit.make_rng(rng)
        log_low, log_high = [math.log(w) for w in self.weight_range]
        for state in self.inner.sample(n, rng):
            weight = math.exp(rng.uniform(log_low, log_high))
            yield weight * state + (1 - weight) * self.fixed


class MixtureSampler(Sampler):
    """Sample from one of several samplers chosen at random per state.

    Every component draws its candidate state for each output so that the
    random stream consumption does not depend on the choices.

    :param components: Pairs of relative weights and samplers.
    """

    def __init__(self, components: Sequence[Tuple[float, Sampler]]):
        if not components:
            raise InvalidArgument('sampler mixture', components, 'nonempty')
        weights = np.array([weight for weight, sampler in components], float)
        if weights.min() < 0 or weights.sum() <= 0:
            raise InvalidArgument('mixture weights', weights.tolist(),
                                  'nonnegative with positive sum')
        dims = {sampler.dim for weight, sampler in components}
        if len(dims) != 1:
            raise InvalidArgument('mixture dimensions', dims, 'all equal')
        self.dim = dims.pop()
        self.weights = weights / weights.sum()
        self.samplers = [sampler for weight, sampler in components]

    def sample(self, n, rng=None):
        rng = numkit.make_rng(rng)
        streams = [sampler.sample(n, rng) for sampler in self.samplers]
        for i in range(n):
            choice = rng.choice(len(self.samplers), p=self.weights)
            drawn = [next(stream) for stream in streams]
            yield drawn[choice]


def probe_sampler(dim: int, fixed: Optional[DensityMatrix] = None) -> Sampler:
    """The contraction probe mixture.

    Half Haar pure, a quarter full-rank Wishart and a quarter Wishart
    states blended toward the fixed point (the maximally mixed state if
    not given).
    """
    if fixed is None:
        fixed = numkit.maximally_mixed(dim)
    return MixtureSampler([
        (.5, HaarPureSampler(dim)),
        (.25, WishartSampler(dim)),
        (.25, BlendSampler(WishartSampler(dim), fixed)),
    ])

