"""Various utility functions for other modules of the toolkit.

There should normally be no need to use these functions directly.
"""

import math
import hashlib
from typing import Any, Iterable, Optional, Sequence, Tuple

import numpy as np
import scipy.stats


INF: float = math.inf
"""The sentinel for infinite divergences and diverging sample bounds."""


def is_inf(value: Optional[float]) -> bool:
    return value is not None and math.isinf(value)


def safe_ratio(numerator: float, denominator: float) -> float:
    """Divide nonnegative quantities, mapping x/0 to infinity and 0/0 to 0.

    Infinite denominators yield zero for finite numerators.
    """
    if numerator == 0:
        return 0.
    elif denominator == 0:
        return INF
    elif math.isinf(denominator):
        return INF if math.isinf(numerator) else 0.
    else:
        return numerator / denominator


def first_argmax(values: Sequence[float]) -> Optional[int]:
    """Index of the first maximal value (ties resolved to the lowest index).

    Returns None for an empty sequence.
    """
    best_i = None
    best = None
    for i, value in enumerate(values):
        if best is None or value > best:
            best_i, best = i, value
    return best_i


def first_argmin(values: Sequence[float]) -> Optional[int]:
    best_i = None
    best = None
    for i, value in enumerate(values):
        if best is None or value < best:
            best_i, best = i, value
    return best_i


def wilson_lower_bound(successes: int,
                       trials: int,
                       confidence: float = .95,
                       ) -> float:
    """Lower end of the two-sided Wilson score interval for a proportion.

    :param successes: Number of successful trials.
    :param trials: Total number of trials, positive.
    :param confidence: Two-sided confidence level.
    """
    if trials <= 0:
        raise ValueError(f'positive trial count required, got {trials}')
    z = scipy.stats.norm.ppf(1 - (1 - confidence) / 2)
    phat = successes / trials
    denom = 1 + z ** 2 / trials
    center = phat + z ** 2 / (2 * trials)
    margin = z * math.sqrt(
        phat * (1 - phat) / trials + z ** 2 / (4 * trials ** 2)
    )
    return max(0., (center - margin) / denom)


def loglinear_slope(xs: Iterable[float], ys: Iterable[float]) -> float:
    """Least-squares slope of ``ln y`` against ``x`` over positive finite y."""
    pairs = [
        (x, math.log(y)) for x, y in zip(xs, ys)
        if y is not None and 0 < y < INF
    ]
    if len(pairs) < 2:
        return math.nan
    xarr, yarr = np.array(pairs).T
    return float(np.polyfit(xarr, yarr, 1)[0])


def matrix_hash(m: Any) -> str:
    """A stable short hash of a matrix for result provenance."""
    arr = np.ascontiguousarray(np.asarray(m, dtype=complex))
    digest = hashlib.sha256()
    digest.update(repr(arr.shape).encode('ascii'))
    digest.update(arr.tobytes())
    return digest.hexdigest()[:16]


def unordered_pairs(n: int) -> Iterable[Tuple[int, int]]:
    for i in range(n):
        for j in range(i + 1, n):
            yield i, j


def ordered_pairs(n: int) -> Iterable[Tuple[int, int]]:
    for i in range(n):
        for j in range(n):
            if i != j:
                yield i, j
