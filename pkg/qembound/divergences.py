"""Distances, divergences and observable statistics of quantum states.

All entropic quantities are in bits. An infinite relative entropy (support
violation) is returned as :data:`qembound.util.INF`.

Beyond the basic functionals, this module provides the continuity bounds
relating the relative entropy to the trace distance for full-rank second
arguments, which are used by the layered-circuit bounds:

-   :func:`relent_continuity_quadratic`: ``S <= 4 D^2 / lambda_min``,
-   :func:`relent_continuity_log`: for ``D <= 1/2``, ``S <= (2 / ln 2) D
    [log d + log(2/D) + log(1/lambda_min)/2]``,

and the fidelity lower bound ``S >= log(1/F)`` through
:func:`log_fidelity_gap`.
"""

import math
from typing import Optional, Sequence

import numpy as np

from qembound import numkit
from qembound import persist
from qembound.numkit import DensityMatrix, InvalidArgument, Observable, QEMError
from qembound.util import INF


SUPPORT_WEIGHT_TOL: float = 1e-9
SINGULAR_TOL: float = 1e-12


class SingularReference(QEMError, ValueError):
    """The reference state of a divergence must be full rank."""

    def __init__(self, min_eigenvalue: float):
        super().__init__(
            f'reference state singular: minimum eigenvalue {min_eigenvalue:.3e}'
        )
        self.min_eigenvalue = min_eigenvalue


class ObservableSet:
    """A set of observables defining a distinguishability measure.

    :param kind: ``explicit`` for a finite list of observables, or
        ``all_effects`` for all ``0 <= A <= I`` (the trace distance).
    :param members: The observables of an explicit set.
    :param dim: Dimension (inferred from the members if omitted).
    """

    KINDS = ('explicit', 'all_effects')

    def __init__(self,
                 kind: str = 'explicit',
                 members: Sequence[Observable] = (),
                 dim: Optional[int] = None,
                 ):
        if kind not in self.KINDS:
            raise InvalidArgument('observable set kind', kind,
                                  ' or '.join(self.KINDS))
        members = tuple(numkit.check_observable(a) for a in members)
        if kind == 'explicit':
            if not members:
                raise InvalidArgument('observable set', members, 'nonempty')
            dims = {a.shape[0] for a in members}
            if len(dims) != 1 or (dim is not None and dims != {dim}):
                raise InvalidArgument('observable dimensions', dims,
                                      'all equal')
            dim = dims.pop()
        elif dim is None:
            raise InvalidArgument('dimension', dim,
                                  'given for an all_effects set')
        self.kind = kind
        self.members = members
        self.dim = dim

    @classmethod
    def explicit(cls, members: Sequence[Observable]) -> 'ObservableSet':
        return cls('explicit', members)

    @classmethod
    def all_effects(cls, dim: int) -> 'ObservableSet':
        return cls('all_effects', dim=dim)

    def __repr__(self):
        return (f'<ObservableSet {self.kind} dim={self.dim} '
                f'members={len(self.members)}>')


persist.simple_serialization(ObservableSet)


def _pair(rho, sigma):
    rho = numkit.as_square(rho)
    sigma = numkit.as_square(sigma)
    if rho.shape != sigma.shape:
        raise InvalidArgument('state dimensions',
                              (rho.shape[0], sigma.shape[0]), 'equal')
    return rho, sigma


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    rho, sigma = _pair(rho, sigma)
    return .5 * numkit.trace_norm(rho - sigma)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Squared fidelity ``||sqrt(rho) sqrt(sigma)||_1^2``.

    Computed from the eigenvalues of ``sqrt(rho) sigma sqrt(rho)``, with
    tiny negative eigenvalues clamped to zero.
    """
    rho, sigma = _pair(rho, sigma)
    root = numkit.matrix_fn_psd(rho, 'sqrt')
    values = np.linalg.eigvalsh(numkit.check_hermitian(root @ sigma @ root,
                                                       tol=1e-8))
    value = float(np.sum(np.sqrt(np.clip(values, 0, None)))) ** 2
    return min(max(value, 0.), 1.)


def purified_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    return math.sqrt(min(max(1 - fidelity(rho, sigma), 0.), 1.))


def support_violation(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Weight of ``rho`` outside the support of ``sigma``."""
    rho, sigma = _pair(rho, sigma)
    values, vectors = numkit.eig_hermitian(sigma)
    kernel = vectors[:, values <= numkit.SUPPORT_CUTOFF * max(values[-1], 0.)]
    if kernel.shape[1] == 0:
        return 0.
    return float(np.trace(kernel.conj().T @ rho @ kernel).real)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Quantum relative entropy ``Tr rho (log rho - log sigma)`` in bits.

    :returns: A nonnegative number, or infinity when the support of ``rho``
        is not contained in that of ``sigma``.
    """
    rho, sigma = _pair(rho, sigma)
    if support_violation(rho, sigma) > SUPPORT_WEIGHT_TOL:
        return INF
    neg_entropy = -numkit.von_neumann_entropy(rho)
    cross = np.trace(rho @ numkit.matrix_fn_psd(sigma, 'log2')).real
    return max(float(neg_entropy - cross), 0.)


def renyi2_sandwiched(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Sandwiched Renyi-2 divergence ``log Tr(sigma^-1/2 rho sigma^-1/2 rho)``.

    :raises SingularReference: If ``sigma`` has an eigenvalue at or below
        ``SINGULAR_TOL``.
    """
    rho, sigma = _pair(rho, sigma)
    min_eig = numkit.min_eigenvalue(sigma)
    if min_eig <= SINGULAR_TOL:
        raise SingularReference(min_eig)
    inv_root = numkit.matrix_fn_psd(sigma, 'inv_sqrt')
    value = np.trace(inv_root @ rho @ inv_root @ rho).real
    return max(math.log2(value), 0.)


def binary_relative_entropy(x: float, y: float) -> float:
    """Relative entropy of the Bernoulli distributions ``(x, 1-x)`` and
    ``(y, 1-y)`` in bits; both arguments in the open unit interval."""
    for name, value in (('x', x), ('y', y)):
        if not 0 < value < 1:
            raise InvalidArgument(f'binary probability {name}', value,
                                  'in the open interval (0, 1)')
    return max(
        x * math.log2(x / y) + (1 - x) * math.log2((1 - x) / (1 - y)),
        0.
    )


def observable_distinguishability(rho: DensityMatrix,
                                  sigma: DensityMatrix,
                                  oset: ObservableSet,
                                  ) -> float:
    """Maximum expectation difference ``max_A |Tr A (rho - sigma)|``.

    For the set of all effects this is the trace distance.
    """
    rho, sigma = _pair(rho, sigma)
    if rho.shape[0] != oset.dim:
        raise InvalidArgument('state dimension', rho.shape[0],
                              f'{oset.dim} to match the observable set')
    if oset.kind == 'all_effects':
        return trace_distance(rho, sigma)
    diff = rho - sigma
    return max(abs(np.trace(a @ diff).real) for a in oset.members)


def observable_std_dev(a: Observable, rho: DensityMatrix) -> float:
    a, rho = _pair(a, rho)
    mean = np.trace(a @ rho).real
    centered = a - mean * np.eye(a.shape[0])
    return math.sqrt(max(np.trace(centered @ centered @ rho).real, 0.))


def expectation(a: Observable, rho: DensityMatrix) -> float:
    a, rho = _pair(a, rho)
    return float(np.trace(a @ rho).real)


def min_eigenvalue(rho: DensityMatrix) -> float:
    return numkit.min_eigenvalue(rho)


def log_fidelity_gap(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``S(rho||sigma) - log(1/F(rho, sigma))``, nonnegative in theory.

    Infinite when the relative entropy is; for orthogonal supports with
    zero fidelity the gap is reported as zero.
    """
    rel = relative_entropy(rho, sigma)
    fid = fidelity(rho, sigma)
    if fid == 0:
        return 0. if rel == INF else -INF
    return rel - math.log2(1 / fid)


def relent_continuity_quadratic(trace_dist: float, lambda_min: float) -> float:
    """Upper bound ``4 D^2 / lambda_min`` on ``S(rho||sigma)`` with
    ``D = D_tr(rho, sigma)`` and ``lambda_min`` the minimum eigenvalue of
    ``sigma``."""
    if not lambda_min > 0:
        raise InvalidArgument('minimum eigenvalue', lambda_min, 'positive')
    return 4 * trace_dist ** 2 / lambda_min


def relent_continuity_log(trace_dist: float,
                          lambda_min: float,
                          dim: int,
                          ) -> float:
    """Upper bound on ``S(rho||sigma)`` logarithmic in ``1/lambda_min``,
    valid for trace distance at most 1/2."""
    if not lambda_min > 0:
        raise InvalidArgument('minimum eigenvalue', lambda_min, 'positive')
    if not 0 <= trace_dist <= .5:
        raise InvalidArgument('trace distance', trace_dist, 'in [0, 1/2]')
    if trace_dist == 0:
        return 0.
    return (2 / math.log(2)) * trace_dist * (
        math.log2(dim)
        + math.log2(2 / trace_dist)
        + .5 * math.log2(1 / lambda_min)
    )
