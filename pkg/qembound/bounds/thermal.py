"""Thermodynamic sampling bounds for noise relaxing toward a Gibbs state.

When the noise is a Markovian semigroup with a Gibbs fixed point, the
relative entropy of the noisy state to the Gibbs state equals ``beta``
times its nonequilibrium free energy gap. The relative entropy route of the
general bound then turns the free energy gap into a sample cost, which
grows exponentially with time at a rate set by the entropic relaxation
constant ``alpha_ent``, the minimum ratio of entropy production rate to
``beta`` times the free energy gap.

Thermodynamic quantities use natural logarithms (nats, energy units);
information quantities handed to the general bound are in bits.
"""

import math
import logging
from typing import Optional

import numpy as np
import scipy.special

from qembound import channels
from qembound import divergences
from qembound import numkit
from qembound.bounds.core import AccuracyTarget, BoundReport, thm1_scalar
from qembound.channels import LiouvillianSpec
from qembound.numkit import DensityMatrix, InvalidArgument, QEMError


logger = logging.getLogger(__name__)

SINGULAR_TOL: float = 1e-12
MIN_FREE_ENERGY_GAP: float = 1e-10


class SingularState(QEMError, ValueError):
    """A state must be full rank for its logarithm to be finite."""

    def __init__(self, min_eigenvalue: float):
        super().__init__(
            f'state not full rank: minimum eigenvalue {min_eigenvalue:.3e}'
        )
        self.min_eigenvalue = min_eigenvalue


def free_energy(rho: DensityMatrix, h, beta: float) -> float:
    """Nonequilibrium free energy ``Tr(rho H) - S(rho) / beta``, entropy in
    nats."""
    rho = numkit.check_state(rho)
    h = numkit.check_observable(h)
    if rho.shape != h.shape:
        raise InvalidArgument('Hamiltonian dimension', h.shape[0],
                              str(rho.shape[0]))
    energy = np.trace(rho @ h).real
    return float(energy - numkit.von_neumann_entropy(rho, base=math.e) / beta)


def equilibrium_free_energy(h, beta: float) -> float:
    """``-ln Tr exp(-beta H) / beta``."""
    energies = np.linalg.eigvalsh(numkit.check_observable(h))
    return float(-scipy.special.logsumexp(-beta * energies) / beta)


def free_energy_gap(rho: DensityMatrix, l: LiouvillianSpec) -> float:
    return free_energy(rho, l.hamiltonian, l.beta) - equilibrium_free_energy(
        l.hamiltonian, l.beta
    )


def entropy_production_rate(tau: DensityMatrix, l: LiouvillianSpec) -> float:
    """``-Tr[L(tau) ln tau] - beta Tr[L(tau) H]`` in nats per unit time.

    Equals the negative time derivative of the relative entropy of the
    evolving state to the Gibbs state; nonnegative for every generator
    with that Gibbs fixed point.

    :raises SingularState: If ``tau`` is not full rank.
    """
    tau = numkit.check_state(tau)
    min_eig = numkit.min_eigenvalue(tau)
    if min_eig <= SINGULAR_TOL:
        raise SingularState(min_eig)
    flow = l(tau)
    return float(
        -np.trace(flow @ numkit.matrix_fn_psd(tau, 'ln')).real
        - l.beta * np.trace(flow @ l.hamiltonian).real
    )


def relaxation_ratio(tau: DensityMatrix, l: LiouvillianSpec) -> Optional[float]:
    """Entropy production rate over ``beta`` times the free energy gap, or
    None if the gap is below ``MIN_FREE_ENERGY_GAP``."""
    gap_nats = divergences.relative_entropy(tau, l.gibbs) * math.log(2)
    if gap_nats < MIN_FREE_ENERGY_GAP:
        return None
    return entropy_production_rate(tau, l) / gap_nats


class AlphaEntEstimate:
    """An upper estimate of the entropic relaxation constant."""

    def __init__(self, value: float, witness: Optional[DensityMatrix],
                 samples: int, refine_steps: int):
        self.value = value
        self.witness = witness
        self.samples = samples
        self.refine_steps = refine_steps

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return (f'<AlphaEntEstimate value={self.value:.8g} '
                f'samples={self.samples}>')


def _start_state(l: LiouvillianSpec, rng: np.random.Generator) -> DensityMatrix:
    # half plain Wishart states, half blends close to the Gibbs state
    state = numkit.random_state(l.dim, 'full_rank', rng)
    weight = math.exp(rng.uniform(math.log(1e-3), 0.))
    if rng.random() < .5:
        return state
    return weight * state + (1 - weight) * l.gibbs


def alpha_ent_estimate(l: LiouvillianSpec,
                       samples: int = 400,
                       rng: numkit.RandomLike = None,
                       refine_steps: int = 20,
                       ) -> AlphaEntEstimate:
    """Estimate ``alpha_ent`` by minimizing the relaxation ratio.

    Each sample starts from a full-rank state drawn from its own derived
    generator (half of them blended toward the Gibbs state) and is refined
    by accepting random convex moves that lower the ratio. The result can
    only overestimate the true minimum; under a fixed seed, a larger sample
    budget never increases it.

    :param samples: Number of starting states, positive.
    :param refine_steps: Refinement proposals per starting state.
    """
    if samples < 1:
        raise InvalidArgument('sample budget', samples, 'positive')
    seed = numkit.draw_seed(rng)
    best = math.inf
    witness = None
    for i in range(samples):
        sample_rng = numkit.derive_rng(seed, i)
        state = _start_state(l, sample_rng)
        ratio = relaxation_ratio(state, l)
        current = math.inf if ratio is None else ratio
        step = .2
        for k in range(refine_steps):
            direction = numkit.random_state(l.dim, 'full_rank', sample_rng)
            proposal = (1 - step) * state + step * direction
            if sample_rng.random() < .5:
                proposal = (1 - step) * state + step * l.gibbs
            ratio = relaxation_ratio(proposal, l)
            if ratio is not None and ratio < current:
                state, current = proposal, ratio
            else:
                step *= .7
        if current < best:
            best, witness = current, state
    logger.info('alpha_ent estimate %.8g from %d samples', best, samples)
    return AlphaEntEstimate(best, witness, samples, refine_steps)


def evolve(rho0: DensityMatrix, l: LiouvillianSpec, t: float) -> DensityMatrix:
    return channels.semigroup_step(l, t)(numkit.check_state(rho0))


def thermal_sample_bound(rho0: DensityMatrix,
                         l: LiouvillianSpec,
                         t: float,
                         target: AccuracyTarget,
                         ) -> BoundReport:
    """Sample bound after thermalizing noise acts for time ``t``.

    Evolves the input under the semigroup and applies the relative entropy
    route of the general bound with ``S = beta (F(rho_t) - F_eq) / ln 2``.
    The free energy gap is reported in the details.
    """
    rho_t = evolve(rho0, l, t)
    rel_bits = divergences.relative_entropy(rho_t, l.gibbs)
    scalar = thm1_scalar(target.epsilon, relative_entropy=rel_bits)
    return BoundReport(
        'thermal', scalar.value,
        inputs={'t': t, 'beta': l.beta, 'epsilon': target.epsilon},
        flags=scalar.flags,
        details={
            'free_energy_gap': free_energy_gap(rho_t, l),
            'relative_entropy': rel_bits,
        },
    )
