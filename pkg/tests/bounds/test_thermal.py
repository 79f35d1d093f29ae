import sys
import os
import math

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))
import qembound.bounds.thermal
import qembound.channels
import qembound.divergences
import qembound.numkit
import qembound.util
from qembound.bounds.core import AccuracyTarget
from qembound.bounds.thermal import SingularState


H = .5 * qembound.numkit.pauli('Z')
GENERATOR = qembound.channels.thermal_generator(H, beta=1., rate=1.)
TARGET = AccuracyTarget(0, .1)


def full_rank_states(count, seed):
    rng = np.random.default_rng(seed)
    return [qembound.numkit.random_state(2, 'full_rank', rng)
            for i in range(count)]


def test_equilibrium_free_energy():
    gibbs = GENERATOR.gibbs
    assert qembound.bounds.thermal.free_energy(gibbs, H, 1.) == pytest.approx(
        qembound.bounds.thermal.equilibrium_free_energy(H, 1.), abs=1e-12
    )
    assert qembound.bounds.thermal.equilibrium_free_energy(H, 1.) == \
        pytest.approx(-math.log(2 * math.cosh(.5)))


def test_free_energy_pure():
    assert qembound.bounds.thermal.free_energy(
        qembound.numkit.ket_state('1'), qembound.numkit.pauli('Z'), 1.
    ) == pytest.approx(-1)


def test_free_energy_gap_is_relative_entropy():
    for tau in full_rank_states(20, 1):
        gap = qembound.bounds.thermal.free_energy_gap(tau, GENERATOR)
        rel_nats = qembound.divergences.relative_entropy(
            tau, GENERATOR.gibbs
        ) * math.log(2)
        assert GENERATOR.beta * gap == pytest.approx(rel_nats, abs=1e-8)
        assert gap >= -1e-9


def test_free_energy_dims():
    with pytest.raises(qembound.numkit.InvalidArgument):
        qembound.bounds.thermal.free_energy(np.eye(4) / 4, H, 1.)


def test_entropy_production_at_gibbs():
    assert qembound.bounds.thermal.entropy_production_rate(
        GENERATOR.gibbs, GENERATOR
    ) == pytest.approx(0, abs=1e-8)


def test_entropy_production_nonnegative():
    for tau in full_rank_states(100, 2):
        assert qembound.bounds.thermal.entropy_production_rate(
            tau, GENERATOR
        ) >= -1e-8


def test_entropy_production_finite_difference():
    step = 1e-6
    for tau in full_rank_states(5, 3):
        before = qembound.divergences.relative_entropy(tau, GENERATOR.gibbs)
        after = qembound.divergences.relative_entropy(
            qembound.bounds.thermal.evolve(tau, GENERATOR, step),
            GENERATOR.gibbs
        )
        derivative = (after - before) * math.log(2) / step
        assert -derivative == pytest.approx(
            qembound.bounds.thermal.entropy_production_rate(tau, GENERATOR),
            abs=1e-5
        )


def test_entropy_production_singular():
    with pytest.raises(SingularState):
        qembound.bounds.thermal.entropy_production_rate(
            qembound.numkit.ket_state('0'), GENERATOR
        )


def test_relaxation_ratio_at_gibbs():
    assert qembound.bounds.thermal.relaxation_ratio(
        GENERATOR.gibbs, GENERATOR
    ) is None


def test_alpha_ent_nonnegative():
    estimate = qembound.bounds.thermal.alpha_ent_estimate(GENERATOR, 50,
                                                          rng=4)
    assert estimate.value >= 0
    assert estimate.witness is not None
    assert qembound.bounds.thermal.relaxation_ratio(
        estimate.witness, GENERATOR
    ) == pytest.approx(estimate.value)


def test_alpha_ent_budget_monotone():
    small = qembound.bounds.thermal.alpha_ent_estimate(GENERATOR, 20, rng=9)
    large = qembound.bounds.thermal.alpha_ent_estimate(GENERATOR, 60, rng=9)
    assert large.value <= small.value


def test_alpha_ent_invalid_budget():
    with pytest.raises(qembound.numkit.InvalidArgument):
        qembound.bounds.thermal.alpha_ent_estimate(GENERATOR, 0)


def test_free_energy_trajectory_decay():
    alpha = qembound.bounds.thermal.alpha_ent_estimate(GENERATOR, 100,
                                                       rng=5).value
    rho0 = np.diag([.1, .9]).astype(complex)
    gap0 = qembound.bounds.thermal.free_energy_gap(rho0, GENERATOR)
    for t in np.linspace(0, 3, 13):
        rho_t = qembound.bounds.thermal.evolve(rho0, GENERATOR, t)
        gap_t = qembound.bounds.thermal.free_energy_gap(rho_t, GENERATOR)
        assert gap_t <= math.exp(-alpha * t) * gap0 + 1e-6


def test_thermal_bound_initial():
    report = qembound.bounds.thermal.thermal_sample_bound(
        qembound.numkit.ket_state('0'), GENERATOR, 0., TARGET
    )
    assert 0 < report.value < math.inf
    assert report.formula_id == 'thermal'
    assert report.details['free_energy_gap'] > 0


def test_thermal_bound_increasing():
    values = [qembound.bounds.thermal.thermal_sample_bound(
        qembound.numkit.ket_state('+'), GENERATOR, t, TARGET
    ).value for t in np.linspace(0, 4, 9)]
    assert all(a <= b * (1 + 1e-9) for a, b in zip(values[:-1], values[1:]))


def test_thermal_bound_negative_time():
    with pytest.raises(qembound.numkit.InvalidArgument):
        qembound.bounds.thermal.thermal_sample_bound(
            qembound.numkit.ket_state('0'), GENERATOR, -1., TARGET
        )


@pytest.mark.slow
def test_thermal_bound_growth_rate():
    alpha = qembound.bounds.thermal.alpha_ent_estimate(GENERATOR, 400,
                                                       rng=11).value
    grid = np.linspace(4, 8, 9)
    values = [qembound.bounds.thermal.thermal_sample_bound(
        qembound.numkit.ket_state('+'), GENERATOR, t, TARGET
    ).value for t in grid]
    slope = qembound.util.loglinear_slope(grid, values)
    assert slope == pytest.approx(alpha, rel=.1)
