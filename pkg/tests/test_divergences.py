
import sys
import os
import math

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))
import qembound.channels
import qembound.divergences
import qembound.numkit
from qembound.divergences import ObservableSet, SingularReference
from qembound.numkit import InvalidArgument
from qembound.util import INF


ZERO = qembound.numkit.ket_state('0')
ONE = qembound.numkit.ket_state('1')
PLUS = qembound.numkit.ket_state('+')
MIXED = qembound.numkit.maximally_mixed(2)
Z = qembound.numkit.pauli('Z')


def random_pairs(dim, count, seed):
    rng = np.random.default_rng(seed)
    return [
        (qembound.numkit.random_state(dim, 'full_rank', rng),
         qembound.numkit.random_state(dim, 'full_rank', rng))
        for i in range(count)
    ]


@pytest.mark.parametrize('rho, sigma, value', [
    (ZERO, ONE, 1),
    (ZERO, ZERO, 0),
    (ZERO, MIXED, .5),
])
def test_trace_distance(rho, sigma, value):
    assert qembound.divergences.trace_distance(rho, sigma) == pytest.approx(
        value, abs=1e-12
    )


def test_trace_distance_dims():
    with pytest.raises(InvalidArgument):
        qembound.divergences.trace_distance(ZERO, np.eye(4) / 4)


@pytest.mark.parametrize('rho, sigma, fid, purified', [
    (PLUS, PLUS, 1, 0),
    (ZERO, ONE, 0, 1),
    (ZERO, MIXED, .5, 1 / math.sqrt(2)),
])
def test_fidelity(rho, sigma, fid, purified):
    assert qembound.divergences.fidelity(rho, sigma) == pytest.approx(
        fid, abs=1e-9
    )
    assert qembound.divergences.purified_distance(rho, sigma) == pytest.approx(
        purified, abs=1e-6
    )


@pytest.mark.parametrize('dim', [2, 4])
def test_fidelity_symmetric(dim):
    for rho, sigma in random_pairs(dim, 10, dim):
        assert qembound.divergences.fidelity(rho, sigma) == pytest.approx(
            qembound.divergences.fidelity(sigma, rho), abs=1e-9
        )


def test_fidelity_commuting_diagonals():
    rho = np.diag([.8, .2])
    sigma = np.diag([.2, .8])
    assert qembound.divergences.fidelity(rho, sigma) == pytest.approx(.64)


@pytest.mark.parametrize('rho, sigma, value', [
    (PLUS, PLUS, 0),
    (ZERO, MIXED, 1),
    (MIXED, ZERO, INF),
])
def test_relative_entropy(rho, sigma, value):
    assert qembound.divergences.relative_entropy(rho, sigma) == pytest.approx(
        value, abs=1e-10
    )


def test_renyi2_values():
    assert qembound.divergences.renyi2_sandwiched(ZERO, MIXED) == pytest.approx(1)
    rho = qembound.numkit.random_state(3, rng=7)
    assert qembound.divergences.renyi2_sandwiched(rho, rho) == pytest.approx(
        0, abs=1e-10
    )


@pytest.mark.parametrize('dim', [2, 4, 8])
def test_renyi2_dominates(dim):
    for rho, sigma in random_pairs(dim, 20, 100 + dim):
        assert (qembound.divergences.renyi2_sandwiched(rho, sigma)
                >= qembound.divergences.relative_entropy(rho, sigma) - 1e-8)


def test_renyi2_singular():
    with pytest.raises(SingularReference) as excinfo:
        qembound.divergences.renyi2_sandwiched(MIXED, ZERO)
    assert excinfo.value.min_eigenvalue == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize('x, y, value', [
    (.5, .5, 0),
    (.5, .25, .5 + .5 * math.log2(2 / 3)),
])
def test_binary_relative_entropy(x, y, value):
    assert qembound.divergences.binary_relative_entropy(x, y) == pytest.approx(
        value, abs=1e-12
    )


def test_binary_relative_entropy_value():
    assert qembound.divergences.binary_relative_entropy(.5, .25) == \
        pytest.approx(.2075, abs=1e-4)


def test_binary_relative_entropy_positive():
    grid = np.linspace(.05, .95, 10)
    for x in grid:
        for y in grid:
            if x != y:
                assert qembound.divergences.binary_relative_entropy(x, y) > 0


@pytest.mark.parametrize('x, y', [(0, .5), (.5, 1), (1.2, .5)])
def test_binary_relative_entropy_domain(x, y):
    with pytest.raises(InvalidArgument):
        qembound.divergences.binary_relative_entropy(x, y)


def test_observable_distinguishability():
    zset = ObservableSet.explicit([Z])
    assert qembound.divergences.observable_distinguishability(
        ZERO, ONE, zset
    ) == pytest.approx(2)
    assert qembound.divergences.observable_distinguishability(
        PLUS, PLUS, zset
    ) == pytest.approx(0)
    effects = ObservableSet.all_effects(2)
    assert qembound.divergences.observable_distinguishability(
        ZERO, MIXED, effects
    ) == pytest.approx(.5)


def test_observable_distinguishability_dims():
    with pytest.raises(InvalidArgument):
        qembound.divergences.observable_distinguishability(
            ZERO, ONE, ObservableSet.all_effects(4)
        )


def test_observable_set_invalid():
    with pytest.raises(InvalidArgument):
        ObservableSet.explicit([])
    with pytest.raises(InvalidArgument):
        ObservableSet('all_effects')
    with pytest.raises(InvalidArgument):
        ObservableSet.explicit([Z, np.eye(4)])


@pytest.mark.parametrize('rho, value', [(ZERO, 0), (MIXED, 1), (PLUS, 1)])
def test_std_dev(rho, value):
    assert qembound.divergences.observable_std_dev(Z, rho) == pytest.approx(
        value, abs=1e-12
    )


def test_min_eigenvalue_depolarized():
    noisy = qembound.channels.make_depolarizing(.4)(ZERO)
    assert qembound.divergences.min_eigenvalue(noisy) == pytest.approx(.2)
    assert qembound.divergences.min_eigenvalue(MIXED) == pytest.approx(.5)


@pytest.mark.parametrize('dim', [2, 4, 8])
def test_fuchs_van_de_graaf_and_pinsker(dim):
    for rho, sigma in random_pairs(dim, 20, dim):
        fid = qembound.divergences.fidelity(rho, sigma)
        dist = qembound.divergences.trace_distance(rho, sigma)
        rel = qembound.divergences.relative_entropy(rho, sigma)
        assert 1 - math.sqrt(fid) - 1e-9 <= dist <= math.sqrt(1 - fid) + 1e-9
        assert dist <= math.sqrt(math.log(2) / 2 * rel) + 1e-9
        assert fid >= (1 - dist) ** 2 - 1e-9
        assert qembound.divergences.log_fidelity_gap(rho, sigma) >= -1e-8


def test_product_additivity():
    (r1, s1), (r2, s2) = random_pairs(2, 2, 55)
    prod_r, prod_s = np.kron(r1, r2), np.kron(s1, s2)
    assert qembound.divergences.fidelity(prod_r, prod_s) == pytest.approx(
        qembound.divergences.fidelity(r1, s1)
        * qembound.divergences.fidelity(r2, s2), abs=1e-8
    )
    assert qembound.divergences.relative_entropy(prod_r, prod_s) == \
        pytest.approx(qembound.divergences.relative_entropy(r1, s1)
                      + qembound.divergences.relative_entropy(r2, s2), abs=1e-8)


def test_log_fidelity_gap_orthogonal():
    assert qembound.divergences.log_fidelity_gap(ZERO, ONE) == 0


def test_continuity_bounds():
    rho, sigma = random_pairs(4, 1, 3)[0]
    dist = qembound.divergences.trace_distance(rho, sigma)
    lam = qembound.divergences.min_eigenvalue(sigma)
    rel = qembound.divergences.relative_entropy(rho, sigma)
    assert rel <= qembound.divergences.relent_continuity_quadratic(dist, lam)
    if dist <= .5:
        assert rel <= qembound.divergences.relent_continuity_log(dist, lam, 4)


def test_continuity_invalid():
    with pytest.raises(InvalidArgument):
        qembound.divergences.relent_continuity_quadratic(.1, 0)
    with pytest.raises(InvalidArgument):
        qembound.divergences.relent_continuity_log(.6, .1, 2)
    assert qembound.divergences.relent_continuity_log(0, .1, 2) == 0
