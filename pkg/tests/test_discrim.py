import math

import numpy as np
import pytest

from qcrypt_lab.discrim import (Ensemble, check_optimality, guess_probability, helstrom,
                                square_root_measurement)
from qcrypt_lab.qmath import ket, projector, random_density, random_povm, random_pure

from .oracles import helstrom_value

PLUS = np.array([1, 1]) / math.sqrt(2)
OT_VALUE = 0.5 * (1 + math.sqrt(3) / 2)


def ot_ensemble():
    q = ket(2, 3)
    return Ensemble.of([(ket(0, 3) + q) / math.sqrt(2), (ket(1, 3) + q) / math.sqrt(2)])


def test_always_guess_zero():
    ens = Ensemble.of([projector(ket(0, 2)), projector(PLUS)], [0.3, 0.7])
    assert guess_probability(ens, [np.eye(2), np.zeros((2, 2))]) == pytest.approx(0.3)


def test_orthogonal_pair_is_perfect():
    ens = Ensemble.of([ket(0, 2), ket(1, 2)])
    value, povm = helstrom(ens)
    assert value == pytest.approx(1.0)
    assert guess_probability(ens, povm) == pytest.approx(1.0)


def test_zero_vs_plus():
    value, povm = helstrom(Ensemble.of([ket(0, 2), PLUS]))
    assert value == pytest.approx(0.5 * (1 + 1 / math.sqrt(2)), abs=1e-12)


def test_identical_states_give_prior():
    rho = random_density(2, np.random.default_rng(0))
    value, _ = helstrom(Ensemble.of([rho, rho], [0.35, 0.65]))
    assert value == pytest.approx(0.65, abs=1e-12)


def test_ot_ensemble():
    value, povm = helstrom(ot_ensemble())
    assert value == pytest.approx(OT_VALUE, abs=1e-12)
    assert check_optimality(ot_ensemble(), povm)[0]
    assert guess_probability(ot_ensemble(), square_root_measurement(ot_ensemble())) == \
        pytest.approx(OT_VALUE, abs=1e-9)


def test_helstrom_needs_two_states():
    with pytest.raises(ValueError):
        helstrom(Ensemble.of([ket(0, 3), ket(1, 3), ket(2, 3)]))


def test_random_ensembles_against_oracle():
    rng = np.random.default_rng(1)
    for _ in range(500):
        r0, r1 = random_density(2, rng), random_density(2, rng)
        eta = rng.uniform(0.05, 0.95)
        ens = Ensemble.of([r0, r1], [eta, 1 - eta])
        value, povm = helstrom(ens)
        assert value == pytest.approx(helstrom_value(eta, r0, r1), abs=1e-9)
        assert guess_probability(ens, povm) == pytest.approx(value, abs=1e-9)
        assert check_optimality(ens, povm)[0]
        # no random measurement beats it
        assert guess_probability(ens, random_povm(2, 2, rng)) <= value + 1e-9


def test_srm_symmetric_pair_is_optimal():
    rng = np.random.default_rng(2)
    for _ in range(20):
        v = random_pure(2, rng)
        w = np.array([[0, 1], [1, 0]]) @ v
        ens = Ensemble.of([v, w])
        assert guess_probability(ens, square_root_measurement(ens)) == \
            pytest.approx(helstrom(ens)[0], abs=1e-9)


def test_srm_orthogonal_is_projective():
    ens = Ensemble.of([ket(0, 3), ket(1, 3), ket(2, 3)])
    povm = square_root_measurement(ens)
    assert guess_probability(ens, povm) == pytest.approx(1.0)
    for i, e in enumerate(povm.elements):
        np.testing.assert_allclose(e, projector(ket(i, 3)), atol=1e-12)


def test_srm_square_bound():
    """The SRM reaches at least the square of the optimum."""
    rng = np.random.default_rng(3)
    for _ in range(300):
        eta = rng.uniform(0.05, 0.95)
        ens = Ensemble.of([random_density(3, rng), random_density(3, rng)], [eta, 1 - eta])
        assert guess_probability(ens, square_root_measurement(ens)) >= helstrom(ens)[0] ** 2 - 1e-9


def test_srm_can_lose_to_blind_guess():
    """Identical states with a skewed prior: the SRM scores sum eta_i^2 < max eta_i."""
    ens = Ensemble.of([ket(0, 2), ket(0, 2)], [0.9, 0.1])
    assert guess_probability(ens, square_root_measurement(ens)) == pytest.approx(0.82)


def test_srm_handles_singular_sum():
    ens = Ensemble.of([ket(0, 3), PLUS.tolist() + [0]])
    povm = square_root_measurement(ens)
    np.testing.assert_allclose(sum(povm.elements), np.eye(3), atol=1e-9)


def test_degenerate_povm_not_optimal():
    ens = Ensemble.of([ket(0, 2), PLUS], [0.4, 0.6])
    ok, worst = check_optimality(ens, [np.eye(2), np.zeros((2, 2))])
    assert not ok and worst > 1e-3


def test_equal_priors_trace_distance():
    from qcrypt_lab.qmath import trace_distance

    rng = np.random.default_rng(4)
    r0, r1 = random_density(3, rng), random_density(3, rng)
    assert helstrom(Ensemble.of([r0, r1]))[0] == pytest.approx(0.5 * (1 + trace_distance(r0, r1)))
