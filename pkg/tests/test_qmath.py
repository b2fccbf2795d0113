import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcrypt_lab import qmath
from qcrypt_lab.qmath import (PAULI_X, DensityOperator, FiniteDistribution, PovmSet, PureState,
                              apply_unitary, controlled_unitary, dilate_povm, ket, measure_povm,
                              partial_trace, projector, random_density, random_povm, random_pure,
                              random_unitary, relative_entropy, tensor, trace_distance)

from .oracles import partial_trace_loops

PLUS = np.array([1, 1]) / math.sqrt(2)


class TestTypes:
    def test_pure_state_rejects_bad_norm(self):
        with pytest.raises(ValueError):
            PureState([1.0, 1.0])

    def test_density_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            DensityOperator([[0.5, 0.1], [0.0, 0.5]])

    def test_density_rejects_negative(self):
        with pytest.raises(ValueError):
            DensityOperator(np.diag([1.5, -0.5]))

    def test_povm_must_sum_to_identity(self):
        with pytest.raises(ValueError):
            PovmSet((np.eye(2), np.eye(2)))

    def test_distribution_checks(self):
        with pytest.raises(ValueError):
            FiniteDistribution([0.5, 0.6])
        with pytest.raises(ValueError):
            FiniteDistribution([1.2, -0.2])

    def test_unitary_check(self):
        with pytest.raises(ValueError):
            qmath.UnitaryOp(np.array([[1, 1], [0, 1]]))


class TestTensorAndTrace:
    def test_basis_product(self):
        s = tensor(PureState(ket(0, 2)), PureState(ket(0, 2)))
        assert s.dim == 4 and abs(s.amplitudes[0] - 1) < 1e-15

    def test_maximally_mixed_product(self):
        r = tensor(DensityOperator.maximally_mixed(2), DensityOperator.maximally_mixed(2))
        np.testing.assert_allclose(r.matrix, np.eye(4) / 4)

    def test_mixed_kinds_rejected(self):
        with pytest.raises(TypeError):
            tensor(PureState(ket(0, 2)), DensityOperator.maximally_mixed(2))

    def test_bell_reduction(self):
        bell = (ket(0, 4) + ket(3, 4)) / math.sqrt(2)
        red = partial_trace(DensityOperator.from_pure(bell), [2, 2], [0])
        np.testing.assert_allclose(red.matrix, np.eye(2) / 2, atol=1e-15)

    def test_keep_all_is_identity(self):
        rho = random_density(4, np.random.default_rng(0))
        np.testing.assert_allclose(partial_trace(rho, [2, 2], [0, 1]), rho)

    def test_weighted_bell_reduction(self):
        a, b = math.sqrt(0.8), math.sqrt(0.2)
        psi = a * ket(0, 4) + b * ket(3, 4)
        red = partial_trace(projector(psi), [2, 2], [0])
        np.testing.assert_allclose(red, np.diag([0.8, 0.2]), atol=1e-15)

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(1)
        for dA, dB in [(2, 3), (3, 2), (2, 2)]:
            rho = random_density(dA * dB, rng)
            np.testing.assert_allclose(partial_trace(rho, [dA, dB], [0]),
                                       partial_trace_loops(rho, dA, dB, True), atol=1e-13)
            np.testing.assert_allclose(partial_trace(rho, [dA, dB], [1]),
                                       partial_trace_loops(rho, dA, dB, False), atol=1e-13)

    def test_round_trip(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            r, s = random_density(2, rng), random_density(3, rng)
            np.testing.assert_allclose(partial_trace(np.kron(r, s), [2, 3], [0]), r, atol=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, [2, 3], [0])


class TestMeasurement:
    def test_plus_in_computational_basis(self):
        dist, post = measure_povm(projector(PLUS), PovmSet.computational(2))
        np.testing.assert_allclose(dist.probs, [0.5, 0.5])
        np.testing.assert_allclose(post[0].matrix, projector(ket(0, 2)), atol=1e-15)

    def test_ghz_xxx_product(self):
        ghz = (ket(0, 8) - ket(7, 8)) / math.sqrt(2)
        w, v = np.linalg.eigh(np.kron(np.kron(PAULI_X, PAULI_X), PAULI_X))
        minus = v[:, w < 0] @ v[:, w < 0].conj().T
        dist, _ = measure_povm(projector(ghz), [minus, np.eye(8) - minus])
        assert dist.probs[0] == pytest.approx(1.0, abs=1e-12)

    def test_trivial_povm(self):
        rho = random_density(3, np.random.default_rng(3))
        dist, post = measure_povm(rho, [np.eye(3)])
        assert dist.probs[0] == pytest.approx(1.0)
        np.testing.assert_allclose(post[0].matrix, rho, atol=1e-12)

    def test_impossible_outcome_has_no_post_state(self):
        _, post = measure_povm(projector(ket(0, 2)), PovmSet.computational(2))
        assert post[1] is None

    def test_dilation_projective(self):
        rng = np.random.default_rng(4)
        basis = PovmSet.from_basis(random_unitary(2, rng).T)
        rho = random_density(2, rng)
        u, proj = dilate_povm(basis)
        anc0 = np.kron(projector(ket(0, 2)), rho)
        dist, _ = measure_povm(apply_unitary(anc0, u), proj)
        np.testing.assert_allclose(dist.probs, measure_povm(rho, basis)[0].probs, atol=1e-12)

    def test_dilation_random_povms(self):
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(100):
            povm = random_povm(2, 3, rng)
            rho = random_density(2, rng)
            u, proj = dilate_povm(povm)
            big = np.kron(projector(ket(0, 3)), rho)
            d1 = measure_povm(apply_unitary(big, u), proj)[0].probs
            d2 = measure_povm(rho, povm)[0].probs
            worst = max(worst, np.abs(d1 - d2).max())
        assert worst < 1e-8

    def test_deferred_measurement(self):
        """Measuring then correcting equals a controlled unitary on a copy."""
        rng = np.random.default_rng(6)
        for _ in range(100):
            rho = random_density(2, rng)
            us = [random_unitary(2, rng) for _ in range(2)]
            final = PovmSet.from_basis(random_unitary(2, rng).T)
            direct = np.zeros(2)
            dist, post = measure_povm(rho, PovmSet.computational(2))
            mixture = np.zeros((2, 2), dtype=complex)
            for k in range(2):
                if post[k] is None:
                    continue
                out = apply_unitary(post[k], us[k])
                mixture += dist.probs[k] * out.matrix
                direct += dist.probs[k] * measure_povm(out, final)[0].probs
            # copy the qubit into an ancilla (first factor), then control on it
            copy = np.kron(np.eye(2), projector(ket(0, 2))) + np.kron(PAULI_X, projector(ket(1, 2)))
            big = apply_unitary(np.kron(projector(ket(0, 2)), rho), copy)
            big = apply_unitary(big, controlled_unitary(us))
            sys_state = partial_trace(big, [2, 2], [1])
            np.testing.assert_allclose(sys_state, mixture, atol=1e-9)
            np.testing.assert_allclose(measure_povm(sys_state, final)[0].probs, direct, atol=1e-9)


class TestDistances:
    def test_basic_values(self):
        z0, z1 = projector(ket(0, 2)), projector(ket(1, 2))
        assert trace_distance(z0, z0) == 0.0
        assert trace_distance(z0, z1) == pytest.approx(1.0)
        assert trace_distance(z0, projector(PLUS)) == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_classical(self):
        assert trace_distance(FiniteDistribution([0.5, 0.5]), FiniteDistribution([1.0, 0.0])) == 0.5

    def test_metric(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a, b, c = (random_density(3, rng) for _ in range(3))
            assert trace_distance(a, b) == trace_distance(b, a)
            assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-9

    def test_monotone_under_partial_trace(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            a, b = random_density(4, rng), random_density(4, rng)
            ra, rb = partial_trace(a, [2, 2], [0]), partial_trace(b, [2, 2], [0])
            assert trace_distance(ra, rb) <= trace_distance(a, b) + 1e-9

    def test_relative_entropy_values(self):
        rho = random_density(3, np.random.default_rng(9))
        assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-9)
        assert relative_entropy(projector(ket(0, 2)), np.eye(2) / 2) == pytest.approx(1.0)
        assert relative_entropy(np.eye(2) / 2, projector(ket(0, 2))) == math.inf

    def test_relative_entropy_classical(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            p, q = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
            expect = float(np.sum(p * np.log2(p / q)))
            assert relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(expect, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_pure_is_normalized(seed):
    v = random_pure(5, np.random.default_rng(seed))
    assert abs(np.vdot(v, v).real - 1) < 1e-12
