import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from witness.common.exceptions import ValidationError
from witness.common.operator_core import (
    Operator,
    hadamard,
    identity,
    partial_trace,
    pauli,
    tensor,
)
from witness.qubit.correlations import (
    MeasurementSetting,
    angle_observable,
    correlation_matrix,
    correlation_matrix_named,
    expectation,
    rotate_state,
    setting_basis,
)
from witness.qubit.ppt import SEPARABLE, ppt_oracle
from witness.qubit.states import (
    SeparableEnsemble,
    TwoQubitState,
    assemble,
    classical_correlated,
    classical_ensemble,
    from_selector,
    ket_projector,
    maximally_mixed,
    random_density_matrix,
    sample_separable,
    werner_state,
)


class TestNamedStates:
    def test_phi_plus_entries(self, phi_plus):
        expected = np.zeros((4, 4))
        for i in (0, 3):
            for j in (0, 3):
                expected[i, j] = 0.5
        assert np.array_equal(phi_plus.rho.entries, expected)
        assert phi_plus.purity() == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("over", ["a", "b"])
    def test_phi_plus_locally_mixed(self, phi_plus, over):
        assert partial_trace(phi_plus.rho, over).allclose(identity(2) / 2)

    def test_classical(self, rho_cl):
        assert_allclose(rho_cl.rho.entries, np.diag([0.5, 0, 0, 0.5]))
        assert rho_cl.purity() == pytest.approx(0.5)
        assert ppt_oracle(rho_cl) == SEPARABLE

    def test_werner_endpoints(self, phi_plus):
        assert werner_state(1.0).rho.allclose(phi_plus.rho, atol=1e-15)
        assert werner_state(0.0).rho.allclose(maximally_mixed().rho, atol=1e-15)
        with pytest.raises(ValidationError):
            werner_state(1.5)

    def test_selector(self, phi_plus):
        assert from_selector("phi_plus").rho.allclose(phi_plus.rho)
        assert from_selector("werner", [0.5]).purity() < 1
        with pytest.raises(ValidationError):
            from_selector("ghz")
        with pytest.raises(ValidationError):
            from_selector("werner")

    def test_rejects_non_density(self):
        with pytest.raises(ValidationError):
            TwoQubitState.from_array(np.diag([0.9, 0, 0, 0]))
        with pytest.raises(ValidationError):
            TwoQubitState.from_array(np.diag([1.5, -0.5, 0, 0]))
        with pytest.raises(ValidationError):
            TwoQubitState(identity(2))


class TestEnsembles:
    def test_maximally_mixed_product(self):
        half = identity(2) / 2
        state = assemble(SeparableEnsemble((1.0,), ((half, half),)))
        assert state.rho.allclose(identity(4) / 4, atol=1e-15)

    def test_classical_decomposition(self, rho_cl):
        assert assemble(classical_ensemble()).rho.allclose(rho_cl.rho, atol=1e-15)

    def test_bad_weights(self):
        half = identity(2) / 2
        with pytest.raises(ValidationError):
            SeparableEnsemble((0.7,), ((half, half),))
        with pytest.raises(ValidationError):
            SeparableEnsemble((1.2, -0.2), ((half, half), (half, half)))

    def test_bad_factor(self):
        with pytest.raises(ValidationError):
            SeparableEnsemble((1.0,), ((identity(2), identity(2) / 2),))

    def test_single_pure_term_is_pure(self):
        pure = ket_projector(1, 0)
        state = assemble(SeparableEnsemble((1.0,), ((pure, ket_projector(0, 1)),)))
        assert state.purity() == pytest.approx(1.0)

    def test_sampled_single_pure_term(self):
        for stream in range(20):
            state = assemble(sample_separable(13, 1, stream=stream, pure=True))
            assert state.purity() == pytest.approx(1.0, abs=1e-12)

    def test_sampled_single_mixed_term(self):
        for stream in range(20):
            state = assemble(sample_separable(13, 1, stream=stream, pure=False))
            assert state.purity() < 1.0 - 1e-9

    def test_sampling_deterministic(self):
        first = assemble(sample_separable(7, 3, stream=2))
        second = assemble(sample_separable(7, 3, stream=2))
        other = assemble(sample_separable(7, 3, stream=3))
        assert np.array_equal(first.rho.entries, second.rho.entries)
        assert not np.array_equal(first.rho.entries, other.rho.entries)

    def test_sampled_states_are_ppt(self):
        for stream in range(100):
            state = assemble(sample_separable(11, 1 + stream % 5, stream=stream))
            assert state.spectrum().is_density_spectrum()
            assert ppt_oracle(state) == SEPARABLE

    def test_rejects_zero_terms(self):
        with pytest.raises(ValidationError):
            sample_separable(1, 0)


class TestAngleObservable:
    def test_named_angles(self):
        assert angle_observable(0.0).allclose(pauli("z"), atol=1e-15)
        assert angle_observable(math.pi / 4).allclose(pauli("x"), atol=1e-15)

    def test_sum_and_difference(self):
        plus = angle_observable(math.pi / 8) + angle_observable(3 * math.pi / 8)
        minus = angle_observable(math.pi / 8) - angle_observable(3 * math.pi / 8)
        assert plus.allclose(pauli("x") * math.sqrt(2), atol=1e-12)
        assert minus.allclose(pauli("z") * math.sqrt(2), atol=1e-12)

    def test_involution(self, rng):
        for theta in rng.uniform(-10, 10, size=100):
            obs = angle_observable(theta)
            assert obs.is_hermitian()
            assert obs.is_involution()

    def test_canonical_range(self):
        assert MeasurementSetting(math.pi).theta == pytest.approx(0.0)
        assert MeasurementSetting(-math.pi / 4).theta == pytest.approx(3 * math.pi / 4)
        with pytest.raises(ValidationError):
            MeasurementSetting(float("nan"))

    def test_setting_basis_eigenvectors(self, rng):
        for theta in rng.uniform(0, math.pi, size=20):
            u = setting_basis(theta).entries
            obs = angle_observable(theta).entries
            assert_allclose(u.conj().T @ obs @ u, np.diag([-1, 1]), atol=1e-12)
        assert setting_basis(0.0).allclose(identity(2), atol=0)


class TestCorrelationMatrix:
    def test_original_basis_identical(self, phi_plus, rho_cl):
        bell = correlation_matrix_named(phi_plus)
        classical = correlation_matrix_named(rho_cl)
        assert bell.p == ((0.5, 0.0), (0.0, 0.5))
        assert bell.p == classical.p

    def test_classical_hadamard_uniform(self, rho_cl):
        matrix = correlation_matrix_named(rho_cl, "hadamard", "hadamard")
        assert_allclose(matrix.as_array(), np.full((2, 2), 0.25), atol=1e-12)

    def test_bell_hadamard_keeps_correlation(self, phi_plus):
        matrix = correlation_matrix_named(phi_plus, "hadamard", "hadamard")
        assert_allclose(matrix.as_array(), [[0.5, 0], [0, 0.5]], atol=1e-12)

    def test_marginals_match_reduced_state(self, rng):
        for _ in range(20):
            state = random_density_matrix(rng)
            matrix = correlation_matrix(state, hadamard(), identity(2))
            reduced_a = hadamard() @ partial_trace(state.rho, "b") @ hadamard()
            reduced_b = partial_trace(state.rho, "a")
            assert_allclose(matrix.marginal_a(), np.diag(reduced_a.entries).real, atol=1e-12)
            assert_allclose(matrix.marginal_b(), np.diag(reduced_b.entries).real, atol=1e-12)
            assert matrix.as_array().sum() == pytest.approx(1.0, abs=1e-12)

    def test_non_unitary_basis(self, phi_plus):
        with pytest.raises(ValidationError):
            correlation_matrix(phi_plus, identity(2) * 2, identity(2))

    def test_unknown_basis(self, phi_plus):
        with pytest.raises(ValidationError):
            correlation_matrix_named(phi_plus, "circular")

    def test_to_dict(self, phi_plus):
        assert correlation_matrix_named(phi_plus).to_dict() == {
            "basis_a": "original",
            "basis_b": "original",
            "p": [[0.5, 0.0], [0.0, 0.5]],
        }


class TestExpectation:
    def test_bell_zz_and_xx(self, phi_plus):
        assert expectation(phi_plus, tensor(pauli("z"), pauli("z"))) == pytest.approx(1.0)
        assert expectation(phi_plus, tensor(pauli("x"), pauli("x"))) == pytest.approx(1.0)

    def test_classical_xx(self, rho_cl):
        assert expectation(rho_cl, tensor(pauli("x"), pauli("x"))) == pytest.approx(0.0, abs=1e-15)

    def test_non_hermitian_observable(self, phi_plus):
        with pytest.raises(ValidationError):
            expectation(phi_plus, Operator(4, np.triu(np.ones((4, 4)))))

    def test_hadamard_rotation_equivalence(self, rng):
        zz = tensor(pauli("z"), pauli("z"))
        xx = tensor(pauli("x"), pauli("x"))
        for _ in range(20):
            state = random_density_matrix(rng)
            rotated = rotate_state(state, hadamard(), hadamard())
            assert expectation(rotated, zz) == pytest.approx(expectation(state, xx), abs=1e-12)
