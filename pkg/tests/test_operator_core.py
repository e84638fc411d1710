import itertools
import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from witness.common.exceptions import ValidationError
from witness.common.operator_core import (
    Operator,
    commutator,
    eigendecomposition,
    eigenvalues_hermitian,
    hadamard,
    identity,
    operator_norm,
    partial_trace,
    partial_transpose,
    pauli,
    tensor,
    validate_density,
)
from witness.qubit.chsh import GREEN_SETTINGS, chsh_operator
from witness.qubit.states import bell_phi_plus, random_mixed_qubit

LEVI_CIVITA = {
    ("x", "y", "z"): 1,
    ("y", "z", "x"): 1,
    ("z", "x", "y"): 1,
    ("x", "z", "y"): -1,
    ("z", "y", "x"): -1,
    ("y", "x", "z"): -1,
}


class TestPauliAlgebra:
    @pytest.mark.parametrize("i,j", list(itertools.product("xyz", repeat=2)))
    def test_product_rule(self, i, j):
        expected = identity(2) * (1.0 if i == j else 0.0)
        for k in "xyz":
            eps = LEVI_CIVITA.get((i, j, k), 0)
            if eps:
                expected = expected + pauli(k) * (1j * eps)
        assert (pauli(i) @ pauli(j)).max_abs_diff(expected) <= 1e-15

    def test_commutators(self):
        assert commutator(pauli("x"), pauli("y")).allclose(pauli("z") * 2j, atol=1e-15)
        assert commutator(pauli("y"), pauli("z")).allclose(pauli("x") * 2j, atol=1e-15)
        assert commutator(pauli("z"), pauli("x")).allclose(pauli("y") * 2j, atol=1e-15)

    def test_z_sign_convention(self):
        assert_allclose(pauli("z").entries, np.diag([-1, 1]))

    def test_unknown_axis(self):
        with pytest.raises(ValidationError):
            pauli("w")

    def test_hadamard_is_hermitian_involution(self):
        u = hadamard()
        assert u.is_hermitian()
        assert u.is_unitary()
        assert u.is_involution()


class TestOperator:
    def test_immutable_entries(self):
        op = identity(2)
        with pytest.raises(ValueError):
            op.entries[0, 0] = 2

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValidationError):
            Operator(3, np.eye(3))
        with pytest.raises(ValidationError):
            Operator(2, np.eye(4))

    def test_hermitian_check(self):
        assert pauli("y").is_hermitian()
        assert not Operator(2, [[0, 1], [0, 0]]).is_hermitian()

    def test_json_round_trip_full_precision(self, rng):
        rho = random_mixed_qubit(rng)
        again = Operator.from_json(rho.to_json())
        assert np.array_equal(again.entries, rho.entries)

    def test_json_layout_row_major(self):
        data = json.loads(Operator(2, [[1, 2j], [3, 4]]).to_json())
        assert data == {"dim": 2, "re": [1.0, 0.0, 3.0, 4.0], "im": [0.0, 2.0, 0.0, 0.0]}

    def test_from_dict_wrong_size(self):
        with pytest.raises(ValidationError):
            Operator.from_dict({"dim": 2, "re": [1, 0, 0], "im": [0, 0, 0, 0]})


class TestTensorAndPartialTrace:
    def test_tensor_layout(self):
        # a 为左因子: |10⟩ 对应下标 2
        op = tensor(pauli("z"), identity(2))
        assert_allclose(np.diag(op.entries).real, [-1, -1, 1, 1])

    def test_tensor_requires_qubits(self):
        with pytest.raises(ValidationError):
            tensor(identity(4), identity(2))

    @pytest.mark.parametrize("over", ["a", "b"])
    def test_bell_reduced_state(self, over):
        assert partial_trace(bell_phi_plus().rho, over).allclose(identity(2) / 2, atol=1e-15)

    def test_product_state_factorizes(self, rng):
        for _ in range(20):
            rho_a, rho_b = random_mixed_qubit(rng), random_mixed_qubit(rng)
            product = tensor(rho_a, rho_b)
            assert partial_trace(product, "b").max_abs_diff(rho_a) <= 1e-15
            assert partial_trace(product, "a").max_abs_diff(rho_b) <= 1e-15

    def test_rejects_non_density(self):
        with pytest.raises(ValidationError):
            partial_trace(identity(4) * 0.3, "a")


class TestPartialTranspose:
    def test_diagonal_invariant(self):
        rho = Operator(4, np.diag([0.1, 0.2, 0.3, 0.4]))
        assert partial_transpose(rho).max_abs_diff(rho) == 0.0

    def test_involution(self, rng):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        op = Operator(4, g)
        for side in ("a", "b"):
            assert partial_transpose(partial_transpose(op, side), side).max_abs_diff(op) == 0.0

    def test_bell_min_eigenvalue(self):
        pt = partial_transpose(bell_phi_plus().rho)
        # 独立的非厄米本征值求解作为对照
        independent = np.linalg.eigvals(pt.entries).real.min()
        assert eigenvalues_hermitian(pt).min == pytest.approx(-0.5, abs=1e-12)
        assert independent == pytest.approx(-0.5, abs=1e-12)


class TestSpectrum:
    def test_pauli_z(self):
        assert eigenvalues_hermitian(pauli("z")).eigenvalues == pytest.approx((-1.0, 1.0))

    def test_identity(self):
        assert eigenvalues_hermitian(identity(4)).eigenvalues == pytest.approx((1, 1, 1, 1))

    def test_green_chsh_operator(self):
        values = eigenvalues_hermitian(chsh_operator(*GREEN_SETTINGS)).eigenvalues
        r = 2 * math.sqrt(2)
        assert values == pytest.approx((-r, 0.0, 0.0, r), abs=1e-12)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError):
            eigenvalues_hermitian(Operator(2, [[0, 1], [0, 0]]))

    def test_density_spectrum_bounds(self, rng):
        for _ in range(20):
            spectrum = validate_density(random_mixed_qubit(rng))
            assert spectrum.min >= -1e-12
            assert spectrum.max <= 1 + 1e-12
            assert sum(spectrum.eigenvalues) == pytest.approx(1.0, abs=1e-12)

    def test_decomposition_reconstructs(self, rng):
        for _ in range(200):
            g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            h = g + g.conj().T
            values, vectors = eigendecomposition(Operator(4, h))
            rebuilt = vectors @ np.diag(values) @ vectors.conj().T
            assert np.linalg.norm(h - rebuilt) <= 1e-12 * np.linalg.norm(h)
            assert list(values) == sorted(values)


class TestOperatorNorm:
    def test_pauli_x(self):
        assert operator_norm(pauli("x")) == pytest.approx(1.0)

    def test_commutator_saturates(self):
        assert operator_norm(commutator(pauli("x"), pauli("z"))) == pytest.approx(2.0)

    def test_chsh_square_bounded(self, rng):
        for row in rng.uniform(0, math.pi, size=(50, 4)):
            b = chsh_operator(*row)
            assert operator_norm(b @ b) <= 8 + 1e-9
