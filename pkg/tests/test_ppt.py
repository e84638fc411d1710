import numpy as np
import pytest

from witness.common.exceptions import ValidationError
from witness.common.operator_core import partial_transpose
from witness.common.random_source import stream_generator
from witness.qubit.chsh import chsh_max_over_grid
from witness.qubit.ppt import (
    ENTANGLED,
    SEPARABLE,
    min_pt_eigenvalue,
    ppt_oracle,
    werner_ppt_boundary,
)
from witness.qubit.states import random_density_matrix, werner_state


class TestPptOracle:
    def test_bell_entangled(self, phi_plus):
        assert ppt_oracle(phi_plus) == ENTANGLED
        assert min_pt_eigenvalue(phi_plus) == pytest.approx(-0.5, abs=1e-12)

    def test_classical_separable(self, rho_cl):
        assert ppt_oracle(rho_cl) == SEPARABLE

    @pytest.mark.parametrize("p", [0.0, 0.2, 0.33, 0.34, 0.7, 1.0])
    def test_werner_min_eigenvalue(self, p):
        assert min_pt_eigenvalue(werner_state(p)) == pytest.approx((1 - 3 * p) / 4, abs=1e-12)

    def test_agrees_with_general_eigensolver(self, rng):
        for _ in range(50):
            state = random_density_matrix(rng)
            independent = np.linalg.eigvals(partial_transpose(state.rho).entries).real.min()
            assert min_pt_eigenvalue(state) == pytest.approx(independent, abs=1e-10)


class TestWernerBoundary:
    def test_one_third(self):
        assert werner_ppt_boundary() == pytest.approx(1 / 3, abs=1e-3)
        assert werner_ppt_boundary(step=1e-3) == pytest.approx(1 / 3, abs=1e-9)

    def test_no_sign_change(self):
        with pytest.raises(ValidationError):
            werner_ppt_boundary(lo=0.5, hi=1.0)


class TestOneWayImplication:
    def test_chsh_violation_implies_entangled(self):
        violating = 0
        for stream in range(300):
            state = random_density_matrix(stream_generator(31, stream))
            value, _ = chsh_max_over_grid(state, points=12)
            if value > 2 + 1e-6:
                violating += 1
                assert ppt_oracle(state) == ENTANGLED
        # 反向不成立：Werner p = 0.5 纠缠但不违背
        assert ppt_oracle(werner_state(0.5)) == ENTANGLED
        assert chsh_max_over_grid(werner_state(0.5))[0] <= 2.0

    @pytest.mark.slow
    def test_acceptance_size(self):
        for stream in range(10_000):
            state = random_density_matrix(stream_generator(2024, stream))
            value, _ = chsh_max_over_grid(state, points=16)
            if value > 2 + 1e-6:
                assert ppt_oracle(state) == ENTANGLED
