"""
关联矩阵与期望值

测量设置为半波片角度 θ，对应可观测量 ℓ̂_θ = σ̂_z cos2θ + σ̂_x sin2θ
"""

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from config import HERMITIAN_TOL
from witness.common.exceptions import ValidationError
from witness.common.operator_core import Operator, hadamard, identity, pauli, tensor
from witness.qubit.states import TwoQubitState


@dataclass(frozen=True)
class MeasurementSetting:
    """半波片角度（弧度），规范化到 [0, π)"""

    theta: float

    def __post_init__(self):
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise ValidationError(f"角度必须是有限实数: {self.theta!r}")
        canonical = theta % math.pi
        # 浮点取模可能恰好得到 π
        if canonical >= math.pi:
            canonical = 0.0
        object.__setattr__(self, "theta", canonical)


def as_setting(value) -> MeasurementSetting:
    if isinstance(value, MeasurementSetting):
        return value
    return MeasurementSetting(value)


def angle_observable(setting) -> Operator:
    """ℓ̂_θ = σ̂_z cos2θ + σ̂_x sin2θ"""
    theta = as_setting(setting).theta
    return pauli("z") * math.cos(2 * theta) + pauli("x") * math.sin(2 * theta)


def setting_basis(setting) -> Operator:
    """
    ℓ̂_θ 的本征基

    第 0 列为本征值 −1 的本征向量，第 1 列为 +1 的本征向量；θ = 0 时为单位阵，
    与计算基 (|0⟩, |1⟩) 的次序一致
    """
    theta = as_setting(setting).theta
    c, s = math.cos(theta), math.sin(theta)
    return Operator(2, [[c, s], [-s, c]])


@dataclass(frozen=True)
class CorrelationMatrix:
    """p[i][j] = 子系统 a 结果 i、子系统 b 结果 j 的联合概率"""

    p: Tuple[Tuple[float, float], Tuple[float, float]]
    basis_a: str = "original"
    basis_b: str = "original"

    def as_array(self) -> np.ndarray:
        return np.array(self.p, dtype=float)

    def marginal_a(self) -> np.ndarray:
        return self.as_array().sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.as_array().sum(axis=0)

    def to_dict(self) -> Dict:
        return {
            "basis_a": self.basis_a,
            "basis_b": self.basis_b,
            "p": [list(row) for row in self.p],
        }


def _require_unitary_qubit(u: Operator, name: str):
    if u.dim != 2:
        raise ValidationError(f"{name} 必须是 2 维算符")
    if not u.is_unitary():
        raise ValidationError(f"{name} 不是幺正算符")


def rotate_state(state: TwoQubitState, ua: Operator, ub: Operator) -> TwoQubitState:
    """(Ua⊗Ub)† ρ (Ua⊗Ub)"""
    _require_unitary_qubit(ua, "Ua")
    _require_unitary_qubit(ub, "Ub")
    u = tensor(ua, ub)
    return TwoQubitState(u.dagger() @ state.rho @ u)


def correlation_matrix(
    state: TwoQubitState,
    ua: Operator,
    ub: Operator,
    basis_a: str = "custom",
    basis_b: str = "custom",
) -> CorrelationMatrix:
    """p[i][j] = ⟨ij| (Ua⊗Ub)† ρ (Ua⊗Ub) |ij⟩"""
    _require_unitary_qubit(ua, "Ua")
    _require_unitary_qubit(ub, "Ub")
    u = tensor(ua, ub).entries
    rotated = u.conj().T @ state.rho.entries @ u
    diag = np.real(np.diag(rotated))
    # 舍入可能产生 −1e−17 量级的负值，+0.0 同时消除 −0.0
    diag = np.where(np.abs(diag) < 1e-15, 0.0, diag) + 0.0
    if np.min(diag) < -HERMITIAN_TOL:
        raise ValidationError(f"出现负概率: {diag.min()!r}")
    p = np.clip(diag, 0.0, None).reshape(2, 2)
    return CorrelationMatrix(
        p=((float(p[0, 0]), float(p[0, 1])), (float(p[1, 0]), float(p[1, 1]))),
        basis_a=basis_a,
        basis_b=basis_b,
    )


NAMED_BASES = {
    "original": identity,
    "hadamard": hadamard,
}


def named_basis(name: str) -> Operator:
    try:
        return NAMED_BASES[name]()
    except KeyError:
        raise ValidationError(
            f"未知基: {name!r}，可选 {sorted(NAMED_BASES)}"
        ) from None


def correlation_matrix_named(
    state: TwoQubitState, basis_a: str = "original", basis_b: str = "original"
) -> CorrelationMatrix:
    return correlation_matrix(
        state, named_basis(basis_a), named_basis(basis_b), basis_a, basis_b
    )


def expectation(state: TwoQubitState, obs: Operator) -> float:
    """tr(ρ·Ô)，要求 Ô 厄米"""
    if obs.dim != 4:
        raise ValidationError(f"可观测量维数应为 4，实际为 {obs.dim}")
    if not obs.is_hermitian():
        raise ValidationError("可观测量不是厄米算符")
    value = (state.rho @ obs).trace()
    if abs(value.imag) > HERMITIAN_TOL * (1.0 + abs(value.real)):
        raise ValidationError(f"期望值虚部过大: {value.imag!r}")
    return float(value.real)


def correlation(state: TwoQubitState, theta_a, theta_b) -> float:
    """⟨ℓ̂_{θa} ⊗ ℓ̂_{θb}⟩"""
    return expectation(state, tensor(angle_observable(theta_a), angle_observable(theta_b)))


def zx_correlation_tensor(state: TwoQubitState) -> np.ndarray:
    """
    z–x 平面内的关联张量 T，T[i][j] = ⟨σ̂_i ⊗ σ̂_j⟩，i, j ∈ (z, x)

    ⟨ℓ̂_α ⊗ ℓ̂_β⟩ = n(α)ᵀ T n(β)，n(θ) = (cos2θ, sin2θ)
    """
    axes = ("z", "x")
    t = np.empty((2, 2))
    for i, ai in enumerate(axes):
        for j, bj in enumerate(axes):
            t[i, j] = expectation(state, tensor(pauli(ai), pauli(bj)))
    return t
