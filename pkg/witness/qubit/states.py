"""
两量子比特态
Bell 态、经典关联态、Werner 族、可分系综的组装与随机采样
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import DENSITY_TOL
from witness.common.exceptions import ValidationError
from witness.common.operator_core import (
    Operator,
    Spectrum,
    identity,
    tensor,
    validate_density,
)
from witness.common.random_source import stream_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """4×4 密度矩阵：厄米、单位迹、半正定"""

    rho: Operator

    def __post_init__(self):
        if self.rho.dim != 4:
            raise ValidationError(f"两量子比特态需要 4 维密度矩阵，实际为 {self.rho.dim}")
        validate_density(self.rho)

    @classmethod
    def from_array(cls, arr) -> "TwoQubitState":
        return cls(Operator(4, arr))

    def purity(self) -> float:
        """tr(ρ²)"""
        return float((self.rho @ self.rho).trace().real)

    def spectrum(self) -> Spectrum:
        return validate_density(self.rho)


@dataclass(frozen=True, eq=False)
class SeparableEnsemble:
    """ρ = Σ_i w_i ρ_a^(i) ⊗ ρ_b^(i)"""

    weights: Tuple[float, ...]
    factors: Tuple[Tuple[Operator, Operator], ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "factors", tuple(tuple(pair) for pair in self.factors))
        if not self.weights:
            raise ValidationError("系综不能为空")
        if len(self.weights) != len(self.factors):
            raise ValidationError(
                f"权重数 {len(self.weights)} 与因子数 {len(self.factors)} 不一致"
            )
        for w in self.weights:
            if not 0.0 <= w <= 1.0:
                raise ValidationError(f"权重 {w!r} 不在 [0, 1] 内")
        if abs(sum(self.weights) - 1.0) > DENSITY_TOL:
            raise ValidationError(f"权重之和为 {sum(self.weights)!r}，应为 1")
        for rho_a, rho_b in self.factors:
            if rho_a.dim != 2 or rho_b.dim != 2:
                raise ValidationError("每个因子必须是 2 维密度矩阵")
            validate_density(rho_a)
            validate_density(rho_b)

    def __len__(self) -> int:
        return len(self.weights)


def ket_projector(*amplitudes: complex) -> Operator:
    vec = np.asarray(amplitudes, dtype=np.complex128)
    return Operator(len(vec), np.outer(vec, vec.conj()))


def bell_phi_plus() -> TwoQubitState:
    """|Φ⁺⟩ = (|11⟩ + |00⟩)/√2 的投影算符"""
    rho = np.zeros((4, 4))
    for i in (0, 3):
        for j in (0, 3):
            rho[i, j] = 0.5
    return TwoQubitState.from_array(rho)


def classical_correlated() -> TwoQubitState:
    """ρ_cl = (|11⟩⟨11| + |00⟩⟨00|)/2"""
    return TwoQubitState.from_array(np.diag([0.5, 0.0, 0.0, 0.5]))


def classical_ensemble() -> SeparableEnsemble:
    """ρ_cl 的两项可分分解"""
    ket0 = ket_projector(1, 0)
    ket1 = ket_projector(0, 1)
    return SeparableEnsemble((0.5, 0.5), ((ket1, ket1), (ket0, ket0)))


def maximally_mixed() -> TwoQubitState:
    return TwoQubitState(identity(4) / 4.0)


def werner_state(p: float) -> TwoQubitState:
    """Werner 族 p·|Φ⁺⟩⟨Φ⁺| + (1−p)·𝟙/4，p ∈ [0, 1]"""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"Werner 参数 p={p!r} 不在 [0, 1] 内")
    rho = p * bell_phi_plus().rho.entries + (1.0 - p) * np.eye(4) / 4.0
    return TwoQubitState.from_array(rho)


def assemble(ensemble: SeparableEnsemble) -> TwoQubitState:
    """组装可分态 ρ = Σ w_i ρ_a^(i) ⊗ ρ_b^(i)"""
    total = np.zeros((4, 4), dtype=np.complex128)
    for w, (rho_a, rho_b) in zip(ensemble.weights, ensemble.factors):
        total += w * tensor(rho_a, rho_b).entries
    return TwoQubitState.from_array(total)


def random_pure_qubit(rng: np.random.Generator) -> Operator:
    """Haar 随机纯态"""
    vec = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    vec /= np.linalg.norm(vec)
    return Operator(2, np.outer(vec, vec.conj()))


def _hilbert_schmidt(rng: np.random.Generator, dim: int) -> np.ndarray:
    ginibre = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = ginibre @ ginibre.conj().T
    rho = (rho + rho.conj().T) / 2.0
    return rho / np.trace(rho).real


def random_mixed_qubit(rng: np.random.Generator) -> Operator:
    """Hilbert-Schmidt 随机混态"""
    return Operator(2, _hilbert_schmidt(rng, 2))


def random_density_matrix(rng: np.random.Generator) -> TwoQubitState:
    """Hilbert-Schmidt 测度下的随机两量子比特态"""
    return TwoQubitState.from_array(_hilbert_schmidt(rng, 4))


def sample_separable(
    rng_seed: int, n_terms: int, stream: int = 0, pure: Optional[bool] = None
) -> SeparableEnsemble:
    """
    随机可分系综

    权重为归一化的均匀随机数；pure 为 None 时每一项以 1/2 概率取纯态乘积，否则取混态乘积，
    True / False 固定取纯态 / 混态乘积。相同参数给出相同系综
    """
    if n_terms < 1:
        raise ValidationError(f"n_terms 必须 ≥ 1: {n_terms}")
    rng = stream_generator(rng_seed, stream)
    logger.debug(f"采样可分系综: seed={rng_seed}, stream={stream}, n_terms={n_terms}")
    raw = rng.random(n_terms)
    weights = raw / raw.sum()
    # 归一化后残差放到最后一项
    weights[-1] = 1.0 - weights[:-1].sum()
    weights = np.clip(weights, 0.0, 1.0)

    factors: List[Tuple[Operator, Operator]] = []
    for _ in range(n_terms):
        use_pure = rng.random() < 0.5 if pure is None else pure
        if use_pure:
            factors.append((random_pure_qubit(rng), random_pure_qubit(rng)))
        else:
            factors.append((random_mixed_qubit(rng), random_mixed_qubit(rng)))
    return SeparableEnsemble(tuple(weights), tuple(factors))


def from_selector(name: str, params: Sequence[float] = ()) -> TwoQubitState:
    """按名称构造态：phi_plus / classical / werner / mixed"""
    if name == "phi_plus":
        return bell_phi_plus()
    if name == "classical":
        return classical_correlated()
    if name == "mixed":
        return maximally_mixed()
    if name == "werner":
        if len(params) != 1:
            raise ValidationError("werner 态需要一个参数 p")
        return werner_state(params[0])
    raise ValidationError(f"未知的态选择器: {name!r}")
