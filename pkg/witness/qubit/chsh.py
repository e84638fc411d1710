"""
CHSH 算符与判据

B̂ = â₁⊗b̂₁ − â₁⊗b̂₂ + â₂⊗b̂₁ + â₂⊗b̂₂
可分态 |⟨B̂⟩| ≤ 2，任意量子态 |⟨B̂⟩| ≤ 2√2 (Tsirelson 界)
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import TSIRELSON_SLACK
from witness.common.exceptions import TsirelsonViolationError, ValidationError
from witness.common.operator_core import Operator, commutator, identity, tensor
from witness.qubit.correlations import (
    MeasurementSetting,
    angle_observable,
    as_setting,
    correlation,
    zx_correlation_tensor,
)
from witness.qubit.states import TwoQubitState

logger = logging.getLogger(__name__)

CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

VERDICT_VERIFIED = "entanglement-verified"
VERDICT_INCONCLUSIVE = "inconclusive"
VERDICT_TSIRELSON_ERROR = "tsirelson-violation-error"

# 最优设置（绿色）与经典饱和设置（黄色）
GREEN_SETTINGS = (0.0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)
YELLOW_SETTINGS = (0.0, math.pi / 4, 0.0, math.pi / 2)

# 关联的次序：a1b1, a1b2, a2b1, a2b2
CHSH_SIGNS = (1.0, -1.0, 1.0, 1.0)


@dataclass(frozen=True)
class ChshResult:
    """CHSH 判据的计算结果"""

    correlations: Tuple[float, float, float, float]
    value: float
    settings: Tuple[MeasurementSetting, ...]
    verdict: str
    verdict_margin: float = 0.0
    std_error: Optional[float] = None

    def to_dict(self) -> Dict:
        data = {
            "correlations": list(self.correlations),
            "value": self.value,
            "settings_rad": [s.theta for s in self.settings],
            "verdict": self.verdict,
            "verdict_margin": self.verdict_margin,
        }
        if self.std_error is not None:
            data["std_error"] = self.std_error
        return data


def normalize_settings(settings: Sequence) -> Tuple[MeasurementSetting, ...]:
    if len(settings) != 4:
        raise ValidationError(f"CHSH 需要 4 个测量设置 (a1, a2, b1, b2)，实际 {len(settings)} 个")
    return tuple(as_setting(s) for s in settings)


def setting_pairs(settings: Sequence) -> List[Tuple[MeasurementSetting, MeasurementSetting]]:
    """按 a1b1, a1b2, a2b1, a2b2 排列的设置对"""
    a1, a2, b1, b2 = normalize_settings(settings)
    return [(a1, b1), (a1, b2), (a2, b1), (a2, b2)]


def combine(correlations: Sequence[float]) -> float:
    return abs(sum(sign * e for sign, e in zip(CHSH_SIGNS, correlations)))


def chsh_operator(a1, a2, b1, b2) -> Operator:
    """由四个波片角度构造 B̂"""
    oa1, oa2 = angle_observable(a1), angle_observable(a2)
    ob1, ob2 = angle_observable(b1), angle_observable(b2)
    return (
        tensor(oa1, ob1)
        - tensor(oa1, ob2)
        + tensor(oa2, ob1)
        + tensor(oa2, ob2)
    )


def chsh_identity_residual(a1, a2, b1, b2) -> float:
    """‖B̂² − 4𝟙 − [â₁,â₂]⊗[b̂₁,b̂₂]‖_max"""
    b = chsh_operator(a1, a2, b1, b2)
    comm_a = commutator(angle_observable(a1), angle_observable(a2))
    comm_b = commutator(angle_observable(b1), angle_observable(b2))
    expected = identity(4) * 4.0 + tensor(comm_a, comm_b)
    return (b @ b).max_abs_diff(expected)


def classify(value: float, margin: float) -> str:
    if value > CLASSICAL_BOUND + margin:
        return VERDICT_VERIFIED
    return VERDICT_INCONCLUSIVE


def chsh_evaluate(
    state: TwoQubitState, settings: Sequence, verdict_margin: float = 0.0
) -> ChshResult:
    """精确计算 |⟨B̂⟩| 并给出判定"""
    if verdict_margin < 0:
        raise ValidationError(f"verdict_margin 必须非负: {verdict_margin}")
    normalized = normalize_settings(settings)
    correlations = tuple(
        correlation(state, sa, sb) for sa, sb in setting_pairs(normalized)
    )
    value = combine(correlations)
    if value > TSIRELSON_BOUND + TSIRELSON_SLACK:
        logger.error(f"❌ CHSH 值 {value!r} 超过 Tsirelson 界")
        raise TsirelsonViolationError(value)
    return ChshResult(
        correlations=correlations,
        value=value,
        settings=normalized,
        verdict=classify(value, verdict_margin),
        verdict_margin=verdict_margin,
    )


def chsh_scan(
    state: TwoQubitState, theta_a, grid: Sequence[float]
) -> List[Tuple[float, float]]:
    """固定 θ_a 扫描 θ_b，返回 [(θ_b, ⟨ℓ̂_{θa}⊗ℓ̂_{θb}⟩)]"""
    if len(grid) == 0:
        raise ValidationError("θ_b 网格不能为空")
    setting_a = as_setting(theta_a)
    return [(float(tb), correlation(state, setting_a, tb)) for tb in grid]


def _unit_vectors(angles: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(2 * angles), np.sin(2 * angles)], axis=1)


def chsh_max_over_grid(
    state: TwoQubitState, points: int = 16
) -> Tuple[float, Tuple[float, float, float, float]]:
    """
    在 [0, π) 等分网格上穷举四元组设置，返回最大 |⟨B̂⟩| 及对应设置

    只做网格搜索，不做几何最优构造
    """
    if points < 2:
        raise ValidationError(f"网格点数必须 ≥ 2: {points}")
    angles = np.arange(points) * math.pi / points
    n = _unit_vectors(angles)
    e = n @ zx_correlation_tensor(state) @ n.T  # e[a, b]

    # diff[a, b1, b2] = E(a,b1) − E(a,b2)，summ 同理
    diff = e[:, :, None] - e[:, None, :]
    summ = e[:, :, None] + e[:, None, :]
    positive = diff.max(axis=0) + summ.max(axis=0)
    negative = -(diff.min(axis=0) + summ.min(axis=0))
    best = np.maximum(positive, negative)
    b1, b2 = np.unravel_index(int(np.argmax(best)), best.shape)
    if positive[b1, b2] >= negative[b1, b2]:
        a1 = int(np.argmax(diff[:, b1, b2]))
        a2 = int(np.argmax(summ[:, b1, b2]))
    else:
        a1 = int(np.argmin(diff[:, b1, b2]))
        a2 = int(np.argmin(summ[:, b1, b2]))
    settings = (angles[a1], angles[a2], angles[b1], angles[b2])
    return float(best[b1, b2]), tuple(float(s) for s in settings)


def chsh_values(state: TwoQubitState, settings: np.ndarray) -> np.ndarray:
    """
    批量计算 |⟨B̂⟩|

    settings 形状为 (k, 4)，每行 (a1, a2, b1, b2)；关联由 z–x 关联张量给出
    """
    settings = np.asarray(settings, dtype=float)
    if settings.ndim != 2 or settings.shape[1] != 4:
        raise ValidationError(f"settings 形状应为 (k, 4)，实际 {settings.shape}")
    t = zx_correlation_tensor(state)
    n = [_unit_vectors(settings[:, k]) for k in range(4)]

    def corr(i: int, j: int) -> np.ndarray:
        return np.einsum("ki,ij,kj->k", n[i], t, n[j])

    signed = corr(0, 2) - corr(0, 3) + corr(1, 2) + corr(1, 3)
    return np.abs(signed)
