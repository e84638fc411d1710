"""
两量子比特测量的有限统计模拟

每组设置从精确联合分布中独立抽取 n 次结果（逆 CDF 抽样），
计数表格次序为 (++, +−, −+, −−)，'+' 指 ℓ̂_θ 的本征值 +1
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from config import STAT_MARGIN_SIGMAS, TSIRELSON_SLACK
from witness.common.exceptions import ValidationError
from witness.common.random_source import stream_generator
from witness.qubit.chsh import (
    TSIRELSON_BOUND,
    VERDICT_TSIRELSON_ERROR,
    ChshResult,
    classify,
    combine,
    normalize_settings,
    setting_pairs,
)
from witness.qubit.correlations import (
    MeasurementSetting,
    as_setting,
    correlation_matrix,
    setting_basis,
)
from witness.qubit.states import TwoQubitState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CountTable:
    counts: Tuple[Tuple[int, int], Tuple[int, int]]
    n_total: int
    theta_a: MeasurementSetting
    theta_b: MeasurementSetting

    def __post_init__(self):
        total = sum(sum(row) for row in self.counts)
        if total != self.n_total:
            raise ValidationError(f"计数之和 {total} 与 n_total={self.n_total} 不一致")
        if any(c < 0 for row in self.counts for c in row):
            raise ValidationError("计数必须非负")

    def to_dict(self) -> Dict:
        return {
            "counts": [list(row) for row in self.counts],
            "n": self.n_total,
            "theta_a": self.theta_a.theta,
            "theta_b": self.theta_b.theta,
        }


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n: int

    def to_dict(self) -> Dict:
        return {"mean": self.mean, "std_error": self.std_error, "n": self.n}


def outcome_probabilities(state: TwoQubitState, theta_a, theta_b) -> np.ndarray:
    """(++, +−, −+, −−) 的精确概率"""
    cm = correlation_matrix(state, setting_basis(theta_a), setting_basis(theta_b))
    p = cm.as_array()
    # 本征基第 0 列对应 −1，第 1 列对应 +1
    return np.array([p[1, 1], p[1, 0], p[0, 1], p[0, 0]])


def sample_discrete(
    state: TwoQubitState, theta_a, theta_b, n: int, seed: int, stream: int = 0
) -> CountTable:
    """从 ℓ̂_{θa}、ℓ̂_{θb} 本征基下的联合分布中抽取 n 次结果"""
    if n < 1:
        raise ValidationError(f"样本数必须 ≥ 1: {n}")
    setting_a, setting_b = as_setting(theta_a), as_setting(theta_b)
    probabilities = outcome_probabilities(state, setting_a, setting_b)
    cumulative = np.cumsum(probabilities)
    cumulative[-1] = 1.0
    rng = stream_generator(seed, stream)
    draws = np.searchsorted(cumulative, rng.random(n), side="right")
    cells = np.bincount(draws, minlength=4)
    return CountTable(
        counts=((int(cells[0]), int(cells[1])), (int(cells[2]), int(cells[3]))),
        n_total=n,
        theta_a=setting_a,
        theta_b=setting_b,
    )


def estimate_correlation(table: CountTable) -> Estimate:
    """⟨â⊗b̂⟩ ≈ (N₊₊ + N₋₋ − N₊₋ − N₋₊)/N，标准误差 √((1 − mean²)/N)"""
    if table.n_total < 1:
        raise ValidationError("计数表为空")
    (npp, npm), (nmp, nmm) = table.counts
    mean = (npp + nmm - npm - nmp) / table.n_total
    std_error = math.sqrt(max(1.0 - mean ** 2, 0.0) / table.n_total)
    return Estimate(mean=mean, std_error=std_error, n=table.n_total)


def chsh_estimate(
    state: TwoQubitState,
    settings: Sequence,
    n_per_setting: int,
    seed: int,
    margin_sigmas: float = STAT_MARGIN_SIGMAS,
) -> ChshResult:
    """
    四组独立测量估计 |⟨B̂⟩|

    std_error 为代入估计的合成标准误差；判定裕度取其上界 2/√n 的 margin_sigmas 倍
    """
    if n_per_setting < 2:
        raise ValidationError(f"每组设置的样本数必须 ≥ 2: {n_per_setting}")
    normalized = normalize_settings(settings)
    estimates = [
        estimate_correlation(sample_discrete(state, sa, sb, n_per_setting, seed, stream=k))
        for k, (sa, sb) in enumerate(setting_pairs(normalized))
    ]
    correlations = tuple(e.mean for e in estimates)
    value = combine(correlations)
    std_error = math.sqrt(sum(e.std_error ** 2 for e in estimates))
    # 四个 ±1 关联的合成误差不超过 2/√n
    margin = margin_sigmas * 2.0 / math.sqrt(n_per_setting)

    if value - margin > TSIRELSON_BOUND + TSIRELSON_SLACK:
        logger.warning(f"⚠️  统计 CHSH 值 {value!r} 显著超过 Tsirelson 界")
        verdict = VERDICT_TSIRELSON_ERROR
    else:
        verdict = classify(value, margin)
    return ChshResult(
        correlations=correlations,
        value=value,
        settings=normalized,
        verdict=verdict,
        verdict_margin=margin,
        std_error=std_error,
    )
