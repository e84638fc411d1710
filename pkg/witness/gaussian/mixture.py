"""
乘积高斯混合（可分连续变量态）

ρ = Σ_i w_i ρ_a^(i) ⊗ ρ_b^(i)，每个子系综内两子系统为独立高斯分布，
且每个子系统各自满足 Δx·Δp ≥ ℏ/2
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np
import pandas as pd

from config import DENSITY_TOL, HBAR_DEFAULT
from witness.common.exceptions import ValidationError
from witness.common.random_source import stream_generator
from witness.gaussian.spdc import ADMISSIBILITY_TOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProductComponent:
    """
    一个子系综

    means = (x_a, x_b, p_a, p_b)，widths = (Δx_a, Δp_a, Δx_b, Δp_b)
    """

    weight: float
    means: Tuple[float, float, float, float]
    widths: Tuple[float, float, float, float]

    def heisenberg_products(self) -> Tuple[float, float]:
        dxa, dpa, dxb, dpb = self.widths
        return dxa * dpa, dxb * dpb


@dataclass(frozen=True)
class ProductMixture:
    components: Tuple[ProductComponent, ...]
    hbar: float = HBAR_DEFAULT

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValidationError("混合至少需要一个分量")
        weights = [c.weight for c in self.components]
        if any(not 0.0 <= w <= 1.0 for w in weights):
            raise ValidationError(f"权重必须在 [0, 1] 内: {weights}")
        if abs(sum(weights) - 1.0) > DENSITY_TOL:
            raise ValidationError(f"权重之和为 {sum(weights)!r}，应为 1")
        floor = (self.hbar / 2) * (1 - ADMISSIBILITY_TOL)
        for i, component in enumerate(self.components):
            if len(component.means) != 4 or len(component.widths) != 4:
                raise ValidationError(f"分量 {i} 的均值与宽度都需要 4 个数")
            if any(not w > 0 for w in component.widths):
                raise ValidationError(f"分量 {i} 的宽度必须为正: {component.widths}")
            for side, product in zip("ab", component.heisenberg_products()):
                if product < floor:
                    raise ValidationError(
                        f"分量 {i} 的子系统 {side} 违反 Heisenberg 关系: Δx·Δp = {product!r}"
                    )

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])


@dataclass(frozen=True)
class MixtureEstimate:
    """采样得到的 Δx₋、Δp₊ 及其标准误差"""

    dxm: float
    dpp: float
    dxm_error: float
    dpp_error: float
    n: int

    @property
    def product(self) -> float:
        return self.dxm * self.dpp

    @property
    def product_error(self) -> float:
        return self.product * math.hypot(self.dxm_error / self.dxm, self.dpp_error / self.dpp)

    def to_dict(self) -> Dict:
        return {
            "dxm": self.dxm,
            "dpp": self.dpp,
            "product": self.product,
            "std_error": self.product_error,
            "n": self.n,
        }


def mixture_moments(mixture: ProductMixture) -> Tuple[float, float]:
    """
    精确的 (Δx₋, Δp₊)

    Δx₋² = Σ w_i (Δx_{a,i}² + Δx_{b,i}²)/2 + Σ w_i ⟨x₋⟩_i² − (Σ w_i ⟨x₋⟩_i)²，Δp₊ 同理
    """
    w = mixture.weights
    means = np.array([c.means for c in mixture.components], dtype=float)
    widths = np.array([c.widths for c in mixture.components], dtype=float)
    x_minus = (means[:, 0] - means[:, 1]) / math.sqrt(2)
    p_plus = (means[:, 2] + means[:, 3]) / math.sqrt(2)

    var_x = np.sum(w * (widths[:, 0] ** 2 + widths[:, 2] ** 2) / 2)
    var_x += np.sum(w * x_minus ** 2) - np.sum(w * x_minus) ** 2
    var_p = np.sum(w * (widths[:, 1] ** 2 + widths[:, 3] ** 2) / 2)
    var_p += np.sum(w * p_plus ** 2) - np.sum(w * p_plus) ** 2
    return math.sqrt(var_x), math.sqrt(var_p)


def std_with_error(values: np.ndarray) -> Tuple[float, float]:
    """无偏样本标准差及其标准误差（含四阶矩修正）"""
    n = values.size
    if n < 2:
        raise ValidationError(f"至少需要 2 个样本: {n}")
    centered = values - values.mean()
    var = float(centered @ centered) / (n - 1)
    std = math.sqrt(var)
    m4 = float(np.mean(centered ** 4))
    var_of_var = max(m4 - var ** 2 * (n - 3) / (n - 1), 0.0) / n
    error = math.sqrt(var_of_var) / (2 * std) if std > 0 else 0.0
    return std, error


def draw_mixture(mixture: ProductMixture, n: int, seed: int, stream: int = 0) -> pd.DataFrame:
    """按权重抽取分量，再对每个子系统独立抽取高斯样本；列为 xa, xb, pa, pb"""
    if n < 2:
        raise ValidationError(f"样本数必须 ≥ 2: {n}")
    rng = stream_generator(seed, stream)
    cumulative = np.cumsum(mixture.weights)
    cumulative[-1] = 1.0
    index = np.searchsorted(cumulative, rng.random(n), side="right")
    means = np.array([c.means for c in mixture.components], dtype=float)[index]
    widths = np.array([c.widths for c in mixture.components], dtype=float)[index]
    noise = rng.standard_normal((n, 4))
    # widths 次序 (Δx_a, Δp_a, Δx_b, Δp_b) → 列次序 (xa, xb, pa, pb)
    scale = widths[:, [0, 2, 1, 3]]
    samples = means + scale * noise
    return pd.DataFrame(samples, columns=["xa", "xb", "pa", "pb"])


def mix_of_products(
    components: Sequence[ProductComponent],
    n: int,
    seed: int,
    hbar: float = HBAR_DEFAULT,
    stream: int = 0,
) -> MixtureEstimate:
    """采样乘积高斯混合并估计 Δx₋、Δp₊"""
    mixture = ProductMixture(tuple(components), hbar)
    logger.debug(f"采样乘积高斯混合: 分量数={len(mixture.components)}, n={n}, seed={seed}, stream={stream}")
    samples = draw_mixture(mixture, n, seed, stream)
    x_minus = (samples["xa"].to_numpy() - samples["xb"].to_numpy()) / math.sqrt(2)
    p_plus = (samples["pa"].to_numpy() + samples["pb"].to_numpy()) / math.sqrt(2)
    dxm, dxm_error = std_with_error(x_minus)
    dpp, dpp_error = std_with_error(p_plus)
    return MixtureEstimate(dxm, dpp, dxm_error, dpp_error, n)


def random_admissible_mixture(
    rng: np.random.Generator,
    max_components: int = 4,
    hbar: float = HBAR_DEFAULT,
    mean_scale: float = 1.0,
) -> ProductMixture:
    """随机生成满足单子系统 Heisenberg 关系的乘积高斯混合"""
    count = int(rng.integers(1, max_components + 1))
    raw = rng.random(count) + 1e-3
    weights = raw / raw.sum()
    weights[-1] = 1.0 - weights[:-1].sum()

    components = []
    for w in weights:
        dx_a, dx_b = np.exp(rng.uniform(-1.0, 1.0, size=2)) * math.sqrt(hbar / 2)
        # Δp ≥ ℏ/(2Δx)，超出部分随机
        dp_a = hbar / (2 * dx_a) * (1 + rng.exponential(0.5))
        dp_b = hbar / (2 * dx_b) * (1 + rng.exponential(0.5))
        means = tuple(float(m) for m in rng.normal(0.0, mean_scale * math.sqrt(hbar), size=4))
        components.append(
            ProductComponent(float(w), means, (float(dx_a), float(dp_a), float(dx_b), float(dp_b)))
        )
    return ProductMixture(tuple(components), hbar)
