"""
EPR-Reid 判据

可分态满足 Δx₋·Δp₊ ≥ ℏ/2；观测到 Δx₋·Δp₊ < ℏ/2 即证实纠缠
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional

from config import STAT_MARGIN_SIGMAS
from witness.common.exceptions import ValidationError
from witness.gaussian.mixture import MixtureEstimate
from witness.gaussian.spdc import GaussianJointState

VERDICT_VERIFIED = "entanglement-verified"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class EprReidResult:
    dxm: float
    dpp: float
    product: float
    bound: float
    verdict: str
    std_error: Optional[float] = None

    def to_dict(self) -> Dict:
        data = {
            "dxm": self.dxm,
            "dpp": self.dpp,
            "product": self.product,
            "bound": self.bound,
            "verdict": self.verdict,
        }
        if self.std_error is not None:
            data["std_error"] = self.std_error
        return data


def reid_verdict(product: float, bound: float, margin: float = 0.0) -> str:
    if product < bound * (1 - margin):
        return VERDICT_VERIFIED
    return VERDICT_INCONCLUSIVE


def evaluate_product(
    dxm: float,
    dpp: float,
    hbar: float,
    margin: float = 0.0,
    std_error: Optional[float] = None,
) -> EprReidResult:
    """由 Δx₋、Δp₊ 的（估计）值给出判定"""
    if margin < 0:
        raise ValidationError(f"margin 必须非负: {margin}")
    product = dxm * dpp
    if product < 0:
        raise ValidationError(f"Δx₋·Δp₊ 不能为负: {product!r}")
    bound = hbar / 2
    return EprReidResult(
        dxm=dxm,
        dpp=dpp,
        product=product,
        bound=bound,
        verdict=reid_verdict(product, bound, margin),
        std_error=std_error,
    )


def epr_reid(state: GaussianJointState, margin: float = 0.0) -> EprReidResult:
    """闭式判定：product = Δx₋·Δp₊，product < (ℏ/2)(1 − margin) 时证实纠缠"""
    return evaluate_product(state.dxm, state.dpp, state.hbar, margin)


def bound_margin(n: int, margin_sigmas: float) -> float:
    """
    统计判定的相对裕度

    以乘积恰在 ℏ/2 时的标准误差 (ℏ/2)/√(n − 1) 为准，而非样本自身的误差估计
    """
    if n < 2:
        raise ValidationError(f"样本数必须 ≥ 2: {n}")
    return margin_sigmas / math.sqrt(n - 1)


def evaluate_mixture(
    estimate: MixtureEstimate, hbar: float, margin_sigmas: float = STAT_MARGIN_SIGMAS
) -> EprReidResult:
    """乘积高斯混合的采样估计；非高斯混合的误差可能更大，取两者中较大的裕度"""
    bound = hbar / 2
    margin = max(
        bound_margin(estimate.n, margin_sigmas),
        margin_sigmas * estimate.product_error / bound,
    )
    return evaluate_product(
        estimate.dxm, estimate.dpp, hbar, margin=margin, std_error=estimate.product_error
    )
