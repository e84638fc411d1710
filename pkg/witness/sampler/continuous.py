"""连续变量测量的有限统计模拟"""

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from config import STAT_MARGIN_SIGMAS
from witness.common.exceptions import ValidationError
from witness.common.random_source import stream_generator
from witness.gaussian.epr_reid import EprReidResult, bound_margin, evaluate_product
from witness.gaussian.spdc import GaussianJointState
from witness.sampler.discrete import Estimate

BASES = ("position", "momentum")


@dataclass(frozen=True)
class GaussianSample:
    """样本（列 ua, ub）及联合变量宽度的估计"""

    samples: pd.DataFrame
    estimate: Estimate
    basis: str


def sample_gaussian(
    state: GaussianJointState, basis: str, n: int, seed: int, stream: int = 0
) -> GaussianSample:
    """
    从精确联合高斯分布抽取 n 对样本

    位置基估计 Δ[(u_a − u_b)/√2]，动量基估计 Δ[(u_a + u_b)/√2]，均为无偏样本标准差
    """
    if basis not in BASES:
        raise ValidationError(f"未知测量基: {basis!r}，可选 {BASES}")
    if n < 2:
        raise ValidationError(f"样本数必须 ≥ 2: {n}")
    if basis == "position":
        d_plus, d_minus = state.dxp, state.dxm
    else:
        d_plus, d_minus = state.dpp, state.dpm

    rng = stream_generator(seed, stream)
    u_plus = d_plus * rng.standard_normal(n)
    u_minus = d_minus * rng.standard_normal(n)
    ua = (u_plus + u_minus) / math.sqrt(2)
    ub = (u_plus - u_minus) / math.sqrt(2)

    if basis == "position":
        joint = (ua - ub) / math.sqrt(2)
    else:
        joint = (ua + ub) / math.sqrt(2)
    std = float(np.std(joint, ddof=1))
    # 高斯数据样本标准差的标准误差
    std_error = std / math.sqrt(2 * (n - 1))
    return GaussianSample(
        samples=pd.DataFrame({"ua": ua, "ub": ub}),
        estimate=Estimate(mean=std, std_error=std_error, n=n),
        basis=basis,
    )


def epr_reid_sampled(
    state: GaussianJointState,
    n: int,
    seed: int,
    margin_sigmas: float = STAT_MARGIN_SIGMAS,
) -> EprReidResult:
    """
    位置基（流 0）与动量基（流 1）各测 n 次，统计判定 EPR-Reid

    std_error 为样本估计；判定裕度取乘积恰为 ℏ/2 时的误差
    """
    position = sample_gaussian(state, "position", n, seed, stream=0).estimate
    momentum = sample_gaussian(state, "momentum", n, seed, stream=1).estimate
    product = position.mean * momentum.mean
    std_error = product * math.hypot(
        position.std_error / position.mean, momentum.std_error / momentum.mean
    )
    return evaluate_product(
        position.mean,
        momentum.mean,
        state.hbar,
        margin=bound_margin(n, margin_sigmas),
        std_error=std_error,
    )
