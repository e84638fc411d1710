"""
SPDC 双光子态的横向位置/动量联合分布

只考虑一个横向方向；相位匹配函数取带数值因子 α 的高斯近似。
联合变量 u± = (u_a ± u_b)/√2
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Optional

import numpy as np
import pandas as pd

from config import ALPHA_DEFAULT, HBAR_DEFAULT
from witness.common.exceptions import ValidationError

logger = logging.getLogger(__name__)

# 单子系统 Heisenberg 可容许性的相对容差
ADMISSIBILITY_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalConfig:
    """物理常数；默认 ℏ = 1，SI 模式传入 HBAR_SI"""

    hbar: float = HBAR_DEFAULT

    def __post_init__(self):
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise ValidationError(f"ℏ 必须为正: {self.hbar!r}")


@dataclass(frozen=True)
class SpdcConfig:
    """
    SPDC 参数

    w: 泵浦束腰, L: 晶体长度, wavelength: 泵浦波长（均为长度单位）
    alpha: 相位匹配常数, Lc: 横向相干长度，None 表示完全相干泵浦
    """

    w: float
    L: float
    wavelength: float
    alpha: float = ALPHA_DEFAULT
    Lc: Optional[float] = None

    def __post_init__(self):
        for name in ("w", "L", "wavelength", "alpha"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValidationError(f"参数 {name} 必须为正的有限数: {value!r}")
        if self.Lc is not None:
            if math.isinf(self.Lc):
                object.__setattr__(self, "Lc", None)
            elif not self.Lc > 0:
                raise ValidationError(f"相干长度 Lc 必须为正: {self.Lc!r}")

    @property
    def coherent(self) -> bool:
        return self.Lc is None

    @classmethod
    def from_dict(cls, data: Dict) -> "SpdcConfig":
        """接受 JSON 键 w, L, lambda (或 wavelength), alpha, Lc"""
        try:
            wavelength = data["lambda"] if "lambda" in data else data["wavelength"]
            return cls(
                w=float(data["w"]),
                L=float(data["L"]),
                wavelength=float(wavelength),
                alpha=float(data.get("alpha", ALPHA_DEFAULT)),
                Lc=None if data.get("Lc") is None else float(data["Lc"]),
            )
        except KeyError as e:
            raise ValidationError(f"SPDC 配置缺少字段: {e}") from e
        except (TypeError, ValueError) as e:
            raise ValidationError(f"SPDC 配置字段格式错误: {e}") from e


@dataclass(frozen=True)
class GaussianJointState:
    """以联合变量宽度 (Δx₊, Δx₋, Δp₊, Δp₋) 描述的双体高斯态"""

    dxp: float
    dxm: float
    dpp: float
    dpm: float
    hbar: float = HBAR_DEFAULT

    def __post_init__(self):
        for name in ("dxp", "dxm", "dpp", "dpm", "hbar"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValidationError(f"宽度 {name} 必须为正的有限数: {value!r}")
        dx, dp = self.subsystem_widths()
        if dx * dp < (self.hbar / 2) * (1 - ADMISSIBILITY_TOL):
            raise ValidationError(
                f"单子系统违反 Heisenberg 关系: Δx·Δp = {dx * dp!r} < ℏ/2 = {self.hbar / 2!r}"
            )

    def subsystem_widths(self):
        """单子系统宽度 Δx_ℓ, Δp_ℓ"""
        dx = math.sqrt((self.dxp ** 2 + self.dxm ** 2) / 2)
        dp = math.sqrt((self.dpp ** 2 + self.dpm ** 2) / 2)
        return dx, dp

    def reid_product(self) -> float:
        return self.dxm * self.dpp

    def to_dict(self) -> Dict:
        return {
            "dxp": self.dxp,
            "dxm": self.dxm,
            "dpp": self.dpp,
            "dpm": self.dpm,
            "hbar": self.hbar,
        }


def widths_state(
    dxm: float,
    dpp: float,
    dxp: Optional[float] = None,
    dpm: Optional[float] = None,
    phys: PhysicalConfig = PhysicalConfig(),
) -> GaussianJointState:
    """直接给定宽度；未给出的 Δx₊、Δp₋ 取无关联值 Δx₊ = Δx₋、Δp₋ = Δp₊"""
    return GaussianJointState(
        dxp=dxm if dxp is None else dxp,
        dxm=dxm,
        dpp=dpp,
        dpm=dpp if dpm is None else dpm,
        hbar=phys.hbar,
    )


def spdc_variances(cfg: SpdcConfig, phys: PhysicalConfig) -> Dict[str, float]:
    """相干泵浦的动量方差 Δp₊² = ℏ²/(8w²)，Δp₋² = ℏ²π/(αLλ)"""
    hbar = phys.hbar
    return {
        "dpp_sq": hbar ** 2 / (8 * cfg.w ** 2),
        "dpm_sq": hbar ** 2 * math.pi / (cfg.alpha * cfg.L * cfg.wavelength),
    }


def schell_factor(cfg: SpdcConfig) -> float:
    """Gaussian-Schell 展宽因子 1 + (2w/Lc)²"""
    if cfg.Lc is None:
        return 1.0
    return 1 + (2 * cfg.w / cfg.Lc) ** 2


def schell_variances(cfg: SpdcConfig, phys: PhysicalConfig) -> Dict[str, float]:
    """部分相干泵浦：只有 Δp₊² 乘以展宽因子"""
    variances = spdc_variances(cfg, phys)
    return {
        "dpp_sq": variances["dpp_sq"] * schell_factor(cfg),
        "dpm_sq": variances["dpm_sq"],
    }


def spdc_state(cfg: SpdcConfig, phys: PhysicalConfig = PhysicalConfig()) -> GaussianJointState:
    """相干泵浦 SPDC 的 Fourier 极限态，Δx± = ℏ/(2Δp±)"""
    if not cfg.coherent:
        raise ValidationError("spdc_state 只处理相干泵浦，有限 Lc 请用 schell_broadening")
    variances = spdc_variances(cfg, phys)
    dpp = math.sqrt(variances["dpp_sq"])
    dpm = math.sqrt(variances["dpm_sq"])
    return GaussianJointState(
        dxp=phys.hbar / (2 * dpp),
        dxm=phys.hbar / (2 * dpm),
        dpp=dpp,
        dpm=dpm,
        hbar=phys.hbar,
    )


def schell_broadening(cfg: SpdcConfig, phys: PhysicalConfig = PhysicalConfig()) -> GaussianJointState:
    """部分相干泵浦：位置宽度不变，Δp₊ 展宽，不再是 Fourier 极限"""
    if cfg.coherent:
        raise ValidationError("schell_broadening 需要有限的相干长度 Lc")
    coherent = spdc_state(replace(cfg, Lc=None), phys)
    variances = schell_variances(cfg, phys)
    return replace(coherent, dpp=math.sqrt(variances["dpp_sq"]))


def pump_state(cfg: SpdcConfig, phys: PhysicalConfig = PhysicalConfig()) -> GaussianJointState:
    """根据 Lc 选择相干或部分相干分支"""
    logger.debug(f"构造泵浦态: w={cfg.w}, L={cfg.L}, λ={cfg.wavelength}, Lc={cfg.Lc}")
    if cfg.coherent:
        return spdc_state(cfg, phys)
    return schell_broadening(cfg, phys)


def coherence_threshold(
    cfg: SpdcConfig, phys: PhysicalConfig = PhysicalConfig(), margin: float = 0.0
) -> Optional[float]:
    """
    Reid 乘积恰好等于 (ℏ/2)(1 − margin) 时的相干长度

    Lc 大于该值时仍可验证纠缠；相干泵浦本身无法验证时返回 None
    """
    coherent = spdc_state(replace(cfg, Lc=None), phys)
    target = (phys.hbar / 2) * (1 - margin)
    product = coherent.reid_product()
    if product >= target:
        return None
    ratio = (target / product) ** 2 - 1
    return 2 * cfg.w / math.sqrt(ratio)


def _gaussian_density(u_plus, u_minus, d_plus: float, d_minus: float):
    norm = 1.0 / (2 * math.pi * d_plus * d_minus)
    return norm * np.exp(-(u_plus ** 2) / (2 * d_plus ** 2) - (u_minus ** 2) / (2 * d_minus ** 2))


def joint_pdf_momentum(state: GaussianJointState, pa, pb):
    """P(p_a, p_b)，p± = (p_a ± p_b)/√2，已归一化"""
    pa = np.asarray(pa, dtype=float)
    pb = np.asarray(pb, dtype=float)
    density = _gaussian_density(
        (pa + pb) / math.sqrt(2), (pa - pb) / math.sqrt(2), state.dpp, state.dpm
    )
    return float(density) if density.ndim == 0 else density


def joint_pdf_position(state: GaussianJointState, xa, xb):
    """P(x_a, x_b)，x± = (x_a ± x_b)/√2，已归一化"""
    xa = np.asarray(xa, dtype=float)
    xb = np.asarray(xb, dtype=float)
    density = _gaussian_density(
        (xa + xb) / math.sqrt(2), (xa - xb) / math.sqrt(2), state.dxp, state.dxm
    )
    return float(density) if density.ndim == 0 else density


def pdf_grid(
    state: GaussianJointState, basis: str, points: int = 101, span: float = 4.0
) -> pd.DataFrame:
    """
    联合概率密度网格（长表格式：u_a, u_b, density）

    网格范围为 ±span 倍单子系统宽度
    """
    if points < 2:
        raise ValidationError(f"网格点数必须 ≥ 2: {points}")
    dx, dp = state.subsystem_widths()
    if basis == "position":
        half, pdf = span * dx, joint_pdf_position
    elif basis == "momentum":
        half, pdf = span * dp, joint_pdf_momentum
    else:
        raise ValidationError(f"未知测量基: {basis!r}")
    axis = np.linspace(-half, half, points)
    ua, ub = np.meshgrid(axis, axis, indexing="ij")
    density = pdf(state, ua, ub)
    return pd.DataFrame(
        {"u_a": ua.reshape(-1), "u_b": ub.reshape(-1), "density": density.reshape(-1)}
    )
