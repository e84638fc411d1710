"""PPT (Peres-Horodecki) 可分性判定，2⊗2 系统中充要"""

import logging

from config import PPT_TOL
from witness.common.exceptions import ValidationError
from witness.common.operator_core import eigenvalues_hermitian, partial_transpose
from witness.qubit.states import TwoQubitState, werner_state

logger = logging.getLogger(__name__)

SEPARABLE = "separable"
ENTANGLED = "entangled"


def min_pt_eigenvalue(state: TwoQubitState) -> float:
    return eigenvalues_hermitian(partial_transpose(state.rho, on="b")).min


def ppt_oracle(state: TwoQubitState) -> str:
    """偏转置最小本征值 < −1e−10 则判为纠缠"""
    if min_pt_eigenvalue(state) < -PPT_TOL:
        return ENTANGLED
    return SEPARABLE


def werner_ppt_boundary(
    lo: float = 0.0, hi: float = 1.0, step: float = 1e-3, tol: float = 1e-12
) -> float:
    """
    Werner 族的 PPT 边界

    先以 step 为步长扫描 p 找到偏转置最小本征值变号的区间，再在区间内二分
    """
    previous = lo
    previous_sign = min_pt_eigenvalue(werner_state(lo)) < 0
    p = lo
    while p < hi:
        p = min(p + step, hi)
        sign = min_pt_eigenvalue(werner_state(p)) < 0
        if sign != previous_sign:
            break
        previous = p
    else:
        raise ValidationError("扫描区间内最小本征值未变号")

    left, right = previous, p
    while right - left > tol:
        mid = (left + right) / 2
        if (min_pt_eigenvalue(werner_state(mid)) < 0) == previous_sign:
            left = mid
        else:
            right = mid
    boundary = (left + right) / 2
    logger.debug(f"Werner PPT 边界: p = {boundary}")
    return boundary
