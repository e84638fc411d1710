"""角度字面量解析：支持 "pi/8"、"3pi/8"、"3*pi/8"、"-pi/4"、"π/2" 以及十进制弧度"""

import math
import re
from typing import List, Tuple

from witness.common.exceptions import ValidationError

_PI_FRACTION = re.compile(
    r"^(?P<sign>[+-]?)\s*(?P<num>\d+(?:\.\d*)?)?\s*\*?\s*(?:pi|π)\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?$",
    re.IGNORECASE,
)


def parse_angle(text: str) -> float:
    """解析单个角度，单位为弧度"""
    token = str(text).strip()
    if not token:
        raise ValidationError("角度不能为空")
    match = _PI_FRACTION.match(token)
    if match:
        num = float(match.group("num")) if match.group("num") else 1.0
        den = float(match.group("den")) if match.group("den") else 1.0
        if den == 0:
            raise ValidationError(f"角度分母为 0: {text!r}")
        value = num * math.pi / den
        return -value if match.group("sign") == "-" else value
    try:
        value = float(token)
    except ValueError:
        raise ValidationError(f"无法解析角度: {text!r}") from None
    if not math.isfinite(value):
        raise ValidationError(f"角度必须是有限实数: {text!r}")
    return value


def parse_angle_list(text: str) -> List[float]:
    """逗号分隔的角度列表"""
    tokens = [t for t in str(text).split(",") if t.strip()]
    if not tokens:
        raise ValidationError("角度列表不能为空")
    return [parse_angle(t) for t in tokens]


def parse_grid(text: str) -> Tuple[float, float, int]:
    """网格描述 "start:stop:points"，例如 "0:pi:181"；points ≥ 2"""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ValidationError(f"网格格式应为 start:stop:points，实际 {text!r}")
    start, stop = parse_angle(parts[0]), parse_angle(parts[1])
    try:
        points = int(parts[2])
    except ValueError:
        raise ValidationError(f"网格点数必须是整数: {parts[2]!r}") from None
    if points < 2:
        raise ValidationError(f"网格点数必须 ≥ 2: {points}")
    if not stop > start:
        raise ValidationError(f"网格终点必须大于起点: {text!r}")
    return start, stop, points
