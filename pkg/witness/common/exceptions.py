"""异常定义"""


class WitnessError(Exception):
    """工具包异常基类"""


class ValidationError(WitnessError, ValueError):
    """输入不满足前置条件或不变量"""


class TsirelsonViolationError(WitnessError, RuntimeError):
    """精确计算得到 |⟨B̂⟩| > 2√2，只可能是实现错误"""

    def __init__(self, value: float):
        super().__init__(f"CHSH 值 {value!r} 超过 Tsirelson 界 2√2")
        self.value = value
