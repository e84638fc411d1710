"""
计数器型可分裂随机数源

每个流由 (seed, stream) 唯一确定，底层为 Philox4x64 计数器型生成器，
串行与并行运行对同一 (seed, stream) 产生相同序列
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def stream_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """返回 (seed, stream) 对应的独立生成器"""
    if stream < 0:
        raise ValueError(f"stream 必须非负: {stream}")
    key = ((stream & _MASK64) << 64) | (seed & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))

