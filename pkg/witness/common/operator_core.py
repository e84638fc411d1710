"""
稠密复矩阵算符代数
提供 2 维与 4 维算符的构造、乘积、张量积、谱分解、偏迹和偏转置

基矢约定：(|00⟩, |01⟩, |10⟩, |11⟩)，子系统 a 为张量积的左（慢）指标
"""

import json
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from config import DENSITY_TOL, HERMITIAN_TOL, UNITARY_TOL
from witness.common.exceptions import ValidationError

SUPPORTED_DIMS = (2, 4)
SUBSYSTEMS = ("a", "b")


@dataclass(frozen=True, eq=False)
class Operator:
    """dim×dim 复矩阵，构造后不可变"""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        if self.dim not in SUPPORTED_DIMS:
            raise ValidationError(f"不支持的维数: {self.dim}，只支持 {SUPPORTED_DIMS}")
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.shape != (self.dim, self.dim):
            raise ValidationError(
                f"矩阵形状 {arr.shape} 与维数 {self.dim} 不匹配"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_array(cls, arr) -> "Operator":
        arr = np.asarray(arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"不是方阵: shape={arr.shape}")
        return cls(arr.shape[0], arr)

    # 代数运算
    def __matmul__(self, other: "Operator") -> "Operator":
        _require_same_dim(self, other)
        return Operator(self.dim, self.entries @ other.entries)

    def __add__(self, other: "Operator") -> "Operator":
        _require_same_dim(self, other)
        return Operator(self.dim, self.entries + other.entries)

    def __sub__(self, other: "Operator") -> "Operator":
        _require_same_dim(self, other)
        return Operator(self.dim, self.entries - other.entries)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.dim, self.entries * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Operator":
        return Operator(self.dim, self.entries / scalar)

    def __neg__(self) -> "Operator":
        return Operator(self.dim, -self.entries)

    def dagger(self) -> "Operator":
        return Operator(self.dim, self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def max_abs_diff(self, other: "Operator") -> float:
        """逐元素最大绝对差"""
        _require_same_dim(self, other)
        return float(np.max(np.abs(self.entries - other.entries)))

    def allclose(self, other: "Operator", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    # 可检验的性质，不作为标志存储
    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        scale = 1.0 + float(np.max(np.abs(self.entries)))
        deviation = float(np.max(np.abs(self.entries - self.entries.conj().T)))
        return deviation <= tol * scale

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        product = self.entries.conj().T @ self.entries
        return float(np.max(np.abs(product - np.eye(self.dim)))) <= tol * self.dim

    def is_involution(self, tol: float = UNITARY_TOL) -> bool:
        square = self.entries @ self.entries
        return float(np.max(np.abs(square - np.eye(self.dim)))) <= tol * self.dim

    # 序列化: {"dim": n, "re": [...], "im": [...]}，行优先
    def to_dict(self) -> Dict:
        flat = self.entries.reshape(-1)
        return {
            "dim": self.dim,
            "re": [float(x) for x in flat.real],
            "im": [float(x) for x in flat.imag],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "Operator":
        try:
            dim = int(data["dim"])
            re = np.asarray(data["re"], dtype=float)
            im = np.asarray(data["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"算符 JSON 格式错误: {e}") from e
        if re.size != dim * dim or im.size != dim * dim:
            raise ValidationError(f"元素个数应为 {dim * dim}，实际 re={re.size}, im={im.size}")
        return cls(dim, (re + 1j * im).reshape(dim, dim))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Operator":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"无法解析算符 JSON: {e}") from e
        return cls.from_dict(data)

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim}, entries={self.entries.tolist()!r})"


@dataclass(frozen=True)
class Spectrum:
    """厄米算符的实本征值，升序排列"""

    eigenvalues: Tuple[float, ...]

    @property
    def min(self) -> float:
        return self.eigenvalues[0]

    @property
    def max(self) -> float:
        return self.eigenvalues[-1]

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def is_density_spectrum(self, tol: float = DENSITY_TOL) -> bool:
        """本征值非负且求和为 1"""
        return self.min >= -tol and abs(sum(self.eigenvalues) - 1.0) <= tol


def _require_same_dim(a: Operator, b: Operator):
    if a.dim != b.dim:
        raise ValidationError(f"维数不匹配: {a.dim} vs {b.dim}")


def _require_dim(op: Operator, dim: int, name: str = "算符"):
    if op.dim != dim:
        raise ValidationError(f"{name}维数应为 {dim}，实际为 {op.dim}")


def _require_subsystem(which: str):
    if which not in SUBSYSTEMS:
        raise ValidationError(f"未知子系统: {which!r}，应为 'a' 或 'b'")


def identity(dim: int = 2) -> Operator:
    return Operator(dim, np.eye(dim))


_PAULI = {
    # σ̂_x = |0⟩⟨1| + |1⟩⟨0|
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    # σ̂_y = i|0⟩⟨1| − i|1⟩⟨0|
    "y": np.array([[0, 1j], [-1j, 0]], dtype=np.complex128),
    # σ̂_z = |1⟩⟨1| − |0⟩⟨0|
    "z": np.array([[-1, 0], [0, 1]], dtype=np.complex128),
}


def pauli(axis: str) -> Operator:
    """泡利算符，axis ∈ {x, y, z}"""
    try:
        return Operator(2, _PAULI[axis])
    except KeyError:
        raise ValidationError(f"未知泡利轴: {axis!r}") from None


def hadamard() -> Operator:
    """Û = (σ̂_x + σ̂_z)/√2"""
    return (pauli("x") + pauli("z")) / np.sqrt(2.0)


def tensor(a: Operator, b: Operator) -> Operator:
    """Kronecker 积，a 为左（慢）指标"""
    _require_dim(a, 2, "左因子")
    _require_dim(b, 2, "右因子")
    return Operator(4, np.kron(a.entries, b.entries))


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


def validate_density(rho: Operator, tol: float = DENSITY_TOL) -> Spectrum:
    """检查密度矩阵：厄米、单位迹、半正定；返回谱"""
    if not rho.is_hermitian():
        raise ValidationError("密度矩阵不是厄米矩阵")
    trace = rho.trace()
    if abs(trace - 1.0) > tol:
        raise ValidationError(f"密度矩阵的迹为 {trace.real!r}，应为 1")
    spectrum = eigenvalues_hermitian(rho)
    if spectrum.min < -tol:
        raise ValidationError(f"密度矩阵不是半正定的: 最小本征值 {spectrum.min!r}")
    return spectrum


def _as_four_index(rho: Operator) -> np.ndarray:
    # (a, b, a', b')
    return rho.entries.reshape(2, 2, 2, 2)


def partial_trace(rho: Operator, over: str) -> Operator:
    """对子系统 over 求偏迹，返回另一子系统的约化密度矩阵"""
    _require_dim(rho, 4, "密度矩阵")
    _require_subsystem(over)
    validate_density(rho)
    t = _as_four_index(rho)
    if over == "a":
        reduced = np.einsum("ijik->jk", t)
    else:
        reduced = np.einsum("ijkj->ik", t)
    return Operator(2, reduced)


def partial_transpose(rho: Operator, on: str = "b") -> Operator:
    """只转置子系统 on 的指标"""
    _require_dim(rho, 4)
    _require_subsystem(on)
    t = _as_four_index(rho)
    if on == "b":
        swapped = t.transpose(0, 3, 2, 1)
    else:
        swapped = t.transpose(2, 1, 0, 3)
    return Operator(4, swapped.reshape(4, 4))


def eigendecomposition(op: Operator) -> Tuple[np.ndarray, np.ndarray]:
    """厄米本征分解，返回 (升序本征值, 本征向量列)"""
    if not op.is_hermitian():
        raise ValidationError("本征分解要求厄米输入")
    symmetric = (op.entries + op.entries.conj().T) / 2.0
    values, vectors = np.linalg.eigh(symmetric)
    return values, vectors


def eigenvalues_hermitian(op: Operator) -> Spectrum:
    values, _ = eigendecomposition(op)
    return Spectrum(tuple(float(v) for v in values))


def operator_norm(op: Operator) -> float:
    """‖Ô‖ = max |本征值|"""
    spectrum = eigenvalues_hermitian(op)
    return max(abs(spectrum.min), abs(spectrum.max))
