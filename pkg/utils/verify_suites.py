#!/usr/bin/env python3
"""
性质验证套件

五个套件：可分态 CHSH 界、B̂² 恒等式、Tsirelson 范数、可分高斯混合的 EPR-Reid 界、
PPT 单向蕴含；另有注入态的输入校验。套件由线程池并行执行，
每个套件使用独立的随机流区段，报告按固定次序组装，相同种子得到相同字节
"""

import logging
import math
import threading
from dataclasses import dataclass, field
from queue import Empty, Queue
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from config import MAX_WORKERS, TSIRELSON_SLACK, VERIFY_SIZES
from witness.common.exceptions import TsirelsonViolationError, ValidationError
from witness.common.operator_core import Operator, operator_norm
from witness.common.random_source import stream_generator
from witness.gaussian.mixture import mix_of_products, mixture_moments, random_admissible_mixture
from witness.qubit.chsh import (
    CLASSICAL_BOUND,
    GREEN_SETTINGS,
    TSIRELSON_BOUND,
    chsh_evaluate,
    chsh_identity_residual,
    chsh_max_over_grid,
    chsh_operator,
    chsh_values,
)
from witness.qubit.ppt import ENTANGLED, ppt_oracle, werner_ppt_boundary
from witness.qubit.states import TwoQubitState, assemble, random_density_matrix, sample_separable

logger = logging.getLogger(__name__)

# 每个套件占用 2^32 个随机流
STREAM_BLOCK = 1 << 32
IDENTITY_TOL = 1e-12
REID_SIGMAS = 5.0
PPT_CHSH_MARGIN = 1e-6
WERNER_TOL = 1e-3
MAX_REPORTED_FAILURES = 10

SUITE_ORDER = (
    "separable_chsh_bound",
    "chsh_square_identity",
    "tsirelson_norm",
    "separable_reid_bound",
    "ppt_one_way",
)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: List[Dict] = field(default_factory=list)
    failure_count: int = 0
    details: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def fail(self, case: Dict):
        self.failure_count += 1
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(case)

    def to_dict(self) -> Dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "failure_count": self.failure_count,
            "failures": self.failures,
            "details": self.details,
        }


def _settings(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.uniform(0.0, math.pi, size=(count, 4))


def separable_chsh_bound(seed: int, sizes: Dict, block: int) -> SuiteResult:
    """随机可分系综在随机设置下 |⟨B̂⟩| ≤ 2"""
    result = SuiteResult("separable_chsh_bound")
    largest = 0.0
    for i in range(sizes["chsh_ensembles"]):
        ensemble = sample_separable(seed, n_terms=1 + i % 4, stream=block + 2 * i)
        state = assemble(ensemble)
        settings = _settings(stream_generator(seed, block + 2 * i + 1), sizes["chsh_quadruples"])
        values = chsh_values(state, settings)
        result.checked += len(values)
        largest = max(largest, float(values.max()))
        for k in np.flatnonzero(values > CLASSICAL_BOUND + TSIRELSON_SLACK):
            result.fail(
                {"ensemble": i, "settings_rad": settings[k].tolist(), "value": float(values[k])}
            )
    result.details["max_value"] = largest
    return result


def chsh_square_identity(seed: int, sizes: Dict, block: int) -> SuiteResult:
    """B̂² = 4𝟙 + [â₁,â₂]⊗[b̂₁,b̂₂]"""
    result = SuiteResult("chsh_square_identity")
    settings = _settings(stream_generator(seed, block), sizes["identity_quadruples"])
    largest = 0.0
    for row in settings:
        residual = chsh_identity_residual(*row)
        result.checked += 1
        largest = max(largest, residual)
        if residual > IDENTITY_TOL:
            result.fail({"settings_rad": row.tolist(), "residual": residual})
    result.details["max_residual"] = largest
    return result


def tsirelson_norm(seed: int, sizes: Dict, block: int) -> SuiteResult:
    """‖B̂‖ ≤ 2√2，在最优设置下取等；随机态的 |⟨B̂⟩| 不超过 2√2"""
    result = SuiteResult("tsirelson_norm")
    green_norm = operator_norm(chsh_operator(*GREEN_SETTINGS))
    result.details["green_norm"] = green_norm
    result.checked += 1
    if abs(green_norm - TSIRELSON_BOUND) > TSIRELSON_SLACK:
        result.fail({"settings_rad": list(GREEN_SETTINGS), "norm": green_norm})

    largest = 0.0
    for i in range(sizes["tsirelson_states"]):
        rng = stream_generator(seed, block + i)
        state = random_density_matrix(rng)
        row = _settings(rng, 1)[0]
        norm = operator_norm(chsh_operator(*row))
        result.checked += 1
        largest = max(largest, norm)
        if norm > TSIRELSON_BOUND + TSIRELSON_SLACK:
            result.fail({"state": i, "settings_rad": row.tolist(), "norm": norm})
            continue
        try:
            chsh_evaluate(state, row)
        except TsirelsonViolationError as e:
            result.fail({"state": i, "settings_rad": row.tolist(), "value": e.value})
    result.details["max_norm"] = largest
    return result


def separable_reid_bound(seed: int, sizes: Dict, block: int, hbar: float = 1.0) -> SuiteResult:
    """可分乘积高斯混合：精确 Δx₋·Δp₊ ≥ ℏ/2，采样估计不低于 ℏ/2 − 5σ"""
    result = SuiteResult("separable_reid_bound")
    bound = hbar / 2
    smallest = math.inf
    for i in range(sizes["reid_mixtures"]):
        mixture = random_admissible_mixture(stream_generator(seed, block + 2 * i), hbar=hbar)
        dxm, dpp = mixture_moments(mixture)
        estimate = mix_of_products(
            mixture.components, sizes["reid_samples"], seed, hbar=hbar, stream=block + 2 * i + 1
        )
        result.checked += 1
        smallest = min(smallest, estimate.product / bound)
        exact_ok = dxm * dpp >= bound * (1 - 1e-12)
        sampled_ok = estimate.product >= bound - REID_SIGMAS * estimate.product_error
        if not (exact_ok and sampled_ok):
            result.fail(
                {
                    "mixture": i,
                    "exact_product": dxm * dpp,
                    "estimate": estimate.to_dict(),
                }
            )
    result.details["min_product_over_bound"] = smallest
    return result


def ppt_one_way(seed: int, sizes: Dict, block: int) -> SuiteResult:
    """CHSH 违背 ⇒ PPT 判为纠缠；反之不要求。附带 Werner 族边界 p = 1/3"""
    result = SuiteResult("ppt_one_way")
    violating = 0
    for i in range(sizes["ppt_states"]):
        state = random_density_matrix(stream_generator(seed, block + i))
        value, settings = chsh_max_over_grid(state, sizes["ppt_grid_points"])
        result.checked += 1
        if value > CLASSICAL_BOUND + PPT_CHSH_MARGIN:
            violating += 1
            if ppt_oracle(state) != ENTANGLED:
                result.fail({"state": i, "value": value, "settings_rad": list(settings)})

    boundary = werner_ppt_boundary()
    result.checked += 1
    if abs(boundary - 1 / 3) > WERNER_TOL:
        result.fail({"werner_boundary": boundary})
    result.details["chsh_violating_states"] = violating
    result.details["werner_boundary"] = boundary
    return result


def injected_states(arrays: Sequence) -> SuiteResult:
    """注入态的密度矩阵校验；元素可以是 Operator、算符 JSON 字典或数组"""
    result = SuiteResult("injected_states")
    for i, arr in enumerate(arrays):
        result.checked += 1
        try:
            if isinstance(arr, Operator):
                rho = arr
            elif isinstance(arr, dict):
                rho = Operator.from_dict(arr)
            else:
                rho = Operator.from_array(arr)
            TwoQubitState(rho)
        except (ValidationError, ValueError) as e:
            result.fail({"state": i, "error": str(e)})
    return result


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "separable_chsh_bound": separable_chsh_bound,
    "chsh_square_identity": chsh_square_identity,
    "tsirelson_norm": tsirelson_norm,
    "separable_reid_bound": separable_reid_bound,
    "ppt_one_way": ppt_one_way,
}


class SuiteStats:
    """套件统计信息"""

    def __init__(self):
        self.passed = 0
        self.failed = 0
        self.lock = threading.Lock()

    def add(self, ok: bool):
        with self.lock:
            if ok:
                self.passed += 1
            else:
                self.failed += 1

    def get_summary(self) -> Dict:
        return {"passed": self.passed, "failed": self.failed, "total": self.passed + self.failed}


class SuiteWorker(threading.Thread):
    """从队列取套件执行，结果按名称写入共享字典"""

    def __init__(self, queue: Queue, results: Dict[str, SuiteResult], lock: threading.Lock, stats: SuiteStats):
        super().__init__(daemon=True)
        self.queue = queue
        self.results = results
        self.lock = lock
        self.stats = stats

    def run(self):
        while True:
            try:
                task = self.queue.get(timeout=1)
            except Empty:
                return
            if task is None:
                self.queue.task_done()
                return
            name, func, kwargs = task
            logger.info(f"🔄 {self.name} 运行套件 {name}")
            try:
                outcome = func(**kwargs)
            except Exception as e:
                logger.exception(f"❌ 套件 {name} 异常")
                outcome = SuiteResult(name)
                outcome.fail({"exception": f"{type(e).__name__}: {e}"})
            with self.lock:
                self.results[name] = outcome
            self.stats.add(outcome.passed)
            status = "✅ 通过" if outcome.passed else f"❌ 失败 {outcome.failure_count} 例"
            logger.info(f"{status} {name} (检查 {outcome.checked} 项)")
            self.queue.task_done()


def run_suites(
    seed: int,
    sizes: Optional[Dict[str, int]] = None,
    workers: int = MAX_WORKERS,
    hbar: float = 1.0,
    extra_states: Sequence = (),
    only: Optional[Sequence[str]] = None,
) -> Dict:
    """
    运行全部（或 only 指定的）套件并返回报告

    报告不含时间戳；每个套件的随机流区段由其在 SUITE_ORDER 中的位置决定
    """
    merged = dict(VERIFY_SIZES)
    if sizes:
        unknown = set(sizes) - set(VERIFY_SIZES)
        if unknown:
            raise ValidationError(f"未知的规模参数: {sorted(unknown)}")
        merged.update(sizes)
    for key, value in merged.items():
        if int(value) < 1:
            raise ValidationError(f"规模参数 {key} 必须 ≥ 1: {value}")
        merged[key] = int(value)

    selected = list(SUITE_ORDER) if only is None else list(only)
    for name in selected:
        if name not in SUITES:
            raise ValidationError(f"未知套件: {name!r}，可选 {list(SUITE_ORDER)}")

    queue: Queue = Queue()
    for name in selected:
        kwargs = {"seed": seed, "sizes": merged, "block": (SUITE_ORDER.index(name) + 1) * STREAM_BLOCK}
        if name == "separable_reid_bound":
            kwargs["hbar"] = hbar
        queue.put((name, SUITES[name], kwargs))

    results: Dict[str, SuiteResult] = {}
    lock = threading.Lock()
    stats = SuiteStats()
    pool = [SuiteWorker(queue, results, lock, stats) for _ in range(max(1, min(workers, len(selected))))]
    logger.info(f"🚀 启动 {len(pool)} 个线程运行 {len(selected)} 个套件")
    for worker in pool:
        worker.start()
    queue.join()
    for _ in pool:
        queue.put(None)
    for worker in pool:
        worker.join()

    ordered = [results[name] for name in selected]
    if extra_states:
        ordered.append(injected_states(extra_states))
    summary = stats.get_summary()
    logger.info(f"📊 套件统计: 通过 {summary['passed']} / {summary['total']}")

    return {
        "seed": seed,
        "sizes": merged,
        "passed": all(r.passed for r in ordered),
        "suites": {r.name: r.to_dict() for r in ordered},
    }
