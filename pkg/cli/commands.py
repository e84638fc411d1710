"""
五个子命令的实现

每个命令返回 CommandResult：完整数据（JSON）、可选表格（CSV）、一行判定与退出码
"""

import json
import logging
import re
from argparse import Namespace
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from config import STAT_MARGIN_SIGMAS
from utils.angles import parse_angle_list, parse_grid
from utils.data_saver import save_frame
from utils.verify_suites import run_suites
from witness.common.exceptions import ValidationError
from witness.common.operator_core import Operator
from witness.gaussian.epr_reid import epr_reid
from witness.gaussian.spdc import (
    PhysicalConfig,
    SpdcConfig,
    coherence_threshold,
    pdf_grid,
    pump_state,
    widths_state,
)
from witness.qubit.chsh import (
    GREEN_SETTINGS,
    VERDICT_TSIRELSON_ERROR,
    YELLOW_SETTINGS,
    chsh_evaluate,
    chsh_scan,
)
from witness.qubit.correlations import correlation_matrix_named
from witness.qubit.states import TwoQubitState, from_selector
from witness.sampler.continuous import epr_reid_sampled
from witness.sampler.discrete import chsh_estimate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

SETTING_PRESETS = {"green": GREEN_SETTINGS, "yellow": YELLOW_SETTINGS}

_SELECTOR = re.compile(r"^(?P<name>[a-z_]+)(?:\((?P<param>[^)]*)\))?$")


@dataclass
class CommandResult:
    data: Dict
    frame: Optional[pd.DataFrame]
    verdict_line: str
    exit_code: int = EXIT_OK


def load_state_file(path: str) -> TwoQubitState:
    """读取 {"dim": 4, "re": [...], "im": [...]} 格式的密度矩阵"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ValidationError(f"无法读取态文件 {path}: {e}") from e
    return TwoQubitState(Operator.from_json(text))


def load_state(args: Namespace) -> TwoQubitState:
    """
    解析 --state：phi_plus / classical / mixed / werner / file

    werner 的参数可以写成 "werner(0.5)" 或 --p 0.5；file 需要 --state-file
    """
    match = _SELECTOR.match(args.state.strip())
    if not match:
        raise ValidationError(f"无法解析态选择器: {args.state!r}")
    name = match.group("name")
    if name == "file":
        if not args.state_file:
            raise ValidationError("--state file 需要同时给出 --state-file")
        return load_state_file(args.state_file)

    params: List[float] = []
    if match.group("param"):
        try:
            params = [float(match.group("param"))]
        except ValueError:
            raise ValidationError(f"态参数不是数字: {match.group('param')!r}") from None
    elif getattr(args, "p", None) is not None:
        params = [args.p]
    return from_selector(name, params)


def cmd_corrmat(args: Namespace) -> CommandResult:
    state = load_state(args)
    basis_a = args.basis_a or args.basis
    basis_b = args.basis_b or args.basis
    matrix = correlation_matrix_named(state, basis_a, basis_b)
    frame = pd.DataFrame(
        [
            {"outcome_a": i, "outcome_b": j, "p": matrix.p[i][j]}
            for i in range(2)
            for j in range(2)
        ]
    )
    return CommandResult(
        data=matrix.to_dict(),
        frame=frame,
        verdict_line=f"corrmat: state={args.state} basis_a={basis_a} basis_b={basis_b}",
    )


def cmd_bell_scan(args: Namespace) -> CommandResult:
    state = load_state(args)
    tokens = [t.strip() for t in args.theta_a.split(",") if t.strip()]
    angles_a = parse_angle_list(args.theta_a)
    start, stop, points = parse_grid(args.grid)
    grid = np.linspace(start, stop, points)

    frame = pd.DataFrame({"theta_b": grid})
    curves = {}
    for token, theta_a in zip(tokens, angles_a):
        label = f"theta_a={token}"
        values = [corr for _, corr in chsh_scan(state, theta_a, grid)]
        frame[label] = values
        curves[label] = values
    data = {"theta_b": grid.tolist(), "curves": curves}
    return CommandResult(
        data=data,
        frame=frame,
        verdict_line=f"bell-scan: state={args.state} curves={len(curves)} points={points}",
    )


def _chsh_settings(args: Namespace):
    if args.settings:
        return parse_angle_list(args.settings)
    return SETTING_PRESETS[args.preset]


def _chsh_frame(result) -> pd.DataFrame:
    labels = ("a1b1", "a1b2", "a2b1", "a2b2")
    a1, a2, b1, b2 = (s.theta for s in result.settings)
    pairs = ((a1, b1), (a1, b2), (a2, b1), (a2, b2))
    return pd.DataFrame(
        {
            "pair": labels,
            "theta_a": [p[0] for p in pairs],
            "theta_b": [p[1] for p in pairs],
            "correlation": list(result.correlations),
            "value": result.value,
            "verdict": result.verdict,
        }
    )


def cmd_chsh(args: Namespace) -> CommandResult:
    state = load_state(args)
    settings = _chsh_settings(args)
    if args.sample:
        result = chsh_estimate(state, settings, args.sample, args.seed, STAT_MARGIN_SIGMAS)
    else:
        result = chsh_evaluate(state, settings)
    exit_code = EXIT_FAILURE if result.verdict == VERDICT_TSIRELSON_ERROR else EXIT_OK
    return CommandResult(
        data=result.to_dict(),
        frame=_chsh_frame(result),
        verdict_line=f"chsh: value={result.value!r} verdict={result.verdict}",
        exit_code=exit_code,
    )


SPDC_FLAGS = ("w", "L", "wavelength", "Lc")
WIDTH_FLAGS = ("dxm", "dpp", "dxp", "dpm")


def _gaussian_state(args: Namespace, phys: PhysicalConfig):
    spdc_mode = any(getattr(args, f) is not None for f in SPDC_FLAGS)
    widths_mode = any(getattr(args, f) is not None for f in WIDTH_FLAGS)
    if spdc_mode == widths_mode:
        raise ValidationError("必须且只能选择一种模式：SPDC 参数 (--w --L --lambda) 或宽度 (--dxm --dpp)")

    if spdc_mode:
        missing = [f for f in ("w", "L", "wavelength") if getattr(args, f) is None]
        if missing:
            raise ValidationError(f"SPDC 模式缺少参数: {missing}")
        cfg = SpdcConfig(args.w, args.L, args.wavelength, args.alpha, args.Lc)
        extra = {
            "config": {"w": cfg.w, "L": cfg.L, "lambda": cfg.wavelength, "alpha": cfg.alpha, "Lc": cfg.Lc},
            "coherence_threshold": coherence_threshold(cfg, phys),
        }
        return pump_state(cfg, phys), extra

    if args.dxm is None or args.dpp is None:
        raise ValidationError("宽度模式需要 --dxm 与 --dpp")
    return widths_state(args.dxm, args.dpp, args.dxp, args.dpm, phys), {}


def cmd_epr_reid(args: Namespace) -> CommandResult:
    phys = PhysicalConfig(args.hbar)
    state, extra = _gaussian_state(args, phys)
    logger.info(f"🔬 高斯态宽度: {state.to_dict()}")
    if args.sample:
        result = epr_reid_sampled(state, args.sample, args.seed, STAT_MARGIN_SIGMAS)
    else:
        result = epr_reid(state)

    data = result.to_dict()
    data["state"] = state.to_dict()
    data.update(extra)

    if args.pdf_grid:
        grids = []
        for basis in ("position", "momentum"):
            grid = pdf_grid(state, basis, points=args.pdf_points)
            grid.insert(0, "basis", basis)
            grids.append(grid)
        save_frame(args.pdf_grid, pd.concat(grids, ignore_index=True))
        data["pdf_grid"] = args.pdf_grid

    frame = pd.DataFrame([result.to_dict()])
    return CommandResult(
        data=data,
        frame=frame,
        verdict_line=(
            f"epr-reid: product={result.product!r} bound={result.bound!r} verdict={result.verdict}"
        ),
    )


def _parse_sizes(items: List[str]) -> Dict[str, int]:
    sizes = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"--size 格式应为 key=value: {item!r}")
        try:
            sizes[key.strip()] = int(value)
        except ValueError:
            raise ValidationError(f"规模必须是整数: {item!r}") from None
    return sizes


def _load_injected(path: Optional[str]) -> List:
    """注入文件可以是单个算符 JSON 或其列表"""
    if not path:
        return []
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"无法读取注入文件 {path}: {e}") from e
    return payload if isinstance(payload, list) else [payload]


def cmd_verify(args: Namespace) -> CommandResult:
    report = run_suites(
        seed=args.seed,
        sizes=_parse_sizes(args.size),
        workers=args.workers,
        hbar=args.hbar,
        extra_states=_load_injected(args.inject),
        only=args.suite or None,
    )
    frame = pd.DataFrame(
        [
            {
                "suite": name,
                "passed": suite["passed"],
                "checked": suite["checked"],
                "failure_count": suite["failure_count"],
            }
            for name, suite in report["suites"].items()
        ]
    )
    failed = [name for name, suite in report["suites"].items() if not suite["passed"]]
    if report["passed"]:
        line = f"verify: passed ({len(report['suites'])} suites)"
    else:
        line = f"verify: FAILED {','.join(failed)}"
    return CommandResult(
        data=report,
        frame=frame,
        verdict_line=line,
        exit_code=EXIT_OK if report["passed"] else EXIT_FAILURE,
    )


COMMANDS = {
    "corrmat": cmd_corrmat,
    "bell-scan": cmd_bell_scan,
    "chsh": cmd_chsh,
    "epr-reid": cmd_epr_reid,
    "verify": cmd_verify,
}
