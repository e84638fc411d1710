#!/usr/bin/env python3
"""纠缠判据命令行入口"""

import argparse
import os
import sys
from typing import List, Optional

# 添加项目根目录到Python路径
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from cli.commands import COMMANDS, EXIT_FAILURE, EXIT_OK, EXIT_USAGE
from config import ALPHA_DEFAULT, DEFAULT_SEED, HBAR_DEFAULT, HBAR_SI, MAX_WORKERS
from utils.data_saver import FORMATS, save_result
from utils.logger import setup_logging
from witness.common.exceptions import TsirelsonViolationError, ValidationError


def _hbar(text: str) -> float:
    """--hbar 接受数值或 "si" """
    if text.lower() == "si":
        return HBAR_SI
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"无效的 ℏ: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"ℏ 必须为正: {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要正整数: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"需要正整数: {text!r}")
    return value


def _add_state_arguments(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--state",
        default="phi_plus",
        help="态选择器: phi_plus / classical / mixed / werner(p) / file",
    )
    parser.add_argument("--p", type=float, help="Werner 参数 p")
    parser.add_argument("--state-file", help="--state file 时读取的算符 JSON")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="随机种子")
    common.add_argument("--format", choices=FORMATS, default="json", help="输出格式")
    common.add_argument("--out", help="输出文件；缺省时数据写到 stdout")
    common.add_argument("--hbar", type=_hbar, default=HBAR_DEFAULT, help='ℏ 的数值，或 "si"')
    common.add_argument("--log-level", help="日志级别（覆盖 WITNESS_LOG_LEVEL）")

    parser = argparse.ArgumentParser(prog="witness", description="纠缠判据计算工具")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    corrmat = sub.add_parser("corrmat", parents=[common], help="关联矩阵")
    _add_state_arguments(corrmat)
    corrmat.add_argument("--basis", choices=("original", "hadamard"), default="original")
    corrmat.add_argument("--basis-a", choices=("original", "hadamard"), help="单独指定 a 的基")
    corrmat.add_argument("--basis-b", choices=("original", "hadamard"), help="单独指定 b 的基")

    scan = sub.add_parser("bell-scan", parents=[common], help="固定 θ_a 扫描 θ_b 的关联曲线")
    _add_state_arguments(scan)
    scan.add_argument("--theta-a", default="0,pi/4", help="逗号分隔的 θ_a 列表")
    scan.add_argument("--grid", default="0:pi:181", help="θ_b 网格 start:stop:points")

    chsh = sub.add_parser("chsh", parents=[common], help="CHSH 判据")
    _add_state_arguments(chsh)
    chsh.add_argument("--settings", help="a1,a2,b1,b2，如 0,pi/4,pi/8,3pi/8")
    chsh.add_argument("--preset", choices=("green", "yellow"), default="green")
    chsh.add_argument("--sample", type=_positive_int, help="每组设置的采样次数（统计模式）")

    reid = sub.add_parser("epr-reid", parents=[common], help="EPR-Reid 判据")
    reid.add_argument("--w", type=float, help="泵浦束腰")
    reid.add_argument("--L", type=float, help="晶体长度")
    reid.add_argument("--lambda", dest="wavelength", type=float, help="泵浦波长")
    reid.add_argument("--alpha", type=float, default=ALPHA_DEFAULT, help="相位匹配常数")
    reid.add_argument("--Lc", type=float, help="横向相干长度（缺省为完全相干）")
    reid.add_argument("--dxm", type=float, help="Δx₋")
    reid.add_argument("--dpp", type=float, help="Δp₊")
    reid.add_argument("--dxp", type=float, help="Δx₊（缺省等于 Δx₋）")
    reid.add_argument("--dpm", type=float, help="Δp₋（缺省等于 Δp₊）")
    reid.add_argument("--sample", type=_positive_int, help="每个基的采样次数（统计模式）")
    reid.add_argument("--pdf-grid", help="联合概率密度网格 CSV 输出路径")
    reid.add_argument("--pdf-points", type=_positive_int, default=101, help="网格每维点数")

    verify = sub.add_parser("verify", parents=[common], help="运行性质验证套件")
    verify.add_argument("--size", action="append", help="覆盖规模，如 chsh_ensembles=100，可重复")
    verify.add_argument("--suite", action="append", help="只运行指定套件，可重复")
    verify.add_argument("--inject", help="额外校验的算符 JSON（单个或列表）")
    verify.add_argument("--workers", type=_positive_int, default=MAX_WORKERS, help="线程数")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    logger = setup_logging(args.log_level)
    try:
        result = COMMANDS[args.command](args)
        save_result(result.data, result.frame, args.format, args.out)
    except ValidationError as e:
        logger.error(f"❌ 参数错误: {e}")
        return EXIT_USAGE
    except TsirelsonViolationError as e:
        logger.error(f"❌ {e}")
        print(f"{args.command}: verdict=tsirelson-violation-error")
        return EXIT_FAILURE

    print(result.verdict_line)
    if result.exit_code == EXIT_OK:
        logger.info(f"✅ {args.command} 完成")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
