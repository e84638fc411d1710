#!/usr/bin/env python3
"""结果保存模块：JSON / CSV，先写临时文件再原子替换"""

import json
import logging
import os
import sys
import tempfile
from typing import Any, Dict, Optional

import pandas as pd

from config import FLOAT_FORMAT

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


def dumps_json(data: Dict[str, Any]) -> str:
    """浮点数按 repr 输出（最短可往返表示）"""
    return json.dumps(data, ensure_ascii=False, allow_nan=False)


def dumps_frame(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def save_json(path: str, data: Dict[str, Any]):
    """保存 JSON 结果"""
    _atomic_write(path, dumps_json(data) + "\n")
    logger.info(f"📄 结果已保存到 {path}")


def save_frame(path: str, frame: pd.DataFrame):
    """保存 CSV 表格，数值保留 17 位有效数字"""
    _atomic_write(path, dumps_frame(frame))
    logger.info(f"📄 表格已保存到 {path}")


def save_result(
    data: Dict[str, Any],
    frame: Optional[pd.DataFrame],
    fmt: str = "json",
    path: Optional[str] = None,
):
    """
    按格式输出结果

    path 为空时写到 stdout；csv 格式要求提供 frame
    """
    if fmt not in FORMATS:
        raise ValueError(f"未知输出格式: {fmt!r}")
    if fmt == "csv":
        if frame is None:
            raise ValueError("该结果没有表格形式")
        if path:
            save_frame(path, frame)
        else:
            sys.stdout.write(dumps_frame(frame))
    elif path:
        save_json(path, data)
    else:
        sys.stdout.write(dumps_json(data) + "\n")
