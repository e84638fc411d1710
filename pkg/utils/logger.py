"""日志设置"""

import logging
import os
import sys
from typing import Optional

from config import LOG_DIR, LOG_LEVEL

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def setup_logging(level: Optional[str] = None, log_dir: Optional[str] = None) -> logging.Logger:
    """
    配置根日志器

    日志只写 stderr（stdout 留给判定结果），配置了 log_dir 时同时写 witness.log
    """
    level = (level or LOG_LEVEL).upper()
    log_dir = log_dir if log_dir is not None else LOG_DIR

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(log_dir, "witness.log"), encoding="utf-8"))

    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    return logging.getLogger("witness")
