"""全局配置入口"""

from .settings import *
