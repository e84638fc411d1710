"""纠缠判据模拟与验证工具包"""

__version__ = "0.1.0"
