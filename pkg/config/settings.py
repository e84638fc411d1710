"""配置文件"""

import os

# 物理常数
HBAR_DEFAULT = 1.0  # 默认无量纲单位 ℏ = 1，长度单位为米
HBAR_SI = 1.054571817e-34  # J·s
ALPHA_DEFAULT = 0.455  # 相位匹配函数高斯近似的数值因子

# 数值容差
HERMITIAN_TOL = 1e-12
DENSITY_TOL = 1e-12
UNITARY_TOL = 1e-12
PPT_TOL = 1e-10
TSIRELSON_SLACK = 1e-9

# 统计判定
STAT_MARGIN_SIGMAS = 3.0  # 有限统计时判据的安全裕度（标准误差倍数）

# 随机数
DEFAULT_SEED = 20240601

# 性质验证套件默认规模
VERIFY_SIZES = {
    "chsh_ensembles": 1000,  # 随机可分系综数量
    "chsh_quadruples": 100,  # 每个系综的测量设置四元组数量
    "identity_quadruples": 10000,  # B̂² 恒等式检验的设置四元组数量
    "tsirelson_states": 1000,  # Tsirelson 范数检验的随机态数量
    "ppt_states": 10000,  # PPT 单向蕴含检验的随机态数量
    "ppt_grid_points": 16,  # CHSH 网格搜索每个角度的点数
    "reid_mixtures": 1000,  # 随机乘积高斯混合数量
    "reid_samples": 100000,  # 每个混合的采样数
}

# 线程池
MAX_WORKERS = 5

# 日志配置
LOG_LEVEL = os.environ.get("WITNESS_LOG_LEVEL", "INFO")
LOG_DIR = os.environ.get("WITNESS_LOG_DIR")  # 为空时只输出到 stderr

# 输出
FLOAT_FORMAT = "%.17g"
