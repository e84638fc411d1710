"""公共模块：算符代数、随机数源、异常"""
