"""工具模块：角度解析、结果保存、日志与验证套件"""
