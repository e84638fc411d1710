"""命令行"""
