"""有限统计测量模拟"""
