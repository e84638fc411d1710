"""连续变量高斯态与 EPR-Reid 判据"""
