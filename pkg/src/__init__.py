# QWGrav
# 一维离散时间量子行走与弯曲时空无质量 Dirac 费米子的数值验证

__version__ = "1.0.0"
