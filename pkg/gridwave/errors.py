"""
gridwave 异常定义

所有领域错误都继承自 GridwaveError（其本身是 ValueError），命令行据此映射退出码。
"""

from typing import Optional


class GridwaveError(ValueError):
    """gridwave 领域错误基类"""


class UsageError(GridwaveError):
    """命令行参数或输入输出选择错误"""


# 算例读写
class CaseError(GridwaveError):
    """算例数据错误"""


class MissingFile(CaseError):
    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"缺少必需文件: {self.path}")


class MalformedRow(CaseError):
    def __init__(self, file, line: int, detail: str = ""):
        self.file = str(file)
        self.line = line
        suffix = f" ({detail})" if detail else ""
        super().__init__(f"格式错误: {self.file} 第 {line} 行{suffix}")


class DuplicateId(CaseError):
    def __init__(self, kind: str, ident):
        self.kind = kind
        self.ident = ident
        super().__init__(f"重复编号: {kind} {ident}")


class DanglingReference(CaseError):
    def __init__(self, kind: str, ident):
        self.kind = kind
        self.ident = ident
        super().__init__(f"引用不存在: {kind} {ident}")


class InvalidCase(CaseError):
    """算例未通过校验"""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(str(v) for v in report.violations[:5])
        more = "" if len(report.violations) <= 5 else f" 等 {len(report.violations)} 项"
        super().__init__(f"算例校验失败: {lines}{more}")


# 网络
class NetworkError(GridwaveError):
    """网络建模错误"""


class SingularBranch(NetworkError):
    def __init__(self, from_bus, to_bus):
        self.from_bus = from_bus
        self.to_bus = to_bus
        super().__init__(f"支路阻抗为零: {from_bus}-{to_bus}")


class UnknownBus(NetworkError):
    def __init__(self, bus):
        self.bus = bus
        super().__init__(f"未知母线: {bus}")


class ZeroVoltageBus(NetworkError):
    def __init__(self, bus, v_mag: float):
        self.bus = bus
        self.v_mag = v_mag
        super().__init__(f"母线 {bus} 电压幅值过低: {v_mag:.3e}")


class SingularInterior(NetworkError):
    def __init__(self, detail: str = ""):
        super().__init__(f"消去节点导纳子阵奇异 {detail}".strip())


class SingularResBlock(NetworkError):
    def __init__(self, detail: str = ""):
        super().__init__(f"新能源母线导纳子阵奇异 {detail}".strip())


# 潮流
class PowerFlowError(GridwaveError):
    """潮流计算错误"""


class Diverged(PowerFlowError):
    def __init__(self, iterations: int, mismatch: float):
        self.iterations = iterations
        self.mismatch = mismatch
        super().__init__(f"潮流不收敛: 迭代 {iterations} 次, 最大不平衡量 {mismatch:.3e}")


class SingularJacobian(PowerFlowError):
    def __init__(self, iteration: int):
        self.iteration = iteration
        super().__init__(f"第 {iteration} 次迭代雅可比矩阵奇异")


# 动态元件
class NonPhysicalInit(GridwaveError):
    def __init__(self, device: str, detail: str = ""):
        self.device = device
        super().__init__(f"{device} 初始化结果非物理 {detail}".strip())


class InitInfeasible(GridwaveError):
    def __init__(self, device: str, detail: str = ""):
        self.device = device
        super().__init__(f"{device} 初始工作点超出限幅 {detail}".strip())


# 时域仿真
class SimulationError(GridwaveError):
    """时域仿真错误"""


class InitResidualTooLarge(SimulationError):
    def __init__(self, residual: float, label: Optional[str] = None):
        self.residual = residual
        self.label = label
        super().__init__(f"初始化残差过大: {residual:.3e} ({label})")


class NumericalBlowup(SimulationError):
    def __init__(self, t: float, label: Optional[str] = None):
        self.t = t
        self.label = label
        super().__init__(f"数值发散: t={t:.6f}s 状态 {label}")


# 小信号
class SmallSignalError(GridwaveError):
    """小信号分析错误"""


class NotAtEquilibrium(SmallSignalError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"线性化点不是平衡点: 残差 {residual:.3e}")


class StepUnderflow(SmallSignalError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"差分步长下溢: {label}")


class DefectiveMatrix(SmallSignalError):
    def __init__(self, condition: float):
        self.condition = condition
        super().__init__(f"特征向量矩阵病态: 条件数 {condition:.3e}")


# 频域
class FrequencyResponseError(GridwaveError):
    """频域分析错误"""


class GridHitsPole(FrequencyResponseError):
    def __init__(self, omega: float, pole: complex):
        self.omega = omega
        self.pole = pole
        super().__init__(f"频率点 {omega:.6g} rad/s 落在极点 {pole:.6g} 上")


class AmbiguousPhaseUnwrap(FrequencyResponseError):
    def __init__(self, omega: float, jump_deg: float):
        self.omega = omega
        self.jump_deg = jump_deg
        super().__init__(f"相位展开不确定: {omega:.6g} rad/s 处相邻点跳变 {jump_deg:.1f}°")


# 流水线
class PipelineStageError(GridwaveError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"流水线阶段 {stage} 失败: {cause}")


class EmptyFilter(SmallSignalError):
    def __init__(self, pattern: str):
        self.pattern = pattern
        super().__init__(f"状态筛选模式没有匹配项: {pattern}")


class IoError(GridwaveError):
    """结果文件写入失败"""

    def __init__(self, path, detail: str = ""):
        self.path = str(path)
        super().__init__(f"无法写入 {self.path} {detail}".strip())
