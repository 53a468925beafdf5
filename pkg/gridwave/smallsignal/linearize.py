"""
数值线性化

中心差分求 A、B、C、D；可选地消去参考机转子角，得到相对角模型。
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import NotAtEquilibrium, StepUnderflow, UsageError
from .config import SMALLSIGNAL_CONFIG

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IoSelection:
    """B、C 矩阵所用的输入、输出标签"""

    inputs: Tuple[str, ...] = ()
    outputs: Tuple[str, ...] = ()


@dataclass
class LinearModel:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    state_labels: Tuple[str, ...]
    input_labels: Tuple[str, ...]
    output_labels: Tuple[str, ...]
    equilibrium: object = field(default=None, repr=False)
    relative_angles: bool = False
    reference: Optional[str] = None

    def __post_init__(self):
        n, p, q = len(self.state_labels), len(self.input_labels), len(self.output_labels)
        self.a = np.asarray(self.a, dtype=float).reshape(n, n)
        self.b = np.asarray(self.b, dtype=float).reshape(n, p)
        self.c = np.asarray(self.c, dtype=float).reshape(q, n)
        self.d = np.asarray(self.d, dtype=float).reshape(q, p)

    @property
    def n_states(self) -> int:
        return len(self.state_labels)

    def input_index(self, label: str) -> int:
        try:
            return self.input_labels.index(label)
        except ValueError:
            raise UsageError(f"模型中没有输入 {label}，可选: {', '.join(self.input_labels)}")

    def output_index(self, label: str) -> int:
        try:
            return self.output_labels.index(label)
        except ValueError:
            raise UsageError(f"模型中没有输出 {label}，可选: {', '.join(self.output_labels)}")

    def siso(self, input_label: str, output_label: str):
        """取单输入单输出通道 (A, b, c, d)"""
        j = self.input_index(input_label)
        i = self.output_index(output_label)
        return self.a, self.b[:, j], self.c[i, :], float(self.d[i, j])

    def transfer(self, s: complex) -> np.ndarray:
        """C(sI − A)⁻¹B + D"""
        n = self.n_states
        if n == 0:
            return self.d.astype(complex)
        x = np.linalg.solve(s * np.eye(n) - self.a, self.b.astype(complex))
        return self.c @ x + self.d

    def write_matrices(self, out_dir, float_format: str = "%.10g") -> List[Path]:
        """写出 A.csv、B.csv、C.csv、D.csv，首列为行标签"""
        out_dir = Path(out_dir)
        blocks = {
            "A": (self.a, self.state_labels, self.state_labels),
            "B": (self.b, self.state_labels, self.input_labels),
            "C": (self.c, self.output_labels, self.state_labels),
            "D": (self.d, self.output_labels, self.input_labels),
        }
        written = []
        for name, (matrix, rows, cols) in blocks.items():
            frame = pd.DataFrame(matrix, columns=list(cols))
            frame.insert(0, "row", list(rows))
            path = out_dir / f"{name}.csv"
            frame.to_csv(path, index=False, float_format=float_format)
            written.append(path)
        return written


def _steps(x0: np.ndarray, labels: Sequence[str], scale: float) -> np.ndarray:
    h = np.maximum(SMALLSIGNAL_CONFIG["abs_step"], SMALLSIGNAL_CONFIG["rel_step"] * np.abs(x0)) * scale
    for j, (value, step) in enumerate(zip(x0, h)):
        if value + step == value or value - step == value:
            raise StepUnderflow(labels[j])
    return h


def _central_columns(fun: Callable, base: np.ndarray, steps: np.ndarray, rows: int) -> np.ndarray:
    out = np.zeros((rows, base.size))
    for j, h in enumerate(steps):
        plus = base.copy()
        minus = base.copy()
        plus[j] += h
        minus[j] -= h
        out[:, j] = (np.asarray(fun(plus)) - np.asarray(fun(minus))) / (2.0 * h)
    return out


def reduce_reference_angle(a, b, c, g: np.ndarray, ref: int):
    """
    消去参考转子角

    z = y − g_y·δ_ref，A g = 0 时 ż = (A_yy − g_y·a_ref,y) z + (B_y − g_y·B_ref) u。

    Args:
        a, b, c: 绝对角模型矩阵
        g: 角度平移切向量（g[ref] = 1）
        ref: 参考转子角下标

    Returns:
        (a_z, b_z, c_z, keep)
    """
    n = a.shape[0]
    keep = np.array([k for k in range(n) if k != ref], dtype=int)
    g_y = g[keep][:, None]
    a_z = a[np.ix_(keep, keep)] - g_y @ a[ref, keep][None, :]
    b_z = b[keep, :] - g_y @ b[ref, :][None, :]
    c_z = c[:, keep]
    return a_z, b_z, c_z, keep


def project_null_direction(a: np.ndarray, g: np.ndarray) -> np.ndarray:
    """A ← A − (A g) gᵀ / (gᵀ g)，使 A g = 0 在舍入误差内成立"""
    norm2 = float(g @ g)
    if norm2 == 0.0:
        return a
    return a - np.outer(a @ g, g) / norm2


def linearize(
    rhs: Callable,
    x0,
    u0,
    io_selection: IoSelection,
    state_labels: Optional[Sequence[str]] = None,
    input_labels: Optional[Sequence[str]] = None,
    output_fn: Optional[Callable] = None,
    rotation: Optional[Tuple[np.ndarray, int]] = None,
    invariant: Optional[np.ndarray] = None,
    equilibrium_tol: Optional[float] = None,
    step_scale: float = 1.0,
    equilibrium=None,
) -> LinearModel:
    """
    在平衡点附近中心差分线性化

    Args:
        rhs: rhs(x, u) -> dx/dt
        x0: 平衡点状态
        u0: 全部输入的标称值
        io_selection: 选作 B 列的输入标签和选作 C 行的输出标签
        state_labels: 状态标签，缺省为 x1..xn
        input_labels: u0 各分量的标签，缺省为 u1..um
        output_fn: output_fn(x, u) -> 所选输出；缺省时输出必须是状态标签
        rotation: (g, ref)，给出时消去参考转子角
        invariant: 满足 A·g = 0 的方向 g；给出时从 A 中去掉差分误差在 g 上的分量
        equilibrium_tol: 平衡点判据，缺省 1e-5
        step_scale: 差分步长倍率
        equilibrium: 记录在模型中的平衡点对象

    Returns:
        LinearModel
    """
    x0 = np.asarray(x0, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    n = x0.size
    state_labels = tuple(state_labels) if state_labels is not None else tuple(f"x{k + 1}" for k in range(n))
    input_labels = tuple(input_labels) if input_labels is not None else tuple(f"u{k + 1}" for k in range(u0.size))
    tol = SMALLSIGNAL_CONFIG["equilibrium_tol"] if equilibrium_tol is None else equilibrium_tol

    missing = [label for label in io_selection.inputs if label not in input_labels]
    if missing:
        raise UsageError(f"未知输入标签: {', '.join(missing)}")
    in_idx = np.array([input_labels.index(label) for label in io_selection.inputs], dtype=int)

    if output_fn is None:
        missing = [label for label in io_selection.outputs if label not in state_labels]
        if missing:
            raise UsageError(f"未知输出标签: {', '.join(missing)}")
        out_idx = [state_labels.index(label) for label in io_selection.outputs]

        def output_fn(x, u):
            return np.asarray(x)[out_idx]

    f0 = np.asarray(rhs(x0, u0), dtype=float)
    residual = float(np.max(np.abs(f0))) if f0.size else 0.0
    if residual > tol:
        raise NotAtEquilibrium(residual)

    hx = _steps(x0, state_labels, step_scale)
    a = _central_columns(lambda x: rhs(x, u0), x0, hx, n)
    if invariant is not None and n:
        a = project_null_direction(a, np.asarray(invariant, dtype=float))

    u_sel = u0[in_idx]
    hu = _steps(u_sel, io_selection.inputs, step_scale) if u_sel.size else np.zeros(0)

    def with_inputs(values):
        u = u0.copy()
        u[in_idx] = values
        return u

    b = _central_columns(lambda v: rhs(x0, with_inputs(v)), u_sel, hu, n)
    q = len(io_selection.outputs)
    c = _central_columns(lambda x: output_fn(x, u0), x0, hx, q)
    d = _central_columns(lambda v: output_fn(x0, with_inputs(v)), u_sel, hu, q)

    relative = False
    reference = None
    labels = state_labels
    if rotation is not None and n:
        g, ref = rotation
        a, b, c, keep = reduce_reference_angle(a, b, c, np.asarray(g, dtype=float), ref)
        labels = tuple(state_labels[k] for k in keep)
        relative = True
        reference = state_labels[ref]

    logger.info(
        f"线性化完成: {len(labels)} 个状态, {len(io_selection.inputs)} 个输入, "
        f"{q} 个输出, 平衡点残差 {residual:.3e}" + (f", 参考角 {reference}" if relative else "")
    )
    return LinearModel(
        a=a,
        b=b,
        c=c,
        d=d,
        state_labels=labels,
        input_labels=tuple(io_selection.inputs),
        output_labels=tuple(io_selection.outputs),
        equilibrium=equilibrium if equilibrium is not None else x0,
        relative_angles=relative,
        reference=reference,
    )


def default_io(system) -> IoSelection:
    """缺省输入：全部 v_ref 与新能源 q_ref；缺省输出：全部同步机 ω"""
    scenario = system.scenario
    inputs = tuple(scenario.input_selection) or tuple(
        label for label in system.input_labels if label.endswith(".v_ref") or label.endswith(".q_ref")
    )
    outputs = tuple(scenario.output_selection) or tuple(system.output_labels_default())
    return IoSelection(inputs, outputs)


def linearize_system(
    system,
    io_selection: Optional[IoSelection] = None,
    relative_angles: Optional[bool] = None,
    step_scale: float = 1.0,
    equilibrium_tol: Optional[float] = None,
) -> LinearModel:
    """
    在初始化平衡点处线性化 DynamicSystem（故障前拓扑）

    Args:
        system: DynamicSystem
        io_selection: 输入输出选择，缺省见 default_io
        relative_angles: 是否消去参考机转子角，缺省取场景设置
        step_scale: 差分步长倍率

    Returns:
        LinearModel
    """
    io = default_io(system) if io_selection is None else io_selection
    unknown = [label for label in io.outputs if not system.is_output_label(label)]
    if unknown:
        raise UsageError(f"未知输出标签: {', '.join(unknown)}")
    if relative_angles is None:
        relative_angles = system.scenario.relative_angles
    system.reset()

    rotation = None
    invariant = None
    if system.layout.n_machines:
        invariant = system.rotation_generator()
        if relative_angles:
            ref = system.layout.index[f"{system.layout.machine_labels[0]}.delta"]
            rotation = (invariant, ref)

    outputs = list(io.outputs)
    return linearize(
        lambda x, u: system.rhs(0.0, x, u, topology="pre"),
        system.x0,
        system.u0,
        io,
        state_labels=system.state_labels,
        input_labels=system.input_labels,
        output_fn=lambda x, u: system.outputs(x, u, outputs),
        rotation=rotation,
        invariant=invariant,
        equilibrium_tol=equilibrium_tol,
        step_scale=step_scale,
        equilibrium=system.initial_state(),
    )
