"""
牛顿-拉夫逊交流潮流（极坐标形式，完整雅可比）

平启动：pq 母线 1∠0，pv 母线 v_set∠0，平衡母线 v_set∠theta_set。
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..errors import Diverged, SingularJacobian, UsageError
from ..network.ybus import AdmittanceMatrix, build_ybus
from .config import POWERFLOW_CONFIG, validate_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerFlowSolution:
    """潮流结果；p_inj、q_inj 为母线净注入功率（发电减负荷）"""

    bus_ids: Tuple[int, ...]
    v_mag: np.ndarray
    v_ang: np.ndarray
    p_inj: np.ndarray
    q_inj: np.ndarray
    iterations: int
    max_mismatch: float
    s_load: np.ndarray = field(repr=False, default=None)
    mismatch_history: Tuple[float, ...] = field(repr=False, default=())

    @property
    def v(self) -> np.ndarray:
        return self.v_mag * np.exp(1j * self.v_ang)

    @property
    def s_inj(self) -> np.ndarray:
        return self.p_inj + 1j * self.q_inj

    def row(self, bus_id: int) -> int:
        return self.bus_ids.index(bus_id)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "bus": list(self.bus_ids),
                "v_mag": self.v_mag,
                "theta_deg": np.rad2deg(self.v_ang),
                "p_inj": self.p_inj,
                "q_inj": self.q_inj,
            }
        )


def compute_injections(y: AdmittanceMatrix, v: np.ndarray) -> np.ndarray:
    """
    计算母线注入复功率 S_i = V_i·conj(Σ_k Y_ik·V_k)

    Args:
        y: 导纳矩阵
        v: 母线电压相量

    Returns:
        复功率数组
    """
    v = np.asarray(v, dtype=complex)
    return v * np.conj(y.entries @ v)


def _jacobian(ybus: np.ndarray, v: np.ndarray, pvpq: np.ndarray, pq: np.ndarray) -> np.ndarray:
    """极坐标雅可比：对相角（pv+pq）和幅值（pq）求导"""
    i_bus = ybus @ v
    v_norm = v / np.abs(v)
    ds_dvm = np.diag(v) @ np.conj(ybus @ np.diag(v_norm)) + np.conj(np.diag(i_bus)) @ np.diag(v_norm)
    ds_dva = 1j * np.diag(v) @ np.conj(np.diag(i_bus) - ybus @ np.diag(v))

    j11 = ds_dva[np.ix_(pvpq, pvpq)].real
    j12 = ds_dvm[np.ix_(pvpq, pq)].real
    j21 = ds_dva[np.ix_(pq, pvpq)].imag
    j22 = ds_dvm[np.ix_(pq, pq)].imag
    return np.block([[j11, j12], [j21, j22]])


def _mismatch(ybus, v, s_spec, pvpq, pq) -> np.ndarray:
    mis = v * np.conj(ybus @ v) - s_spec
    return np.concatenate([mis[pvpq].real, mis[pq].imag])


def solve_powerflow(case, tol: Optional[float] = None, max_iter: Optional[int] = None) -> PowerFlowSolution:
    """
    求解交流潮流

    Args:
        case: NetworkCase
        tol: 收敛判据，默认 1e-8
        max_iter: 最大迭代次数（含收敛检查），默认 20

    Returns:
        PowerFlowSolution；iterations 为不平衡量的计算次数，平启动即收敛时为 1

    Raises:
        UsageError: tol 或 max_iter 不合法
    """
    tol = POWERFLOW_CONFIG["tol"] if tol is None else tol
    max_iter = POWERFLOW_CONFIG["max_iter"] if max_iter is None else max_iter
    if not validate_settings(tol, max_iter):
        raise UsageError(f"潮流参数不合法: tol={tol}, max_iter={max_iter}")

    y = build_ybus(case)
    ybus = y.entries
    kinds = np.array([bus.kind for bus in case.buses])
    pv = np.flatnonzero(kinds == "pv")
    pq = np.flatnonzero(kinds == "pq")
    pvpq = np.concatenate([pv, pq])

    s_load = np.array([bus.s_load for bus in case.buses], dtype=complex)
    p_gen = np.array([bus.p_gen for bus in case.buses], dtype=float)
    s_spec = p_gen - s_load

    v_mag = np.array([1.0 if bus.kind == "pq" else bus.v_set for bus in case.buses], dtype=float)
    v_ang = np.array([np.deg2rad(bus.theta_set) if bus.kind == "slack" else 0.0 for bus in case.buses])
    v = v_mag * np.exp(1j * v_ang)

    n_pvpq = pvpq.size
    history: List[float] = []
    iterations = 0

    while True:
        f = _mismatch(ybus, v, s_spec, pvpq, pq)
        norm = float(np.max(np.abs(f))) if f.size else 0.0
        history.append(norm)
        iterations += 1
        logger.debug(f"潮流第 {iterations} 次迭代: 最大不平衡量 {norm:.3e}")
        if norm <= tol:
            break
        if iterations >= max_iter:
            logger.warning(f"潮流在 {iterations} 次迭代后仍未收敛，最大不平衡量 {norm:.3e}")
            raise Diverged(iterations, norm)

        jac = _jacobian(ybus, v, pvpq, pq)
        cond = np.linalg.cond(jac)
        if not np.isfinite(cond) or cond > POWERFLOW_CONFIG["jacobian_cond"]:
            raise SingularJacobian(iterations)
        try:
            dx = -np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            raise SingularJacobian(iterations)

        v_ang[pvpq] += dx[:n_pvpq]
        v_mag[pq] += dx[n_pvpq:]
        v = v_mag * np.exp(1j * v_ang)

    s_inj = compute_injections(y, v)
    logger.info(f"潮流收敛: {iterations} 次迭代, 最大不平衡量 {norm:.3e}")
    return PowerFlowSolution(
        bus_ids=tuple(bus.id for bus in case.buses),
        v_mag=np.abs(v),
        v_ang=np.angle(v),
        p_inj=s_inj.real,
        q_inj=s_inj.imag,
        iterations=iterations,
        max_mismatch=norm,
        s_load=s_load,
        mismatch_history=tuple(history),
    )


def write_solution(solution: PowerFlowSolution, out_dir, float_format: str = "%.10g"):
    """
    写出 solution.csv（bus,v_mag,theta_deg,p_inj,q_inj）

    Args:
        solution: 潮流结果
        out_dir: 输出目录

    Returns:
        文件路径
    """
    from pathlib import Path

    path = Path(out_dir) / POWERFLOW_CONFIG["solution_file"]
    solution.to_frame().to_csv(path, index=False, float_format=float_format)
    return path
