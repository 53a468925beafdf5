"""
节点导纳矩阵

支路按 π 型等值电路装配，变比与移相角放在首端：
Yff = (ys + jb/2)/|t|², Yft = −ys/conj(t), Ytf = −ys/t, Ytt = ys + jb/2。
"""

import logging
from dataclasses import dataclass
from typing import Hashable, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import SingularBranch, UnknownBus, ZeroVoltageBus
from .config import NETWORK_CONFIG

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdmittanceMatrix:
    """稠密复导纳矩阵，node_labels[i] 是第 i 行对应的节点（母线编号或机内节点标签）"""

    entries: np.ndarray
    node_labels: Tuple[Hashable, ...]

    @property
    def n(self) -> int:
        return len(self.node_labels)

    def index_of(self, label) -> int:
        try:
            return self.node_labels.index(label)
        except ValueError:
            raise UnknownBus(label)

    def indices(self, labels: Sequence) -> np.ndarray:
        return np.array([self.index_of(label) for label in labels], dtype=int)

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, self.entries.T, rtol=0.0, atol=tol))


def build_ybus(case) -> AdmittanceMatrix:
    """
    装配母线导纳矩阵

    Args:
        case: NetworkCase

    Returns:
        AdmittanceMatrix，行列顺序与 case.buses 一致
    """
    bus_row = {bus.id: row for row, bus in enumerate(case.buses)}
    n = len(case.buses)
    y = np.zeros((n, n), dtype=complex)

    for br in case.branches:
        if not br.status:
            continue
        if br.r == 0 and br.x == 0:
            raise SingularBranch(br.from_bus, br.to_bus)
        f = bus_row[br.from_bus]
        t = bus_row[br.to_bus]
        ys = 1.0 / complex(br.r, br.x)
        tap = br.ratio * np.exp(1j * np.deg2rad(br.phase_shift))
        charging = 1j * br.b / 2.0

        y[f, f] += (ys + charging) / (tap * np.conj(tap))
        y[f, t] += -ys / np.conj(tap)
        y[t, f] += -ys / tap
        y[t, t] += ys + charging

    for row, bus in enumerate(case.buses):
        y[row, row] += complex(bus.g_shunt, bus.b_shunt)

    logger.debug(f"导纳矩阵装配完成: {n} 个节点")
    return AdmittanceMatrix(y, tuple(bus_row))


def absorb_loads(y: AdmittanceMatrix, pf_solution) -> AdmittanceMatrix:
    """
    把负荷按恒定阻抗并入对角元

    每条母线增加 (p_load − j·q_load)/|V|²，电压取潮流结果。

    Args:
        y: 母线导纳矩阵
        pf_solution: PowerFlowSolution（提供 bus_ids、s_load 与 v_mag）

    Returns:
        新的 AdmittanceMatrix
    """
    entries = y.entries.copy()
    for bus_id, s_load, v_mag in zip(pf_solution.bus_ids, pf_solution.s_load, pf_solution.v_mag):
        if s_load == 0:
            continue
        if v_mag < NETWORK_CONFIG["zero_voltage"]:
            raise ZeroVoltageBus(bus_id, v_mag)
        row = y.index_of(bus_id)
        entries[row, row] += np.conj(s_load) / v_mag**2
    return AdmittanceMatrix(entries, y.node_labels)


def extend_machine_nodes(y: AdmittanceMatrix, machines, labels=None) -> AdmittanceMatrix:
    """
    为每台同步机增加一个内节点，经 y_g = 1/(r_s + j·x_d_pp) 接到机端母线

    Args:
        y: 已并入负荷的导纳矩阵
        machines: MachineRecord 序列
        labels: 内节点标签，默认 "G{k}.internal"

    Returns:
        扩展后的 AdmittanceMatrix（原节点在前，内节点在后）
    """
    m = len(machines)
    if m == 0:
        return y
    if labels is None:
        labels = [f"G{k + 1}{NETWORK_CONFIG['internal_suffix']}" for k in range(m)]

    n = y.n
    entries = np.zeros((n + m, n + m), dtype=complex)
    entries[:n, :n] = y.entries
    for k, machine in enumerate(machines):
        bus = y.index_of(machine.bus)
        node = n + k
        y_g = 1.0 / complex(machine.r_s, machine.x_d_pp)
        entries[node, node] += y_g
        entries[bus, bus] += y_g
        entries[node, bus] -= y_g
        entries[bus, node] -= y_g
    return AdmittanceMatrix(entries, tuple(y.node_labels) + tuple(labels))


def apply_fault(y: AdmittanceMatrix, bus, y_fault: float) -> AdmittanceMatrix:
    """
    在故障母线对角元上加接地导纳

    Args:
        y: 导纳矩阵（扩展前编号）
        bus: 故障母线编号
        y_fault: 故障导纳（pu）

    Returns:
        新的 AdmittanceMatrix
    """
    row = y.index_of(bus)
    entries = y.entries.copy()
    entries[row, row] += y_fault
    return AdmittanceMatrix(entries, y.node_labels)


def dump_admittance(y: AdmittanceMatrix, path, float_format: str = "%.10g"):
    """把非零元素写成 row,col,real,imag 形式的 CSV"""
    rows, cols = np.nonzero(y.entries)
    frame = pd.DataFrame(
        {
            "row": [y.node_labels[i] for i in rows],
            "col": [y.node_labels[j] for j in cols],
            "real": y.entries[rows, cols].real,
            "imag": y.entries[rows, cols].imag,
        }
    )
    frame.to_csv(path, index=False, float_format=float_format)
    return path
