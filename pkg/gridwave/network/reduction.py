"""
Kron 消去与混合边界求解

保留节点依次为同步机内节点和新能源母线，其余节点（含同步机机端母线）被消去。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..errors import SingularInterior, SingularResBlock, UnknownBus
from .config import NETWORK_CONFIG
from .ybus import AdmittanceMatrix, apply_fault, extend_machine_nodes

logger = logging.getLogger(__name__)

TOPOLOGIES = ("pre", "fault", "post")


@dataclass(frozen=True)
class KronRecovery:
    """
    被消去节点的电压恢复数据

    V_L = Y22⁻¹·(I_L − Y21·V_G)，其中 transfer = −Y22⁻¹·Y21 已预先算好。
    """

    retained: Tuple
    interior: Tuple
    lu: Optional[tuple]
    transfer: np.ndarray

    def recover(self, v_retained: np.ndarray, i_interior: Optional[np.ndarray] = None) -> np.ndarray:
        v_interior = self.transfer @ v_retained
        if i_interior is not None and self.lu is not None:
            v_interior = v_interior + lu_solve(self.lu, i_interior)
        return v_interior


def kron_reduce(y: AdmittanceMatrix, retained: Sequence) -> Tuple[AdmittanceMatrix, KronRecovery]:
    """
    Kron 消去：Y_red = Y11 − Y12·Y22⁻¹·Y21

    Args:
        y: 导纳矩阵
        retained: 保留节点标签（顺序即结果顺序）

    Returns:
        (Y_red, recovery)
    """
    retained = tuple(retained)
    keep = y.indices(retained)
    keep_set = set(keep.tolist())
    drop = np.array([i for i in range(y.n) if i not in keep_set], dtype=int)
    interior = tuple(y.node_labels[i] for i in drop)

    y11 = y.entries[np.ix_(keep, keep)]
    if drop.size == 0:
        recovery = KronRecovery(retained, interior, None, np.zeros((0, keep.size), dtype=complex))
        return AdmittanceMatrix(y11.copy(), retained), recovery

    y12 = y.entries[np.ix_(keep, drop)]
    y21 = y.entries[np.ix_(drop, keep)]
    y22 = y.entries[np.ix_(drop, drop)]

    cond = np.linalg.cond(y22)
    if not np.isfinite(cond) or cond > NETWORK_CONFIG["singular_cond"]:
        raise SingularInterior(f"(条件数 {cond:.3e})")

    lu = lu_factor(y22)
    if keep.size:
        transfer = -lu_solve(lu, y21)
    else:
        transfer = np.zeros((drop.size, 0), dtype=complex)
    y_red = y11 + y12 @ transfer
    return AdmittanceMatrix(y_red, retained), KronRecovery(retained, interior, lu, transfer)


@dataclass(frozen=True)
class ReducedTopology:
    """
    一种拓扑下的降阶矩阵及其分块

    [I_G; I_R] = [[A, B], [C, D]]·[E; V_R]
    """

    name: str
    y_red: AdmittanceMatrix
    recovery: KronRecovery
    n_machines: int
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    c: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)
    d_inv: Optional[np.ndarray] = field(default=None, repr=False)


def _topology(name: str, y_ext: AdmittanceMatrix, retained, n_machines: int) -> ReducedTopology:
    y_red, recovery = kron_reduce(y_ext, retained)
    m = n_machines
    entries = y_red.entries
    d = entries[m:, m:]
    d_inv = None
    if d.size:
        cond = np.linalg.cond(d)
        if np.isfinite(cond) and cond <= NETWORK_CONFIG["singular_cond"]:
            d_inv = lu_solve(lu_factor(d), np.eye(d.shape[0], dtype=complex))
        else:
            logger.warning(f"{name} 拓扑下新能源母线子阵奇异 (条件数 {cond:.3e})")
    return ReducedTopology(
        name=name,
        y_red=y_red,
        recovery=recovery,
        n_machines=m,
        a=entries[:m, :m],
        b=entries[:m, m:],
        c=entries[m:, :m],
        d=d,
        d_inv=d_inv,
    )


@dataclass(frozen=True)
class ReducedNetworkSet:
    """故障前、故障中、故障后三种拓扑的降阶网络"""

    pre: ReducedTopology
    fault: ReducedTopology
    post: ReducedTopology
    retained: Tuple
    bus_ids: Tuple
    n_machines: int
    n_res: int
    res_bus_rows: np.ndarray = field(repr=False)
    interior_bus_rows: np.ndarray = field(repr=False)

    def topology(self, name: str) -> ReducedTopology:
        if name not in TOPOLOGIES:
            raise ValueError(f"未知拓扑: {name}")
        return getattr(self, name)

    @property
    def topologies(self) -> Dict[str, ReducedTopology]:
        return {name: getattr(self, name) for name in TOPOLOGIES}


def build_reduced_set(
    y_loaded: AdmittanceMatrix,
    machines,
    res_buses: Sequence,
    fault_bus=None,
    fault_admittance: Optional[float] = None,
) -> ReducedNetworkSet:
    """
    由并入负荷后的母线导纳矩阵构造三种拓扑的降阶网络

    故障切除后拓扑与故障前相同，post 与 pre 共用同一对象。

    Args:
        y_loaded: 已并入负荷的母线导纳矩阵
        machines: MachineRecord 序列
        res_buses: 新能源电站所在母线编号
        fault_bus: 故障母线，None 表示无故障
        fault_admittance: 故障导纳，默认取配置值

    Returns:
        ReducedNetworkSet
    """
    if fault_admittance is None:
        fault_admittance = NETWORK_CONFIG["fault_admittance"]
    n_machines = len(machines)
    y_ext = extend_machine_nodes(y_loaded, machines)
    internal = tuple(y_ext.node_labels[y_loaded.n:])
    for bus in res_buses:
        if bus not in y_loaded.node_labels:
            raise UnknownBus(bus)
    retained = internal + tuple(res_buses)

    pre = _topology("pre", y_ext, retained, n_machines)
    if fault_bus is not None:
        y_fault = extend_machine_nodes(apply_fault(y_loaded, fault_bus, fault_admittance), machines)
        fault = _topology("fault", y_fault, retained, n_machines)
    else:
        fault = pre

    bus_ids = tuple(y_loaded.node_labels)
    res_rows = np.array([bus_ids.index(bus) for bus in res_buses], dtype=int)
    interior_rows = np.array([bus_ids.index(label) for label in pre.recovery.interior], dtype=int)

    logger.info(
        f"网络降阶完成: {y_ext.n} 个扩展节点 -> {len(retained)} 个保留节点"
        f"（{n_machines} 个机内节点, {len(res_buses)} 条新能源母线）"
    )
    return ReducedNetworkSet(
        pre=pre,
        fault=fault,
        post=pre,
        retained=retained,
        bus_ids=bus_ids,
        n_machines=n_machines,
        n_res=len(res_buses),
        res_bus_rows=res_rows,
        interior_bus_rows=interior_rows,
    )


@dataclass(frozen=True)
class BoundarySolution:
    i_machine: np.ndarray
    v_res: np.ndarray
    v_all: Optional[np.ndarray]


def mixed_boundary_solve(
    rns: ReducedNetworkSet,
    topology: str,
    e_internal: np.ndarray,
    i_res: np.ndarray,
    recover: bool = True,
) -> BoundarySolution:
    """
    已知机内电势与新能源注入电流，求同步机电流、新能源母线电压及全部母线电压

    v_res = D⁻¹(i_res − C·e)，i_machine = A·e + B·v_res。

    Args:
        rns: 降阶网络
        topology: "pre"、"fault" 或 "post"
        e_internal: 机内电势（网络坐标，按同步机顺序）
        i_res: 新能源注入电流（网络坐标，按电站顺序）
        recover: 是否恢复全部母线电压

    Returns:
        BoundarySolution
    """
    topo = rns.topology(topology)
    e_internal = np.asarray(e_internal, dtype=complex)
    i_res = np.asarray(i_res, dtype=complex)

    if rns.n_res:
        if topo.d_inv is None:
            raise SingularResBlock(f"({topology})")
        v_res = topo.d_inv @ (i_res - topo.c @ e_internal)
        i_machine = topo.a @ e_internal + topo.b @ v_res
    else:
        v_res = np.zeros(0, dtype=complex)
        i_machine = topo.a @ e_internal

    v_all = None
    if recover:
        v_retained = np.concatenate([e_internal, v_res])
        v_all = np.zeros(len(rns.bus_ids), dtype=complex)
        if rns.interior_bus_rows.size:
            v_all[rns.interior_bus_rows] = topo.recovery.recover(v_retained)
        if rns.n_res:
            v_all[rns.res_bus_rows] = v_res
    return BoundarySolution(i_machine, v_res, v_all)
