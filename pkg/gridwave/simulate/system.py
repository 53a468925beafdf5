"""
全系统微分方程装配

次暂态电势 → 旋转到网络坐标 → 混合边界求解 → 电流旋转回 dq → 各元件方程。
拓扑按调用方给定，缺省按时刻选择：t < t_f1 故障前，t_f1 <= t < t_f2 故障中，其余故障后。
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..dynamics.machine import (
    ExciterState,
    MachineSetpoints,
    MachineState,
    TurbineState,
    exciter_rhs,
    init_machine,
    machine_frame_rotation,
    machine_rhs,
    subtransient_emf,
    turbine_rhs,
)
from ..dynamics.params import stack_machine_params, stack_res_params
from ..dynamics.res import (
    ResSetpoints,
    ResState,
    init_res,
    measured_q,
    q_command_held,
    res_current_commands,
    res_power_commands,
    res_rhs,
)
from ..network.reduction import build_reduced_set, mixed_boundary_solve
from ..network.ybus import absorb_loads, build_ybus
from ..powerflow.newton import solve_powerflow
from .config import SIMULATE_CONFIG
from .layout import MACHINE_STATES, RES_STATES, StateLayout, SystemState

logger = logging.getLogger(__name__)

OMEGA_S_INPUT = "omega_s"


def select_topology(t: float, scenario) -> str:
    """按时刻选择网络拓扑"""
    if not scenario.has_fault:
        return "pre"
    if t < scenario.t_f1:
        return "pre"
    if t < scenario.t_f2:
        return "fault"
    return "post"


def input_labels_for(machine_labels: Sequence[str], res_labels: Sequence[str]) -> List[str]:
    labels = []
    for dev in machine_labels:
        labels += [f"{dev}.v_ref", f"{dev}.p_c"]
    for dev in res_labels:
        labels += [f"{dev}.q_ref", f"{dev}.p_ref"]
    labels.append(OMEGA_S_INPUT)
    return labels


@dataclass
class NetworkSnapshot:
    """一次代数求解的结果"""

    dx: np.ndarray
    e_internal: np.ndarray
    i_machine: np.ndarray
    v_terminal: np.ndarray
    v_res: np.ndarray
    v_all: Optional[np.ndarray]
    res_commands: tuple
    res_frozen: np.ndarray


class DynamicSystem:
    """
    已初始化的动态系统

    持有降阶网络、堆叠参数、平衡点 x0 与全部输入的标称值 u0。
    新能源低电压冻结所需的“上一次指令”由 commit() 在每个被接受的积分步后更新。
    """

    def __init__(self, case, pf_solution, rns, x0, u0, init_commands):
        self.case = case
        self.scenario = case.scenario
        self.pf = pf_solution
        self.rns = rns
        self.layout = StateLayout(tuple(case.machine_labels), tuple(case.res_labels))
        self.omega_s = 2.0 * np.pi * self.scenario.freq_hz
        self.machine_params, self.exciter_params, self.turbine_params = stack_machine_params(case)
        self.res_params = stack_res_params(case)
        self.y_g = 1.0 / (self.machine_params.r_s + 1j * self.machine_params.x_d_pp)

        self.input_labels = tuple(input_labels_for(self.layout.machine_labels, self.layout.res_labels))
        self.input_index = {label: i for i, label in enumerate(self.input_labels)}
        self.x0 = np.asarray(x0, dtype=float)
        self.u0 = np.asarray(u0, dtype=float)
        self._init_commands = tuple(np.array(c, dtype=float) for c in init_commands)
        self._held = self._init_commands

        self._m = {name: self.layout.machine_slice(name) for name in MACHINE_STATES}
        self._r = {name: self.layout.res_slice(name) for name in RES_STATES}
        self._u_v_ref = np.arange(self.layout.n_machines, dtype=int) * 2
        self._u_p_c = self._u_v_ref + 1
        base = 2 * self.layout.n_machines
        self._u_q_ref = base + np.arange(self.layout.n_res, dtype=int) * 2
        self._u_p_ref = self._u_q_ref + 1
        self._u_omega = len(self.input_labels) - 1

    @property
    def state_labels(self):
        return self.layout.labels

    @property
    def n_states(self) -> int:
        return self.layout.n_states

    def initial_state(self) -> SystemState:
        return SystemState(self.x0.copy(), self.layout)

    def reset(self):
        """恢复初始化时的新能源保持指令"""
        self._held = self._init_commands

    def evaluate(self, x, u=None, topology: str = "pre", recover: bool = False, rns=None) -> NetworkSnapshot:
        x = np.asarray(x, dtype=float)
        u = self.u0 if u is None else np.asarray(u, dtype=float)
        m, r = self._m, self._r
        mp, ep, tp, rp = self.machine_params, self.exciter_params, self.turbine_params, self.res_params

        ms = MachineState(*(x[m[name]] for name in MACHINE_STATES[:6]))
        exc = ExciterState(x[m["e_fd"]], x[m["r_f"]], x[m["v_r"]])
        tur = TurbineState(x[m["t_m"]], x[m["p_sv"]])
        msp = MachineSetpoints(u[self._u_v_ref], u[self._u_p_c])
        omega_in = u[self._u_omega]

        e_d_pp, e_q_pp = subtransient_emf(ms, mp)
        e_internal = machine_frame_rotation(e_d_pp + 1j * e_q_pp, ms.delta, "to_network")

        rs = ResState(x[r["i_p"]], x[r["i_q"]], x[r["q_pi"]])
        i_res = rs.i_p + 1j * rs.i_q
        sol = mixed_boundary_solve(self.rns if rns is None else rns, topology, e_internal, i_res, recover=recover)

        i_dq = machine_frame_rotation(sol.i_machine, ms.delta, "to_dq")
        v_terminal = e_internal - sol.i_machine / self.y_g

        dx = np.zeros_like(x)
        d_machine = machine_rhs(ms, i_dq.real, i_dq.imag, exc.e_fd, tur.t_m, mp, self.omega_s, omega_ref=omega_in)
        for name, value in zip(MACHINE_STATES[:6], d_machine):
            dx[m[name]] = value
        d_exc = exciter_rhs(exc, np.abs(v_terminal), msp, ep)
        for name, value in zip(("e_fd", "r_f", "v_r"), d_exc):
            dx[m[name]] = value
        d_tur = turbine_rhs(tur, ms.omega, msp, tp, omega_in)
        for name, value in zip(("t_m", "p_sv"), d_tur):
            dx[m[name]] = value

        v_res = sol.v_res
        rsp = ResSetpoints(u[self._u_p_ref], u[self._u_q_ref])
        q_meas = measured_q(v_res, rs.i_p, rs.i_q)
        p_cmd, q_cmd = res_power_commands(rs, q_meas, rsp, rp)
        cmds = res_current_commands(v_res, p_cmd, q_cmd, rp, last=self._held)
        held = q_command_held(v_res, p_cmd, q_cmd, rp)
        for name, value in zip(RES_STATES, res_rhs(rs, cmds, q_meas, rsp, rp, q_clamped=held)):
            dx[r[name]] = value

        frozen = np.abs(v_res) < rp.v_freeze
        return NetworkSnapshot(dx, e_internal, sol.i_machine, v_terminal, v_res, sol.v_all, cmds, frozen)

    def rhs(self, t: float, x, u=None, topology: Optional[str] = None) -> np.ndarray:
        """
        系统导数 dx/dt

        Args:
            t: 时刻（s），仅在未指定拓扑时用于选择拓扑
            x: 状态向量
            u: 输入向量，缺省为 u0
            topology: "pre"、"fault"、"post"

        Returns:
            导数向量
        """
        if topology is None:
            topology = select_topology(t, self.scenario)
        return self.evaluate(x, u, topology).dx

    def commit(self, x, u=None, topology: str = "pre") -> NetworkSnapshot:
        """接受一个积分步：更新未冻结电站的保持指令，返回含全部母线电压的快照"""
        snap = self.evaluate(x, u, topology, recover=True)
        if self.layout.n_res:
            frozen = snap.res_frozen
            if np.any(frozen):
                logger.debug(f"新能源指令冻结: {[self.layout.res_labels[k] for k in np.flatnonzero(frozen)]}")
            self._held = tuple(np.where(frozen, old, new) for old, new in zip(self._held, snap.res_commands))
        return snap

    def bus_voltages(self, x, u=None, topology: str = "pre") -> np.ndarray:
        return self.evaluate(x, u, topology, recover=True).v_all

    def output_labels_default(self) -> List[str]:
        return [f"{dev}.omega" for dev in self.layout.machine_labels]

    def outputs(self, x, u=None, labels: Sequence[str] = (), topology: str = "pre") -> np.ndarray:
        """
        输出量：状态标签直接取值，"bus{id}.v_mag" 取母线电压幅值

        Args:
            x: 状态向量
            u: 输入向量
            labels: 输出标签

        Returns:
            输出向量
        """
        x = np.asarray(x, dtype=float)
        values = np.zeros(len(labels))
        v_all = None
        for k, label in enumerate(labels):
            if label in self.layout.index:
                values[k] = x[self.layout.index[label]]
                continue
            if label.startswith("bus") and label.endswith(".v_mag"):
                if v_all is None:
                    v_all = self.bus_voltages(x, u, topology)
                bus = int(label[3:-len(".v_mag")])
                values[k] = abs(v_all[self.rns.bus_ids.index(bus)])
                continue
            raise KeyError(f"未知输出标签: {label}")
        return values

    def is_output_label(self, label: str) -> bool:
        if label in self.layout.index:
            return True
        if label.startswith("bus") and label.endswith(".v_mag"):
            body = label[3:-len(".v_mag")]
            return body.isdigit() and int(body) in self.rns.bus_ids
        return False

    def rotation_generator(self, x=None) -> np.ndarray:
        """
        全网角度整体平移的切向量

        各同步机 δ 分量为 1；新能源电流随网络坐标旋转，(i_p, i_q) 分量为 (−i_q, i_p)。
        """
        x = self.x0 if x is None else np.asarray(x, dtype=float)
        g = np.zeros(self.n_states)
        g[self._m["delta"]] = 1.0
        g[self._r["i_p"]] = -x[self._r["i_q"]]
        g[self._r["i_q"]] = x[self._r["i_p"]]
        return g


def _device_injections(case, pf) -> Dict[int, complex]:
    """各母线由动态设备提供的复功率：网络注入加本地负荷"""
    s_device = pf.s_inj + pf.s_load
    return {bus_id: complex(s) for bus_id, s in zip(pf.bus_ids, s_device)}


def build_system(case, pf_solution=None, fault_admittance: Optional[float] = None) -> DynamicSystem:
    """
    潮流、负荷并入、网络降阶并初始化全部动态设备

    Args:
        case: NetworkCase
        pf_solution: 已有潮流结果，缺省时重新求解
        fault_admittance: 覆盖算例中的故障导纳

    Returns:
        DynamicSystem
    """
    scenario = case.scenario
    pf = solve_powerflow(case) if pf_solution is None else pf_solution
    y_loaded = absorb_loads(build_ybus(case), pf)
    res_buses = [plant.bus for plant in case.res_plants]
    if fault_admittance is None:
        fault_admittance = scenario.fault_admittance
    rns = build_reduced_set(
        y_loaded,
        case.machines,
        res_buses,
        fault_bus=scenario.fault_bus if scenario.has_fault else None,
        fault_admittance=fault_admittance,
    )

    omega_s = 2.0 * np.pi * scenario.freq_hz
    s_device = _device_injections(case, pf)
    v_bus = {bus_id: complex(v) for bus_id, v in zip(pf.bus_ids, pf.v)}

    devices_at = {}
    for plant in list(case.machines) + list(case.res_plants):
        devices_at[plant.bus] = devices_at.get(plant.bus, 0) + 1
    eps = SIMULATE_CONFIG["injection_eps"]
    for bus_id, s in s_device.items():
        if abs(s) > eps and bus_id not in devices_at:
            logger.warning(f"母线 {bus_id} 有注入 {s:.4f} 但没有动态设备，该注入不会进入动态模型")

    x0: List[float] = []
    u_machine: List[float] = []
    for k, machine in enumerate(case.machines):
        share = s_device[machine.bus] / devices_at[machine.bus]
        ms, exc, tur, sp = init_machine(
            v_bus[machine.bus], share, machine, case.exciter_for(k), case.turbine_for(k), omega_s
        )
        x0 += [ms.delta, ms.omega, ms.e_q_p, ms.e_d_p, ms.psi_1d, ms.psi_2q]
        x0 += [exc.e_fd, exc.r_f, exc.v_r, tur.t_m, tur.p_sv]
        u_machine += [sp.v_ref, sp.p_c]

    u_res: List[float] = []
    ip_cmd, iq_cmd = [], []
    for plant in case.res_plants:
        share = s_device[plant.bus] / devices_at[plant.bus]
        rs, sp = init_res(v_bus[plant.bus], share, plant)
        x0 += [rs.i_p, rs.i_q, rs.q_pi]
        u_res += [sp.q_ref, sp.p_ref]
        ip_cmd.append(rs.i_p)
        iq_cmd.append(rs.i_q)

    u0 = u_machine + u_res + [omega_s]
    system = DynamicSystem(case, pf, rns, np.array(x0, dtype=float), np.array(u0), (ip_cmd, iq_cmd))
    logger.info(
        f"动态系统初始化完成: {system.layout.n_machines} 台同步机, "
        f"{system.layout.n_res} 个新能源电站, {system.n_states} 个状态"
    )
    return system


def system_rhs(t: float, x, rns, case, system: Optional[DynamicSystem] = None) -> np.ndarray:
    """
    按时刻选择拓扑计算全系统导数

    Args:
        t: 时刻
        x: 状态向量或 SystemState
        rns: 降阶网络（保留节点顺序需与 system 一致）
        case: NetworkCase
        system: 已初始化的 DynamicSystem，缺省时由 case 构造

    Returns:
        dx/dt
    """
    if system is None:
        system = build_system(case)
    if isinstance(x, SystemState):
        x = x.x
    return system.evaluate(x, topology=select_topology(t, case.scenario), rns=rns).dx
