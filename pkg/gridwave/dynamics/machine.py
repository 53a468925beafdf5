"""
六阶同步机、IEEE I 型励磁与汽轮机调速模型

所有函数逐元素计算：参数既可以是单台设备的记录，也可以是 ParamStack，
状态量相应地为标量或数组。
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import NonPhysicalInit
from .config import DYNAMICS_CONFIG

logger = logging.getLogger(__name__)


@dataclass
class MachineState:
    delta: np.ndarray
    omega: np.ndarray
    e_q_p: np.ndarray
    e_d_p: np.ndarray
    psi_1d: np.ndarray
    psi_2q: np.ndarray


@dataclass
class ExciterState:
    e_fd: np.ndarray
    r_f: np.ndarray
    v_r: np.ndarray


@dataclass
class TurbineState:
    t_m: np.ndarray
    p_sv: np.ndarray


@dataclass
class MachineSetpoints:
    v_ref: np.ndarray
    p_c: np.ndarray


def _bound(value, default: float):
    return default if value is None else value


def machine_frame_rotation(phasor, delta, direction: str = "to_network"):
    """
    dq 坐标与网络坐标之间的旋转

    to_network 乘以 e^{j(δ−π/2)}，to_dq 乘以其共轭。

    Args:
        phasor: 复相量（标量或数组）
        delta: 转子角（rad）
        direction: "to_network" 或 "to_dq"

    Returns:
        旋转后的复相量
    """
    factor = np.exp(1j * (np.asarray(delta) - np.pi / 2))
    if direction == "to_network":
        return phasor * factor
    if direction == "to_dq":
        return phasor * np.conj(factor)
    raise ValueError(f"未知旋转方向: {direction}")


def subtransient_emf(s: MachineState, m) -> Tuple[np.ndarray, np.ndarray]:
    """
    次暂态电势 (e_d_pp, e_q_pp)

    e_q_pp = c1d·e_q_p + c2d·psi_1d，e_d_pp = c1q·e_d_p − c2q·psi_2q，
    其中 c1 + c2 = 1。
    """
    c1d = (m.x_d_pp - m.x_ls) / (m.x_d_p - m.x_ls)
    c2d = (m.x_d_p - m.x_d_pp) / (m.x_d_p - m.x_ls)
    c1q = (m.x_q_pp - m.x_ls) / (m.x_q_p - m.x_ls)
    c2q = (m.x_q_p - m.x_q_pp) / (m.x_q_p - m.x_ls)
    e_q_pp = c1d * s.e_q_p + c2d * s.psi_1d
    e_d_pp = c1q * s.e_d_p - c2q * s.psi_2q
    return e_d_pp, e_q_pp


def electrical_torque(s: MachineState, i_d, i_q, m):
    """T_e = e_d_pp·i_d + e_q_pp·i_q + (x_q_pp − x_d_pp)·i_d·i_q"""
    e_d_pp, e_q_pp = subtransient_emf(s, m)
    return e_d_pp * i_d + e_q_pp * i_q + (m.x_q_pp - m.x_d_pp) * i_d * i_q


def machine_rhs(s: MachineState, i_d, i_q, e_fd, t_m, m, omega_s: float, omega_ref=None) -> Tuple:
    """
    同步机六个状态的导数

    Args:
        s: 同步机状态
        i_d, i_q: dq 坐标下的定子电流
        e_fd: 励磁电压
        t_m: 机械转矩
        m: 同步机参数（记录或 ParamStack）
        omega_s: 额定同步角速度（rad/s）
        omega_ref: 转子角参考角速度，缺省为 omega_s

    Returns:
        (dδ, dω, dE'_q, dE'_d, dΨ1d, dΨ2q)
    """
    if omega_ref is None:
        omega_ref = omega_s
    xdl = m.x_d_p - m.x_ls
    xql = m.x_q_p - m.x_ls

    d_e_q_p = (
        -s.e_q_p
        - (m.x_d - m.x_d_p) * (i_d - (m.x_d_p - m.x_d_pp) / xdl**2 * (s.psi_1d + xdl * i_d - s.e_q_p))
        + e_fd
    ) / m.t_do_p
    d_psi_1d = (-s.psi_1d + s.e_q_p - xdl * i_d) / m.t_do_pp

    d_e_d_p = (
        -s.e_d_p
        + (m.x_q - m.x_q_p) * (i_q - (m.x_q_p - m.x_q_pp) / xql**2 * (s.psi_2q + xql * i_q + s.e_d_p))
    ) / m.t_qo_p
    d_psi_2q = (-s.psi_2q - s.e_d_p - xql * i_q) / m.t_qo_pp

    t_e = electrical_torque(s, i_d, i_q, m)
    d_delta = s.omega - omega_ref
    d_omega = omega_s / (2.0 * m.h) * (t_m - t_e - m.t_fw)
    return d_delta, d_omega, d_e_q_p, d_e_d_p, d_psi_1d, d_psi_2q


def saturation(e_fd, e):
    """S_E(E_fd) = sat_a·exp(sat_b·E_fd)"""
    return e.sat_a * np.exp(e.sat_b * e_fd)


def exciter_rhs(x: ExciterState, v_terminal, sp: MachineSetpoints, e) -> Tuple:
    """
    IEEE I 型励磁三个状态的导数

    v_r 超出限值时按限值参与计算，且在限值处向外的导数置零。

    Returns:
        (dE_fd, dR_f, dV_R)
    """
    vr_max = _bound(e.vr_max, np.inf)
    vr_min = _bound(e.vr_min, -np.inf)
    v_r = np.clip(x.v_r, vr_min, vr_max)

    d_e_fd = (-(e.k_e + saturation(x.e_fd, e)) * x.e_fd + v_r) / e.t_e
    d_r_f = (-x.r_f + e.k_f / e.t_f * x.e_fd) / e.t_f
    d_v_r = (-v_r + e.k_a * x.r_f - e.k_a * e.k_f / e.t_f * x.e_fd + e.k_a * (sp.v_ref - v_terminal)) / e.t_a

    at_upper = (x.v_r >= vr_max) & (d_v_r > 0)
    at_lower = (x.v_r <= vr_min) & (d_v_r < 0)
    d_v_r = np.where(at_upper | at_lower, 0.0, d_v_r)
    return d_e_fd, d_r_f, d_v_r


def turbine_rhs(x: TurbineState, omega, sp: MachineSetpoints, t, omega_s) -> Tuple:
    """
    原动机调速两个状态的导数

    Returns:
        (dT_M, dP_SV)
    """
    d_t_m = (-x.t_m + x.p_sv) / t.t_ch
    d_p_sv = (-x.p_sv + sp.p_c - (omega / omega_s - 1.0) / t.r_d) / t.t_sv
    return d_t_m, d_p_sv


def init_machine(bus_v: complex, s_gen: complex, m, e, t, omega_s: float = 2 * np.pi * 60.0):
    """
    由潮流结果求同步机及其控制器的平衡点

    Args:
        bus_v: 机端母线电压相量
        s_gen: 同步机注入母线的复功率
        m: MachineRecord
        e: ExciterRecord
        t: TurbineRecord
        omega_s: 同步角速度

    Returns:
        (MachineState, ExciterState, TurbineState, MachineSetpoints)
    """
    eps = DYNAMICS_CONFIG["denominator_eps"]
    device = f"machine@bus{m.bus}"
    if abs(bus_v) < eps:
        raise NonPhysicalInit(device, "机端电压为零")
    for name, value in (
        ("x_d_p - x_ls", m.x_d_p - m.x_ls),
        ("x_q_p - x_ls", m.x_q_p - m.x_ls),
        ("k_a", e.k_a),
        ("t_f", e.t_f),
    ):
        if abs(value) < eps:
            raise NonPhysicalInit(device, f"{name} 为零")

    current = np.conj(s_gen / bus_v)
    # q 轴等效电抗：网络接口用 x_d_pp，稳态时 e_d_pp = (x_q − x_q_pp)·I_q
    x_qe = m.x_q - m.x_q_pp + m.x_d_pp
    delta = float(np.angle(bus_v + complex(m.r_s, x_qe) * current))

    i_dq = machine_frame_rotation(current, delta, "to_dq")
    v_dq = machine_frame_rotation(bus_v, delta, "to_dq")
    i_d, i_q = i_dq.real, i_dq.imag
    v_q = v_dq.imag

    e_d_p = (m.x_q - m.x_q_p) * i_q
    psi_2q = -e_d_p - (m.x_q_p - m.x_ls) * i_q
    e_q_p = v_q + m.r_s * i_q + m.x_d_p * i_d
    psi_1d = e_q_p - (m.x_d_p - m.x_ls) * i_d
    e_fd = e_q_p + (m.x_d - m.x_d_p) * i_d

    v_r = (e.k_e + saturation(e_fd, e)) * e_fd
    r_f = e.k_f / e.t_f * e_fd
    v_ref = abs(bus_v) + v_r / e.k_a

    machine = MachineState(delta, omega_s, e_q_p, e_d_p, psi_1d, psi_2q)
    t_m = electrical_torque(machine, i_d, i_q, m) + m.t_fw

    values = [delta, e_q_p, e_d_p, psi_1d, psi_2q, e_fd, v_r, r_f, v_ref, t_m]
    if not np.all(np.isfinite(values)):
        raise NonPhysicalInit(device, "初值含非有限数")
    vr_max = _bound(e.vr_max, np.inf)
    vr_min = _bound(e.vr_min, -np.inf)
    if not vr_min <= v_r <= vr_max:
        logger.warning(f"{device} 初始 V_R={v_r:.4f} 超出限值 [{vr_min}, {vr_max}]")

    logger.debug(f"{device} 初始化: δ={np.rad2deg(delta):.3f}°, E_fd={e_fd:.4f}, T_M={t_m:.4f}")
    return (
        machine,
        ExciterState(e_fd, r_f, v_r),
        TurbineState(t_m, t_m),
        MachineSetpoints(v_ref, t_m),
    )
