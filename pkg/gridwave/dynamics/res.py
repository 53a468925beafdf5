"""
新能源电站通用模型

变流器一阶滞后（i_p、i_q 为网络坐标下注入电流的实部和虚部）、由功率指令求电流指令的代数环节、
单回路无功 PI 控制。函数同样支持记录或 ParamStack。
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import InitInfeasible

logger = logging.getLogger(__name__)


@dataclass
class ResState:
    i_p: np.ndarray
    i_q: np.ndarray
    q_pi: np.ndarray


@dataclass
class ResSetpoints:
    p_ref: np.ndarray
    q_ref: np.ndarray


def res_limits(r) -> Tuple:
    """返回 (ip_max, iq_min, iq_max)；缺省为不限，只给出 iq_max 时 iq_min = −iq_max"""
    ip_max = np.inf if r.ip_max is None else r.ip_max
    iq_max = np.inf if r.iq_max is None else r.iq_max
    if r.iq_min is None:
        iq_min = -iq_max
    else:
        iq_min = r.iq_min
    return ip_max, iq_min, iq_max


def invert_power(v, p, q) -> Tuple:
    """
    由端电压和有功/无功求注入电流（不限幅）

    P = V_d·i_p + V_q·i_q，Q = V_q·i_p − V_d·i_q，系数矩阵行列式为 −|v|²。
    """
    v_d = np.real(v)
    v_q = np.imag(v)
    v2 = v_d**2 + v_q**2
    i_p = (v_d * p + v_q * q) / v2
    i_q = (v_q * p - v_d * q) / v2
    return i_p, i_q


def measured_q(v, i_p, i_q):
    """Q = V_q·i_p − V_d·i_q"""
    return np.imag(v) * i_p - np.real(v) * i_q


def res_power_commands(s: ResState, q_meas, sp: ResSetpoints, r) -> Tuple:
    """有功指令取 p_ref；无功指令 q_cmd = q_pi + k_p·(q_ref − q_meas)"""
    q_cmd = s.q_pi + r.k_p * (sp.q_ref - q_meas)
    p_cmd = sp.p_ref + np.zeros_like(q_cmd)
    return p_cmd, q_cmd


def res_current_commands(v, p_cmd, q_cmd, limits, last: Optional[Tuple] = None) -> Tuple:
    """
    电流指令

    Args:
        v: 端电压相量
        p_cmd, q_cmd: 功率指令
        limits: 带 ip_max/iq_max/iq_min/v_freeze 字段的记录或 ParamStack
        last: 上一次接受的 (i_pcmd, i_qcmd)，|v| < v_freeze 时保持

    Returns:
        (i_pcmd, i_qcmd)
    """
    ip_max, iq_min, iq_max = res_limits(limits)
    v = np.asarray(v, dtype=complex)
    frozen = np.abs(v) < limits.v_freeze
    # 冻结时用 1 代替电压，避免除零
    v_safe = np.where(frozen, 1.0 + 0.0j, v)
    i_p, i_q = invert_power(v_safe, p_cmd, q_cmd)
    i_p = np.clip(i_p, -ip_max, ip_max)
    i_q = np.clip(i_q, iq_min, iq_max)

    if np.any(frozen):
        if last is None:
            last = (np.zeros_like(i_p), np.zeros_like(i_q))
        i_p = np.where(frozen, last[0], i_p)
        i_q = np.where(frozen, last[1], i_q)
    return i_p, i_q


def q_command_held(v, p_cmd, q_cmd, limits):
    """无功电流指令被限幅或因低电压冻结时为 True，此时积分器停止积分"""
    _, iq_min, iq_max = res_limits(limits)
    v = np.asarray(v, dtype=complex)
    frozen = np.abs(v) < limits.v_freeze
    v_safe = np.where(frozen, 1.0 + 0.0j, v)
    _, i_q = invert_power(v_safe, p_cmd, q_cmd)
    return frozen | (i_q > iq_max) | (i_q < iq_min)


def res_rhs(s: ResState, cmds: Tuple, q_meas, sp: ResSetpoints, r, q_clamped=False) -> Tuple:
    """
    新能源三个状态的导数

    Args:
        s: 当前状态
        cmds: (i_pcmd, i_qcmd)
        q_meas: 实测无功
        sp: 设定值
        r: 电站参数
        q_clamped: 无功指令受限标志，为 True 时积分器导数置零

    Returns:
        (di_p, di_q, dq_pi)
    """
    i_pcmd, i_qcmd = cmds
    d_i_p = (i_pcmd - s.i_p) / r.t_g
    d_i_q = (i_qcmd - s.i_q) / r.t_g
    d_q_pi = np.where(q_clamped, 0.0, r.k_i * (sp.q_ref - q_meas))
    return d_i_p, d_i_q, d_q_pi


def init_res(bus_v: complex, s_inj: complex, r) -> Tuple[ResState, ResSetpoints]:
    """
    由潮流结果求新能源电站平衡点

    i_p、i_q 精确满足功率方程；q_pi = q_ref 使 dq_pi/dt = 0 且指令链复现同一电流。

    Returns:
        (ResState, ResSetpoints)
    """
    device = f"res@bus{r.bus}"
    if abs(bus_v) < r.v_freeze:
        raise InitInfeasible(device, f"端电压 {abs(bus_v):.4f} 低于冻结阈值")
    p_ref = float(np.real(s_inj))
    q_ref = float(np.imag(s_inj))
    i_p, i_q = invert_power(complex(bus_v), p_ref, q_ref)

    ip_max, iq_min, iq_max = res_limits(r)
    if abs(i_p) > ip_max:
        raise InitInfeasible(device, f"|i_p|={abs(i_p):.4f} 超过 ip_max={ip_max}")
    if not iq_min <= i_q <= iq_max:
        raise InitInfeasible(device, f"i_q={i_q:.4f} 超出 [{iq_min}, {iq_max}]")

    logger.debug(f"{device} 初始化: i_p={i_p:.4f}, i_q={i_q:.4f}, q_ref={q_ref:.4f}")
    return ResState(float(i_p), float(i_q), q_ref), ResSetpoints(p_ref, q_ref)
