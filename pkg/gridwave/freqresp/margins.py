"""
稳定裕度

相位穿越：展开相位跨过 −180° + 360°·k；增益穿越：|G| − 1 变号。
穿越频率用 brentq 在相邻网格点之间求根。
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg, optimize

from .config import FREQRESP_CONFIG
from .response import FrequencyResponse, evaluate_refined, evaluate_siso, unwrap_phase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarginReport:
    gain_margin_db: float
    omega_pc: float
    phase_margin_deg: float
    omega_gc: float
    stable_closed_loop: bool
    io: Tuple[str, str] = ("", "")

    def as_row(self) -> dict:
        return {
            "input": self.io[0],
            "output": self.io[1],
            "gain_margin_db": self.gain_margin_db,
            "omega_pc": self.omega_pc,
            "phase_margin_deg": self.phase_margin_deg,
            "omega_gc": self.omega_gc,
            "stable_closed_loop": self.stable_closed_loop,
        }


def _wrap180(angle: float) -> float:
    wrapped = (angle + 180.0) % 360.0 - 180.0
    return 180.0 if wrapped == -180.0 else wrapped


def closed_loop_stable(a, b, c, d) -> bool:
    """单位负反馈闭环 A − b·c/(1 + d) 的特征值实部均不大于容差"""
    if 1.0 + d == 0.0:
        return False
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return True
    a_cl = a - np.outer(b, c) / (1.0 + d)
    return bool(np.max(linalg.eigvals(a_cl).real) <= FREQRESP_CONFIG["stability_tol"])


def _crossings(omega, phase, mags, siso) -> Tuple[List[Tuple[float, complex]], List[Tuple[float, complex]]]:
    a, b, c, d = siso
    xtol = FREQRESP_CONFIG["crossover_xtol"]

    def g_at(w):
        return evaluate_siso(a, b, c, d, [w])[0]

    def phase_near(w, reference):
        raw = np.rad2deg(np.angle(g_at(w)))
        return reference + _wrap180(raw - reference)

    phase_cross = []
    branch = np.floor((phase + 180.0) / 360.0)
    for i in np.flatnonzero(np.diff(branch) != 0):
        level = 360.0 * max(branch[i], branch[i + 1]) - 180.0
        lo, hi = omega[i], omega[i + 1]
        ref = phase[i]
        w = optimize.brentq(lambda x: phase_near(x, ref) - level, lo, hi, xtol=xtol)
        phase_cross.append((w, g_at(w)))

    gain_cross = []
    sign = np.sign(mags - 1.0)
    for i in np.flatnonzero(np.diff(sign) != 0):
        lo, hi = omega[i], omega[i + 1]
        if mags[i] == 1.0:
            w = lo
        else:
            w = optimize.brentq(lambda x: abs(g_at(x)) - 1.0, lo, hi, xtol=xtol)
        gain_cross.append((w, g_at(w), phase[i]))
    return phase_cross, gain_cross


def margins(model, io: Tuple[str, str], response: Optional[FrequencyResponse] = None, phase=None) -> MarginReport:
    """
    增益裕度与相位裕度

    无穿越时对应裕度为无穷大，频率为 NaN；多个穿越时取最小裕度。

    Args:
        model: LinearModel
        io: (输入标签, 输出标签)
        response: 已算好的频率响应，缺省时用默认网格计算（必要时加密）
        phase: response 的展开相位

    Returns:
        MarginReport
    """
    siso = model.siso(*io)
    if response is None:
        response, phase = evaluate_refined(model, io)
    elif phase is None:
        phase = unwrap_phase(response)

    gm, w_pc = np.inf, np.nan
    pm, w_gc = np.inf, np.nan
    if len(response) >= 2:
        phase_cross, gain_cross = _crossings(response.omega, phase, np.abs(response.g), siso)
        for w, g in phase_cross:
            value = -20.0 * np.log10(abs(g)) if abs(g) > 0 else np.inf
            if value < gm:
                gm, w_pc = value, w
        for w, g, ref in gain_cross:
            raw = np.rad2deg(np.angle(g))
            value = _wrap180(180.0 + raw)
            if value < pm:
                pm, w_gc = value, w

    eig_stable = closed_loop_stable(*siso)
    stable = eig_stable and gm > 0 and pm > 0
    if eig_stable != (gm > 0 and pm > 0):
        logger.warning(f"{io[0]} -> {io[1]}: 裕度符号与闭环特征值结论不一致，按不稳定处理")
    logger.info(
        f"{io[0]} -> {io[1]}: GM={gm:.3f} dB @ {w_pc:.4g} rad/s, PM={pm:.2f}° @ {w_gc:.4g} rad/s, "
        f"闭环{'稳定' if stable else '不稳定'}"
    )
    return MarginReport(float(gm), float(w_pc), float(pm), float(w_gc), bool(stable), tuple(io))
