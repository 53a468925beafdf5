"""
频率响应 G(jω) = c(jωI − A)⁻¹b + d
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from ..errors import AmbiguousPhaseUnwrap, GridHitsPole
from .config import FREQRESP_CONFIG, default_grid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrequencyResponse:
    omega: np.ndarray
    g: np.ndarray
    io: Tuple[str, str]

    @property
    def mag_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.g))

    def __len__(self):
        return self.omega.size


def evaluate_siso(a, b, c, d, omega) -> np.ndarray:
    """逐频率点线性求解，不显式求逆"""
    a = np.atleast_2d(np.asarray(a, dtype=float)) if np.size(a) else np.zeros((0, 0))
    n = a.shape[0]
    omega = np.asarray(omega, dtype=float)
    if n == 0:
        return np.full(omega.size, complex(d))
    eigenvalues = linalg.eigvals(a)
    tol = FREQRESP_CONFIG["pole_proximity"]
    b = np.asarray(b, dtype=complex).reshape(n)
    c = np.asarray(c, dtype=complex).reshape(n)
    g = np.zeros(omega.size, dtype=complex)
    identity = np.eye(n)
    for k, w in enumerate(omega):
        distance = np.abs(1j * w - eigenvalues)
        if np.min(distance) < tol:
            pole = eigenvalues[int(np.argmin(distance))]
            raise GridHitsPole(float(w), complex(pole))
        g[k] = c @ np.linalg.solve(1j * w * identity - a, b) + d
    return g


def evaluate_response(model, io: Tuple[str, str], omega_grid=None) -> FrequencyResponse:
    """
    计算单输入单输出通道的频率响应

    Args:
        model: LinearModel
        io: (输入标签, 输出标签)
        omega_grid: 频率网格，缺省为 1e-2 至 1e3 rad/s 的 400 点

    Returns:
        FrequencyResponse
    """
    omega = default_grid() if omega_grid is None else np.asarray(omega_grid, dtype=float)
    if omega.size > 1 and np.any(np.diff(omega) <= 0):
        raise ValueError("频率网格必须严格递增")
    a, b, c, d = model.siso(*io)
    g = evaluate_siso(a, b, c, d, omega)
    logger.debug(f"{io[0]} -> {io[1]}: 频率响应 {omega.size} 点")
    return FrequencyResponse(omega, g, tuple(io))


def unwrap_phase(response: FrequencyResponse, max_jump_deg: Optional[float] = None) -> np.ndarray:
    """
    沿网格累积相位（度）

    相邻点相位差先折算到 (−180°, 180°]，绝对值超过 max_jump_deg 时无法判断分支。
    """
    if len(response) == 0:
        return np.zeros(0)
    limit = FREQRESP_CONFIG["unwrap_jump_deg"] if max_jump_deg is None else max_jump_deg
    raw = np.rad2deg(np.angle(response.g))
    steps = np.mod(np.diff(raw) + 180.0, 360.0) - 180.0
    bad = np.flatnonzero(np.abs(steps) > limit)
    if bad.size:
        k = int(bad[0])
        raise AmbiguousPhaseUnwrap(float(response.omega[k + 1]), float(steps[k]))
    near = np.flatnonzero(np.abs(steps) > 0.5 * limit)
    if near.size:
        logger.warning(f"相位在 ω={response.omega[near[0] + 1]:.4g} rad/s 附近跳变 {steps[near[0]]:.1f}°")
    return raw[0] + np.concatenate([[0.0], np.cumsum(steps)])


def evaluate_refined(model, io, wmin=None, wmax=None, points=None, max_refinements=None):
    """
    相位展开有歧义时把网格点数加倍重算

    Returns:
        (FrequencyResponse, 展开后的相位)
    """
    points = FREQRESP_CONFIG["points"] if points is None else int(points)
    tries = FREQRESP_CONFIG["max_refinements"] if max_refinements is None else max_refinements
    for attempt in range(tries + 1):
        response = evaluate_response(model, io, default_grid(wmin, wmax, points))
        try:
            return response, unwrap_phase(response)
        except AmbiguousPhaseUnwrap:
            if attempt == tries:
                raise
            points *= 2
            logger.warning(f"相位展开有歧义，网格加密到 {points} 点")
