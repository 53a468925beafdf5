"""
定步长经典四阶 Runge-Kutta 积分与事件对齐的时间网格
"""

import math
from typing import Callable, List, Sequence, Tuple

import numpy as np


def rk4_step(f: Callable, t: float, x: np.ndarray, h: float) -> np.ndarray:
    """经典 RK4 单步"""
    k1 = f(t, x)
    k2 = f(t + h / 2, x + 0.5 * h * k1)
    k3 = f(t + h / 2, x + 0.5 * h * k2)
    k4 = f(t + h, x + h * k3)
    return x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def segment_steps(length: float, dt: float) -> int:
    """区间长度对应的步数：ceil(round(L/dt, 9))，保证步长不超过 dt"""
    if length <= 0:
        return 0
    return max(1, math.ceil(round(length / dt, 9)))


def build_segments(t_end: float, dt: float, events: Sequence[float] = ()) -> List[Tuple[float, float, int]]:
    """
    按事件时刻切分 [0, t_end]

    每段内步长 L/n，事件时刻恰为网格点，不会有积分步跨越事件。

    Args:
        t_end: 终止时刻
        dt: 名义步长
        events: 事件时刻

    Returns:
        [(起点, 终点, 步数), ...]，跳过长度为零的段
    """
    points = sorted({0.0, float(t_end)} | {float(e) for e in events if 0.0 < e < t_end})
    segments = []
    for start, stop in zip(points[:-1], points[1:]):
        n = segment_steps(stop - start, dt)
        if n:
            segments.append((start, stop, n))
    return segments


def segment_grid(start: float, stop: float, n: int) -> np.ndarray:
    """段内网格，端点精确等于 start 和 stop"""
    grid = start + (stop - start) * np.arange(n + 1) / n
    grid[-1] = stop
    return grid


def integrate_fixed(f: Callable, x0: np.ndarray, t_end: float, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    无事件的定步长积分，返回全部网格点

    Args:
        f: f(t, x)
        x0: 初值
        t_end: 终止时刻
        dt: 名义步长

    Returns:
        (t, x)，x 的形状为 (步数+1, 状态数)
    """
    n = segment_steps(t_end, dt)
    grid = segment_grid(0.0, t_end, n) if n else np.array([0.0])
    x = np.zeros((grid.size, np.size(x0)))
    x[0] = x0
    for i in range(grid.size - 1):
        x[i + 1] = rk4_step(f, grid[i], x[i], grid[i + 1] - grid[i])
    return grid, x
