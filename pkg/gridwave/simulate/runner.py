"""
时域仿真主循环
"""

import logging
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..errors import InitResidualTooLarge, NumericalBlowup
from .config import SIMULATE_CONFIG
from .integrator import build_segments, rk4_step, segment_grid
from .system import DynamicSystem, build_system, select_topology

logger = logging.getLogger(__name__)


@dataclass
class SimulationResult:
    """
    仿真记录

    states 形状为 (记录点数, 状态数)，bus_v_mag 为 (记录点数, 母线数)，
    bus_freq 为各同步机电气频率 ω/2π（Hz）。
    """

    t: np.ndarray
    states: np.ndarray
    bus_v_mag: np.ndarray
    bus_freq: np.ndarray
    state_labels: Tuple[str, ...]
    bus_ids: Tuple[int, ...]
    machine_labels: Tuple[str, ...]
    event_log: List[Tuple[float, str]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def max_deviation(self) -> float:
        """全部记录点相对初值的最大偏差"""
        if self.states.size == 0:
            return 0.0
        return float(np.max(np.abs(self.states - self.states[0])))

    def state(self, label: str) -> np.ndarray:
        return self.states[:, self.state_labels.index(label)]

    def states_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.states, columns=list(self.state_labels))
        frame.insert(0, "t", self.t)
        return frame

    def voltages_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.bus_v_mag, columns=[f"bus{b}" for b in self.bus_ids])
        frame.insert(0, "t", self.t)
        return frame

    def frequencies_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.bus_freq, columns=list(self.machine_labels))
        frame.insert(0, "t", self.t)
        return frame

    def events_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.event_log, columns=["t", "event"])


def _check_blowup(system: DynamicSystem, t: float, x: np.ndarray, limit: float):
    bad = ~np.isfinite(x) | (np.abs(x) > limit)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        label = system.state_labels[k]
        logger.error(f"t={t:.4f}s 状态 {label} 发散 (值 {x[k]})")
        raise NumericalBlowup(t, label)


def run_simulation(
    case,
    scenario=None,
    dt: Optional[float] = None,
    t_end: Optional[float] = None,
    system: Optional[DynamicSystem] = None,
    decimation: Optional[int] = None,
) -> SimulationResult:
    """
    事件对齐的定步长 RK4 仿真

    Args:
        case: NetworkCase
        scenario: 覆盖 case.scenario 的场景
        dt: 覆盖步长
        t_end: 覆盖终止时刻
        system: 已初始化的 DynamicSystem，缺省时由 case 构造
        decimation: 记录间隔（步），事件点和终点总会记录

    Returns:
        SimulationResult
    """
    scenario = case.scenario if scenario is None else scenario
    overrides = {}
    if dt is not None:
        overrides["dt"] = dt
    if t_end is not None:
        overrides["t_end"] = t_end
    if decimation is not None:
        overrides["decimation"] = decimation
    if overrides:
        scenario = replace(scenario, **overrides)

    if system is None:
        system = build_system(replace(case, scenario=scenario))
    system.reset()
    started = time.perf_counter()

    x = system.x0.copy()
    residual = system.rhs(0.0, x, topology="pre")
    if residual.size:
        k = int(np.argmax(np.abs(residual)))
        worst = float(np.abs(residual[k]))
        if worst > SIMULATE_CONFIG["init_residual"]:
            logger.error(f"初始化残差 {worst:.3e} 过大 (状态 {system.state_labels[k]})")
            raise InitResidualTooLarge(worst, system.state_labels[k])
        logger.info(f"初始化残差 {worst:.3e}")

    events = []
    event_log: List[Tuple[float, str]] = []
    if scenario.has_fault:
        events = [scenario.t_f1, scenario.t_f2]
    segments = build_segments(scenario.t_end, scenario.dt, events)
    event_points = set(events)
    limit = SIMULATE_CONFIG["blowup_limit"]
    step_every = max(1, int(scenario.decimation))

    t_rec: List[float] = []
    x_rec: List[np.ndarray] = []
    v_rec: List[np.ndarray] = []

    def record(t, state):
        v_all = system.bus_voltages(state, topology=select_topology(t, scenario))
        t_rec.append(t)
        x_rec.append(state.copy())
        v_rec.append(np.abs(v_all))

    def note_events(t):
        if not scenario.has_fault:
            return
        if t == scenario.t_f1:
            event_log.append((t, f"fault_on bus{scenario.fault_bus}"))
            logger.debug(f"t={t:.4f}s 故障投入: 母线 {scenario.fault_bus}")
        if t == scenario.t_f2:
            event_log.append((t, f"fault_cleared bus{scenario.fault_bus}"))
            logger.debug(f"t={t:.4f}s 故障切除")

    note_events(0.0)
    record(0.0, x)
    step = 0
    frozen_before = np.zeros(system.layout.n_res, dtype=bool)

    for seg_index, (start, stop, n) in enumerate(segments):
        topology = select_topology(start, scenario)
        grid = segment_grid(start, stop, n)

        def f(t, state, _topology=topology):
            return system.rhs(t, state, topology=_topology)

        for i in range(n):
            h = grid[i + 1] - grid[i]
            x = rk4_step(f, grid[i], x, h)
            t = float(grid[i + 1])
            step += 1
            _check_blowup(system, t, x, limit)
            snap = system.commit(x, topology=topology)

            if system.layout.n_res and np.any(snap.res_frozen != frozen_before):
                for k in np.flatnonzero(snap.res_frozen != frozen_before):
                    label = system.layout.res_labels[k]
                    state = "freeze_on" if snap.res_frozen[k] else "freeze_off"
                    event_log.append((t, f"{state} {label}"))
                    if snap.res_frozen[k]:
                        logger.warning(f"t={t:.4f}s {label} 端电压过低，电流指令保持")
                frozen_before = snap.res_frozen.copy()

            last = seg_index == len(segments) - 1 and i == n - 1
            is_event = i == n - 1 and t in event_points
            if is_event:
                note_events(t)
            if step % step_every == 0 or is_event or last:
                record(t, x)

    elapsed = time.perf_counter() - started
    event_log.append((float(t_rec[-1]), "end"))
    result = SimulationResult(
        t=np.array(t_rec),
        states=np.array(x_rec).reshape(len(t_rec), system.n_states),
        bus_v_mag=np.array(v_rec).reshape(len(t_rec), len(system.rns.bus_ids)),
        bus_freq=np.array(x_rec).reshape(len(t_rec), system.n_states)[:, system.layout.machine_slice("omega")]
        / (2.0 * np.pi),
        state_labels=tuple(system.state_labels),
        bus_ids=tuple(system.rns.bus_ids),
        machine_labels=tuple(system.layout.machine_labels),
        event_log=event_log,
        elapsed=elapsed,
    )
    logger.info(f"仿真完成: {step} 步, {len(t_rec)} 个记录点, 用时 {elapsed:.2f}s")
    return result


def flat_run(case, t_end: Optional[float] = None, system: Optional[DynamicSystem] = None) -> SimulationResult:
    """去掉扰动的平启动仿真，用于检验初始化"""
    if t_end is None:
        t_end = SIMULATE_CONFIG["flat_run_t_end"]
    scenario = replace(case.scenario, fault_bus=None, t_f1=0.0, t_f2=0.0, t_end=t_end)
    result = run_simulation(case, scenario=scenario, system=system)
    logger.info(f"平启动 {t_end}s 最大状态偏差 {result.max_deviation():.3e}")
    return result
