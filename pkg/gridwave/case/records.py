"""
算例数据记录

所有记录均为不可变 dataclass，数值采用系统标幺值，角度以度为单位保存。
"""

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Tuple

BUS_KINDS = ("slack", "pv", "pq")


@dataclass(frozen=True)
class BusRecord:
    """母线记录"""

    id: int
    kind: str
    v_set: float = 1.0
    theta_set: float = 0.0
    p_load: float = 0.0
    q_load: float = 0.0
    g_shunt: float = 0.0
    b_shunt: float = 0.0
    p_gen: float = 0.0

    @property
    def s_load(self) -> complex:
        return complex(self.p_load, self.q_load)


@dataclass(frozen=True)
class BranchRecord:
    """支路记录（线路或变压器），tap 为 0 时按 1 处理"""

    from_bus: int
    to_bus: int
    r: float
    x: float
    b: float = 0.0
    tap: float = 1.0
    phase_shift: float = 0.0
    status: bool = True

    @property
    def ratio(self) -> float:
        return self.tap if self.tap != 0 else 1.0


@dataclass(frozen=True)
class MachineRecord:
    """六阶同步机参数"""

    bus: int
    r_s: float
    x_ls: float
    x_d: float
    x_d_p: float
    x_d_pp: float
    x_q: float
    x_q_p: float
    x_q_pp: float
    t_do_p: float
    t_do_pp: float
    t_qo_p: float
    t_qo_pp: float
    h: float
    t_fw: float = 0.0
    area: Optional[int] = None


@dataclass(frozen=True)
class ExciterRecord:
    """IEEE Type I 励磁系统，machine 为 machines.csv 中从 1 开始的行号"""

    machine: int
    k_a: float
    t_a: float
    k_e: float
    t_e: float
    k_f: float
    t_f: float
    sat_a: float = 0.0
    sat_b: float = 0.0
    vr_max: Optional[float] = None
    vr_min: Optional[float] = None


@dataclass(frozen=True)
class TurbineRecord:
    """汽轮机及调速器"""

    machine: int
    t_ch: float
    t_sv: float
    r_d: float


@dataclass(frozen=True)
class ResPlantRecord:
    """电流源型新能源电站"""

    bus: int
    t_g: float = 0.02
    k_p: float = 0.0
    k_i: float = 0.0
    ip_max: Optional[float] = None
    iq_max: Optional[float] = None
    iq_min: Optional[float] = None
    v_freeze: float = 0.01
    technology: Optional[str] = None


@dataclass(frozen=True)
class ScenarioConfig:
    """研究场景"""

    base_mva: float = 100.0
    freq_hz: float = 60.0
    t_end: float = 10.0
    dt: float = 0.001
    fault_bus: Optional[int] = None
    t_f1: float = 0.0
    t_f2: float = 0.0
    fault_admittance: float = 1.0e7
    relative_angles: bool = True
    input_selection: Tuple[str, ...] = ()
    output_selection: Tuple[str, ...] = ()
    zeta_threshold: float = 10.0
    decimation: int = 1

    @property
    def has_fault(self) -> bool:
        return self.fault_bus is not None


@dataclass(frozen=True)
class CaseIndex:
    """已解析的交叉引用（行号，从 0 开始）"""

    bus_row: Dict[int, int]
    machine_bus_row: Tuple[int, ...]
    res_bus_row: Tuple[int, ...]
    exciter_of: Tuple[Optional[int], ...]
    turbine_of: Tuple[Optional[int], ...]


@dataclass(frozen=True)
class NetworkCase:
    """完整算例"""

    buses: Tuple[BusRecord, ...]
    branches: Tuple[BranchRecord, ...]
    machines: Tuple[MachineRecord, ...] = ()
    exciters: Tuple[ExciterRecord, ...] = ()
    turbines: Tuple[TurbineRecord, ...] = ()
    res_plants: Tuple[ResPlantRecord, ...] = ()
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    name: str = field(default="case", compare=False)
    source_dir: Optional[Path] = field(default=None, compare=False)

    @cached_property
    def index(self) -> CaseIndex:
        bus_row = {bus.id: row for row, bus in enumerate(self.buses)}
        exciter_of: List[Optional[int]] = [None] * len(self.machines)
        for k, exc in enumerate(self.exciters):
            if 1 <= exc.machine <= len(self.machines):
                exciter_of[exc.machine - 1] = k
        turbine_of: List[Optional[int]] = [None] * len(self.machines)
        for k, tur in enumerate(self.turbines):
            if 1 <= tur.machine <= len(self.machines):
                turbine_of[tur.machine - 1] = k
        return CaseIndex(
            bus_row=bus_row,
            machine_bus_row=tuple(bus_row.get(m.bus, -1) for m in self.machines),
            res_bus_row=tuple(bus_row.get(r.bus, -1) for r in self.res_plants),
            exciter_of=tuple(exciter_of),
            turbine_of=tuple(turbine_of),
        )

    @property
    def bus_ids(self) -> List[int]:
        return [bus.id for bus in self.buses]

    @property
    def machine_labels(self) -> List[str]:
        return [f"G{k + 1}" for k in range(len(self.machines))]

    @property
    def res_labels(self) -> List[str]:
        return [f"RES{k + 1}" for k in range(len(self.res_plants))]

    def exciter_for(self, machine_row: int) -> ExciterRecord:
        return self.exciters[self.index.exciter_of[machine_row]]

    def turbine_for(self, machine_row: int) -> TurbineRecord:
        return self.turbines[self.index.turbine_of[machine_row]]
