#!/usr/bin/env python3
"""
算例读写模块

一个目录即一个算例：buses.csv、branches.csv、scenario.cfg 必需，
machines.csv、exciters.csv、turbines.csv、res_plants.csv 可选。
"""

import logging
import os
import re
from dataclasses import asdict, fields
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd

from ..errors import DanglingReference, DuplicateId, MalformedRow, MissingFile
from .config import CASE_CONFIG, bundled_case_path
from .records import (
    BUS_KINDS,
    BranchRecord,
    BusRecord,
    ExciterRecord,
    MachineRecord,
    NetworkCase,
    ResPlantRecord,
    ScenarioConfig,
    TurbineRecord,
)

logger = logging.getLogger(__name__)

_PANDAS_LINE = re.compile(r"line (\d+)")


def resolve_case_dir(case: str) -> Path:
    """
    解析 --case 参数：已存在的目录优先，其次是内置算例名称

    Args:
        case: 目录路径或内置算例名称（ieee68/68bus/smib/two_bus）

    Returns:
        算例目录路径（不保证存在）
    """
    path = Path(case)
    if path.is_dir():
        return path
    bundled = bundled_case_path(str(case))
    if bundled is not None:
        return bundled
    return path


class _Table:
    """已读入的一张 CSV 表及其原始行号"""

    def __init__(self, path: Path, frame: pd.DataFrame, lines: List[int]):
        self.path = path
        self.frame = frame
        self.lines = lines

    def __len__(self):
        return len(self.frame)

    def has(self, column: str) -> bool:
        return column in self.frame.columns

    def cell(self, row: int, column: str) -> str:
        if column not in self.frame.columns:
            return ""
        return str(self.frame.iat[row, self.frame.columns.get_loc(column)]).strip()

    def line(self, row: int) -> int:
        return self.lines[row] if row < len(self.lines) else 0

    def number(self, row: int, column: str, default: Optional[float] = None) -> Optional[float]:
        text = self.cell(row, column)
        if text == "":
            if default is None and column in CASE_CONFIG["tables"][self.path.name]["required"]:
                raise MalformedRow(self.path, self.line(row), f"列 {column} 为空")
            return default
        try:
            return float(text)
        except ValueError:
            raise MalformedRow(self.path, self.line(row), f"列 {column} 不是数值: {text!r}")

    def integer(self, row: int, column: str, default: Optional[int] = None) -> Optional[int]:
        value = self.number(row, column, None if default is None else float(default))
        if value is None:
            return None
        if value != int(value):
            raise MalformedRow(self.path, self.line(row), f"列 {column} 不是整数")
        return int(value)


def _read_table(path: Path, required: bool = True) -> Optional[_Table]:
    """
    读取带表头的 CSV 表，`#` 之后的内容视为注释

    Args:
        path: 文件路径
        required: 文件缺失时是否报错

    Returns:
        _Table，可选文件缺失时返回 None
    """
    if not path.is_file():
        if required:
            raise MissingFile(path)
        return None

    spec = CASE_CONFIG["tables"][path.name]
    comment = CASE_CONFIG["comment_char"]
    raw_lines = path.read_text(encoding="utf-8").splitlines()
    data_lines = [no + 1 for no, text in enumerate(raw_lines) if text.split(comment, 1)[0].strip()]
    if not data_lines:
        raise MalformedRow(path, 1, "缺少表头")

    try:
        frame = pd.read_csv(
            path,
            comment=comment,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            skip_blank_lines=True,
        )
    except pd.errors.ParserError as exc:
        match = _PANDAS_LINE.search(str(exc))
        raise MalformedRow(path, int(match.group(1)) if match else 0, "列数不一致")

    frame = frame.fillna("")
    frame.columns = [str(col).strip() for col in frame.columns]
    columns = list(frame.columns)
    header_line = data_lines[0]
    if columns[: len(spec["required"])] != spec["required"]:
        raise MalformedRow(path, header_line, f"表头应以 {','.join(spec['required'])} 开头")
    extra = columns[len(spec["required"]):]
    unknown = [col for col in extra if col not in spec["optional"]]
    if unknown:
        raise MalformedRow(path, header_line, f"未知列 {','.join(unknown)}")

    row_lines = data_lines[1:]
    if len(row_lines) != len(frame):
        logger.warning(f"{path.name} 行号映射不一致，错误行号可能不准确")
    return _Table(path, frame, row_lines)


def _parse_status(table: _Table, row: int) -> bool:
    text = table.cell(row, "status").lower() or "in"
    status = CASE_CONFIG["status_values"].get(text)
    if status is None:
        raise MalformedRow(table.path, table.line(row), f"无效支路状态 {text!r}")
    return status


def _parse_buses(table: _Table) -> Tuple[BusRecord, ...]:
    buses = []
    seen = set()
    for row in range(len(table)):
        kind = table.cell(row, "kind").lower()
        if kind not in BUS_KINDS:
            raise MalformedRow(table.path, table.line(row), f"无效母线类型 {kind!r}")
        bus = BusRecord(
            id=table.integer(row, "id"),
            kind=kind,
            v_set=table.number(row, "v_set"),
            theta_set=table.number(row, "theta_deg"),
            p_load=table.number(row, "p_load"),
            q_load=table.number(row, "q_load"),
            g_shunt=table.number(row, "g_shunt"),
            b_shunt=table.number(row, "b_shunt"),
            p_gen=table.number(row, "p_gen", 0.0),
        )
        if bus.id in seen:
            raise DuplicateId("bus", bus.id)
        seen.add(bus.id)
        buses.append(bus)
    return tuple(buses)


def _parse_branches(table: _Table, bus_ids) -> Tuple[BranchRecord, ...]:
    branches = []
    for row in range(len(table)):
        branch = BranchRecord(
            from_bus=table.integer(row, "from"),
            to_bus=table.integer(row, "to"),
            r=table.number(row, "r"),
            x=table.number(row, "x"),
            b=table.number(row, "b"),
            tap=table.number(row, "tap"),
            phase_shift=table.number(row, "shift_deg"),
            status=_parse_status(table, row),
        )
        for end in (branch.from_bus, branch.to_bus):
            if end not in bus_ids:
                raise DanglingReference("bus", end)
        branches.append(branch)
    return tuple(branches)


def _parse_machines(table: Optional[_Table], bus_ids) -> Tuple[MachineRecord, ...]:
    if table is None:
        return ()
    machines = []
    seen = set()
    for row in range(len(table)):
        values = {name: table.number(row, name) for name in CASE_CONFIG["tables"]["machines.csv"]["required"]}
        values["bus"] = table.integer(row, "bus")
        values["t_fw"] = table.number(row, "t_fw", 0.0)
        area = table.cell(row, "area")
        values["area"] = table.integer(row, "area") if area else None
        machine = MachineRecord(**values)
        if machine.bus not in bus_ids:
            raise DanglingReference("bus", machine.bus)
        if machine.bus in seen:
            raise DuplicateId("machine", machine.bus)
        seen.add(machine.bus)
        machines.append(machine)
    return tuple(machines)


def _parse_controls(table: Optional[_Table], kind: str, record_type, n_machines: int):
    if table is None:
        return ()
    spec = CASE_CONFIG["tables"][table.path.name]
    records = []
    seen = set()
    for row in range(len(table)):
        values = {name: table.number(row, name) for name in spec["required"]}
        values["machine"] = table.integer(row, "machine")
        for name in spec["optional"]:
            default = 0.0 if name.startswith("sat_") else None
            values[name] = table.number(row, name, default)
        record = record_type(**values)
        if not 1 <= record.machine <= n_machines:
            raise DanglingReference("machine", record.machine)
        if record.machine in seen:
            raise DuplicateId(kind, record.machine)
        seen.add(record.machine)
        records.append(record)
    return tuple(records)


def _parse_res_plants(table: Optional[_Table], bus_ids) -> Tuple[ResPlantRecord, ...]:
    if table is None:
        return ()
    plants = []
    seen = set()
    for row in range(len(table)):
        technology = table.cell(row, "technology").lower() or None
        if technology is not None and technology not in CASE_CONFIG["res_technologies"]:
            raise MalformedRow(table.path, table.line(row), f"未知新能源类型 {technology!r}")
        plant = ResPlantRecord(
            bus=table.integer(row, "bus"),
            t_g=table.number(row, "t_g", 0.02),
            k_p=table.number(row, "k_p"),
            k_i=table.number(row, "k_i"),
            ip_max=table.number(row, "ip_max", None),
            iq_max=table.number(row, "iq_max", None),
            iq_min=table.number(row, "iq_min", None),
            v_freeze=table.number(row, "v_freeze", 0.01),
            technology=technology,
        )
        if plant.bus not in bus_ids:
            raise DanglingReference("bus", plant.bus)
        if plant.bus in seen:
            raise DuplicateId("res_plant", plant.bus)
        seen.add(plant.bus)
        plants.append(plant)
    return tuple(plants)


def _parse_bool(text: str) -> Optional[bool]:
    return {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}.get(text.lower())


def load_scenario(path: Path) -> ScenarioConfig:
    """
    读取 scenario.cfg（每行 key = value，# 之后为注释）

    Args:
        path: 文件路径

    Returns:
        ScenarioConfig
    """
    if not path.is_file():
        raise MissingFile(path)

    types = {f.name: f.type for f in fields(ScenarioConfig)}
    values: Dict[str, object] = {}
    for no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        text = raw.split(CASE_CONFIG["comment_char"], 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise MalformedRow(path, no, "应为 key = value")
        key, value = (part.strip() for part in text.split("=", 1))
        if key not in types:
            raise MalformedRow(path, no, f"未知配置项 {key}")
        try:
            if key == "fault_bus":
                values[key] = None if value.lower() in ("", "none") else int(value)
            elif key == "relative_angles":
                flag = _parse_bool(value)
                if flag is None:
                    raise ValueError(value)
                values[key] = flag
            elif key in ("input_selection", "output_selection"):
                values[key] = tuple(item.strip() for item in value.split(",") if item.strip())
            elif key == "decimation":
                values[key] = int(value)
            else:
                values[key] = float(value)
        except ValueError:
            raise MalformedRow(path, no, f"{key} 的取值无效: {value!r}")
    return ScenarioConfig(**values)


def load_case(case_dir) -> NetworkCase:
    """
    读取算例目录

    Args:
        case_dir: 算例目录

    Returns:
        NetworkCase，所有交叉引用已解析
    """
    case_dir = Path(case_dir)
    if not case_dir.is_dir():
        raise MissingFile(case_dir)
    for name in CASE_CONFIG["required_files"]:
        if not (case_dir / name).is_file():
            raise MissingFile(case_dir / name)

    buses = _parse_buses(_read_table(case_dir / "buses.csv"))
    bus_ids = {bus.id for bus in buses}
    branches = _parse_branches(_read_table(case_dir / "branches.csv"), bus_ids)
    machines = _parse_machines(_read_table(case_dir / "machines.csv", required=False), bus_ids)
    exciters = _parse_controls(
        _read_table(case_dir / "exciters.csv", required=False), "exciter", ExciterRecord, len(machines)
    )
    turbines = _parse_controls(
        _read_table(case_dir / "turbines.csv", required=False), "turbine", TurbineRecord, len(machines)
    )
    res_plants = _parse_res_plants(_read_table(case_dir / "res_plants.csv", required=False), bus_ids)
    scenario = load_scenario(case_dir / "scenario.cfg")
    if scenario.fault_bus is not None and scenario.fault_bus not in bus_ids:
        raise DanglingReference("fault_bus", scenario.fault_bus)

    case = NetworkCase(
        buses=buses,
        branches=branches,
        machines=machines,
        exciters=exciters,
        turbines=turbines,
        res_plants=res_plants,
        scenario=scenario,
        name=case_dir.name,
        source_dir=case_dir,
    )
    logger.info(
        f"读取算例 {case.name}: {len(buses)} 条母线, {len(branches)} 条支路, "
        f"{len(machines)} 台同步机, {len(res_plants)} 座新能源电站"
    )
    return case


def _frame(records, columns: Dict[str, str]) -> pd.DataFrame:
    """把记录转换为按文件列名排列的 DataFrame"""
    rows = []
    for record in records:
        data = asdict(record)
        rows.append({col: data[attr] for col, attr in columns.items()})
    frame = pd.DataFrame(rows, columns=list(columns))
    return frame.astype(object).where(frame.notna(), "")


def _scenario_text(scenario: ScenarioConfig) -> str:
    lines = ["# gridwave scenario"]
    for f in fields(ScenarioConfig):
        value = getattr(scenario, f.name)
        if value is None:
            text = "none"
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, tuple):
            text = ", ".join(value)
        else:
            text = repr(value)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"


def save_case(case: NetworkCase, case_dir) -> Path:
    """
    把算例写回目录，读回后与原算例结构一致

    Args:
        case: 算例
        case_dir: 输出目录

    Returns:
        输出目录
    """
    case_dir = Path(case_dir)
    os.makedirs(case_dir, exist_ok=True)
    float_format = CASE_CONFIG["float_format"]

    def machine_columns():
        names = CASE_CONFIG["tables"]["machines.csv"]
        return {name: name for name in names["required"] + names["optional"]}

    tables = {
        "buses.csv": (
            case.buses,
            {"id": "id", "kind": "kind", "v_set": "v_set", "theta_deg": "theta_set", "p_load": "p_load",
             "q_load": "q_load", "g_shunt": "g_shunt", "b_shunt": "b_shunt", "p_gen": "p_gen"},
        ),
        "branches.csv": (
            case.branches,
            {"from": "from_bus", "to": "to_bus", "r": "r", "x": "x", "b": "b", "tap": "tap",
             "shift_deg": "phase_shift", "status": "status"},
        ),
        "machines.csv": (case.machines, machine_columns()),
        "exciters.csv": (
            case.exciters,
            {name: name for name in ["machine", "k_a", "t_a", "k_e", "t_e", "k_f", "t_f",
                                     "sat_a", "sat_b", "vr_max", "vr_min"]},
        ),
        "turbines.csv": (case.turbines, {name: name for name in ["machine", "t_ch", "t_sv", "r_d"]}),
        "res_plants.csv": (
            case.res_plants,
            {name: name for name in ["bus", "t_g", "k_p", "k_i", "ip_max", "iq_max", "iq_min",
                                     "v_freeze", "technology"]},
        ),
    }
    for name, (records, columns) in tables.items():
        if not records and name not in CASE_CONFIG["required_files"]:
            continue
        frame = _frame(records, columns)
        if "status" in frame.columns:
            frame["status"] = frame["status"].map(lambda flag: "in" if flag else "out")
        frame.to_csv(case_dir / name, index=False, float_format=float_format)

    (case_dir / "scenario.cfg").write_text(_scenario_text(case.scenario), encoding="utf-8")
    logger.info(f"算例已写出到 {case_dir}")
    return case_dir
