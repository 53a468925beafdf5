"""
算例数据模块
"""

from .loader import load_case, load_scenario, resolve_case_dir, save_case
from .records import (
    BranchRecord,
    BusRecord,
    ExciterRecord,
    MachineRecord,
    NetworkCase,
    ResPlantRecord,
    ScenarioConfig,
    TurbineRecord,
)
from .validation import ValidationReport, Violation, ensure_valid, validate_case

__all__ = [
    "BranchRecord",
    "BusRecord",
    "ExciterRecord",
    "MachineRecord",
    "NetworkCase",
    "ResPlantRecord",
    "ScenarioConfig",
    "TurbineRecord",
    "ValidationReport",
    "Violation",
    "ensure_valid",
    "load_case",
    "load_scenario",
    "resolve_case_dir",
    "save_case",
    "validate_case",
]
