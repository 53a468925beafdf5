"""
时域仿真模块
"""

from .export import write_simulation
from .integrator import build_segments, integrate_fixed, rk4_step
from .layout import StateLayout, SystemState
from .runner import SimulationResult, flat_run, run_simulation
from .system import DynamicSystem, build_system, select_topology, system_rhs

__all__ = [
    "DynamicSystem",
    "SimulationResult",
    "StateLayout",
    "SystemState",
    "build_segments",
    "build_system",
    "flat_run",
    "integrate_fixed",
    "rk4_step",
    "run_simulation",
    "select_topology",
    "system_rhs",
    "write_simulation",
]
