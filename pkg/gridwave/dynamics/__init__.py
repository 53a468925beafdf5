"""
动态元件模型：同步机、励磁、原动机、新能源电站
"""

from .machine import (
    ExciterState,
    MachineSetpoints,
    MachineState,
    TurbineState,
    electrical_torque,
    exciter_rhs,
    init_machine,
    machine_frame_rotation,
    machine_rhs,
    subtransient_emf,
    turbine_rhs,
)
from .params import ParamStack, stack_machine_params, stack_params, stack_res_params
from .res import (
    ResSetpoints,
    ResState,
    init_res,
    invert_power,
    measured_q,
    q_command_held,
    res_current_commands,
    res_power_commands,
    res_rhs,
)

__all__ = [
    "ExciterState",
    "MachineSetpoints",
    "MachineState",
    "ParamStack",
    "ResSetpoints",
    "ResState",
    "TurbineState",
    "electrical_torque",
    "exciter_rhs",
    "init_machine",
    "init_res",
    "invert_power",
    "machine_frame_rotation",
    "machine_rhs",
    "measured_q",
    "q_command_held",
    "res_current_commands",
    "res_power_commands",
    "res_rhs",
    "stack_machine_params",
    "stack_params",
    "stack_res_params",
]
