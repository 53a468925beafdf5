"""
小信号分析模块
"""

from .export import count_near_zero, machine_areas, write_modes, write_participation, write_residues
from .linearize import (
    IoSelection,
    LinearModel,
    default_io,
    linearize,
    linearize_system,
    project_null_direction,
    reduce_reference_angle,
)
from .modal import (
    ModalReport,
    ResidueReport,
    classify_mode,
    damping_ratio_pct,
    dominant_states,
    eigenanalysis,
    lightly_damped_filter,
    mode_shape,
    participation,
    participation_frame,
    rank_sites,
    residues,
)

__all__ = [
    "IoSelection",
    "LinearModel",
    "ModalReport",
    "ResidueReport",
    "classify_mode",
    "count_near_zero",
    "damping_ratio_pct",
    "default_io",
    "dominant_states",
    "eigenanalysis",
    "lightly_damped_filter",
    "linearize",
    "linearize_system",
    "machine_areas",
    "mode_shape",
    "participation",
    "participation_frame",
    "project_null_direction",
    "rank_sites",
    "reduce_reference_angle",
    "residues",
    "write_modes",
    "write_participation",
    "write_residues",
]
