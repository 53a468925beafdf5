"""
频率响应、稳定裕度与零极点
"""

from .export import export_plots
from .margins import MarginReport, closed_loop_stable, margins
from .pole_zero import pole_zero, transmission_zeros
from .response import FrequencyResponse, evaluate_refined, evaluate_response, evaluate_siso, unwrap_phase

__all__ = [
    "FrequencyResponse",
    "MarginReport",
    "closed_loop_stable",
    "evaluate_refined",
    "evaluate_response",
    "evaluate_siso",
    "export_plots",
    "margins",
    "pole_zero",
    "transmission_zeros",
    "unwrap_phase",
]
