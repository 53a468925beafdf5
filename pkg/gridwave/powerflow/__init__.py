"""
潮流计算模块
"""

from .newton import PowerFlowSolution, compute_injections, solve_powerflow, write_solution

__all__ = ["PowerFlowSolution", "compute_injections", "solve_powerflow", "write_solution"]
