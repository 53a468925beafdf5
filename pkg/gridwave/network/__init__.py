"""
网络模块：导纳矩阵装配、负荷吸收、机内节点扩展、Kron 消去与混合边界求解
"""

from .reduction import (
    BoundarySolution,
    KronRecovery,
    ReducedNetworkSet,
    ReducedTopology,
    build_reduced_set,
    kron_reduce,
    mixed_boundary_solve,
)
from .ybus import (
    AdmittanceMatrix,
    absorb_loads,
    apply_fault,
    build_ybus,
    dump_admittance,
    extend_machine_nodes,
)

__all__ = [
    "AdmittanceMatrix",
    "BoundarySolution",
    "KronRecovery",
    "ReducedNetworkSet",
    "ReducedTopology",
    "absorb_loads",
    "apply_fault",
    "build_reduced_set",
    "build_ybus",
    "dump_admittance",
    "extend_machine_nodes",
    "kron_reduce",
    "mixed_boundary_solve",
]
