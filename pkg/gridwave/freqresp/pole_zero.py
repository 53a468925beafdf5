"""
零极点

极点为 A 的特征值；零点为矩阵束 ([[A, b], [c, d]], diag(I, 0)) 的有限广义特征值。
"""

import logging
from typing import Tuple

import numpy as np
from scipy import linalg

from .config import FREQRESP_CONFIG

logger = logging.getLogger(__name__)


def _sorted(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((values.imag, values.real))
    return values[order]


def transmission_zeros(a, b, c, d) -> np.ndarray:
    """单输入单输出有限零点"""
    a = np.asarray(a, dtype=float)
    n = a.shape[0] if a.size else 0
    if n == 0:
        return np.zeros(0, dtype=complex)
    pencil = np.zeros((n + 1, n + 1))
    pencil[:n, :n] = a
    pencil[:n, n] = np.asarray(b, dtype=float).reshape(n)
    pencil[n, :n] = np.asarray(c, dtype=float).reshape(n)
    pencil[n, n] = d
    weight = np.zeros((n + 1, n + 1))
    weight[:n, :n] = np.eye(n)

    w = linalg.eig(pencil, weight, left=False, right=False, homogeneous_eigvals=True)
    alpha, beta = w[0], w[1]
    finite = np.abs(beta) > FREQRESP_CONFIG["zero_beta_tol"] * np.maximum(1.0, np.abs(alpha))
    zeros = alpha[finite] / beta[finite]
    zeros = zeros[np.abs(zeros) < FREQRESP_CONFIG["zero_max_abs"]]
    return _sorted(zeros)


def pole_zero(model, io: Tuple[str, str]) -> Tuple[np.ndarray, np.ndarray]:
    """
    单输入单输出通道的极点与有限零点

    Args:
        model: LinearModel
        io: (输入标签, 输出标签)

    Returns:
        (poles, zeros)，均按实部、虚部排序
    """
    a, b, c, d = model.siso(*io)
    poles = _sorted(linalg.eigvals(a)) if a.size else np.zeros(0, dtype=complex)
    zeros = transmission_zeros(a, b, c, d)
    logger.info(f"{io[0]} -> {io[1]}: {poles.size} 个极点, {zeros.size} 个有限零点")
    return poles, zeros
