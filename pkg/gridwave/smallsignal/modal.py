"""
模态分析：特征值、阻尼比、振型、参与因子、留数与控制点排序
"""

import fnmatch
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import linalg

from ..errors import DefectiveMatrix, EmptyFilter
from .config import SMALLSIGNAL_CONFIG
from .linearize import LinearModel

logger = logging.getLogger(__name__)


@dataclass
class ModalReport:
    """
    按阻尼比升序排列的模态

    right_vectors 的第 i 列、left_vectors 的第 i 行对应第 i 个特征值。
    """

    eigenvalues: np.ndarray
    freq_hz: np.ndarray
    damping_pct: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    participation: np.ndarray
    participation_normalized: np.ndarray
    state_labels: Tuple[str, ...]
    condition: float = 1.0

    @property
    def n_modes(self) -> int:
        return self.eigenvalues.size

    def mode_labels(self) -> List[str]:
        return [f"mode_{i + 1}" for i in range(self.n_modes)]

    def modes_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "re": self.eigenvalues.real,
                "im": self.eigenvalues.imag,
                "freq_hz": self.freq_hz,
                "damping_pct": self.damping_pct,
            }
        )


def damping_ratio_pct(eigenvalues) -> np.ndarray:
    """ζ = −σ/|λ|·100，|λ| = 0 时取 100"""
    lam = np.asarray(eigenvalues, dtype=complex)
    mag = np.abs(lam)
    safe = np.where(mag > 0, mag, 1.0)
    return np.where(mag > 0, -lam.real / safe * 100.0, 100.0)


def participation_matrix(right: np.ndarray, left: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    参与因子

    p_ki = |v_ki||w_ik| / Σ_k |v_ki||w_ik|，归一化阵每列除以本列最大值。
    """
    raw = np.abs(right) * np.abs(left.T)
    sums = raw.sum(axis=0)
    p = raw / np.where(sums > 0, sums, 1.0)
    peaks = p.max(axis=0) if p.size else np.zeros(0)
    p_norm = p / np.where(peaks > 0, peaks, 1.0)
    return p, p_norm


def eigenanalysis(model: LinearModel) -> ModalReport:
    """
    稠密非对称特征分解

    Args:
        model: LinearModel

    Returns:
        ModalReport

    Raises:
        DefectiveMatrix: 右特征向量矩阵条件数超过 1e12
    """
    a = model.a
    n = a.shape[0]
    labels = tuple(model.state_labels)
    if n == 0:
        empty = np.zeros((0, 0))
        return ModalReport(
            np.zeros(0, dtype=complex), np.zeros(0), np.zeros(0),
            empty.astype(complex), empty.astype(complex), empty, empty, labels,
        )

    values, right = linalg.eig(a)
    condition = float(np.linalg.cond(right))
    if not np.isfinite(condition) or condition > SMALLSIGNAL_CONFIG["condition_limit"]:
        raise DefectiveMatrix(condition)
    left = linalg.inv(right)

    zeta = damping_ratio_pct(values)
    order = np.argsort(zeta, kind="stable")
    values = values[order]
    right = right[:, order]
    left = left[order, :]
    zeta = zeta[order]
    freq = np.abs(values.imag) / (2.0 * np.pi)
    p, p_norm = participation_matrix(right, left)

    report = ModalReport(values, freq, zeta, right, left, p, p_norm, labels, condition)
    oscillatory = int(np.sum(values.imag > 0))
    logger.info(f"特征分析完成: {n} 个特征值, {oscillatory} 对振荡模态, 条件数 {condition:.3e}")
    return report


def participation(report: ModalReport) -> Tuple[np.ndarray, np.ndarray]:
    """返回 (p, p_normalized)"""
    return report.participation, report.participation_normalized


def participation_frame(report: ModalReport, normalized: bool = False, states: Optional[Sequence[str]] = None):
    """参与因子表：state 列加 mode_1..mode_n 列，可按状态标签筛选"""
    matrix = report.participation_normalized if normalized else report.participation
    frame = pd.DataFrame(matrix, columns=report.mode_labels())
    frame.insert(0, "state", list(report.state_labels))
    if states is not None:
        wanted = set(states)
        frame = frame[frame["state"].isin(wanted)].reset_index(drop=True)
    return frame


def lightly_damped_filter(report: ModalReport, zeta_threshold_pct: Optional[float] = None) -> List[int]:
    """
    弱阻尼振荡模态（每对共轭只取虚部为正者），按阻尼比升序

    Returns:
        模态下标列表（0 起）
    """
    if zeta_threshold_pct is None:
        zeta_threshold_pct = SMALLSIGNAL_CONFIG["zeta_threshold"]
    return [
        i
        for i in range(report.n_modes)
        if report.eigenvalues[i].imag > 0 and report.damping_pct[i] < zeta_threshold_pct
    ]


def mode_shape(report: ModalReport, mode: int, state_filter: Optional[str] = None) -> pd.DataFrame:
    """
    模态振型

    取右特征向量中标签匹配 state_filter（fnmatch 通配）的分量，除以其中模最大的分量，
    最大者幅值为 1、相角为 0。

    Args:
        report: ModalReport
        mode: 模态下标（0 起）
        state_filter: 状态标签通配，缺省 "*.omega"

    Returns:
        DataFrame（state, re, im, magnitude, angle_deg）
    """
    if not 0 <= mode < report.n_modes:
        raise IndexError(f"模态下标 {mode} 超出范围 [0, {report.n_modes})")
    pattern = SMALLSIGNAL_CONFIG["shape_filter"] if state_filter is None else state_filter
    rows = [k for k, label in enumerate(report.state_labels) if fnmatch.fnmatchcase(label, pattern)]
    if not rows:
        raise EmptyFilter(pattern)

    components = report.right_vectors[rows, mode]
    peak = components[int(np.argmax(np.abs(components)))]
    if abs(peak) > 0:
        components = components / peak
    return pd.DataFrame(
        {
            "state": [report.state_labels[k] for k in rows],
            "re": components.real,
            "im": components.imag,
            "magnitude": np.abs(components),
            "angle_deg": np.rad2deg(np.angle(components)),
        }
    )


def classify_mode(report: ModalReport, mode: int, areas: Optional[Dict[str, int]] = None) -> str:
    """
    模态分类

    实特征值为 non-oscillatory；f >= 1 Hz 为 local；f < 1 Hz 且各区 ω 振型均值相量
    夹角超过 90° 为 inter-area；其余为 other。

    Args:
        report: ModalReport
        mode: 模态下标
        areas: 设备标签 -> 区域编号，例如 {"G1": 1}

    Returns:
        分类字符串
    """
    lam = report.eigenvalues[mode]
    if lam.imag == 0:
        return "non-oscillatory"
    if report.freq_hz[mode] >= SMALLSIGNAL_CONFIG["interarea_max_hz"]:
        return "local"
    if not areas:
        return "other"
    try:
        shape = mode_shape(report, mode, "*.omega")
    except EmptyFilter:
        return "other"

    groups: Dict[int, List[complex]] = {}
    for _, row in shape.iterrows():
        device = row["state"].split(".")[0]
        if device in areas:
            groups.setdefault(areas[device], []).append(complex(row["re"], row["im"]))
    means = [np.mean(values) for _, values in sorted(groups.items()) if values]
    limit = np.deg2rad(SMALLSIGNAL_CONFIG["opposition_deg"])
    for i in range(len(means)):
        for j in range(i + 1, len(means)):
            if abs(means[i]) > 0 and abs(means[j]) > 0:
                gap = abs(np.angle(means[i] / means[j]))
                if gap > limit:
                    return "inter-area"
    return "other"


def dominant_states(report: ModalReport, modes: Sequence[int], threshold: Optional[float] = None) -> pd.DataFrame:
    """各模态中归一化参与因子不低于阈值的状态（mode 列从 1 起编号）"""
    if threshold is None:
        threshold = SMALLSIGNAL_CONFIG["dominant_threshold"]
    rows = []
    for mode in modes:
        column = report.participation_normalized[:, mode]
        for k in np.argsort(-column, kind="stable"):
            if column[k] < threshold:
                break
            label = report.state_labels[k]
            rows.append(
                {
                    "mode": mode + 1,
                    "state": label,
                    "device": label.split(".")[0],
                    "participation": float(report.participation[k, mode]),
                    "normalized": float(column[k]),
                }
            )
    return pd.DataFrame(rows, columns=["mode", "state", "device", "participation", "normalized"])


@dataclass
class ResidueReport:
    """
    模态可控度 w_iB（模态 × 输入）、可观度 Cv_i（输出 × 模态）与留数 R（模态 × 输出 × 输入）
    """

    eigenvalues: np.ndarray
    controllability: np.ndarray
    observability: np.ndarray
    residues: np.ndarray
    input_labels: Tuple[str, ...]
    output_labels: Tuple[str, ...]

    @staticmethod
    def _per_mode_normalized(values: np.ndarray, axes) -> np.ndarray:
        mags = np.abs(values)
        if mags.size == 0:
            return mags
        peaks = mags.max(axis=axes, keepdims=True)
        return np.where(peaks > 0, mags / np.where(peaks > 0, peaks, 1.0), 0.0)

    @property
    def ctrl_normalized(self) -> np.ndarray:
        """每个模态内按输入最大值归一"""
        return self._per_mode_normalized(self.controllability, 1)

    @property
    def obs_normalized(self) -> np.ndarray:
        """每个模态内按输出最大值归一（形状 模态 × 输出）"""
        return self._per_mode_normalized(self.observability.T, 1)

    @property
    def res_normalized(self) -> np.ndarray:
        """每个模态、每个输出内按输入最大值归一"""
        return self._per_mode_normalized(self.residues, 2)

    def to_frame(self, modes: Optional[Sequence[int]] = None) -> pd.DataFrame:
        """residues.csv 表：mode,input,output,ctrl_mag,obs_mag,res_mag,res_phase_deg"""
        modes = range(self.eigenvalues.size) if modes is None else modes
        ctrl, obs, res = self.ctrl_normalized, self.obs_normalized, self.res_normalized
        rows = []
        for i in modes:
            for o, output in enumerate(self.output_labels):
                for j, label in enumerate(self.input_labels):
                    rows.append(
                        {
                            "mode": i + 1,
                            "input": label,
                            "output": output,
                            "ctrl_mag": ctrl[i, j],
                            "obs_mag": obs[i, o],
                            "res_mag": res[i, o, j],
                            "res_phase_deg": float(np.rad2deg(np.angle(self.residues[i, o, j]))),
                        }
                    )
        columns = ["mode", "input", "output", "ctrl_mag", "obs_mag", "res_mag", "res_phase_deg"]
        return pd.DataFrame(rows, columns=columns)


def residues(model: LinearModel, report: ModalReport) -> ResidueReport:
    """
    模态留数 R_i = (C v_i)(w_i B)

    Args:
        model: LinearModel
        report: 同一模型的 ModalReport

    Returns:
        ResidueReport
    """
    ctrl = report.left_vectors @ model.b
    obs = model.c @ report.right_vectors
    res = obs.T[:, :, None] * ctrl[:, None, :]
    return ResidueReport(
        eigenvalues=report.eigenvalues,
        controllability=ctrl,
        observability=obs,
        residues=res,
        input_labels=tuple(model.input_labels),
        output_labels=tuple(model.output_labels),
    )


def wrap_deg(angle):
    """折算到 (−180°, 180°]"""
    wrapped = np.mod(np.asarray(angle, dtype=float) + 180.0, 360.0) - 180.0
    return np.where(wrapped == -180.0, 180.0, wrapped)


def rank_sites(report: ResidueReport, mode: int, output: Optional[str] = None) -> pd.DataFrame:
    """
    按留数幅值排序控制点

    compensation_deg = 180° − 留数相角（折算到 (−180°, 180°]），即超前滞后环节需提供的相位。

    Args:
        report: ResidueReport
        mode: 模态下标
        output: 输出标签，缺省取该模态下留数最大的输出

    Returns:
        DataFrame（mode, output, rank, input, res_abs, res_mag, res_phase_deg, compensation_deg）
    """
    if output is None:
        if not report.output_labels:
            raise EmptyFilter("outputs")
        o = int(np.argmax(np.abs(report.residues[mode]).max(axis=1)))
    else:
        o = report.output_labels.index(output)
    values = report.residues[mode, o, :]
    norm = report.res_normalized[mode, o, :]
    phase = np.rad2deg(np.angle(values))
    order = np.argsort(-np.abs(values), kind="stable")
    return pd.DataFrame(
        {
            "mode": mode + 1,
            "output": report.output_labels[o],
            "rank": np.arange(1, order.size + 1),
            "input": [report.input_labels[j] for j in order],
            "res_abs": np.abs(values)[order],
            "res_mag": norm[order],
            "res_phase_deg": phase[order],
            "compensation_deg": wrap_deg(180.0 - phase[order]),
        }
    )
