"""
SVG 绘图

matplotlib 只在需要出图时导入，并固定使用 Agg 后端；SVG 不写入日期、哈希盐固定，
同样的数据得到同样的文件。
"""

import logging
from pathlib import Path

import numpy as np

from .errors import IoError

logger = logging.getLogger(__name__)

PLOT_STYLE = {
    "figure.figsize": (8.0, 4.8),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 7,
    "svg.hashsalt": "gridwave",
    "svg.fonttype": "none",
}


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise IoError("matplotlib", f"SVG 输出需要安装 matplotlib（requirements-plot.txt）: {exc}")
    matplotlib.use("Agg")
    matplotlib.rcParams.update(PLOT_STYLE)
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path) -> Path:
    path = Path(path)
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise IoError(path, str(exc))
    finally:
        fig.clf()
        import matplotlib.pyplot as plt

        plt.close(fig)
    logger.debug(f"已输出图形 {path}")
    return path


def line_plot(frame, x: str, path, ylabel: str = "", title: str = "", max_lines: int = 40) -> Path:
    """以 x 列为横轴画其余各列"""
    plt = _pyplot()
    fig, ax = plt.subplots()
    columns = [c for c in frame.columns if c != x][:max_lines]
    for column in columns:
        ax.plot(frame[x], frame[column], linewidth=0.8, label=column)
    ax.set_xlabel(x)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(columns) <= 16:
        ax.legend(loc="best", ncol=2)
    return _save(fig, path)


def compass_plot(shape, path, title: str = "") -> Path:
    """模态振型罗盘图，shape 含 state、magnitude、angle_deg 列"""
    plt = _pyplot()
    fig = plt.figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot(projection="polar")
    for _, row in shape.iterrows():
        theta = np.deg2rad(row["angle_deg"])
        ax.annotate(
            "",
            xy=(theta, row["magnitude"]),
            xytext=(0.0, 0.0),
            arrowprops={"arrowstyle": "->", "linewidth": 0.8},
        )
        ax.text(theta, row["magnitude"] * 1.05, str(row["state"]), fontsize=6)
    ax.set_rmax(1.1)
    ax.set_title(title)
    return _save(fig, path)


def heatmap(matrix, row_labels, col_labels, path, title: str = "") -> Path:
    """参与因子热图"""
    plt = _pyplot()
    matrix = np.asarray(matrix, dtype=float)
    height = max(4.0, 0.12 * len(row_labels))
    fig, ax = plt.subplots(figsize=(max(5.0, 0.35 * len(col_labels) + 2.0), height))
    image = ax.imshow(matrix, aspect="auto", cmap="viridis", vmin=0.0, vmax=max(1e-12, float(matrix.max(initial=0.0))))
    ax.set_yticks(range(len(row_labels)))
    ax.set_yticklabels(row_labels, fontsize=4)
    ax.set_xticks(range(len(col_labels)))
    ax.set_xticklabels(col_labels, rotation=90, fontsize=6)
    ax.grid(False)
    fig.colorbar(image, ax=ax)
    ax.set_title(title)
    return _save(fig, path)


def bar_chart(labels, values, path, ylabel: str = "", title: str = "") -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots()
    ax.bar(range(len(labels)), values)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return _save(fig, path)


def bode_plot(omega, mag_db, phase_deg, path, title: str = "") -> Path:
    plt = _pyplot()
    fig, (ax_mag, ax_phase) = plt.subplots(2, 1, sharex=True)
    ax_mag.semilogx(omega, mag_db, linewidth=0.9)
    ax_mag.set_ylabel("幅值 (dB)")
    ax_phase.semilogx(omega, phase_deg, linewidth=0.9)
    ax_phase.set_ylabel("相角 (deg)")
    ax_phase.set_xlabel("ω (rad/s)")
    ax_mag.set_title(title)
    return _save(fig, path)


def nyquist_plot(g, path, title: str = "") -> Path:
    """Nyquist 图，含负频率镜像并标出 (−1, 0)"""
    plt = _pyplot()
    g = np.asarray(g, dtype=complex)
    fig, ax = plt.subplots(figsize=(5.5, 5.0))
    ax.plot(g.real, g.imag, linewidth=0.9)
    ax.plot(g.real, -g.imag, linewidth=0.6, linestyle="--")
    ax.plot([-1.0], [0.0], marker="+", markersize=10, color="red")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    return _save(fig, path)


def nichols_plot(phase_deg, mag_db, path, title: str = "") -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots()
    ax.plot(phase_deg, mag_db, linewidth=0.9)
    ax.plot([-180.0], [0.0], marker="+", markersize=10, color="red")
    ax.set_xlabel("相角 (deg)")
    ax.set_ylabel("幅值 (dB)")
    ax.set_title(title)
    return _save(fig, path)


def pole_zero_plot(poles, zeros, path, title: str = "") -> Path:
    plt = _pyplot()
    poles = np.asarray(poles, dtype=complex)
    zeros = np.asarray(zeros, dtype=complex)
    fig, ax = plt.subplots()
    ax.scatter(poles.real, poles.imag, marker="x", label="poles")
    if zeros.size:
        ax.scatter(zeros.real, zeros.imag, marker="o", facecolors="none", edgecolors="C1", label="zeros")
    ax.axvline(0.0, color="black", linewidth=0.5)
    ax.set_xlabel("σ (1/s)")
    ax.set_ylabel("jω (rad/s)")
    ax.legend(loc="best")
    ax.set_title(title)
    return _save(fig, path)
