"""
状态向量布局

每台同步机 11 个状态、每个新能源电站 3 个状态，按设备顺序连续排列。
标签形如 "G1.delta"、"RES2.q_pi"。
"""

from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np

from ..dynamics.config import DYNAMICS_CONFIG

MACHINE_STATES = tuple(DYNAMICS_CONFIG["machine_states"])
RES_STATES = tuple(DYNAMICS_CONFIG["res_states"])


@dataclass(frozen=True)
class StateLayout:
    machine_labels: Tuple[str, ...]
    res_labels: Tuple[str, ...]
    labels: Tuple[str, ...] = field(init=False)
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = [f"{dev}.{name}" for dev in self.machine_labels for name in MACHINE_STATES]
        labels += [f"{dev}.{name}" for dev in self.res_labels for name in RES_STATES]
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "index", {label: i for i, label in enumerate(labels)})

    @property
    def n_states(self) -> int:
        return len(self.labels)

    @property
    def n_machines(self) -> int:
        return len(self.machine_labels)

    @property
    def n_res(self) -> int:
        return len(self.res_labels)

    def machine_slice(self, name: str) -> np.ndarray:
        """某一同步机状态在全部同步机上的下标"""
        j = MACHINE_STATES.index(name)
        return np.arange(self.n_machines, dtype=int) * len(MACHINE_STATES) + j

    def res_slice(self, name: str) -> np.ndarray:
        j = RES_STATES.index(name)
        base = self.n_machines * len(MACHINE_STATES)
        return base + np.arange(self.n_res, dtype=int) * len(RES_STATES) + j

    def indices(self, labels: Sequence[str]) -> np.ndarray:
        try:
            return np.array([self.index[label] for label in labels], dtype=int)
        except KeyError as exc:
            raise KeyError(f"未知状态标签: {exc.args[0]}")


@dataclass
class SystemState:
    """状态向量及其布局"""

    x: np.ndarray
    layout: StateLayout

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        if self.x.shape != (self.layout.n_states,):
            raise ValueError(f"状态向量长度 {self.x.size} 与布局 {self.layout.n_states} 不一致")

    def __getitem__(self, label: str) -> float:
        return float(self.x[self.layout.index[label]])

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(self.layout.labels, self.x.tolist()))
