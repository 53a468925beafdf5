"""
参数堆叠

把逐台设备的记录按字段堆叠成 numpy 数组，模型函数即可一次处理全部设备。
可选限值缺省时换成 ±inf。
"""

from dataclasses import fields, replace
from typing import Dict, Sequence

import numpy as np
import pandas as pd

from ..case.records import ExciterRecord, MachineRecord, ResPlantRecord, TurbineRecord

# 缺省值为 None 时的替代值
_UNBOUNDED = {
    "vr_max": np.inf,
    "vr_min": -np.inf,
    "ip_max": np.inf,
    "iq_max": np.inf,
    "iq_min": -np.inf,
}

# 只用于标注的非数值字段
_SKIPPED = {"bus", "machine", "area", "technology"}


class ParamStack:
    """按字段访问的参数数组集合，属性名与记录字段一致"""

    def __init__(self, columns: Dict[str, np.ndarray], size: int):
        self._columns = columns
        self._size = size

    def __getattr__(self, name):
        try:
            return self.__dict__["_columns"][name]
        except KeyError:
            raise AttributeError(name)

    def __len__(self):
        return self._size

    def __repr__(self):
        return f"<ParamStack n={self._size} fields={sorted(self._columns)}>"


def stack_params(records: Sequence, record_type) -> ParamStack:
    """
    把同类记录堆叠成 ParamStack

    Args:
        records: 记录序列
        record_type: 记录数据类，空序列时用于确定字段

    Returns:
        ParamStack
    """
    names = [f.name for f in fields(record_type) if f.name not in _SKIPPED]
    if not records:
        return ParamStack({name: np.zeros(0) for name in names}, 0)

    frame = pd.DataFrame([{name: getattr(r, name) for name in names} for r in records])
    columns = {}
    for name in names:
        column = frame[name]
        if name in _UNBOUNDED:
            column = column.where(column.notna(), _UNBOUNDED[name])
        columns[name] = column.to_numpy(dtype=float)
    return ParamStack(columns, len(records))


def stack_machine_params(case):
    """按同步机顺序堆叠同步机、励磁、原动机参数，返回 (machines, exciters, turbines)"""
    machines = list(case.machines)
    exciters = [case.exciter_for(k) for k in range(len(machines))]
    turbines = [case.turbine_for(k) for k in range(len(machines))]
    return (
        stack_params(machines, MachineRecord),
        stack_params(exciters, ExciterRecord),
        stack_params(turbines, TurbineRecord),
    )


def stack_res_params(case) -> ParamStack:
    """堆叠新能源参数；只给出 iq_max 时 iq_min 取 −iq_max"""
    plants = []
    for plant in case.res_plants:
        if plant.iq_min is None and plant.iq_max is not None:
            plant = replace(plant, iq_min=-plant.iq_max)
        plants.append(plant)
    return stack_params(plants, ResPlantRecord)
