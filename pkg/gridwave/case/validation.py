"""
算例校验

validate_case 只返回违例清单，不抛异常；ensure_valid 在数值模块运行前拦截不合格算例。
"""

import logging
from dataclasses import dataclass, field
from typing import List

from ..errors import InvalidCase
from .records import NetworkCase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """一条违例：对象类型、对象标识、规则说明"""

    kind: str
    ident: str
    rule: str

    def __str__(self):
        return f"{self.kind} {self.ident}: {self.rule}"


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, ident, rule: str):
        self.violations.append(Violation(kind, str(ident), rule))

    def __len__(self):
        return len(self.violations)


def _check_buses(case: NetworkCase, report: ValidationReport):
    slacks = [bus.id for bus in case.buses if bus.kind == "slack"]
    if len(slacks) != 1:
        report.add("case", case.name, f"必须恰好有一条平衡母线，实际 {len(slacks)} 条")
    seen = set()
    for bus in case.buses:
        if bus.id <= 0:
            report.add("bus", bus.id, "编号必须为正整数")
        if bus.id in seen:
            report.add("bus", bus.id, "编号重复")
        seen.add(bus.id)
        if bus.kind in ("slack", "pv") and not bus.v_set > 0:
            report.add("bus", bus.id, "slack/pv 母线 v_set 必须大于 0")


def _check_branches(case: NetworkCase, report: ValidationReport):
    bus_ids = set(case.bus_ids)
    for k, br in enumerate(case.branches, start=1):
        ident = f"{k}({br.from_bus}-{br.to_bus})"
        if br.from_bus == br.to_bus:
            report.add("branch", ident, "首末端母线相同")
        if br.r == 0 and br.x == 0:
            report.add("branch", ident, "r = x = 0")
        if br.ratio <= 0:
            report.add("branch", ident, "变比必须大于 0")
        if br.from_bus not in bus_ids or br.to_bus not in bus_ids:
            report.add("branch", ident, "端点母线不存在")


def _check_machines(case: NetworkCase, report: ValidationReport):
    index = case.index
    for k, m in enumerate(case.machines):
        label = f"G{k + 1}"
        if not m.x_d > m.x_d_p > m.x_d_pp > m.x_ls >= 0:
            report.add("machine", label, "需满足 x_d > x_d_p > x_d_pp > x_ls >= 0")
        if not m.x_q > m.x_q_p > m.x_q_pp > m.x_ls:
            report.add("machine", label, "需满足 x_q > x_q_p > x_q_pp > x_ls")
        if min(m.t_do_p, m.t_do_pp, m.t_qo_p, m.t_qo_pp) <= 0:
            report.add("machine", label, "时间常数必须大于 0")
        if m.h <= 0:
            report.add("machine", label, "惯性常数 h 必须大于 0")
        if m.r_s < 0:
            report.add("machine", label, "定子电阻不能为负")
        if index.exciter_of[k] is None:
            report.add("machine", label, "缺少励磁系统")
        if index.turbine_of[k] is None:
            report.add("machine", label, "缺少原动机调速系统")

    for exc in case.exciters:
        label = f"G{exc.machine}"
        if min(exc.t_a, exc.t_e, exc.t_f) <= 0:
            report.add("exciter", label, "t_a, t_e, t_f 必须大于 0")
        if exc.k_a <= 0:
            report.add("exciter", label, "k_a 必须大于 0")
        if exc.vr_max is not None and exc.vr_min is not None and not exc.vr_min < exc.vr_max:
            report.add("exciter", label, "需满足 vr_min < vr_max")

    for tur in case.turbines:
        label = f"G{tur.machine}"
        if min(tur.t_ch, tur.t_sv) <= 0:
            report.add("turbine", label, "t_ch, t_sv 必须大于 0")
        if tur.r_d <= 0:
            report.add("turbine", label, "调差系数 r_d 必须大于 0")


def _check_res(case: NetworkCase, report: ValidationReport):
    machine_buses = {m.bus for m in case.machines}
    for k, r in enumerate(case.res_plants):
        label = f"RES{k + 1}"
        if not 0 < r.t_g <= 1:
            report.add("res_plant", label, "t_g 必须在 (0, 1] 内")
        if r.k_i < 0:
            report.add("res_plant", label, "k_i 不能为负")
        if r.ip_max is not None and r.ip_max <= 0:
            report.add("res_plant", label, "ip_max 必须大于 0")
        if r.iq_max is not None and r.iq_min is not None and not r.iq_min < r.iq_max:
            report.add("res_plant", label, "需满足 iq_min < iq_max")
        if r.v_freeze < 0:
            report.add("res_plant", label, "v_freeze 不能为负")
        if r.bus in machine_buses:
            report.add("res_plant", label, f"母线 {r.bus} 已接有同步机")


def _check_scenario(case: NetworkCase, report: ValidationReport):
    sc = case.scenario
    if sc.base_mva <= 0:
        report.add("scenario", "base_mva", "必须大于 0")
    if sc.freq_hz <= 0:
        report.add("scenario", "freq_hz", "必须大于 0")
    if sc.dt <= 0:
        report.add("scenario", "dt", "必须大于 0")
    if sc.t_end <= 0:
        report.add("scenario", "t_end", "必须大于 0")
    if sc.decimation < 1:
        report.add("scenario", "decimation", "必须不小于 1")
    if sc.zeta_threshold < 0:
        report.add("scenario", "zeta_threshold", "不能为负")
    if sc.has_fault:
        if sc.fault_bus not in set(case.bus_ids):
            report.add("scenario", "fault_bus", f"母线 {sc.fault_bus} 不存在")
        if not 0 <= sc.t_f1 < sc.t_f2 <= sc.t_end:
            report.add("scenario", "t_f1/t_f2", "需满足 0 <= t_f1 < t_f2 <= t_end")
        if sc.fault_admittance < 0:
            report.add("scenario", "fault_admittance", "不能为负")


def validate_case(case: NetworkCase) -> ValidationReport:
    """
    检查算例是否满足全部数据约束

    Args:
        case: 已读入的算例

    Returns:
        ValidationReport，空报告表示所有下游模块都可以接受该算例
    """
    report = ValidationReport()
    _check_buses(case, report)
    _check_branches(case, report)
    _check_machines(case, report)
    _check_res(case, report)
    _check_scenario(case, report)

    if report.ok:
        logger.info(f"算例 {case.name} 校验通过")
    else:
        logger.warning(f"算例 {case.name} 有 {len(report)} 处违例")
        for violation in report.violations:
            logger.debug(f"违例: {violation}")
    return report


def ensure_valid(case: NetworkCase) -> NetworkCase:
    """校验不通过时抛出 InvalidCase"""
    report = validate_case(case)
    if not report.ok:
        raise InvalidCase(report)
    return case
