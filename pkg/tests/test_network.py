#!/usr/bin/env python3
"""
网络建模测试：导纳矩阵、Kron 消去、混合边界求解
"""

import os
import sys
import unittest
from dataclasses import replace

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gridwave.case import BranchRecord, BusRecord, NetworkCase, load_case
from gridwave.case.config import bundled_case_path
from gridwave.errors import SingularBranch, UnknownBus
from gridwave.network import (
    AdmittanceMatrix,
    absorb_loads,
    apply_fault,
    build_reduced_set,
    build_ybus,
    extend_machine_nodes,
    kron_reduce,
    mixed_boundary_solve,
)
from gridwave.powerflow import solve_powerflow


def _three_bus(with_machine=True):
    smib = load_case(bundled_case_path("smib"))
    buses = (
        BusRecord(1, "slack"),
        BusRecord(2, "pq", g_shunt=0.5),
        BusRecord(3, "pq", p_load=0.4, q_load=0.1),
    )
    branches = (
        BranchRecord(1, 2, 0.01, 0.1),
        BranchRecord(2, 3, 0.0, 0.2),
        BranchRecord(1, 3, 0.0, 0.25),
    )
    machines = (smib.machines[0],) if with_machine else ()
    return NetworkCase(buses=buses, branches=branches, machines=machines)


def _random_network(rng):
    """4–10 条母线的随机连通网络，1–2 台同步机、1–2 座新能源电站，每条母线带对地负荷"""
    template = load_case(bundled_case_path("smib")).machines[0]
    n = int(rng.integers(4, 11))
    buses = tuple(
        BusRecord(k + 1, "slack" if k == 0 else "pq", g_shunt=rng.uniform(0.1, 1.0), b_shunt=rng.uniform(-0.5, 0.2))
        for k in range(n)
    )
    edges = {(int(rng.integers(0, k)), k) for k in range(1, n)}
    for _ in range(int(rng.integers(0, n))):
        i, j = sorted(rng.choice(n, size=2, replace=False).tolist())
        edges.add((i, j))
    branches = tuple(
        BranchRecord(i + 1, j + 1, rng.uniform(0.0, 0.05), rng.uniform(0.05, 0.5), b=rng.uniform(0.0, 0.1))
        for i, j in sorted(edges)
    )
    order = rng.permutation(n) + 1
    n_machines = int(rng.integers(1, 3))
    n_res = int(rng.integers(1, 3))
    machines = tuple(replace(template, bus=int(bus)) for bus in order[:n_machines])
    res_buses = [int(bus) for bus in order[n_machines:n_machines + n_res]]
    return NetworkCase(buses=buses, branches=branches, machines=machines), res_buses


def _full_solution(y, machines, res_buses, e, i_res):
    """在扩展网络上整体求解：机内节点电压已知，母线注入仅新能源母线非零"""
    y_ext = extend_machine_nodes(y, machines).entries
    n = y.n
    injection = np.zeros(n, dtype=complex)
    for bus, current in zip(res_buses, i_res):
        injection[y.index_of(bus)] = current
    v_bus = np.linalg.solve(y_ext[:n, :n], injection - y_ext[:n, n:] @ e)
    i_machine = y_ext[n:, :n] @ v_bus + y_ext[n:, n:] @ e
    return v_bus, i_machine


class TestYbus(unittest.TestCase):
    """导纳矩阵装配测试"""

    def test_two_bus_entries(self):
        """测试两母线导纳矩阵"""
        y = build_ybus(load_case(bundled_case_path("two_bus")))
        expected = np.array([[-10j, 10j], [10j, -10j]])
        np.testing.assert_allclose(y.entries, expected, atol=1e-12)
        self.assertEqual(y.node_labels, (1, 2))
        self.assertTrue(y.is_symmetric())

    def test_charging_and_shunt(self):
        """测试线路充电电纳和母线并联导纳"""
        case = NetworkCase(
            buses=(BusRecord(1, "slack", b_shunt=0.3), BusRecord(2, "pq")),
            branches=(BranchRecord(1, 2, 0.0, 0.1, b=0.2),),
        )
        y = build_ybus(case)
        self.assertAlmostEqual(y.entries[0, 0], -10j + 0.1j + 0.3j)
        self.assertAlmostEqual(y.entries[1, 1], -10j + 0.1j)

    def test_phase_shifter_is_unsymmetric(self):
        """测试移相变压器使矩阵不对称"""
        case = NetworkCase(
            buses=(BusRecord(1, "slack"), BusRecord(2, "pq")),
            branches=(BranchRecord(1, 2, 0.0, 0.1, tap=1.05, phase_shift=30.0),),
        )
        y = build_ybus(case)
        self.assertFalse(y.is_symmetric())
        self.assertAlmostEqual(abs(y.entries[0, 0]), 10.0 / 1.05**2)

    def test_out_of_service_branch(self):
        """测试停运支路不参与装配"""
        case = NetworkCase(
            buses=(BusRecord(1, "slack"), BusRecord(2, "pq")),
            branches=(BranchRecord(1, 2, 0.0, 0.1), BranchRecord(1, 2, 0.0, 0.1, status=False)),
        )
        self.assertAlmostEqual(build_ybus(case).entries[0, 1], 10j)

    def test_zero_impedance_branch(self):
        """测试零阻抗支路"""
        case = NetworkCase(buses=(BusRecord(1, "slack"), BusRecord(2, "pq")), branches=(BranchRecord(1, 2, 0, 0),))
        with self.assertRaises(SingularBranch):
            build_ybus(case)

    def test_absorb_loads(self):
        """测试负荷按恒阻抗并入"""
        case = load_case(bundled_case_path("two_bus"))
        pf = solve_powerflow(case)
        y = absorb_loads(build_ybus(case), pf)
        added = y.entries[1, 1] - (-10j)
        self.assertAlmostEqual(added, 0.5 / pf.v_mag[1] ** 2)

    def test_apply_fault_unknown_bus(self):
        """测试故障母线不存在"""
        y = build_ybus(load_case(bundled_case_path("two_bus")))
        with self.assertRaises(UnknownBus):
            apply_fault(y, 7, 1e7)


class TestKron(unittest.TestCase):
    """Kron 消去测试"""

    def test_series_chain(self):
        """测试消去串联中点"""
        y = AdmittanceMatrix(
            np.array([[-10j, 10j, 0], [10j, -20j, 10j], [0, 10j, -10j]]),
            ("a", "m", "b"),
        )
        y_red, recovery = kron_reduce(y, ["a", "b"])
        np.testing.assert_allclose(y_red.entries, [[-5j, 5j], [5j, -5j]], atol=1e-12)
        v_mid = recovery.recover(np.array([1.0, 0.9j]))
        np.testing.assert_allclose(v_mid, [(1.0 + 0.9j) / 2], atol=1e-12)

    def test_keep_everything(self):
        """测试不消去任何节点"""
        y = build_ybus(load_case(bundled_case_path("two_bus")))
        y_red, recovery = kron_reduce(y, [2, 1])
        self.assertEqual(y_red.node_labels, (2, 1))
        self.assertEqual(recovery.interior, ())

    def test_fault_decouples_machines(self):
        """测试中间母线金属性短路后两机几乎解耦"""
        case = load_case(bundled_case_path("smib"))
        pf = solve_powerflow(case)
        rns = build_reduced_set(absorb_loads(build_ybus(case), pf), case.machines, [], fault_bus=2)
        self.assertLess(abs(rns.fault.a[0, 1]), 1e-4 * abs(rns.pre.a[0, 1]))
        self.assertIs(rns.post, rns.pre)


class TestMixedBoundary(unittest.TestCase):
    """混合边界求解测试"""

    def test_matches_full_network_solution(self):
        """测试与扩展网络整体求解一致"""
        case = _three_bus()
        y = build_ybus(case)
        rns = build_reduced_set(y, case.machines, [3])
        e = np.array([1.05 * np.exp(0.3j)])
        i_res = np.array([0.2 - 0.1j])

        sol = mixed_boundary_solve(rns, "pre", e, i_res)

        # 整体求解：机内节点电压已知，母线注入仅新能源母线非零
        y_ext = extend_machine_nodes(y, case.machines).entries
        n = 3
        injection = np.zeros(n, dtype=complex)
        injection[2] = i_res[0]
        v_bus = np.linalg.solve(y_ext[:n, :n], injection - y_ext[:n, n:] @ e)
        i_machine = y_ext[n:, :n] @ v_bus + y_ext[n:, n:] @ e

        np.testing.assert_allclose(sol.v_res, [v_bus[2]], atol=1e-10)
        np.testing.assert_allclose(sol.i_machine, i_machine, atol=1e-10)
        np.testing.assert_allclose(sol.v_all, v_bus, atol=1e-10)

    def test_random_networks_match_full_solution(self):
        """测试 50 个随机网络上降阶求解与整体求解一致"""
        rng = np.random.default_rng(2024)
        for trial in range(50):
            case, res_buses = _random_network(rng)
            y = build_ybus(case)
            m = len(case.machines)
            e = rng.uniform(0.9, 1.1, m) * np.exp(1j * rng.uniform(-0.5, 0.5, m))
            i_res = rng.uniform(-1.0, 1.0, len(res_buses)) + 1j * rng.uniform(-1.0, 1.0, len(res_buses))
            with self.subTest(trial=trial, buses=y.n):
                sol = mixed_boundary_solve(build_reduced_set(y, case.machines, res_buses), "pre", e, i_res)
                v_bus, i_machine = _full_solution(y, case.machines, res_buses, e, i_res)
                np.testing.assert_allclose(sol.v_all, v_bus, rtol=1e-10, atol=1e-12)
                np.testing.assert_allclose(sol.i_machine, i_machine, rtol=1e-10, atol=1e-12)

    def test_random_kron_recovery_with_interior_currents(self):
        """测试随机网络上消去后恢复的内部电压与整体求解一致（内部节点有注入电流）"""
        rng = np.random.default_rng(7)
        for trial in range(50):
            case, _ = _random_network(rng)
            y = build_ybus(case)
            retained = [int(bus) for bus in rng.choice(y.n, size=int(rng.integers(1, y.n)), replace=False) + 1]
            y_red, recovery = kron_reduce(y, retained)
            keep = y.indices(retained)
            drop = y.indices(recovery.interior)
            v_retained = rng.normal(size=keep.size) + 1j * rng.normal(size=keep.size)
            i_interior = rng.normal(size=drop.size) + 1j * rng.normal(size=drop.size)
            with self.subTest(trial=trial, buses=y.n):
                rhs = i_interior - y.entries[np.ix_(drop, keep)] @ v_retained
                v_interior = np.linalg.solve(y.entries[np.ix_(drop, drop)], rhs)
                np.testing.assert_allclose(recovery.recover(v_retained, i_interior), v_interior, rtol=1e-10, atol=1e-12)
                # 内部无注入时保留节点电流由降阶矩阵给出
                v_free = recovery.recover(v_retained)
                i_full = y.entries[np.ix_(keep, keep)] @ v_retained + y.entries[np.ix_(keep, drop)] @ v_free
                np.testing.assert_allclose(y_red.entries @ v_retained, i_full, rtol=1e-10, atol=1e-12)

    def test_without_res(self):
        """测试没有新能源电站时只返回同步机电流"""
        case = _three_bus()
        rns = build_reduced_set(build_ybus(case), case.machines, [])
        sol = mixed_boundary_solve(rns, "pre", np.array([1.0 + 0j]), np.zeros(0), recover=False)
        self.assertEqual(sol.v_res.size, 0)
        self.assertIsNone(sol.v_all)
        np.testing.assert_allclose(sol.i_machine, rns.pre.a @ np.array([1.0 + 0j]))

    def test_unknown_res_bus(self):
        """测试新能源母线不存在"""
        case = _three_bus()
        with self.assertRaises(UnknownBus):
            build_reduced_set(build_ybus(case), case.machines, [42])


if __name__ == "__main__":
    unittest.main()
