#!/usr/bin/env python3
"""
潮流计算测试
"""

import os
import shutil
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gridwave.case import BusRecord, BranchRecord, NetworkCase, load_case
from gridwave.case.config import bundled_case_path
from gridwave.errors import PowerFlowError, UsageError
from gridwave.network import build_ybus
from gridwave.powerflow import compute_injections, solve_powerflow, write_solution


class TestPowerFlow(unittest.TestCase):
    """牛顿-拉夫逊潮流测试"""

    def test_two_bus_oracle(self):
        """测试两母线解析解：sin(2θ) = 2·P·x"""
        pf = solve_powerflow(load_case(bundled_case_path("two_bus")))
        theta = np.rad2deg(pf.v_ang[1])
        self.assertAlmostEqual(theta, -2.8696, places=3)
        self.assertAlmostEqual(pf.v_mag[1], np.cos(np.deg2rad(theta)), places=8)
        self.assertAlmostEqual(pf.p_inj[0], 0.5, places=8)
        self.assertLessEqual(pf.iterations, 6)
        self.assertLess(pf.max_mismatch, 1e-8)

    def test_mismatch_history(self):
        """测试每次迭代的不平衡量记录"""
        pf = solve_powerflow(load_case(bundled_case_path("smib")))
        history = pf.mismatch_history
        self.assertEqual(len(history), pf.iterations)
        self.assertLess(history[-1], 1e-8)
        self.assertLess(history[-1], history[-2])

    def test_zero_load_flat_start(self):
        """测试无负荷平启动一次即收敛到 1∠0"""
        case = NetworkCase(
            buses=(BusRecord(1, "slack"), BusRecord(2, "pq"), BusRecord(3, "pq")),
            branches=(BranchRecord(1, 2, 0.01, 0.1), BranchRecord(2, 3, 0.02, 0.2)),
        )
        pf = solve_powerflow(case)
        self.assertEqual(pf.iterations, 1)
        np.testing.assert_allclose(pf.v, np.ones(3), atol=1e-12)
        self.assertEqual(len(pf.mismatch_history), 1)

    def test_ieee68_converges(self):
        """测试 68 母线算例 10 次迭代内收敛"""
        pf = solve_powerflow(load_case(bundled_case_path("ieee68")))
        self.assertLessEqual(pf.iterations, 10)
        self.assertLessEqual(pf.max_mismatch, 1e-8)
        self.assertTrue(np.all((pf.v_mag > 0.95) & (pf.v_mag < 1.1)))
        slack = pf.row(65)
        self.assertAlmostEqual(pf.v_ang[slack], 0.0, places=12)
        self.assertGreater(pf.p_inj[slack], 0.0)

    def test_invalid_settings(self):
        """测试不合法的收敛判据和迭代次数"""
        case = load_case(bundled_case_path("two_bus"))
        with self.assertRaises(UsageError):
            solve_powerflow(case, tol=0.0)
        with self.assertRaises(UsageError):
            solve_powerflow(case, max_iter=0)

    def test_injections_consistent(self):
        """测试结果满足功率方程"""
        case = load_case(bundled_case_path("ieee68"))
        pf = solve_powerflow(case)
        s = compute_injections(build_ybus(case), pf.v)
        np.testing.assert_allclose(s, pf.s_inj, atol=1e-12)
        for bus, p, q in zip(case.buses, pf.p_inj, pf.q_inj):
            if bus.kind == "pq":
                self.assertAlmostEqual(p, bus.p_gen - bus.p_load, places=6)
                self.assertAlmostEqual(q, -bus.q_load, places=6)
            if bus.kind == "pv":
                self.assertAlmostEqual(pf.v_mag[pf.row(bus.id)], bus.v_set, places=10)

    def test_slack_angle_reference(self):
        """测试平衡母线相角取设定值"""
        case = NetworkCase(
            buses=(BusRecord(1, "slack", v_set=1.02, theta_set=10.0), BusRecord(2, "pq", p_load=0.2)),
            branches=(BranchRecord(1, 2, 0.0, 0.1),),
        )
        pf = solve_powerflow(case)
        self.assertAlmostEqual(np.rad2deg(pf.v_ang[0]), 10.0, places=10)
        self.assertAlmostEqual(pf.v_mag[0], 1.02, places=10)

    def test_diverges_beyond_loadability(self):
        """测试负荷超过传输极限时报不收敛"""
        case = NetworkCase(
            buses=(BusRecord(1, "slack"), BusRecord(2, "pq", p_load=6.0)),
            branches=(BranchRecord(1, 2, 0.0, 0.1),),
        )
        with self.assertRaises(PowerFlowError):
            solve_powerflow(case, max_iter=10)


class TestWriteSolution(unittest.TestCase):
    """潮流结果写出测试"""

    def setUp(self):
        """测试前准备"""
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_columns_and_values(self):
        """测试 solution.csv 表头与数值"""
        pf = solve_powerflow(load_case(bundled_case_path("two_bus")))
        path = write_solution(pf, self.tmp)
        frame = pd.read_csv(path)
        self.assertEqual(list(frame.columns), ["bus", "v_mag", "theta_deg", "p_inj", "q_inj"])
        self.assertEqual(frame["bus"].tolist(), [1, 2])
        self.assertAlmostEqual(frame["theta_deg"][1], -2.8696, places=3)

    def test_byte_identical_reruns(self):
        """测试重复运行输出逐字节一致"""
        case = load_case(bundled_case_path("smib"))
        first = Path(write_solution(solve_powerflow(case), Path(self.tmp))).read_bytes()
        second = Path(write_solution(solve_powerflow(case), Path(self.tmp))).read_bytes()
        self.assertEqual(first, second)


if __name__ == "__main__":
    unittest.main()
