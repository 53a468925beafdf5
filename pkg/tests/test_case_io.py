#!/usr/bin/env python3
"""
算例读写与校验测试
"""

import os
import shutil
import sys
import tempfile
import unittest
from pathlib import Path

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gridwave.case import ensure_valid, load_case, resolve_case_dir, save_case, validate_case
from gridwave.case.config import bundled_case_path, list_bundled_cases
from gridwave.errors import DanglingReference, DuplicateId, InvalidCase, MalformedRow, MissingFile
from tests.helpers import write_case


class TestLoadCase(unittest.TestCase):
    """算例读取测试"""

    def setUp(self):
        """测试前准备"""
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_two_bus(self):
        """测试读取两母线算例"""
        case = load_case(bundled_case_path("two_bus"))
        self.assertEqual(case.bus_ids, [1, 2])
        self.assertEqual(len(case.branches), 1)
        self.assertEqual(case.machines, ())
        self.assertFalse(case.scenario.has_fault)
        self.assertEqual(case.buses[1].p_load, 0.5)

    def test_ieee68(self):
        """测试读取 68 母线算例"""
        case = load_case(resolve_case_dir("68bus"))
        self.assertEqual(len(case.buses), 68)
        self.assertEqual(len(case.machines), 13)
        self.assertEqual(len(case.res_plants), 3)
        self.assertEqual(case.scenario.fault_bus, 17)
        self.assertAlmostEqual(case.scenario.t_f2 - case.scenario.t_f1, 0.1)
        self.assertEqual({m.area for m in case.machines}, {1, 2})
        self.assertTrue(all(plant.technology in ("pv", "wind", "bess") for plant in case.res_plants))
        self.assertTrue(validate_case(case).ok)

    def test_bundled_names(self):
        """测试内置算例名称与别名"""
        self.assertEqual(list_bundled_cases(), ["ieee68", "smib", "two_bus"])
        self.assertEqual(bundled_case_path("68bus"), bundled_case_path("ieee68"))
        self.assertIsNone(bundled_case_path("nope"))
        self.assertEqual(resolve_case_dir("missing/"), Path("missing/"))

    def test_missing_directory(self):
        """测试算例目录不存在"""
        with self.assertRaises(MissingFile):
            load_case(Path(self.tmp) / "missing")

    def test_missing_required_file(self):
        """测试缺少必需文件时报出文件路径"""
        case_dir = write_case(Path(self.tmp) / "c", branches__csv=None)
        (case_dir / "branches.csv").unlink(missing_ok=True)
        with self.assertRaises(MissingFile) as ctx:
            load_case(case_dir)
        self.assertTrue(ctx.exception.path.endswith("branches.csv"))

    def test_malformed_number_reports_line(self):
        """测试非数值单元格报告文件和行号"""
        case_dir = write_case(
            Path(self.tmp) / "c",
            branches__csv="# branch table\nfrom,to,r,x,b,tap,shift_deg,status\n1,2,0,abc,0,1,0,in\n",
        )
        with self.assertRaises(MalformedRow) as ctx:
            load_case(case_dir)
        self.assertEqual(ctx.exception.line, 3)
        self.assertTrue(ctx.exception.file.endswith("branches.csv"))

    def test_unknown_column(self):
        """测试未知列"""
        case_dir = write_case(
            Path(self.tmp) / "c",
            branches__csv="from,to,r,x,b,tap,shift_deg,status,colour\n1,2,0,0.1,0,1,0,in,red\n",
        )
        with self.assertRaises(MalformedRow):
            load_case(case_dir)

    def test_dangling_bus(self):
        """测试支路引用不存在的母线"""
        case_dir = write_case(
            Path(self.tmp) / "c",
            branches__csv="from,to,r,x,b,tap,shift_deg,status\n1,9,0,0.1,0,1,0,in\n",
        )
        with self.assertRaises(DanglingReference) as ctx:
            load_case(case_dir)
        self.assertEqual(ctx.exception.ident, 9)

    def test_duplicate_bus(self):
        """测试重复母线编号"""
        case_dir = write_case(
            Path(self.tmp) / "c",
            buses__csv=(
                "id,kind,v_set,theta_deg,p_load,q_load,g_shunt,b_shunt\n"
                "1,slack,1.0,0,0,0,0,0\n"
                "1,pq,1.0,0,0.5,0,0,0\n"
            ),
        )
        with self.assertRaises(DuplicateId):
            load_case(case_dir)

    def test_scenario_unknown_key(self):
        """测试场景文件中的未知配置项"""
        case_dir = write_case(Path(self.tmp) / "c", scenario__cfg="t_end = 1.0\ncolour = red\n")
        with self.assertRaises(MalformedRow) as ctx:
            load_case(case_dir)
        self.assertEqual(ctx.exception.line, 2)

    def test_save_and_reload_smib(self):
        """测试写出后读回结构不变"""
        case = load_case(bundled_case_path("smib"))
        out = save_case(case, Path(self.tmp) / "copy")
        again = load_case(out)
        self.assertEqual(again, case)


class TestValidation(unittest.TestCase):
    """算例校验测试"""

    def setUp(self):
        """测试前准备"""
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_two_slack_buses(self):
        """测试平衡母线不唯一"""
        case_dir = write_case(
            Path(self.tmp) / "c",
            buses__csv=(
                "id,kind,v_set,theta_deg,p_load,q_load,g_shunt,b_shunt\n"
                "1,slack,1.0,0,0,0,0,0\n"
                "2,slack,1.0,0,0.5,0,0,0\n"
            ),
        )
        case = load_case(case_dir)
        report = validate_case(case)
        self.assertFalse(report.ok)
        self.assertIn("平衡母线", str(report.violations[0]))
        with self.assertRaises(InvalidCase):
            ensure_valid(case)

    def test_zero_impedance_branch(self):
        """测试 r = x = 0 的支路"""
        case_dir = write_case(
            Path(self.tmp) / "c",
            branches__csv="from,to,r,x,b,tap,shift_deg,status\n1,2,0,0,0,1,0,in\n",
        )
        report = validate_case(load_case(case_dir))
        self.assertEqual(len(report), 1)
        self.assertEqual(report.violations[0].kind, "branch")

    def test_fault_window(self):
        """测试故障时刻顺序"""
        case_dir = write_case(
            Path(self.tmp) / "c",
            scenario__cfg="t_end = 1.0\ndt = 0.01\nfault_bus = 2\nt_f1 = 0.5\nt_f2 = 0.4\n",
        )
        report = validate_case(load_case(case_dir))
        self.assertEqual([v.ident for v in report.violations], ["t_f1/t_f2"])

    def test_machine_reactance_order(self):
        """测试同步机电抗大小关系"""
        case = load_case(bundled_case_path("smib"))
        from dataclasses import replace

        broken = replace(case, machines=(replace(case.machines[0], x_d_p=2.0),) + case.machines[1:])
        report = validate_case(broken)
        self.assertFalse(report.ok)
        self.assertEqual(report.violations[0].ident, "G1")


if __name__ == "__main__":
    unittest.main()
