#!/usr/bin/env python3
"""
命令行、运行清单与流水线测试
"""

import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path

from freezegun import freeze_time

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gridwave import __version__
from gridwave.case.config import bundled_case_path
from gridwave.cli import RunManifest, RunOptions, case_checksum, dispatch, full_pipeline, read_manifest
from gridwave.errors import IoError, MalformedRow, MissingFile, PipelineStageError
from tests.helpers import write_case


class TestCommandLine(unittest.TestCase):
    """子命令与退出码测试"""

    def setUp(self):
        """测试前准备"""
        self.temp_dir = tempfile.mkdtemp()
        self.out = Path(self.temp_dir) / "out"

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.temp_dir)

    def test_usage_errors(self):
        """测试参数错误返回 2"""
        self.assertEqual(dispatch(["explode", "--case", "two_bus"]), 2)
        self.assertEqual(dispatch(["powerflow"]), 2)
        self.assertEqual(dispatch(["simulate", "--case", "two_bus", "--dt", "-1"]), 2)
        self.assertEqual(dispatch(["modes", "--case", "two_bus", "--zeta-threshold", "abc"]), 2)
        self.assertEqual(dispatch([]), 2)

    def test_version(self):
        """测试 --version"""
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            self.assertEqual(dispatch(["--version"]), 0)
        self.assertIn(__version__, buffer.getvalue())

    def test_validate(self):
        """测试 validate 成功时打印摘要，缺少算例时返回 1"""
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            self.assertEqual(dispatch(["validate", "--case", "two_bus"]), 0)
        self.assertIn("校验通过", buffer.getvalue())
        missing = os.path.join(self.temp_dir, "nowhere")
        self.assertEqual(dispatch(["validate", "--case", missing]), 1)

    def test_validate_rejects_invalid_case(self):
        """测试校验失败返回 1"""
        case_dir = write_case(
            Path(self.temp_dir) / "bad",
            buses__csv="id,kind,v_set,theta_deg,p_load,q_load,g_shunt,b_shunt\n1,slack,1,0,0,0,0,0\n2,slack,1,0,0,0,0,0\n",
        )
        self.assertEqual(dispatch(["validate", "--case", str(case_dir)]), 1)

    def test_powerflow_writes_manifest(self):
        """测试 powerflow 写出潮流结果和运行清单"""
        code = dispatch(["powerflow", "--case", "two_bus", "--out", str(self.out), "--dump-matrices"])
        self.assertEqual(code, 0)
        self.assertTrue((self.out / "solution.csv").is_file())
        manifest = read_manifest(self.out / "manifest.json")
        self.assertEqual(manifest["command"], "powerflow")
        self.assertEqual(manifest["outputs"], ["solution.csv", "ybus.csv"])
        self.assertEqual(manifest["case_checksum"], case_checksum(bundled_case_path("two_bus")))
        self.assertEqual(manifest["version"], __version__)
        self.assertEqual(manifest["parameters"]["case"], "two_bus")
        self.assertIsNotNone(manifest["finished_at"])

    def test_domain_error_exit_code(self):
        """测试潮流不收敛返回 1 且不写清单"""
        case_dir = write_case(
            Path(self.temp_dir) / "heavy",
            buses__csv="id,kind,v_set,theta_deg,p_load,q_load,g_shunt,b_shunt\n1,slack,1,0,0,0,0,0\n2,pq,1,0,6,0,0,0\n",
        )
        code = dispatch(["powerflow", "--case", str(case_dir), "--out", str(self.out), "--pf-max-iter", "10"])
        self.assertEqual(code, 1)
        self.assertFalse((self.out / "manifest.json").exists())

    def test_freqresp_needs_output_without_machines(self):
        """测试没有同步机且未给 --output 时属于用法错误"""
        self.assertEqual(dispatch(["freqresp", "--case", "two_bus", "--out", str(self.out)]), 2)
        self.assertFalse((self.out / "manifest.json").exists())

    def test_unknown_output_label(self):
        """测试未知输出标签属于用法错误"""
        code = dispatch(["linearize", "--case", "smib", "--out", str(self.out), "--outputs", "G9.omega"])
        self.assertEqual(code, 2)

    def test_linearize_smib(self):
        """测试 linearize 写出四个矩阵"""
        code = dispatch(["linearize", "--case", "smib", "--out", str(self.out), "--inputs", "G1.v_ref"])
        self.assertEqual(code, 0)
        manifest = read_manifest(self.out / "manifest.json")
        self.assertEqual(manifest["outputs"], ["A.csv", "B.csv", "C.csv", "D.csv"])
        self.assertEqual(manifest["parameters"]["inputs"], ["G1.v_ref"])


class TestManifest(unittest.TestCase):
    """运行清单测试"""

    def setUp(self):
        """测试前准备"""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.temp_dir)

    @freeze_time("2026-03-01 08:30:00")
    def test_timestamps(self):
        """测试起止时间为 UTC ISO 格式"""
        manifest = RunManifest(command="powerflow", case="two_bus", case_checksum="abc")
        path = manifest.write(self.temp_dir)
        data = json.loads(path.read_text(encoding="utf-8"))
        self.assertEqual(data["started_at"], "2026-03-01T08:30:00+00:00")
        self.assertEqual(data["finished_at"], "2026-03-01T08:30:00+00:00")
        self.assertEqual(os.listdir(self.temp_dir), ["manifest.json"])

    def test_outputs_are_relative_and_sorted(self):
        """测试输出路径相对于输出目录、去重并排序"""
        root = Path(self.temp_dir)
        manifest = RunManifest(command="pipeline", case="smib", case_checksum="abc")
        manifest.add_outputs([root / "simulate" / "states.csv", root / "powerflow" / "solution.csv"], root)
        manifest.add_outputs([root / "powerflow" / "solution.csv"], root)
        manifest.add_stage("freqresp", status="skipped")
        data = manifest.to_dict()
        self.assertEqual(data["outputs"], ["powerflow/solution.csv", "simulate/states.csv"])
        self.assertEqual(data["stages"], [{"stage": "freqresp", "status": "skipped"}])

    def test_write_into_missing_directory(self):
        """测试输出目录不存在时报写入错误"""
        manifest = RunManifest(command="powerflow", case="two_bus", case_checksum="abc")
        with self.assertRaises(IoError):
            manifest.write(Path(self.temp_dir) / "missing")

    def test_checksum(self):
        """测试校验和稳定，且随文件内容变化"""
        case_dir = write_case(Path(self.temp_dir) / "case")
        first = case_checksum(case_dir)
        self.assertEqual(case_checksum(case_dir), first)
        self.assertEqual(len(first), 64)
        (case_dir / "scenario.cfg").write_text("t_end = 2.0\n", encoding="utf-8")
        self.assertNotEqual(case_checksum(case_dir), first)
        with self.assertRaises(MissingFile):
            case_checksum(Path(self.temp_dir) / "absent")


class TestPipeline(unittest.TestCase):
    """完整流水线测试"""

    def setUp(self):
        """测试前准备"""
        self.temp_dir = tempfile.mkdtemp()
        self.out = Path(self.temp_dir) / "out"

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.temp_dir)

    def test_two_bus_pipeline(self):
        """测试没有动态设备的算例跑完全部阶段，频率响应被跳过"""
        manifest = full_pipeline("two_bus", self.out)
        stages = {entry["stage"]: entry for entry in manifest.stages}
        self.assertEqual(
            list(stages),
            ["load", "powerflow", "flat_run", "simulate", "linearize", "modes", "residues", "freqresp"],
        )
        self.assertEqual(stages["freqresp"]["status"], "skipped")
        self.assertEqual(stages["modes"]["lightly_damped"], 0)
        self.assertEqual(stages["linearize"]["states"], 0)
        self.assertIn("powerflow/solution.csv", manifest.outputs)
        self.assertIn("simulate/states.csv", manifest.outputs)
        self.assertTrue((self.out / "manifest.json").is_file())

    def test_failure_names_stage(self):
        """测试读取失败时报告阶段名且不写清单"""
        case_dir = write_case(
            Path(self.temp_dir) / "corrupt",
            branches__csv="from,to,r,x,b,tap,shift_deg,status\n1,2,zero,0.1,0,1,0,in\n",
        )
        with self.assertRaises(PipelineStageError) as ctx:
            full_pipeline(case_dir, self.out)
        self.assertEqual(ctx.exception.stage, "load")
        self.assertIsInstance(ctx.exception.cause, MalformedRow)
        self.assertFalse((self.out / "manifest.json").exists())
        self.assertEqual(dispatch(["pipeline", "--case", str(case_dir), "--out", str(self.out)]), 1)

    def test_powerflow_stage_failure(self):
        """测试潮流失败时阶段名为 powerflow"""
        case_dir = write_case(
            Path(self.temp_dir) / "heavy",
            buses__csv="id,kind,v_set,theta_deg,p_load,q_load,g_shunt,b_shunt\n1,slack,1,0,0,0,0,0\n2,pq,1,0,6,0,0,0\n",
        )
        with self.assertRaises(PipelineStageError) as ctx:
            full_pipeline(case_dir, self.out, RunOptions(pf_max_iter=10))
        self.assertEqual(ctx.exception.stage, "powerflow")


if __name__ == "__main__":
    unittest.main()
