#!/usr/bin/env python3
"""
集成测试：内置 68 母线算例与单机无穷大算例的端到端运行
"""

import unittest
import tempfile
import shutil
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from gridwave.case import load_case
from gridwave.case.config import bundled_case_path
from gridwave.cli import RunOptions, dispatch, full_pipeline, read_manifest
from gridwave.simulate import build_system, flat_run, run_simulation
from gridwave.simulate.config import SIMULATE_CONFIG
from gridwave.smallsignal import (
    eigenanalysis,
    lightly_damped_filter,
    linearize_system,
    rank_sites,
    residues,
)


@pytest.mark.slow
class TestIeee68Integration(unittest.TestCase):
    """68 母线算例集成测试"""

    @classmethod
    def setUpClass(cls):
        cls.case = load_case(bundled_case_path("ieee68"))
        cls.system = build_system(cls.case)

    def test_initialization(self):
        """测试初始化点导数足够小"""
        self.assertEqual(self.system.n_states, 13 * 11 + 3 * 3)
        dx = self.system.rhs(0.0, self.system.x0)
        self.assertLess(np.max(np.abs(dx)), 1e-6)

    def test_flat_run(self):
        """测试无扰动平启动 10 s 内状态不漂移"""
        result = flat_run(self.case, t_end=10.0, system=self.system)
        self.assertAlmostEqual(result.t[-1], 10.0)
        self.assertLess(result.max_deviation(), SIMULATE_CONFIG["flat_run_tolerance"])

    def test_fault_recovery(self):
        """测试母线 17 故障切除后 10 s 内各机频率回到额定值附近"""
        result = run_simulation(self.case, t_end=10.0, system=self.system)
        self.assertAlmostEqual(result.t[-1], 10.0)
        self.assertEqual([name for _, name in result.event_log], ["fault_on bus17", "fault_cleared bus17", "end"])
        np.testing.assert_allclose(result.bus_freq[-1], 60.0, atol=0.1)
        k = int(np.argmin(np.abs(result.t - 1.05)))
        self.assertLess(result.bus_v_mag[k, result.bus_ids.index(17)], 0.01)
        self.assertGreater(np.min(result.bus_v_mag[-1]), 0.8)
        deviation = np.abs(result.bus_freq - 60.0)
        last_second = result.t >= 9.0
        self.assertLess(np.max(deviation[last_second]), np.max(deviation))

    def test_lightly_damped_modes(self):
        """测试存在弱阻尼振荡模态，且控制点排序可复现"""
        model = linearize_system(self.system)
        report = eigenanalysis(model)
        light = lightly_damped_filter(report, self.case.scenario.zeta_threshold)
        self.assertGreaterEqual(len(light), 1)
        self.assertTrue(all(report.damping_pct[i] < 10.0 for i in light))

        first = rank_sites(residues(model, report), light[0])
        again_model = linearize_system(self.system)
        again = rank_sites(residues(again_model, eigenanalysis(again_model)), light[0])
        self.assertEqual(first["input"].iloc[0], again["input"].iloc[0])

    def test_electromechanical_mode_bands(self):
        """测试转子角/转速主导的振荡模态中既有 0.1–0.8 Hz 的区间模态，也有 0.8–2.5 Hz 的本地模态"""
        report = eigenanalysis(linearize_system(self.system))
        swing = [
            i
            for i in range(report.n_modes)
            if report.eigenvalues[i].imag > 0
            and report.state_labels[int(np.argmax(report.participation[:, i]))].endswith((".omega", ".delta"))
        ]
        freqs = report.freq_hz[swing]
        self.assertTrue(np.any((freqs >= 0.1) & (freqs < 0.8)), msg=f"机电模态频率 {np.sort(freqs)}")
        self.assertTrue(np.any((freqs >= 0.8) & (freqs <= 2.5)), msg=f"机电模态频率 {np.sort(freqs)}")
        self.assertTrue(np.all(report.eigenvalues.real < 1e-6))


@pytest.mark.slow
class TestPipelineIntegration(unittest.TestCase):
    """流水线集成测试"""

    def setUp(self):
        """测试前准备"""
        self.temp_dir = tempfile.mkdtemp()
        self.out = Path(self.temp_dir) / "out"

    def tearDown(self):
        """测试后清理"""
        shutil.rmtree(self.temp_dir)

    def test_smib_pipeline(self):
        """测试单机无穷大算例完整流水线"""
        manifest = full_pipeline("smib", self.out, RunOptions(t_end=1.0))
        stages = {entry["stage"]: entry for entry in manifest.stages}
        self.assertTrue(all(entry["status"] == "ok" for entry in manifest.stages))
        self.assertEqual(stages["linearize"]["reference"], "G1.delta")
        self.assertEqual(stages["freqresp"]["input"], "omega_s")
        self.assertEqual(stages["freqresp"]["output"], "G1.omega")
        for name in ("modes/modes.csv", "residues/site_ranking.csv", "freqresp/bode.csv", "linearize/A.csv"):
            self.assertIn(name, manifest.outputs)
            self.assertTrue((self.out / name).is_file())

    def test_pipeline_command(self):
        """测试 pipeline 子命令写出清单"""
        code = dispatch(["pipeline", "--case", "smib", "--out", str(self.out), "--t-end", "0.5"])
        self.assertEqual(code, 0)
        manifest = read_manifest(self.out / "manifest.json")
        self.assertEqual(manifest["command"], "pipeline")
        self.assertEqual(manifest["parameters"]["t_end"], 0.5)
        self.assertEqual(len(manifest["stages"]), 8)


if __name__ == "__main__":
    unittest.main()
