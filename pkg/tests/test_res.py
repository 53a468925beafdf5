#!/usr/bin/env python3
"""
新能源电站模型测试
"""

import os
import sys
import unittest
from types import SimpleNamespace

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gridwave.case.records import ResPlantRecord
from gridwave.dynamics import (
    ResSetpoints,
    ResState,
    init_res,
    invert_power,
    measured_q,
    q_command_held,
    res_current_commands,
    res_power_commands,
    res_rhs,
    stack_res_params,
)
from gridwave.dynamics.res import res_limits
from gridwave.errors import InitInfeasible
from gridwave.simulate import integrate_fixed


def _plant(**overrides):
    values = dict(bus=1, t_g=0.02, k_p=0.5, k_i=20.0, ip_max=2.0, iq_max=2.0, iq_min=-2.0, v_freeze=0.01)
    values.update(overrides)
    return ResPlantRecord(**values)


class TestResModel(unittest.TestCase):
    """电流源型新能源模型测试"""

    def setUp(self):
        """测试前准备"""
        self.plant = _plant()
        self.v = 1.01 * np.exp(1j * np.deg2rad(10.0))
        self.s = 0.6 + 0.2j

    def test_invert_power_matches_conjugate(self):
        """测试电流指令等于 conj(S/V)"""
        i_p, i_q = invert_power(self.v, self.s.real, self.s.imag)
        self.assertAlmostEqual(complex(i_p, i_q), np.conj(self.s / self.v), places=12)
        self.assertAlmostEqual(measured_q(self.v, i_p, i_q), self.s.imag, places=12)

    def test_init_is_equilibrium(self):
        """测试初始化点处三个导数为零"""
        state, sp = init_res(self.v, self.s, self.plant)
        self.assertAlmostEqual(sp.p_ref, 0.6)
        self.assertAlmostEqual(state.q_pi, 0.2)

        q_meas = measured_q(self.v, state.i_p, state.i_q)
        p_cmd, q_cmd = res_power_commands(state, q_meas, sp, self.plant)
        cmds = res_current_commands(self.v, p_cmd, q_cmd, self.plant)
        derivatives = res_rhs(state, cmds, q_meas, sp, self.plant)
        np.testing.assert_allclose(np.array(derivatives, dtype=float), np.zeros(3), atol=1e-10)

    def test_low_voltage_freezes_commands(self):
        """测试端电压低于冻结阈值时保持上一次的指令"""
        cmds = res_current_commands(0.001 + 0j, 0.6, 0.2, self.plant, last=(0.3, -0.1))
        self.assertAlmostEqual(float(cmds[0]), 0.3)
        self.assertAlmostEqual(float(cmds[1]), -0.1)

        cmds = res_current_commands(0j, 0.6, 0.2, self.plant)
        self.assertEqual(float(cmds[0]), 0.0)
        self.assertEqual(float(cmds[1]), 0.0)
        self.assertTrue(bool(q_command_held(0j, 0.6, 0.2, self.plant)))

    def test_power_identity_random_points(self):
        """测试 1000 组随机工作点上 V·conj(i_p + j·i_q) 复现 P + jQ"""
        rng = np.random.default_rng(42)
        v = rng.uniform(0.05, 1.5, 1000) * np.exp(1j * rng.uniform(-np.pi, np.pi, 1000))
        p = rng.uniform(-5.0, 5.0, 1000)
        q = rng.uniform(-5.0, 5.0, 1000)
        i_p, i_q = invert_power(v, p, q)
        s = v * np.conj(i_p + 1j * i_q)
        np.testing.assert_allclose(s.real, p, rtol=0, atol=1e-12)
        np.testing.assert_allclose(s.imag, q, rtol=0, atol=1e-12)
        np.testing.assert_allclose(measured_q(v, i_p, i_q), q, rtol=0, atol=1e-12)

    def test_current_lag_time_constant(self):
        """测试固定电流指令下 t = t_g 时电流达到指令的 1 − e⁻¹ ≈ 63.2%"""
        sp = ResSetpoints(0.0, 0.0)
        cmds = (1.0, 0.5)

        def f(t, x):
            return np.array(res_rhs(ResState(*x), cmds, 0.0, sp, self.plant), dtype=float)

        t, x = integrate_fixed(f, np.zeros(3), self.plant.t_g, self.plant.t_g / 200)
        self.assertAlmostEqual(t[-1], self.plant.t_g)
        self.assertAlmostEqual(x[-1, 0], 1.0 - np.exp(-1.0), places=8)
        self.assertAlmostEqual(x[-1, 1] / 0.5, 0.632, delta=5e-4)
        self.assertEqual(x[-1, 2], 0.0)

    def test_reactive_pi_tracks_reference(self):
        """测试无功参考阶跃后 PI 控制使实测无功回到参考值，有功保持不变"""
        state, sp = init_res(self.v, self.s, self.plant)
        sp = ResSetpoints(sp.p_ref, 0.5)

        def f(t, x):
            s = ResState(*x)
            q_meas = measured_q(self.v, s.i_p, s.i_q)
            p_cmd, q_cmd = res_power_commands(s, q_meas, sp, self.plant)
            cmds = res_current_commands(self.v, p_cmd, q_cmd, self.plant)
            held = q_command_held(self.v, p_cmd, q_cmd, self.plant)
            return np.array(res_rhs(s, cmds, q_meas, sp, self.plant, q_clamped=held), dtype=float)

        x0 = np.array([state.i_p, state.i_q, state.q_pi], dtype=float)
        _, x = integrate_fixed(f, x0, 1.5, 1e-3)
        i_p, i_q, q_pi = x[-1]
        s_out = self.v * np.conj(i_p + 1j * i_q)
        self.assertAlmostEqual(s_out.imag, 0.5, places=6)
        self.assertAlmostEqual(s_out.real, 0.6, places=6)
        self.assertAlmostEqual(q_pi, 0.5, places=6)

    def test_reactive_current_clamp_holds_integrator(self):
        """测试无功电流限幅时积分器停止"""
        v = 1.0 + 0j
        _, i_q = res_current_commands(v, 0.0, -5.0, self.plant)
        self.assertAlmostEqual(float(i_q), 2.0)
        held = q_command_held(v, 0.0, -5.0, self.plant)
        self.assertTrue(bool(held))

        state = ResState(0.0, 2.0, -5.0)
        sp = SimpleNamespace(p_ref=0.0, q_ref=0.0)
        _, _, d_q_pi = res_rhs(state, (0.0, 2.0), -2.0, sp, self.plant, q_clamped=held)
        self.assertEqual(float(d_q_pi), 0.0)

        _, _, d_q_pi = res_rhs(state, (0.0, 2.0), -2.0, sp, self.plant, q_clamped=False)
        self.assertAlmostEqual(float(d_q_pi), 40.0)

    def test_active_current_clamp(self):
        """测试有功电流按 ip_max 对称限幅"""
        i_p, _ = res_current_commands(1.0 + 0j, 3.5, 0.0, self.plant)
        self.assertAlmostEqual(float(i_p), 2.0)
        i_p, _ = res_current_commands(1.0 + 0j, -3.5, 0.0, self.plant)
        self.assertAlmostEqual(float(i_p), -2.0)

    def test_limit_defaults(self):
        """测试缺省限值"""
        ip_max, iq_min, iq_max = res_limits(ResPlantRecord(bus=1))
        self.assertEqual(ip_max, np.inf)
        self.assertEqual(iq_min, -np.inf)
        self.assertEqual(iq_max, np.inf)
        self.assertEqual(res_limits(ResPlantRecord(bus=1, iq_max=0.5))[1], -0.5)

    def test_init_outside_limits(self):
        """测试初始电流超过限值时报错"""
        with self.assertRaises(InitInfeasible) as ctx:
            init_res(1.0 + 0j, 0.8 + 0j, _plant(ip_max=0.5))
        self.assertEqual(ctx.exception.device, "res@bus1")
        with self.assertRaises(InitInfeasible):
            init_res(1.0 + 0j, 0.1 + 0.8j, _plant(iq_max=0.5, iq_min=None))
        with self.assertRaises(InitInfeasible):
            init_res(0.001 + 0j, self.s, self.plant)

    def test_stacked_limits(self):
        """测试堆叠参数中缺省限值为 ±inf，iq_min 由 iq_max 推出"""
        case = SimpleNamespace(res_plants=[_plant(), ResPlantRecord(bus=2, iq_max=0.4)])
        stack = stack_res_params(case)
        self.assertEqual(len(stack), 2)
        self.assertEqual(stack.ip_max[1], np.inf)
        self.assertAlmostEqual(stack.iq_min[1], -0.4)
        self.assertEqual(stack.iq_max[0], 2.0)

        empty = stack_res_params(SimpleNamespace(res_plants=[]))
        self.assertEqual(len(empty), 0)
        self.assertEqual(empty.t_g.shape, (0,))


if __name__ == "__main__":
    unittest.main()
