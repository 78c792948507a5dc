"""
Calibrate: phase to drive on one internal arm of a four-phase-shifter MZI so
it realizes a target transmittance.
"""

import math

import numpy as np

from errors import UsageError
from mesh import calibrate, global_ratio, hardware_mzi_unitary, mzi_unitary
from models import MziSetting, StepReport


def run(cfg):
    """Returns (payload, report)."""
    if cfg.target_t is None:
        raise UsageError("calibrate needs --target-t")
    t = cfg.target_t
    print("\n>>> CALIBRATE: t = {} on the {} arm (θ1(0) = {}, θ2(0) = {})...".format(
        t, cfg.arm, cfg.theta1_0, cfg.theta2_0))
    report = StepReport("calibrate", items_in=1)

    setting = calibrate(t, cfg.theta1_0, cfg.theta2_0, cfg.arm)
    hw = hardware_mzi_unitary(setting)
    phase = global_ratio(hw, mzi_unitary(MziSetting(t, 0.0)))
    achieved = float((hw[0, 0] / phase).real)
    print("    θ1 = {:.6f}, θ2 = {:.6f}, achieved t = {:.12f}".format(
        setting.theta1, setting.theta2, achieved))
    report.check("transmittance", abs(achieved - t) < 1e-12, "{:.2e}".format(abs(achieved - t)))
    report.items_out = 1

    return {
        "target_t": t,
        "theta": 2 * math.asin(t),
        "arm": cfg.arm,
        "theta1_0": cfg.theta1_0,
        "theta2_0": cfg.theta2_0,
        "theta1": setting.theta1,
        "theta2": setting.theta2,
        "achieved_t": achieved,
        "global_phase": [phase.real, phase.imag],
        "global_phase_angle": float(np.angle(phase)),
    }, report
