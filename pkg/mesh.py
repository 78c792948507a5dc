"""
Interferometer construction from 2x2 elements.

Element matrices:
  mzi           [[e^{iφ} t, s], [e^{iφ} s, -t]], s = √(1 - t²), global phase dropped
  hardware_mzi  BS · PS(θ1, θ2) · BS · PS(φ1, φ2), balanced plus-sign BS, phase kept
  swap          mzi(t=0, φ=0)
  beamsplitter  [[t, i r], [i r, t]], lossless only

A NetworkSpec lists elements in propagation order, so build_network multiplies
each new element on the left.
"""

import json
import math

import numpy as np

from errors import DimensionError, DomainError, LossyElementError, ContractError, UsageError
from models import (MziSetting, HardwareMziSetting, BeamSplitterSetting,
                    NetworkElement, NetworkSpec)

SQRT_HALF = 1 / math.sqrt(2)
SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


def mzi_unitary(setting):
    t, phi = setting.t, setting.phi
    if abs(t) > 1 + 1e-12:
        raise DomainError("MZI transmittance |t| = {} exceeds 1".format(abs(t)))
    t = max(-1.0, min(1.0, t))
    s = math.sqrt(max(0.0, 1 - t * t))
    e = np.exp(1j * phi)
    return np.array([[e * t, s], [e * s, -t]], dtype=complex)


def phase_shifter_unitary(theta1, theta2):
    return np.diag([np.exp(1j * theta1), np.exp(1j * theta2)])


def beamsplitter_unitary(t, r):
    if abs(t * t + r * r - 1) > 1e-12:
        raise LossyElementError("t² + r² = {} (lossy elements are not modeled)".format(t * t + r * r))
    return np.array([[t, 1j * r], [1j * r, t]], dtype=complex)


BALANCED_BS = beamsplitter_unitary(SQRT_HALF, SQRT_HALF)


def hardware_mzi_unitary(h):
    """Four-phase-shifter MZI, including its global phase i·e^{i(θ1+θ2+2φ2)/2}."""
    return (BALANCED_BS @ phase_shifter_unitary(h.theta1, h.theta2)
            @ BALANCED_BS @ phase_shifter_unitary(h.phi1, h.phi2))


def element_unitary(element):
    if element.kind == "mzi":
        return mzi_unitary(element.setting)
    if element.kind == "swap":
        return SWAP
    if element.kind == "hardware_mzi":
        return hardware_mzi_unitary(element.setting)
    if element.kind == "beamsplitter":
        return beamsplitter_unitary(element.setting.t, element.setting.r)
    raise DomainError("unknown element kind {!r}".format(element.kind))


def embed(U2, i, m):
    """m x m identity with U2 on modes (i, i+1), 1-based."""
    U2 = np.asarray(U2, dtype=complex)
    if U2.shape != (2, 2):
        raise DimensionError("embed needs a 2x2 block, got {}".format(U2.shape))
    if i < 1 or i > m - 1:
        raise DimensionError("mode pair ({}, {}) outside 1..{}".format(i, i + 1, m))
    out = np.eye(m, dtype=complex)
    out[i - 1:i + 1, i - 1:i + 1] = U2
    return out


def build_network(spec):
    """Ordered product of the embedded elements, first element rightmost."""
    U = np.eye(spec.modes, dtype=complex)
    for el in spec.elements:
        if el.setting is None and el.kind != "swap":
            raise ContractError("element {} on modes {} has no setting".format(
                el.label or el.kind, el.mode_pair))
        i = el.mode - 1
        U[i:i + 2, :] = element_unitary(el) @ U[i:i + 2, :]
    return U


# === Layouts ===

def mzi(mode, t=None, phi=0.0, label=""):
    setting = None if t is None else MziSetting(t, phi)
    return NetworkElement("mzi", mode, setting, label)


def swap(mode):
    return NetworkElement("swap", mode)


def reck_layout(m):
    """Triangular mesh: diagonal d sweeps pairs from the bottom up to mode d+1."""
    if m < 2:
        raise DimensionError("a mesh needs at least two modes")
    elements = []
    for d in range(m - 1):
        for i in range(m - 1, d, -1):
            elements.append(mzi(i, label="t{}".format(len(elements) + 1)))
    return NetworkSpec(m, elements)


def clements_layout(m):
    """Rectangular mesh of m columns.

    Even columns (0-based) couple (2,3), (4,5), ...; odd columns couple
    (1,2), (3,4), .... Labels follow application order, column by column,
    top to bottom.
    """
    if m < 2:
        raise DimensionError("a mesh needs at least two modes")
    elements = []
    for col in range(m):
        start = 2 if col % 2 == 0 else 1
        for mode in range(start, m, 2):
            elements.append(mzi(mode, label="t{}".format(len(elements) + 1)))
    return NetworkSpec(m, elements)


def assign_settings(skeleton, t, phi=None):
    """Fill labeled MZIs: label "tj" takes t[j-1] (and phi[j-1])."""
    labeled = [el for el in skeleton.elements if el.kind == "mzi" and el.label]
    if len(t) != len(labeled):
        raise DimensionError("{} settings for {} labeled MZIs".format(len(t), len(labeled)))
    if phi is not None and len(phi) != len(t):
        raise DimensionError("{} phases for {} transmittances".format(len(phi), len(t)))
    elements = []
    for el in skeleton.elements:
        if el.kind == "mzi" and el.label:
            j = int(el.label[1:]) - 1
            setting = MziSetting(float(t[j]), 0.0 if phi is None else float(phi[j]))
            el = NetworkElement("mzi", el.mode, setting, el.label)
        elements.append(el)
    return NetworkSpec(skeleton.modes, elements)


def shift(spec, offset, modes):
    """Re-place spec on a larger register, starting offset modes down."""
    if offset < 0 or spec.modes + offset > modes:
        raise DimensionError("cannot place {} modes at offset {} in {}".format(
            spec.modes, offset, modes))
    return NetworkSpec(modes, [NetworkElement(el.kind, el.mode + offset, el.setting, el.label)
                               for el in spec.elements])


def concat(modes, *parts):
    """Join element lists (specs or element sequences) in propagation order."""
    elements = []
    for part in parts:
        if isinstance(part, NetworkSpec):
            if part.modes != modes:
                raise DimensionError("cannot join a {}-mode spec into {} modes".format(
                    part.modes, modes))
            elements.extend(part.elements)
        else:
            elements.extend(part)
    return NetworkSpec(modes, elements)


# === Phase calibration ===

def phase_solve(target_theta, theta1_0, theta2_0, arm="upper"):
    """Phase to drive on one internal arm so the MZI gives t = sin(Θ/2).

    upper arm sets θ1: θ2(0) + Θ for Θ >= 0, θ2(0) + 2π + Θ for Θ < 0.
    lower arm sets θ2: θ1(0) + 2π - Θ for Θ > 0, θ1(0) - Θ for Θ <= 0.
    The wrapped branches land on the target MZI times a global -1.
    """
    if not -2 * math.pi < target_theta < 2 * math.pi:
        raise DomainError("Θ = {} outside (-2π, 2π)".format(target_theta))
    if arm == "upper":
        if target_theta >= 0:
            return theta2_0 + target_theta
        return theta2_0 + 2 * math.pi + target_theta
    if arm == "lower":
        if target_theta > 0:
            return theta1_0 + 2 * math.pi - target_theta
        return theta1_0 - target_theta
    raise DomainError("arm must be 'upper' or 'lower', got {!r}".format(arm))


def calibrate(target_t, theta1_0=0.0, theta2_0=0.0, arm="upper"):
    """HardwareMziSetting realizing mzi(t, 0) up to a global phase.

    Raises ContractError if the solved phases miss the target.
    """
    if abs(target_t) > 1:
        raise DomainError("target |t| = {} exceeds 1".format(abs(target_t)))
    theta = 2 * math.asin(target_t)
    solved = phase_solve(theta, theta1_0, theta2_0, arm)
    if arm == "upper":
        setting = HardwareMziSetting(solved, theta2_0)
    else:
        setting = HardwareMziSetting(theta1_0, solved)

    hw = hardware_mzi_unitary(setting)
    ideal = mzi_unitary(MziSetting(target_t, 0.0))
    if global_ratio(hw, ideal) is None:
        raise ContractError("calibrated MZI differs from t = {} beyond a global phase".format(target_t))
    return setting


def global_ratio(A, B, tol=1e-12):
    """Unit scalar c with A = c·B, or None."""
    k = np.unravel_index(np.argmax(np.abs(B)), B.shape)
    c = A[k] / B[k]
    if abs(abs(c) - 1) > tol or np.max(np.abs(A - c * B)) > tol:
        return None
    return c


# === JSON interchange ===

def spec_to_dict(spec):
    elements = []
    for el in spec.elements:
        entry = {"kind": el.kind, "modes": [el.mode, el.mode + 1]}
        s = el.setting
        if el.kind == "mzi":
            entry.update({"t": s.t, "phi": s.phi})
        elif el.kind == "hardware_mzi":
            entry.update({"theta1": s.theta1, "theta2": s.theta2, "phi1": s.phi1, "phi2": s.phi2})
        elif el.kind == "beamsplitter":
            entry.update({"t": s.t, "r": s.r})
        if el.label:
            entry["label"] = el.label
        elements.append(entry)
    return {"modes": spec.modes, "elements": elements}


def spec_from_dict(data):
    try:
        modes = int(data["modes"])
        raw = data["elements"]
    except (KeyError, TypeError, ValueError):
        raise UsageError("network JSON needs 'modes' and 'elements'")
    elements = []
    for n, entry in enumerate(raw):
        try:
            kind = entry["kind"]
            i, j = (int(x) for x in entry["modes"])
        except (KeyError, TypeError, ValueError):
            raise UsageError("element {} needs 'kind' and a two-entry 'modes'".format(n))
        if j != i + 1:
            raise DimensionError("element {} couples non-adjacent modes ({}, {})".format(n, i, j))
        try:
            if kind == "mzi":
                setting = MziSetting(float(entry["t"]), float(entry.get("phi", 0.0)))
            elif kind == "swap":
                setting = None
            elif kind == "hardware_mzi":
                setting = HardwareMziSetting(float(entry["theta1"]), float(entry["theta2"]),
                                             float(entry.get("phi1", 0.0)),
                                             float(entry.get("phi2", 0.0)))
            elif kind == "beamsplitter":
                setting = BeamSplitterSetting(float(entry["t"]), float(entry["r"]))
            else:
                raise UsageError("element {} has unknown kind {!r}".format(n, kind))
        except KeyError as e:
            raise UsageError("element {} ({}) is missing {}".format(n, kind, e))
        elements.append(NetworkElement(kind, i, setting, entry.get("label", "")))
    return NetworkSpec(modes, elements)


def dumps(spec):
    # json writes floats with repr, i.e. 17 significant digits
    return json.dumps(spec_to_dict(spec), indent=2)


def loads(text):
    try:
        return spec_from_dict(json.loads(text))
    except json.JSONDecodeError as e:
        raise UsageError("network file is not valid JSON: {}".format(e))
