import math

import numpy as np
import pytest

from config import CCZ_SETTINGS, PRINTED_CCZ_MATRIX, PRINTED_CZ_MATRIX
from errors import ContractError, DimensionError, DomainError, LossyElementError, UsageError
from gates import ccz_network, cz_network
from mesh import (SQRT_HALF, SWAP, assign_settings, beamsplitter_unitary, build_network, calibrate,
                  clements_layout, concat, dumps, embed, global_ratio, hardware_mzi_unitary, loads,
                  mzi, mzi_unitary, phase_solve, reck_layout, shift, spec_from_dict, spec_to_dict, swap)
from models import (BeamSplitterSetting, HardwareMziSetting, MziSetting, NetworkElement,
                    NetworkSpec)
from numerics import is_unitary


# === Elements ===

def test_mzi_swap_and_identity_forms():
    np.testing.assert_array_equal(mzi_unitary(MziSetting(0.0)), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(mzi_unitary(MziSetting(1.0)), [[1, 0], [0, -1]])
    np.testing.assert_allclose(mzi_unitary(MziSetting(SQRT_HALF)),
                               SQRT_HALF * np.array([[1, 1], [1, -1]]), atol=1e-15)


def test_mzi_phase_on_first_input():
    U = mzi_unitary(MziSetting(0.6, math.pi / 3))
    e = np.exp(1j * math.pi / 3)
    np.testing.assert_allclose(U, [[0.6 * e, 0.8], [0.8 * e, -0.6]], atol=1e-15)


def test_mzi_rejects_large_t():
    with pytest.raises(DomainError):
        mzi_unitary(MziSetting(1.01))


def test_mzi_real_orthogonal():
    for t in np.linspace(-1, 1, 41):
        U = mzi_unitary(MziSetting(t))
        assert np.all(U.imag == 0)
        np.testing.assert_allclose(U.real @ U.real.T, np.eye(2), atol=1e-15)


def test_hardware_mzi_extremes():
    h = hardware_mzi_unitary(HardwareMziSetting(math.pi, 0.0, 0.3, 0.3))
    assert abs(h[0, 1]) < 1e-15 and abs(h[1, 0]) < 1e-15
    assert abs(h[0, 0]) == pytest.approx(1.0)
    h = hardware_mzi_unitary(HardwareMziSetting(0.7, 0.7))
    assert abs(h[0, 0]) < 1e-15 and abs(h[1, 1]) < 1e-15


def test_hardware_mzi_is_mzi_up_to_phase():
    rng = np.random.default_rng(31)
    for _ in range(50):
        theta2 = rng.uniform(-math.pi, math.pi)
        # cos((θ1 - θ2)/2) >= 0 keeps the reflectance positive
        theta1 = theta2 + rng.uniform(-math.pi, math.pi)
        phi1, phi2 = rng.uniform(-math.pi, math.pi, size=2)
        h = HardwareMziSetting(theta1, theta2, phi1, phi2)
        c = global_ratio(hardware_mzi_unitary(h), mzi_unitary(h.equivalent()))
        assert c is not None
        assert abs(c) == pytest.approx(1.0, abs=1e-12)


def test_hardware_mzi_unit_determinant():
    rng = np.random.default_rng(32)
    for phases in rng.uniform(-10, 10, size=(50, 4)):
        assert abs(np.linalg.det(hardware_mzi_unitary(HardwareMziSetting(*phases)))) == pytest.approx(1.0, abs=1e-12)


def test_beamsplitter():
    np.testing.assert_array_equal(beamsplitter_unitary(1.0, 0.0), np.eye(2))
    np.testing.assert_allclose(beamsplitter_unitary(SQRT_HALF, SQRT_HALF),
                               SQRT_HALF * np.array([[1, 1j], [1j, 1]]), atol=1e-15)
    B = beamsplitter_unitary(0.6, 0.8)
    np.testing.assert_allclose(B, [[0.6, 0.8j], [0.8j, 0.6]])
    assert is_unitary(B, 1e-12)


def test_beamsplitter_lossy():
    with pytest.raises(LossyElementError):
        beamsplitter_unitary(0.6, 0.6)


# === Embedding and building ===

def test_embed():
    U2 = mzi_unitary(MziSetting(0.3))
    np.testing.assert_array_equal(embed(U2, 1, 2), U2)
    X = embed(SWAP, 4, 5)
    np.testing.assert_array_equal(X, np.eye(5)[[0, 1, 2, 4, 3]])
    E = embed(U2, 2, 5)
    for k in (0, 3, 4):
        np.testing.assert_array_equal(E[:, k], np.eye(5)[:, k])


def test_embed_errors():
    with pytest.raises(DimensionError):
        embed(SWAP, 5, 5)
    with pytest.raises(DimensionError):
        embed(SWAP, 0, 5)
    with pytest.raises(DimensionError):
        embed(np.eye(3), 1, 5)


def test_embed_disjoint_supports_commute():
    A = mzi_unitary(MziSetting(0.2, 0.5))
    B = mzi_unitary(MziSetting(-0.7, 1.1))
    np.testing.assert_allclose(embed(A, 1, 6) @ embed(B, 4, 6), embed(B, 4, 6) @ embed(A, 1, 6))


def test_swap_squares_to_identity():
    np.testing.assert_array_equal(build_network(NetworkSpec(4, [swap(2), swap(2)])), np.eye(4))


def test_build_empty_is_identity():
    np.testing.assert_array_equal(build_network(NetworkSpec(3)), np.eye(3))


def test_build_order_first_element_rightmost():
    a, b = mzi(1, 0.3), mzi(2, -0.5, 0.4)
    U = build_network(NetworkSpec(3, [a, b]))
    expected = embed(mzi_unitary(b.setting), 2, 3) @ embed(mzi_unitary(a.setting), 1, 3)
    np.testing.assert_allclose(U, expected, atol=1e-15)


def test_build_random_specs_unitary():
    rng = np.random.default_rng(33)
    for _ in range(100):
        m = int(rng.integers(2, 15))
        elements = []
        for _ in range(int(rng.integers(0, 31))):
            mode = int(rng.integers(1, m))
            kind = rng.choice(["mzi", "swap", "hardware_mzi", "beamsplitter"])
            if kind == "mzi":
                elements.append(mzi(mode, rng.uniform(-1, 1), rng.uniform(-math.pi, math.pi)))
            elif kind == "swap":
                elements.append(swap(mode))
            elif kind == "hardware_mzi":
                elements.append(NetworkElement("hardware_mzi", mode,
                                               HardwareMziSetting(*rng.uniform(-4, 4, size=4))))
            else:
                a = rng.uniform(0, math.pi / 2)
                elements.append(NetworkElement("beamsplitter", mode,
                                               BeamSplitterSetting(math.cos(a), math.sin(a))))
        assert is_unitary(build_network(NetworkSpec(m, elements)), 1e-12)


def test_build_missing_setting():
    with pytest.raises(ContractError):
        build_network(NetworkSpec(3, [mzi(1)]))


def test_spec_rejects_out_of_range_element():
    with pytest.raises(DimensionError):
        NetworkSpec(3, [mzi(3, 0.5)])


def test_cz_network_matches_printed_matrix():
    np.testing.assert_allclose(build_network(cz_network()), PRINTED_CZ_MATRIX, atol=1e-3)


@pytest.mark.parametrize("scheme", ["clements", "reck"])
def test_ccz_network_matches_printed_matrix(scheme):
    np.testing.assert_allclose(build_network(ccz_network(scheme)), PRINTED_CCZ_MATRIX, atol=1e-3)


def test_ccz_schemes_agree():
    diff = build_network(ccz_network("clements")) - build_network(ccz_network("reck"))
    assert np.max(np.abs(diff)) < 1e-3


# === Layouts ===

@pytest.mark.parametrize("m", [2, 3, 4, 5, 8])
def test_layout_sizes(m):
    assert len(reck_layout(m).mzis()) == m * (m - 1) // 2
    assert len(clements_layout(m).mzis()) == m * (m - 1) // 2


def test_small_layouts():
    assert [el.mode for el in clements_layout(2).elements] == [1]
    assert [el.mode for el in reck_layout(2).elements] == [1]
    assert len(clements_layout(3).elements) == len(reck_layout(3).elements) == 3


def test_clements_five_mode_order():
    layout = clements_layout(5)
    assert [el.mode for el in layout.elements] == [2, 4, 1, 3, 2, 4, 1, 3, 2, 4]
    assert [el.label for el in layout.elements] == ["t{}".format(j) for j in range(1, 11)]


def test_reck_five_mode_order():
    layout = reck_layout(5)
    assert [el.mode for el in layout.elements] == [4, 3, 2, 1, 4, 3, 2, 4, 3, 4]
    assert [el.label for el in layout.elements] == ["t{}".format(j) for j in range(1, 11)]


def test_layout_needs_two_modes():
    with pytest.raises(DimensionError):
        clements_layout(1)


def test_assign_settings_by_label():
    spec = assign_settings(clements_layout(5), CCZ_SETTINGS["clements"])
    assert spec.transmittances() == list(CCZ_SETTINGS["clements"])
    assert [el.setting.t for el in spec.elements] == list(CCZ_SETTINGS["clements"])
    with pytest.raises(DimensionError):
        assign_settings(clements_layout(5), [0.1] * 9)


def test_shift_and_concat():
    block = NetworkSpec(3, [mzi(1, 0.2), mzi(2, 0.4)])
    moved = shift(block, 2, 6)
    assert [el.mode for el in moved.elements] == [3, 4]
    joined = concat(6, [swap(1)], moved, [swap(5)])
    assert [el.kind for el in joined.elements] == ["swap", "mzi", "mzi", "swap"]
    with pytest.raises(DimensionError):
        shift(block, 4, 6)
    with pytest.raises(DimensionError):
        concat(5, moved)


# === Phase calibration ===

def test_phase_solve_published_rules():
    assert phase_solve(math.pi / 2, 0.1, 0.2, "upper") == pytest.approx(0.2 + math.pi / 2)
    assert phase_solve(-math.pi / 2, 0.1, 0.2, "upper") == pytest.approx(0.2 + 3 * math.pi / 2)
    assert phase_solve(math.pi / 2, 0.1, 0.2, "lower") == pytest.approx(0.1 + 3 * math.pi / 2)
    assert phase_solve(-math.pi / 2, 0.1, 0.2, "lower") == pytest.approx(0.1 + math.pi / 2)


def test_phase_solve_sine_postcondition():
    for theta in np.linspace(-1.9 * math.pi, 1.9 * math.pi, 39):
        theta1 = phase_solve(theta, 0.4, -0.3, "upper")
        assert abs(math.sin((theta1 + 0.3) / 2)) == pytest.approx(abs(math.sin(theta / 2)), abs=1e-12)
        theta2 = phase_solve(theta, 0.4, -0.3, "lower")
        assert abs(math.sin((0.4 - theta2) / 2)) == pytest.approx(abs(math.sin(theta / 2)), abs=1e-12)


def test_phase_solve_errors():
    with pytest.raises(DomainError):
        phase_solve(2 * math.pi, 0, 0)
    with pytest.raises(DomainError):
        phase_solve(0.5, 0, 0, "middle")


@pytest.mark.parametrize("t", [-1.0, -0.6, 0.0, 0.3686, SQRT_HALF, 1.0])
@pytest.mark.parametrize("arm", ["upper", "lower"])
def test_calibrate_hits_target(t, arm):
    setting = calibrate(t, 0.25, -0.5, arm)
    c = global_ratio(hardware_mzi_unitary(setting), mzi_unitary(MziSetting(t)))
    assert c is not None


def test_calibrate_zero_spurious_offsets():
    setting = calibrate(0.0, 0.9, -1.3, "upper")
    assert setting.theta1 == pytest.approx(-1.3)
    assert abs(hardware_mzi_unitary(setting)[0, 0]) < 1e-12


def test_calibrate_out_of_range():
    with pytest.raises(DomainError):
        calibrate(1.2)


# === JSON interchange ===

def test_spec_json_keeps_every_digit():
    spec = ccz_network("clements")
    back = loads(dumps(spec))
    assert back == spec
    np.testing.assert_array_equal(build_network(back), build_network(spec))


def test_spec_dict_format():
    data = spec_to_dict(NetworkSpec(3, [mzi(1, 0.5, 0.25, "t1"), swap(2)]))
    assert data == {"modes": 3, "elements": [
        {"kind": "mzi", "modes": [1, 2], "t": 0.5, "phi": 0.25, "label": "t1"},
        {"kind": "swap", "modes": [2, 3]},
    ]}


def test_spec_from_dict_errors():
    with pytest.raises(UsageError):
        spec_from_dict({"elements": []})
    with pytest.raises(DimensionError):
        spec_from_dict({"modes": 3, "elements": [{"kind": "swap", "modes": [1, 3]}]})
    with pytest.raises(UsageError):
        spec_from_dict({"modes": 3, "elements": [{"kind": "mzi", "modes": [1, 2]}]})
    with pytest.raises(UsageError):
        spec_from_dict({"modes": 3, "elements": [{"kind": "laser", "modes": [1, 2]}]})
    with pytest.raises(UsageError):
        loads("{not json")
