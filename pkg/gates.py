"""
Dual-rail qubits with auxiliary photons.

Encoding and post-selection, the CZ / CNOT / CCZ / Toffoli networks, truth
tables, randomized fidelity checks and cascades of gate blocks on a larger
register. Gate blocks act on a contiguous run of qubits; a block placed at
qubit q is the gate network shifted 3q modes down.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from config import (CZ_SETTINGS, CCZ_SETTINGS, EXPECTED_AMPLITUDE, NORMALIZATION_TOL,
                    PHOTON_CAP, PUBLISHED_TOL, SCHEMES, TRUTH_TABLE_TOL, worker_count)
from errors import CompositionError, DimensionError, DomainError, UsageError
from fock import evolve
from mesh import (SQRT_HALF, assign_settings, build_network, clements_layout, concat,
                  mzi, reck_layout, shift, swap)
from models import (CascadeReport, FidelityReport, IdealGate, NetworkSpec,
                    PostSelectionResult, QubitLayout, QubitRegister, StateVector)

GATE_QUBITS = {"cz": 2, "cnot": 2, "ccz": 3, "toffoli": 3}


# === Encoding / post-selection ===

def encode(reg, layout):
    if len(reg) != layout.n_qubits:
        raise DimensionError("{} qubit amplitudes for a {}-qubit layout".format(
            len(reg), layout.n_qubits))
    for j, (alpha, beta) in enumerate(reg.qubits):
        norm = abs(alpha) ** 2 + abs(beta) ** 2
        if abs(norm - 1) > NORMALIZATION_TOL:
            raise DomainError("qubit {} has |α|² + |β|² = {}".format(j, norm))
    terms = {}
    for bits in layout.basis_strings():
        amp = reg.amplitude(bits)
        if amp != 0:
            terms[layout.occupation(bits)] = complex(amp)
    return StateVector(layout.modes, terms)


def postselect(out, layout):
    """Keep structure-preserving outcomes; everything else is discarded."""
    logical = {bits: complex(out.terms.get(occ, 0j)) for bits, occ in layout.structured_outputs()}
    p_succ = float(sum(abs(a) ** 2 for a in logical.values()))
    lead = max(logical.values(), key=abs)
    phase = lead / abs(lead) if abs(lead) > 0 else 1.0
    return PostSelectionResult(
        logical_amplitudes=logical,
        success_amplitude=complex(np.sqrt(p_succ) * phase),
        success_probability=p_succ,
        discarded_probability=1.0 - p_succ,
    )


def simulate_register(U, reg, layout, photon_cap=PHOTON_CAP):
    """encode -> evolve (structure-preserving outputs only) -> postselect."""
    outputs = [occ for _, occ in layout.structured_outputs()]
    out = evolve(U, encode(reg, layout), outputs=outputs, photon_cap=photon_cap)
    return postselect(out, layout)


# === Networks ===

def cz_skeleton():
    """Three-MZI block on (rail 1 of q0, aux, rail 1 of q1)."""
    return NetworkSpec(3, [mzi(1, label="t1"), mzi(2, label="t2"), mzi(1, label="t3")])


def ccz_skeleton(scheme):
    if scheme == "clements":
        return clements_layout(5)
    if scheme == "reck":
        return reck_layout(5)
    raise UsageError("unknown scheme {!r} (expected one of {})".format(scheme, ", ".join(SCHEMES)))


def cz_core(settings=None, phi=None):
    """The bare 3-mode block placed on modes 2..4 of 5."""
    block = assign_settings(cz_skeleton(), CZ_SETTINGS if settings is None else settings, phi)
    return shift(block, 1, 5)


def cz_network(settings=None, phi=None):
    # swapping (4,5) brings rail 1 of q1 next to the auxiliary rail
    return concat(5, [swap(4)], cz_core(settings, phi), [swap(4)])


def cnot_network(settings=None):
    return concat(5, [mzi(4, SQRT_HALF)], cz_core(settings),
                  [mzi(4, SQRT_HALF), mzi(1, 1.0)])


def ccz_core(scheme="clements", settings=None, phi=None):
    """The 5-mode block placed on modes 3..7 of 8."""
    t = CCZ_SETTINGS[scheme] if settings is None else settings
    return shift(assign_settings(ccz_skeleton(scheme), t, phi), 2, 8)


def ccz_network(scheme="clements", settings=None, phi=None):
    # route rails 1 of all three qubits and both auxiliary rails onto modes 3..7
    dressing = [swap(3), swap(2), swap(7)]
    return concat(8, dressing, ccz_core(scheme, settings, phi), dressing[::-1])


def toffoli_network(scheme="clements", settings=None):
    return concat(8, [mzi(7, SQRT_HALF)], ccz_network(scheme, settings), [mzi(7, SQRT_HALF)])


def gate_network(gate, scheme="clements", settings=None):
    if gate == "cz":
        return cz_network(settings)
    if gate == "cnot":
        return cnot_network(settings)
    if gate == "ccz":
        return ccz_network(scheme, settings)
    if gate == "toffoli":
        return toffoli_network(scheme, settings)
    raise UsageError("unknown gate {!r}".format(gate))


def single_qubit_network(settings, n_qubits):
    """One MZI per qubit on its own rail pair; None leaves the qubit alone."""
    layout = QubitLayout(n_qubits)
    elements = [mzi(layout.rails(j)[0], s.t, s.phi)
                for j, s in enumerate(settings) if s is not None]
    return NetworkSpec(layout.modes, elements)


def place(spec, first_qubit, n_qubits):
    return shift(spec, 3 * first_qubit, 3 * n_qubits - 1)


def compose(blocks, n_qubits, scheme="clements", settings=None):
    """Apply (gate, first_qubit) blocks in order on an n-qubit register.

    Two blocks may share at most one qubit: post-selection on a pair (or
    triple) sharing two qubits does not reproduce the gate.
    """
    spans = []
    for gate, first in blocks:
        if gate not in GATE_QUBITS:
            raise UsageError("unknown gate {!r}".format(gate))
        qubits = set(range(first, first + GATE_QUBITS[gate]))
        if first < 0 or max(qubits) >= n_qubits:
            raise CompositionError("{} on qubits {} does not fit a {}-qubit register".format(
                gate, sorted(qubits), n_qubits))
        for other_gate, other in spans:
            shared = qubits & other
            if len(shared) >= 2:
                raise CompositionError(
                    "{} on qubits {} shares qubits {} with {} on {}; "
                    "blocks may share at most one qubit".format(
                        gate, sorted(qubits), sorted(shared), other_gate, sorted(other)))
        spans.append((gate, qubits))

    parts = [place(gate_network(gate, scheme, settings), first, n_qubits) for gate, first in blocks]
    return concat(3 * n_qubits - 1, *parts)


# === Ideal gates ===

def ideal_gate(name):
    key = name.lower()
    if key == "z":
        return IdealGate("Z", 1, np.diag([1, -1]).astype(complex))
    if key == "x":
        return IdealGate("X", 1, np.array([[0, 1], [1, 0]], dtype=complex))
    if key == "cz":
        return IdealGate("CZ", 2, np.diag([1, 1, 1, -1]).astype(complex))
    if key == "cnot":
        m = np.eye(4, dtype=complex)[:, [0, 1, 3, 2]]
        return IdealGate("CNOT", 2, m)
    if key == "ccz":
        return IdealGate("CCZ", 3, np.diag([1] * 7 + [-1]).astype(complex))
    if key == "toffoli":
        m = np.eye(8, dtype=complex)[:, [0, 1, 2, 3, 4, 5, 7, 6]]
        return IdealGate("Toffoli", 3, m)
    raise DomainError("unknown gate {!r}".format(name))


# === Verification ===

def logical_transfer(spec, layout, photon_cap=PHOTON_CAP, workers=1):
    """T[out, in]: post-selected amplitude of each basis input on each basis output."""
    if spec.modes != layout.modes:
        raise DimensionError("{}-mode network for a {}-mode layout".format(spec.modes, layout.modes))
    U = build_network(spec)
    structured = layout.structured_outputs()
    outputs = [occ for _, occ in structured]
    T = np.zeros((len(structured), len(structured)), dtype=complex)
    for col, (bits, occ) in enumerate(structured):
        out = evolve(U, StateVector.basis(occ), outputs=outputs,
                     photon_cap=photon_cap, workers=workers)
        T[:, col] = [out.terms[o] for o in outputs]
    return T


def match_global_phase(T, ideal_matrix):
    """Best scalar A with T ≈ A·ideal, and max |T - A·ideal| / |A|."""
    ideal_matrix = np.asarray(ideal_matrix, dtype=complex)
    A = np.vdot(ideal_matrix, T) / np.vdot(ideal_matrix, ideal_matrix)
    if abs(A) == 0:
        return 0j, float("inf")
    return complex(A), float(np.max(np.abs(T - A * ideal_matrix)) / abs(A))


def truth_table(spec, layout, ideal, photon_cap=PHOTON_CAP, tol=TRUTH_TABLE_TOL):
    """Per-basis-input rows plus the global amplitude A and the worst deviation."""
    T = logical_transfer(spec, layout, photon_cap)
    A, deviation = match_global_phase(T, ideal.matrix)
    rows = []
    for col, bits in enumerate(layout.basis_strings()):
        out_bits, sign = ideal.basis_action(bits)
        row = int(out_bits, 2)
        amp = T[row, col]
        rel = amp / A if abs(A) > 0 else 0j
        others = np.delete(np.abs(T[:, col]), row)
        leakage = float(np.max(others) / abs(A)) if len(others) and abs(A) > 0 else 0.0
        rows.append({
            "input": bits,
            "output": out_bits,
            "expected_sign": sign,
            "amplitude": [amp.real, amp.imag],
            "relative": [rel.real, rel.imag],
            "leakage": leakage,
            "ok": bool(abs(rel - sign) < tol and leakage < tol),
        })
    return rows, A, deviation


def bloch_inputs(trials, n_qubits, seed):
    """Seeded per-qubit inputs uniform on the Bloch sphere, shape (trials, n, 2)."""
    rng = np.random.default_rng(seed)
    cos_theta = rng.uniform(-1.0, 1.0, size=(trials, n_qubits))
    phi = rng.uniform(0.0, 2 * np.pi, size=(trials, n_qubits))
    alpha = np.sqrt((1 + cos_theta) / 2)
    beta = np.exp(1j * phi) * np.sqrt((1 - cos_theta) / 2)
    return np.stack([alpha.astype(complex), beta], axis=-1)


def gate_fidelity(spec, layout, ideal, trials, seed, photon_cap=PHOTON_CAP, workers=None):
    """Fidelity of the normalized post-selected state against the ideal gate output.

    Inputs are drawn up front so the result does not depend on thread scheduling.
    """
    if trials < 1:
        raise DomainError("need at least one trial, got {}".format(trials))
    if spec.modes != layout.modes:
        raise DimensionError("{}-mode network for a {}-mode layout".format(spec.modes, layout.modes))
    U = build_network(spec)
    inputs = bloch_inputs(trials, layout.n_qubits, seed)
    basis = layout.basis_strings()

    def one(i):
        reg = QubitRegister([tuple(q) for q in inputs[i]])
        result = simulate_register(U, reg, layout, photon_cap)
        p = result.success_probability
        if p < 1e-300:
            return None, p
        got = np.array([result.logical_amplitudes[b] for b in basis])
        want = ideal.matrix @ reg.vector()
        fid = abs(np.vdot(want, got)) ** 2 / (p * np.vdot(want, want).real)
        return float(fid), p

    workers = workers or worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, range(trials)))
    else:
        results = [one(i) for i in range(trials)]

    report = FidelityReport(trials=trials, seed=seed)
    fids = [f for f, _ in results if f is not None]
    probs = [p for _, p in results]
    report.zero_probability_inputs = trials - len(fids)
    if fids:
        report.min_fidelity, report.max_fidelity = min(fids), max(fids)
    else:
        report.min_fidelity = report.max_fidelity = 0.0
    report.p_succ_min, report.p_succ_max = min(probs), max(probs)
    return report


# === Cascades ===

def cascade(gate, placements, scheme="clements", photon_cap=PHOTON_CAP, tol=PUBLISHED_TOL,
            workers=1):
    """Chain diagonal gate blocks and check the phase rule on every basis string.

    Expected sign is (-1)^(Σ over blocks of the product of the block's bits);
    expected magnitude is the single-block amplitude to the number of blocks.
    """
    if gate not in ("cz", "ccz"):
        raise UsageError("cascade supports cz and ccz, got {!r}".format(gate))
    if not placements:
        raise UsageError("cascade needs at least one block")
    size = GATE_QUBITS[gate]
    n_qubits = max(placements) + size
    spec = compose([(gate, q) for q in placements], n_qubits, scheme)
    layout = QubitLayout(n_qubits)
    T = logical_transfer(spec, layout, photon_cap, workers)

    expected = EXPECTED_AMPLITUDE[gate] ** len(placements)
    reference = T[0, 0] / abs(T[0, 0]) if abs(T[0, 0]) > 0 else 1.0
    report = CascadeReport(gate=gate, placements=list(placements), n_qubits=n_qubits,
                           modes=layout.modes, photons=layout.photons,
                           expected_magnitude=expected)
    probs = []
    for i, bits in enumerate(layout.basis_strings()):
        parity = sum(all(bits[q + j] == "1" for j in range(size)) for q in placements)
        want = -1 if parity % 2 else 1
        rel = T[i, i] / reference
        sign = 1 if rel.real >= 0 else -1
        magnitude = abs(T[i, i])
        probs.append(magnitude ** 2)
        report.rows.append({
            "bits": bits,
            "amplitude": [rel.real, rel.imag],
            "magnitude": magnitude,
            "sign": sign,
            "expected_sign": want,
            "ok": bool(sign == want and abs(magnitude - expected) < tol),
        })
    off = T - np.diag(np.diag(T))
    report.max_leakage = float(np.max(np.abs(off)))
    report.success_probability = float(np.mean(probs))
    report.passed = all(r["ok"] for r in report.rows) and report.max_leakage < tol
    return report


def cascade_cz(**kwargs):
    return cascade("cz", [0, 1], **kwargs)


def cascade_ccz(**kwargs):
    return cascade("ccz", [0, 2], **kwargs)
