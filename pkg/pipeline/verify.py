"""
Verify: build a gate network, check its matrix, truth table, fidelity and
success probability against the published values.
"""

import numpy as np

from config import (BUILD_TOL, CCZ_SETTINGS, CZ_SETTINGS, EXPECTED_AMPLITUDE, EXPECTED_P_SUCC,
                    FIDELITY_TOL_PUBLISHED, FIDELITY_TOL_REFINED, PRINTED_CCZ_MATRIX,
                    PRINTED_CZ_MATRIX, PUBLISHED_TOL, SELF_TOL)
import gates
import solver
from mesh import build_network
from models import QubitLayout, StepReport
from numerics import is_unitary


def _settings(cfg, report):
    """Published settings, or settings refined to ‖r‖ < 1e-10 with --refine."""
    if cfg.gate in ("cz", "cnot"):
        problem, t0 = solver.make_problem("cz"), CZ_SETTINGS
    else:
        problem, t0 = solver.make_problem("ccz", scheme=cfg.scheme), CCZ_SETTINGS[cfg.scheme]
    if not cfg.refine:
        return t0
    sol = solver.refine(problem, t0)
    print("    refined settings: ‖r‖ = {:.2e}, |A| = {:.6f}".format(
        sol.residual_norm, abs(sol.success_amplitude)))
    report.check("refine_converged", sol.residual_norm < 1e-10,
                 "residual {:.2e}".format(sol.residual_norm))
    return sol.t_vector


def run(cfg):
    """Returns (payload, report)."""
    gate = cfg.gate
    n_qubits = gates.GATE_QUBITS[gate]
    scheme = cfg.scheme if n_qubits == 3 else None
    print("\n>>> VERIFY: {}{} ({} trials, seed {})...".format(
        gate, " / " + scheme if scheme else "", cfg.trials, cfg.seed))
    report = StepReport("verify", items_in=cfg.trials)
    tol = cfg.tol if cfg.tol is not None else PUBLISHED_TOL

    settings = _settings(cfg, report)
    spec = gates.gate_network(gate, cfg.scheme, settings)
    layout = QubitLayout(n_qubits)
    U = build_network(spec)
    report.check("unitary", is_unitary(U, BUILD_TOL))

    # Golden matrices
    golden = {"cz": PRINTED_CZ_MATRIX, "ccz": PRINTED_CCZ_MATRIX}.get(gate)
    matrix_dev = None
    if golden is not None:
        matrix_dev = float(np.max(np.abs(U - np.array(golden))))
        print("    matrix deviation from printed: {:.2e}".format(matrix_dev))
        report.check("printed_matrix", matrix_dev < tol, "{:.2e}".format(matrix_dev))

    scheme_dev = None
    if n_qubits == 3:
        # both layouts with their published settings
        U_c = build_network(gates.gate_network(gate, "clements"))
        U_r = build_network(gates.gate_network(gate, "reck"))
        scheme_dev = float(np.max(np.abs(U_c - U_r)))
        print("    clements vs reck: {:.2e}".format(scheme_dev))
        report.check("scheme_agreement", scheme_dev < tol, "{:.2e}".format(scheme_dev))

    # Truth table modulo one global amplitude
    ideal = gates.ideal_gate(gate)
    rows, A, deviation = gates.truth_table(spec, layout, ideal, cfg.photon_cap)
    print("    truth table: |A| = {:.6f}, worst relative deviation {:.2e}".format(abs(A), deviation))
    report.check("truth_table", all(r["ok"] for r in rows))
    report.check("success_amplitude", abs(abs(A) - EXPECTED_AMPLITUDE[gate]) < tol,
                 "{:.6f}".format(abs(A)))

    # Randomized fidelity
    fid = gates.gate_fidelity(spec, layout, ideal, cfg.trials, cfg.seed, cfg.photon_cap)
    fid_tol = FIDELITY_TOL_REFINED if cfg.refine else FIDELITY_TOL_PUBLISHED
    spread_tol = SELF_TOL if cfg.refine else tol
    p_succ = (fid.p_succ_min + fid.p_succ_max) / 2
    print("    fidelity min {:.10f} max {:.10f}".format(fid.min_fidelity, fid.max_fidelity))
    print("    P_succ {:.5f} (spread {:.2e})".format(p_succ, fid.p_succ_spread))
    report.check("fidelity", fid.min_fidelity >= 1 - fid_tol, "{:.3e}".format(1 - fid.min_fidelity))
    report.check("p_succ", abs(p_succ - EXPECTED_P_SUCC[gate]) < tol, "{:.5f}".format(p_succ))
    report.check("p_succ_spread", fid.p_succ_spread < spread_tol, "{:.2e}".format(fid.p_succ_spread))
    report.check("no_zero_probability_inputs", fid.zero_probability_inputs == 0)

    report.items_out = cfg.trials - fid.zero_probability_inputs
    payload = {
        "gate": gate,
        "scheme": scheme,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "settings": list(settings),
        "refined": cfg.refine,
        "min_fidelity": fid.min_fidelity,
        "max_fidelity": fid.max_fidelity,
        "p_succ": p_succ,
        "p_succ_min": fid.p_succ_min,
        "p_succ_max": fid.p_succ_max,
        "success_amplitude": [A.real, A.imag],
        "discarded_probability": 1 - p_succ,
        "truth_table": rows,
        "truth_table_deviation": deviation,
        "matrix_deviation": matrix_dev,
        "scheme_deviation": scheme_dev,
        "passed": report.checks_failed == 0,
    }
    return payload, report
