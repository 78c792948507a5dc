"""
Cascade: chain CZ or CCZ blocks on a larger register and check the combined
phase rule and the product success amplitude.
"""

import gates
from config import PUBLISHED_TOL, worker_count
from errors import UsageError
from models import StepReport

DEFAULT_PLACEMENTS = {"cz": [0, 1], "ccz": [0, 2]}


def run(cfg):
    """Returns (payload, report)."""
    if cfg.gate not in DEFAULT_PLACEMENTS:
        raise UsageError("cascade supports cz and ccz, got {!r}".format(cfg.gate))
    placements = cfg.placement or DEFAULT_PLACEMENTS[cfg.gate]
    tol = cfg.tol if cfg.tol is not None else PUBLISHED_TOL
    print("\n>>> CASCADE: {} blocks at qubits {}...".format(cfg.gate, placements))
    report = StepReport("cascade", items_in=len(placements))

    result = gates.cascade(cfg.gate, placements, cfg.scheme, cfg.photon_cap, tol,
                           workers=worker_count())
    print("    {} qubits, {} modes, {} photons".format(result.n_qubits, result.modes, result.photons))
    for row in result.rows:
        print("    {}  |A| = {:.6f}  sign {:+d} (want {:+d}){}".format(
            row["bits"], row["magnitude"], row["sign"], row["expected_sign"],
            "" if row["ok"] else "  MISMATCH"))
    print("    expected |A| = {:.6f}, P_succ = {:.6f}, max leakage {:.2e}".format(
        result.expected_magnitude, result.success_probability, result.max_leakage))

    report.items_out = len(result.rows)
    report.check("phase_rule", all(r["sign"] == r["expected_sign"] for r in result.rows))
    report.check("magnitude", all(abs(r["magnitude"] - result.expected_magnitude) < tol
                                  for r in result.rows))
    report.check("no_leakage", result.max_leakage < tol, "{:.2e}".format(result.max_leakage))

    payload = result.to_dict()
    payload["header"] = ["bits", "magnitude", "sign", "expected_sign", "ok"]
    payload["csv_rows"] = [[r["bits"], r["magnitude"], r["sign"], r["expected_sign"], r["ok"]]
                           for r in result.rows]
    return payload, report
