"""
Export: write a gate network as JSON (element list) or as its full matrix.
"""

import numpy as np

from config import CCZ_SETTINGS, CZ_SETTINGS
from errors import UsageError
import gates
import solver
from mesh import build_network, spec_to_dict
from models import StepReport

FORMATS = ("json", "matrix_csv")


def format_entry(z):
    """15 significant digits; the imaginary part only when it is nonzero."""
    z = complex(z)
    if z.imag == 0:
        return "{:.15g}".format(z.real)
    return "{:.15g}{:+.15g}j".format(z.real, z.imag)


def matrix_rows(U):
    return [[format_entry(z) for z in row] for row in np.asarray(U)]


def run(cfg):
    """Returns (payload, report)."""
    fmt = cfg.format or "json"
    if fmt not in FORMATS:
        raise UsageError("export format must be one of {}, got {!r}".format(", ".join(FORMATS), fmt))
    print("\n>>> EXPORT: {} ({}) as {}...".format(cfg.gate, cfg.scheme, fmt))
    report = StepReport("export", items_in=1)

    settings = None
    if cfg.refine:
        if cfg.gate in ("cz", "cnot"):
            problem, t0 = solver.make_problem("cz"), CZ_SETTINGS
        else:
            problem, t0 = solver.make_problem("ccz", scheme=cfg.scheme), CCZ_SETTINGS[cfg.scheme]
        sol = solver.refine(problem, t0)
        report.check("refine_converged", sol.residual_norm < 1e-10,
                     "residual {:.2e}".format(sol.residual_norm))
        settings = sol.t_vector

    spec = gates.gate_network(cfg.gate, cfg.scheme, settings)
    print("    {} modes, {} elements".format(spec.modes, len(spec.elements)))
    report.items_out = len(spec.elements)
    if fmt == "json":
        return spec_to_dict(spec), report
    U = build_network(spec)
    return {"header": None, "rows": matrix_rows(U), "modes": spec.modes}, report
