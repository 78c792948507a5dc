"""
Simulate: push an input state through a network file and tabulate the output
amplitudes, either over every Fock state or post-selected onto qubits.
"""

from config import MODE_CAP
from errors import ResourceError, UsageError
import gates
from fock import evolve
from mesh import build_network, spec_from_dict
from models import QubitLayout, QubitRegister, StateVector, StepReport
import report_store


def parse_register(text):
    """Bit string ("011") or per-qubit amplitude pairs ("1,0;0.6,0.8j")."""
    text = text.strip()
    if text and set(text) <= {"0", "1"}:
        return QubitRegister.basis(text)
    qubits = []
    for part in text.split(";"):
        try:
            alpha, beta = (complex(v.strip()) for v in part.split(","))
        except ValueError:
            raise UsageError("register entry {!r} is not 'alpha,beta'".format(part))
        qubits.append((alpha, beta))
    return QubitRegister(qubits)


def _input_state(cfg, spec):
    if cfg.occupations is not None:
        if len(cfg.occupations) != spec.modes:
            raise UsageError("{} occupations for a {}-mode network".format(
                len(cfg.occupations), spec.modes))
        return StateVector.basis(cfg.occupations), None
    if cfg.register is None:
        raise UsageError("simulate needs --occupations or --register")
    reg = parse_register(cfg.register)
    layout = QubitLayout(len(reg), cfg.aux_photons)
    if layout.modes != spec.modes:
        raise UsageError("{} qubits need {} modes, network has {}".format(
            len(reg), layout.modes, spec.modes))
    return gates.encode(reg, layout), layout


def occupation_label(occ):
    return " ".join(str(n) for n in occ)


def run(cfg):
    """Returns (payload, report); payload carries the CSV header and rows."""
    if not cfg.network:
        raise UsageError("simulate needs --network")
    spec = spec_from_dict(report_store.load_json(cfg.network))
    if spec.modes > MODE_CAP:
        raise ResourceError("{} modes exceeds the mode cap {}".format(spec.modes, MODE_CAP))
    state, layout = _input_state(cfg, spec)
    print("\n>>> SIMULATE: {} modes, {} elements, {} photons, {} input terms...".format(
        spec.modes, len(spec.elements), state.photons, len(state.terms)))
    report = StepReport("simulate", items_in=len(state.terms))

    U = build_network(spec)
    if cfg.postselect:
        if layout is None:
            raise UsageError("--postselect needs --register")
        outputs = [occ for _, occ in layout.structured_outputs()]
        out = evolve(U, state, outputs=outputs, photon_cap=cfg.photon_cap)
        result = gates.postselect(out, layout)
        rows = [[bits, a.real, a.imag, abs(a) ** 2]
                for bits, a in result.logical_amplitudes.items()]
        header = ["bits", "real", "imag", "probability"]
        print("    P_succ = {:.6f}".format(result.success_probability))
        extra = {
            "success_probability": result.success_probability,
            "discarded_probability": result.discarded_probability,
            "success_amplitude": [result.success_amplitude.real, result.success_amplitude.imag],
        }
    else:
        out = evolve(U, state, photon_cap=cfg.photon_cap)
        rows = [[occupation_label(occ), a.real, a.imag, abs(a) ** 2] for occ, a in out.terms.items()]
        header = ["occupation", "real", "imag", "probability"]
        total = sum(r[3] for r in rows)
        print("    {} output states, total probability {:.12f}".format(len(rows), total))
        report.check("norm", abs(total - state.norm() ** 2) < 1e-9, "{:.3e}".format(total))
        extra = {"total_probability": total}

    report.items_out = len(rows)
    payload = {"modes": spec.modes, "photons": state.photons, "postselected": cfg.postselect,
               "header": header, "rows": rows}
    payload.update(extra)
    return payload, report
