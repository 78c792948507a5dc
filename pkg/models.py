"""
Data models shared by the simulator, the solver and the pipeline steps.
"""

import math
from dataclasses import dataclass, field, asdict
from typing import List, Dict, Optional, Any, Tuple

import numpy as np

from errors import DimensionError

# Occupation numbers, one per mode
FockState = Tuple[int, ...]


@dataclass(frozen=True)
class MziSetting:
    """Ideal MZI: t = sin(θ/2), phase φ on the first input."""
    t: float
    phi: float = 0.0

    @property
    def reflectance(self):
        return math.sqrt(max(0.0, 1.0 - self.t * self.t))


@dataclass(frozen=True)
class HardwareMziSetting:
    """Four phase shifters: θ1, θ2 on the internal arms, φ1, φ2 on the inputs."""
    theta1: float
    theta2: float
    phi1: float = 0.0
    phi2: float = 0.0

    def equivalent(self):
        return MziSetting(t=math.sin((self.theta1 - self.theta2) / 2),
                          phi=self.phi1 - self.phi2)


@dataclass(frozen=True)
class BeamSplitterSetting:
    t: float
    r: float


ELEMENT_KINDS = ("mzi", "hardware_mzi", "swap", "beamsplitter")


@dataclass(frozen=True)
class NetworkElement:
    """A 2x2 element on adjacent modes (mode, mode + 1), 1-based."""
    kind: str
    mode: int
    setting: Any = None  # MziSetting / HardwareMziSetting / BeamSplitterSetting
    label: str = ""  # e.g. "t3": which entry of a settings vector feeds it

    @property
    def mode_pair(self):
        return (self.mode, self.mode + 1)


@dataclass(frozen=True)
class NetworkSpec:
    """Elements in propagation order: the first element acts first."""
    modes: int
    elements: Tuple[NetworkElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.modes < 1:
            raise DimensionError("network needs at least one mode, got {}".format(self.modes))
        for el in self.elements:
            if el.kind not in ELEMENT_KINDS:
                raise DimensionError("unknown element kind {!r}".format(el.kind))
            if el.mode < 1 or el.mode + 1 > self.modes:
                raise DimensionError("element on modes ({}, {}) outside 1..{}".format(
                    el.mode, el.mode + 1, self.modes))

    def mzis(self):
        return [el for el in self.elements if el.kind == "mzi"]

    def transmittances(self):
        """t values of the labeled MZIs, ordered by label number."""
        labeled = [el for el in self.mzis() if el.label]
        labeled.sort(key=lambda el: int(el.label[1:]))
        return [el.setting.t for el in labeled]


@dataclass(frozen=True)
class IndexSelection:
    """1-based rows/columns of a square submatrix, repeats allowed."""
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]


@dataclass
class StateVector:
    """Superposition of Fock states over a fixed number of modes."""
    modes: int
    terms: Dict[FockState, complex] = field(default_factory=dict)

    @classmethod
    def basis(cls, occupations):
        occ = tuple(int(n) for n in occupations)
        return cls(modes=len(occ), terms={occ: 1.0 + 0j})

    @property
    def photons(self):
        for occ in self.terms:
            return sum(occ)
        return 0

    def amplitude(self, occupations):
        return self.terms.get(tuple(occupations), 0j)

    def norm(self):
        return math.sqrt(sum(abs(a) ** 2 for a in self.terms.values()))

    def validate(self):
        counts = set()
        for occ in self.terms:
            if len(occ) != self.modes:
                raise DimensionError("state over {} modes holds a {}-mode term".format(
                    self.modes, len(occ)))
            if any(n < 0 for n in occ):
                raise DimensionError("negative occupation in {}".format(occ))
            counts.add(sum(occ))
        if len(counts) > 1:
            raise DimensionError("mixed photon numbers {}".format(sorted(counts)))


@dataclass
class QubitRegister:
    """Per-qubit (α, β): α on rail 0, β on rail 1."""
    qubits: List[Tuple[complex, complex]]

    @classmethod
    def basis(cls, bits):
        return cls([(1.0, 0.0) if b == "0" else (0.0, 1.0) for b in bits])

    def __len__(self):
        return len(self.qubits)

    def amplitude(self, bits):
        out = 1.0 + 0j
        for (alpha, beta), b in zip(self.qubits, bits):
            out *= alpha if b == "0" else beta
        return out

    def vector(self):
        """Product state in the computational basis, qubit 0 most significant."""
        vec = np.ones(1, dtype=complex)
        for alpha, beta in self.qubits:
            vec = np.kron(vec, np.array([alpha, beta], dtype=complex))
        return vec


@dataclass(frozen=True)
class QubitLayout:
    """Dual rails with an auxiliary rail between consecutive qubits.

    Qubit j (0-based) sits on modes 3j+1 (rail 0) and 3j+2 (rail 1); the
    auxiliary rail after it is mode 3j+3 and carries aux_photons photons.
    """
    n_qubits: int
    aux_photons: int = 1

    @property
    def modes(self):
        return 3 * self.n_qubits - 1

    @property
    def photons(self):
        return self.n_qubits + self.aux_photons * (self.n_qubits - 1)

    def rails(self, j):
        return (3 * j + 1, 3 * j + 2)

    def aux_mode(self, j):
        """Auxiliary rail between qubit j and j + 1."""
        return 3 * j + 3

    def occupation(self, bits):
        occ = [0] * self.modes
        for j, b in enumerate(bits):
            occ[self.rails(j)[int(b)] - 1] = 1
        for j in range(self.n_qubits - 1):
            occ[self.aux_mode(j) - 1] = self.aux_photons
        return tuple(occ)

    def basis_strings(self):
        return [format(i, "0{}b".format(self.n_qubits)) for i in range(2 ** self.n_qubits)]

    def structured_outputs(self):
        """(bits, occupation) for every structure-preserving outcome, ascending bits."""
        return [(bits, self.occupation(bits)) for bits in self.basis_strings()]

    def decode(self, occupation):
        """Bit string of a structure-preserving occupation, else None."""
        bits = []
        for j in range(self.n_qubits):
            w0, w1 = self.rails(j)
            pair = (occupation[w0 - 1], occupation[w1 - 1])
            if pair == (1, 0):
                bits.append("0")
            elif pair == (0, 1):
                bits.append("1")
            else:
                return None
        for j in range(self.n_qubits - 1):
            if occupation[self.aux_mode(j) - 1] != self.aux_photons:
                return None
        return "".join(bits)


@dataclass
class PostSelectionResult:
    logical_amplitudes: Dict[str, complex]
    success_amplitude: complex
    success_probability: float
    discarded_probability: float


@dataclass(eq=False)
class IdealGate:
    """Exact logical action; matrix columns are inputs, qubit 0 most significant."""
    name: str
    n_qubits: int
    matrix: np.ndarray

    def basis_action(self, bits):
        """(output bits, sign) for a computational basis input."""
        col = self.matrix[:, int(bits, 2)]
        idx = int(np.argmax(np.abs(col)))
        return format(idx, "0{}b".format(self.n_qubits)), int(np.sign(col[idx].real))


@dataclass
class FidelityReport:
    trials: int
    seed: int
    min_fidelity: float = 1.0
    max_fidelity: float = 0.0
    p_succ_min: float = 1.0
    p_succ_max: float = 0.0
    zero_probability_inputs: int = 0

    @property
    def p_succ_spread(self):
        return self.p_succ_max - self.p_succ_min

    def to_dict(self):
        out = asdict(self)
        out["p_succ_spread"] = self.p_succ_spread
        return out


@dataclass
class CascadeReport:
    gate: str
    placements: List[int]
    n_qubits: int
    modes: int
    photons: int
    rows: List[Dict] = field(default_factory=list)
    expected_magnitude: float = 0.0
    success_probability: float = 0.0
    max_leakage: float = 0.0
    passed: bool = False

    def to_dict(self):
        return asdict(self)


@dataclass
class ConditionProblem:
    """Permanent conditions on a gate block.

    name: "cz", "ccz" or "tower"; block_modes: 3 (CZ/tower) or 5 (CCZ).
    """
    name: str
    block_modes: int
    skeleton: NetworkSpec
    aux_photons: int = 1
    scheme: Optional[str] = None
    free_phases: bool = False

    @property
    def n_qubits(self):
        return (self.block_modes + 1) // 2

    @property
    def n_mzis(self):
        return len(self.skeleton.mzis())

    @property
    def n_params(self):
        return self.n_mzis * (2 if self.free_phases else 1)

    @property
    def residual_dim(self):
        n = 2 ** self.n_qubits - 1
        return 2 * n if self.free_phases else n


@dataclass
class SolverSolution:
    t_vector: Tuple[float, ...]
    residual_norm: float
    success_amplitude: complex
    canonical_form_applied: bool = False
    phi_vector: Optional[Tuple[float, ...]] = None
    start_index: int = -1

    @property
    def probability(self):
        return abs(self.success_amplitude) ** 2

    def to_dict(self):
        out = {
            "t": list(self.t_vector),
            "residual_norm": self.residual_norm,
            "amplitude": self.success_amplitude.real if self.phi_vector is None
            else [self.success_amplitude.real, self.success_amplitude.imag],
            "probability": self.probability,
            "canonical": self.canonical_form_applied,
            "start": self.start_index,
        }
        if self.phi_vector is not None:
            out["phi"] = list(self.phi_vector)
        return out


@dataclass
class RunConfig:
    """Everything a command was invoked with; embedded in every report."""
    command: str
    gate: Optional[str] = None
    scheme: str = "clements"
    problem: Optional[str] = None
    trials: int = 100
    seed: int = 42
    k: int = 1
    starts: int = 200
    tol: Optional[float] = None
    photon_cap: int = 9
    out: Optional[str] = None
    format: Optional[str] = None
    deterministic: bool = False
    seed_file: Optional[str] = None
    refine: bool = False
    ascend: bool = False
    free_phases: bool = False
    placement: Optional[List[int]] = None
    network: Optional[str] = None
    occupations: Optional[List[int]] = None
    register: Optional[str] = None
    aux_photons: int = 1
    postselect: bool = False
    target_t: Optional[float] = None
    theta1_0: float = 0.0
    theta2_0: float = 0.0
    arm: str = "upper"

    def to_dict(self):
        return asdict(self)


@dataclass
class StepReport:
    """Observability for each command step."""
    step_name: str
    items_in: int = 0
    items_out: int = 0
    checks_run: int = 0
    checks_passed: int = 0
    checks_failed: int = 0
    status: str = "ok"  # ok, check_failed, no_solution
    notes: List[str] = field(default_factory=list)

    def check(self, name, passed, detail=""):
        """Record one pass/fail check; failures flip the status."""
        self.checks_run += 1
        if passed:
            self.checks_passed += 1
        else:
            self.checks_failed += 1
            self.status = "check_failed"
            self.notes.append("FAILED {}{}".format(name, ": " + detail if detail else ""))
        return passed

    def summary(self):
        checks = ""
        if self.checks_run > 0:
            checks = " | {}/{} checks passed".format(self.checks_passed, self.checks_run)
        return "{}: {} in -> {} out{} [{}]{}".format(
            self.step_name, self.items_in, self.items_out, checks, self.status,
            " | " + "; ".join(self.notes) if self.notes else "")
