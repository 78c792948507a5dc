import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from errors import ContractError, DimensionError, DomainError, ResourceError
from fock import enumerate_fock, evolve, transition_amplitude
from gates import cz_network
from mesh import BALANCED_BS, build_network
from models import StateVector


def random_state(rng, modes, photons, terms=3):
    space = enumerate_fock(modes, photons)
    picks = rng.choice(len(space), size=min(terms, len(space)), replace=False)
    amps = rng.normal(size=len(picks)) + 1j * rng.normal(size=len(picks))
    amps /= np.linalg.norm(amps)
    return StateVector(modes, {space[i]: complex(a) for i, a in zip(picks, amps)})


def test_enumerate_small():
    assert enumerate_fock(2, 2) == [(2, 0), (1, 1), (0, 2)]


def test_enumerate_count():
    assert len(enumerate_fock(14, 5)) == math.comb(18, 5) == 8568


def test_enumerate_vacuum():
    assert enumerate_fock(4, 0) == [(0, 0, 0, 0)]


def test_enumerate_errors():
    with pytest.raises(DimensionError):
        enumerate_fock(0, 1)
    with pytest.raises(DomainError):
        enumerate_fock(3, -1)
    with pytest.raises(ResourceError):
        enumerate_fock(40, 12)


def test_identity_amplitudes():
    U = np.eye(3)
    assert transition_amplitude(U, (1, 0, 2), (1, 0, 2)) == pytest.approx(1.0)
    assert transition_amplitude(U, (1, 0, 2), (0, 1, 2)) == 0


def test_hong_ou_mandel_dip():
    assert abs(transition_amplitude(BALANCED_BS, (1, 1), (1, 1))) < 1e-15
    assert abs(transition_amplitude(BALANCED_BS, (1, 1), (2, 0))) ** 2 == pytest.approx(0.5)


def test_photon_number_mismatch_is_zero():
    U = unitary_group.rvs(3, random_state=1)
    assert transition_amplitude(U, (1, 1, 0), (1, 0, 0)) == 0


def test_non_unitary_rejected():
    with pytest.raises(ContractError):
        transition_amplitude(np.ones((2, 2)), (1, 0), (1, 0))


def test_cz_structure_preserving_amplitudes():
    U = build_network(cz_network())
    # |00>: rails 0 of both qubits and the auxiliary rail
    assert transition_amplitude(U, (1, 0, 1, 1, 0), (1, 0, 1, 1, 0)).real == pytest.approx(0.3904, abs=1e-3)
    assert transition_amplitude(U, (0, 1, 1, 0, 1), (0, 1, 1, 0, 1)).real == pytest.approx(-0.3904, abs=1e-3)


def test_evolve_identity():
    state = StateVector(3, {(1, 1, 0): 0.6, (0, 1, 1): 0.8j})
    out = evolve(np.eye(3), state)
    assert out.amplitude((1, 1, 0)) == pytest.approx(0.6)
    assert out.amplitude((0, 1, 1)) == pytest.approx(0.8j)
    assert sum(abs(a) ** 2 for occ, a in out.terms.items()
               if occ not in state.terms) == pytest.approx(0.0, abs=1e-20)


def test_evolve_cz_encoded_11():
    U = build_network(cz_network())
    out = evolve(U, StateVector.basis((0, 1, 1, 0, 1)))
    assert out.amplitude((0, 1, 1, 0, 1)).real == pytest.approx(-0.3904, abs=1e-3)
    assert len(out.terms) == math.comb(3 + 5 - 1, 3)


def test_evolve_norm_conservation():
    rng = np.random.default_rng(21)
    for case in range(100):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(1, 5))
        U = unitary_group.rvs(m, random_state=1000 + case)
        out = evolve(U, random_state(rng, m, n))
        assert out.norm() == pytest.approx(1.0, abs=1e-9)


def test_evolve_composition():
    rng = np.random.default_rng(22)
    for case in range(20):
        U1 = unitary_group.rvs(4, random_state=2000 + case)
        U2 = unitary_group.rvs(4, random_state=3000 + case)
        state = random_state(rng, 4, 3)
        two_step = evolve(U2, evolve(U1, state))
        one_step = evolve(U2 @ U1, state)
        for occ, amp in one_step.terms.items():
            assert two_step.amplitude(occ) == pytest.approx(amp, abs=1e-9)


def test_evolve_matches_transition_amplitude():
    rng = np.random.default_rng(23)
    for case in range(10):
        m = int(rng.integers(2, 5))
        n = int(rng.integers(1, 4))
        U = unitary_group.rvs(m, random_state=4000 + case)
        space = enumerate_fock(m, n)
        S = space[int(rng.integers(len(space)))]
        out = evolve(U, StateVector.basis(S))
        for T in space:
            assert out.amplitude(T) == pytest.approx(transition_amplitude(U, S, T), abs=1e-10)


def test_evolve_restricted_outputs():
    U = unitary_group.rvs(5, random_state=5)
    state = StateVector.basis((1, 1, 0, 1, 0))
    full = evolve(U, state)
    picked = [(0, 0, 1, 1, 1), (3, 0, 0, 0, 0), (1, 0, 0, 0, 0)]
    part = evolve(U, state, outputs=picked)
    assert part.amplitude(picked[0]) == pytest.approx(full.amplitude(picked[0]), abs=1e-14)
    assert part.amplitude(picked[1]) == pytest.approx(full.amplitude(picked[1]), abs=1e-14)
    assert part.amplitude(picked[2]) == 0


def test_evolve_threads_match_serial(monkeypatch):
    import fock
    monkeypatch.setattr(fock, "PERMANENT_CHUNK", 16)
    U = unitary_group.rvs(6, random_state=6)
    state = random_state(np.random.default_rng(24), 6, 3)
    serial = evolve(U, state)
    threaded = evolve(U, state, workers=4)
    assert list(serial.terms) == list(threaded.terms)
    for occ, amp in serial.terms.items():
        assert threaded.terms[occ] == amp


def test_evolve_photon_cap():
    with pytest.raises(ResourceError):
        evolve(np.eye(4), StateVector.basis((3, 3, 2, 2)), photon_cap=9)


def test_evolve_mixed_photon_numbers():
    with pytest.raises(DimensionError):
        evolve(np.eye(2), StateVector(2, {(1, 0): 0.6, (1, 1): 0.8}))
