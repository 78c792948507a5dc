"""
Fock-state enumeration and multi-photon evolution.

A creation operator on mode j maps to Σ_k U†(j, k) a†_k, so the amplitude of
input S going to output T is perm(U†[S, T]) / √(∏ s_j! ∏ t_k!) with row j
repeated s_j times and column k repeated t_k times.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from config import FOCK_LIMIT, PERMANENT_CHUNK, PHOTON_CAP, UNITARY_TOL
from errors import ContractError, DimensionError, DomainError, ResourceError
from models import StateVector
from numerics import as_matrix, is_unitary, permanent, permanent_batch


def enumerate_fock(modes, photons):
    """All occupations of `photons` photons in `modes` modes, first mode fullest first."""
    if modes < 1:
        raise DimensionError("need at least one mode, got {}".format(modes))
    if photons < 0:
        raise DomainError("photon number must be non-negative, got {}".format(photons))
    count = math.comb(photons + modes - 1, photons)
    if count > FOCK_LIMIT:
        raise ResourceError("{} Fock states for {} photons in {} modes exceeds {}".format(
            count, photons, modes, FOCK_LIMIT))
    states = []
    for combo in itertools.combinations_with_replacement(range(modes), photons):
        occ = [0] * modes
        for mode in combo:
            occ[mode] += 1
        states.append(tuple(occ))
    return states


def mode_indices(occupation):
    """0-based mode index repeated once per photon."""
    return [mode for mode, n in enumerate(occupation) for _ in range(n)]


def _factorial_norm(occupation):
    return math.sqrt(math.prod(math.factorial(n) for n in occupation))


def _require_unitary(U):
    U = as_matrix(U)
    if U.shape[0] != U.shape[1] or not is_unitary(U, UNITARY_TOL):
        raise ContractError("network matrix is not unitary within {}".format(UNITARY_TOL))
    return U


def transition_amplitude(U, input_state, output_state):
    U = _require_unitary(U)
    inp, out = tuple(input_state), tuple(output_state)
    if len(inp) != U.shape[0] or len(out) != U.shape[0]:
        raise DimensionError("occupations over {} / {} modes for a {}-mode network".format(
            len(inp), len(out), U.shape[0]))
    if sum(inp) != sum(out):
        return 0j
    if sum(inp) == 0:
        return 1.0 + 0j
    sub = U.conj().T[np.ix_(mode_indices(inp), mode_indices(out))]
    return permanent(sub) / (_factorial_norm(inp) * _factorial_norm(out))


def evolve(U, state, outputs=None, photon_cap=PHOTON_CAP, workers=1):
    """Propagate a StateVector through U.

    outputs restricts the computed amplitudes to the listed occupations
    (post-selection only ever needs the structure-preserving ones); by
    default every Fock state with the input photon number is returned.
    Permanents are batched in chunks; with workers > 1 chunks run on a
    thread pool and are merged back in enumeration order.
    """
    U = _require_unitary(U)
    m = U.shape[0]
    if state.modes != m:
        raise DimensionError("state over {} modes for a {}-mode network".format(state.modes, m))
    state.validate()
    n = state.photons
    if n > photon_cap:
        raise ResourceError("{} photons exceeds the photon cap {}".format(n, photon_cap))

    if outputs is None:
        outputs = enumerate_fock(m, n)
    else:
        outputs = [tuple(int(x) for x in o) for o in outputs]
        for o in outputs:
            if len(o) != m:
                raise DimensionError("output occupation {} is not over {} modes".format(o, m))

    amplitudes = np.zeros(len(outputs), dtype=complex)
    valid = np.array([i for i, o in enumerate(outputs) if sum(o) == n], dtype=np.int64)
    if len(valid) == 0 or not state.terms:
        return StateVector(m, dict(zip(outputs, amplitudes)))
    if n == 0:
        amplitudes[valid] = sum(state.terms.values())
        return StateVector(m, dict(zip(outputs, amplitudes)))

    cols = np.array([mode_indices(outputs[i]) for i in valid], dtype=np.int64)
    out_norms = np.array([_factorial_norm(outputs[i]) for i in valid])
    chunks = [slice(a, a + PERMANENT_CHUNK) for a in range(0, len(valid), PERMANENT_CHUNK)]
    Ud = U.conj().T

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 and len(chunks) > 1 else None
    try:
        for occ, amp in state.terms.items():
            if amp == 0:
                continue
            rows = Ud[mode_indices(occ)]

            def chunk_permanents(sl, rows=rows):
                return permanent_batch(np.transpose(rows[:, cols[sl]], (1, 0, 2)))

            if pool is not None:
                parts = list(pool.map(chunk_permanents, chunks))
            else:
                parts = [chunk_permanents(sl) for sl in chunks]
            perms = np.concatenate(parts)
            amplitudes[valid] += amp * perms / (_factorial_norm(occ) * out_norms)
    finally:
        if pool is not None:
            pool.shutdown()

    return StateVector(m, dict(zip(outputs, amplitudes)))
