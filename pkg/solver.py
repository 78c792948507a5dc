"""
Permanent conditions on gate blocks, and a multi-start least-squares solver.

For a block of 2n-1 modes (rails 1 of n qubits at odd positions, auxiliary
rails at even positions) every computational basis configuration selects
the auxiliary positions (each repeated k times) plus the rail-1 positions of
the qubits set to 1. Its expression is perm(u†[sel, sel]) / (k!)^(n-1).
A working gate needs all expressions equal to the |0..0> one, except the
|1..1> expression, which must be its negative. Residuals list
E(0..0) - s·E(b) for b = 0..01 up to 1..1 in ascending order, s = -1 only
for 1..1.

The search runs in angle space (t = sin x) so every iterate is a valid
transmittance.
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import least_squares

from config import (ACCEPT_TOL, ASCENT_MAX_STEPS, ASCENT_MIN_GAIN, ASCENT_STEP,
                    CCZ_TERM_COUNTS, DEDUP_TOL, DEFAULT_SEED, JACOBIAN_STEP, MAX_NFEV,
                    MIN_AMPLITUDE, worker_count)
from errors import ContractError, DimensionError, DomainError, UsageError
from gates import ccz_network, ccz_skeleton, cz_network, cz_skeleton
from mesh import assign_settings, build_network
from models import ConditionProblem, IndexSelection, QubitLayout, SolverSolution
from numerics import permanent_with_multiplicity


def make_problem(name, k=1, scheme="clements", free_phases=False):
    if k < 1:
        raise DomainError("need at least one auxiliary photon, got k = {}".format(k))
    if name == "cz":
        problem = ConditionProblem("cz", 3, cz_skeleton(), 1, None, free_phases)
    elif name == "tower":
        problem = ConditionProblem("tower", 3, cz_skeleton(), k, None, free_phases)
    elif name == "ccz":
        problem = ConditionProblem("ccz", 5, ccz_skeleton(scheme), 1, scheme, free_phases)
        counts = term_counts(problem)
        if counts != CCZ_TERM_COUNTS:
            raise ContractError("CCZ condition term counts {} != {}".format(counts, CCZ_TERM_COUNTS))
    else:
        raise UsageError("unknown problem {!r}".format(name))
    return problem


def configurations(problem):
    """(bits, 1-based block positions) per basis string, ascending."""
    n = problem.n_qubits
    aux = [2 * j + 2 for j in range(n - 1)] * problem.aux_photons
    out = []
    for i in range(2 ** n):
        bits = format(i, "0{}b".format(n))
        rails = [2 * j + 1 for j, b in enumerate(bits) if b == "1"]
        out.append((bits, sorted(aux + rails)))
    return out


def term_counts(problem):
    """Number of permutation terms in each condition's permanent."""
    return tuple(math.factorial(len(sel)) for _, sel in configurations(problem))


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1 + 1e-12):
        raise DomainError("transmittances must satisfy |t| <= 1, got {}".format(t.tolist()))
    return t


def block_unitary(problem, t, phi=None):
    t = _check_t(t)
    if len(t) != problem.n_mzis:
        raise DimensionError("{} settings for a {}-MZI block".format(len(t), problem.n_mzis))
    return build_network(assign_settings(problem.skeleton, t, phi))


def condition_expressions(problem, t, phi=None):
    ud = block_unitary(problem, t, phi).conj().T
    norm = math.factorial(problem.aux_photons) ** (problem.n_qubits - 1)
    return np.array([permanent_with_multiplicity(ud, IndexSelection(tuple(sel), tuple(sel))) / norm
                     for _, sel in configurations(problem)])


def residuals(problem, t, phi=None):
    E = condition_expressions(problem, t, phi)
    signs = np.ones(len(E) - 1)
    signs[-1] = -1.0
    r = E[0] - signs * E[1:]
    if problem.free_phases:
        return np.concatenate([r.real, r.imag])
    # φ = 0 blocks are real orthogonal
    return r.real


def cz_residuals(t):
    return residuals(make_problem("cz"), t)


def ccz_residuals(t, scheme="clements"):
    return residuals(make_problem("ccz", scheme=scheme), t)


def tower_residuals(t, k):
    return residuals(make_problem("tower", k=k), t)


def success_amplitude(t, problem, phi=None):
    """The |0..0> expression: the amplitude every post-selected basis state carries."""
    ud = block_unitary(problem, t, phi).conj().T
    _, sel = configurations(problem)[0]
    norm = math.factorial(problem.aux_photons) ** (problem.n_qubits - 1)
    return complex(permanent_with_multiplicity(ud, IndexSelection(tuple(sel), tuple(sel))) / norm)


def numeric_jacobian(fun, x, step=JACOBIAN_STEP):
    """Central differences, one column per parameter."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(len(x)):
        dx = np.zeros_like(x)
        dx[i] = step
        cols.append((np.asarray(fun(x + dx)) - np.asarray(fun(x - dx))) / (2 * step))
    return np.column_stack(cols)


# === Search ===

def _unpack(problem, x):
    d = problem.n_mzis
    t = np.sin(x[:d])
    phi = x[d:] if problem.free_phases else None
    return t, phi


def _objective(problem):
    def fun(x):
        t, phi = _unpack(problem, x)
        return residuals(problem, t, phi)
    return fun


def _descend(problem, x0):
    fun = _objective(problem)
    method = "lm" if problem.residual_dim >= problem.n_params else "trf"
    result = least_squares(fun, x0, jac=lambda x: numeric_jacobian(fun, x), method=method,
                           xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=MAX_NFEV)
    return result.x


def canonicalize(problem, t):
    """Representative of t under the CZ block symmetries.

    The group is generated by t1 <-> t3 (transposes the block) and the
    joint flip (t1, t3) -> (-t1, -t3) (conjugates it by a sign on one rail).
    Picks t1 >= 0 and t3 >= t1 when reachable. Other problems pass through.
    """
    t = tuple(float(v) for v in t)
    if problem.name not in ("cz", "tower") or problem.free_phases:
        return t, False
    t1, t2, t3 = t
    candidates = [(t1, t2, t3), (t3, t2, t1), (-t1, t2, -t3), (-t3, t2, -t1)]
    best = min(candidates, key=lambda c: (c[0] < 0, c[2] < c[0], c))
    return best, True


def _solution(problem, x, start_index, canonical=True):
    t, phi = _unpack(problem, x)
    norm = float(np.linalg.norm(residuals(problem, t, phi)))
    amp = success_amplitude(t, problem, phi)
    if canonical:
        t_out, applied = canonicalize(problem, t)
    else:
        t_out, applied = tuple(float(v) for v in t), False
    return SolverSolution(
        t_vector=t_out,
        residual_norm=norm,
        success_amplitude=amp,
        canonical_form_applied=applied,
        phi_vector=None if phi is None else tuple(float(v) for v in phi),
        start_index=start_index,
    )


def _accepted(solution, tol):
    return solution.residual_norm < tol and abs(solution.success_amplitude) > MIN_AMPLITUDE


def deduplicate(solutions, tol=DEDUP_TOL):
    """Drop solutions within tol (max-abs) of one already kept, lowest residual first."""
    kept = []
    for sol in sorted(solutions, key=lambda s: s.residual_norm):
        vec = np.array(sol.t_vector + (sol.phi_vector or ()))
        if all(np.max(np.abs(vec - np.array(k.t_vector + (k.phi_vector or ())))) > tol
               for k in kept):
            kept.append(sol)
    return sort_solutions(kept)


def sort_solutions(solutions):
    return sorted(solutions, key=lambda s: (-abs(s.success_amplitude), s.t_vector))


def _start_points(problem, starts, seed, seed_points):
    d = problem.n_mzis
    points = []
    for p in seed_points or []:
        if len(p) != d:
            raise DimensionError("seed point has {} entries, block has {} MZIs".format(len(p), d))
        x = np.arcsin(np.clip(_check_t(p), -1, 1))
        if problem.free_phases:
            x = np.concatenate([x, np.zeros(d)])
        points.append(x)
    rng = np.random.default_rng(seed)
    t0 = rng.uniform(-1.0, 1.0, size=(starts, d))
    if problem.free_phases:
        phi0 = rng.uniform(-np.pi, np.pi, size=(starts, d))
        points.extend(np.concatenate([np.arcsin(t0[i]), phi0[i]]) for i in range(starts))
    else:
        points.extend(np.arcsin(t0[i]) for i in range(starts))
    return points


def solve(problem, starts, seed=DEFAULT_SEED, seed_points=None, tol=ACCEPT_TOL,
          ascend=False, workers=None):
    """Multi-start damped least squares.

    Seed points run first, then `starts` uniform random points from the
    seeded PRNG. Returns (solutions, diagnostics): accepted solutions with
    |A| above MIN_AMPLITUDE, deduplicated and sorted by |A| descending, and
    the per-start final residual norms.
    """
    if starts < 1:
        raise DomainError("need at least one start, got {}".format(starts))
    points = _start_points(problem, starts, seed, seed_points)

    def run_start(item):
        i, x0 = item
        x = _descend(problem, x0)
        return _solution(problem, x, i), x

    workers = workers or worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run_start, enumerate(points)))
    else:
        results = [run_start(item) for item in enumerate(points)]

    accepted = []
    for sol, x in results:
        if not _accepted(sol, tol):
            continue
        if ascend and not problem.free_phases:
            sol = ascend_amplitude(problem, sol, x, tol=tol)
        accepted.append(sol)

    solutions = deduplicate(accepted)
    diagnostics = {
        "starts": len(points),
        "accepted": len(accepted),
        "distinct": len(solutions),
        "final_residuals": [sol.residual_norm for sol, _ in results],
    }
    return solutions, diagnostics


def refine(problem, t0, phi0=None, tol=ACCEPT_TOL):
    """One descent from t0, keeping the MZI labeling (no canonicalization)."""
    x0 = np.arcsin(np.clip(_check_t(t0), -1, 1))
    if problem.free_phases:
        x0 = np.concatenate([x0, np.zeros(len(x0)) if phi0 is None else np.asarray(phi0, float)])
    x = _descend(problem, x0)
    return _solution(problem, x, -1, canonical=False)


def ascend_amplitude(problem, solution, x=None, tol=ACCEPT_TOL, step=ASCENT_STEP,
                     min_gain=ASCENT_MIN_GAIN, max_steps=ASCENT_MAX_STEPS):
    """Climb |A| along the solution set of an underdetermined system.

    Each step moves along the gradient of |A| projected onto the null space of
    the residual Jacobian, then re-solves the residuals. Stops when the gain
    drops below min_gain or the correction fails.
    """
    fun = _objective(problem)

    def amp(z):
        return abs(success_amplitude(np.sin(z), problem))

    if x is None:
        x = np.arcsin(np.clip(np.asarray(solution.t_vector), -1, 1))
    x = np.asarray(x, dtype=float)
    current = amp(x)
    for _ in range(max_steps):
        J = numeric_jacobian(fun, x)
        g = numeric_jacobian(lambda z: np.array([amp(z)]), x)[0]
        g_free = g - np.linalg.pinv(J) @ (J @ g)
        size = np.linalg.norm(g_free)
        if size < 1e-14:
            break
        candidate = _descend(problem, x + step * g_free / size)
        if np.linalg.norm(fun(candidate)) >= tol:
            break
        gained = amp(candidate) - current
        if gained < min_gain:
            break
        x, current = candidate, current + gained
    return _solution(problem, x, solution.start_index)


def solution_network(problem, solution):
    """Full gate network and qubit layout for a solution."""
    t, phi = solution.t_vector, solution.phi_vector
    if problem.name in ("cz", "tower"):
        return cz_network(t, phi), QubitLayout(2, problem.aux_photons)
    return ccz_network(problem.scheme, t, phi), QubitLayout(3)
