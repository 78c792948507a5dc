"""
Configuration: tolerances, resource caps, published gate settings, golden matrices.
"""

import json
import os
from pathlib import Path

from errors import UsageError


DEFAULT_SEED = 42

# Resource caps. The 5-qubit CCZ cascade carries 5 + 4 photons on 14 modes.
PHOTON_CAP = 9
MODE_CAP = 14
MAX_PERMANENT_SIZE = 20
FOCK_LIMIT = 10 ** 7
PERMANENT_CHUNK = 2048  # matrices per vectorized permanent batch

# Tolerances
UNITARY_TOL = 1e-10
BUILD_TOL = 1e-12
PUBLISHED_TOL = 1e-3     # against values printed to 4 digits
SELF_TOL = 1e-9          # self-consistency (norms, spreads)
ACCEPT_TOL = 1e-10       # solver acceptance on ‖r‖
TRUTH_TABLE_TOL = 1e-2   # relative to |A_succ|
FIDELITY_TOL_PUBLISHED = 1e-4
FIDELITY_TOL_REFINED = 1e-9
NORMALIZATION_TOL = 1e-12

# Solver
MIN_AMPLITUDE = 1e-3     # reject degenerate A = 0 roots
JACOBIAN_STEP = 1e-7
DEDUP_TOL = 1e-6
MAX_NFEV = 400
ASCENT_STEP = 1e-3
ASCENT_MIN_GAIN = 1e-8
ASCENT_MAX_STEPS = 2000
DEFAULT_STARTS = 200
DEFAULT_TRIALS = 100

MAX_HISTORY_RUNS = 50

THREADS_ENV = "LOPSIM_THREADS"

EXIT_CODES = {
    "ok": 0,
    "usage": 1,
    "check_failed": 2,
    "no_solution": 3,
}

GATES = ("cz", "cnot", "ccz", "toffoli")
SCHEMES = ("clements", "reck")
PROBLEMS = ("cz", "ccz", "tower")

# === Published settings ===

CZ_SETTINGS = (0.3686, -0.2192, 0.8686)

CCZ_SETTINGS = {
    "clements": (-0.7893, -0.9428, -0.3809, -0.3284, -0.2583,
                 0.8719, 0.03792, 0.3689, 0.7943, 0.8559),
    "reck": (-0.9428, -0.3022, -0.1496, -0.2531, 0.9540,
             -0.3768, -0.09816, -0.9507, -0.5064, 0.8559),
}

# Auxiliary-photon tower: k photons per auxiliary rail -> CZ block settings
TOWER_SOLUTIONS = {
    1: {"t": (0.3686, -0.2192, 0.8686), "amplitude": 0.3904},
    2: {"t": (0.3095, -0.1517, 0.7812), "amplitude": 0.3101},
    3: {"t": (0.2758, -0.1166, 0.7090), "amplitude": 0.2811},
    4: {"t": (0.2517, -0.09463, 0.6518), "amplitude": 0.2664},
    5: {"t": (0.2331, -0.07963, 0.6058), "amplitude": 0.2576},
    6: {"t": (0.2181, -0.06873, 0.5681), "amplitude": 0.2518},
    7: {"t": (0.2057, -0.06044, 0.5364), "amplitude": 0.2476},
}

EXPECTED_AMPLITUDE = {
    "cz": 0.3904,
    "cnot": 0.3904,
    "ccz": 0.163231,
    "toffoli": 0.163231,
}

EXPECTED_P_SUCC = {
    "cz": 0.15241,
    "cnot": 0.15241,
    "ccz": 0.02665,
    "toffoli": 0.02665,
}

# Factorials of the eight CCZ condition selection sizes, |000> .. |111>
CCZ_TERM_COUNTS = (2, 6, 6, 24, 6, 24, 24, 120)

# === Golden matrices (as printed, 4 to 6 digits) ===

PRINTED_CZ_MATRIX = (
    (1, 0, 0, 0, 0),
    (0, 0.2192, 0.8475, 0, 0.4834),
    (0, 0.3597, 0.3904, 0, -0.8475),
    (0, 0, 0, 1, 0),
    (0, 0.9070, -0.3597, 0, 0.2192),
)

PRINTED_CCZ_MATRIX = (
    (1, 0, 0, 0, 0, 0, 0, 0),
    (0, -0.253097, -0.144686, 0, -0.289053, -0.859702, 0, 0.303922),
    (0, -0.0949594, -0.367007, 0, 0.862646, -0.0859038, 0, 0.323652),
    (0, 0, 0, 1, 0, 0, 0, 0),
    (0, -0.487524, -0.713273, 0, -0.174711, 0.16601, 0, -0.44213),
    (0, 0.710573, -0.285319, 0, 0.110023, -0.377978, 0, -0.508631),
    (0, 0, 0, 0, 0, 0, 1, 0),
    (0, 0.429338, -0.504189, 0, -0.360084, 0.288281, 0, 0.590505),
)


def worker_count():
    """Thread cap from LOPSIM_THREADS, else the CPU count (at most 8)."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise UsageError("{} must be an integer, got {!r}".format(THREADS_ENV, raw))
    return min(8, os.cpu_count() or 1)


def load_seed_file(path):
    """Seed points for the solver.

    Accepts {"t": [...]}, {"seed_points": [[...], ...]} or a bare list
    (one point or a list of points). Returns a list of tuples.
    """
    if not path or not Path(path).exists():
        raise UsageError("seed file not found: {}".format(path))
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise UsageError("seed file {} is not valid JSON: {}".format(path, e))

    if isinstance(data, dict):
        if "seed_points" in data:
            points = data["seed_points"]
        elif "t" in data:
            points = [data["t"]]
        else:
            raise UsageError("seed file needs a 't' or 'seed_points' key")
    else:
        points = data
    if points and not isinstance(points[0], (list, tuple)):
        points = [points]
    try:
        return [tuple(float(v) for v in p) for p in points]
    except (TypeError, ValueError):
        raise UsageError("seed points must be lists of numbers")
