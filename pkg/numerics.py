"""
Dense complex linear algebra and matrix permanents.

Permanents use Ryser's formula walked in Gray-code order, vectorized over a
stack of equally sized matrices. The walk order is fixed, so results are
bit-identical between calls; permanent() is a batch of one.
"""

import itertools
import warnings
from functools import lru_cache

import numpy as np

from config import MAX_PERMANENT_SIZE, UNITARY_TOL
from errors import DimensionError, SelectionError, ResourceError
from models import IndexSelection


def as_matrix(M):
    """Coerce to a 2-D complex128 array with at least one row and column."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError("expected a non-empty 2-D matrix, got shape {}".format(arr.shape))
    return arr


def adjoint(M):
    return as_matrix(M).conj().T


def matmul(A, B):
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionError("cannot multiply {} by {}".format(A.shape, B.shape))
    return A @ B


def is_unitary(M, tol=UNITARY_TOL):
    """True iff max |M M† - I| < tol. Non-square input warns and returns False."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        warnings.warn("is_unitary: non-square input of shape {}".format(arr.shape))
        return False
    dev = np.max(np.abs(arr @ arr.conj().T - np.eye(arr.shape[0])))
    return bool(dev < tol)


@lru_cache(maxsize=None)
def _gray_walk(n):
    """Column flipped, add/remove and (-1)^|S| for each of the 2^n - 1 Gray steps."""
    steps = np.arange(1, 1 << n, dtype=np.int64)
    lowbit = steps & -steps
    cols = np.log2(lowbit).astype(np.int64)
    gray = steps ^ (steps >> 1)
    delta = np.where(gray & lowbit, 1.0, -1.0)
    parity = np.where(steps & 1, -1.0, 1.0)  # |S| has the parity of the step
    return cols.tolist(), delta.tolist(), parity.tolist()


def permanent_batch(stack):
    """Permanents of a (B, n, n) stack."""
    stack = np.asarray(stack, dtype=complex)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise DimensionError("expected a stack of square matrices, got shape {}".format(stack.shape))
    batch, n = stack.shape[0], stack.shape[1]
    if n == 0:
        return np.ones(batch, dtype=complex)
    if n > MAX_PERMANENT_SIZE:
        raise ResourceError("permanent of size {} exceeds cap {}".format(n, MAX_PERMANENT_SIZE))

    cols, delta, parity = _gray_walk(n)
    row_sums = np.zeros((batch, n), dtype=complex)
    total = np.zeros(batch, dtype=complex)
    for col, d, p in zip(cols, delta, parity):
        row_sums += d * stack[:, :, col]
        total += p * np.prod(row_sums, axis=1)
    return total if n % 2 == 0 else -total


def _naive_permanent(M):
    n = M.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    return complex(np.sum(np.prod(M[np.arange(n), perms], axis=1)))


def permanent(M, naive=False):
    """Matrix permanent. naive=True expands all n! permutations (test oracle)."""
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionError("permanent needs a square matrix, got {}".format(M.shape))
    if M.shape[0] > MAX_PERMANENT_SIZE:
        raise ResourceError("permanent of size {} exceeds cap {}".format(
            M.shape[0], MAX_PERMANENT_SIZE))
    if naive:
        return _naive_permanent(M)
    return complex(permanent_batch(M[np.newaxis])[0])


def expand_selection(M, sel):
    """Submatrix with rows/columns repeated per the 1-based selection."""
    M = as_matrix(M)
    rows, cols = list(sel.rows), list(sel.cols)
    if len(rows) != len(cols):
        raise SelectionError("row selection has {} entries, column selection {}".format(
            len(rows), len(cols)))
    if not rows:
        return np.zeros((0, 0), dtype=complex)
    for idx, limit, axis in ((rows, M.shape[0], "row"), (cols, M.shape[1], "column")):
        bad = [i for i in idx if i < 1 or i > limit]
        if bad:
            raise SelectionError("{} indices {} outside 1..{}".format(axis, bad, limit))
    return M[np.ix_(np.asarray(rows) - 1, np.asarray(cols) - 1)]


def permanent_with_multiplicity(M, sel):
    """Permanent of the expanded submatrix. No factorial normalization."""
    if not isinstance(sel, IndexSelection):
        sel = IndexSelection(tuple(sel[0]), tuple(sel[1]))
    sub = expand_selection(M, sel)
    if sub.shape[0] == 0:
        return 1.0 + 0j
    return permanent(sub)
