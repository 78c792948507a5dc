import numpy as np
import pytest

from config import CZ_SETTINGS, PRINTED_CZ_MATRIX
from errors import DimensionError, ResourceError, SelectionError
from mesh import mzi_unitary
from models import IndexSelection, MziSetting
from numerics import (adjoint, expand_selection, is_unitary, matmul, permanent, permanent_batch,
                      permanent_with_multiplicity)


def random_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def test_permanent_identity():
    assert permanent(np.eye(3)) == pytest.approx(1.0)


def test_permanent_single_entry():
    assert permanent([[0.5]]) == pytest.approx(0.5)


def test_permanent_negative_entries():
    assert permanent([[1, -2], [-3, 4]]) == pytest.approx(10.0)


def test_permanent_non_square():
    with pytest.raises(DimensionError):
        permanent(np.ones((2, 3)))


def test_permanent_size_cap():
    with pytest.raises(ResourceError):
        permanent(np.eye(21))


def test_permanent_cz_central_block():
    U = np.array(PRINTED_CZ_MATRIX, dtype=float)
    block = U[np.ix_([1, 2, 4], [1, 2, 4])]
    assert permanent(block).real == pytest.approx(-0.3904, abs=1e-3)


def test_permanent_repeatable():
    M = random_complex(np.random.default_rng(3), 9)
    assert permanent(M) == permanent(M)


@pytest.mark.parametrize("n", range(1, 8))
def test_ryser_matches_naive(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(100 // 7 + 1):
        M = random_complex(rng, n)
        fast, slow = permanent(M), permanent(M, naive=True)
        assert abs(fast - slow) <= 1e-12 * max(1.0, abs(slow))


def test_permanent_invariant_under_permutations():
    rng = np.random.default_rng(7)
    for _ in range(50):
        M = random_complex(rng, 5)
        P = np.eye(5)[rng.permutation(5)]
        Q = np.eye(5)[rng.permutation(5)]
        assert permanent(P @ M @ Q) == pytest.approx(permanent(M), rel=1e-10)


def test_permanent_row_multilinear():
    rng = np.random.default_rng(8)
    for _ in range(50):
        M = random_complex(rng, 4)
        c = complex(rng.normal(), rng.normal())
        i = rng.integers(4)
        scaled = M.copy()
        scaled[i] *= c
        assert permanent(scaled) == pytest.approx(c * permanent(M), rel=1e-10)


def test_permanent_zero_row():
    M = random_complex(np.random.default_rng(9), 5)
    M[2] = 0
    assert permanent(M) == 0


def test_permanent_batch_matches_single():
    stack = random_complex(np.random.default_rng(10), 6 * 4, 4).reshape(6, 4, 4)
    batch = permanent_batch(stack)
    for k in range(6):
        assert batch[k] == permanent(stack[k])


def test_permanent_batch_empty_matrices():
    np.testing.assert_array_equal(permanent_batch(np.zeros((3, 0, 0))), np.ones(3))


def test_multiplicity_repeated_index():
    sel = IndexSelection((1, 1), (1, 1))
    assert permanent_with_multiplicity(np.eye(2), sel) == pytest.approx(2.0)


def test_multiplicity_one_is_plain_permanent():
    M = random_complex(np.random.default_rng(11), 2)
    assert permanent_with_multiplicity(M, ((1, 2), (1, 2))) == permanent(M)


def test_multiplicity_submatrix():
    M = random_complex(np.random.default_rng(12), 6)
    sel = IndexSelection((2, 4, 5), (1, 3, 6))
    assert permanent_with_multiplicity(M, sel) == permanent(M[np.ix_([1, 3, 4], [0, 2, 5])])


def test_multiplicity_empty_selection():
    assert permanent_with_multiplicity(np.eye(3), ((), ())) == 1


def test_selection_errors():
    with pytest.raises(SelectionError):
        expand_selection(np.eye(3), IndexSelection((1, 4), (1, 2)))
    with pytest.raises(SelectionError):
        expand_selection(np.eye(3), IndexSelection((1, 2), (1,)))
    with pytest.raises(SelectionError):
        expand_selection(np.eye(3), IndexSelection((0,), (1,)))


def test_is_unitary():
    assert is_unitary(np.eye(5), 1e-12)
    assert is_unitary(np.array(PRINTED_CZ_MATRIX), 1e-3)
    U = np.eye(4, dtype=complex)
    U[1, 2] += 1e-2
    assert not is_unitary(U, 1e-6)


def test_is_unitary_non_square_warns():
    with pytest.warns(UserWarning):
        assert not is_unitary(np.ones((2, 3)))


def test_adjoint_and_matmul():
    from scipy.stats import unitary_group
    U = unitary_group.rvs(4, random_state=13)
    np.testing.assert_array_equal(adjoint(adjoint(U)), U)
    np.testing.assert_allclose(matmul(U, adjoint(U)), np.eye(4), atol=1e-12)
    with pytest.raises(DimensionError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_block_factors_reproduce_printed_block():
    t1, t2, t3 = CZ_SETTINGS

    def on(pair, t):
        out = np.eye(3, dtype=complex)
        i = pair - 1
        out[i:i + 2, i:i + 2] = mzi_unitary(MziSetting(t))
        return out

    block = matmul(on(1, t3), matmul(on(2, t2), on(1, t1)))
    printed = np.array(PRINTED_CZ_MATRIX)[np.ix_([1, 2, 4], [1, 2, 4])]
    np.testing.assert_allclose(block, printed, atol=1e-3)
