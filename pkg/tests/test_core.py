import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparse1d import (CSC, DCSC, ParseError, Permutation, ShapeError, from_coo,
                      from_dense, from_triplets, identity, permute_symmetric,
                      prune_zeros, read_matrix_market, transpose, write_matrix_market)
from sparse1d.semiring import BOOLEAN, INTEGER, REAL

from oracles import random_sparse
from eight_by_eight import EX8_A_TRIPLETS


def write(tmp_path, text, name="m.mtx"):
    p = tmp_path / name
    p.write_text(text)
    return p


# -- construction ----------------------------------------------------------------

def test_duplicates_are_summed():
    A = from_triplets(2, 2, [(0, 0, 1), (0, 0, 2)])
    assert A.triplets() == [(0, 0, 3)]
    assert A.nnz == 1 and A.nzc == 1


def test_ex8_operand_nzc():
    A = from_triplets(8, 8, EX8_A_TRIPLETS, mode=DCSC)
    assert A.mode == DCSC
    assert A.nzc == 8
    assert A.nnz == 13
    np.testing.assert_array_equal(A.nonempty_columns(), np.arange(8))
    B = from_triplets(8, 8, [(0, 0, 1), (1, 6, 1)])
    assert B.nzc == 2 and B.ncols == 8


def test_empty_matrix():
    A = from_triplets(3, 3, [])
    assert A.nnz == 0 and A.nzc == 0
    A.check_format()
    assert A.to_csc().nnz == 0


def test_out_of_bounds_triplet():
    with pytest.raises(IndexError):
        from_triplets(2, 2, [(2, 0, 1.0)])
    with pytest.raises(IndexError):
        from_triplets(2, 2, [(0, -1, 1.0)])


def test_cancellation_keeps_explicit_zero():
    A = from_triplets(2, 2, [(1, 1, 3), (1, 1, -3), (0, 0, 1)], semiring=INTEGER)
    assert A.nnz == 2
    assert A.triplets() == [(0, 0, 1), (1, 1, 0)]
    P = prune_zeros(A)
    assert P.triplets() == [(0, 0, 1)]


def test_csc_dcsc_round_trip():
    A = from_triplets(4, 6, [(0, 1, 1.0), (3, 1, 2.0), (2, 4, 3.0)], mode=CSC)
    D = A.to_dcsc()
    assert D.mode == DCSC and D.nzc == 2
    np.testing.assert_array_equal(D.nonempty_columns(), [1, 4])
    assert D.to_csc() == A
    assert D.triplets() == A.triplets()
    D.check_format()
    A.check_format()


def test_matrices_are_read_only():
    A = from_dense(np.eye(3))
    with pytest.raises(ValueError):
        A.data[0] = 5.0
    arr = np.array([1.0, 2.0])
    B = from_coo(2, 2, [0, 1], [0, 1], arr)
    arr[0] = 99.0
    assert B.data[0] == 1.0


def test_identity_constructor():
    I = identity(4, INTEGER)
    np.testing.assert_array_equal(I.todense(), np.eye(4, dtype=np.int64))


# -- Matrix Market ---------------------------------------------------------------

def test_mm_single_real_entry(tmp_path):
    p = write(tmp_path, "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 3.5\n")
    A = read_matrix_market(p)
    np.testing.assert_array_equal(A.todense(), [[3.5]])


def test_mm_symmetric_expansion(tmp_path):
    p = write(tmp_path, "%%MatrixMarket matrix coordinate real symmetric\n"
                        "2 2 2\n2 1 7.0\n2 2 1.0\n")
    A = read_matrix_market(p)
    assert A.triplets() == [(1, 0, 7.0), (0, 1, 7.0), (1, 1, 1.0)]


def test_mm_pattern_four_by_four(tmp_path):
    text = ("%%MatrixMarket matrix coordinate pattern general\n"
            "% hand-written 4x4 pattern\n"
            "4 4 5\n1 1\n2 1\n4 2\n3 3\n1 4\n")
    p = write(tmp_path, text)
    expected = np.array([[1, 0, 0, 1],
                         [1, 0, 0, 0],
                         [0, 0, 1, 0],
                         [0, 1, 0, 0]])
    for semiring in (REAL, INTEGER, BOOLEAN):
        A = read_matrix_market(p, semiring)
        assert A.dtype == semiring.dtype
        np.testing.assert_array_equal(A.todense(), expected.astype(semiring.dtype))
        assert np.all(A.data == semiring.one)


def test_mm_integer_field_loads_int(tmp_path):
    p = write(tmp_path, "%%MatrixMarket matrix coordinate integer general\n2 2 1\n2 2 -4\n")
    A = read_matrix_market(p)
    assert A.dtype == np.int64
    assert A.triplets() == [(1, 1, -4)]


@pytest.mark.parametrize("text, line", [
    ("%%MatrixMarket matrix array real general\n1 1\n1.0\n", 1),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1.0\n", 3),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", 3),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1\n", 3),
    ("%%MatrixMarket matrix coordinate real general\n2 2\n", 2),
    ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n", 3),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n2 2 2.0\n", 4),
])
def test_mm_errors_carry_line_numbers(tmp_path, text, line):
    p = write(tmp_path, text)
    with pytest.raises(ParseError) as err:
        read_matrix_market(p)
    assert err.value.lineno == line
    assert str(err.value).startswith(f"line {line}:")


def test_mm_missing_entries(tmp_path):
    p = write(tmp_path, "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n")
    with pytest.raises(ParseError, match="declared 2"):
        read_matrix_market(p)


def test_mm_missing_file(tmp_path):
    with pytest.raises(OSError):
        read_matrix_market(tmp_path / "nope.mtx")


@pytest.mark.parametrize("semiring", [REAL, INTEGER, BOOLEAN])
def test_mm_round_trip(tmp_path, semiring):
    rng = np.random.default_rng(3)
    A = random_sparse(rng, 17, 9, 0.2, semiring)
    p = tmp_path / "a.mtx"
    write_matrix_market(A, p, comment="round trip")
    B = read_matrix_market(p, semiring)
    assert B == A


def test_mm_round_trip_awkward_floats(tmp_path):
    vals = [0.1, 1 / 3, -2.5e-300, 1.7976931348623157e308, 5e-324]
    A = from_coo(5, 1, np.arange(5), np.zeros(5, dtype=int), vals)
    p = tmp_path / "f.mtx"
    write_matrix_market(A, p)
    assert read_matrix_market(p) == A


# -- permutation and transpose -------------------------------------------------------

def test_permutation_must_be_bijective():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(ValueError):
        Permutation([0, 3])
    p = Permutation([2, 0, 1])
    np.testing.assert_array_equal(p.inverse().forward, [1, 2, 0])
    assert not p.is_identity() and Permutation.identity(3).is_identity()


def test_permute_identity_is_noop():
    A = random_sparse(np.random.default_rng(0), 10, 10, 0.2)
    assert permute_symmetric(A, Permutation.identity(10)) == A


def test_permute_two_by_two_swap():
    A = from_dense(np.array([[0, 5], [0, 0]]))
    B = permute_symmetric(A, Permutation([1, 0]))
    np.testing.assert_array_equal(B.todense(), [[0, 0], [5, 0]])


def test_permute_symmetric_non_square():
    with pytest.raises(ShapeError):
        permute_symmetric(from_triplets(2, 3, []), Permutation([1, 0]))


def test_permute_random_invariants():
    rng = np.random.default_rng(11)
    A = random_sparse(rng, 64, 64, 0.05)
    perm = Permutation(rng.permutation(64))
    B = permute_symmetric(A, perm)
    D, E = A.todense(), B.todense()
    assert B.nnz == A.nnz
    assert sorted(D.sum(axis=1).tolist()) == pytest.approx(sorted(E.sum(axis=1).tolist()))
    assert np.trace(E.T @ E) == pytest.approx(np.trace(D.T @ D))
    f = perm.forward
    np.testing.assert_array_equal(E[np.ix_(f, f)], D)
    assert permute_symmetric(B, perm.inverse()) == A


def test_transpose_examples():
    assert transpose(from_triplets(0, 0, [])).nnz == 0
    A = from_dense(np.array([[0, 1], [2, 0]]))
    np.testing.assert_array_equal(transpose(A).todense(), [[0, 2], [1, 0]])
    R = random_sparse(np.random.default_rng(5), 50, 30, 0.1)
    T = transpose(R)
    assert T.shape == (30, 50)
    np.testing.assert_array_equal(T.todense(), R.todense().T)
    assert transpose(T) == R


# -- properties -------------------------------------------------------------------

entries = st.lists(st.tuples(st.integers(0, 11), st.integers(0, 8),
                             st.integers(-3, 3)), max_size=60)


@settings(max_examples=150, deadline=None)
@given(entries, st.sampled_from([CSC, DCSC]))
def test_construction_invariants(trips, mode):
    A = from_triplets(12, 9, trips, mode=mode, semiring=INTEGER)
    A.check_format()
    jc, cp = A.column_offsets()
    assert np.diff(cp).sum() == A.nnz
    assert A.nzc <= A.ncols and A.nnz >= A.nzc
    dense = np.zeros((12, 9), dtype=np.int64)
    for r, c, v in trips:
        dense[r, c] += v
    np.testing.assert_array_equal(A.todense(), dense)
    other = A.to_csc() if mode == DCSC else A.to_dcsc()
    assert other.triplets() == A.triplets()
    assert other.asmode(mode) == A


@settings(max_examples=100, deadline=None)
@given(entries, st.permutations(list(range(9))))
def test_permute_round_trip(trips, perm):
    trips = [(r % 9, c, v) for r, c, v in trips]
    A = from_triplets(9, 9, trips, semiring=INTEGER)
    p = Permutation(perm)
    B = permute_symmetric(A, p)
    assert B.nnz == A.nnz
    assert permute_symmetric(B, p.inverse()) == A
