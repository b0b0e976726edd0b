"""Compressed-column sparse matrices (CSC and doubly compressed DCSC).

Matrices are immutable once built. Row indices inside each column are strictly
increasing; indices are always int64. In DCSC mode only non-empty columns are
stored: ``jc`` lists their ids and ``cp`` holds per-column offsets into
``indices``/``data``.
"""
import numpy as np

from . import _kernels
from .errors import ShapeError
from .semiring import BOOLEAN, INTEGER, REAL

__all__ = [
    "SparseMatrix",
    "Permutation",
    "from_triplets",
    "from_coo",
    "from_dense",
    "identity",
    "transpose",
    "permute",
    "permute_symmetric",
    "prune_zeros",
    "CSC",
    "DCSC",
]

CSC = "csc"
DCSC = "dcsc"
INDEX = np.int64


def _frozen(a, dtype=None):
    a = np.ascontiguousarray(a, dtype=dtype)
    if a.flags.writeable:
        a = a.copy()
        a.flags.writeable = False
    return a


def infer_semiring(values):
    kind = np.asarray(values).dtype.kind
    if kind == "b":
        return BOOLEAN
    if kind in "iu":
        return INTEGER
    return REAL


class SparseMatrix:
    """An ``m x n`` sparse matrix in CSC or DCSC storage.

    Build instances with :func:`from_triplets`, :func:`from_coo` or
    :func:`from_dense` rather than calling the constructor directly.
    """

    __slots__ = ("shape", "mode", "indices", "data", "_indptr", "_jc", "_cp")

    def __init__(self, shape, indices, data, *, indptr=None, jc=None, cp=None):
        m, n = (int(shape[0]), int(shape[1]))
        self.shape = (m, n)
        self.indices = _frozen(indices, INDEX)
        self.data = _frozen(data)
        if indptr is not None:
            self.mode = CSC
            self._indptr = _frozen(indptr, INDEX)
            self._jc = None
            self._cp = None
        else:
            self.mode = DCSC
            self._jc = _frozen(jc, INDEX)
            self._cp = _frozen(cp, INDEX)
            self._indptr = None

    # -- basic properties -------------------------------------------------
    @property
    def nrows(self):
        return self.shape[0]

    @property
    def ncols(self):
        return self.shape[1]

    @property
    def nnz(self):
        return int(self.indices.shape[0])

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def nzc(self):
        """Number of non-empty columns."""
        return int(self.nonempty_columns().shape[0])

    def nonempty_columns(self):
        """Sorted ids of the columns holding at least one entry."""
        if self.mode == DCSC:
            return self._jc
        return np.flatnonzero(np.diff(self._indptr)).astype(INDEX)

    def column_offsets(self):
        """``(jc, cp)``: non-empty column ids and their offsets (DCSC view)."""
        if self.mode == DCSC:
            return self._jc, self._cp
        jc = self.nonempty_columns()
        cp = np.append(self._indptr[jc], self.nnz).astype(INDEX)
        return jc, cp

    def colptr(self):
        """Full-length CSC column pointer (length ``ncols + 1``)."""
        if self.mode == CSC:
            return self._indptr
        counts = np.zeros(self.ncols, dtype=INDEX)
        counts[self._jc] = np.diff(self._cp)
        ptr = np.zeros(self.ncols + 1, dtype=INDEX)
        np.cumsum(counts, out=ptr[1:])
        return ptr

    def column(self, j):
        """Row indices and values of column ``j``."""
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} out of range for {self.ncols} columns")
        if self.mode == CSC:
            lo, hi = self._indptr[j], self._indptr[j + 1]
        else:
            k = np.searchsorted(self._jc, j)
            if k == len(self._jc) or self._jc[k] != j:
                return self.indices[:0], self.data[:0]
            lo, hi = self._cp[k], self._cp[k + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def col_counts(self):
        return np.diff(self.colptr())

    def row_counts(self):
        return np.bincount(self.indices, minlength=self.nrows).astype(INDEX)

    def coo(self):
        """``(rows, cols, vals)`` in column-major order."""
        jc, cp = self.column_offsets()
        cols = np.repeat(jc, np.diff(cp))
        return self.indices, cols, self.data

    def triplets(self):
        rows, cols, vals = self.coo()
        return list(zip(rows.tolist(), cols.tolist(), vals.tolist()))

    # -- conversions -------------------------------------------------------
    def to_csc(self):
        if self.mode == CSC:
            return self
        return SparseMatrix(self.shape, self.indices, self.data, indptr=self.colptr())

    def to_dcsc(self):
        if self.mode == DCSC:
            return self
        jc, cp = self.column_offsets()
        return SparseMatrix(self.shape, self.indices, self.data, jc=jc, cp=cp)

    def asmode(self, mode):
        if mode == CSC:
            return self.to_csc()
        if mode == DCSC:
            return self.to_dcsc()
        raise ValueError(f"unknown storage mode {mode!r}")

    def astype(self, dtype):
        dtype = np.dtype(dtype)
        if dtype == self.dtype:
            return self
        data = self.data.astype(dtype)
        if self.mode == CSC:
            return SparseMatrix(self.shape, self.indices, data, indptr=self._indptr)
        return SparseMatrix(self.shape, self.indices, data, jc=self._jc, cp=self._cp)

    def pattern(self, semiring=BOOLEAN):
        """Same structure with every stored value set to ``semiring.one``."""
        data = np.full(self.nnz, semiring.one, dtype=semiring.dtype)
        if self.mode == CSC:
            return SparseMatrix(self.shape, self.indices, data, indptr=self._indptr)
        return SparseMatrix(self.shape, self.indices, data, jc=self._jc, cp=self._cp)

    def todense(self, zero=0):
        out = np.full(self.shape, zero, dtype=self.dtype)
        rows, cols, vals = self.coo()
        out[rows, cols] = vals
        return out

    def select_columns(self, cols):
        """DCSC matrix of the same shape keeping only ``cols`` (sorted ids)."""
        cols = np.asarray(cols, dtype=INDEX)
        ptr = self.colptr()
        lo, hi = ptr[cols], ptr[cols + 1]
        keep = hi > lo
        cols, lo, hi = cols[keep], lo[keep], hi[keep]
        counts = hi - lo
        cp = np.zeros(len(cols) + 1, dtype=INDEX)
        np.cumsum(counts, out=cp[1:])
        take = np.repeat(lo - cp[:-1], counts) + np.arange(cp[-1], dtype=INDEX)
        return SparseMatrix(self.shape, self.indices[take], self.data[take], jc=cols, cp=cp)

    def column_block(self, lo, hi):
        """Columns ``lo..hi-1`` as an ``m x (hi-lo)`` matrix, same mode."""
        if not 0 <= lo <= hi <= self.ncols:
            raise IndexError(f"column range [{lo}, {hi}) outside 0..{self.ncols}")
        ptr = self.colptr()
        a, b = ptr[lo], ptr[hi]
        sub = SparseMatrix((self.nrows, hi - lo), self.indices[a:b], self.data[a:b],
                           indptr=ptr[lo:hi + 1] - a)
        return sub.asmode(self.mode)

    def row_block(self, lo, hi):
        """Rows ``lo..hi-1`` as a ``(hi-lo) x n`` matrix, same mode."""
        rows, cols, vals = self.coo()
        keep = (rows >= lo) & (rows < hi)
        return from_coo(hi - lo, self.ncols, rows[keep] - lo, cols[keep], vals[keep],
                        mode=self.mode, presorted=True)

    # -- checks and comparisons ----------------------------------------------
    def check_format(self):
        """Raise AssertionError if a storage invariant is broken."""
        m, n = self.shape
        assert self.indices.shape == self.data.shape
        if self.nnz:
            assert self.indices.min() >= 0 and self.indices.max() < m
        if self.mode == CSC:
            p = self._indptr
            assert p.shape == (n + 1,) and p[0] == 0 and p[-1] == self.nnz
            assert np.all(np.diff(p) >= 0)
        else:
            jc, cp = self._jc, self._cp
            assert cp.shape == (len(jc) + 1,) and cp[0] == 0 and cp[-1] == self.nnz
            assert np.all(np.diff(cp) > 0), "DCSC stores only non-empty columns"
            assert np.all(np.diff(jc) > 0)
            if len(jc):
                assert jc[0] >= 0 and jc[-1] < n
        jc, cp = self.column_offsets()
        step = np.diff(self.indices)
        # strictly increasing inside every column
        inner = np.ones(max(self.nnz - 1, 0), dtype=bool)
        inner[cp[1:-1] - 1] = False
        assert np.all(step[inner] > 0)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.shape != other.shape or self.nnz != other.nnz:
            return False
        a, b = self.coo(), other.coo()
        return (np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
                and np.array_equal(a[2], b[2]))

    __hash__ = None

    def __repr__(self):
        return (f"<{self.shape[0]}x{self.shape[1]} SparseMatrix {self.mode.upper()} "
                f"nnz={self.nnz} nzc={self.nzc} dtype={self.dtype}>")


def _semiring_for(vals, semiring):
    if semiring is None:
        semiring = infer_semiring(vals)
    return semiring


def from_coo(m, n, rows, cols, vals, *, mode=DCSC, semiring=None, presorted=False):
    """Build a matrix from coordinate arrays, summing duplicates with the
    semiring's add. Exact zeros produced by the sum are kept."""
    rows = np.asarray(rows, dtype=INDEX).ravel()
    cols = np.asarray(cols, dtype=INDEX).ravel()
    vals = np.asarray(vals)
    if vals.ndim == 0:
        vals = np.full(rows.shape, vals)
    vals = vals.ravel()
    semiring = _semiring_for(vals, semiring)
    vals = semiring.cast(vals)
    if not (rows.shape == cols.shape == vals.shape):
        raise ValueError("rows, cols and vals must have equal length")
    m, n = int(m), int(n)
    if m < 0 or n < 0:
        raise ValueError("matrix dimensions must be non-negative")
    if rows.size:
        bad = (rows < 0) | (rows >= m) | (cols < 0) | (cols >= n)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise IndexError(f"entry ({rows[k]}, {cols[k]}) outside {m}x{n} matrix")
    if not presorted:
        order = np.lexsort((rows, cols))
        rows, cols, vals = rows[order], cols[order], vals[order]
    if rows.size > 1:
        new = np.empty(rows.size, dtype=bool)
        new[0] = True
        np.logical_or(rows[1:] != rows[:-1], cols[1:] != cols[:-1], out=new[1:])
        if not new.all():
            starts = np.append(np.flatnonzero(new), rows.size).astype(INDEX)
            summed = np.empty(starts.size - 1, dtype=vals.dtype)
            _kernels.segment_reduce(vals, starts, semiring.jit_add, summed)
            rows, cols, vals = rows[new], cols[new], summed
    ptr = np.zeros(n + 1, dtype=INDEX)
    np.cumsum(np.bincount(cols, minlength=n), out=ptr[1:])
    A = SparseMatrix((m, n), rows, vals, indptr=ptr)
    return A.asmode(mode)


def from_triplets(m, n, triplets, mode=DCSC, semiring=None):
    """Build an ``m x n`` matrix from ``(row, col, value)`` tuples.

    Duplicates are combined with the semiring's add (the semiring is inferred
    from the value type when not given).

    >>> from_triplets(2, 2, [(0, 0, 1), (0, 0, 2)]).triplets()
    [(0, 0, 3)]
    """
    triplets = list(triplets)
    if triplets:
        rows, cols, vals = zip(*triplets)
    else:
        dtype = semiring.dtype if semiring is not None else np.float64
        rows, cols, vals = [], [], np.empty(0, dtype=dtype)
    return from_coo(m, n, rows, cols, np.asarray(vals), mode=mode, semiring=semiring)


def from_dense(array, mode=DCSC, zero=0):
    """Entries of a 2-D array that differ from ``zero`` become stored values."""
    array = np.asarray(array)
    if array.ndim != 2:
        raise ShapeError("from_dense expects a 2-D array")
    cols, rows = np.nonzero((array != zero).T)
    return from_coo(array.shape[0], array.shape[1], rows, cols, array[rows, cols],
                    mode=mode, presorted=True)


def identity(n, semiring=REAL, mode=DCSC):
    idx = np.arange(n, dtype=INDEX)
    return from_coo(n, n, idx, idx, np.full(n, semiring.one, dtype=semiring.dtype),
                    mode=mode, semiring=semiring, presorted=True)


def transpose(A):
    rows, cols, vals = A.coo()
    return from_coo(A.ncols, A.nrows, cols, rows, vals, mode=A.mode,
                    semiring=infer_semiring(vals))


class Permutation:
    """A bijection on ``0..n-1`` given by its forward map: old -> new."""

    __slots__ = ("forward",)

    def __init__(self, forward):
        forward = np.asarray(forward, dtype=INDEX).ravel()
        n = forward.size
        seen = np.zeros(n, dtype=bool)
        if n and (forward.min() < 0 or forward.max() >= n):
            raise ValueError("permutation values must lie in 0..n-1")
        seen[forward] = True
        if not seen.all():
            raise ValueError("permutation is not a bijection")
        self.forward = _frozen(forward)

    @classmethod
    def identity(cls, n):
        return cls(np.arange(n, dtype=INDEX))

    @property
    def size(self):
        return self.forward.size

    def __len__(self):
        return self.forward.size

    def inverse(self):
        inv = np.empty_like(self.forward)
        inv[self.forward] = np.arange(self.forward.size, dtype=INDEX)
        return Permutation(inv)

    def is_identity(self):
        return bool(np.array_equal(self.forward, np.arange(self.size)))

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.forward, other.forward)

    __hash__ = None

    def __repr__(self):
        return f"Permutation({self.forward.tolist() if self.size <= 16 else '...'})"


def _as_perm(p, n):
    if p is None:
        return None
    if not isinstance(p, Permutation):
        p = Permutation(p)
    if p.size != n:
        raise ShapeError(f"permutation of length {p.size} applied to dimension {n}")
    return p


def permute(A, row_perm=None, col_perm=None):
    """Relabel rows and/or columns: entry (i, j) moves to (row_perm(i), col_perm(j))."""
    row_perm = _as_perm(row_perm, A.nrows)
    col_perm = _as_perm(col_perm, A.ncols)
    rows, cols, vals = A.coo()
    if row_perm is not None:
        rows = row_perm.forward[rows]
    if col_perm is not None:
        cols = col_perm.forward[cols]
    return from_coo(A.nrows, A.ncols, rows, cols, vals, mode=A.mode,
                    semiring=infer_semiring(vals))


def permute_symmetric(A, perm):
    """``P A P^T``: result[perm(i), perm(j)] = A[i, j]."""
    if A.nrows != A.ncols:
        raise ShapeError(f"symmetric permutation needs a square matrix, got {A.shape}")
    return permute(A, perm, perm)


def prune_zeros(A, semiring=None):
    """Drop stored entries equal to the semiring zero."""
    semiring = _semiring_for(A.data, semiring)
    keep = A.data != semiring.zero
    if keep.all():
        return A
    rows, cols, vals = A.coo()
    return from_coo(A.nrows, A.ncols, rows[keep], cols[keep], vals[keep], mode=A.mode,
                    semiring=semiring, presorted=True)
