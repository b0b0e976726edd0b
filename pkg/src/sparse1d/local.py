"""Single-process column-by-column SpGEMM over a pluggable semiring."""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import DCSC, SparseMatrix, infer_semiring
from .errors import ShapeError

__all__ = ["FlopsEstimate", "estimate_flops", "spgemm_local", "HYBRID_RATIO"]

#: Hybrid selector constant: a column goes to the hash accumulator when its
#: flops exceed HYBRID_RATIO times its merge-list length (nnz of the B column).
#: Untuned guess.
HYBRID_RATIO = 2.0

ACCUMULATORS = ("heap", "hash", "hybrid")


@dataclass(frozen=True)
class FlopsEstimate:
    per_column: np.ndarray
    total: int


def _check_inner(A, B):
    if A.ncols != B.nrows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")


def _column_flops(a_counts, B):
    b_ptr = B.colptr()
    csum = np.zeros(B.nnz + 1, dtype=np.int64)
    np.cumsum(a_counts[B.indices], out=csum[1:])
    return csum[b_ptr[1:]] - csum[b_ptr[:-1]]


def estimate_flops(A, B):
    """Sparse flops of ``A @ B`` per output column.

    Column j costs the sum of nnz(A[:, t]) over the stored entries B[t, j];
    the total equals the inner product of A's column counts with B's row
    counts.
    """
    _check_inner(A, B)
    per_col = _column_flops(A.col_counts(), B)
    return FlopsEstimate(per_col, int(per_col.sum()))


def _choose(per_col, B, accumulator):
    n = B.ncols
    if accumulator == "heap":
        return np.full(n, _kernels.HEAP, dtype=np.int8)
    if accumulator == "hash":
        return np.full(n, _kernels.HASH, dtype=np.int8)
    if accumulator == "hybrid":
        merge = np.diff(B.colptr())
        return np.where(per_col > HYBRID_RATIO * merge,
                        _kernels.HASH, _kernels.HEAP).astype(np.int8)
    raise ValueError(f"unknown accumulator {accumulator!r}; expected one of {ACCUMULATORS}")


def spgemm_local(A, B, semiring=None, accumulator="hybrid", mode=DCSC, *, _mask=None,
                 _mask_complement=True, _flops=None):
    """``C = A (+.*) B`` computed one output column at a time.

    Parameters
    ----------
    A, B : SparseMatrix
        Operands with ``A.ncols == B.nrows``; any storage mode.
    semiring : Semiring, optional
        Inferred from A's dtype when omitted. Both operands are cast to the
        semiring's dtype.
    accumulator : {'heap', 'hash', 'hybrid'}
        Heap merges the selected A columns as sorted streams; hash uses a
        linear-probing table; hybrid picks per column using HYBRID_RATIO.
    mode : {'dcsc', 'csc'}
        Storage mode of the result.

    Returns
    -------
    SparseMatrix
        Row indices sorted within each column. Entries whose accumulated value
        equals the semiring zero are kept.
    """
    _check_inner(A, B)
    if semiring is None:
        semiring = infer_semiring(A.data)
    a_ptr = A.colptr()
    b_ptr = B.colptr()
    a_val = semiring.cast(A.data)
    b_val = semiring.cast(B.data)
    per_col = _column_flops(np.diff(a_ptr), B) if _flops is None else _flops
    choice = _choose(per_col, B, accumulator)

    total = int(per_col.sum())
    c_ptr = np.empty(B.ncols + 1, dtype=np.int64)
    c_idx = np.empty(total, dtype=np.int64)
    c_val = np.empty(total, dtype=semiring.dtype)
    if _mask is not None:
        if _mask.shape != (A.nrows, B.ncols):
            raise ShapeError("mask shape must match the product")
        m_ptr, m_idx = _mask.colptr(), _mask.indices
        mask_mode = 1 if _mask_complement else 2
    else:
        m_ptr = np.zeros(1, dtype=np.int64)
        m_idx = np.zeros(0, dtype=np.int64)
        mask_mode = 0
    nnz = _kernels.spgemm_columns(a_ptr, A.indices, a_val, b_ptr, B.indices, b_val,
                                  per_col, choice, semiring.jit_multiply,
                                  semiring.jit_add, mask_mode, m_ptr, m_idx,
                                  c_ptr, c_idx, c_val)
    C = SparseMatrix((A.nrows, B.ncols), c_idx[:nnz], c_val[:nnz], indptr=c_ptr)
    return C.asmode(mode)
