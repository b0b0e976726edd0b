"""Matrix Market coordinate files (real / integer / pattern; general / symmetric).

Indices are 1-based on disk and 0-based in memory.
"""
import numpy as np

from .core import DCSC, from_coo
from .errors import ParseError
from .semiring import INTEGER, REAL

__all__ = ["read_matrix_market", "write_matrix_market"]

_FIELDS = ("real", "integer", "pattern")
_SYMMETRIES = ("general", "symmetric")


def _parse_header(line, lineno):
    parts = line.strip().split()
    if len(parts) != 5 or parts[0] != "%%MatrixMarket":
        raise ParseError("expected '%%MatrixMarket matrix coordinate <field> <symmetry>'",
                         lineno)
    obj, fmt, field, symmetry = (p.lower() for p in parts[1:])
    if obj != "matrix":
        raise ParseError(f"unsupported object {obj!r}", lineno)
    if fmt != "coordinate":
        raise ParseError(f"unsupported format {fmt!r} (only coordinate)", lineno)
    if field not in _FIELDS:
        raise ParseError(f"unsupported field {field!r}", lineno)
    if symmetry not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry {symmetry!r}", lineno)
    return field, symmetry


def read_matrix_market(path, semiring=None, mode=DCSC):
    """Read a coordinate Matrix Market file.

    Symmetric files are expanded to both triangles. Pattern files get the
    semiring's one as every value. Without an explicit semiring, ``integer``
    files load as int64 and everything else as float64.
    """
    with open(path, "r") as fh:
        lines = iter(enumerate(fh, start=1))
        try:
            lineno, first = next(lines)
        except StopIteration:
            raise ParseError("empty file", None) from None
        field, symmetry = _parse_header(first, lineno)
        if semiring is None:
            semiring = INTEGER if field == "integer" else REAL

        size = None
        for lineno, line in lines:
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            size = s.split()
            break
        if size is None:
            raise ParseError("missing size line", None)
        try:
            m, n, nnz = (int(x) for x in size)
        except ValueError:
            raise ParseError(f"bad size line {' '.join(size)!r}", lineno) from None
        if m < 0 or n < 0 or nnz < 0:
            raise ParseError("negative size", lineno)

        rows = np.empty(nnz, dtype=np.int64)
        cols = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz, dtype=semiring.dtype)
        want = 2 if field == "pattern" else 3
        k = 0
        for lineno, line in lines:
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            if k == nnz:
                raise ParseError(f"more than the declared {nnz} entries", lineno)
            parts = s.split()
            if len(parts) != want:
                raise ParseError(f"expected {want} fields, got {len(parts)}", lineno)
            try:
                i, j = int(parts[0]), int(parts[1])
                if field == "pattern":
                    v = semiring.one
                elif field == "integer":
                    v = int(parts[2])
                else:
                    v = float(parts[2])
            except ValueError:
                raise ParseError(f"cannot parse entry {s!r}", lineno) from None
            if not (1 <= i <= m and 1 <= j <= n):
                raise ParseError(f"entry ({i}, {j}) outside {m}x{n}", lineno)
            if symmetry == "symmetric" and i < j:
                raise ParseError("symmetric file has an entry above the diagonal", lineno)
            rows[k], cols[k], vals[k] = i - 1, j - 1, v
            k += 1
        if k != nnz:
            raise ParseError(f"declared {nnz} entries but found {k}", None)

    if symmetry == "symmetric":
        off = rows != cols
        rows, cols, vals = (np.concatenate([rows, cols[off]]),
                            np.concatenate([cols, rows[off]]),
                            np.concatenate([vals, vals[off]]))
    return from_coo(m, n, rows, cols, vals, mode=mode, semiring=semiring)


def write_matrix_market(A, path, comment=None):
    """Write ``A`` in general coordinate format.

    Floats are written in shortest round-trip form, so reading back gives
    the same values. Boolean matrices are written as ``pattern`` when every
    stored value is true, otherwise as 0/1 integers.
    """
    kind = A.dtype.kind
    if kind == "b":
        field = "pattern" if A.data.all() else "integer"
    elif kind in "iu":
        field = "integer"
    else:
        field = "real"
    rows, cols, vals = A.coo()
    with open(path, "w") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate {field} general\n")
        if comment:
            for line in str(comment).splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{A.nrows} {A.ncols} {A.nnz}\n")
        if field == "pattern":
            for i, j in zip(rows.tolist(), cols.tolist()):
                fh.write(f"{i + 1} {j + 1}\n")
        elif field == "integer":
            for i, j, v in zip(rows.tolist(), cols.tolist(), vals.astype(np.int64).tolist()):
                fh.write(f"{i + 1} {j + 1} {v}\n")
        else:
            for i, j, v in zip(rows.tolist(), cols.tolist(), vals.tolist()):
                fh.write(f"{i + 1} {j + 1} {v!r}\n")
