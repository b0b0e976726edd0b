"""The 8x8, two-process worked example of the sparsity-aware 1D multiply.

Only the pattern facts stated in prose are known: p0 owns columns 0..3, the
non-empty rows of p0's slice of B are H0 = [1,0,1,1,0,1,0,0], p0 needs just
the second column of A1 (global column 5), and with two blocks per remote it
reads block(1,0) whole. The entries below are one instance consistent with
all of that; values are distinct small integers so products can be checked.

Hand counts for K = 2 (entry = 16 bytes):
  p0: A1 non-empty columns 4..7 split {4,5} {6,7}; needs {5}; reads columns
      4 and 5 (2 + 2 entries) -> 64 bytes, 1 interval, 2 messages; required
      bytes 32 (column 5 only).
  p1: H1 = [0,1,0,0,1,0,1,1]; from p0 needs {1}; groups {0,1} {2,3};
      reads columns 0 and 1 (2 + 1 entries) -> 48 bytes; required 16.
  total 112 bytes of nnz(A) * 16 = 208, so CV/memA = 112 / 208.
"""
EX8_A_TRIPLETS = [
    (0, 0, 1), (4, 0, 2),
    (1, 1, 3),
    (2, 2, 4), (6, 2, 5),
    (3, 3, 6),
    (0, 4, 7), (4, 4, 8),
    (1, 5, 9), (5, 5, 10),
    (6, 6, 11),
    (3, 7, 12), (7, 7, 13),
]

EX8_B_TRIPLETS = [
    (0, 0, 1), (2, 1, 2), (3, 2, 3), (5, 3, 4), (0, 3, 5),
    (4, 4, 6), (1, 5, 7), (6, 6, 8), (7, 7, 9), (4, 7, 10),
]

H0 = [1, 0, 1, 1, 0, 1, 0, 0]
H1 = [0, 1, 0, 0, 1, 0, 1, 1]

EXPECTED = {
    "bytes_fetched": [64, 48],
    "bytes_required": [32, 16],
    "intervals": [1, 1],
    "messages": [2, 2],
    "fetched_columns": [[4, 5], [0, 1]],
    "local_columns": [3, 3],
    "mem_a_bytes": 208,
    "cv": 112 / 208,
}


def operands(semiring=None):
    from sparse1d import from_triplets
    from sparse1d.semiring import INTEGER
    s = semiring or INTEGER
    return (from_triplets(8, 8, EX8_A_TRIPLETS, semiring=s),
            from_triplets(8, 8, EX8_B_TRIPLETS, semiring=s))
