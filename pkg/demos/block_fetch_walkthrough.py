"""Block fetching on an 8 x 8 product over two processes.

Each process owns four columns of A and four of B. Before multiplying,
process i scans its B columns for the rows they touch (the hit vector):
only those columns of A are needed, and of those only the remote ones
have to travel. The block count K trades fetched bytes for messages.
"""
import numpy as np

from sparse1d import (build_hit_vector, distribute_even, expose_windows, from_coo,
                      plan_block_fetch, required_columns, spgemm_1d, spgemm_local)

rng = np.random.default_rng(1)
n, P = 8, 2
A = from_coo(n, n, rng.integers(0, n, 14), rng.integers(0, n, 14), 1.0)
# process 0's columns of B touch rows in both halves, and so do process 1's
B = from_coo(n, n, [1, 4, 6, 7, 0, 2, 5, 7], [0, 1, 2, 3, 4, 5, 6, 7], 1.0)

dist = distribute_even(n, P)
slices = [A.column_block(*dist.range(i)).to_dcsc() for i in range(P)]
_, directory = expose_windows(slices)

for i in range(P):
    Bi = B.column_block(*dist.range(i))
    hit = build_hit_vector(Bi, n)
    req = required_columns(hit, directory)
    print(f"process {i}: hit rows {np.flatnonzero(hit).tolist()}, "
          f"needs A columns {req.tolist()}")
    r = 1 - i
    ids = directory.col_ids[directory.owned(r)]
    remote = req[np.isin(req, ids)]
    for K in sorted({1, 2, max(len(ids), 1)}):
        plan = plan_block_fetch(remote, ids, K, r)
        print(f"  K={K}: intervals {list(plan.intervals)} fetch {plan.columns.tolist()}")

for K in (1, 2, 4):
    res = spgemm_1d(A, B, P, blocks=K)
    m = res.metrics
    print(f"K={K}: {m.bytes_fetched} bytes in {m.messages} messages, "
          f"CV/memA = {m.cv_over_memA:.3f}")
    assert res.matrix == spgemm_local(A, B)
