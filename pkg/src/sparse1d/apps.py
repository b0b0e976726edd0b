"""Workloads built on the 1D multiply: squaring, Galerkin products, and
batched betweenness centrality."""
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import (DCSC, INDEX, SparseMatrix, from_coo, infer_semiring, permute,
                   transpose)
from .errors import ConfigError, ShapeError
from .layout import (Distribution1D, Layout, distribute_even,
                     is_pattern_symmetric, strategy_to_permutation)
from .local import estimate_flops, spgemm_local
from .runtime import (DEFAULT_BLOCKS, ENTRY_BYTES, ProcessMetrics, RunMetrics, hstack,
                      resolve_layout, spgemm_1d)
from .semiring import INTEGER, REAL

__all__ = [
    "RuntimeConfig",
    "RestrictionOperator",
    "GalerkinResult",
    "OuterProductResult",
    "BcScores",
    "square",
    "mis2_aggregate",
    "galerkin",
    "outer_product_1d",
    "prepare_graph",
    "bc_batch",
    "bc_approx",
]


@dataclass(frozen=True)
class RuntimeConfig:
    """Settings shared by every distributed multiply an application runs."""

    procs: int = 1
    blocks: int = DEFAULT_BLOCKS
    strategy: object = "identity"
    workers: int = None
    accumulator: str = "hybrid"
    coalesce: bool = False

    def __post_init__(self):
        if int(self.procs) < 1:
            raise ConfigError(f"process count must be >= 1, got {self.procs}")
        if int(self.blocks) < 1:
            raise ConfigError(f"block count must be >= 1, got {self.blocks}")

    def layout_for(self, A):
        """Resolve the strategy against the square matrix ``A``."""
        if isinstance(self.strategy, Layout):
            return self.strategy
        return strategy_to_permutation(A, self.strategy, self.procs)


def _config(config):
    if config is None:
        return RuntimeConfig()
    if isinstance(config, int):
        return RuntimeConfig(procs=config)
    return config


def square(A, config=None, semiring=None):
    """``A @ A`` with the sparsity-aware 1D multiply."""
    if A.nrows != A.ncols:
        raise ShapeError(f"squaring needs a square matrix, got {A.shape}")
    cfg = _config(config)
    return spgemm_1d(A, A, cfg.procs, cfg.strategy, cfg.blocks, semiring,
                     workers=cfg.workers, accumulator=cfg.accumulator,
                     coalesce=cfg.coalesce)


# -- restriction operators ------------------------------------------------------

@dataclass(frozen=True)
class RestrictionOperator:
    """Tall-skinny aggregation matrix: one unit entry per row.

    ``matrix[v, a] = 1`` when vertex v belongs to aggregate a; aggregate a is
    centred on ``roots[a]`` (roots ascending).
    """

    matrix: SparseMatrix
    roots: np.ndarray
    aggregates: np.ndarray

    @property
    def naggregates(self):
        return self.roots.size


def _neighbours(A):
    """CSC adjacency of the pattern without self loops."""
    rows, cols, _ = A.coo()
    off = rows != cols
    S = from_coo(A.nrows, A.ncols, rows[off], cols[off], True, mode="csc")
    return S.colptr(), S.indices


def mis2_aggregate(A, seed=None):
    """Aggregate the graph of ``A`` around a maximal distance-2 independent set.

    Roots are chosen greedily in order of ascending degree; ties go to the
    lower vertex id, or to a seeded random order when ``seed`` is given. Each
    vertex joins its nearest root, ties going to the lowest root id.
    """
    if A.nrows != A.ncols or not is_pattern_symmetric(A):
        raise ShapeError("mis2_aggregate needs a square, pattern-symmetric matrix")
    n = A.nrows
    ptr, idx = _neighbours(A)
    degree = np.diff(ptr)
    tie = np.arange(n) if seed is None else np.random.default_rng(seed).permutation(n)
    order = np.lexsort((tie, degree))

    blocked = np.zeros(n, dtype=bool)
    is_root = np.zeros(n, dtype=bool)
    for v in order:
        if blocked[v]:
            continue
        is_root[v] = True
        blocked[v] = True
        for u in idx[ptr[v]:ptr[v + 1]]:
            blocked[u] = True
            blocked[idx[ptr[u]:ptr[u + 1]]] = True

    roots = np.flatnonzero(is_root).astype(INDEX)
    owner = np.full(n, -1, dtype=INDEX)
    owner[roots] = roots
    # distance 1: at most one adjacent root (two would share this vertex)
    near = np.full(n, -1, dtype=INDEX)
    for r in roots:
        nb = idx[ptr[r]:ptr[r + 1]]
        nb = nb[owner[nb] == -1]
        near[nb] = np.where(near[nb] == -1, r, np.minimum(near[nb], r))
    first = (owner == -1) & (near != -1)
    owner[first] = near[first]
    for v in np.flatnonzero(owner == -1):
        cand = near[idx[ptr[v]:ptr[v + 1]]]
        cand = cand[cand != -1]
        owner[v] = cand.min()

    agg = np.searchsorted(roots, owner)
    R = from_coo(n, roots.size, np.arange(n), agg, np.ones(n), mode=DCSC)
    return RestrictionOperator(R, roots, agg.astype(INDEX))


# -- outer-product 1D multiply ------------------------------------------------

@dataclass
class OuterProductResult:
    matrix: SparseMatrix
    local: list
    out_dist: Distribution1D
    metrics: RunMetrics


def _count_moves(src_owner, dst_owner, P, metrics, entry_bytes=ENTRY_BYTES):
    moved = src_owner != dst_owner
    if not moved.any():
        return
    pairs = src_owner[moved] * P + dst_owner[moved]
    uniq, counts = np.unique(pairs, return_counts=True)
    for pair, c in zip(uniq.tolist(), counts.tolist()):
        dst = pair % P
        metrics[dst].bytes_fetched += c * entry_bytes
        metrics[dst].bytes_required += c * entry_bytes
        metrics[dst].messages += 1


def outer_product_1d(A, B, procs, semiring=None, *, strategy="identity", workers=None,
                     accumulator="hybrid", out_dist=None):
    """``C = A B`` as a sum of per-process outer products.

    Process i owns the column block A_i; B is moved so that i holds the
    matching row block, each process forms the partial product A_i B_i, and
    the partials are sent to the owners of their output columns and merged
    with the semiring add.
    """
    if A.ncols != B.nrows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if semiring is None:
        semiring = infer_semiring(A.data)
    n = B.ncols
    layout = resolve_layout(A, procs, strategy)
    P = layout.dist.nprocs
    if out_dist is None:
        out_dist = distribute_even(n, P)
    elif out_dist.nprocs != P or out_dist.n != n:
        raise ConfigError("output distribution does not match B's columns and P")

    q = None if layout.perm.is_identity() else layout.perm
    Ap = permute(A, None, q) if q is not None else A
    Bp = permute(B, q, None) if q is not None else B
    metrics = [ProcessMetrics(i) for i in range(P)]

    # redistribute B: column owner -> row-block owner
    t0 = time.perf_counter()
    rows, cols, _ = Bp.coo()
    _count_moves(out_dist.owner(cols), layout.dist.owner(rows), P, metrics)
    A_blocks = [Ap.column_block(*layout.dist.range(i)) for i in range(P)]
    B_rows = [Bp.row_block(*layout.dist.range(i)) for i in range(P)]
    t_other = (time.perf_counter() - t0) / P

    def local(i):
        t = time.perf_counter()
        fl = estimate_flops(A_blocks[i], B_rows[i])
        metrics[i].flops = fl.total
        part = spgemm_local(A_blocks[i], B_rows[i], semiring, accumulator,
                            _flops=fl.per_column)
        metrics[i].phase_times["computation"] += time.perf_counter() - t
        metrics[i].phase_times["other"] += t_other
        return part

    nworkers = 1 if workers is None else max(1, min(int(workers), P))
    if nworkers > 1:
        with ThreadPoolExecutor(nworkers) as pool:
            partials = list(pool.map(local, range(P)))
    else:
        partials = [local(i) for i in range(P)]

    # redistribute partials by output-column owner, then merge
    t0 = time.perf_counter()
    pieces = [[] for _ in range(P)]
    for i, part in enumerate(partials):
        r, c, v = part.coo()
        dst = out_dist.owner(c)
        _count_moves(np.full(c.size, i), dst, P, metrics)
        for j in range(P):
            sel = dst == j
            if sel.any():
                pieces[j].append((r[sel], c[sel], v[sel]))
    C_local = []
    for j in range(P):
        lo, hi = out_dist.range(j)
        if pieces[j]:
            r = np.concatenate([p[0] for p in pieces[j]])
            c = np.concatenate([p[1] for p in pieces[j]]) - lo
            v = np.concatenate([p[2] for p in pieces[j]])
        else:
            r = c = np.zeros(0, dtype=INDEX)
            v = np.zeros(0, dtype=semiring.dtype)
        C_local.append(from_coo(A.nrows, hi - lo, r, c, v, semiring=semiring))
    elapsed = (time.perf_counter() - t0) / P
    for mt in metrics:
        mt.phase_times["communication"] += elapsed
    mem_a = A.nnz * ENTRY_BYTES
    run = RunMetrics(metrics, mem_a, {"algorithm": "outer-product", "nprocs": P,
                                      "semiring": semiring.name,
                                      "accumulator": accumulator})
    return OuterProductResult(hstack(C_local), C_local, out_dist, run)


# -- Galerkin triple product ---------------------------------------------------

@dataclass
class GalerkinResult:
    matrix: SparseMatrix
    left: object
    right: object
    mode: str

    @property
    def metrics(self):
        return [self.left.metrics, self.right.metrics]


GALERKIN_MODES = ("onedim", "outer_product_right")


def galerkin(A, R, mode="onedim", config=None):
    """Coarse operator ``R^T A R`` for a tall-skinny restriction ``R``.

    The left product ``R^T A`` always uses the sparsity-aware 1D multiply;
    ``mode`` picks the algorithm for the right product.
    """
    if isinstance(R, RestrictionOperator):
        R = R.matrix
    if A.nrows != A.ncols:
        raise ShapeError(f"Galerkin product needs a square operator, got {A.shape}")
    if R.nrows != A.nrows:
        raise ShapeError(f"R has {R.nrows} rows but A is {A.shape}")
    if mode not in GALERKIN_MODES:
        raise ConfigError(f"unknown Galerkin mode {mode!r}; expected {GALERKIN_MODES}")
    cfg = _config(config)
    semiring = infer_semiring(A.data)
    R = R.astype(semiring.dtype)
    layout = cfg.layout_for(A)
    Rt = transpose(R)
    left = spgemm_1d(Rt, A, layout.dist.nprocs, layout, cfg.blocks, semiring,
                     workers=cfg.workers, accumulator=cfg.accumulator,
                     coalesce=cfg.coalesce)
    if mode == "onedim":
        right = spgemm_1d(left.matrix, R, layout.dist.nprocs, layout, cfg.blocks,
                          semiring, workers=cfg.workers, accumulator=cfg.accumulator,
                          coalesce=cfg.coalesce)
    else:
        right = outer_product_1d(left.matrix, R, layout.dist, semiring, strategy=layout,
                                 workers=cfg.workers, accumulator=cfg.accumulator)
    return GalerkinResult(right.matrix, left, right, mode)


# -- betweenness centrality -------------------------------------------------------

@dataclass
class BcScores:
    """Per-vertex dependency totals from the sources processed so far.

    Scores count ordered (source, target) pairs, so on undirected graphs they
    are twice the values of the unordered convention.
    """

    scores: np.ndarray
    sources: np.ndarray
    forward: list = field(default_factory=list)
    backward: list = field(default_factory=list)
    depth: int = 0

    def __array__(self, dtype=None, copy=None):
        return self.scores if dtype is None else self.scores.astype(dtype)


def prepare_graph(G):
    """Unweighted, undirected, loop-free integer adjacency of ``G``."""
    if G.nrows != G.ncols:
        raise ShapeError(f"graph matrix must be square, got {G.shape}")
    rows, cols, _ = G.coo()
    off = rows != cols
    r = np.concatenate([rows[off], cols[off]])
    c = np.concatenate([cols[off], rows[off]])
    S = from_coo(G.nrows, G.ncols, r, c, np.ones(r.size, dtype=np.int64),
                 semiring=INTEGER)
    return S.pattern(INTEGER)


def _union(X, Y):
    rx, cx, vx = X.coo()
    ry, cy, vy = Y.coo()
    return from_coo(X.nrows, X.ncols, np.concatenate([rx, ry]), np.concatenate([cx, cy]),
                    np.concatenate([vx, vy]), semiring=infer_semiring(vx))


def _align(level, Y):
    """Values of Y at the positions of ``level``'s pattern (zero where absent)."""
    n = level.nrows
    r, c, _ = level.coo()
    key = c * n + r
    ry, cy, vy = Y.coo()
    out = np.zeros(level.nnz, dtype=np.float64)
    if vy.size:
        pos = np.searchsorted(key, cy * n + ry)
        out[pos] = vy
    return out


def bc_batch(G, sources, config=None, *, graph_ready=False):
    """Dependency scores contributed by one batch of BFS sources.

    The forward search expands an ``n x s`` frontier (one column per source)
    one level at a time with ``F <- A^T F`` over integer (+, *), masked to
    unvisited (vertex, source) pairs; the frontier values are the shortest
    path counts. The backward sweep walks the levels from the deepest,
    pushing ``(1 + delta) / sigma`` one level up with a real (+, *) multiply
    masked to the previous level, and scales by sigma there.
    """
    cfg = _config(config)
    A = G if graph_ready else prepare_graph(G)
    n = A.nrows
    sources = np.asarray(sources, dtype=INDEX).ravel()
    if sources.size and (sources.min() < 0 or sources.max() >= n):
        raise IndexError(f"source id outside 0..{n - 1}")
    if np.unique(sources).size != sources.size:
        raise ValueError("sources must be distinct")
    s = sources.size
    scores = np.zeros(n, dtype=np.float64)
    if s == 0:
        return BcScores(scores, sources)

    layout = cfg.layout_for(A)
    At = transpose(A)
    frontier = from_coo(n, s, sources, np.arange(s), np.ones(s, dtype=np.int64),
                        semiring=INTEGER)
    visited = frontier
    levels = [frontier]
    forward = []
    while True:
        res = spgemm_1d(At, frontier, layout.dist.nprocs, layout, cfg.blocks, INTEGER,
                        workers=cfg.workers, accumulator=cfg.accumulator,
                        coalesce=cfg.coalesce, _mask=visited)
        forward.append(res.metrics)
        frontier = res.matrix
        if frontier.nnz == 0:
            break
        levels.append(frontier)
        visited = _union(visited, frontier)

    A_real = A.astype(np.float64)
    backward = []
    delta = [np.zeros(lv.nnz) for lv in levels]
    for d in range(len(levels) - 1, 0, -1):
        lv = levels[d]
        sigma = lv.data.astype(np.float64)
        r, c, _ = lv.coo()
        W = from_coo(n, s, r, c, (1.0 + delta[d]) / sigma, presorted=True)
        res = spgemm_1d(A_real, W, layout.dist.nprocs, layout, cfg.blocks, REAL,
                        workers=cfg.workers, accumulator=cfg.accumulator,
                        coalesce=cfg.coalesce, _mask=levels[d - 1],
                        _mask_complement=False)
        backward.append(res.metrics)
        prev = levels[d - 1]
        delta[d - 1] += prev.data.astype(np.float64) * _align(prev, res.matrix)

    # level 0 holds each source itself and is excluded
    for d in range(1, len(levels)):
        np.add.at(scores, levels[d].indices, delta[d])
    return BcScores(scores, sources, forward, backward, len(levels) - 1)


def bc_approx(G, num_sources, batch_size=4096, seed=0, config=None):
    """Approximate betweenness from ``num_sources`` seeded random sources,
    processed in batches of ``batch_size``."""
    A = prepare_graph(G)
    n = A.nrows
    if not 0 <= num_sources <= n:
        raise ValueError(f"num_sources must lie in 0..{n}")
    if batch_size < 1:
        raise ConfigError("batch size must be >= 1")
    rng = np.random.default_rng(seed)
    sources = np.sort(rng.choice(n, size=num_sources, replace=False)).astype(INDEX)
    total = BcScores(np.zeros(n), sources)
    for lo in range(0, num_sources, batch_size):
        part = bc_batch(A, sources[lo:lo + batch_size], config, graph_ready=True)
        total.scores += part.scores
        total.forward.extend(part.forward)
        total.backward.extend(part.backward)
        total.depth = max(total.depth, part.depth)
    return total
