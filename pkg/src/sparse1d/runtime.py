"""Sparsity-aware 1D SpGEMM on simulated processes with one-sided reads.

Each logical process i owns the column slices A_i and B_i. A_i is exposed
through two read-only windows (row ids, values); a replicated column directory
tells every process where each non-empty column of A lives. Process i reads
only the columns of A that match non-empty rows of B_i, grouped into at most
K contiguous blocks per remote process, assembles them into a fresh DCSC
matrix and multiplies locally. B and C never move.

Communication is counted exactly: every block read is one get on each window
(two messages) and costs 8 bytes per row id plus 8 bytes per value.
"""
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import DCSC, INDEX, SparseMatrix, infer_semiring, permute
from .errors import ConfigError, InternalError, ShapeError
from .layout import (Distribution1D, Layout, Strategy, distribute_even,
                     strategy_to_permutation)
from .local import estimate_flops, spgemm_local

__all__ = [
    "DEFAULT_BLOCKS",
    "INDEX_BYTES",
    "VALUE_BYTES",
    "DEFAULT_CV_THRESHOLD",
    "Epoch",
    "WindowPair",
    "ColumnDirectory",
    "FetchPlan",
    "ProcessMetrics",
    "RunMetrics",
    "SpgemmResult",
    "CvReport",
    "expose_windows",
    "build_hit_vector",
    "required_columns",
    "plan_block_fetch",
    "fetch_and_assemble",
    "spgemm_1d",
    "spgemm_1d_naive",
    "analyze_cv",
    "hstack",
]

DEFAULT_BLOCKS = 2048
INDEX_BYTES = 8
VALUE_BYTES = 8
ENTRY_BYTES = INDEX_BYTES + VALUE_BYTES
DEFAULT_CV_THRESHOLD = 0.30


class Epoch:
    """Access epoch shared by all windows of one multiply."""

    def __init__(self):
        self.open = False


class WindowPair:
    """Row-id and value windows over one process's slice of A.

    The arrays hold the slice's columns back to back in column order.
    """

    __slots__ = ("owner", "rows", "values", "_epoch")

    def __init__(self, owner, rows, values, epoch):
        self.owner = owner
        self.rows = rows
        self.values = values
        self._epoch = epoch

    def __len__(self):
        return self.rows.shape[0]

    def get(self, lo, hi):
        """Read entries ``lo..hi-1`` from both windows."""
        if not self._epoch.open:
            raise InternalError(f"window of process {self.owner} read outside an epoch")
        if not 0 <= lo <= hi <= self.rows.shape[0]:
            raise InternalError(f"read [{lo}, {hi}) outside window of length {len(self)}")
        return self.rows[lo:hi], self.values[lo:hi]


@dataclass(frozen=True)
class ColumnDirectory:
    """Replicated metadata about the non-empty columns of the global A.

    ``offsets[c]`` is where column ``col_ids[c]`` starts inside its owner's
    windows; ``owner_ptr[r]:owner_ptr[r+1]`` are the entries owned by r.
    """

    col_ids: np.ndarray
    col_nnz: np.ndarray
    offsets: np.ndarray
    owners: np.ndarray
    owner_ptr: np.ndarray
    boundaries: np.ndarray
    nrows: int

    @property
    def nprocs(self):
        return self.owner_ptr.size - 1

    @property
    def ncols(self):
        return int(self.boundaries[-1])

    def owned(self, r):
        """Slice of directory entries belonging to process r."""
        return slice(int(self.owner_ptr[r]), int(self.owner_ptr[r + 1]))

    def locate(self, cols):
        """Directory positions of the given (non-empty) global columns."""
        pos = np.searchsorted(self.col_ids, cols)
        if np.any(pos >= self.col_ids.size) or np.any(self.col_ids[pos] != cols):
            raise InternalError("column is not in the directory")
        return pos


def expose_windows(slices, epoch=None):
    """Expose every slice A_i and build the replicated column directory.

    ``slices`` are the per-process column slices in process order; global
    column ids follow from their widths.
    """
    if not slices:
        raise ConfigError("need at least one process")
    m = slices[0].nrows
    if any(s.nrows != m for s in slices):
        raise ShapeError("all slices of A must have the same number of rows")
    epoch = epoch or Epoch()
    widths = np.array([s.ncols for s in slices], dtype=INDEX)
    boundaries = np.concatenate([[0], np.cumsum(widths)]).astype(INDEX)
    windows, ids, nnz, offs, owners = [], [], [], [], []
    for r, s in enumerate(slices):
        jc, cp = s.column_offsets()
        windows.append(WindowPair(r, s.indices, s.data, epoch))
        ids.append(jc + boundaries[r])
        nnz.append(np.diff(cp))
        offs.append(cp[:-1])
        owners.append(np.full(jc.size, r, dtype=INDEX))
    counts = np.array([x.size for x in ids], dtype=INDEX)
    directory = ColumnDirectory(
        col_ids=np.concatenate(ids).astype(INDEX),
        col_nnz=np.concatenate(nnz).astype(INDEX),
        offsets=np.concatenate(offs).astype(INDEX),
        owners=np.concatenate(owners).astype(INDEX),
        owner_ptr=np.concatenate([[0], np.cumsum(counts)]).astype(INDEX),
        boundaries=boundaries,
        nrows=m,
    )
    return windows, directory


def build_hit_vector(B_i, k):
    """Dense boolean indicator of the non-empty rows of ``B_i``."""
    if B_i.nrows != k:
        raise ShapeError(f"B slice has {B_i.nrows} rows, expected {k}")
    hit = np.zeros(k, dtype=bool)
    hit[B_i.indices] = True
    return hit


def required_columns(hit, directory):
    """Non-empty global columns of A that are also hit rows of B_i."""
    ids = directory.col_ids
    return ids[hit[ids]]


@dataclass(frozen=True)
class FetchPlan:
    """Block reads planned against one remote process.

    ``intervals`` are inclusive ``(first, last)`` global column ids; the
    columns actually transferred are ``columns`` (the remote's non-empty
    columns inside the intervals).
    """

    owner: int
    blocks: int
    intervals: tuple
    columns: np.ndarray
    required: np.ndarray

    @property
    def M(self):
        return len(self.intervals)


def plan_block_fetch(required, remote_ids, blocks, owner=-1, coalesce=False):
    """Block fetching against one remote.

    The remote's sorted non-empty column ids are split into ``blocks``
    contiguous groups of near-equal count; every group holding at least one
    required column is read whole, one interval per chosen group. With
    ``coalesce`` runs of adjacent chosen groups become a single interval,
    which saves messages without changing the bytes read. Either way the
    plan has at most ``blocks`` intervals.
    """
    if blocks < 1:
        raise ConfigError(f"block count must be >= 1, got {blocks}")
    remote_ids = np.asarray(remote_ids, dtype=INDEX)
    required = np.asarray(required, dtype=INDEX)
    n = remote_ids.size
    if required.size and not np.all(np.isin(required, remote_ids)):
        raise InternalError("required columns must be non-empty columns of the remote")
    if n == 0 or required.size == 0:
        return FetchPlan(owner, blocks, (), remote_ids[:0], required)

    ngroups = min(blocks, n)
    base, extra = divmod(n, ngroups)
    sizes = np.full(ngroups, base, dtype=INDEX)
    sizes[:extra] += 1
    starts = np.concatenate([[0], np.cumsum(sizes)])
    hit = np.zeros(n, dtype=bool)
    hit[np.searchsorted(remote_ids, required)] = True
    chosen = np.logical_or.reduceat(hit, starts[:-1])

    intervals = []
    cols = []
    g = 0
    while g < ngroups:
        if not chosen[g]:
            g += 1
            continue
        h = g
        while coalesce and h + 1 < ngroups and chosen[h + 1]:
            h += 1
        lo, hi = starts[g], starts[h + 1]
        intervals.append((int(remote_ids[lo]), int(remote_ids[hi - 1])))
        cols.append(remote_ids[lo:hi])
        g = h + 1
    return FetchPlan(owner, blocks, tuple(intervals), np.concatenate(cols), required)


def _naive_plan(remote_ids, blocks, owner):
    remote_ids = np.asarray(remote_ids, dtype=INDEX)
    if remote_ids.size == 0:
        return FetchPlan(owner, blocks, (), remote_ids, remote_ids)
    return FetchPlan(owner, blocks, ((int(remote_ids[0]), int(remote_ids[-1])),),
                     remote_ids, remote_ids)


@dataclass
class ProcessMetrics:
    """Counters for one logical process. Bytes and messages cover remote reads only."""

    rank: int
    bytes_fetched: int = 0
    bytes_required: int = 0
    messages: int = 0
    intervals: int = 0
    flops: int = 0
    local_columns: int = 0
    required_columns: int = 0
    fetched_columns: int = 0
    intervals_per_remote: list = field(default_factory=list)
    phase_times: dict = field(default_factory=lambda: {
        "communication": 0.0, "computation": 0.0, "other": 0.0})

    def to_dict(self, timings=True):
        d = {
            "rank": self.rank,
            "bytes_fetched": self.bytes_fetched,
            "bytes_required": self.bytes_required,
            "messages": self.messages,
            "intervals": self.intervals,
            "flops": self.flops,
            "local_columns": self.local_columns,
            "required_columns": self.required_columns,
            "fetched_columns": self.fetched_columns,
            "intervals_per_remote": list(self.intervals_per_remote),
        }
        if timings:
            d["phase_times"] = dict(self.phase_times)
        return d


def cv_ratio(bytes_fetched, mem_a, nprocs):
    """Remote volume over the remote data available to all processes.

    Equals 1.0 exactly when every process reads all of A it does not own
    and 0.0 when no process reads anything.
    """
    denom = (nprocs - 1) * mem_a
    return float(sum(bytes_fetched) / denom) if denom > 0 else 0.0


@dataclass
class RunMetrics:
    processes: list
    mem_a_bytes: int
    config: dict = field(default_factory=dict)

    @property
    def nprocs(self):
        return len(self.processes)

    @property
    def bytes_fetched(self):
        return sum(p.bytes_fetched for p in self.processes)

    @property
    def messages(self):
        return sum(p.messages for p in self.processes)

    @property
    def intervals(self):
        return sum(p.intervals for p in self.processes)

    @property
    def flops(self):
        return sum(p.flops for p in self.processes)

    @property
    def cv_over_memA(self):
        return cv_ratio([p.bytes_fetched for p in self.processes], self.mem_a_bytes,
                        self.nprocs)

    def to_dict(self, timings=True):
        return {
            "config": dict(self.config),
            "aggregate": {
                "nprocs": self.nprocs,
                "bytes_fetched": self.bytes_fetched,
                "bytes_required": sum(p.bytes_required for p in self.processes),
                "messages": self.messages,
                "intervals": self.intervals,
                "flops": self.flops,
                "required_columns": sum(p.required_columns for p in self.processes),
                "fetched_columns": sum(p.fetched_columns for p in self.processes),
                "mem_a_bytes": self.mem_a_bytes,
                "cv_over_memA": self.cv_over_memA,
            },
            "processes": [p.to_dict(timings) for p in self.processes],
        }

    def to_json(self, timings=True, **kw):
        kw.setdefault("indent", 2)
        return json.dumps(self.to_dict(timings), **kw)


def _gather(window, offsets, counts):
    total = int(counts.sum())
    if total == 0:
        return window.rows[:0], window.values[:0]
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    take = np.repeat(offsets - starts, counts) + np.arange(total, dtype=INDEX)
    lo, hi = int(take.min()), int(take.max()) + 1
    rows, vals = window.get(lo, hi)
    return rows[take - lo], vals[take - lo]


def fetch_and_assemble(rank, plans, windows, directory, local_required, metrics=None):
    """Read the planned blocks and build the local operand Ã as DCSC.

    Ã is ``m x k`` with global column ids and holds the required local
    columns (referenced directly, not counted as traffic) plus every column
    covered by the plans.
    """
    m, k = directory.nrows, directory.ncols
    cols, pieces_r, pieces_v, counts = [], [], [], []
    by_owner = {p.owner: p for p in plans}
    for r in range(directory.nprocs):
        if r == rank:
            if local_required.size == 0:
                continue
            pos = directory.locate(local_required)
            rows, vals = _gather(windows[r], directory.offsets[pos], directory.col_nnz[pos])
            cols.append(local_required)
            counts.append(directory.col_nnz[pos])
            pieces_r.append(rows)
            pieces_v.append(vals)
            continue
        plan = by_owner.get(r)
        if plan is None:
            continue
        own = directory.owned(r)
        ids = directory.col_ids[own]
        for first, last in plan.intervals:
            a = np.searchsorted(ids, first)
            b = np.searchsorted(ids, last, side="right")
            if a >= b or ids[a] != first or ids[b - 1] != last:
                raise InternalError(f"interval ({first}, {last}) not in directory of {r}")
            d0 = own.start + a
            lo = int(directory.offsets[d0])
            hi = int(directory.offsets[own.start + b - 1] + directory.col_nnz[own.start + b - 1])
            rows, vals = windows[r].get(lo, hi)
            pieces_r.append(rows)
            pieces_v.append(vals)
            cols.append(ids[a:b])
            counts.append(directory.col_nnz[d0:own.start + b])
            if metrics is not None:
                metrics.bytes_fetched += (hi - lo) * ENTRY_BYTES
                metrics.messages += 2
                metrics.intervals += 1
    if cols:
        jc = np.concatenate(cols).astype(INDEX)
        cnt = np.concatenate(counts).astype(INDEX)
        rows = np.concatenate(pieces_r)
        vals = np.concatenate(pieces_v)
    else:
        jc = np.zeros(0, dtype=INDEX)
        cnt = np.zeros(0, dtype=INDEX)
        rows = windows[rank].rows[:0]
        vals = windows[rank].values[:0]
    cp = np.concatenate([[0], np.cumsum(cnt)]).astype(INDEX)
    if np.any(np.diff(jc) <= 0):
        raise InternalError("assembled columns out of order")
    return SparseMatrix((m, k), rows, vals, jc=jc, cp=cp)


@dataclass
class _ProcState:
    rank: int
    B: SparseMatrix
    metrics: ProcessMetrics
    local_required: np.ndarray = None
    plans: list = None
    A_tilde: SparseMatrix = None
    C: SparseMatrix = None


def _plan(state, directory, blocks, naive, coalesce=False):
    t0 = time.perf_counter()
    r0 = state.rank
    hit = build_hit_vector(state.B, directory.ncols)
    req = required_columns(hit, directory)
    owners = directory.owner_ptr
    P = directory.nprocs
    mt = state.metrics
    # required ids are sorted and owners hold contiguous id ranges
    split = np.searchsorted(req, directory.boundaries)
    plans = []
    per_remote = [0] * P
    for r in range(P):
        mine = req[split[r]:split[r + 1]]
        if r == r0:
            state.local_required = mine
            mt.local_columns = int(mine.size)
            continue
        remote_ids = directory.col_ids[owners[r]:owners[r + 1]]
        plan = (_naive_plan(remote_ids, blocks, r) if naive
                else plan_block_fetch(mine, remote_ids, blocks, r, coalesce))
        plans.append(plan)
        per_remote[r] = plan.M
        mt.required_columns += int(mine.size)
        mt.fetched_columns += int(plan.columns.size)
        if mine.size:
            pos = directory.locate(mine)
            mt.bytes_required += int(directory.col_nnz[pos].sum()) * ENTRY_BYTES
    state.plans = plans
    mt.intervals_per_remote = per_remote
    mt.phase_times["other"] += time.perf_counter() - t0


def _fetch(state, windows, directory):
    t0 = time.perf_counter()
    state.A_tilde = fetch_and_assemble(state.rank, state.plans, windows, directory,
                                       state.local_required, state.metrics)
    state.metrics.phase_times["communication"] += time.perf_counter() - t0


def _compute(state, semiring, accumulator, mask, complement=True):
    t0 = time.perf_counter()
    fl = estimate_flops(state.A_tilde, state.B)
    state.metrics.flops = fl.total
    state.C = spgemm_local(state.A_tilde, state.B, semiring, accumulator, _mask=mask,
                           _mask_complement=complement, _flops=fl.per_column)
    state.metrics.phase_times["computation"] += time.perf_counter() - t0


def _run_phase(pool, fn, states, *args):
    if pool is None:
        for s in states:
            fn(s, *args)
    else:
        # list() waits for every process: the barrier between phases
        list(pool.map(lambda s: fn(s, *args), states))


def execute(A_slices, B_slices, blocks=DEFAULT_BLOCKS, semiring=None, *, workers=None,
            naive=False, accumulator="hybrid", masks=None, mask_complement=True,
            coalesce=False):
    """Run the distributed multiply on already-distributed operands.

    Returns the local results C_i (``m x n_i``) and the run's metrics.
    Logical processes are scheduled on up to ``workers`` threads; the result
    does not depend on that number.
    """
    P = len(A_slices)
    if len(B_slices) != P:
        raise ConfigError(f"A has {P} slices but B has {len(B_slices)}")
    if blocks < 1:
        raise ConfigError(f"block count must be >= 1, got {blocks}")
    k = sum(s.ncols for s in A_slices)
    if any(b.nrows != k for b in B_slices):
        raise ConfigError("every B slice must have as many rows as A has columns")
    if semiring is None:
        semiring = infer_semiring(A_slices[0].data)

    epoch = Epoch()
    t0 = time.perf_counter()
    windows, directory = expose_windows(A_slices, epoch)
    t_expose = (time.perf_counter() - t0) / P
    states = [_ProcState(i, B_slices[i], ProcessMetrics(i)) for i in range(P)]
    for s in states:
        s.metrics.phase_times["other"] += t_expose

    nworkers = 1 if workers is None else max(1, min(int(workers), P))
    pool = ThreadPoolExecutor(nworkers) if nworkers > 1 else None
    try:
        _run_phase(pool, _plan, states, directory, blocks, naive, coalesce)
        epoch.open = True
        _run_phase(pool, _fetch, states, windows, directory)
        epoch.open = False
        if masks is None:
            _run_phase(pool, _compute, states, semiring, accumulator, None)
        else:
            _run_phase(pool, lambda s: _compute(s, semiring, accumulator, masks[s.rank],
                                                mask_complement), states)
    finally:
        if pool is not None:
            pool.shutdown()
    mem_a = sum(s.nnz for s in A_slices) * ENTRY_BYTES
    return [s.C for s in states], RunMetrics([s.metrics for s in states], mem_a)


def hstack(blocks, mode=DCSC):
    """Concatenate column blocks with equal row counts."""
    m = blocks[0].nrows
    ptrs, idx, vals, base = [np.zeros(1, dtype=INDEX)], [], [], 0
    for b in blocks:
        if b.nrows != m:
            raise ShapeError("blocks must have equal row counts")
        p = b.colptr()
        ptrs.append(p[1:] + base)
        base += b.nnz
        idx.append(b.indices)
        vals.append(b.data)
    n = sum(b.ncols for b in blocks)
    C = SparseMatrix((m, n), np.concatenate(idx), np.concatenate(vals),
                     indptr=np.concatenate(ptrs))
    return C.asmode(mode)


@dataclass
class SpgemmResult:
    """Product of a distributed multiply.

    ``matrix`` is the gathered product in the caller's labelling; ``local``
    are the per-process column blocks in the permuted labelling the run used,
    distributed by ``out_dist``.
    """

    matrix: SparseMatrix
    local: list
    layout: Layout
    out_dist: Distribution1D
    metrics: RunMetrics


def resolve_layout(A, procs, strategy):
    k = A.ncols
    dist = procs if isinstance(procs, Distribution1D) else None
    nprocs = dist.nprocs if dist is not None else int(procs)
    if nprocs < 1:
        raise ConfigError(f"process count must be >= 1, got {nprocs}")
    if dist is not None and dist.n != k:
        raise ConfigError(f"distribution covers {dist.n} columns but A has {k}")
    if isinstance(strategy, Layout):
        layout = strategy
        if layout.perm.size != k or layout.dist.n != k:
            raise ConfigError("layout does not match A's column count")
        if layout.dist.nprocs != nprocs:
            raise ConfigError("layout process count differs from the requested one")
    else:
        layout = strategy_to_permutation(A, strategy, nprocs)
    if dist is not None and dist != layout.dist:
        if getattr(strategy, "kind", None) == "partition" or isinstance(strategy, Layout):
            raise ConfigError(f"distribution {dist} disagrees with the strategy's "
                              f"{layout.dist}")
        layout = Layout(layout.perm, dist)
    return layout


def _prepare(A, B, procs, strategy, out_dist):
    if A.ncols != B.nrows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    layout = resolve_layout(A, procs, strategy)
    m, k = A.shape
    n = B.ncols
    q = None if layout.perm.is_identity() else layout.perm
    row_q = q if m == k else None
    col_q = q if n == k else None
    Ap = permute(A, row_q, q) if q is not None else A
    Bp = permute(B, q, col_q) if q is not None else B
    P = layout.dist.nprocs
    if n == k:
        bdist = layout.dist
        if out_dist is not None and out_dist != bdist:
            raise ConfigError("square B is distributed like A's columns")
    elif out_dist is not None:
        if out_dist.nprocs != P or out_dist.n != n:
            raise ConfigError(f"output distribution {out_dist} does not fit "
                              f"{n} columns over {P} processes")
        bdist = out_dist
    else:
        bdist = distribute_even(n, P)
    A_slices = [Ap.column_block(*layout.dist.range(i)).to_dcsc() for i in range(P)]
    B_slices = [Bp.column_block(*bdist.range(i)) for i in range(P)]
    return layout, bdist, A_slices, B_slices, row_q, col_q


def _finish(C_local, layout, bdist, metrics, row_q, col_q, shape):
    Cp = hstack(C_local) if C_local else SparseMatrix(shape, [], [], indptr=[0])
    if row_q is not None or col_q is not None:
        C = permute(Cp, row_q.inverse() if row_q is not None else None,
                    col_q.inverse() if col_q is not None else None)
    else:
        C = Cp
    return SpgemmResult(C, C_local, layout, bdist, metrics)


def _config(strategy, blocks, semiring, P, naive, accumulator, coalesce=False):
    sname = "layout" if isinstance(strategy, Layout) else Strategy.parse(strategy).describe()
    return {"algorithm": "naive" if naive else "sparsity-aware", "nprocs": P,
            "blocks": blocks, "coalesce": bool(coalesce), "strategy": sname,
            "semiring": getattr(semiring, "name", None), "accumulator": accumulator}


def _run(A, B, procs, strategy, blocks, semiring, workers, accumulator, out_dist,
         mask, naive, mask_complement=True, coalesce=False):
    layout, bdist, A_slices, B_slices, row_q, col_q = _prepare(A, B, procs, strategy,
                                                               out_dist)
    if semiring is None:
        semiring = infer_semiring(A.data)
    masks = None
    if mask is not None:
        if mask.shape != (A.nrows, B.ncols):
            raise ShapeError("mask must have the shape of the product")
        Mp = permute(mask, row_q, col_q) if (row_q is not None or col_q is not None) else mask
        masks = [Mp.column_block(*bdist.range(i)) for i in range(bdist.nprocs)]
    C_local, metrics = execute(A_slices, B_slices, blocks, semiring, workers=workers,
                               naive=naive, accumulator=accumulator, masks=masks,
                               mask_complement=mask_complement, coalesce=coalesce)
    metrics.config = _config(strategy, blocks, semiring, layout.dist.nprocs, naive,
                             accumulator, coalesce)
    return _finish(C_local, layout, bdist, metrics, row_q, col_q, (A.nrows, B.ncols))


def spgemm_1d(A, B, procs, strategy="identity", blocks=DEFAULT_BLOCKS, semiring=None, *,
              workers=None, accumulator="hybrid", out_dist=None, coalesce=False,
              _mask=None, _mask_complement=True):
    """Sparsity-aware 1D multiply ``C = A B`` over ``procs`` logical processes.

    Parameters
    ----------
    A, B : SparseMatrix
    procs : int or Distribution1D
        Process count, or an explicit distribution of A's columns.
    strategy : str, Strategy or Layout
        Relabelling of the inner dimension before distribution
        (``identity``, ``random:SEED``, a partition Strategy, or a resolved
        Layout). Square operands are permuted symmetrically and the product
        is mapped back, so ``matrix`` is always in the input labelling.
    blocks : int
        Maximum block reads per remote process (K).
    workers : int, optional
        Threads used to run the logical processes.
    out_dist : Distribution1D, optional
        Column distribution of B and C when B is not square (even by default).
    coalesce : bool
        Merge adjacent chosen blocks into one read (fewer messages, same bytes).
    """
    return _run(A, B, procs, strategy, blocks, semiring, workers, accumulator, out_dist,
                _mask, naive=False, mask_complement=_mask_complement, coalesce=coalesce)


def spgemm_1d_naive(A, B, procs, strategy="identity", semiring=None, *, workers=None,
                    accumulator="hybrid", out_dist=None):
    """Baseline: every process reads every remote column of A in one block."""
    return _run(A, B, procs, strategy, DEFAULT_BLOCKS, semiring, workers, accumulator,
                out_dist, None, naive=True)


@dataclass
class CvReport:
    ratio: float
    threshold: float
    bytes_fetched: list
    mem_a_bytes: int
    metrics: RunMetrics

    @property
    def advisory(self):
        return self.ratio > self.threshold

    def message(self):
        if self.advisory:
            return (f"CV/memA = {self.ratio:.3f} exceeds {self.threshold:.2f}; "
                    "consider graph partitioning before multiplying")
        return f"CV/memA = {self.ratio:.3f} (threshold {self.threshold:.2f})"

    def to_dict(self):
        return {"cv_over_memA": self.ratio, "threshold": self.threshold,
                "advisory": self.advisory, "mem_a_bytes": self.mem_a_bytes,
                "bytes_fetched": list(self.bytes_fetched)}


def analyze_cv(A, B, procs, strategy="identity", blocks=DEFAULT_BLOCKS,
               threshold=DEFAULT_CV_THRESHOLD, *, out_dist=None, coalesce=False):
    """Planned communication volume relative to the size of A, without
    fetching or multiplying."""
    if not 0 < threshold <= 1:
        raise ConfigError(f"threshold must lie in (0, 1], got {threshold}")
    if blocks < 1:
        raise ConfigError(f"block count must be >= 1, got {blocks}")
    layout, bdist, A_slices, B_slices, _, _ = _prepare(A, B, procs, strategy, out_dist)
    _, directory = expose_windows(A_slices)
    P = len(A_slices)
    states = [_ProcState(i, B_slices[i], ProcessMetrics(i)) for i in range(P)]
    for s in states:
        _plan(s, directory, blocks, naive=False, coalesce=coalesce)
        for plan in s.plans:
            if plan.columns.size:
                pos = directory.locate(plan.columns)
                s.metrics.bytes_fetched += int(directory.col_nnz[pos].sum()) * ENTRY_BYTES
            s.metrics.intervals += plan.M
            s.metrics.messages += 2 * plan.M
    mem_a = A.nnz * ENTRY_BYTES
    metrics = RunMetrics([s.metrics for s in states], mem_a,
                         _config(strategy, blocks, None, P, False, None, coalesce))
    fetched = [s.metrics.bytes_fetched for s in states]
    return CvReport(cv_ratio(fetched, mem_a, P), threshold, fetched, mem_a, metrics)
