"""1D block-column layouts: distributions, permutation strategies, partitioning."""
from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import INDEX, Permutation, transpose
from .errors import ConfigError, ParseError, ShapeError

__all__ = [
    "Distribution1D",
    "Layout",
    "Strategy",
    "PartitionResult",
    "distribute_even",
    "strategy_to_permutation",
    "compute_vertex_weights",
    "greedy_partition",
    "slice_local",
    "read_partition_vector",
    "write_partition_vector",
    "is_pattern_symmetric",
    "symmetrize_pattern",
    "IMBALANCE_BOUND",
]

#: Target ratio of the heaviest part to the average in greedy_partition.
IMBALANCE_BOUND = 1.25


class Distribution1D:
    """Contiguous column ranges: process i owns ``[boundaries[i], boundaries[i+1])``."""

    __slots__ = ("boundaries",)

    def __init__(self, boundaries):
        b = np.asarray(boundaries, dtype=INDEX).ravel()
        if b.size < 2:
            raise ConfigError("a distribution needs at least one process")
        if b[0] != 0 or np.any(np.diff(b) < 0):
            raise ConfigError("boundaries must start at 0 and be non-decreasing")
        b = b.copy()
        b.flags.writeable = False
        self.boundaries = b

    @property
    def nprocs(self):
        return self.boundaries.size - 1

    @property
    def n(self):
        return int(self.boundaries[-1])

    def sizes(self):
        return np.diff(self.boundaries)

    def range(self, i):
        if not 0 <= i < self.nprocs:
            raise IndexError(f"process {i} out of range for P={self.nprocs}")
        return int(self.boundaries[i]), int(self.boundaries[i + 1])

    def owner(self, cols):
        """Owning process of each global column id."""
        return np.searchsorted(self.boundaries, cols, side="right") - 1

    def __eq__(self, other):
        return (isinstance(other, Distribution1D)
                and np.array_equal(self.boundaries, other.boundaries))

    __hash__ = None

    def __repr__(self):
        return f"Distribution1D({self.boundaries.tolist()})"


def distribute_even(n, nprocs):
    """Split ``n`` columns into ``nprocs`` blocks whose sizes differ by at most
    one; the leading blocks take the remainder.

    >>> distribute_even(5, 2).boundaries.tolist()
    [0, 3, 5]
    """
    if nprocs < 1:
        raise ConfigError(f"process count must be >= 1, got {nprocs}")
    base, extra = divmod(int(n), int(nprocs))
    sizes = np.full(nprocs, base, dtype=INDEX)
    sizes[:extra] += 1
    return Distribution1D(np.concatenate([[0], np.cumsum(sizes)]))


@dataclass(frozen=True)
class Strategy:
    """How columns are relabelled before distribution.

    ``kind`` is ``identity``, ``random`` (uses ``seed``) or ``partition``
    (uses ``parts``, a part id per column).
    """

    kind: str = "identity"
    seed: int = 0
    parts: tuple = None
    symmetrize: bool = False

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def random(cls, seed=0):
        return cls("random", seed=int(seed))

    @classmethod
    def partition(cls, parts, symmetrize=False):
        return cls("partition", parts=tuple(int(p) for p in parts), symmetrize=symmetrize)

    @classmethod
    def parse(cls, text, symmetrize=False):
        """Parse ``identity``, ``random:SEED`` or ``partition:PATH``."""
        if isinstance(text, Strategy):
            return text
        name, _, arg = str(text).partition(":")
        if name == "identity" and not arg:
            return cls.identity()
        if name == "random":
            try:
                return cls.random(int(arg) if arg else 0)
            except ValueError:
                raise ConfigError(f"bad random seed in strategy {text!r}") from None
        if name == "partition" and arg:
            return cls.partition(read_partition_vector(arg), symmetrize=symmetrize)
        raise ConfigError(
            f"unknown strategy {text!r}; expected identity, random:SEED or partition:PATH")

    def describe(self):
        if self.kind == "random":
            return f"random:{self.seed}"
        if self.kind == "partition":
            return f"partition[{len(self.parts)}]"
        return self.kind


@dataclass(frozen=True)
class Layout:
    """A resolved strategy: relabelling of the inner dimension plus its distribution."""

    perm: Permutation
    dist: Distribution1D


def is_pattern_symmetric(A):
    if A.nrows != A.ncols:
        return False
    return transpose(A.pattern()) == A.pattern()


def symmetrize_pattern(A):
    """Boolean pattern of ``A + A^T``."""
    from .core import from_coo

    rows, cols, _ = A.coo()
    return from_coo(A.nrows, A.ncols, np.concatenate([rows, cols]),
                    np.concatenate([cols, rows]), True, mode=A.mode)


def strategy_to_permutation(A, strategy, nprocs):
    """Resolve ``strategy`` for the columns of ``A`` over ``nprocs`` processes.

    * identity: identity permutation, even blocks
    * random: seeded uniform permutation, even blocks
    * partition: the columns of each part are grouped contiguously (stable
      within a part) in part order; boundaries follow the part sizes
    """
    strategy = Strategy.parse(strategy)
    n = A.ncols
    if nprocs < 1:
        raise ConfigError(f"process count must be >= 1, got {nprocs}")
    if strategy.kind == "identity":
        return Layout(Permutation.identity(n), distribute_even(n, nprocs))
    if strategy.kind == "random":
        rng = np.random.default_rng(strategy.seed)
        return Layout(Permutation(rng.permutation(n)), distribute_even(n, nprocs))
    if strategy.kind != "partition":
        raise ConfigError(f"unknown strategy kind {strategy.kind!r}")

    if A.nrows != A.ncols:
        raise ShapeError("graph partitioning needs a square matrix")
    if not strategy.symmetrize and not is_pattern_symmetric(A):
        raise ShapeError("partition strategy needs a pattern-symmetric matrix; "
                         "pass symmetrize=True to partition the pattern of A + A^T")
    parts = np.asarray(strategy.parts, dtype=INDEX)
    if parts.size != n:
        raise ShapeError(f"partition vector has {parts.size} entries for {n} columns")
    if parts.size and (parts.min() < 0 or parts.max() >= nprocs):
        raise ConfigError(f"part ids must lie in 0..{nprocs - 1}")
    sizes = np.bincount(parts, minlength=nprocs)
    if n >= nprocs and np.count_nonzero(sizes) != nprocs:
        raise ConfigError(f"partition vector uses {np.count_nonzero(sizes)} parts, "
                          f"expected {nprocs}")
    order = np.argsort(parts, kind="stable")
    forward = np.empty(n, dtype=INDEX)
    forward[order] = np.arange(n, dtype=INDEX)
    return Layout(Permutation(forward),
                  Distribution1D(np.concatenate([[0], np.cumsum(sizes)])))


def compute_vertex_weights(A):
    """Squared column counts, an estimate of the flops a column induces when
    squaring a symmetric matrix."""
    counts = A.col_counts().astype(INDEX)
    return counts * counts


@dataclass(frozen=True)
class PartitionResult:
    parts: np.ndarray
    part_weights: np.ndarray
    imbalance: float
    bound: float
    cut_edges: int
    method: str

    @property
    def balanced(self):
        return self.imbalance <= self.bound


def _adjacency(S):
    ptr = S.colptr()
    return ptr, S.indices


def _cut_edges(ptr, idx, parts):
    cols = np.repeat(np.arange(ptr.size - 1), np.diff(ptr))
    off = idx != cols
    return int(np.count_nonzero(parts[idx[off]] != parts[cols[off]]) // 2)


def greedy_partition(A, nprocs, weights=None):
    """Split the vertices of ``A``'s graph into ``nprocs`` weighted parts.

    Parts are grown one at a time by BFS from the lowest-numbered unassigned
    vertex until they reach the average weight; when a cluster runs out the
    next one starts from the next unassigned vertex. Imbalance is reported in
    the result, never corrected by splitting clusters. Graphs without edges
    (or with zero total weight) use a weighted round-robin instead.
    """
    if nprocs < 1:
        raise ConfigError(f"process count must be >= 1, got {nprocs}")
    if A.nrows != A.ncols:
        raise ShapeError("greedy_partition needs a square matrix")
    n = A.ncols
    S = symmetrize_pattern(A)
    ptr, idx = _adjacency(S)
    if weights is None:
        weights = compute_vertex_weights(A)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,) or np.any(w < 0):
        raise ValueError("weights must be one non-negative value per column")
    total = w.sum()
    has_edges = bool(np.any(S.indices != np.repeat(np.arange(n), S.col_counts())))

    parts = np.full(n, -1, dtype=INDEX)
    if not has_edges or total == 0:
        method = "round-robin"
        ww = w if total > 0 else np.ones(n)
        load = np.zeros(nprocs)
        for v in np.argsort(-ww, kind="stable"):
            p = int(np.argmin(load))
            parts[v] = p
            load[p] += ww[v]
    else:
        method = "bfs"
        target = total / nprocs
        part, part_w, remaining = 0, 0.0, n
        seen = np.zeros(n, dtype=bool)
        next_start = 0
        queue = deque()
        while remaining:
            if not queue:
                while seen[next_start]:
                    next_start += 1
                seen[next_start] = True
                queue.append(next_start)
            v = queue.popleft()
            parts[v] = part
            part_w += w[v]
            remaining -= 1
            for u in idx[ptr[v]:ptr[v + 1]]:
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
            parts_left = nprocs - part - 1
            if parts_left and (part_w >= target or remaining == parts_left):
                part += 1
                part_w = 0.0
                # queued vertices go back to the pool; the next part starts fresh
                for u in queue:
                    seen[u] = False
                queue.clear()
                next_start = 0

    part_weights = np.bincount(parts, weights=w, minlength=nprocs)
    avg = total / nprocs
    imbalance = float(part_weights.max() / avg) if avg > 0 else 1.0
    return PartitionResult(parts, part_weights, imbalance, IMBALANCE_BOUND,
                           _cut_edges(ptr, idx, parts), method)


def slice_local(A, dist, i):
    """Columns owned by process ``i``, renumbered from 0."""
    if dist.n != A.ncols:
        raise ShapeError(f"distribution covers {dist.n} columns, matrix has {A.ncols}")
    lo, hi = dist.range(i)
    return A.column_block(lo, hi)


def read_partition_vector(path, n=None):
    """One base-10 part id per line."""
    parts = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            try:
                p = int(s)
            except ValueError:
                raise ParseError(f"bad part id {s!r}", lineno) from None
            if p < 0:
                raise ParseError(f"negative part id {p}", lineno)
            parts.append(p)
    if n is not None and len(parts) != n:
        raise ParseError(f"partition file has {len(parts)} lines, expected {n}")
    return np.asarray(parts, dtype=INDEX)


def write_partition_vector(parts, path):
    with open(path, "w") as fh:
        for p in np.asarray(parts).tolist():
            fh.write(f"{p}\n")
