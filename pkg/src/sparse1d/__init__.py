"""Sparsity-aware 1D distributed SpGEMM on simulated processes.

The distributed algorithm runs P logical processes in one Python process;
remote reads go through counted, read-only windows so communication volume
and message counts are exact and deterministic.
"""
__version__ = "0.1.0"

from .apps import (BcScores, RestrictionOperator, RuntimeConfig, bc_approx, bc_batch,
                   galerkin, mis2_aggregate, outer_product_1d, square)
from .core import (CSC, DCSC, Permutation, SparseMatrix, from_coo, from_dense,
                   from_triplets, identity, permute, permute_symmetric, prune_zeros,
                   transpose)
from .errors import ConfigError, InternalError, ParseError, ShapeError
from .layout import (Distribution1D, Strategy, compute_vertex_weights, distribute_even,
                     greedy_partition, read_partition_vector, slice_local,
                     strategy_to_permutation, write_partition_vector)
from .local import estimate_flops, spgemm_local
from .mmio import read_matrix_market, write_matrix_market
from .runtime import (DEFAULT_BLOCKS, RunMetrics, analyze_cv, build_hit_vector,
                      expose_windows, fetch_and_assemble, plan_block_fetch,
                      required_columns, spgemm_1d, spgemm_1d_naive)
from .semiring import BOOLEAN, INTEGER, REAL, Semiring, get_semiring


__all__ = [
    "__version__",
    "BcScores",
    "RestrictionOperator",
    "RuntimeConfig",
    "bc_approx",
    "bc_batch",
    "galerkin",
    "mis2_aggregate",
    "outer_product_1d",
    "square",
    "CSC",
    "DCSC",
    "Permutation",
    "SparseMatrix",
    "from_coo",
    "from_dense",
    "from_triplets",
    "identity",
    "permute",
    "permute_symmetric",
    "prune_zeros",
    "transpose",
    "ConfigError",
    "InternalError",
    "ParseError",
    "ShapeError",
    "Distribution1D",
    "Strategy",
    "compute_vertex_weights",
    "distribute_even",
    "greedy_partition",
    "read_partition_vector",
    "slice_local",
    "strategy_to_permutation",
    "write_partition_vector",
    "estimate_flops",
    "spgemm_local",
    "read_matrix_market",
    "write_matrix_market",
    "DEFAULT_BLOCKS",
    "RunMetrics",
    "analyze_cv",
    "build_hit_vector",
    "expose_windows",
    "fetch_and_assemble",
    "plan_block_fetch",
    "required_columns",
    "spgemm_1d",
    "spgemm_1d_naive",
    "BOOLEAN",
    "INTEGER",
    "REAL",
    "Semiring",
    "get_semiring",
]
