import networkx as nx
import numpy as np
import pytest

from sparse1d import (ConfigError, RuntimeConfig, ShapeError, bc_approx, bc_batch,
                      from_coo, from_triplets, galerkin, identity,
                      mis2_aggregate, outer_product_1d, spgemm_local, square, transpose)
from sparse1d.layout import Distribution1D
from sparse1d.semiring import INTEGER, REAL

from oracles import (adjacency_lists, assert_matches_product, bfs_distances, brandes,
                     check_mis2, dense_values, random_connected_graph, random_sparse,
                     random_symmetric)


def path(n, semiring=REAL):
    e = [(i, i + 1, semiring.one) for i in range(n - 1)]
    return from_triplets(n, n, e + [(j, i, v) for i, j, v in e], semiring=semiring)


def star(leaves):
    e = [(0, i, 1.0) for i in range(1, leaves + 1)]
    return from_triplets(leaves + 1, leaves + 1, e + [(j, i, v) for i, j, v in e])


CONFIGS = [RuntimeConfig(1), RuntimeConfig(3, blocks=2), RuntimeConfig(4, 8, "random:5")]


# -- squaring -------------------------------------------------------------------------

def test_square_permutation_matrix():
    perm = np.random.default_rng(0).permutation(12)
    Pm = from_coo(12, 12, perm, np.arange(12), 1.0)
    S = square(Pm, RuntimeConfig(3)).matrix
    assert S.nnz == 12
    D = S.todense()
    assert np.all(D.sum(axis=0) == 1) and np.all(D.sum(axis=1) == 1)
    np.testing.assert_array_equal(D, Pm.todense() @ Pm.todense())


def test_square_path_walks():
    A = path(4, INTEGER)
    C = square(A, RuntimeConfig(2, blocks=1), INTEGER).matrix
    D = C.todense()
    assert D[0, 2] == 1
    assert D[1, 1] == 2
    np.testing.assert_array_equal(D, [[1, 0, 1, 0], [0, 2, 0, 1], [1, 0, 2, 0],
                                      [0, 1, 0, 1]])


@pytest.mark.parametrize("cfg", CONFIGS)
def test_square_random_dense_oracle(cfg):
    A = random_sparse(np.random.default_rng(128), 128, 128, 0.03)
    res = square(A, cfg)
    assert_matches_product(res.matrix, A, A, REAL)


def test_square_rejects_rectangular():
    with pytest.raises(ShapeError):
        square(from_triplets(2, 3, []))


# -- MIS-2 ------------------------------------------------------------------------------

def test_mis2_no_edges():
    R = mis2_aggregate(identity(6))
    assert R.roots.tolist() == list(range(6))
    np.testing.assert_array_equal(R.matrix.todense(), np.eye(6))


def test_mis2_star():
    A = star(7)
    R = mis2_aggregate(A)
    assert R.naggregates == 1
    np.testing.assert_array_equal(R.matrix.todense(), np.ones((8, 1)))
    adj = adjacency_lists(A)
    assert check_mis2(adj, R.roots) == (True, True)
    # brute force: no root set of size two is distance-2 independent
    for u in range(8):
        for w in range(u + 1, 8):
            assert check_mis2(adj, [u, w])[0] is False


@pytest.mark.parametrize("seed", [None, 0, 1])
def test_mis2_random_sixty(seed):
    rng = np.random.default_rng(60)
    A = random_symmetric(rng, 60, 0.05)
    R = mis2_aggregate(A, seed=seed)
    adj = adjacency_lists(A)
    assert check_mis2(adj, R.roots) == (True, True)
    counts = R.matrix.row_counts()
    assert np.all(counts == 1) and np.all(R.matrix.data == 1.0)
    # nearest root, ties to the lowest root id
    dist = {int(r): bfs_distances(adj, int(r)) for r in R.roots}
    for v in range(60):
        best = min((d.get(v, 99), r) for r, d in dist.items())
        assert R.roots[R.aggregates[v]] == best[1]


def test_mis2_requires_symmetric_pattern():
    with pytest.raises(ShapeError):
        mis2_aggregate(from_triplets(3, 3, [(0, 1, 1.0)]))
    with pytest.raises(ShapeError):
        mis2_aggregate(from_triplets(2, 3, []))


def test_mis2_greedy_order():
    # path 0-1-2-3-4: endpoints have degree one, so 0 is taken first, which
    # blocks 1 and 2; 4 is next by degree and blocks 3
    R = mis2_aggregate(path(5))
    assert R.roots.tolist() == [0, 4]
    assert R.aggregates.tolist() == [0, 0, 0, 1, 1]


# -- Galerkin ---------------------------------------------------------------------------

def dense_galerkin(A, R):
    Rd = dense_values(R)
    return Rd.T @ dense_values(A) @ Rd


@pytest.mark.parametrize("mode", ["onedim", "outer_product_right"])
def test_galerkin_identity_restriction(mode):
    A = random_symmetric(np.random.default_rng(1), 30, 0.1)
    G = galerkin(A, identity(30), mode, RuntimeConfig(3)).matrix
    assert G == A


@pytest.mark.parametrize("mode", ["onedim", "outer_product_right"])
def test_galerkin_identity_operator(mode):
    A = random_symmetric(np.random.default_rng(2), 40, 0.1)
    R = mis2_aggregate(A)
    G = galerkin(identity(40), R, mode, RuntimeConfig(4)).matrix
    sizes = np.bincount(R.aggregates, minlength=R.naggregates)
    np.testing.assert_array_equal(G.todense(), np.diag(sizes.astype(float)))


@pytest.mark.parametrize("cfg", CONFIGS)
def test_galerkin_modes_agree_with_dense(cfg):
    A = random_symmetric(np.random.default_rng(100), 100, 0.05)
    R = mis2_aggregate(A)
    ref = dense_galerkin(A, R.matrix)
    one = galerkin(A, R, "onedim", cfg)
    outer = galerkin(A, R, "outer_product_right", cfg)
    for res in (one, outer):
        np.testing.assert_allclose(res.matrix.todense(), ref, rtol=1e-10, atol=1e-12)
    np.testing.assert_array_equal(one.matrix.coo()[0], outer.matrix.coo()[0])
    np.testing.assert_array_equal(one.matrix.coo()[1], outer.matrix.coo()[1])
    np.testing.assert_allclose(one.matrix.data, outer.matrix.data, rtol=1e-10)
    assert len(one.metrics) == 2


def test_galerkin_errors():
    A = identity(5)
    with pytest.raises(ShapeError):
        galerkin(A, identity(4))
    with pytest.raises(ShapeError):
        galerkin(from_triplets(5, 4, []), identity(5))
    with pytest.raises(ConfigError):
        galerkin(A, identity(5), "twodim")


# -- outer product ---------------------------------------------------------------------------

def test_outer_product_single_process():
    rng = np.random.default_rng(3)
    A = random_sparse(rng, 30, 20, 0.1)
    B = random_sparse(rng, 20, 25, 0.1)
    res = outer_product_1d(A, B, 1)
    assert res.matrix == spgemm_local(A, B)
    assert res.metrics.bytes_fetched == 0


def test_outer_product_rank_one():
    n = 9
    A = from_coo(n, n, np.zeros(n, dtype=int), np.arange(n), 1.0)  # e0 1^T
    B = from_coo(n, n, np.arange(n), np.zeros(n, dtype=int), 1.0)  # 1 e0^T
    res = outer_product_1d(A, B, 3)
    assert res.matrix.triplets() == [(0, 0, float(n))]
    # every process produced a partial for column 0, owned by process 0
    assert [p.bytes_fetched for p in res.metrics.processes][0] > 0


@pytest.mark.parametrize("P, strategy", [(2, "identity"), (5, "random:1"), (7, "identity")])
def test_outer_product_random(P, strategy):
    rng = np.random.default_rng(P)
    A = random_sparse(rng, 40, 60, 0.05, INTEGER)
    B = random_sparse(rng, 60, 35, 0.05, INTEGER)
    res = outer_product_1d(A, B, P, INTEGER, strategy=strategy)
    assert_matches_product(res.matrix, A, B, INTEGER)
    assert sum(c.ncols for c in res.local) == 35


def test_outer_product_shapes():
    with pytest.raises(ShapeError):
        outer_product_1d(identity(3), identity(4), 2)
    with pytest.raises(ConfigError):
        outer_product_1d(identity(4), identity(4), 2, out_dist=Distribution1D([0, 4]))


# -- betweenness centrality ----------------------------------------------------------------

def test_bc_single_source_path():
    res = bc_batch(path(3), [0])
    np.testing.assert_allclose(res.scores, [0.0, 1.0, 0.0])
    assert res.depth == 2


def test_bc_star_all_leaves():
    L = 6
    res = bc_batch(star(L), np.arange(1, L + 1), RuntimeConfig(3, blocks=2))
    # each leaf source routes its L-1 other leaves through the centre
    np.testing.assert_allclose(res.scores, [L * (L - 1)] + [0.0] * L)


@pytest.mark.parametrize("cfg", CONFIGS)
def test_bc_batch_matches_serial_brandes(cfg):
    rng = np.random.default_rng(64)
    G = random_connected_graph(rng, 64, 60)
    sources = np.sort(rng.choice(64, size=16, replace=False))
    res = bc_batch(G, sources, cfg)
    ref = brandes(adjacency_lists(G), sources.tolist())
    np.testing.assert_allclose(res.scores, ref, rtol=1e-8, atol=1e-8)
    assert np.all(np.isfinite(res.scores)) and np.all(res.scores >= 0)


def test_bc_exact_against_networkx():
    rng = np.random.default_rng(5)
    G = random_connected_graph(rng, 40, 50)
    res = bc_approx(G, 40, 16, seed=1, config=RuntimeConfig(2))
    nxg = nx.Graph(list(zip(*G.coo()[:2])))
    ref = nx.betweenness_centrality(nxg, normalized=False)
    np.testing.assert_allclose(res.scores, [2 * ref[v] for v in range(40)], atol=1e-8)


def test_bc_approx_zero_and_determinism():
    G = random_connected_graph(np.random.default_rng(6), 30, 20)
    assert np.all(bc_approx(G, 0).scores == 0)
    a = bc_approx(G, 10, 4, seed=3)
    b = bc_approx(G, 10, 4, seed=3)
    np.testing.assert_array_equal(a.scores, b.scores)
    np.testing.assert_array_equal(a.sources, b.sources)
    assert a.sources.size == 10 and np.unique(a.sources).size == 10


def test_bc_batch_split_invariance():
    G = random_connected_graph(np.random.default_rng(7), 25, 25)
    full = bc_approx(G, 25, 25).scores
    for bs in (1, 4, 16):
        np.testing.assert_allclose(bc_approx(G, 25, bs).scores, full, rtol=1e-8, atol=1e-8)


def test_bc_frontier_invariants():
    G = random_connected_graph(np.random.default_rng(8), 50, 40)
    cfg = RuntimeConfig(2)
    A = transpose(G)
    sources = np.arange(0, 50, 5)
    res = bc_batch(G, sources, cfg)
    # forward iterations: one per level plus the final empty expansion
    assert len(res.forward) == res.depth + 1
    assert len(res.backward) == res.depth
    # levels partition each source's reachable set: compare with BFS depths
    adj = adjacency_lists(A)
    assert res.depth == max(max(bfs_distances(adj, int(s)).values()) for s in sources)


def test_bc_ingestion_symmetrises_and_drops_loops():
    # directed edges plus a self loop become an undirected loop-free path
    G = from_triplets(3, 3, [(0, 1, 5.0), (2, 1, 1.0), (1, 1, 9.0)])
    np.testing.assert_allclose(bc_batch(G, [0, 1, 2]).scores, [0.0, 2.0, 0.0])


def test_bc_errors():
    G = path(4)
    with pytest.raises(IndexError):
        bc_batch(G, [4])
    with pytest.raises(ValueError):
        bc_batch(G, [1, 1])
    with pytest.raises(ValueError):
        bc_approx(G, 5)
    with pytest.raises(ShapeError):
        bc_batch(from_triplets(2, 3, []), [0])
