import pytest

from toruspotts.errors import InternalCheckError
from toruspotts.homotopy import (
    ClusterInfo,
    ConfigSummary,
    classify_cluster,
    find_clusters,
    hermite_basis,
    summarize_config,
)
from toruspotts.lattice import build_torus


def edge_mask(g, pred):
    mask = 0
    for i, e in enumerate(g.edges):
        if pred(e):
            mask |= 1 << i
    return mask


def test_empty_subset():
    g = build_torus("square", 3, 3, 1)
    clusters = find_clusters(g, 0)
    assert len(clusters) == 9
    assert all(c.basis == () for c in clusters)
    assert summarize_config(g, 0) == ConfigSummary(0, 9, 0, 0)


def test_full_subset_is_cross():
    g = build_torus("square", 3, 3, 1)
    full = (1 << g.n_edges) - 1
    clusters = find_clusters(g, full)
    assert len(clusters) == 1
    assert len(clusters[0].basis) == 2
    assert classify_cluster(clusters[0]).tag == "cross"
    s = summarize_config(g, full)
    assert (s.j, s.n1) == (1, 1)


def test_longitudinal_ring():
    g = build_torus("square", 3, 3, 1)
    # the row-0 longitudinal ring: edges (x,0) -> (x+1,0)
    mask = edge_mask(g, lambda e: (e.dx, e.dy) == (1, 0) and e.u % g.L == 0)
    clusters = find_clusters(g, mask)
    ring = [c for c in clusters if len(c.vertices) == 3][0]
    assert ring.basis == ((1, 0),)
    assert summarize_config(g, mask) == ConfigSummary(3, 7, 1, 1)


def test_transverse_ring_not_counted():
    g = build_torus("square", 3, 3, 1)
    mask = edge_mask(g, lambda e: (e.dx, e.dy) == (0, 1) and e.u // g.L == 0)
    clusters = find_clusters(g, mask)
    ring = [c for c in clusters if len(c.vertices) == 3][0]
    assert ring.basis == ((0, 1),)
    assert summarize_config(g, mask) == ConfigSummary(3, 7, 0, 0)


def test_classify():
    assert classify_cluster(ClusterInfo((0,), ())).tag == "trivial"
    w = classify_cluster(ClusterInfo((0,), ((2, 1),)))
    assert (w.tag, w.n1, w.n2) == ("wind", 2, 1)
    assert classify_cluster(ClusterInfo((0,), ((1, 0), (0, 1)))).tag == "cross"
    with pytest.raises(InternalCheckError):
        classify_cluster(ClusterInfo((0,), ((2, 0),)))


def test_hermite_basis():
    assert hermite_basis([]) == ()
    assert hermite_basis([(0, 0)]) == ()
    assert hermite_basis([(0, -1)]) == ((0, 1),)
    assert hermite_basis([(2, 1), (-2, -1)]) == ((2, 1),)
    assert hermite_basis([(1, 0), (0, 1)]) == ((1, 0), (0, 1))
    assert hermite_basis([(1, 1), (1, -1)]) == ((1, 1), (0, 2))


def test_root_order_invariance():
    g = build_torus("triangular", 2, 3, 1)
    nv = g.n_vertices
    for subset in (0b101010101010, 0b111000111000, (1 << g.n_edges) - 1, 12345):
        base = find_clusters(g, subset)
        base_map = {c.vertices: c.basis for c in base}
        for shift in range(1, nv):
            order = [(v + shift) % nv for v in range(nv)]
            rotated = {c.vertices: c.basis for c in find_clusters(g, subset, order)}
            assert rotated == base_map


def summarize_via_reference(g, subset):
    clusters = find_clusters(g, subset)
    j = 0
    n1 = 0
    for c in clusters:
        h = classify_cluster(c)
        if h.tag == "cross":
            j += 1
            n1 = 1
        elif h.tag == "wind" and h.n1 >= 1:
            j += 1
            n1 = h.n1
    bonds = bin(subset).count("1")
    return ConfigSummary(bonds, len(clusters), j, n1)


@pytest.mark.parametrize(
    "kind,L,N", [("square", 2, 2), ("triangular", 2, 2), ("square", 3, 2)]
)
def test_summarize_matches_reference_full_enumeration(kind, L, N):
    g = build_torus(kind, L, N, 1)
    for subset in range(1 << g.n_edges):
        assert summarize_config(g, subset) == summarize_via_reference(g, subset)


def test_invariants_small_graphs_full():
    # summarize_config raises on any planarity violation, so a clean pass
    # over every subset is the assertion
    for kind, L, N in (("square", 2, 3), ("triangular", 2, 2)):
        g = build_torus(kind, L, N, 1)
        for subset in range(1 << g.n_edges):
            s = summarize_config(g, subset)
            assert s.j * s.n1 <= g.L


def test_cross_excludes_other_ntc_sampled(rng):
    g = build_torus("triangular", 3, 2, 1)
    for _ in range(4000):
        subset = rng.randrange(1 << g.n_edges)
        clusters = [classify_cluster(c) for c in find_clusters(g, subset)]
        crosses = sum(1 for h in clusters if h.tag == "cross")
        winds = [h for h in clusters if h.tag == "wind"]
        assert crosses <= 1
        if crosses:
            assert not winds
        assert len({(h.n1, h.n2) for h in winds}) <= 1
