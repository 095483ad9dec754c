import networkx as nx
import pytest

from cckit import errors as E
from cckit.core import CellComplex, is_isomorphic, simplicial_closure
from cckit.duality import dual, dual_closed, dual_set, dual_origins, tilde_dual_set, dual_graph
from cckit.toolkit.generators import (simplex_boundary, cycle, path, grid, torus_triangulated,
                                      torus_hex, torus_cell)
from cckit.core import boundary

f = frozenset


def octahedron():
    return simplicial_closure([(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])


def test_dual_set_of_vertex_in_grid():
    G = grid(2, 2)
    # centre vertex (1,1) has id 4 and lies in all four squares
    assert len(dual_set(G, [4])) == 4
    assert len(dual_set(G, [0])) == 1
    with pytest.raises(E.EmptySet):
        dual_set(G, [])


def test_dual_of_cycle_is_cycle():
    for n in range(3, 8):
        D = dual(cycle(n))
        assert D.f_vector() == (n, n)
        assert is_isomorphic(D, cycle(n)) is not None


def test_dual_reverses_f_vector():
    D = dual(octahedron())
    assert octahedron().f_vector() == (6, 12, 8)
    assert D.f_vector() == (8, 12, 6)
    assert all(len(x) == 4 for x in D.cells_of_rank(2))


def test_tetrahedron_self_dual():
    K = simplex_boundary(3)
    assert is_isomorphic(dual(K), K) is not None


def test_torus_duals():
    T = torus_triangulated()
    assert T.f_vector() == (7, 21, 14)
    assert is_isomorphic(dual(T), torus_hex()) is not None
    B = boundary(torus_cell())
    assert dual(B).f_vector() == (12, 24, 12)


def test_involution():
    for K in (cycle(5), simplex_boundary(4), octahedron(), torus_hex()):
        assert is_isomorphic(dual(dual(K)), K) is not None


def test_dual_bijection_reverses_order():
    K = octahedron()
    D, bij = dual_closed(K)
    for x in K.cells:
        for y in K.supersets(x):
            assert bij[y] < bij[x]
        assert D.rank(bij[x]) == K.Rk - K.rank(x)
    origins = dual_origins(bij)
    assert set(origins.values()) == set(K.cells_of_rank(2))


def test_dual_needs_closed():
    with pytest.raises(E.NotClosed):
        dual(path(2))


def test_tilde_dual_edge_endpoint():
    E_ = path(1)
    t = tilde_dual_set(E_, [0])
    assert t == f({("K", f([0, 1])), ("dK", f([0]))})
    assert tilde_dual_set(E_, [0, 1]) == f({("K", f([0, 1]))})


def test_tilde_dual_interior_vertex():
    G = grid(2, 2)
    assert all(tag == "K" for tag, _ in tilde_dual_set(G, [4]))
    corner = tilde_dual_set(G, [0])
    assert sum(1 for tag, _ in corner if tag == "dK") == 2


def test_dual_graph():
    G = dual_graph(grid(2, 3))
    assert G.number_of_nodes() == 6
    assert G.number_of_edges() == 7
    assert nx.is_connected(G)
    with pytest.raises(E.NotNonSingular):
        dual_graph(simplicial_closure([(0, 1, 2), (0, 1, 3), (0, 1, 4)]))
