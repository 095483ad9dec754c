import pytest

from cckit import errors as E
from cckit.core import CellComplex, is_isomorphic, skeleton, simplicial_closure, classify
from cckit.duality import dual
from cckit.subdivision import bdiv
from cckit.reconstruct import (connection_step, transport, EdgePath, check_full, is_full,
                               check_even, check_monodromy_free, check_simple, is_regular,
                               loop_around, two_cell_components, complementary_path, Move,
                               apply_move, is_contractible_bounded, extend_field, is_covariant,
                               induced_subcomplex, induced_cells, ambient_complex, EdgeField,
                               InconsistencyWitness)
from cckit.toolkit.generators import simplex_boundary, grid, torus_hex, cycle, torus_surface

f = frozenset


def cube():
    return dual(simplicial_closure([(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]))


def db3():
    return dual(bdiv(simplex_boundary(3)))


def test_connection_along_own_edge():
    K = cube()
    e = K.edges_at(0)[0]
    (w,) = e - {0}
    assert connection_step(K, 0, w, e) == e


def test_connection_in_grid_is_parallel():
    G = grid(5, 5)
    # vertex (2,2) = 14, (3,2) = 20; horizontal edge 14-15 goes to 20-21
    assert connection_step(G, 14, 20, f([14, 15])) == f([20, 21])
    assert connection_step(G, 20, 14, f([20, 21])) == f([14, 15])


def test_connection_inverse_everywhere():
    K = db3()
    for e in K.cells_of_rank(1):
        v, w = sorted(e)
        for g in K.edges_at(v):
            h = connection_step(K, v, w, g)
            assert w in h
            assert connection_step(K, w, v, h) == g


def test_connection_errors():
    G = grid(1, 1)
    with pytest.raises(E.EdgeNotMapped):
        connection_step(G, 0, 3, f([0, 1]))


def test_transport_empty_and_back_and_forth():
    K = db3()
    v = K.vertices[0]
    for e in K.edges_at(v):
        assert transport(K, EdgePath((v,)), e) == e
        w = sorted(K.neighbors(v))[0]
        u = sorted(K.neighbors(w))[-1]
        p = EdgePath((v, w, u))
        assert transport(K, p * p.inverse(), e) == e


def test_transport_around_cells_is_identity():
    K = db3()
    for C in K.cells_of_rank(2):
        assert len(C) % 2 == 0
        v = min(C)
        loop = loop_around(K, C, C, v)
        for e in K.edges_at(v):
            assert transport(K, loop, e) == e


def test_bad_path():
    with pytest.raises(E.BadPath):
        transport(grid(1, 1), [0, 3], f([0, 1]))


def test_dual_of_simplicial_is_simple():
    for R in (2, 3, 4):
        D = dual(simplex_boundary(R))
        ok, wit = check_simple(D)
        assert ok, wit
        if D.Rk >= 2:
            assert is_full(D, D.Rk)


def test_simple_iff_dual_simplicial():
    for K in (cube(), db3(), torus_hex(), torus_surface(4, 3), cycle(5)):
        assert check_simple(K)[0] == classify(dual(K)).simplicial


def test_grid_not_full_with_genuine_witness():
    G = grid(5, 5)
    ok, wit = check_full(G, 2)
    assert not ok
    v, S = wit["vertex"], wit["edges"]
    cover = [x for x in G.cells_of_rank(2) if all(e <= x for e in S)]
    assert len(cover) != 1
    # a corner vertex is fine: its two edges span one square
    assert len([x for x in G.cells_of_rank(2) if 0 in x]) == 1


def test_even():
    assert check_even(cube())[0]
    ok, wit = check_even(dual(simplex_boundary(3)))
    assert not ok and len(wit["component"]) == 3


def test_dual_bdiv_is_even():
    for K in (cycle(5), simplex_boundary(3), simplex_boundary(4)):
        assert check_even(dual(bdiv(K)))[0]


def test_monodromy_free():
    for K in (cube(), db3(), dual(simplex_boundary(4)), torus_hex()):
        ok, wit = check_monodromy_free(K)
        assert ok, wit
    ok, wit = check_monodromy_free(grid(2, 2))
    assert not ok and wit["reason"] == "not full"


def test_regularity():
    assert is_regular(cube()) == 3
    assert is_regular(dual(bdiv(simplex_boundary(4)))) == 4
    assert is_regular(grid(2, 2)) is None


def test_complementary_path_in_square():
    G = grid(1, 1)
    C = G.cells_of_rank(2)[0]
    assert complementary_path(G, C, (0, 1)).vertices == (0, 2, 3, 1)
    with pytest.raises(E.IllegalMove):
        complementary_path(G, C, (0, 3))


def test_cell_move_and_inverse():
    G = grid(1, 1)
    C = G.cells_of_rank(2)[0]
    p = EdgePath((0, 1))
    q = apply_move(G, Move("cell", cell=C, path=(0, 1)), p)
    assert q.vertices == (0, 2, 3, 1)
    assert apply_move(G, Move("cell", cell=C, path=(0, 2, 3, 1)), q) == p


def test_move_leaves_unrelated_path():
    G = grid(1, 2)
    C = sorted(G.cells_of_rank(2), key=min)[1]
    p = EdgePath((0, 1))
    assert apply_move(G, Move("cell", cell=C, path=(1, 2)), p) == p


def test_edge_move():
    G = grid(1, 1)
    p = EdgePath((0, 1, 0))
    assert apply_move(G, Move("edge", edge=f([0, 1]), vertex=0), p).vertices == (0,)
    back = apply_move(G, Move("edge_inv", edge=f([0, 1]), vertex=0), EdgePath((0,)))
    assert back == p
    with pytest.raises(E.IllegalMove):
        apply_move(G, Move("edge", edge=f([0, 1]), vertex=3), p)


def test_loop_contractible():
    K = cube()
    C = K.cells_of_rank(2)[0]
    loop = loop_around(K, C, C, min(C))
    res = is_contractible_bounded(K, loop)
    assert res.status == "yes"
    p = loop
    for m in res.moves:
        p = apply_move(K, m, p)
    assert p.vertices == (loop.start,)


def test_grid_block_contractible():
    G = grid(2, 2)
    # boundary of the whole 2x2 block
    cyc = (0, 1, 2, 5, 8, 7, 6, 3, 0)
    assert is_contractible_bounded(G, cyc, budget=20000).status == "yes"


def test_torus_cycle_unknown():
    T = torus_surface(4, 3)
    # vertex (i, j) has id 3*i + j; this loop winds once around the torus
    row = [0, 3, 6, 9, 0]
    res = is_contractible_bounded(T, row, budget=300)
    assert res.status == "unknown"
    assert res.explored <= 300


def test_extend_field():
    K = db3()
    v = K.vertices[0]
    e = K.edges_at(v)[0]
    phi = extend_field(K, v, e)
    assert isinstance(phi, EdgeField)
    assert phi.domain == K.vertex_set
    assert is_covariant(K, phi)
    assert phi(v) == e
    w = sorted(K.neighbors(v))[0]
    assert phi(w) == transport(K, (v, w), e)


def test_extend_field_precondition():
    with pytest.raises(E.PreconditionFailed):
        extend_field(grid(2, 2), 0, f([0, 1]))


def test_induced_two_gives_cell():
    K = db3()
    v = K.vertices[0]
    es = K.edges_at(v)
    S = es[:2]
    J = induced_subcomplex(K, v, S)
    (C,) = [x for x in K.cells_of_rank(2) if all(e <= x for e in S)]
    assert J.complex == K.restrict(C)


def test_induced_monotone():
    L2 = skeleton(dual(bdiv(simplex_boundary(4))), 2)
    v = L2.vertices[0]
    es = L2.edges_at(v)
    small = induced_subcomplex(L2, v, es[:2])
    big = induced_subcomplex(L2, v, es[:3])
    assert small.vertices < big.vertices


def test_bad_seed():
    K = db3()
    v = K.vertices[0]
    with pytest.raises(E.BadSeed):
        induced_subcomplex(K, v, K.edges_at(v)[:1])


def test_induced_three_cells_match():
    L = dual(bdiv(simplex_boundary(4)))
    got = induced_cells(skeleton(L, 2))
    assert set(got[3]) == set(L.cells_of_rank(3))


def test_ambient_round_trip():
    L = dual(bdiv(simplex_boundary(4)))
    A = ambient_complex(skeleton(L, 2))
    assert A == L
    assert skeleton(A, 2) == skeleton(L, 2)


def test_ambient_rank_two_is_itself():
    K = db3()
    assert ambient_complex(K) == K


def test_ambient_rejects_not_full():
    with pytest.raises(E.PredicateFailed):
        ambient_complex(grid(2, 2))
