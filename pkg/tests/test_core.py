import pytest

from cckit import errors as E
from cckit.core import (CellComplex, CcMap, build_complex, axiom_violations, skeleton,
                        restriction, boundary, classify, star, link, is_isomorphic,
                        simplicial_closure, join, boundary_components)
from cckit.toolkit.generators import simplex_boundary, cycle, path, grid, torus_cell
from cckit.duality import dual

f = frozenset


def cells(*pairs):
    return [(f(vs), r) for vs, r in pairs]


def test_triangle_boundary_valid():
    K = build_complex(cells(([0], 0), ([1], 0), ([2], 0), ([0, 1], 1), ([1, 2], 1), ([0, 2], 1)))
    rep = classify(K)
    assert rep.closed and rep.local
    assert K.f_vector() == (3, 3)


def test_two_cells_sharing_two_edges():
    # squares {0,1,2,3} and {0,1,2,4}: both contain the path 0-1-2
    raw = cells(*[([v], 0) for v in range(5)],
                ([0, 1], 1), ([1, 2], 1), ([2, 3], 1), ([3, 0], 1), ([2, 4], 1), ([4, 0], 1),
                ([0, 1, 2, 3], 2), ([0, 1, 2, 4], 2))
    with pytest.raises(E.IntersectionNotCell):
        build_complex(raw)


def test_rank_gap():
    raw = cells(([0], 0), ([1], 0), ([2], 0), ([0, 1, 2], 2))
    with pytest.raises(E.RankGap):
        build_complex(raw)


def test_all_violations_listed():
    raw = cells(([0], 0), ([0, 1], 1), ([0, 1], 1))
    names = {v.name for v in axiom_violations(raw)}
    assert {"DuplicateCell", "MissingVertexRank0"} <= names
    with pytest.raises(E.CcError) as exc:
        build_complex(raw)
    assert len(exc.value.violations) >= 2


def test_diamond_violation():
    # a 2-cell on a path of three edges only has one edge at each end vertex
    raw = cells(*[([v], 0) for v in range(4)], ([0, 1], 1), ([1, 2], 1), ([2, 3], 1),
                ([0, 1, 2, 3], 2))
    assert "DiamondViolation" in {v.name for v in axiom_violations(raw)}


def test_skeleton():
    K4 = skeleton(simplex_boundary(3), 1)
    assert K4.f_vector() == (4, 6)
    assert all(len(e) == 2 for e in K4.cells_of_rank(1))
    G = grid(5, 5)
    assert skeleton(G, 2) == G
    assert skeleton(G, 1).f_vector() == (36, 60)
    with pytest.raises(E.KOutOfRange):
        skeleton(G, 3)


def test_restriction():
    K = simplex_boundary(3)
    x = f([0, 1, 2])
    R = restriction(K, x)
    assert R.f_vector() == (3, 3, 1)
    assert len(restriction(K, [])) == 0
    with pytest.raises(E.UnknownVertex):
        restriction(K, [9])


def test_boundary():
    B = boundary(path(1))
    assert B.f_vector() == (2,)
    G = boundary(grid(5, 5))
    assert G.f_vector() == (20, 20)
    T = boundary(torus_cell())
    assert T.f_vector() == (12, 24, 12)
    assert classify(T).closed
    with pytest.raises(E.NotPure):
        boundary(CellComplex({f([0]): 0, f([1]): 0, f([1, 2]): 1, f([2]): 0}))


def test_classify_sphere():
    rep = classify(simplex_boundary(3))
    for flag in ("closed", "local", "non_pinching", "simplicial", "strongly_connected"):
        assert rep[flag], flag


def fan_pinch():
    # two cones over triangles sharing their apex 0
    return simplicial_closure([(0, 1, 2), (0, 2, 3), (0, 3, 1), (0, 4, 5), (0, 5, 6), (0, 6, 4)])


def test_classify_pinch():
    rep = classify(fan_pinch())
    assert not rep.non_pinching
    assert rep.witnesses["non_pinching"] == f([0])


def test_classify_edge():
    rep = classify(path(1))
    assert rep.pure and rep.graph_based and rep.non_singular
    assert not rep.closed
    assert len(boundary(path(1))) == 2


def test_classify_witnesses_are_genuine():
    K = CellComplex({f([0]): 0, f([1]): 0, f([2]): 0, f([0, 1]): 1})
    rep = classify(K)
    assert not rep.pure and not rep.connected
    w = rep.witnesses["pure"]
    assert K.rank(w) < K.Rk and not K.cofaces(w)


def test_star_and_link():
    K = simplex_boundary(3)
    z = f([0, 1, 2])
    st = star(K, z)
    assert set(st) == {x for x in K.cells if x <= z}
    assert link(K, z) == []
    lk = link(K, f([3]))
    # the triangle opposite 3 is not in its star, only its boundary is
    assert set(lk) == {x for x in K.cells if x < f([0, 1, 2])}
    with pytest.raises(E.CellNotFound):
        star(K, f([7]))


def test_isomorphic():
    K = simplex_boundary(3)
    J = K.relabel({0: 10, 1: 12, 2: 11, 3: 13})
    vm = is_isomorphic(K, J)
    assert vm is not None
    assert K.relabel(vm) == J
    assert is_isomorphic(cycle(5), cycle(6)) is None
    assert is_isomorphic(K, dual(K)) is not None


def test_isomorphic_respects_rank_not_just_sets():
    # same vertex sets, different ranks cannot match
    assert is_isomorphic(cycle(4), grid(1, 1)) is None


def test_join():
    K = grid(1, 1)
    assert join(K, f([0]), f([3])) == f([0, 1, 2, 3])
    assert join(K, f([0]), f([0, 1])) == f([0, 1])
    assert join(cycle(4), f([0]), f([2])) is None


def test_boundary_components_sorted():
    from cckit.toolkit.generators import cylinder

    comps = boundary_components(cylinder(4, 2))
    assert [min(c.vertices) for c in comps] == [0, 8]


def test_ccmap_identity_and_compose():
    K = cycle(3)
    i = CcMap.identity(K)
    assert i.is_isomorphism()
    assert i.compose(i).mapping == i.mapping
