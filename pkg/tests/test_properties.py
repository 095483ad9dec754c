import random

import pytest
from hypothesis import given, settings, strategies as st, HealthCheck

from cckit.core import (CellComplex, axiom_violations, boundary, classify, is_isomorphic,
                        simplicial_closure, vertex_components)
from cckit.duality import dual, dual_closed
from cckit.subdivision import bdiv, barycentric
from cckit.shell import euler_characteristic, find_shelling, find_2_shelling
from cckit.reconstruct import (connection_step, transport, check_full, check_simple,
                               is_regular, _cycle_paths, apply_move, Move, EdgePath)
from cckit.causal import check_reduction, check_collapse, dual_map
from cckit.toolkit import io
from cckit.toolkit.generators import (simplex_boundary, cycle, grid, cylinder, bitetra,
                                      torus_hex, torus_cell, torus_triangulated, dual_bdiv,
                                      prism, path)

SETTINGS = settings(max_examples=40, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])

CORPUS = {
    "c5": cycle(5),
    "s2": simplex_boundary(3),
    "s3": simplex_boundary(4),
    "grid": grid(2, 3),
    "cyl": cylinder(4, 2),
    "bitetra": bitetra(),
    "torus_hex": torus_hex(),
    "torus_cell": torus_cell(),
    "prism": prism(cycle(3)),
    "db3": dual_bdiv("simplex_boundary", (3,)),
}
CLOSED = ["c5", "s2", "s3", "torus_hex", "db3"]


def relabeled(K, seed):
    vs = K.vertices
    perm = list(range(100, 100 + len(vs)))
    random.Random(seed).shuffle(perm)
    return K.relabel(dict(zip(vs, perm)))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_faces_and_cofaces(name):
    K = CORPUS[name]
    for x in K.cells:
        if K.rank(x) >= 1:
            assert frozenset().union(*K.faces(x)) == x
        co = K.cofaces(x)
        if len(co) >= 2:
            assert frozenset.intersection(*co) == x


@pytest.mark.parametrize("name", sorted(CORPUS))
@given(seed=st.integers(0, 10 ** 6))
@SETTINGS
def test_relabel_invariance(name, seed):
    K = CORPUS[name]
    J = relabeled(K, seed)
    vm = is_isomorphic(K, J)
    assert vm is not None and K.relabel(vm) == J
    back = is_isomorphic(J, K)
    assert back is not None
    assert K.relabel({v: back[vm[v]] for v in K.vertices}) == K
    assert classify(K).flags == classify(J).flags


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_document_round_trip(name):
    K = CORPUS[name]
    obj = io.document_to_json(io.CcDocument(name, K))
    assert io.parse_document(obj).complex == K
    assert io.dumps(io.document_to_json(io.parse_document(obj))) == io.dumps(obj)


@pytest.mark.parametrize("name", CLOSED)
def test_duality_identities(name):
    K = CORPUS[name]
    D, bij = dual_closed(K)
    R = K.Rk
    assert D.f_vector() == tuple(reversed(K.f_vector()))
    assert euler_characteristic(D) == (-1) ** R * euler_characteristic(K)
    assert classify(D).closed
    assert is_isomorphic(dual(D), K) is not None
    rep = classify(K)
    assert classify(D).local == (rep.strongly_connected and rep.non_pinching)
    for x in K.cells:
        for y in K.supersets(x):
            assert bij[y] < bij[x]


@pytest.mark.parametrize("name", CLOSED)
def test_bdiv_of_dual(name):
    K = CORPUS[name]
    assert is_isomorphic(bdiv(K), bdiv(dual(K))) is not None


@given(n=st.integers(3, 12))
@SETTINGS
def test_cycle_duality_and_reduction(n):
    K = cycle(n)
    assert is_isomorphic(dual(dual(K)), K) is not None
    _, rho = barycentric(K)
    assert check_reduction(rho).ok
    assert check_collapse(dual_map(rho)).ok


@st.composite
def simplicial_2(draw):
    tris = draw(st.lists(st.tuples(*[st.integers(0, 6)] * 3).filter(lambda t: len(set(t)) == 3),
                         min_size=1, max_size=8))
    return simplicial_closure(tris)


@given(K=simplicial_2())
@SETTINGS
def test_random_simplicial(K):
    assert axiom_violations(K) == []
    rep = classify(K)
    assert rep.simplicial
    if rep.closed:
        assert len(boundary(K)) == 0
    if rep.pure:
        B = boundary(K)
        assert all(x in K and K.rank(x) == B.rank(x) for x in B.cells)


@pytest.mark.parametrize("name", ["grid", "s2", "c5", "bitetra"])
def test_euler_of_bdiv(name):
    # the annulus is left out on purpose: it has no shelling
    K = CORPUS[name]
    assert find_shelling(K) is not None
    assert euler_characteristic(bdiv(K)) == euler_characteristic(K)


@pytest.mark.parametrize("K", [dual(simplex_boundary(3)), dual(simplex_boundary(4)),
                               dual_bdiv("simplex_boundary", (3,)), torus_hex()],
                         ids=["ds2", "ds3", "db3", "torus_hex"])
def test_two_shelling_iff_dual_shelling(K):
    assert check_simple(K)[0]
    assert (find_2_shelling(K) is not None) == (find_shelling(dual(K)) is not None)


@pytest.mark.parametrize("name", ["db3", "s2", "torus_hex"])
def test_full_regularity(name):
    K = CORPUS[name]
    R = K.Rk
    if not check_full(K, R)[0]:
        pytest.skip("not full")
    n = is_regular(K)
    assert n == R + 1
    # every edge lies in n - 1 two-cells
    assert {len([C for C in K.cofaces(e) if K.rank(C) == 2]) for e in K.cells_of_rank(1)} == {n - 1}


DB3 = CORPUS["db3"]
CELL_PATHS = [(C, _cycle_paths(DB3, C)) for C in DB3.cells_of_rank(2)]


@st.composite
def walk(draw):
    v = draw(st.sampled_from(DB3.vertices))
    vs = [v]
    for _ in range(draw(st.integers(1, 8))):
        vs.append(draw(st.sampled_from(sorted(DB3.neighbors(vs[-1])))))
    return EdgePath(tuple(vs))


@given(p=walk(), data=st.data())
@SETTINGS
def test_transport_invariant_under_moves(p, data):
    e = data.draw(st.sampled_from(DB3.edges_at(p.start)))
    base = transport(DB3, p, e)
    moves = [Move("cell", cell=C, path=sub) for C, subs in CELL_PATHS for sub in subs
             if any(p.vertices[i:i + len(sub)] == sub for i in range(len(p.vertices)))]
    moves += [Move("edge_inv", edge=f, vertex=v) for v in set(p.vertices) for f in DB3.edges_at(v)]
    if not moves:
        return
    m = data.draw(st.sampled_from(moves))
    q = apply_move(DB3, m, p)
    assert q.start == p.start and q.end == p.end
    assert transport(DB3, q, e) == base


@given(data=st.data())
@SETTINGS
def test_connection_inverse(data):
    e = data.draw(st.sampled_from(DB3.cells_of_rank(1)))
    v, w = sorted(e)
    g = data.draw(st.sampled_from(DB3.edges_at(v)))
    assert connection_step(DB3, w, v, connection_step(DB3, v, w, g)) == g
