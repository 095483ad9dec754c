import networkx as nx
import pytest

from cckit import errors as E
from cckit.core import is_isomorphic, classify
from cckit.duality import dual
from cckit.subdivision import (barycentric, bdiv, flags, inclusion_orientation,
                               reconstruct_from_oriented_bdiv)
from cckit.toolkit.generators import simplex_boundary, simplex, cycle, path, grid, torus_cell


def test_bdiv_edge():
    B = bdiv(path(1))
    assert B.f_vector() == (3, 2)
    assert is_isomorphic(B, path(2)) is not None


def test_bdiv_triangle_boundary_is_hexagon():
    assert is_isomorphic(bdiv(simplex_boundary(2)), cycle(6)) is not None


def test_bdiv_tetrahedron_boundary():
    assert bdiv(simplex_boundary(3)).f_vector() == (14, 36, 24)


def test_bdiv_counts_are_flags():
    for K in (grid(2, 1), simplex(3), cycle(4)):
        B = bdiv(K)
        assert len(B) == len(flags(K))
        assert len(B.vertices) == len(K)
        rep = classify(B)
        assert rep.simplicial


def test_rho_sends_flag_to_top():
    K = grid(1, 1)
    B, rho = barycentric(K)
    for c in B.cells:
        top = rho(c)
        assert all(K.cells[i] <= top for i in c)
        assert top in {K.cells[i] for i in c}


@pytest.mark.parametrize("K", [cycle(5), simplex_boundary(3), grid(2, 2), torus_cell()],
                         ids=["c5", "tetra", "grid", "torus_cell"])
def test_reconstruct_round_trip(K):
    B, rho = barycentric(K)
    G = inclusion_orientation(B, rho)
    assert is_isomorphic(reconstruct_from_oriented_bdiv(G), K) is not None


@pytest.mark.parametrize("K", [cycle(4), simplex_boundary(3), simplex_boundary(4)],
                         ids=["c4", "tetra", "s3"])
def test_reversed_orientation_gives_dual(K):
    B, rho = barycentric(K)
    G = inclusion_orientation(B, rho).reverse()
    assert is_isomorphic(reconstruct_from_oriented_bdiv(G), dual(K)) is not None


def test_bdiv_of_dual_matches():
    K = simplex_boundary(4)
    assert is_isomorphic(bdiv(K), bdiv(dual(K))) is not None


def test_bad_orientation():
    G = nx.DiGraph([(0, 1), (1, 2), (2, 0)])
    with pytest.raises(E.NotABdivGraph):
        reconstruct_from_oriented_bdiv(G)
    # a chain that is not transitively closed
    with pytest.raises(E.NotABdivGraph):
        reconstruct_from_oriented_bdiv(nx.DiGraph([(0, 1), (1, 2)]))
