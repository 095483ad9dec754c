import pytest

from cckit import errors as E
from cckit.core import boundary, simplicial_closure
from cckit.duality import dual
from cckit.shell import (euler_characteristic, find_shelling, verify_shelling, is_shellable,
                         check_euler_poincare, is_2_shelling, find_2_shelling, is_polytope)
from cckit.toolkit.generators import (simplex_boundary, simplex, cycle, path, grid, torus_cell,
                                      torus_hex, torus_triangulated, torus_surface)

f = frozenset


def test_euler_characteristic():
    assert euler_characteristic(cycle(7)) == 0
    assert euler_characteristic(simplex_boundary(3)) == 2
    assert euler_characteristic(simplex_boundary(4)) == 0
    assert euler_characteristic(grid(3, 2)) == 1
    assert euler_characteristic(torus_hex()) == 0
    assert euler_characteristic(torus_cell()) == -1


@pytest.mark.parametrize("K", [path(3), cycle(5), grid(2, 3), simplex_boundary(3),
                               simplex_boundary(4), simplex(3)],
                         ids=["path", "cycle", "grid", "s2", "s3", "ball"])
def test_shellable_balls_and_spheres(K):
    s = find_shelling(K)
    assert s is not None
    assert verify_shelling(K, s.order) is not None
    assert check_euler_poincare(K, s)["consistent"]


def test_shelling_certificate_dict():
    s = find_shelling(grid(1, 2))
    d = s.to_dict()
    assert len(d["order"]) == 2
    assert len(d["steps"]) == 1


def test_bad_order_rejected():
    G = grid(1, 3)
    sq = sorted(G.cells_of_rank(2), key=min)
    assert verify_shelling(G, [sq[0], sq[2], sq[1]]) is None
    assert verify_shelling(G, sq) is not None
    assert verify_shelling(G, sq[:2]) is None


def test_disconnected_not_shellable():
    K = simplicial_closure([(0, 1), (2, 3)])
    assert find_shelling(K) is None


def test_torus_cell_not_shellable():
    K = torus_cell()
    assert find_shelling(K) is None
    with pytest.raises(E.NoShellingCertificate):
        check_euler_poincare(K)


def test_tori_not_shellable():
    assert not is_shellable(torus_triangulated())
    assert not is_shellable(torus_hex())


def test_shelling_needs_non_singular():
    with pytest.raises(E.NotNonSingular):
        find_shelling(simplicial_closure([(0, 1, 2), (0, 1, 3), (0, 1, 4)]))


def test_two_shelling_square():
    G = grid(1, 1)
    # square 0-1-3-2
    assert is_2_shelling(G, [0, 1, 3, 2])
    assert not is_2_shelling(G, [0, 3, 1, 2])


def test_find_2_shelling_sphere():
    K = dual(simplex_boundary(4))
    order = find_2_shelling(K)
    assert order is not None and is_2_shelling(K, order)


def test_find_2_shelling_rank():
    with pytest.raises(E.PreconditionFailed):
        find_2_shelling(cycle(4))


def test_square_torus_is_2_shellable():
    K = torus_surface(4, 3)
    order = find_2_shelling(K)
    assert order is not None and is_2_shelling(K, order)


def test_polytope():
    ok, w = is_polytope(simplex(3))
    assert ok and w is None
    ok, w = is_polytope(grid(2, 2))
    assert not ok and w["count"] == 4


def test_torus_cell_is_abstract_polytope_but_not_shellable():
    # sections are connected even though no shelling exists
    ok, _ = is_polytope(torus_cell())
    assert ok
    assert find_shelling(torus_cell()) is None
