"""Generators for the standard example families."""

from itertools import combinations

from .. import errors as E
from ..core import CellComplex, simplicial_closure


def _need(cond, msg, **kw):
    if not cond:
        raise E.BadParams(msg, **kw)


def simplex_boundary(R):
    """Boundary of the R-simplex on vertices 0..R (an (R-1)-cc)."""
    _need(isinstance(R, int) and R >= 1, "R must be >= 1", R=R)
    vs = range(R + 1)
    ranks = {}
    for k in range(1, R + 1):
        for s in combinations(vs, k):
            ranks[frozenset(s)] = k - 1
    return CellComplex(ranks)


def simplex(R):
    """The full R-simplex: its boundary plus the top cell."""
    _need(isinstance(R, int) and R >= 0, "R must be >= 0", R=R)
    if R == 0:
        return CellComplex({frozenset([0]): 0})
    ranks = simplex_boundary(R).ranks
    ranks[frozenset(range(R + 1))] = R
    return CellComplex(ranks)


def cycle(n):
    _need(isinstance(n, int) and n >= 3, "cycle needs n >= 3", n=n)
    ranks = {frozenset([i]): 0 for i in range(n)}
    for i in range(n):
        ranks[frozenset([i, (i + 1) % n])] = 1
    return CellComplex(ranks)


def path(n):
    """Path with n edges on vertices 0..n."""
    _need(isinstance(n, int) and n >= 0, "path needs n >= 0", n=n)
    ranks = {frozenset([i]): 0 for i in range(n + 1)}
    for i in range(n):
        ranks[frozenset([i, i + 1])] = 1
    return CellComplex(ranks)


def grid(m, n):
    """m x n block of unit squares; vertex (i, j) has id i*(n+1)+j."""
    _need(m >= 1 and n >= 1, "grid needs m, n >= 1", m=m, n=n)
    vid = lambda i, j: i * (n + 1) + j
    ranks = {}
    for i in range(m + 1):
        for j in range(n + 1):
            ranks[frozenset([vid(i, j)])] = 0
            if i < m:
                ranks[frozenset([vid(i, j), vid(i + 1, j)])] = 1
            if j < n:
                ranks[frozenset([vid(i, j), vid(i, j + 1)])] = 1
            if i < m and j < n:
                ranks[frozenset([vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)])] = 2
    return CellComplex(ranks)


def prism(base, layers=1):
    """base x path(layers).  Layer k copies vertex v to v + k*(max+1)."""
    _need(len(base) > 0 and layers >= 1, "prism needs a non-empty base and layers >= 1")
    off = max(base.vertices) + 1
    ranks = {}
    for x, r in base.ranks.items():
        for k in range(layers + 1):
            ranks[frozenset(v + k * off for v in x)] = r
        for k in range(layers):
            ranks[frozenset(v + k * off for v in x) | frozenset(v + (k + 1) * off for v in x)] = r + 1
    return CellComplex(ranks)


def cylinder(n, h=1):
    """C_n x path(h): n*h squares; the two ends are the first and last layers."""
    _need(n >= 3 and h >= 1, "cylinder needs n >= 3, h >= 1", n=n, h=h)
    return prism(cycle(n), h)


def bitetra():
    """Two tetrahedra sharing the triangle {0,1,2}."""
    return simplicial_closure([(0, 1, 2, 3), (0, 1, 2, 4)])


def torus_surface(a=4, b=3):
    """Square torus with a*b squares, a, b >= 3."""
    _need(a >= 3 and b >= 3, "torus needs a, b >= 3", a=a, b=b)
    vid = lambda i, j: (i % a) * b + (j % b)
    ranks = {}
    for i in range(a):
        for j in range(b):
            ranks[frozenset([vid(i, j)])] = 0
            ranks[frozenset([vid(i, j), vid(i + 1, j)])] = 1
            ranks[frozenset([vid(i, j), vid(i, j + 1)])] = 1
            ranks[frozenset([vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)])] = 2
    return CellComplex(ranks)


def torus_triangulated():
    """Seven-vertex triangulated torus: triangles {i,i+1,i+3}, {i,i+2,i+3} mod 7."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return simplicial_closure(tris)


def torus_hex():
    """Simple torus: the dual of the seven-vertex triangulation (7 hexagons)."""
    from ..duality import dual

    return dual(torus_triangulated())


def torus_cell():
    """A single 3-cell bounded by the 4x3 square torus: 12/24/12/1 cells."""
    T = torus_surface(4, 3)
    ranks = T.ranks
    ranks[frozenset(T.vertices)] = 3
    return CellComplex(ranks)


def dual_bdiv(family, params=()):
    from ..duality import dual_closed
    from ..subdivision import barycentric

    K = generate(family, params)
    B, _ = barycentric(K)
    D, _ = dual_closed(B)
    return D


FAMILIES = {
    "simplex_boundary": simplex_boundary,
    "simplex": simplex,
    "cycle": cycle,
    "path": path,
    "grid": grid,
    "cylinder": cylinder,
    "bitetra": bitetra,
    "torus_surface": torus_surface,
    "torus_cell": torus_cell,
    "torus_triangulated": torus_triangulated,
    "torus_hex": torus_hex,
}


def generate(family, params=()):
    if family == "dual_bdiv":
        _need(len(params) >= 1, "dual_bdiv needs an inner family")
        return dual_bdiv(params[0], tuple(params[1:]))
    if family == "prism":
        _need(len(params) >= 1, "prism needs a base family")
        return prism(generate(params[0], tuple(params[1:])))
    if family not in FAMILIES:
        raise E.BadParams("unknown family", family=family)
    try:
        return FAMILIES[family](*params)
    except TypeError as exc:
        raise E.BadParams(str(exc), family=family) from None
