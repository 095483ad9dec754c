"""Euler characteristic, shellings, 2-shellings and polytope checks."""

from dataclasses import dataclass, field

from . import errors as E
from .core import (CellComplex, boundary, has_boundary_cell, is_non_singular,
                   is_pure, vertex_components)


def euler_characteristic(K):
    return sum((-1) ** r * n for r, n in enumerate(K.f_vector()))


@dataclass
class Shelling:
    """A shelling certificate.

    order: facets in shelling order.  first: shelling of the boundary of the
    first facet.  steps[k]: (intersection complex, shelling of the boundary
    of the k-th facet that starts with that complex's facets), for k >= 1.
    """
    order: list
    first: "Shelling" = None
    steps: list = field(default_factory=list)

    def to_dict(self):
        return {
            "order": [sorted(z) for z in self.order],
            "first": self.first.to_dict() if self.first else None,
            "steps": [{"intersection": [sorted(x) for x in I.maximal_cells],
                       "completion": s.to_dict()} for I, s in self.steps],
        }


def _key(K):
    return frozenset(K.ranks.items())


def _closure(K, z):
    return K.restrict(z)


def _intersection_complex(K, z, placed):
    """Union over placed facets z' of the cells of K inside z ∩ z'."""
    cells = {}
    for zp in placed:
        A = z & zp
        if not A:
            continue
        for x in K.subsets(z):
            if x <= A:
                cells[x] = K.rank(x)
    return CellComplex(cells)


class _Search:
    def __init__(self):
        self.memo = {}

    def shell(self, K, prefix=frozenset()):
        """A shelling of K whose first |prefix| facets are exactly prefix."""
        key = (_key(K), prefix)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None  # guards against re-entry
        out = self._shell(K, prefix)
        self.memo[key] = out
        return out

    def _shell(self, K, prefix):
        if not is_non_singular(K):
            return None
        R = K.Rk
        facets = [z for z in K.cells if K.rank(z) == R]
        if R == 0:
            order = sorted(prefix, key=sorted) + sorted((z for z in facets if z not in prefix), key=sorted)
            return Shelling(order)
        closed = not has_boundary_cell(K)
        N = len(facets)
        dead = set()

        def step(z, placed):
            k = len(placed) + 1
            if k == 1:
                first = self.shell(boundary(_closure(K, z)))
                return (first, None) if first is not None else None
            I = _intersection_complex(K, z, placed)
            if len(I) == 0 or I.Rk != R - 1 or not is_non_singular(I):
                return None
            bnd = boundary(_closure(K, z))
            if k == N and closed:
                if I != bnd:
                    return None
            elif not has_boundary_cell(I):
                return None
            ifacets = frozenset(x for x in I.cells if I.rank(x) == R - 1)
            comp = self.shell(bnd, ifacets)
            return (None, (I, comp)) if comp is not None else None

        def dfs(placed, certs):
            if len(placed) == N:
                return True
            pset = frozenset(placed)
            if pset in dead:
                return False
            need_prefix = len(placed) < len(prefix)
            touched = set().union(*placed) if placed else set()
            cands = [z for z in facets if z not in pset and (not need_prefix or z in prefix)]
            # facets touching what is placed first; the rest fail anyway
            cands.sort(key=lambda z: (not (z & touched), sorted(z)))
            for z in cands:
                res = step(z, placed)
                if res is None:
                    continue
                placed.append(z)
                certs.append(res)
                if dfs(placed, certs):
                    return True
                placed.pop()
                certs.pop()
            dead.add(pset)
            return False

        placed, certs = [], []
        if not dfs(placed, certs):
            return None
        return Shelling(list(placed), certs[0][0], [c[1] for c in certs[1:]])


def find_shelling(K):
    """Exhaustive search for a shelling; None means none exists."""
    if not is_non_singular(K):
        raise E.NotNonSingular("shellings are defined for non-singular complexes")
    return _Search().shell(K)


def verify_shelling(K, order):
    """Certificate for a given facet order, or None if it is not a shelling."""
    if not is_non_singular(K):
        raise E.NotNonSingular("shellings are defined for non-singular complexes")
    order = [frozenset(z) for z in order]
    R = K.Rk
    facets = {z for z in K.cells if K.rank(z) == R}
    if set(order) != facets or len(order) != len(facets):
        return None
    if R == 0:
        return Shelling(order)
    # a search pinned to one order: feed it the order prefix by prefix
    s = _Search()
    certs = []
    closed = not has_boundary_cell(K)
    N = len(order)
    for k, z in enumerate(order, 1):
        if k == 1:
            first = s.shell(boundary(_closure(K, z)))
            if first is None:
                return None
            continue
        I = _intersection_complex(K, z, order[:k - 1])
        if len(I) == 0 or I.Rk != R - 1 or not is_non_singular(I):
            return None
        bnd = boundary(_closure(K, z))
        if k == N and closed:
            if I != bnd:
                return None
        elif not has_boundary_cell(I):
            return None
        comp = s.shell(bnd, frozenset(x for x in I.cells if I.rank(x) == R - 1))
        if comp is None:
            return None
        certs.append((I, comp))
    return Shelling(order, first, certs)


def is_shellable(K):
    return is_non_singular(K) and find_shelling(K) is not None


def check_euler_poincare(K, shelling=None):
    """χ = 1 with boundary, χ = 1 + (-1)^R when closed, given a shelling."""
    if shelling is None:
        shelling = find_shelling(K)
    if shelling is None:
        raise E.NoShellingCertificate("complex has no shelling")
    chi = euler_characteristic(K)
    closed = not has_boundary_cell(K)
    expected = 1 + (-1) ** K.Rk if closed else 1
    return {"consistent": chi == expected, "chi": chi, "expected": expected, "closed": closed}


# ---------------------------------------------------------------------------
# 2-shellings

def _good_for(K, placed, C):
    inside = placed & C
    return not inside or len(vertex_components(K, inside)) == 1


def is_2_shelling(K, order):
    """Every proper prefix meets every 2-cell in a connected (or empty) set."""
    cells2 = K.cells_of_rank(2)
    placed = set()
    for v in list(order)[:-1]:
        placed.add(v)
        for C in cells2:
            if v in C and not _good_for(K, placed, C):
                return False
    return sorted(order) == K.vertices


def find_2_shelling(K):
    """Backtracking search for a 2-shelling (vertex order) or None."""
    if K.Rk < 2:
        raise E.PreconditionFailed("2-shellings need rank >= 2", predicate="rank", Rk=K.Rk)
    at = {v: [C for C in K.containing(v) if K.rank(C) == 2] for v in K.vertices}
    verts = K.vertices
    N = len(verts)
    dead = set()
    order = []
    placed = set()

    def dfs():
        if len(order) >= N - 1:
            order.extend(v for v in verts if v not in placed)
            return True
        key = frozenset(placed)
        if key in dead:
            return False
        touched = {u for v in placed for u in K.neighbors(v)}
        cands = sorted((v for v in verts if v not in placed), key=lambda v: (v not in touched, v))
        for v in cands:
            placed.add(v)
            if all(_good_for(K, placed, C) for C in at[v]):
                order.append(v)
                if dfs():
                    return True
                order.pop()
            placed.discard(v)
        dead.add(key)
        return False

    if N == 0:
        return []
    return list(order) if dfs() else None


# ---------------------------------------------------------------------------
# polytopes

def _section_connected(K, x, y):
    rx = -1 if x is None else K.rank(x)
    if K.rank(y) - rx <= 2:
        return True
    mid = [w for w in K.subsets(y) if (x is None or x < w)]
    if not mid:
        return True
    adj = {w: [] for w in mid}
    for i, a in enumerate(mid):
        for b in mid[i + 1:]:
            if a < b or b < a:
                adj[a].append(b)
                adj[b].append(a)
    seen = {mid[0]}
    stack = [mid[0]]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(mid)


def is_polytope(K):
    """(ok, witness): one maximal cell and every section connected."""
    if not is_pure(K):
        raise E.NotPure("polytopes are pure")
    tops = [z for z in K.cells if K.rank(z) == K.Rk]
    if len(tops) != 1:
        return False, {"reason": "more than one maximal cell", "count": len(tops)}
    for y in K.cells:
        for x in [None] + K.subsets(y):
            if not _section_connected(K, x, y):
                return False, {"section": (x, y)}
    return True, None
