"""Connection, edge fields, fullness and monodromy, path moves, and the
reconstruction of an ambient complex from a 2-skeleton."""

from collections import deque
from heapq import heappop, heappush
from dataclasses import dataclass, field
from itertools import combinations, count
from math import comb

from . import errors as E
from .core import (CellComplex, build_complex, is_graph_based, is_local,
                   skeleton, vertex_components, is_connected)


# ---------------------------------------------------------------------------
# connection

def _two_cells_with(K, e):
    return [C for C in K.cofaces(e) if K.rank(C) == 2]


def _edges_in(K, w, C):
    return [f for f in K.edges_at(w) if f <= C]


def connection_step(K, v, w, e):
    """∇ from v to w applied to an edge e at v."""
    vw = frozenset([v, w])
    if vw not in K or K.rank(vw) != 1:
        raise E.EdgeNotMapped("{v, w} is not an edge", v=v, w=w)
    if len(vw) != 2 or not is_graph_based_edge(e):
        raise E.NotGraphBased("edges must have two vertices", edge=e)
    e = frozenset(e)
    if v not in e or e not in K:
        raise E.EdgeNotMapped("e is not an edge at v", v=v, edge=e)
    if e == vw:
        return vw
    common = [C for C in _two_cells_with(K, e) if vw <= C]
    if len(common) != 1:
        raise E.EdgeNotMapped("no unique 2-cell holds e and {v, w}", v=v, w=w, edge=e,
                              count=len(common))
    out = [f for f in _edges_in(K, w, common[0]) if f != vw]
    if len(out) != 1:
        raise E.EdgeNotMapped("2-cell has no unique edge at w", w=w, cell=common[0])
    return out[0]


def is_graph_based_edge(e):
    return len(e) == 2


@dataclass(frozen=True)
class EdgePath:
    """A walk in the 1-skeleton, stored by its vertex sequence.

    A single vertex is the empty path at that vertex.
    """
    vertices: tuple

    @property
    def edges(self):
        vs = self.vertices
        return [frozenset(vs[i:i + 2]) for i in range(len(vs) - 1)]

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def __len__(self):
        return len(self.vertices) - 1

    def inverse(self):
        return EdgePath(tuple(reversed(self.vertices)))

    def __mul__(self, other):
        if self.end != other.start:
            raise E.BadPath("paths do not compose", left=self.end, right=other.start)
        return EdgePath(self.vertices + other.vertices[1:])

    def is_closed(self):
        return self.start == self.end


def as_path(p):
    if isinstance(p, EdgePath):
        return p
    return EdgePath(tuple(p))


def check_path(K, p):
    p = as_path(p)
    if not p.vertices or p.vertices[0] not in K.vertex_set:
        raise E.BadPath("path must start at a vertex of K")
    for e in p.edges:
        if e not in K or K.rank(e) != 1 or len(e) != 2:
            raise E.BadPath("consecutive vertices are not joined by an edge", edge=e)
    return p


def transport(K, p, e):
    """∇ along the path p applied to an edge at its start vertex."""
    p = check_path(K, p)
    e = frozenset(e)
    if p.start not in e:
        raise E.BadPath("edge is not at the start of the path", edge=e, start=p.start)
    vs = p.vertices
    for i in range(len(vs) - 1):
        try:
            e = connection_step(K, vs[i], vs[i + 1], e)
        except E.EdgeNotMapped as exc:
            raise E.NotFull("transport undefined along path", step=i, **exc.details) from None
    return e


# ---------------------------------------------------------------------------
# predicates

def edge_sets_at(K, v, k):
    """Map frozenset(E_v^x) -> list of rank-k cells x containing v."""
    ev = K.edges_at(v)
    out = {}
    for x in K.containing(v):
        if K.rank(x) == k:
            s = frozenset(f for f in ev if f <= x)
            out.setdefault(s, []).append(x)
    return out


def check_full(K, r):
    """r-fullness: every k-subset of E_v (2 <= k <= r) spans a rank-k cell.

    Returns (ok, witness) with witness {"vertex", "edges"} on failure.
    """
    if r < 2 or r > K.Rk:
        return False, {"reason": "rank out of range", "r": r, "Rk": K.Rk}
    if not is_graph_based(K):
        return False, {"reason": "not graph based"}
    for v in K.vertices:
        ev = sorted(K.edges_at(v), key=sorted)
        for k in range(2, r + 1):
            if k > len(ev):
                continue
            have = edge_sets_at(K, v, k)
            if len(have) >= comb(len(ev), k) and all(len(xs) == 1 for xs in have.values()):
                continue
            for S in combinations(ev, k):
                if len(have.get(frozenset(S), ())) != 1:
                    return False, {"vertex": v, "edges": list(S)}
    return True, None


def is_full(K, r=2):
    return check_full(K, r)[0]


def two_cell_components(K, C):
    """Vertex lists of the connected components of K ∩ C."""
    return vertex_components(K, C)


def check_even(K):
    for C in K.cells_of_rank(2):
        for comp in two_cell_components(K, C):
            if len(comp) % 2:
                return False, {"cell": C, "component": sorted(comp)}
    return True, None


def loop_around(K, C, comp, v):
    """l_C(v): the cycle of the component comp of C, based at v."""
    comp = set(comp)
    order = [v]
    prev = None
    cur = v
    while True:
        nbrs = sorted(u for u in K.neighbors(cur) if u in comp and u != prev)
        if prev is None:
            nxt = nbrs[0]
        else:
            nxt = nbrs[0] if nbrs else v
        if nxt == v:
            break
        order.append(nxt)
        prev, cur = cur, nxt
        if len(order) > len(comp):
            raise E.BadPath("component of 2-cell is not a cycle", cell=C)
    return EdgePath(tuple(order) + (v,))


def check_monodromy_free(K):
    """∇ around each 2-cell component fixes the edges leaving it."""
    if not is_graph_based(K):
        return False, {"reason": "not graph based"}
    if K.Rk < 2:
        return True, None
    ok, wit = check_full(K, 2)
    if not ok:
        return False, {"reason": "not full", "full_witness": wit}
    for C in K.cells_of_rank(2):
        for comp in two_cell_components(K, C):
            cs = set(comp)
            v = min(comp)
            loop = loop_around(K, C, comp, v)
            for e in K.edges_at(v):
                if len(e & cs) != 1:
                    continue
                f = transport(K, loop, e)
                if f != e:
                    return False, {"cell": C, "vertex": v, "edge": e, "image": f}
    return True, None


def check_simple(K):
    """Closed and R-full (closed alone for rank <= 1)."""
    from .core import is_closed

    if not is_closed(K):
        return False, {"reason": "not closed"}
    if K.Rk <= 1:
        return True, None
    ok, wit = check_full(K, K.Rk)
    return ok, (None if ok else {"reason": "not full", "full_witness": wit})


def is_regular(K):
    """Return n if every vertex has n edges, else None."""
    degs = {len(K.edges_at(v)) for v in K.vertices}
    return degs.pop() if len(degs) == 1 else None


# ---------------------------------------------------------------------------
# moves and homotopy

def _cycle_paths(K, C):
    """All simple paths (as vertex tuples, length >= 1) inside components of C."""
    out = []
    for comp in two_cell_components(K, C):
        loop = loop_around(K, C, comp, min(comp)).vertices[:-1]
        n = len(loop)
        for orient in (loop, tuple(reversed(loop))):
            for i in range(n):
                for L in range(1, n):
                    out.append(tuple(orient[(i + j) % n] for j in range(L + 1)))
    return out


def complementary_path(K, C, p):
    """p^C: the other way around the component of C from start to end of p."""
    p = as_path(p)
    comps = [c for c in two_cell_components(K, C) if set(p.vertices) <= set(c)]
    if not comps or len(p) < 1:
        raise E.IllegalMove("path is not inside a component of the 2-cell", cell=C)
    comp = comps[0]
    loop = loop_around(K, C, comp, p.start).vertices
    if loop[1] != p.vertices[1]:
        loop = tuple(reversed(loop))
    n = len(loop) - 1
    if tuple(loop[:len(p) + 1]) != p.vertices or len(set(p.vertices)) != len(p.vertices):
        if not (p.is_closed() and len(p) == n and tuple(loop) == p.vertices):
            raise E.IllegalMove("path is not a simple path along the 2-cell", cell=C)
    # l_C(v) = p * (p^C)^{-1}
    rest = loop[len(p):]
    return EdgePath(tuple(reversed(rest)))


def _find(seq, sub):
    m = len(sub)
    for i in range(len(seq) - m + 1):
        if seq[i:i + m] == sub:
            return i
    return -1


@dataclass(frozen=True)
class Move:
    """kind "cell": 2-cell move through cell along path; kind "edge": remove
    the back-and-forth (e, e) based at vertex; kind "edge_inv": insert it."""
    kind: str
    cell: frozenset = None
    path: tuple = None
    edge: frozenset = None
    vertex: int = None


def apply_move(K, move, p):
    p = as_path(p)
    q = p.vertices
    if move.kind == "cell":
        sub = tuple(move.path)
        comp = complementary_path(K, move.cell, sub)
        i = _find(q, sub)
        if i < 0:
            return p
        return EdgePath(q[:i] + comp.vertices + q[i + len(sub):])
    if move.kind in ("edge", "edge_inv"):
        e, v = frozenset(move.edge), move.vertex
        if v not in e or len(e) != 2:
            raise E.IllegalMove("vertex is not on the edge", edge=e, vertex=v)
        (w,) = e - {v}
        if move.kind == "edge":
            for i in range(len(q) - 2):
                if q[i] == v and q[i + 1] == w and q[i + 2] == v:
                    q1, q2 = q[:i + 1], q[i + 2:]
                    if e & set(q1) == {v} and e & set(q2) == {v}:
                        return EdgePath(q1 + q2[1:])
                    # only the first occurrence counts
                    return p
            return p
        # inverse: insert (e, e) at the first visit of v when w is unused
        if e & set(q) != {v}:
            return p
        i = q.index(v)
        return EdgePath(q[:i + 1] + (w, v) + q[i + 1:])
    raise E.IllegalMove("unknown move kind", kind=move.kind)


def _neighbour_moves(K, q, cell_paths):
    seen = set()
    for C, paths in cell_paths:
        for sub in paths:
            if _find(q, sub) >= 0:
                m = Move("cell", cell=C, path=sub)
                if m not in seen:
                    seen.add(m)
                    yield m
    for i in range(len(q) - 2):
        if q[i] == q[i + 2]:
            yield Move("edge", edge=frozenset(q[i:i + 2]), vertex=q[i])
    for v in set(q):
        for e in K.edges_at(v):
            yield Move("edge_inv", edge=e, vertex=v)


@dataclass
class Contractibility:
    status: str  # "yes" or "unknown"
    moves: list = field(default_factory=list)
    explored: int = 0


def is_contractible_bounded(K, cycle, budget=10000, max_length=None):
    """Search for a homotopy from the cycle to the empty path.

    Best-first over move applications, shortest paths first, so shrinking
    moves are tried before edge insertions.  Never answers "no": when the
    budget runs out the status is "unknown".
    """
    p = check_path(K, cycle)
    if not p.is_closed():
        raise E.BadPath("not a cycle")
    target = (p.start,)
    if max_length is None:
        max_length = 2 * len(p) + 8
    cell_paths = [(C, _cycle_paths(K, C)) for C in K.cells_of_rank(2)]
    start = p.vertices
    parent = {start: None}
    tick = count()
    heap = [(len(start), 0, next(tick), start)]
    explored = 0
    while heap and explored < budget:
        _, depth, _, cur = heappop(heap)
        explored += 1
        if cur == target:
            moves = []
            while parent[cur] is not None:
                prev, m = parent[cur]
                moves.append(m)
                cur = prev
            return Contractibility("yes", moves[::-1], explored)
        for m in _neighbour_moves(K, cur, cell_paths):
            nxt = apply_move(K, m, EdgePath(cur)).vertices
            if nxt in parent or len(nxt) - 1 > max_length:
                continue
            parent[nxt] = (cur, m)
            heappush(heap, (len(nxt), depth + 1, next(tick), nxt))
    return Contractibility("unknown", [], explored)


# ---------------------------------------------------------------------------
# edge fields

@dataclass
class EdgeField:
    domain: frozenset
    assignment: dict

    def __call__(self, v):
        return self.assignment[v]


@dataclass
class InconsistencyWitness:
    edge: frozenset
    expected: frozenset
    found: frozenset


def _require(K, full=True, even=True, monodromy=True, connected=True):
    if not is_graph_based(K):
        raise E.PreconditionFailed("not graph based", predicate="graph_based")
    if connected and not is_connected(K):
        raise E.PreconditionFailed("not connected", predicate="connected")
    if full:
        ok, wit = check_full(K, 2)
        if not ok:
            raise E.PreconditionFailed("not full", predicate="full", witness=wit)
    if even:
        ok, wit = check_even(K)
        if not ok:
            raise E.PreconditionFailed("not even", predicate="even", witness=wit)
    if monodromy:
        ok, wit = check_monodromy_free(K)
        if not ok:
            raise E.PreconditionFailed("not monodromy free", predicate="monodromy_free", witness=wit)


def frames(K, base):
    """Transport every edge at base to every vertex along a BFS tree.

    Returns (frame, witness): frame[w] maps E_base -> E_w.  witness is an
    InconsistencyWitness for the first non-tree edge where the transported
    frames disagree with ∇, else None.
    """
    frame = {base: {e: e for e in K.edges_at(base)}}
    order = [base]
    tree = set()
    q = deque([base])
    while q:
        u = q.popleft()
        for w in sorted(K.neighbors(u)):
            if w in frame:
                continue
            frame[w] = {e: connection_step(K, u, w, f) for e, f in frame[u].items()}
            tree.add(frozenset([u, w]))
            order.append(w)
            q.append(w)
    for e in K.cells_of_rank(1):
        if e in tree:
            continue
        u, w = sorted(e)
        for s, f in frame[u].items():
            g = connection_step(K, u, w, f)
            if g != frame[w][s]:
                return frame, InconsistencyWitness(e, frame[w][s], g)
    return frame, None


def extend_field(K, seed_vertex, seed_edge):
    """The covariant edge field with the given value at the seed vertex."""
    _require(K)
    seed_edge = frozenset(seed_edge)
    if seed_vertex not in seed_edge or seed_edge not in K:
        raise E.PreconditionFailed("seed edge not at seed vertex", predicate="seed")
    frame, bad = frames(K, seed_vertex)
    if bad is not None:
        return bad
    return EdgeField(frozenset(frame), {w: fr[seed_edge] for w, fr in frame.items()})


def is_covariant(K, phi):
    for e in K.cells_of_rank(1):
        u, w = sorted(e)
        if u in phi.domain and w in phi.domain:
            if connection_step(K, u, w, phi(u)) != phi(w):
                return False
    return True


# ---------------------------------------------------------------------------
# induced cells and the ambient complex

@dataclass
class InducedCell:
    seed: tuple
    complex: CellComplex

    @property
    def vertices(self):
        return self.complex.vertex_set


class _Transporter:
    """Frames from one base vertex, reused for every seed."""

    def __init__(self, K):
        self.K = K
        self.base = K.vertices[0]
        self.frame, bad = frames(K, self.base)
        if bad is not None:
            raise E.FieldInconsistent("transport depends on the path", edge=bad.edge,
                                      expected=bad.expected, found=bad.found)
        self.inverse = {w: {f: e for e, f in fr.items()} for w, fr in self.frame.items()}

    def sets(self, v, S_v):
        base_set = {self.inverse[v][e] for e in S_v}
        return {w: frozenset(fr[e] for e in base_set) for w, fr in self.frame.items()}


def _grow(K, v, S):
    """Grow the domain from v by adding 2-cells C with E_w^C ⊆ S_w."""
    D = {v}
    cells = set()
    q = deque([v])
    while q:
        w = q.popleft()
        for C in K.containing(w):
            if K.rank(C) != 2 or C in cells:
                continue
            if all(f in S[w] for f in _edges_in(K, w, C)):
                cells.add(C)
                for u in C:
                    if u not in D:
                        D.add(u)
                        q.append(u)
    return D, cells


def _induced(K, tr, v, S_v):
    S = tr.sets(v, S_v)
    D, cells = _grow(K, v, S)
    ranks = {}
    for w in D:
        ranks[frozenset([w])] = 0
        for f in S[w]:
            if not f <= D:
                raise E.FieldInconsistent("edge set leaves the induced domain", vertex=w, edge=f)
            ranks[f] = 1
    for C in cells:
        ranks[C] = 2
    J = CellComplex(ranks)
    return InducedCell((v, frozenset(S_v)), J), S, D


def induced_subcomplex(K, v, S_v, _tr=None):
    """J(v, S_v): the |S_v|-regular induced sub-2-cc through v."""
    S_v = frozenset(frozenset(e) for e in S_v)
    ev = set(K.edges_at(v))
    if not S_v <= ev or not 2 <= len(S_v) < len(ev):
        raise E.BadSeed("need 2 <= |S_v| < |E_v| with S_v ⊆ E_v", vertex=v, size=len(S_v),
                        degree=len(ev))
    if _tr is None:
        K2 = skeleton(K, 2) if K.Rk > 2 else K
        if not is_local(K2):
            raise E.PreconditionFailed("not local", predicate="local")
        _require(K2)
        _tr = _Transporter(K2)
        K = K2
    return _induced(K, _tr, v, S_v)[0]


def induced_cells(K2):
    """Map r -> sorted list of vertex sets of r-regular induced complexes.

    Uses the selected-couples bookkeeping so each one is built once.
    """
    tr = _Transporter(K2)
    n = is_regular(K2)
    out = {}
    for r in range(2, n):
        selected = set()
        found = {}
        for v in K2.vertices:
            ev = sorted(K2.edges_at(v), key=sorted)
            for S_v in combinations(ev, r):
                S_v = frozenset(S_v)
                if (v, S_v) in selected:
                    continue
                ic, S, D = _induced(K2, tr, v, S_v)
                for w in D:
                    selected.add((w, S[w]))
                found.setdefault(ic.vertices, ic)
        out[r] = sorted(found, key=lambda x: (len(x), sorted(x)))
    return out


def check_non_singular_collection(K, coll):
    """K ∩ (x ∩ y) connected or empty for all pairs; returns a bad pair or None."""
    coll = list(coll)
    by_vertex = {}
    for i, x in enumerate(coll):
        for v in x:
            by_vertex.setdefault(v, []).append(i)
    for i, x in enumerate(coll):
        near = set()
        for v in x:
            near.update(by_vertex[v])
        for j in sorted(near):
            if j <= i:
                continue
            inter = x & coll[j]
            if len(vertex_components(K, inter)) > 1:
                return (x, coll[j])
    return None


def ambient_complex(K2):
    """Rebuild the ambient complex whose 2-skeleton is K2."""
    if K2.Rk != 2:
        raise E.PredicateFailed("input must be a 2-cc", predicate="rank", Rk=K2.Rk)
    if not is_local(K2):
        raise E.PredicateFailed("not local", predicate="local")
    try:
        _require(K2)
    except E.PreconditionFailed as exc:
        raise E.PredicateFailed(str(exc), **exc.details) from None
    cells = induced_cells(K2)
    ranks = K2.ranks
    for r, coll in cells.items():
        bad = check_non_singular_collection(K2, coll)
        if bad is not None:
            raise E.NonSingularCollection("induced cells meet in a disconnected set",
                                          rank=r, x=bad[0], y=bad[1])
        if r >= 3:
            for x in coll:
                ranks[x] = r
    return build_complex(ranks)
