"""Cell complexes: data model, axiom validation, predicates and isomorphism.

A cell is a frozenset of integer vertex ids.  A complex is a map from cells
to ranks satisfying the four axioms (monotone rank, closure under
intersection, no rank gaps, diamond property).  The empty cell is never
stored; it plays the role of the rank -1 element where needed.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import networkx as nx

from . import errors as E


def cell(*vs):
    if len(vs) == 1 and not isinstance(vs[0], int):
        return frozenset(vs[0])
    return frozenset(vs)


def cell_key(x, rank=None):
    """Canonical sort key: rank first, then the sorted vertex list."""
    return (rank if rank is not None else len(x), sorted(x))


def _sorted_cells(ranks):
    return tuple(sorted(ranks, key=lambda x: (ranks[x], sorted(x))))


class CellComplex:
    """An immutable ranked family of cells.

    Use ``build_complex`` for untrusted input; the constructor assumes the
    axioms already hold (it is what internal constructions call).
    """

    def __init__(self, ranks):
        self._rk = {frozenset(x): int(r) for x, r in dict(ranks).items()}

    # basic access
    def rank(self, x):
        try:
            return self._rk[x]
        except KeyError:
            raise E.CellNotFound("cell not in complex", cell=x) from None

    def get_rank(self, x, default=None):
        return self._rk.get(x, default)

    def __contains__(self, x):
        return x in self._rk

    def __len__(self):
        return len(self._rk)

    def __iter__(self):
        return iter(self.cells)

    def __eq__(self, other):
        return isinstance(other, CellComplex) and self._rk == other._rk

    def __hash__(self):
        return hash(frozenset(self._rk.items()))

    def __repr__(self):
        return f"CellComplex(f={self.f_vector()})"

    @property
    def ranks(self):
        return dict(self._rk)

    @cached_property
    def cells(self):
        return _sorted_cells(self._rk)

    @cached_property
    def Rk(self):
        return max(self._rk.values(), default=-1)

    @cached_property
    def by_rank(self):
        out = {}
        for x in self.cells:
            out.setdefault(self._rk[x], []).append(x)
        return out

    def cells_of_rank(self, r):
        return list(self.by_rank.get(r, ()))

    @cached_property
    def vertices(self):
        return sorted(next(iter(x)) for x in self.by_rank.get(0, ()))

    @cached_property
    def vertex_set(self):
        return frozenset(self.vertices)

    def f_vector(self):
        return tuple(len(self.by_rank.get(r, ())) for r in range(self.Rk + 1))

    @cached_property
    def _containing(self):
        idx = {}
        for x in self.cells:
            for v in x:
                idx.setdefault(v, []).append(x)
        return idx

    def containing(self, v):
        """All cells containing vertex v."""
        return list(self._containing.get(v, ()))

    def supersets(self, x):
        """Cells strictly containing x."""
        if not x:
            return list(self.cells)
        vs = sorted(x, key=lambda v: len(self._containing.get(v, ())))
        return [y for y in self._containing.get(vs[0], ()) if x < y]

    def subsets(self, x):
        """Cells strictly contained in x."""
        seen = set()
        out = []
        for v in x:
            for y in self._containing.get(v, ()):
                if y not in seen and y < x:
                    seen.add(y)
                    out.append(y)
        return out

    @cached_property
    def _cofaces(self):
        co = {x: [] for x in self.cells}
        for y in self.cells:
            ry = self._rk[y]
            for x in self.subsets(y):
                if self._rk[x] == ry - 1:
                    co[x].append(y)
        return co

    @cached_property
    def _faces(self):
        fa = {x: [] for x in self.cells}
        for x, ys in self._cofaces.items():
            for y in ys:
                fa[y].append(x)
        return fa

    def cofaces(self, x):
        if x not in self._rk:
            raise E.CellNotFound("cell not in complex", cell=x)
        return list(self._cofaces[x])

    def faces(self, x):
        if x not in self._rk:
            raise E.CellNotFound("cell not in complex", cell=x)
        return list(self._faces[x])

    @cached_property
    def maximal_cells(self):
        return [x for x in self.cells if not self._cofaces[x]]

    def edges(self):
        return self.cells_of_rank(1)

    def edges_at(self, v):
        return [x for x in self._containing.get(v, ()) if self._rk[x] == 1]

    def neighbors(self, v):
        out = []
        for e in self.edges_at(v):
            out.extend(u for u in e if u != v)
        return out

    # derived complexes
    def restrict(self, A):
        A = frozenset(A)
        return CellComplex({x: r for x, r in self._rk.items() if x <= A})

    def sub(self, cells):
        return CellComplex({x: self._rk[x] for x in cells})

    def relabel(self, mapping):
        return CellComplex({frozenset(mapping[v] for v in x): r for x, r in self._rk.items()})

    def renumbered(self):
        """Copy with vertices numbered 0..n-1 in sorted order, plus origins."""
        order = self.vertices
        fwd = {v: i for i, v in enumerate(order)}
        return self.relabel(fwd), {i: v for v, i in fwd.items()}

    def to_pairs(self):
        return [(sorted(x), self._rk[x]) for x in self.cells]


EMPTY = CellComplex({})


# ---------------------------------------------------------------------------
# validation

def _normalize(ranked_cells):
    if isinstance(ranked_cells, CellComplex):
        return [(x, r) for x, r in ranked_cells.ranks.items()]
    if isinstance(ranked_cells, dict):
        return [(frozenset(x), r) for x, r in ranked_cells.items()]
    out = []
    for item in ranked_cells:
        x, r = item
        out.append((frozenset(x), r))
    return out


def axiom_violations(ranked_cells):
    """Return every axiom violation found in the input (possibly empty)."""
    items = _normalize(ranked_cells)
    bad = []
    ranks = {}
    for x, r in items:
        if not x:
            bad.append(E.ValidationError("empty cell"))
            continue
        if not isinstance(r, int) or isinstance(r, bool) or r < 0:
            bad.append(E.ValidationError("rank must be a non-negative integer", cell=x, rank=r))
            continue
        if x in ranks:
            bad.append(E.DuplicateCell("cell listed twice", cell=x))
            continue
        ranks[x] = r
    verts = set().union(*ranks) if ranks else set()
    for v in sorted(verts):
        if ranks.get(frozenset([v])) != 0:
            bad.append(E.MissingVertexRank0("vertex lacks a rank-0 singleton", vertex=v))
    K = CellComplex(ranks)
    cells = K.cells
    below = {y: K.subsets(y) for y in cells}
    for y in cells:
        for x in below[y]:
            if ranks[x] >= ranks[y]:
                bad.append(E.RankNotMonotone("rank not increasing", x=x, y=y))
    # intersections: only pairs sharing a vertex can fail
    index = {x: i for i, x in enumerate(cells)}
    for x in cells:
        i = index[x]
        near = set()
        for v in x:
            near.update(K._containing[v])
        for y in near:
            if index[y] <= i:
                continue
            z = x & y
            if z not in ranks:
                bad.append(E.IntersectionNotCell("intersection is not a cell", x=x, y=y))
    for y in cells:
        ry = ranks[y]
        sub = below[y]
        for x in sub:
            rx = ranks[x]
            if not any(ranks[z] == rx + 1 and x < z for z in sub + [y]):
                bad.append(E.RankGap("no face chain from x inside y", x=x, y=y))
            if rx == ry - 2:
                mids = [z for z in sub if x < z and ranks[z] == rx + 1]
                if len(mids) != 2:
                    bad.append(E.DiamondViolation("diamond property fails", x=x, y=y, count=len(mids)))
    return bad


_ORDER = [E.ValidationError, E.DuplicateCell, E.MissingVertexRank0, E.RankNotMonotone,
          E.IntersectionNotCell, E.RankGap, E.DiamondViolation]


def build_complex(ranked_cells):
    """Validate ranked cells and return a CellComplex.

    On failure raises the first violation (in axiom order) with the full
    list attached as ``.violations``.
    """
    bad = axiom_violations(ranked_cells)
    if bad:
        bad.sort(key=lambda e: _ORDER.index(type(e)))
        first = bad[0]
        first.violations = bad
        raise first
    return CellComplex({x: r for x, r in _normalize(ranked_cells)})


def is_valid(ranked_cells):
    return not axiom_violations(ranked_cells)


def simplicial_closure(facets):
    """The simplicial complex generated by a list of vertex sets."""
    ranks = {}
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            for s in combinations(f, k):
                ranks[frozenset(s)] = k - 1
    return CellComplex(ranks)


# ---------------------------------------------------------------------------
# elementary operations

def skeleton(K, k):
    if k < 0 or k > max(K.Rk, 0):
        raise E.KOutOfRange("k outside 0..Rk", k=k, Rk=K.Rk)
    return CellComplex({x: r for x, r in K.ranks.items() if r <= k})


def restriction(K, A):
    A = frozenset(A)
    unknown = A - K.vertex_set
    if unknown:
        raise E.UnknownVertex("vertices not in complex", vertices=unknown)
    return K.restrict(A)


def is_pure(K):
    R = K.Rk
    return all(K.rank(z) == R for z in K.maximal_cells)


def boundary_cells(K):
    """Sub-maximal cells with exactly one coface."""
    R = K.Rk
    return [y for y in K.cells_of_rank(R - 1) if len(K.cofaces(y)) == 1]


def boundary(K):
    """Union of K ∩ y over the sub-maximal cells y with a single coface."""
    if not is_pure(K):
        raise E.NotPure("boundary needs a pure complex", witness=_impure_witness(K))
    out = {}
    for y in boundary_cells(K):
        for x in K.subsets(y) + [y]:
            out[x] = K.rank(x)
    return CellComplex(out)


def _impure_witness(K):
    R = K.Rk
    for z in K.maximal_cells:
        if K.rank(z) != R:
            return z
    return None


def has_boundary_cell(K):
    """True if some sub-maximal cell lies in exactly one maximal cell.

    For rank 0 the empty cell is the sub-maximal one: a single point has a
    boundary, two points do not.
    """
    if K.Rk == 0:
        return len(K.vertices) == 1
    return bool(boundary_cells(K))


# ---------------------------------------------------------------------------
# predicates

def is_graph_based(K):
    return all(len(e) == 2 for e in K.cells_of_rank(1))


def is_non_branching(K):
    R = K.Rk
    if R == 0:
        return len(K.vertices) <= 2
    return all(len(K.cofaces(y)) <= 2 for y in K.cells_of_rank(R - 1))


def is_non_singular(K):
    return len(K) > 0 and is_graph_based(K) and is_pure(K) and is_non_branching(K)


def is_closed(K):
    return is_non_singular(K) and not has_boundary_cell(K)


def _components(nodes, adj):
    nodes = list(nodes)
    seen = set()
    comps = []
    for s in nodes:
        if s in seen:
            continue
        comp = []
        q = deque([s])
        seen.add(s)
        while q:
            u = q.popleft()
            comp.append(u)
            for w in adj.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    q.append(w)
        comps.append(comp)
    return comps


def vertex_components(K, within=None):
    """Connected components (vertex lists) of the 1-skeleton of K ∩ within."""
    vs = K.vertices if within is None else sorted(within)
    vset = set(vs)
    adj = {v: [u for u in K.neighbors(v) if u in vset] for v in vs}
    return _components(vs, adj)


def is_connected(K):
    return len(K) > 0 and is_graph_based(K) and len(vertex_components(K)) == 1


def is_cell_connected(K):
    if not is_graph_based(K):
        return False
    return all(len(vertex_components(K, x)) == 1 for x in K.cells)


def is_local(K):
    return is_connected(K) and is_cell_connected(K)


def is_simplicial(K):
    return all(K.rank(x) == len(x) - 1 for x in K.cells)


def dual_graph_edges(K):
    """Pairs of maximal cells meeting in a sub-maximal cell, keyed by it."""
    R = K.Rk
    out = {}
    for y in K.cells_of_rank(R - 1):
        co = [z for z in K.cofaces(y) if K.rank(z) == R]
        if len(co) == 2:
            out[y] = tuple(sorted(co, key=sorted))
    return out


def _dual_graph_adj(K, restrict_to=None):
    R = K.Rk
    tops = [z for z in K.maximal_cells if K.rank(z) == R]
    if restrict_to is not None:
        tops = [z for z in tops if restrict_to <= z]
    adj = {z: [] for z in tops}
    for y, (a, b) in dual_graph_edges(K).items():
        if restrict_to is not None and not restrict_to <= y:
            continue
        adj[a].append(b)
        adj[b].append(a)
    return tops, adj


def is_strongly_connected(K):
    tops, adj = _dual_graph_adj(K)
    return len(tops) > 0 and len(_components(tops, adj)) == 1


def pinches(K):
    """Cells x whose dual-graph neighbourhood x̄ is disconnected."""
    if len(K) == 0:
        return []
    out = []
    for x in K.cells:
        tops, adj = _dual_graph_adj(K, x)
        if len(_components(tops, adj)) > 1:
            out.append(x)
    return out


def is_non_pinching(K):
    if pinches(K):
        return False
    if not is_pure(K):
        return True
    return not pinches(boundary(K))


def boundary_components(K):
    """Connected components of the boundary, as sub-complexes.

    Components are ordered by their smallest vertex.
    """
    B = boundary(K)
    comps = vertex_components(B)
    comps.sort(key=min)
    return [B.restrict(c) for c in comps]


# ---------------------------------------------------------------------------
# classification

@dataclass
class PropertyReport:
    flags: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def __getitem__(self, k):
        return self.flags[k]

    def __getattr__(self, k):
        flags = self.__dict__.get("flags", {})
        if k in flags:
            return flags[k]
        raise AttributeError(k)

    def to_dict(self):
        return {"flags": dict(self.flags),
                "witnesses": {k: E._plain(v) for k, v in self.witnesses.items()}}


def classify(K, full_upto=None):
    from . import reconstruct  # fullness and evenness live there

    f = {}
    w = {}
    gb = is_graph_based(K)
    f["graph_based"] = gb
    if not gb:
        w["graph_based"] = next(e for e in K.cells_of_rank(1) if len(e) != 2)
    pure = is_pure(K)
    f["pure"] = pure
    if not pure:
        w["pure"] = _impure_witness(K)
    nb = is_non_branching(K)
    f["non_branching"] = nb
    if not nb and K.Rk > 0:
        w["non_branching"] = next(y for y in K.cells_of_rank(K.Rk - 1) if len(K.cofaces(y)) > 2)
    f["non_singular"] = len(K) > 0 and gb and pure and nb
    f["closed"] = f["non_singular"] and not has_boundary_cell(K)
    if f["non_singular"] and not f["closed"] and K.Rk > 0:
        w["closed"] = boundary_cells(K)[0]
    conn = is_connected(K)
    f["connected"] = conn
    if gb and not conn and len(K):
        comps = vertex_components(K)
        w["connected"] = (comps[0][0], comps[1][0])
    cc = gb and all(len(vertex_components(K, x)) == 1 for x in K.cells)
    f["cell_connected"] = cc
    if gb and not cc:
        w["cell_connected"] = next(x for x in K.cells if len(vertex_components(K, x)) > 1)
    f["local"] = conn and cc
    f["strongly_connected"] = is_strongly_connected(K)
    kp = pinches(K)
    bp = pinches(boundary(K)) if pure else []
    f["non_pinching"] = not kp and not bp
    if kp:
        w["non_pinching"] = kp[0]
    elif bp:
        w["non_pinching"] = bp[0]
    f["simplicial"] = is_simplicial(K)
    if not f["simplicial"]:
        w["simplicial"] = next(x for x in K.cells if K.rank(x) != len(x) - 1)
    if gb:
        ev, ew = reconstruct.check_even(K)
        f["even"] = ev
        if not ev:
            w["even"] = ew
    else:
        f["even"] = False
    top = K.Rk if full_upto is None else full_upto
    f["full"] = {}
    for r in range(2, max(top, 1) + 1):
        ok, wit = reconstruct.check_full(K, r)
        f["full"][r] = ok
        if not ok:
            w[f"full_{r}"] = wit
    return PropertyReport(f, w)


# ---------------------------------------------------------------------------
# star, link, joins and meets

def join(K, x, y):
    """Least upper bound of two cells, or None when no cell holds both."""
    u = x | y
    if u in K:
        return u
    ups = [z for z in K.supersets(u)] if u else list(K.cells)
    if not ups:
        return None
    ups.sort(key=K.rank)
    least = ups[0]
    return least if all(least <= z for z in ups) else None


def meet_of_cofaces(K, x):
    """Greatest lower bound of the cofaces of x (empty frozenset for ∅)."""
    co = K.cofaces(x)
    if not co:
        return frozenset()
    if len(co) == 1:
        return co[0]
    return frozenset.intersection(*co)


def star(K, x):
    if x not in K:
        raise E.CellNotFound("cell not in complex", cell=x)
    return [y for y in K.cells if join(K, x, y) is not None]


def link(K, x):
    return [y for y in star(K, x) if not (x & y)]


# ---------------------------------------------------------------------------
# isomorphism

def hasse_graph(K):
    G = nx.DiGraph()
    for x in K.cells:
        G.add_node(x, rank=K.rank(x), sig=(K.rank(x), len(K._faces[x]), len(K._cofaces[x])))
    for x in K.cells:
        for y in K._cofaces[x]:
            G.add_edge(x, y)
    return G


def _refine(colors, adj):
    """Coarsest equitable refinement of a colouring (colour refinement)."""
    n_classes = len(set(colors))
    while True:
        sigs = [(colors[u], tuple(sorted((k, colors[w]) for w, k in adj[u])))
                for u in range(len(colors))]
        ids = {sg: i for i, sg in enumerate(sorted(set(sigs)))}
        colors = [ids[sg] for sg in sigs]
        m = len(ids)
        if m == n_classes:
            return colors
        n_classes = m


def match_graphs(GA, GB, label="sig", edge_kind=None):
    """Label-preserving isomorphism of two directed graphs, or None.

    Individualization-refinement: refine a joint colouring, pin one node of
    the smallest ambiguous class to each candidate in turn, and recurse.
    Edge kinds (attribute edge_kind) and directions must be preserved.
    """
    if GA.number_of_nodes() != GB.number_of_nodes() or GA.number_of_edges() != GB.number_of_edges():
        return None
    A, B = list(GA.nodes), list(GB.nodes)
    n = len(A)
    idx = {("a", u): i for i, u in enumerate(A)}
    idx.update({("b", u): n + i for i, u in enumerate(B)})
    kinds = {}
    adj = [[] for _ in range(2 * n)]
    edge_sets = []
    for tag, G in (("a", GA), ("b", GB)):
        es = set()
        for u, w, d in G.edges(data=True):
            k = kinds.setdefault(d.get(edge_kind) if edge_kind else None, len(kinds))
            iu, iw = idx[(tag, u)], idx[(tag, w)]
            adj[iu].append((iw, 2 * k))
            adj[iw].append((iu, 2 * k + 1))
            es.add((iu, iw, k))
        edge_sets.append(es)
    labs = [repr(GA.nodes[u].get(label)) for u in A] + [repr(GB.nodes[u].get(label)) for u in B]
    ids = {x: i for i, x in enumerate(sorted(set(labs)))}
    start = [ids[x] for x in labs]

    def balanced(colors):
        ca, cb = {}, {}
        for i in range(n):
            ca[colors[i]] = ca.get(colors[i], 0) + 1
            cb[colors[n + i]] = cb.get(colors[n + i], 0) + 1
        return ca if ca == cb else None

    def search(colors):
        colors = _refine(colors, adj)
        counts = balanced(colors)
        if counts is None:
            return None
        ambiguous = [c for c, k in counts.items() if k > 1]
        if not ambiguous:
            where = {colors[n + i]: n + i for i in range(n)}
            f = {i: where[colors[i]] for i in range(n)}
            ok = all((f[u], f[w], k) in edge_sets[1] for u, w, k in edge_sets[0])
            return f if ok else None
        c = min(ambiguous, key=lambda c: (counts[c], c))
        a = next(i for i in range(n) if colors[i] == c)
        fresh = max(colors) + 1
        for b in range(n, 2 * n):
            if colors[b] != c:
                continue
            trial = list(colors)
            trial[a] = trial[b] = fresh
            f = search(trial)
            if f is not None:
                return f
        return None

    f = search(start)
    if f is None:
        return None
    return {A[i]: B[j - n] for i, j in f.items()}


def is_isomorphic(K, J, labels=None):
    """Return a vertex bijection inducing a rank-preserving cell bijection.

    labels, if given, is a pair of dicts (cell -> label) that the bijection
    must respect, e.g. to carry a marked sub-complex onto another.
    """
    if K.f_vector() != J.f_vector() or len(K) != len(J):
        return None
    if len(K) == 0:
        return {}
    GK, GJ = hasse_graph(K), hasse_graph(J)
    if labels is not None:
        for G, lab in ((GK, labels[0]), (GJ, labels[1])):
            for x in G.nodes:
                G.nodes[x]["sig"] = G.nodes[x]["sig"] + (lab.get(x),)
    m = match_graphs(GK, GJ)
    if m is None:
        return None
    out = {next(iter(x)): next(iter(y)) for x, y in m.items() if K.rank(x) == 0}
    return dict(sorted(out.items()))


def check_vertex_isomorphism(K, J, vmap):
    """True if vmap sends the cells of K bijectively and rank-wise onto J."""
    if len(K) != len(J):
        return False
    img = set()
    for x in K.cells:
        y = frozenset(vmap[v] for v in x)
        if J.get_rank(y) != K.rank(x):
            return False
        img.add(y)
    return len(img) == len(J)


# ---------------------------------------------------------------------------
# maps between complexes

class CcMap:
    """A total cell-to-cell map between two complexes."""

    def __init__(self, source, target, mapping, name=""):
        self.source = source
        self.target = target
        self.mapping = {frozenset(k): frozenset(v) for k, v in dict(mapping).items()}
        self.name = name

    def __call__(self, x):
        return self.mapping[x]

    def __repr__(self):
        return f"CcMap({self.name or '?'}: {len(self.source)} -> {len(self.target)} cells)"

    def is_total(self):
        return all(x in self.mapping for x in self.source.cells) and \
            all(y in self.target for y in self.mapping.values())

    def is_surjective(self):
        return set(self.mapping.values()) == set(self.target.cells)

    def is_poset_homomorphism(self):
        S = self.source
        for y in S.cells:
            for x in S.subsets(y):
                if not self.mapping[x] <= self.mapping[y]:
                    return False
        return True

    def is_cc_homomorphism(self):
        if not self.is_poset_homomorphism():
            return False
        S, T = self.source, self.target
        hit = {}
        for x in S.cells:
            hit.setdefault(self.mapping[x], set()).add(S.rank(x))
        return all(T.rank(y) in rs for y, rs in hit.items())

    def preimage(self, y):
        return [x for x in self.source.cells if self.mapping[x] == y]

    @cached_property
    def fibres(self):
        out = {}
        for x in self.source.cells:
            out.setdefault(self.mapping[x], []).append(x)
        return out

    def compose(self, other):
        """self ∘ other (apply other first)."""
        return CcMap(other.source, self.target,
                     {x: self.mapping[y] for x, y in other.mapping.items()},
                     name=f"{self.name}∘{other.name}")

    def is_isomorphism(self):
        return (self.is_total() and self.is_surjective()
                and len(set(self.mapping.values())) == len(self.mapping)
                and all(self.source.rank(x) == self.target.rank(y) for x, y in self.mapping.items()))

    @staticmethod
    def identity(K):
        return CcMap(K, K, {x: x for x in K.cells}, name="id")

    @staticmethod
    def from_vertex_map(K, J, vmap):
        return CcMap(K, J, {x: frozenset(vmap[v] for v in x) for x in K.cells})
