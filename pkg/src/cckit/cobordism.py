"""Collars, midsections, relative complexes, cobordisms and their duals."""

from dataclasses import dataclass, field

from . import errors as E
from .core import (CellComplex, boundary, boundary_components, is_isomorphic,
                   is_local, is_non_singular, is_non_pinching, is_cell_connected,
                   is_closed, vertex_components, is_pure)
from .duality import dual_set, dual_closed


def _vset(B):
    if isinstance(B, CellComplex):
        return B.vertex_set
    return frozenset(B)


def collar(K, B):
    """Cells meeting B without lying inside it."""
    B = _vset(B)
    return [x for x in K.cells if (x & B) and not x <= B]


def collar_edges(K, J, x=None):
    """E_J^x: edges of K inside x with exactly one vertex in J."""
    B = _vset(J)
    es = K.cells_of_rank(1) if x is None else [e for e in K.subsets(x) + [x] if K.rank(e) == 1]
    return [e for e in es if len(e & B) == 1]


def is_non_degenerate(K, J):
    B = _vset(J)
    for x in K.cells:
        if x not in J and x <= B:
            return False
    return True


def in_B(J):
    """Membership in the class of closed, non-pinching, cell-connected complexes.

    The empty complex belongs.  A non-empty rank-0 complex is accepted as
    closed here: it has no sub-maximal cells, and boundary components of
    1-complexes are single points.
    """
    if len(J) == 0:
        return True
    if J.Rk == 0:
        return True
    return is_closed(J) and is_non_pinching(J) and is_cell_connected(J)


def in_C(K):
    return len(K) > 0 and is_non_singular(K) and is_non_pinching(K) and is_local(K)


@dataclass
class Midsection:
    complex: CellComplex
    origin: dict  # midsection cell -> cell of K in the collar
    edge_ids: dict  # collar edge of K -> midsection vertex id

    def cell_of(self, x):
        inv = {v: k for k, v in self.origin.items()}
        return inv[x]


def _midsection(K, J):
    B = _vset(J)
    cells = collar(K, B)
    edges = [e for e in cells if K.rank(e) == 1]
    ids = {e: i for i, e in enumerate(edges)}
    ranks = {}
    origin = {}
    for x in cells:
        m = frozenset(ids[e] for e in collar_edges(K, B, x))
        if not m:
            raise E.PreconditionFailed("collar cell without collar edges", cell=x)
        if m in ranks:
            raise E.PreconditionFailed("two collar cells share their collar edges", cell=x)
        ranks[m] = K.rank(x) - 1
        origin[m] = x
    return Midsection(CellComplex(ranks), origin, ids)


def midsection(K, J):
    """M_J^K: collar-edge sets E_J^x for x in the collar, rank rk(x) - 1."""
    if not is_local(K):
        raise E.PreconditionFailed("K must be local", predicate="local")
    if any(x not in K or K.rank(x) != J.rank(x) for x in J.cells) or len(J) >= len(K):
        raise E.PreconditionFailed("J must be a proper sub-complex of K", predicate="sub")
    if not is_non_degenerate(K, J):
        raise E.PreconditionFailed("(K, J) is degenerate", predicate="non_degenerate")
    if not collar(K, J):
        raise E.PreconditionFailed("empty collar", predicate="collar")
    return _midsection(K, J)


def is_relative_local(K, J):
    if not is_non_degenerate(K, J) or not is_local(K):
        return False
    for comp in vertex_components(J) if len(J) else []:
        J0 = J.restrict(comp)
        B = J0.vertex_set
        for x in collar(K, B):
            if len(vertex_components(J0, x & B)) != 1:
                return False
        M = _midsection(K, J0).complex
        if not is_cell_connected(M):
            return False
    return True


def is_exactly_collared(K, J):
    """The map E_J^x -> J ∩ x is a cc-isomorphism from the midsection to J."""
    if len(J) == 0:
        return True
    if not is_non_degenerate(K, J):
        return False
    try:
        M = _midsection(K, J)
    except E.PreconditionFailed:
        return False
    B = J.vertex_set
    image = {}
    for m, x in M.origin.items():
        y = x & B
        if y not in J or J.rank(y) != M.complex.rank(m):
            return False
        image[m] = y
    if len(set(image.values())) != len(image) or set(image.values()) != set(J.cells):
        return False
    for a in M.complex.cells:
        for b in M.complex.cells:
            if (a <= b) != (image[a] <= image[b]):
                return False
    return True


# ---------------------------------------------------------------------------
# cobordisms

@dataclass
class Cobordism:
    K: CellComplex
    J: CellComplex
    removed: tuple = ()
    origins: dict = field(default_factory=dict)

    @property
    def rank(self):
        return self.K.Rk

    def outgoing(self):
        B = boundary(self.K)
        return B.sub([x for x in B.cells if x not in self.J])


@dataclass
class CobordismReport:
    items: list
    cobordism: Cobordism = None

    @property
    def ok(self):
        return all(i["ok"] for i in self.items)

    def failures(self):
        return [i for i in self.items if not i["ok"]]

    def to_dict(self):
        return {"ok": self.ok, "items": [{k: E._plain(v) for k, v in i.items()} for i in self.items]}


def removed_complex(K, removed):
    comps = boundary_components(K) if len(K) and is_pure(K) else []
    bad = [i for i in removed if not 0 <= i < len(comps)]
    if bad:
        raise E.ValidationError("removed component index out of range", indices=bad,
                                count=len(comps))
    cells = {}
    for i in removed:
        cells.update(comps[i].ranks)
    return CellComplex(cells)


def validate_cobordism(K, removed=()):
    """Itemized check that (K - J) is a cobordism.

    removed is a list of boundary component indices, or a sub-complex J.
    """
    items = []

    def add(clause, ok, **wit):
        items.append({"clause": clause, "ok": bool(ok), **wit})

    add("non_singular", is_non_singular(K))
    add("non_pinching", is_non_singular(K) and is_non_pinching(K))
    add("local", is_local(K))
    if not all(i["ok"] for i in items):
        return CobordismReport(items)
    comps = boundary_components(K)
    if isinstance(removed, CellComplex):
        J = removed
        idx = tuple(i for i, c in enumerate(comps) if c.vertex_set <= J.vertex_set)
        union = removed_complex(K, idx)
        add("union_of_components", union == J, components=len(comps))
    else:
        idx = tuple(sorted(set(removed)))
        try:
            J = removed_complex(K, idx)
        except E.ValidationError as exc:
            add("component_indices", False, **exc.details)
            return CobordismReport(items)
    add("removed_in_B", in_B(J))
    add("non_degenerate", is_non_degenerate(K, J))
    add("relative_local", is_relative_local(K, J))
    rep = CobordismReport(items)
    if rep.ok:
        rep.cobordism = Cobordism(K, J, idx)
    return rep


def make_cobordism(K, removed=()):
    rep = validate_cobordism(K, removed)
    if not rep.ok:
        raise E.ValidationFailed("not a cobordism", failures=rep.failures())
    return rep.cobordism


def dual_cobordism(cob):
    """(∼dual(K ∖ J) ⊔ dual(∂K ∖ J)) with dual(∂K ∖ J) removed.

    Vertex ids are fresh; ``origins`` maps each to ("K", top cell of K) or
    ("dK", top cell of the boundary).
    """
    K, J = cob.K, cob.J
    R = K.Rk
    B = boundary(K)
    L = [y for y in B.cells if y not in J]
    Lset = set(L)
    tops = [z for z in K.cells if K.rank(z) == R]
    btops = [y for y in L if B.rank(y) == R - 1]
    ids = {("K", z): i for i, z in enumerate(tops)}
    for y in btops:
        ids[("dK", y)] = len(ids)
    ranks = {}
    removed_cells = set()
    for x in K.cells:
        if x in J:
            continue
        d = {ids[("K", z)] for z in dual_set(K, x)}
        if x in Lset:
            d |= {ids[("dK", y)] for y in btops if x <= y}
        ranks[frozenset(d)] = R - K.rank(x)
    for x in L:
        d = frozenset(ids[("dK", y)] for y in btops if x <= y)
        ranks[d] = (R - 1) - B.rank(x)
        removed_cells.add(d)
    K2 = CellComplex(ranks)
    J2 = K2.sub(removed_cells)
    rep = validate_cobordism(K2, J2)
    if not rep.ok:
        raise E.ValidationFailed("dual is not a cobordism", failures=rep.failures())
    out = rep.cobordism
    out.origins = {i: key for key, i in ids.items()}
    return out


def cobordism_isomorphic(a, b):
    """Vertex bijection K_a -> K_b carrying J_a onto J_b, or None."""
    la = {x: x in a.J for x in a.K.cells}
    lb = {x: x in b.J for x in b.K.cells}
    return is_isomorphic(a.K, b.K, labels=(la, lb))


def dual_cobordism_report(cob):
    """Check the conclusions of the dual cobordism theorem on one input."""
    d = dual_cobordism(cob)
    K, J = cob.K, cob.J
    R = K.Rk
    out = {"valid": True, "exactly_collared": is_exactly_collared(d.K, d.J)}
    # ∂ dual = dual(∂K ∖ J) ⊔ dual(K_J)
    ids = {key: i for i, key in d.origins.items()}
    coll = collar(K, J) if len(J) else []
    dual_KJ = {}
    for x in coll:
        c = frozenset(ids[("K", z)] for z in dual_set(K, x))
        dual_KJ[c] = R - K.rank(x)
    bd = boundary(d.K)
    expected = set(d.J.cells) | set(dual_KJ)
    out["boundary_decomposition"] = set(bd.cells) == expected and not (set(d.J.cells) & set(dual_KJ))
    if coll:
        DK = CellComplex(dual_KJ)
        M = _midsection(K, J).complex
        out["dual_collar_in_B"] = in_B(DK)
        # a rank-0 midsection is its own dual
        DM = M if M.Rk == 0 else (dual_closed(M)[0] if is_closed(M) else None)
        out["dual_collar_matches_midsection"] = (
            DM is not None and is_isomorphic(DK, DM) is not None)
    if out["exactly_collared"] and is_exactly_collared(K, J):
        dd = dual_cobordism(d)
        out["double_dual_isomorphic"] = cobordism_isomorphic(dd, cob) is not None
    out["dual"] = d
    return out
