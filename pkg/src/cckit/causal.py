"""Reductions, collapses, transitions, slices, gluing and the braket layer.

Maps are ``CcMap`` objects (cell -> cell).  Checkers never raise on a
failed condition; they return a ``Certificate`` listing every violation
with a witness.  Constructions that need verified inputs raise instead.
"""

from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from . import errors as E
from .core import (CellComplex, CcMap, axiom_violations, match_graphs, boundary, boundary_components,
                   is_local, is_pure, join, vertex_components)
from .cobordism import (collar, collar_edges, in_B, in_C, is_non_degenerate,
                        is_relative_local, _midsection, validate_cobordism)
from .duality import dual_closed

EMPTY_CELL = frozenset()


# ---------------------------------------------------------------------------
# bounds

def glb(K, cells):
    """Greatest lower bound in K ∪ {∅}; ∅ for an empty family, None if ambiguous."""
    cells = list(cells)
    if not cells:
        return EMPTY_CELL
    inter = frozenset.intersection(*cells)
    if not inter:
        return EMPTY_CELL
    if inter in K:
        return inter
    below = K.subsets(inter)
    tops = [x for x in below if not any(x < y for y in below)]
    if not tops:
        return EMPTY_CELL
    return tops[0] if len(tops) == 1 else None


def lub(K, cells):
    """Least upper bound in K, or None when no cell contains them all."""
    cells = list(cells)
    if not cells:
        return EMPTY_CELL
    u = frozenset.union(*cells)
    if u in K:
        return u
    ups = K.supersets(u)
    lows = [z for z in ups if not any(y < z for y in ups)]
    return lows[0] if len(lows) == 1 else None


def _up(K, x):
    return [x] + K.supersets(x)


def _down(K, x):
    return [x] + K.subsets(x)


# ---------------------------------------------------------------------------
# reductions and collapses

@dataclass
class Certificate:
    kind: str
    map: CcMap
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def conditions(self):
        return sorted({v["condition"] for v in self.violations})

    def to_dict(self):
        return {"kind": self.kind, "ok": self.ok,
                "violations": [{k: E._plain(v) for k, v in d.items()} for d in self.violations]}


def _homomorphism_violations(f):
    out = []
    S, T = f.source, f.target
    missing = [x for x in S.cells if x not in f.mapping]
    if missing:
        out.append({"condition": "total", "cell": missing[0]})
        return out
    stray = [x for x, y in f.mapping.items() if y not in T]
    if stray:
        out.append({"condition": "total", "cell": stray[0]})
        return out
    if not f.is_surjective():
        miss = [y for y in T.cells if y not in set(f.mapping.values())]
        out.append({"condition": "surjective", "cell": miss[0]})
    for y in S.cells:
        for x in S.subsets(y):
            if not f(x) <= f(y):
                out.append({"condition": "homomorphism", "x": x, "y": y})
                return out
    return out


def check_reduction(rho):
    """Test r1-r5 literally, plus surjective poset homomorphism."""
    bad = _homomorphism_violations(rho)
    if any(v["condition"] == "total" for v in bad):
        return Certificate("reduction", rho, bad)
    J, K = rho.source, rho.target
    fib = rho.fibres
    # r1
    for y in K.cells_of_rank(0):
        if len(fib.get(y, ())) != 1:
            bad.append({"condition": "r1", "vertex": y, "preimages": len(fib.get(y, ()))})
    for x in J.cells:
        rx = rho(x)
        co = J.cofaces(x)
        # r2
        m = glb(J, co)
        lhs = rho(m) if m else EMPTY_CELL
        rhs = glb(K, [rho(y) for y in co])
        if m is None or rhs is None or lhs != rhs:
            bad.append({"condition": "r2", "cell": x})
        # r3
        images = {}
        for w in _up(J, x):
            images.setdefault(rho(w), set()).add(J.rank(w))
        for y in _up(K, rx):
            if K.rank(y) not in images.get(y, ()):
                bad.append({"condition": "r3", "cell": x, "target": y})
                break
        # r4 / r5
        d = K.rank(rx) - J.rank(x)
        if d == 1:
            n = sum(1 for y in co if rho(y) == rx)
            if n != 2:
                bad.append({"condition": "r4", "cell": x, "count": n})
        elif d == 0:
            for y in K.cofaces(rx):
                n = sum(1 for w in co if rho(w) == y)
                if n != 1:
                    bad.append({"condition": "r5", "cell": x, "coface": y, "count": n})
                    break
    return Certificate("reduction", rho, bad)


def check_collapse(pi):
    """Test c1-c5 literally, plus surjective poset homomorphism."""
    bad = _homomorphism_violations(pi)
    if any(v["condition"] == "total" for v in bad):
        return Certificate("collapse", pi, bad)
    J, K = pi.source, pi.target
    fib = pi.fibres
    for z in K.maximal_cells:
        if len(fib.get(z, ())) != 1:
            bad.append({"condition": "c1", "cell": z, "preimages": len(fib.get(z, ()))})
    for x in J.cells:
        px = pi(x)
        fa = J.faces(x)
        if J.rank(x) >= 1:
            u = lub(K, [pi(y) for y in fa])
            if u is None or u != px:
                bad.append({"condition": "c2", "cell": x})
        images = {}
        for w in _down(J, x):
            images.setdefault(pi(w), set()).add(J.rank(w))
        for y in _down(K, px):
            if K.rank(y) not in images.get(y, ()):
                bad.append({"condition": "c3", "cell": x, "target": y})
                break
        d = J.rank(x) - K.rank(px)
        if d == 1:
            n = sum(1 for y in fa if pi(y) == px)
            if n != 2:
                bad.append({"condition": "c4", "cell": x, "count": n})
        elif d == 0:
            for y in K.faces(px):
                n = sum(1 for w in fa if pi(w) == y)
                if n != 1:
                    bad.append({"condition": "c5", "cell": x, "face": y, "count": n})
                    break
    return Certificate("collapse", pi, bad)


def require_reduction(rho):
    c = check_reduction(rho)
    if not c.ok:
        raise E.NotAReduction("map is not a reduction", violations=c.violations)
    return c


def require_collapse(pi):
    c = check_collapse(pi)
    if not c.ok:
        raise E.NotACollapse("map is not a collapse", violations=c.violations)
    return c


def dual_map(f, duals=None):
    """x̄ ↦ f(x)‾ between the duals of two closed complexes.

    duals, if given, is any object with get(X) -> (D, bij); it lets shared
    complexes dualize to the very same object.
    """
    if not in_B(f.source) or not in_B(f.target):
        raise E.NotInB("source and target must be closed, non-pinching and cell-connected")
    get = duals.get if duals is not None else dual_closed
    DS, bs = get(f.source)
    DT, bt = get(f.target)
    return CcMap(DS, DT, {bs[x]: bt[f(x)] for x in f.source.cells}, name=f"dual({f.name})")


dual_of_reduction = dual_map
dual_of_collapse = dual_map


def compose_reductions(rho1, rho2):
    """rho2 ∘ rho1 for verified reductions rho1: J -> K, rho2: K -> L."""
    require_reduction(rho1)
    require_reduction(rho2)
    out = rho2.compose(rho1)
    c = check_reduction(out)
    if not c.ok:
        raise E.CompositionFailed("composition is not a reduction", violations=c.violations)
    return out


def compose_collapses(pi1, pi2):
    require_collapse(pi1)
    require_collapse(pi2)
    out = pi2.compose(pi1)
    c = check_collapse(out)
    if not c.ok:
        raise E.CompositionFailed("composition is not a collapse", violations=c.violations)
    return out


# ---------------------------------------------------------------------------
# transitions and uniformity

def reduced_cell(K, J, x):
    """x_J: the J-ends of the collar edges inside x."""
    B = J.vertex_set
    return frozenset(v for e in collar_edges(K, B, x) for v in e & B)


@dataclass
class Transition:
    complex: CellComplex
    reduced: dict  # collar cell -> reduced cell
    problems: list = field(default_factory=list)


def _transition_ranks(K, J, coll, reduced):
    """Rank of each reduced cell via Rk(J ∩ x) over minimal representatives."""
    B = J.vertex_set
    by = {}
    for x in coll:
        by.setdefault(reduced[x], []).append(x)
    ranks, problems = {}, []
    for c, xs in by.items():
        mins = [x for x in xs if not any(y < x for y in xs)]
        vals = set()
        for x in mins:
            vals.add(max((J.rank(y) for y in J.restrict(x & B).cells), default=-1))
        if len(vals) != 1:
            problems.append({"clause": "rank_well_defined", "cell": c, "ranks": sorted(vals)})
        ranks[c] = max(vals)
    return ranks, problems


def transition(K, J):
    """J(K) with ranks Rk(J ∩ x).  Raises NotPure when ranks are ambiguous."""
    coll = collar(K, J)
    reduced = {x: reduced_cell(K, J, x) for x in coll}
    ranks, problems = _transition_ranks(K, J, coll, reduced)
    if problems:
        raise E.NotPure("transition ranks are not well defined", problems=problems)
    if any(not c for c in ranks):
        raise E.PreconditionFailed("collar cell without collar edges")
    viol = axiom_violations(ranks)
    T = CellComplex(ranks)
    return Transition(T, reduced, [{"clause": "axioms", "error": v.name, **v.details} for v in viol])


def check_uniform(K, J):
    """Itemized uniformity report for (K, J).

    A disconnected J is checked one connected component at a time, so
    non-degeneracy means no cell of K outside J sits on a single component.
    """
    comps = vertex_components(J) if len(J) else []
    if len(comps) <= 1:
        return _check_uniform_connected(K, J)
    merged = {}
    for i, c in enumerate(comps):
        for item in _check_uniform_connected(K, J.restrict(c))["items"]:
            cur = merged.setdefault(item["clause"], {"clause": item["clause"], "ok": True})
            if cur["ok"] and not item["ok"]:
                merged[item["clause"]] = dict(item, component=i)
    items = list(merged.values())
    return {"ok": all(i["ok"] for i in items), "items": items}


def _check_uniform_connected(K, J):
    items = []

    def add(clause, ok, error=None, **wit):
        d = {"clause": clause, "ok": bool(ok)}
        if not ok and error:
            d["error"] = error
        d.update(wit)
        items.append(d)

    B = J.vertex_set
    add("non_degenerate", is_non_degenerate(K, J))
    coll = collar(K, J)
    # purity, first clause: J ∩ x pure for x in the collar
    bad = next((x for x in coll if not is_pure(J.restrict(x & B))), None)
    add("pure_intersections", bad is None, "NotPure", **({"cell": bad} if bad else {}))
    # purity, second clause: minimal collar cells above x ∈ J share one rank
    bad = None
    for x in J.cells:
        above = [y for y in K.supersets(x) if y in set(coll)]
        mins = [y for y in above if not any(z < y for z in above)]
        if len({K.rank(y) for y in mins}) > 1:
            bad = x
            break
    add("pure_minimal_ranks", bad is None, "NotPure", **({"cell": bad} if bad else {}))
    reduced = {x: reduced_cell(K, J, x) for x in coll}
    # (U)
    bad = None
    for x in coll:
        for y in coll:
            if ((x & B) <= (y & B)) != (reduced[x] <= reduced[y]):
                bad = (x, y)
                break
        if bad:
            break
    add("uniformity", bad is None, "UniformityFailed", **({"pair": bad} if bad else {}))
    ranks, problems = _transition_ranks(K, J, coll, reduced)
    add("rank_well_defined", not problems, "NotPure", **(problems[0] if problems else {}))
    viol = axiom_violations(ranks) if all(ranks) else [E.ValidationError("empty reduced cell")]
    add("transition_valid", not viol, viol[0].name if viol else None)
    add("transition_in_B", not viol and in_B(CellComplex(ranks)), "NotInB")
    return {"ok": all(i["ok"] for i in items), "items": items}


def is_uniform(K, J):
    return check_uniform(K, J)["ok"]


@dataclass
class CanonicalMaps:
    rho: CcMap  # J -> J(K)
    pi: CcMap  # M_J^K -> J(K)
    transition: CellComplex
    midsection: object


def canonical_maps(K, J, check=True):
    """ρ_J^K : J -> J(K), x ↦ x_J and π_J^K : M_J^K -> J(K), E_J^x ↦ x_J."""
    if check:
        if not in_C(K):
            raise E.PreconditionFailed("K must be non-singular, non-pinching and local", predicate="C")
        bd = boundary(K)
        if any(x not in bd for x in J.cells) or not in_B(J):
            raise E.PreconditionFailed("J must be a closed union of boundary components", predicate="B")
        rep = check_uniform(K, J)
        if not rep["ok"]:
            raise E.PreconditionFailed("(K, J) is not uniform", predicate="uniform",
                                       failures=[i for i in rep["items"] if not i["ok"]])
        if not is_relative_local(K, J):
            raise E.PreconditionFailed("(K, J) is not local", predicate="local")
    T = transition(K, J)
    collset = set(T.reduced)
    rho = {}
    for x in J.cells:
        above = [y for y in K.supersets(x) if y in collset]
        mins = [y for y in above if not any(z < y for z in above)]
        if not mins:
            raise E.PreconditionFailed("cell of J outside the collar closure", cell=x)
        rho[x] = T.reduced[mins[0]]
    M = _midsection(K, J)
    pi = {m: T.reduced[x] for m, x in M.origin.items()}
    return CanonicalMaps(CcMap(J, T.complex, rho, name="rho"),
                         CcMap(M.complex, T.complex, pi, name="pi"), T.complex, M)


# ---------------------------------------------------------------------------
# compatibility, reflectivity, orthogonality

def _report(ok, **wit):
    return {"ok": ok, **({} if ok else wit)}


def check_compatible(j, l):
    """j: J -> I compatible with l: L -> I."""
    I = j.target
    fj, fl = j.fibres, l.fibres
    for w in I.cells:
        if len(fj.get(w, ())) != 1 and len(fl.get(w, ())) != 1:
            return _report(False, condition="unique_preimage", cell=w)
    J = j.source
    for x, y in combinations(J.cells, 2):
        u = join(J, x, y)
        if u is not None and j(u) != join(I, j(x), j(y)):
            return _report(False, condition="joins", pair=(x, y))
    L = l.source
    for x, y in combinations(L.cells, 2):
        if x & y and l(x & y) != (l(x) & l(y)):
            return _report(False, condition="meets", pair=(x, y))
    return _report(True)


def check_reflective(j, l):
    """j: I -> J and l: I -> L reflective."""
    I = j.source
    for w, v in combinations(I.cells, 2):
        a = join(j.target, j(w), j(v))
        b = join(l.target, l(w), l(v))
        if a is None or b is None:
            continue
        u = join(I, w, v)
        if u is None or j(u) != a or l(u) != b:
            return _report(False, pair=(w, v))
    return _report(True)


def check_orthogonal(j, l):
    """j: I -> J and l: I -> L orthogonal."""
    I = j.source
    for w, v in combinations(I.cells, 2):
        a = j(w) & j(v)
        b = l(w) & l(v)
        if not a or not b:
            continue
        u = w & v
        if not u or j(u) != a or l(u) != b:
            return _report(False, pair=(w, v))
    return _report(True)


def augmented_poset(phi_J, phi_L):
    """Cells φ_J(m) ⊔ φ_L(m) with rank rk_M(m) + 1; returns (cells, origin)."""
    if phi_J.target.vertex_set & phi_L.target.vertex_set:
        raise E.PreconditionFailed("targets must be disjoint")
    rep = check_orthogonal(phi_J, phi_L)
    if not rep["ok"]:
        raise E.NotOrthogonal("maps are not orthogonal", **rep)
    M = phi_J.source
    ranks, origin = {}, {}
    for m in M.cells:
        c = phi_J(m) | phi_L(m)
        ranks[c] = M.rank(m) + 1
        origin[c] = m
    return CellComplex(ranks), origin


# ---------------------------------------------------------------------------
# semi-sequences, slice sequences, connecting sequences

@dataclass(eq=False)
class Semi:
    """M ⊢π J' ≻ρ J: a collapse π: M -> J' and a reduction ρ: J -> J'."""
    M: CellComplex
    Jp: CellComplex
    J: CellComplex
    pi: CcMap
    rho: CcMap

    def same(self, other):
        return (self.M == other.M and self.Jp == other.Jp and self.J == other.J
                and self.pi.mapping == other.pi.mapping and self.rho.mapping == other.rho.mapping)


@dataclass
class SliceSequence:
    """J ≺ρ_J J' ⊣π_J M ⊢π_L L' ≻ρ_L L."""
    J: CellComplex
    Jp: CellComplex
    M: CellComplex
    Lp: CellComplex
    L: CellComplex
    rho_J: CcMap
    pi_J: CcMap
    pi_L: CcMap
    rho_L: CcMap

    @property
    def left(self):
        return Semi(self.M, self.Jp, self.J, self.pi_J, self.rho_J)

    @property
    def right(self):
        return Semi(self.M, self.Lp, self.L, self.pi_L, self.rho_L)

    @staticmethod
    def from_semis(a, b):
        return SliceSequence(a.J, a.Jp, a.M, b.Jp, b.J, a.rho, a.pi, b.pi, b.rho)


@dataclass
class ConnectingSequence:
    """M ⊢π_J J ≻ρ_J I ≺ρ_L L ⊣π_L M'."""
    M: CellComplex
    Jt: CellComplex
    I: CellComplex
    Lt: CellComplex
    Mp: CellComplex
    pi_J: CcMap
    rho_J: CcMap
    rho_L: CcMap
    pi_L: CcMap

    @property
    def left(self):
        return Semi(self.M, self.Jt, self.I, self.pi_J, self.rho_J)

    @property
    def right(self):
        return Semi(self.Mp, self.Lt, self.I, self.pi_L, self.rho_L)


def _labels_ok(items, complexes, disjoint=True):
    for name, X in complexes:
        ok = len(X) > 0 and in_B(X) and is_local(X)
        items.append({"clause": f"{name}_in_B_local", "ok": ok})
    if disjoint:
        seen = []
        clash = None
        for name, X in complexes:
            for other, Y in seen:
                if X.vertex_set & Y.vertex_set:
                    clash = (name, other)
            seen.append((name, X))
        items.append({"clause": "disjoint", "ok": clash is None, **({"pair": clash} if clash else {})})


def check_semi(s, items, tag):
    c1 = check_reduction(s.rho)
    items.append({"clause": f"{tag}_reduction", "ok": c1.ok, "violations": c1.violations[:3]})
    c2 = check_collapse(s.pi)
    items.append({"clause": f"{tag}_collapse", "ok": c2.ok, "violations": c2.violations[:3]})
    rep = check_compatible(s.rho, s.pi)
    items.append({"clause": f"{tag}_compatible", **rep})


def check_slice_sequence(seq):
    items = []
    _labels_ok(items, [("J", seq.J), ("Jp", seq.Jp), ("M", seq.M), ("Lp", seq.Lp), ("L", seq.L)])
    check_semi(seq.left, items, "J")
    check_semi(seq.right, items, "L")
    items.append({"clause": "orthogonal", **check_orthogonal(seq.pi_J, seq.pi_L)})
    return {"ok": all(i["ok"] for i in items), "items": items}


def check_connecting_sequence(seq):
    items = []
    _labels_ok(items, [("M", seq.M), ("J", seq.Jt), ("I", seq.I), ("L", seq.Lt), ("Mp", seq.Mp)])
    check_semi(seq.left, items, "J")
    check_semi(seq.right, items, "L")
    items.append({"clause": "reflective", **check_reflective(seq.rho_J, seq.rho_L)})
    return {"ok": all(i["ok"] for i in items), "items": items}


def _fresh(X, start):
    """Relabel X onto start, start+1, ...; return (X', cell map)."""
    fwd = {v: start + i for i, v in enumerate(X.vertices)}
    cm = {x: frozenset(fwd[v] for v in x) for x in X.cells}
    return CellComplex({cm[x]: X.rank(x) for x in X.cells}), cm


def _retarget(f, src=None, tgt=None, new_source=None, new_target=None):
    src = src or {x: x for x in f.source.cells}
    tgt = tgt or {y: y for y in f.target.cells}
    return CcMap(new_source or f.source, new_target or f.target,
                 {src[x]: tgt[y] for x, y in f.mapping.items()}, name=f.name)


# ---------------------------------------------------------------------------
# boundary pull-back and slices

def _pull_back(K, Jp, rho):
    J = rho.source
    B = Jp.vertex_set
    pre = [(x, rho(x)) for x in J.cells]
    ranks = {}
    for x in K.cells:
        if not x & B:
            ranks[x] = K.rank(x)
        elif not x <= B:
            inner = x & B
            grown = frozenset(v for y, ry in pre if ry <= inner for v in y)
            ranks[(x - B) | grown] = K.rank(x)
    for y in J.cells:
        ranks[y] = J.rank(y)
    return ranks


def pull_back_boundary(K, Jp, rho, check=True):
    """K^ρ: replace the boundary component J' of K by J along ρ: J -> J'."""
    J = rho.source
    if check:
        if J.vertex_set & K.vertex_set:
            raise E.PreconditionFailed("J must be disjoint from K")
        require_reduction(rho)
        cm = canonical_maps(K, Jp)
        rep = check_compatible(cm.rho.compose(rho), cm.pi)
        if not rep["ok"]:
            raise E.CompatibilityFailed("ρ∘ρ_J'^K is not compatible with π_J'^K", **rep)
    ranks = _pull_back(K, Jp, rho)
    viol = axiom_violations(ranks)
    if viol:
        raise E.CompatibilityFailed("pull-back is not a cell complex",
                                    violations=[v.to_dict() for v in viol[:5]])
    return CellComplex(ranks)


@dataclass
class Slice:
    S: CellComplex
    J: CellComplex
    L: CellComplex


def check_slice(S, J):
    """Itemized check that (S - J) is a slice."""
    items = []
    comps = boundary_components(S) if len(S) and is_pure(S) else []
    idx = [i for i, c in enumerate(comps) if c.vertex_set <= J.vertex_set]
    rep = validate_cobordism(S, idx)
    items.append({"clause": "cobordism", "ok": rep.ok, "failures": rep.failures()})
    items.append({"clause": "two_components", "ok": len(comps) == 2, "components": len(comps)})
    if not rep.ok or not comps:
        return {"ok": False, "items": items}
    bd = boundary(S)
    items.append({"clause": "all_vertices_on_boundary", "ok": S.vertex_set == bd.vertex_set})
    items.append({"clause": "proper_removed", "ok": 0 < len(J) < len(bd)})
    u = check_uniform(S, bd)
    items.append({"clause": "uniform", "ok": u["ok"],
                  "failures": [i for i in u["items"] if not i["ok"]]})
    return {"ok": all(i["ok"] for i in items), "items": items}


def slice_from_sequence(seq):
    """Build S = (π_J ⊔ π_L)(M) ⊔ J ⊔ L, pulled back along ρ_J and ρ_L."""
    rep = check_slice_sequence(seq)
    if not rep["ok"]:
        raise E.NotASliceSequence("not a slice sequence",
                                  failures=[i for i in rep["items"] if not i["ok"]])
    A, _ = augmented_poset(seq.pi_J, seq.pi_L)
    ranks = dict(A.ranks)
    ranks.update(seq.Jp.ranks)
    ranks.update(seq.Lp.ranks)
    S0 = CellComplex(ranks)
    S1 = CellComplex(_pull_back(S0, seq.Jp, seq.rho_J))
    S = CellComplex(_pull_back(S1, seq.Lp, seq.rho_L))
    viol = axiom_violations(S)
    if viol:
        raise E.NotASlice("construction failed the axioms", violations=[v.to_dict() for v in viol[:5]])
    chk = check_slice(S, seq.J)
    if not chk["ok"]:
        raise E.NotASlice("construction is not a slice",
                          failures=[i for i in chk["items"] if not i["ok"]])
    return Slice(S, seq.J, seq.L)


def _component(S, J):
    if isinstance(J, int):
        return boundary_components(S)[J]
    return J


def sequence_from_slice(S, J, L=None, start=None):
    """Slice sequence J ≺ J(S) ⊣ M^S ⊢ L(S) ≻ L with fresh labels for J(S), M^S, L(S)."""
    J = _component(S, J)
    comps = boundary_components(S) if len(S) and is_pure(S) else []
    if L is None:
        others = [c for c in comps if c.vertex_set != J.vertex_set]
        if len(others) != 1:
            raise E.NotASlice("boundary must have exactly two components", components=len(comps))
        L = others[0]
    L = _component(S, L)
    chk = check_slice(S, J)
    if not chk["ok"]:
        raise E.NotASlice("not a slice", failures=[i for i in chk["items"] if not i["ok"]])
    a = canonical_maps(S, J)
    b = canonical_maps(S, L)
    if a.midsection.complex != b.midsection.complex:
        raise E.NotASlice("midsections of the two ends differ")
    n = (max(S.vertices) + 1) if start is None else start
    Jp, cJ = _fresh(a.transition, n)
    n += len(Jp.vertices)
    M, cM = _fresh(a.midsection.complex, n)
    n += len(M.vertices)
    Lp, cL = _fresh(b.transition, n)
    return SliceSequence(
        J, Jp, M, Lp, L,
        _retarget(a.rho, None, cJ, J, Jp),
        _retarget(a.pi, cM, cJ, M, Jp),
        _retarget(b.pi, cM, cL, M, Lp),
        _retarget(b.rho, None, cL, L, Lp))


def identity_slice_sequence(base, start=None):
    """All-identity sequence over copies of base: yields the prism over base."""
    n = (max(base.vertices) + 1) if start is None else start
    copies = []
    maps = []
    for _ in range(5):
        X, cm = _fresh(base, n)
        n += len(X.vertices)
        copies.append(X)
        maps.append(cm)
    J, Jp, M, Lp, L = copies
    cJ, cJp, cM, cLp, cL = maps

    def iso(a, b, A, B):
        return CcMap(A, B, {a[x]: b[x] for x in base.cells})

    return SliceSequence(J, Jp, M, Lp, L, iso(cJ, cJp, J, Jp), iso(cM, cJp, M, Jp),
                         iso(cM, cLp, M, Lp), iso(cL, cLp, L, Lp))


# ---------------------------------------------------------------------------
# diagram isomorphism

def _diagram(parts, maps):
    G = nx.DiGraph()
    for tag, X in parts:
        for x in X.cells:
            G.add_node((tag, x), sig=(tag, X.rank(x), len(X._faces[x]), len(X._cofaces[x])))
        for x in X.cells:
            for y in X._cofaces[x]:
                G.add_edge((tag, x), (tag, y), kind="h")
    for name, a, b, f in maps:
        for x, y in f.mapping.items():
            G.add_edge((a, x), (b, y), kind=name)
    return G


def diagrams_isomorphic(d1, d2):
    G1, G2 = _diagram(*d1), _diagram(*d2)
    if G1.number_of_nodes() != G2.number_of_nodes() or G1.number_of_edges() != G2.number_of_edges():
        return False
    return match_graphs(G1, G2, edge_kind="kind") is not None


def _seq_diagram(seq):
    return ([("J", seq.J), ("Jp", seq.Jp), ("M", seq.M), ("Lp", seq.Lp), ("L", seq.L)],
            [("rJ", "J", "Jp", seq.rho_J), ("pJ", "M", "Jp", seq.pi_J),
             ("pL", "M", "Lp", seq.pi_L), ("rL", "L", "Lp", seq.rho_L)])


def slice_sequences_isomorphic(a, b):
    return diagrams_isomorphic(_seq_diagram(a), _seq_diagram(b))


def _semi_diagram(s, p):
    return ([(p + "M", s.M), (p + "Jp", s.Jp), (p + "J", s.J)],
            [(p + "pi", p + "M", p + "Jp", s.pi), (p + "rho", p + "J", p + "Jp", s.rho)])


def semis_isomorphic(a, b):
    return diagrams_isomorphic(_semi_diagram(a, ""), _semi_diagram(b, ""))


# ---------------------------------------------------------------------------
# union of complexes along a boundary component

def _shared_component(K, H):
    """Index pair of identical boundary components of K and H, or None."""
    ck = boundary_components(K)
    ch = boundary_components(H)
    for i, a in enumerate(ck):
        for j, b in enumerate(ch):
            if a == b:
                return i, j
    return None


def union(K, H, rho_J=None, rho_L=None):
    """K^{ρ_J} ∪ H^{ρ_L} glued along the common reduced component I.

    rho_J: I -> J (J a boundary component of K), rho_L: I -> L (L of H).
    With no maps, K and H must share a boundary component verbatim.
    """
    if rho_J is None or rho_L is None:
        pair = _shared_component(K, H)
        if pair is None:
            raise E.NotConnecting("K and H share no boundary component")
        I = boundary_components(K)[pair[0]]
        rho_J = rho_L = CcMap.identity(I)
    I = rho_J.source
    if rho_L.source != I:
        raise E.NotConnecting("the two reductions have different sources")
    J, L = rho_J.target, rho_L.target
    for X, Y, name in ((K, J, "K"), (H, L, "H")):
        if not any(c == Y for c in boundary_components(X)):
            raise E.NotConnecting(f"target is not a boundary component of {name}")
    a = canonical_maps(K, J)
    b = canonical_maps(H, L)
    seq = ConnectingSequence(a.midsection.complex, a.transition, I, b.transition,
                             b.midsection.complex, a.pi, a.rho.compose(rho_J),
                             b.rho.compose(rho_L), b.pi)
    # the sequence's labels share vertices with K, H (transitions live on J, L);
    # only the map conditions are checked here
    items = []
    check_semi(seq.left, items, "J")
    check_semi(seq.right, items, "L")
    items.append({"clause": "reflective", **check_reflective(seq.rho_J, seq.rho_L)})
    bad = [i for i in items if not i["ok"]]
    if bad:
        raise E.NotConnecting("K and H do not connect through I", failures=bad)
    Kr = K if rho_J.mapping == {x: x for x in I.cells} and J == I else \
        CellComplex(_pull_back(K, J, rho_J))
    Hr = H if rho_L.mapping == {x: x for x in I.cells} and L == I else \
        CellComplex(_pull_back(H, L, rho_L))
    shared = set(Kr.cells) & set(Hr.cells)
    if shared != set(I.cells) or (Kr.vertex_set & Hr.vertex_set) != I.vertex_set:
        raise E.OverlapMismatch("K^ρ ∩ H^ρ differs from I",
                                extra=len(shared - set(I.cells)))
    ranks = dict(Kr.ranks)
    ranks.update(Hr.ranks)
    viol = axiom_violations(ranks)
    if viol:
        raise E.OverlapMismatch("union is not a cell complex", violations=[v.to_dict() for v in viol[:5]])
    U = CellComplex(ranks)
    if not in_C(U):
        raise E.OverlapMismatch("union is not non-singular, non-pinching and local")
    return U


def align_for_gluing(K, H, interface):
    """Relabel H so one of its boundary components equals K's component `interface`.

    The first component of H isomorphic to the interface is used; the
    remaining vertices of H get fresh ids above those of K.
    """
    from .core import is_isomorphic
    I = boundary_components(K)[interface]
    comps = boundary_components(H)
    for comp in comps:
        if comp == I and not (H.vertex_set - I.vertex_set) & K.vertex_set:
            return H
    # prefer a component already equal to the interface
    comps.sort(key=lambda c: c != I)
    for comp in comps:
        vm = {v: v for v in I.vertices} if comp == I else is_isomorphic(comp, I)
        if vm is None:
            continue
        n = max(K.vertices + H.vertices) + 1
        fwd = {}
        for v in H.vertices:
            if v in vm:
                fwd[v] = vm[v]
            else:
                fwd[v] = n
                n += 1
        return H.relabel(fwd)
    raise E.NotConnecting("H has no boundary component isomorphic to the interface")


# ---------------------------------------------------------------------------
# causal cobordisms: slices stacked along their boundaries

def decompose_causal(K, J):
    """Split K into slices layer by layer, starting from boundary component J.

    Returns a list of Slice objects (S_i with ends L_i, L_{i+1}).  Raises
    NotASlice when a layer is not a slice.
    """
    J = _component(K, J)
    layer = J.vertex_set
    used = set(layer)
    tops = [z for z in K.cells if K.rank(z) == K.Rk]
    out = []
    remaining = list(tops)
    while remaining:
        band = [z for z in remaining if z & layer]
        if not band:
            raise E.NotASlice("layering stalled", layer=sorted(layer))
        nxt = frozenset(v for z in band for v in z) - layer
        if nxt & used:
            raise E.NotASlice("layers overlap", vertices=sorted(nxt & used))
        S = K.restrict(layer | nxt)
        chk = check_slice(S, S.restrict(layer))
        if not chk["ok"]:
            raise E.NotASlice("layer is not a slice", index=len(out),
                              failures=[i for i in chk["items"] if not i["ok"]])
        out.append(Slice(S, S.restrict(layer), S.restrict(nxt)))
        used |= nxt
        remaining = [z for z in remaining if z not in set(band)]
        layer = nxt
    return out


# ---------------------------------------------------------------------------
# braket layer

@dataclass(eq=False)
class State:
    """A bra ⟨J, M, L| (slice sequence) or a ket |M, L, M'⟩ (connecting sequence).

    Both are stored as a pair of semi-sequences: a bra shares its M, a ket
    shares its middle label.
    """
    kind: str  # "bra" | "ket"
    left: Semi
    right: Semi

    def labels(self):
        if self.kind == "bra":
            return (self.left.J, self.left.M, self.right.J)
        return (self.left.M, self.left.J, self.right.M)

    def sequence(self):
        if self.kind == "bra":
            return SliceSequence.from_semis(self.left, self.right)
        a, b = self.left, self.right
        return ConnectingSequence(a.M, a.Jp, a.J, b.Jp, b.M, a.pi, a.rho, b.rho, b.pi)

    def check(self):
        if self.kind == "bra":
            if self.left.M is not self.right.M and self.left.M != self.right.M:
                return {"ok": False, "items": [{"clause": "shared_M", "ok": False}]}
            return check_slice_sequence(self.sequence())
        if self.left.J is not self.right.J and self.left.J != self.right.J:
            return {"ok": False, "items": [{"clause": "shared_middle", "ok": False}]}
        return check_connecting_sequence(self.sequence())

    def same(self, other):
        return self.kind == other.kind and self.left.same(other.left) and self.right.same(other.right)

    def isomorphic(self, other):
        if self.kind != other.kind:
            return False
        d1 = _semi_diagram(self.left, "a")
        d2 = _semi_diagram(self.right, "b")
        e1 = _semi_diagram(other.left, "a")
        e2 = _semi_diagram(other.right, "b")
        # glue the shared label so the isomorphism is a single one
        return diagrams_isomorphic((d1[0] + d2[0], d1[1] + d2[1]),
                                   (e1[0] + e2[0], e1[1] + e2[1]))


def bra(seq):
    return State("bra", seq.left, seq.right)


def ket(seq):
    return State("ket", seq.left, seq.right)


@dataclass
class StateSequence:
    states: tuple

    def __post_init__(self):
        self.states = tuple(self.states)

    @property
    def image(self):
        return self.states[0]

    @property
    def domain(self):
        return self.states[-1]

    def __len__(self):
        return len(self.states)

    def check(self):
        """Alternation and shared semi-sequences at every junction."""
        for a, b in zip(self.states, self.states[1:]):
            if a.kind == b.kind:
                return {"ok": False, "reason": "states must alternate"}
            if not (a.right is b.left or a.right.same(b.left)):
                return {"ok": False, "reason": "junction semi-sequences differ"}
        return {"ok": True}

    def same(self, other):
        return len(self) == len(other) and all(a.same(b) for a, b in zip(self.states, other.states))

    def isomorphic(self, other):
        return len(self) == len(other) and all(a.isomorphic(b) for a, b in zip(self.states, other.states))


def identity(s):
    return StateSequence((s,))


def compose_sequences(sigma, gamma):
    """σ ∘ γ: requires D(σ) = Im(γ)."""
    a, b = sigma.domain, gamma.image
    if not (a is b or a.same(b) or a.isomorphic(b)):
        raise E.StatesMismatch("domain of σ differs from the image of γ")
    return StateSequence(sigma.states + gamma.states[1:])


class _Dualizer:
    """Dualizes labels once each, with fresh disjoint vertex ids."""

    def __init__(self, start=0):
        self.next = start
        self.cache = {}
        self.semis = {}

    def get(self, X):
        # equal complexes are the same label, so key on the complex itself
        if X not in self.cache:
            D, bij = dual_closed(X)
            D2, cm = _fresh(D, self.next)
            self.next += len(D2.vertices)
            self.cache[X] = (D2, {x: cm[bij[x]] for x in X.cells})
        return self.cache[X]

    def semi(self, s):
        key = id(s)
        if key not in self.semis:
            DJ, _ = self.get(s.J)
            DJp, _ = self.get(s.Jp)
            DM, _ = self.get(s.M)
            self.semis[key] = (Semi(DJ, DJp, DM, dual_map(s.rho, self), dual_map(s.pi, self)), s)
        return self.semis[key][0]


def _max_vertex(sigma):
    m = 0
    for st in sigma.states:
        for s in (st.left, st.right):
            for X in (s.M, s.Jp, s.J):
                if len(X):
                    m = max(m, max(X.vertices))
    return m + 1


def _canon_semis(sigma):
    """Make junction semis shared objects so dualization stays consistent."""
    states = list(sigma.states)
    out = []
    prev = None
    for st in states:
        left = prev.right if prev is not None and prev.right.same(st.left) else st.left
        out.append(State(st.kind, left, st.right))
        prev = out[-1]
    return out


def functor_T(sigma):
    """Reverse: states reversed in order and each state's labels reversed."""
    return StateSequence(tuple(State(s.kind, s.right, s.left) for s in reversed(sigma.states)))


def functor_C(sigma, start=None):
    """Duality: contravariant, bra <-> ket with dual labels."""
    d = _Dualizer(_max_vertex(sigma) if start is None else start)
    states = _canon_semis(sigma)
    other = {"bra": "ket", "ket": "bra"}
    return StateSequence(tuple(State(other[s.kind], d.semi(s.right), d.semi(s.left))
                               for s in reversed(states)))


def functor_P(sigma, start=None):
    """Parity: covariant, each state replaced by its dual with labels in order."""
    d = _Dualizer(_max_vertex(sigma) if start is None else start)
    states = _canon_semis(sigma)
    other = {"bra": "ket", "ket": "bra"}
    return StateSequence(tuple(State(other[s.kind], d.semi(s.left), d.semi(s.right))
                               for s in states))


def states_from_slices(slices):
    """⟨S_0| |k_1⟩ ⟨S_1| ... for slices stacked end to end."""
    out = []
    prev = None
    start = max(v for sl in slices for v in sl.S.vertices) + 1
    for sl in slices:
        seq = sequence_from_slice(sl.S, sl.J, sl.L, start=start)
        start = max(seq.Lp.vertices) + 1
        b = bra(seq)
        if prev is not None:
            k = State("ket", prev.right, b.left)
            rep = k.check()
            if not rep["ok"]:
                raise E.NotConnecting("adjacent slices do not connect",
                                      failures=[i for i in rep["items"] if not i["ok"]])
            out.append(k)
        out.append(b)
        prev = b
    return StateSequence(tuple(out))


def glue_slices(slices):
    """Union of slices along their shared ends, as one complex."""
    K = slices[0].S
    for sl in slices[1:]:
        K = union(K, sl.S)
    return K
