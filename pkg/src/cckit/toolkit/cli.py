"""cckit command line.

Every command prints one JSON object.  Exit codes: 0 success, 1 a check
or precondition failed (the JSON is the violation report), 2 the input
could not be read or parsed.
"""

import argparse
import sys

from .. import errors as E
from ..core import axiom_violations, boundary_components, classify, is_isomorphic, CellComplex
from . import io
from .generators import generate


class Fail(Exception):
    """A finished command whose result is a failed check (exit 1)."""

    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


def _emit(obj, args):
    text = io.dumps(obj)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _doc(K, name, origins=None, removed_vertices=None, extra=None, renumber=True):
    """Document for K, renumbered 0..n-1 with an origins table."""
    if renumber:
        K, back, fwd = io.renumber(K, origins)
    else:
        back, fwd = origins, {v: v for v in K.vertices}
    removed = None
    if removed_vertices is not None:
        target = {fwd[v] for v in removed_vertices}
        removed = [i for i, c in enumerate(boundary_components(K)) if c.vertex_set <= target]
    return io.document_to_json(io.CcDocument(name, K, removed, [], back, dict(extra or {})))


def _removed(args, doc):
    if getattr(args, "removed", None) is not None:
        return [int(s) for s in args.removed.split(",") if s.strip() != ""]
    return doc.removed()


def _cell(x):
    return sorted(x)


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args):
    doc = io.load(args.file, validate=False)
    bad = axiom_violations(doc.complex)
    if bad:
        raise Fail({"ok": False, "violations": [b.to_dict() for b in bad]})
    out = {"ok": True, "f_vector": list(doc.complex.f_vector())}
    if doc.removed_components is not None:
        from ..cobordism import validate_cobordism

        rep = validate_cobordism(doc.complex, doc.removed())
        out["cobordism"] = rep.to_dict()
        if not rep.ok:
            out["ok"] = False
            raise Fail(out)
    return out


def cmd_classify(args):
    doc = io.load(args.file)
    rep = classify(doc.complex, full_upto=args.rank)
    out = rep.to_dict()
    out["f_vector"] = list(doc.complex.f_vector())
    out["flags"]["full"] = {str(k): v for k, v in out["flags"]["full"].items()}
    if args.cycle:
        from ..reconstruct import is_contractible_bounded

        cyc = [int(s) for s in args.cycle.split(",")]
        c = is_contractible_bounded(doc.complex, cyc, budget=args.budget)
        out["contractible"] = {"status": c.status, "explored": c.explored, "moves": len(c.moves)}
    return out


def cmd_dual(args):
    from ..duality import dual_closed, dual_origins

    doc = io.load(args.file)
    K = doc.complex
    D, bij = dual_closed(K)
    if args.check_involution:
        DD, _ = dual_closed(D)
        vm = is_isomorphic(DD, K)
        out = {"check": "involution", "ok": vm is not None, "f_vector": list(K.f_vector()),
               "dual_f_vector": list(D.f_vector())}
        if vm is None:
            raise Fail(out)
        return out
    origins = {v: _cell(x) for v, x in dual_origins(bij).items()}
    return _doc(D, f"dual({doc.name})", origins, renumber=False)


def cmd_dual_cob(args):
    from ..cobordism import make_cobordism, dual_cobordism_report

    doc = io.load(args.file)
    cob = make_cobordism(doc.complex, _removed(args, doc))
    rep = dual_cobordism_report(cob)
    d = rep.pop("dual")
    origins = {i: [tag, _cell(x)] for i, (tag, x) in d.origins.items()}
    checks = {k: bool(v) for k, v in rep.items()}
    out = _doc(d.K, f"dual_cob({doc.name})", origins, d.J.vertex_set, {"checks": checks},
               renumber=False)
    if not all(checks.values()):
        raise Fail(dict(out, ok=False))
    return out


def cmd_bdiv(args):
    from ..subdivision import barycentric

    doc = io.load(args.file)
    B, rho = barycentric(doc.complex)
    origins = {v: _cell(rho(frozenset([v]))) for v in B.vertices}
    return _doc(B, f"bdiv({doc.name})", origins, renumber=False)


def _orientation(doc):
    import networkx as nx

    K = doc.complex
    G = nx.DiGraph()
    G.add_nodes_from(K.vertices)
    if "orientation" in doc.extra:
        for u, w in doc.extra["orientation"]:
            G.add_edge(int(u), int(w))
        return G
    if not doc.origins:
        raise E.ValidationError("need an orientation list or cell origins")
    cell = {v: frozenset(doc.origins[v]) for v in K.vertices}
    for e in K.cells_of_rank(1):
        a, b = sorted(e)
        if cell[a] < cell[b]:
            G.add_edge(a, b)
        elif cell[b] < cell[a]:
            G.add_edge(b, a)
        else:
            raise E.ValidationError("origins of an edge are not nested", edge=[a, b])
    return G


def cmd_reconstruct_bdiv(args):
    from ..subdivision import reconstruct_from_oriented_bdiv

    doc = io.load(args.file)
    K = reconstruct_from_oriented_bdiv(_orientation(doc))
    return _doc(K, f"reconstruct({doc.name})")


def cmd_euler(args):
    from ..shell import euler_characteristic, check_euler_poincare

    doc = io.load(args.file)
    out = {"chi": euler_characteristic(doc.complex)}
    if args.check:
        rep = check_euler_poincare(doc.complex)
        out.update(rep)
        if not rep["consistent"]:
            raise Fail(out)
    return out


def cmd_shell(args):
    from ..shell import find_shelling

    doc = io.load(args.file)
    s = find_shelling(doc.complex)
    return {"shellable": s is not None, "certificate": s.to_dict() if s else None}


def cmd_shell2(args):
    from ..shell import find_2_shelling

    doc = io.load(args.file)
    order = find_2_shelling(doc.complex)
    return {"two_shellable": order is not None, "order": order}


def _parse_seed(text):
    # "v:a-b,c-d" = vertex v with edges {a,b} and {c,d}
    try:
        v, rest = text.split(":")
        edges = [frozenset(int(u) for u in e.split("-")) for e in rest.split(",")]
        return int(v), edges
    except ValueError:
        raise E.BadParams("seed must look like v:a-b,c-d", seed=text) from None


def cmd_ambient(args):
    from ..core import skeleton
    from ..reconstruct import ambient_complex, induced_subcomplex

    doc = io.load(args.file)
    K2 = skeleton(doc.complex, 2) if doc.complex.Rk > 2 else doc.complex
    if args.seed:
        v, edges = _parse_seed(args.seed)
        J = induced_subcomplex(K2, v, edges)
        return {"seed": {"vertex": v, "edges": [_cell(e) for e in edges]},
                "vertices": sorted(J.vertices), "cells": io.cells_to_json(J.complex)}
    L = ambient_complex(K2)
    return _doc(L, f"ambient({doc.name})", renumber=False)


def _one_removed(args, doc):
    idx = _removed(args, doc)
    comps = boundary_components(doc.complex)
    if len(idx) != 1 or not 0 <= idx[0] < len(comps):
        raise E.BadParams("give exactly one valid boundary component with --removed",
                          removed=idx, components=len(comps))
    return comps[idx[0]]


def cmd_midsection(args):
    from ..cobordism import midsection

    doc = io.load(args.file)
    J = _one_removed(args, doc)
    M = midsection(doc.complex, J)
    origins = {i: _cell(e) for e, i in M.edge_ids.items()}
    return _doc(M.complex, f"midsection({doc.name})", origins, renumber=False)


def cmd_transition(args):
    from ..causal import check_uniform, canonical_maps

    doc = io.load(args.file)
    K = doc.complex
    J = _one_removed(args, doc)
    rep = check_uniform(K, J)
    items = [{k: E._plain(v) for k, v in i.items()} for i in rep["items"]]
    if not rep["ok"]:
        raise Fail({"ok": False, "uniform": items})
    cm = canonical_maps(K, J)
    out = _doc(cm.transition, f"transition({doc.name})", renumber=False)
    out["maps"] = [io.map_to_json(cm.rho, "removed", "transition")]
    out["uniform"] = items
    return out


def cmd_check_map(args):
    from ..causal import check_reduction, check_collapse

    src = io.load(args.source)
    tgt = io.load(args.target)
    if not src.maps or args.map_index >= len(src.maps):
        raise E.ValidationError("source document has no such map", index=args.map_index)
    f = io.map_from_json(src.maps[args.map_index], src.complex, tgt.complex)
    cert = check_reduction(f) if args.kind == "reduction" else check_collapse(f)
    out = cert.to_dict()
    if not cert.ok:
        raise Fail(out)
    return out


_SEQ = ("J", "Jp", "M", "Lp", "L")
_SEQ_MAPS = (("rho_J", "J", "Jp"), ("pi_J", "M", "Jp"), ("pi_L", "M", "Lp"), ("rho_L", "L", "Lp"))


def sequence_to_json(seq, name):
    return {"name": name,
            "complexes": {k: io.cells_to_json(getattr(seq, k)) for k in _SEQ},
            "maps": [io.map_to_json(getattr(seq, m), a, b) for m, a, b in _SEQ_MAPS]}


def sequence_from_json(obj):
    from ..causal import SliceSequence

    if "complexes" not in obj or "maps" not in obj:
        raise E.ValidationError("sequence document needs complexes and maps")
    X = {}
    for k in _SEQ:
        if k not in obj["complexes"]:
            raise E.ValidationError("missing complex", label=k)
        from ..core import build_complex

        X[k] = build_complex(io.parse_cells(obj["complexes"][k]))
    found = {}
    for m in obj["maps"]:
        found[(m.get("from"), m.get("to"))] = m
    maps = {}
    for name, a, b in _SEQ_MAPS:
        if (a, b) not in found:
            raise E.ValidationError("missing map", source=a, target=b)
        maps[name] = io.map_from_json(found[(a, b)], X[a], X[b])
    return SliceSequence(X["J"], X["Jp"], X["M"], X["Lp"], X["L"],
                         maps["rho_J"], maps["pi_J"], maps["pi_L"], maps["rho_L"])


def cmd_slice_build(args):
    from ..causal import identity_slice_sequence, slice_from_sequence

    obj = io.read_json(args.file)
    if args.identity:
        seq = identity_slice_sequence(io.parse_document(obj).complex)
    else:
        seq = sequence_from_json(obj)
    sl = slice_from_sequence(seq)
    return _doc(sl.S, f"slice({obj.get('name', '')})", None, sl.J.vertex_set)


def cmd_slice_decompose(args):
    from ..causal import decompose_causal, sequence_from_slice, states_from_slices

    doc = io.load(args.file)
    J = _one_removed(args, doc)
    slices = decompose_causal(doc.complex, J)
    seqs = [sequence_to_json(sequence_from_slice(s.S, s.J, s.L), f"{doc.name}[{i}]")
            for i, s in enumerate(slices)]
    states = states_from_slices(slices)
    return {"name": doc.name, "slices": len(slices), "sequences": seqs,
            "states": [s.kind for s in states.states]}


def cmd_glue(args):
    from ..causal import align_for_gluing, union

    a = io.load(args.a)
    b = io.load(args.b)
    H = align_for_gluing(a.complex, b.complex, args.interface)
    U = union(a.complex, H)
    from ..cobordism import validate_cobordism

    rep = validate_cobordism(U, [])
    out = _doc(U, f"glue({a.name},{b.name})")
    out["valid"] = rep.ok
    if not rep.ok:
        raise Fail(dict(out, report=rep.to_dict()))
    return out


def cmd_iso(args):
    a = io.load(args.a)
    b = io.load(args.b)
    vm = is_isomorphic(a.complex, b.complex)
    return {"isomorphic": vm is not None,
            "vertex_map": None if vm is None else {str(k): v for k, v in vm.items()}}


def _param(s):
    try:
        return int(s)
    except ValueError:
        return s


def cmd_gen(args):
    K = generate(args.family, tuple(_param(p) for p in args.params))
    io.check_size(len(K))
    name = args.family + ("(" + ",".join(args.params) + ")" if args.params else "")
    return io.document_to_json(io.CcDocument(name, K))


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="cckit", description="Combinatorial cell complex toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *files, help=None):
        sp = sub.add_parser(name, help=help)
        for f in files:
            sp.add_argument(f)
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        sp.add_argument("--format", choices=["json"], default="json")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "file", help="check the axioms (and cobordism if removed)")
    sp = add("classify", cmd_classify, "file", help="structural predicates with witnesses")
    sp.add_argument("--rank", type=int, default=None, help="test fullness up to this rank")
    sp.add_argument("--cycle", help="comma separated closed vertex path to contract")
    sp.add_argument("--budget", type=int, default=10000, help="homotopy search budget")
    sp = add("dual", cmd_dual, "file", help="dual of a closed complex")
    sp.add_argument("--check-involution", action="store_true")
    sp = add("dual-cob", cmd_dual_cob, "file", help="dual of a cobordism")
    sp.add_argument("--removed", help="comma separated boundary component indices")
    add("bdiv", cmd_bdiv, "file", help="barycentric subdivision")
    add("reconstruct-bdiv", cmd_reconstruct_bdiv, "file",
        help="rebuild a complex from an oriented bdiv 1-skeleton")
    sp = add("euler", cmd_euler, "file", help="Euler characteristic")
    sp.add_argument("--check", action="store_true", help="also certify Euler-Poincaré by a shelling")
    add("shell", cmd_shell, "file", help="search for a shelling")
    add("shell2", cmd_shell2, "file", help="search for a 2-shelling")
    sp = add("ambient", cmd_ambient, "file", help="rebuild the ambient complex of a 2-skeleton")
    sp.add_argument("--seed", help="v:a-b,c-d builds one induced cell instead")
    sp.add_argument("--budget", type=int, default=None, help="unused, accepted for symmetry")
    sp = add("midsection", cmd_midsection, "file", help="midsection at a boundary component")
    sp.add_argument("--removed")
    sp = add("transition", cmd_transition, "file", help="uniformity report and transition")
    sp.add_argument("--removed")
    sp = add("check-map", cmd_check_map, "source", "target", help="check a reduction or collapse")
    sp.add_argument("--kind", choices=["reduction", "collapse"], default="reduction")
    sp.add_argument("--map-index", type=int, default=0)
    sp = add("slice-build", cmd_slice_build, "file", help="slice from a slice sequence")
    sp.add_argument("--identity", action="store_true", help="use the identity sequence over a base")
    sp = add("slice-decompose", cmd_slice_decompose, "file", help="slices and states of a causal cobordism")
    sp.add_argument("--removed")
    sp = add("glue", cmd_glue, "a", "b", help="glue two complexes along a boundary component")
    sp.add_argument("--interface", type=int, default=0, help="boundary component index in the first input")
    add("iso", cmd_iso, "a", "b", help="isomorphism test")
    sp = add("gen", cmd_gen, help="generate an example family")
    sp.add_argument("family")
    sp.add_argument("params", nargs="*")
    return p


_INPUT_ERRORS = (E.ParseError, E.BadParams)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _emit(args.func(args), args)
        return 0
    except Fail as f:
        _emit(f.report, args)
        return 1
    except _INPUT_ERRORS as exc:
        sys.stderr.write(io.dumps(exc.to_dict()))
        return 2
    except E.CcError as exc:
        rep = {"ok": False, **exc.to_dict()}
        if len(exc.violations) > 1:
            rep["violations"] = [v.to_dict() for v in exc.violations]
        _emit(rep, args)
        return 1


if __name__ == "__main__":
    sys.exit(main())
