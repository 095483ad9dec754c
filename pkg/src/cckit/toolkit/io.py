"""JSON documents: one complex, optional removed components, maps and origins.

Canonical form: cells sorted by (rank, vertices), vertices sorted, two-space
indentation, trailing newline.  save(load(f)) reproduces a canonical f
byte for byte.
"""

import json
import os
from dataclasses import dataclass, field

from .. import errors as E
from ..core import CellComplex, CcMap, build_complex

DEFAULT_MAX_CELLS = 100000


def max_cells():
    raw = os.environ.get("CCKIT_MAX_CELLS", "")
    try:
        return int(raw) if raw else DEFAULT_MAX_CELLS
    except ValueError:
        raise E.BadParams("CCKIT_MAX_CELLS must be an integer", value=raw) from None


def check_size(n):
    cap = max_cells()
    if n > cap:
        raise E.ValidationError("too many cells", cells=n, cap=cap)


@dataclass
class CcDocument:
    name: str
    complex: CellComplex
    removed_components: list = None
    maps: list = field(default_factory=list)  # [{"from", "to", "pairs"}]
    origins: dict = None  # vertex id -> anything JSON-able
    extra: dict = field(default_factory=dict)

    def removed(self):
        return list(self.removed_components or [])


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def parse_cells(raw):
    """Check the cell list shape and return (vertex frozenset, rank) pairs."""
    if not isinstance(raw, list):
        raise E.ValidationError("cells must be a list")
    check_size(len(raw))
    out = []
    for i, c in enumerate(raw):
        if not isinstance(c, dict) or "vertices" not in c or "rank" not in c:
            raise E.ValidationError("cell needs vertices and rank", index=i)
        vs, r = c["vertices"], c["rank"]
        if not isinstance(vs, list) or not all(_is_int(v) for v in vs):
            raise E.ValidationError("vertices must be a list of integers", index=i)
        if not _is_int(r) or r < 0:
            raise E.ValidationError("rank must be a non-negative integer", index=i, rank=r)
        out.append((frozenset(vs), r))
    return out


def cells_to_json(K):
    return [{"vertices": sorted(x), "rank": K.rank(x)} for x in K.cells]


def _parse_maps(raw):
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise E.ValidationError("maps must be a list")
    for m in raw:
        if not isinstance(m, dict) or "pairs" not in m or not isinstance(m["pairs"], list):
            raise E.ValidationError("a map needs a list of pairs")
        for p in m["pairs"]:
            if not (isinstance(p, list) and len(p) == 2 and all(isinstance(s, list) for s in p)):
                raise E.ValidationError("a pair is [source vertices, target vertices]")
    return raw


def parse_document(obj, validate=True):
    """Document from decoded JSON.  With validate=False the axioms are skipped."""
    if not isinstance(obj, dict):
        raise E.ValidationError("document must be a JSON object")
    if "cells" not in obj:
        raise E.ValidationError("document has no cells")
    pairs = parse_cells(obj["cells"])
    if validate:
        K = build_complex(pairs)
    else:
        K = CellComplex({x: r for x, r in pairs})
    removed = obj.get("removed_components")
    if removed is not None and (not isinstance(removed, list) or not all(_is_int(i) for i in removed)):
        raise E.ValidationError("removed_components must be a list of integers")
    origins = obj.get("origins")
    if origins is not None:
        if not isinstance(origins, dict):
            raise E.ValidationError("origins must be an object")
        origins = {int(k): v for k, v in origins.items()}
    known = {"name", "cells", "removed_components", "maps", "origins"}
    extra = {k: v for k, v in obj.items() if k not in known}
    return CcDocument(str(obj.get("name", "")), K, removed, _parse_maps(obj.get("maps")),
                      origins, extra)


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise E.ParseError("cannot read file", path=str(path), reason=exc.strerror) from None
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise E.ParseError("not valid UTF-8 JSON", path=str(path), reason=str(exc)) from None


def load(path, validate=True):
    return parse_document(read_json(path), validate=validate)


def document_to_json(doc):
    out = {"name": doc.name, "cells": cells_to_json(doc.complex)}
    if doc.removed_components is not None:
        out["removed_components"] = sorted(doc.removed_components)
    if doc.maps:
        out["maps"] = doc.maps
    if doc.origins is not None:
        out["origins"] = {str(k): E._plain(v) for k, v in sorted(doc.origins.items())}
    for k in sorted(doc.extra):
        out[k] = E._plain(doc.extra[k])
    return out


def dumps(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def save(doc, path):
    text = dumps(document_to_json(doc))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# maps

def map_to_json(f, frm="", to=""):
    pairs = [[sorted(x), sorted(f(x))] for x in f.source.cells]
    return {"from": frm, "to": to, "pairs": pairs}


def map_from_json(m, source, target):
    mapping = {}
    for a, b in m["pairs"]:
        x, y = frozenset(a), frozenset(b)
        if x not in source:
            raise E.ValidationError("map source cell not in complex", cell=sorted(x))
        if y not in target:
            raise E.ValidationError("map target cell not in complex", cell=sorted(y))
        if x in mapping and mapping[x] != y:
            raise E.ValidationError("map sends a cell to two places", cell=sorted(x))
        mapping[x] = y
    missing = [x for x in source.cells if x not in mapping]
    if missing:
        raise E.ValidationError("map is not total", cell=sorted(missing[0]))
    return CcMap(source, target, mapping, name=str(m.get("from", "")))


# renumbering

def renumber(K, origins=None):
    """Copy of K on vertices 0..n-1 and the origin of each new id.

    origins, if given, maps old ids to what they stand for; it is composed in.
    """
    fwd = {v: i for i, v in enumerate(K.vertices)}
    back = {i: (origins[v] if origins is not None else v) for v, i in fwd.items()}
    return K.relabel(fwd), back, fwd
