"""Barycentric subdivision and reconstruction from its oriented 1-skeleton."""

import networkx as nx

from . import errors as E
from .core import CellComplex, CcMap, axiom_violations


def flags(K):
    """All non-empty chains x0 ⊊ x1 ⊊ ... of cells, as tuples."""
    up = {x: [y for y in K.supersets(x)] for x in K.cells}
    out = []

    def grow(chain):
        out.append(tuple(chain))
        for y in up[chain[-1]]:
            chain.append(y)
            grow(chain)
            chain.pop()

    for x in K.cells:
        grow([x])
    return out


def barycentric(K):
    """Return (bdiv K, ρ) where ρ sends a flag to its top cell.

    The vertex of bdiv K standing for cell x has id = position of x in the
    canonical cell order of K.
    """
    ids = {x: i for i, x in enumerate(K.cells)}
    ranks = {}
    rho = {}
    for fl in flags(K):
        c = frozenset(ids[x] for x in fl)
        ranks[c] = len(fl) - 1
        rho[c] = fl[-1]
    B = CellComplex(ranks)
    return B, CcMap(B, K, rho, name="bdiv")


def bdiv(K):
    return barycentric(K)[0]


def inclusion_orientation(B, rho):
    """Orient each bdiv edge {a, b} from the smaller cell to the larger."""
    G = nx.DiGraph()
    G.add_nodes_from(B.vertices)
    for e in B.cells_of_rank(1):
        a, b = sorted(e)
        xa, xb = rho(frozenset([a])), rho(frozenset([b]))
        if xa < xb:
            G.add_edge(a, b)
        else:
            G.add_edge(b, a)
    return G


def reconstruct_from_oriented_bdiv(G):
    """Recover K (up to isomorphism) from an oriented bdiv 1-skeleton.

    Rank of a node is the longest directed path ending there; its cell is
    the set of sources reaching it.  Cells are labelled by source node ids.
    """
    if not nx.is_directed_acyclic_graph(G):
        raise E.NotABdivGraph("orientation has a directed cycle")
    depth = {}
    cell = {}
    for u in nx.topological_sort(G):
        preds = list(G.predecessors(u))
        if not preds:
            depth[u] = 0
            cell[u] = frozenset([u])
        else:
            depth[u] = 1 + max(depth[p] for p in preds)
            cell[u] = frozenset().union(*(cell[p] for p in preds))
    # the inclusion orientation is transitive
    for u in G.nodes:
        for w in nx.descendants(G, u):
            if not G.has_edge(u, w):
                raise E.NotABdivGraph("orientation is not transitive", u=u, w=w)
    ranks = {}
    for u, c in cell.items():
        if c in ranks:
            raise E.NotABdivGraph("two nodes give the same cell", cell=c)
        ranks[c] = depth[u]
    bad = axiom_violations(ranks)
    if bad:
        raise E.NotABdivGraph("reconstructed poset is not a cell complex", reason=bad[0].to_dict())
    return CellComplex(ranks)
