"""Dual sets, duals of closed complexes, the ∼-dual and the dual graph."""

import networkx as nx

from . import errors as E
from .core import (CellComplex, boundary, is_closed, is_non_singular, is_pure,
                   dual_graph_edges)


def dual_set(K, A):
    """All maximal (top rank) cells of a pure K containing A."""
    A = frozenset(A)
    if not A:
        raise E.EmptySet("dual set of the empty set is not defined")
    if not is_pure(K):
        raise E.NotPure("dual set needs a pure complex")
    R = K.Rk
    return [z for z in K.supersets(A) + ([A] if A in K else []) if K.rank(z) == R]


def dual_closed(K):
    """Dual of a closed complex.

    Dual vertex i stands for the i-th maximal cell of K (in canonical order).
    Returns (dual complex, bijection primal cell -> dual cell).
    """
    if not is_closed(K):
        raise E.NotClosed("dual needs a closed complex")
    R = K.Rk
    tops = [z for z in K.cells if K.rank(z) == R]
    ids = {z: i for i, z in enumerate(tops)}
    bij = {}
    ranks = {}
    for x in K.cells:
        d = frozenset(ids[z] for z in dual_set(K, x))
        bij[x] = d
        ranks[d] = R - K.rank(x)
    return CellComplex(ranks), bij


def dual(K):
    return dual_closed(K)[0]


def dual_origins(bij):
    """Dual vertex id -> primal maximal cell, read off a dual bijection."""
    return {next(iter(d)): x for x, d in bij.items() if len(d) == 1}


def tilde_dual_set(K, A):
    """∼-dual: tagged maximal cells of K and of ∂K containing A.

    Members are ("K", z) for top cells of K and ("dK", y) for top cells of
    the boundary.
    """
    A = frozenset(A)
    if not A:
        raise E.EmptySet("∼-dual of the empty set is not defined")
    if not is_non_singular(K):
        raise E.NotNonSingular("∼-dual needs a non-singular complex")
    out = {("K", z) for z in dual_set(K, A)}
    B = boundary(K)
    if len(B) and A <= B.vertex_set:
        out |= {("dK", y) for y in dual_set(B, A)}
    return frozenset(out)


def dual_graph(K):
    """Graph on maximal cells; edges are interior sub-maximal cells."""
    if not is_non_singular(K):
        raise E.NotNonSingular("dual graph needs a non-singular complex")
    G = nx.Graph()
    G.add_nodes_from(z for z in K.cells if K.rank(z) == K.Rk)
    for y, (a, b) in dual_graph_edges(K).items():
        G.add_edge(a, b, via=y)
    return G
