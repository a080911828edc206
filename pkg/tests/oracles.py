"""Slow, independent reference implementations used by the tests.

Nothing here calls the package's structural shortcuts: subgraph checks
enumerate vertex tuples, matchings enumerate edge sets, isomorphism tries
every host automorphism, and game values come from plain minimax over
labelled edge sets.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import networkx as nx
import numpy as np

from satgame.families import ForbiddenFamily
from satgame.graph import GameGraph, HostGraph


def adjacency(g: GameGraph) -> list[set[int]]:
    adj = [set() for _ in range(g.order)]
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def has_odd_cycle(g: GameGraph) -> bool:
    # an odd closed walk exists iff trace(A^k) > 0 for some odd k <= N
    N = g.order
    A = np.zeros((N, N), dtype=np.int64)
    for u, v in g.edges:
        A[u, v] = A[v, u] = 1
    P = A.copy()
    for k in range(1, N + 1, 2):
        if np.trace(P) > 0:
            return True
        P = np.minimum(P @ A @ A, 1)
    return False


def has_spanning_tree(g: GameGraph) -> bool:
    G = nx.Graph()
    G.add_nodes_from(range(g.order))
    G.add_edges_from(g.edges)
    return nx.is_connected(G)


def has_star(g: GameGraph, leaves: int) -> bool:
    adj = adjacency(g)
    return any(next(itertools.combinations(sorted(adj[c]), leaves), None) for c in range(g.order))


def has_path(g: GameGraph, k: int) -> bool:
    adj = adjacency(g)
    for seq in itertools.permutations(range(g.order), k):
        if all(seq[i + 1] in adj[seq[i]] for i in range(k - 1)):
            return True
    return False


def has_c4(g: GameGraph) -> bool:
    adj = adjacency(g)
    for quad in itertools.combinations(range(g.order), 4):
        a = quad[0]
        # the three cyclic orders through a
        for b, c, d in ((quad[1], quad[2], quad[3]), (quad[1], quad[3], quad[2]), (quad[2], quad[1], quad[3])):
            if b in adj[a] and c in adj[b] and d in adj[c] and a in adj[d]:
                return True
    return False


def contains_member(f: ForbiddenFamily, g: GameGraph) -> bool:
    if f.kind == "odd-cycles":
        return has_odd_cycle(g)
    if f.kind == "trees":
        return has_spanning_tree(g)
    if f.kind == "star":
        return has_star(g, f.param + 1)
    if f.kind == "path":
        return has_path(g, f.param)
    return has_c4(g)


def oracle_free(f: ForbiddenFamily, g: GameGraph) -> bool:
    return not contains_member(f, g)


def matching_number(g: GameGraph) -> int:
    edges = sorted(g.edges)

    def rec(i: int, used: frozenset) -> int:
        if i == len(edges):
            return 0
        u, v = edges[i]
        best = rec(i + 1, used)
        if u not in used and v not in used:
            best = max(best, 1 + rec(i + 1, used | {u, v}))
        return best

    return rec(0, frozenset())


def host_automorphisms(h: HostGraph):
    if not h.is_bipartite:
        yield from itertools.permutations(range(h.order))
        return
    m, n = h.m, h.n
    for px in itertools.permutations(range(m)):
        for py in itertools.permutations(range(m, m + n)):
            yield px + py
            if m == n:
                yield tuple(py[v] for v in range(m)) + tuple(px[v - m] for v in range(m, m + n))


def isomorphic(g1: GameGraph, g2: GameGraph) -> bool:
    if g1.host != g2.host or len(g1.edges) != len(g2.edges):
        return False
    target = g2.edges
    for p in host_automorphisms(g1.host):
        if frozenset(tuple(sorted((p[u], p[v]))) for u, v in g1.edges) == target:
            return True
    return False


def naive_value(f: ForbiddenFamily, h: HostGraph, max_first: bool) -> int:
    """Plain minimax over labelled positions with oracle legality."""
    host_edges = list(h.edges)

    @lru_cache(maxsize=None)
    def rec(edges: frozenset, max_to_move: bool) -> int:
        vals = []
        for e in host_edges:
            if e in edges:
                continue
            child = edges | {e}
            if oracle_free(f, GameGraph.from_edges(h, child)):
                vals.append(rec(child, not max_to_move))
        if not vals:
            return 0
        return 1 + (max(vals) if max_to_move else min(vals))

    return rec(frozenset(), max_first)


def random_graph(rng: np.random.Generator, h: HostGraph, p: float) -> GameGraph:
    return GameGraph.from_edges(h, [e for e in h.edges if rng.random() < p])
