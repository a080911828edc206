"""Canonical certificates of positions under host automorphisms.

A certificate is built by colour refinement followed by individualization
backtracking; the smallest adjacency encoding over all discrete leaves is
kept.  Host parts are initial colours on bipartite hosts (both assignments
are tried when the parts have equal size).  Individualization only tries
one vertex per class of twins inside a cell, since swapping twins is an
automorphism that fixes everything individualized so far.
"""

from __future__ import annotations

import struct
from typing import Optional, Sequence

from .families import ForbiddenFamily, legal_moves
from .graph import Edge, GameGraph, add_edge

VERSION = 1
Certificate = bytes


def _refine(adj: Sequence[frozenset], colors: list[int]) -> list[int]:
    ncol = len(set(colors))
    N = len(colors)
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(N)]
        order = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [order[s] for s in sigs]
        if len(order) == ncol:
            return new
        colors, ncol = new, len(order)


def _encode(masks: Sequence[int], colors: list[int], N: int) -> int:
    # colours are a permutation 0..N-1 here
    code = 0
    for u in range(N):
        cu = colors[u]
        m = masks[u]
        while m:
            low = m & -m
            w = low.bit_length() - 1
            m ^= low
            cw = colors[w]
            if cu < cw:
                code |= 1 << (cu * N + cw)
    return code


def _twin_reps(adj: Sequence[frozenset], cell: list[int]) -> list[int]:
    reps: list[int] = []
    for v in cell:
        for r in reps:
            if adj[v] - {r} == adj[r] - {v}:
                break
        else:
            reps.append(v)
    return reps


def _search(adj, masks, colors: list[int], N: int, best: list[Optional[int]]) -> None:
    colors = _refine(adj, colors)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    if len(cells) == N:
        code = _encode(masks, colors, N)
        if best[0] is None or code < best[0]:
            best[0] = code
        return
    target_color = min(c for c, vs in cells.items() if len(vs) > 1)
    cell = cells[target_color]
    for v in _twin_reps(adj, cell):
        nxt = [2 * c for c in colors]
        nxt[v] = 2 * target_color - 1
        _search(adj, masks, nxt, N, best)


def canonical_code(g: GameGraph) -> int:
    """Least adjacency encoding of g over all host-automorphic relabelings."""
    host = g.host
    N = g.order
    if not g.edges:
        return 0
    adj, masks = g.adj, g.nbr_masks
    starts: list[list[int]]
    if host.is_bipartite:
        x_first = [host.part(v) for v in range(N)]
        starts = [x_first]
        if host.m == host.n:
            starts.append([1 - c for c in x_first])
    else:
        starts = [[0] * N]
    best: list[Optional[int]] = [None]
    for colors in starts:
        _search(adj, masks, colors, N, best)
    return best[0]


def certificate(g: GameGraph) -> Certificate:
    """Deterministic byte string, equal exactly for host-isomorphic positions.

    Layout: version, host kind, m, n, edge count, then the canonical
    encoding.  Printable with ``.hex()``; not a stable format.
    """
    host = g.host
    code = canonical_code(g)
    N = g.order
    nbytes = (N * N + 7) // 8
    head = struct.pack(
        ">BBIII", VERSION, 1 if host.is_bipartite else 0, host.m, host.n, len(g.edges)
    )
    return head + code.to_bytes(nbytes, "big")


def orbit_children(f: ForbiddenFamily, g: GameGraph) -> list[tuple[Edge, GameGraph, Certificate]]:
    """One (move, child, child certificate) per orbit of legal moves.

    Representatives are the least move of each orbit, in move order.
    """
    seen: set[Certificate] = set()
    out = []
    for e in legal_moves(f, g):
        child = add_edge(g, e)
        cert = certificate(child)
        if cert not in seen:
            seen.add(cert)
            out.append((e, child, cert))
    return out


def legal_move_orbits(f: ForbiddenFamily, g: GameGraph) -> list[Edge]:
    """One representative per automorphism class of legal moves of g."""
    return [e for e, _, _ in orbit_children(f, g)]


def relabel(g: GameGraph, perm: Sequence[int]) -> GameGraph:
    """Image of g under the vertex map v -> perm[v]."""
    return GameGraph.from_edges(g.host, [(perm[u], perm[v]) for u, v in g.edges])


def random_automorphism(host, rng) -> list[int]:
    """A uniformly random automorphism of the host, as a vertex map.

    ``rng`` is a numpy Generator.
    """
    if not host.is_bipartite:
        return [int(v) for v in rng.permutation(host.order)]
    m, n = host.m, host.n
    xs = [int(v) for v in rng.permutation(m)]
    ys = [m + int(v) for v in rng.permutation(n)]
    if m == n and rng.random() < 0.5:
        # swap the parts
        return [ys[v] for v in range(m)] + [xs[v - m] for v in range(m, m + n)]
    return xs + ys
