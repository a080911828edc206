"""Forbidden families: freeness, legal moves and saturation.

Each family is decided by a structural characterization instead of a
generic subgraph search:

==============  ===========================================
odd-cycles      the position is bipartite
trees           the position is disconnected
star (r)        maximum degree at most r (forbids K_{1,r+1})
path (k)        no path on k vertices
cycle (4)       no two vertices share two neighbours
==============  ===========================================
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import HostOrderMismatch, PositionNotFree, SatGameError
from .graph import Edge, GameGraph, HostGraph, add_edge, p4_between

KINDS = ("odd-cycles", "trees", "star", "path", "cycle")


@dataclass(frozen=True)
class ForbiddenFamily:
    """``param`` is r for ``star`` (forbidding K_{1,r+1}), k for ``path``,
    4 for ``cycle`` and the bound tree order for ``trees``."""

    kind: str
    param: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SatGameError(f"unknown family {self.kind!r}")
        if self.kind == "star" and self.param < 1:
            raise SatGameError("star family needs r >= 1")
        if self.kind == "path" and self.param < 3:
            raise SatGameError("path family needs k >= 3")
        if self.kind == "cycle" and self.param != 4:
            raise SatGameError("only cycle:4 is supported")
        if self.kind == "trees" and self.param < 1:
            raise SatGameError("trees family needs its order")

    @classmethod
    def odd_cycles(cls) -> "ForbiddenFamily":
        return cls("odd-cycles")

    @classmethod
    def trees(cls, order: int) -> "ForbiddenFamily":
        return cls("trees", order)

    @classmethod
    def star(cls, r: int) -> "ForbiddenFamily":
        """Forbid K_{1,r+1}, i.e. cap degrees at r."""
        return cls("star", r)

    @classmethod
    def path(cls, k: int) -> "ForbiddenFamily":
        return cls("path", k)

    @classmethod
    def cycle4(cls) -> "ForbiddenFamily":
        return cls("cycle", 4)

    @classmethod
    def parse(cls, text: str, host: Optional[HostGraph] = None) -> "ForbiddenFamily":
        """Parse CLI syntax: odd-cycles, trees, star:r+1=4, path:4, cycle:4.

        ``trees`` binds its order to ``host``.  ``star:4`` is accepted as a
        shorthand for ``star:r+1=4``.
        """
        t = text.strip().lower()
        if t == "odd-cycles":
            return cls.odd_cycles()
        if t == "trees":
            if host is None:
                raise SatGameError("trees family needs a host to bind its order")
            return cls.trees(host.order)
        m = re.fullmatch(r"star:(?:r\+1=)?(\d+)", t)
        if m:
            return cls.star(int(m.group(1)) - 1)
        m = re.fullmatch(r"path:(\d+)", t)
        if m:
            return cls.path(int(m.group(1)))
        if t == "cycle:4":
            return cls.cycle4()
        raise SatGameError(f"bad family syntax {text!r}")

    def label(self) -> str:
        if self.kind in ("odd-cycles", "trees"):
            return self.kind
        if self.kind == "star":
            return f"star:r+1={self.param + 1}"
        return f"{self.kind}:{self.param}"

    def __str__(self) -> str:
        return self.label()

    def check_host(self, host: HostGraph) -> None:
        if self.kind == "trees" and host.order != self.param:
            raise HostOrderMismatch(
                f"trees family bound to order {self.param}, host {host} has order {host.order}"
            )


# -- from-scratch checks ----------------------------------------------------


def has_path_on(g: GameGraph, k: int) -> bool:
    """True iff g contains a simple path with k vertices."""
    if k <= 1:
        return g.order >= k
    adj = g.adj
    if k == 2:
        return bool(g.edges)
    if k == 3:
        return g.max_degree >= 2

    def extend(v: int, seen: set[int], depth: int) -> bool:
        if depth == k:
            return True
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                if extend(w, seen, depth + 1):
                    return True
                seen.discard(w)
        return False

    for s in range(g.order):
        if adj[s] and extend(s, {s}, 1):
            return True
    return False


def _has_c4(g: GameGraph) -> bool:
    if g.host.is_bipartite and g.order > 64:
        A = adjacency_matrix(g).astype(np.int32)
        common = A @ A.T
        np.fill_diagonal(common, 0)
        return bool((common >= 2).any())
    masks = g.nbr_masks
    N = g.order
    for u in range(N):
        if bin(masks[u]).count("1") < 2:
            continue
        for v in range(u + 1, N):
            if bin(masks[u] & masks[v]).count("1") >= 2:
                return True
    return False


def is_free(f: ForbiddenFamily, g: GameGraph) -> bool:
    """True iff g contains no member of f."""
    f.check_host(g.host)
    if f.kind == "odd-cycles":
        return g.coloring is not None
    if f.kind == "trees":
        return g.num_components >= 2
    if f.kind == "star":
        return g.max_degree <= f.param
    if f.kind == "path":
        return not has_path_on(g, f.param)
    return not _has_c4(g)


# -- incremental checks -----------------------------------------------------


def _path_through(g: GameGraph, u: int, v: int, k: int) -> bool:
    # Is there a path on >= k vertices using the new edge uv?
    adj = g.adj

    def longest_from(x: int, banned: set[int], need: int) -> bool:
        # can we walk >= need more vertices starting at x (x counted)?
        if need <= 1:
            return True
        for w in adj[x]:
            if w not in banned:
                banned.add(w)
                ok = longest_from(w, banned, need - 1)
                banned.discard(w)
                if ok:
                    return True
        return False

    def walk_u(x: int, seen: set[int], count: int) -> bool:
        # seen holds the u-side path; try to finish on the v side
        if longest_from(v, seen | {v}, k - count):
            return True
        if count >= k - 1:
            return False
        for w in adj[x]:
            if w not in seen and w != v:
                seen.add(w)
                if walk_u(w, seen, count + 1):
                    return True
                seen.discard(w)
        return False

    return walk_u(u, {u}, 1)


def creates(f: ForbiddenFamily, g: GameGraph, u: int, v: int) -> bool:
    """True iff adding uv to the free position g creates a member of f."""
    if f.kind == "odd-cycles":
        comp = g.component_of
        col = g.coloring
        return comp[u] == comp[v] and col[u] == col[v]
    if f.kind == "trees":
        comp = g.component_of
        return g.num_components == 2 and comp[u] != comp[v]
    if f.kind == "star":
        r = f.param
        return len(g.adj[u]) >= r or len(g.adj[v]) >= r
    if f.kind == "path":
        k = f.param
        if k == 3:
            return bool(g.adj[u]) or bool(g.adj[v])
        return _path_through(g, u, v, k)
    return p4_between(g, u, v)


def legal_moves(f: ForbiddenFamily, g: GameGraph) -> list[Edge]:
    """Host edges e outside g with g + e still free, in edge normal form order."""
    if not is_free(f, g):
        raise PositionNotFree(f"position is not {f}-free")
    return _legal_unchecked(f, g)


def _legal_unchecked(f: ForbiddenFamily, g: GameGraph) -> list[Edge]:
    return [e for e in g.non_edges() if not creates(f, g, e[0], e[1])]


def is_legal(f: ForbiddenFamily, g: GameGraph, e: Iterable[int]) -> bool:
    u, v = e
    return g.host.allows(u, v) and v not in g.adj[u] and not creates(f, g, u, v)


def is_saturated(f: ForbiddenFamily, g: GameGraph) -> bool:
    """Free, and no host edge can be added without creating a member of f."""
    if not is_free(f, g):
        return False
    if f.kind == "cycle" and g.host.is_bipartite and g.order > 64:
        return bool(blocked_matrix(g).all())
    return not any(True for e in g.non_edges() if not creates(f, g, e[0], e[1]))


# -- trackers ---------------------------------------------------------------


def adjacency_matrix(g: GameGraph) -> np.ndarray:
    """X-by-Y boolean biadjacency matrix of a bipartite position."""
    m, n = g.host.m, g.host.n
    A = np.zeros((m, n), dtype=bool)
    for x, y in g.edges:
        A[x, y - m] = True
    return A


def blocked_matrix(g: GameGraph) -> np.ndarray:
    """X-by-Y mask of host edges that are present or would close a C_4."""
    A = adjacency_matrix(g)
    Ai = A.astype(np.int32)
    return A | ((Ai @ Ai.T @ Ai) > 0)


class MoveTracker:
    """Legal moves of a position that advances one edge at a time.

    The generic tracker recomputes the legal list lazily after each push;
    :class:`C4Tracker` keeps an incremental mask for large bipartite hosts.
    """

    def __init__(self, f: ForbiddenFamily, g: GameGraph):
        if not is_free(f, g):
            raise PositionNotFree(f"position is not {f}-free")
        self.family = f
        self.g = g
        self._moves: Optional[list[Edge]] = None

    def push(self, e: Edge) -> None:
        self.g = add_edge(self.g, e)
        self._moves = None

    def moves(self) -> list[Edge]:
        if self._moves is None:
            self._moves = _legal_unchecked(self.family, self.g)
        return self._moves

    @property
    def count(self) -> int:
        return len(self.moves())

    def first(self) -> Optional[Edge]:
        ms = self.moves()
        return ms[0] if ms else None

    def sample(self, rng: np.random.Generator) -> Optional[Edge]:
        ms = self.moves()
        return ms[int(rng.integers(len(ms)))] if ms else None

    def contains(self, e: Edge) -> bool:
        return is_legal(self.family, self.g, e)


class C4Tracker(MoveTracker):
    """Incremental legality for cycle:4 on a bipartite host.

    A new edge xy makes a pair unplayable exactly when it becomes the end or
    the middle edge of a 3-edge path between that pair, so each push only
    touches the neighbourhoods of x and y.
    """

    def __init__(self, f: ForbiddenFamily, g: GameGraph):
        if f.kind != "cycle" or not g.host.is_bipartite:
            raise SatGameError("C4Tracker needs cycle:4 on a bipartite host")
        super().__init__(f, g)
        self.m = g.host.m
        self.A = adjacency_matrix(g)
        self.blocked = blocked_matrix(g)

    def push(self, e: Edge) -> None:
        x, yy = e
        y = yy - self.m
        if self.blocked[x, y]:
            raise SatGameError(f"{e} is not a legal move")
        A, B = self.A, self.blocked
        nx_ = np.flatnonzero(A[x])  # Y-neighbours of x
        ny_ = np.flatnonzero(A[:, y])  # X-neighbours of y
        if len(nx_) and len(ny_):
            B[np.ix_(ny_, nx_)] = True
        if len(ny_):
            B[x] |= A[ny_].any(axis=0)
        if len(nx_):
            B[:, y] |= A[:, nx_].any(axis=1)
        A[x, y] = True
        B[x, y] = True
        self.g = add_edge(self.g, e)
        self._moves = None

    def _flat(self) -> np.ndarray:
        return np.flatnonzero(~self.blocked)

    def moves(self) -> list[Edge]:
        if self._moves is None:
            n, m = self.A.shape[1], self.m
            self._moves = [(int(i // n), int(m + i % n)) for i in self._flat()]
        return self._moves

    @property
    def count(self) -> int:
        return int((~self.blocked).sum())

    def first(self) -> Optional[Edge]:
        free = ~self.blocked
        i = int(np.argmax(free))
        n = free.shape[1]
        if not free.flat[i]:
            return None
        return (i // n, self.m + i % n)

    def sample(self, rng: np.random.Generator) -> Optional[Edge]:
        idx = self._flat()
        if not len(idx):
            return None
        i = int(idx[int(rng.integers(len(idx)))])
        n = self.A.shape[1]
        return (i // n, self.m + i % n)

    def contains(self, e: Edge) -> bool:
        x, yy = e
        if not self.g.host.allows(x, yy) or x >= yy:
            return False
        return not bool(self.blocked[x, yy - self.m])


def tracker_for(f: ForbiddenFamily, g: GameGraph) -> MoveTracker:
    if f.kind == "cycle" and g.host.is_bipartite and g.order > 16:
        return C4Tracker(f, g)
    return MoveTracker(f, g)
