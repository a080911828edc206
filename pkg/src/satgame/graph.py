"""Host graphs, game positions, and structural queries.

Vertex ids are dense integers fixed by the host.  On a bipartite host the
part X is ``0..m-1`` and the part Y is ``m..m+n-1`` with ``m >= n``.  Edges are
always stored in normal form ``(min id, max id)``.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import EdgeAlreadyPresent, EdgeNotInHost, SatGameError

Edge = tuple[int, int]


def norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class HostGraph:
    """The arena: ``K_n`` or ``K_{m,n}``.

    Use :meth:`complete` and :meth:`bipartite` rather than the raw
    constructor; the latter normalizes ``m >= n``.
    """

    kind: str  # "complete" | "bipartite"
    m: int
    n: int

    def __post_init__(self):
        if self.kind == "complete":
            if self.n < 1 or self.m != 0:
                raise SatGameError(f"bad complete host K_{self.n}")
        elif self.kind == "bipartite":
            if self.n < 1 or self.m < self.n:
                raise SatGameError(f"bad bipartite host K_{{{self.m},{self.n}}}")
        else:
            raise SatGameError(f"unknown host kind {self.kind!r}")

    @classmethod
    def complete(cls, n: int) -> "HostGraph":
        return cls("complete", 0, n)

    @classmethod
    def bipartite(cls, m: int, n: int) -> "HostGraph":
        if m < n:
            m, n = n, m
        return cls("bipartite", m, n)

    @classmethod
    def parse(cls, text: str) -> "HostGraph":
        """Parse ``K:n`` or ``B:m,n``."""
        try:
            tag, _, rest = text.strip().partition(":")
            tag = tag.upper()
            if tag == "K":
                return cls.complete(int(rest))
            if tag == "B":
                a, b = rest.split(",")
                return cls.bipartite(int(a), int(b))
        except ValueError as exc:
            raise SatGameError(f"bad host syntax {text!r}") from exc
        raise SatGameError(f"bad host syntax {text!r}")

    @property
    def is_bipartite(self) -> bool:
        return self.kind == "bipartite"

    @property
    def order(self) -> int:
        return self.n if self.kind == "complete" else self.m + self.n

    def part(self, v: int) -> int:
        """0 for X, 1 for Y; always 0 on a complete host."""
        return 1 if self.kind == "bipartite" and v >= self.m else 0

    def part_vertices(self, side: int) -> range:
        if not self.is_bipartite:
            raise SatGameError("complete host has no parts")
        return range(self.m) if side == 0 else range(self.m, self.m + self.n)

    def allows(self, u: int, v: int) -> bool:
        N = self.order
        if not (0 <= u < N and 0 <= v < N) or u == v:
            return False
        if self.kind == "bipartite":
            return (u < self.m) != (v < self.m)
        return True

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """All host edges in lexicographic order."""
        if self.kind == "complete":
            return tuple(combinations(range(self.n), 2))
        return tuple((x, y) for x in range(self.m) for y in range(self.m, self.m + self.n))

    @property
    def num_edges(self) -> int:
        if self.kind == "complete":
            return self.n * (self.n - 1) // 2
        return self.m * self.n

    def label(self) -> str:
        return f"K:{self.n}" if self.kind == "complete" else f"B:{self.m},{self.n}"

    def to_dict(self) -> dict:
        if self.kind == "complete":
            return {"type": "complete", "n": self.n}
        return {"type": "bipartite", "m": self.m, "n": self.n}

    @classmethod
    def from_dict(cls, d: dict) -> "HostGraph":
        if d.get("type") == "complete":
            return cls.complete(int(d["n"]))
        if d.get("type") == "bipartite":
            return cls.bipartite(int(d["m"]), int(d["n"]))
        raise SatGameError(f"bad host record {d!r}")

    def __str__(self) -> str:
        return f"K_{self.n}" if self.kind == "complete" else f"K_{{{self.m},{self.n}}}"


@dataclass(frozen=True, eq=False)
class GameGraph:
    """An immutable position: a simple subgraph of the host.

    ``adj`` holds one frozenset of neighbours per vertex and doubles as the
    degree cache.  Build positions with :meth:`empty`, :meth:`from_edges` or
    :func:`add_edge`; the raw constructor trusts its arguments.
    """

    host: HostGraph
    edges: frozenset
    adj: tuple = field(repr=False)

    @classmethod
    def empty(cls, host: HostGraph) -> "GameGraph":
        return cls(host, frozenset(), (frozenset(),) * host.order)

    @classmethod
    def from_edges(cls, host: HostGraph, edges: Iterable[Iterable[int]]) -> "GameGraph":
        nbrs: list[set[int]] = [set() for _ in range(host.order)]
        es = set()
        for raw in edges:
            u, v = raw
            if not host.allows(u, v):
                raise EdgeNotInHost(f"{(u, v)} is not an edge of {host}")
            e = norm(u, v)
            if e in es:
                raise EdgeAlreadyPresent(f"{e} listed twice")
            es.add(e)
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(host, frozenset(es), tuple(frozenset(s) for s in nbrs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GameGraph):
            return NotImplemented
        return self.host == other.host and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.host, self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def order(self) -> int:
        return self.host.order

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def non_edges(self) -> Iterator[Edge]:
        """Host edges not yet in the position, lexicographic order."""
        adj = self.adj
        for u, v in self.host.edges:
            if v not in adj[u]:
                yield (u, v)

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @cached_property
    def isolated(self) -> tuple[int, ...]:
        return tuple(v for v, a in enumerate(self.adj) if not a)

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        """Component index per vertex; components numbered by least vertex."""
        comp = [-1] * self.order
        c = 0
        for s in range(self.order):
            if comp[s] >= 0:
                continue
            comp[s] = c
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if comp[w] < 0:
                        comp[w] = c
                        stack.append(w)
            c += 1
        return tuple(comp)

    @cached_property
    def num_components(self) -> int:
        return max(self.component_of, default=-1) + 1

    @cached_property
    def coloring(self) -> Optional[tuple[int, ...]]:
        """A proper 2-colouring (least vertex of each component gets 0), or None."""
        col = [-1] * self.order
        for s in range(self.order):
            if col[s] >= 0:
                continue
            col[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if col[w] < 0:
                        col[w] = 1 - col[u]
                        queue.append(w)
                    elif col[w] == col[u]:
                        return None
        return tuple(col)

    @cached_property
    def nbr_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in a) for a in self.adj)

    def to_dict(self) -> dict:
        return {"host": self.host.to_dict(), "edges": [list(e) for e in self.sorted_edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "GameGraph":
        return cls.from_edges(HostGraph.from_dict(d["host"]), d.get("edges", []))

    @classmethod
    def from_json(cls, text: str) -> "GameGraph":
        return cls.from_dict(json.loads(text))


def add_edge(g: GameGraph, e: Iterable[int]) -> GameGraph:
    """Return ``g + e``; ``g`` itself is left untouched."""
    u, v = e
    if not g.host.allows(u, v):
        raise EdgeNotInHost(f"{(u, v)} is not an edge of {g.host}")
    if v in g.adj[u]:
        raise EdgeAlreadyPresent(f"{norm(u, v)} already present")
    adj = list(g.adj)
    adj[u] = adj[u] | {v}
    adj[v] = adj[v] | {u}
    return GameGraph(g.host, g.edges | {norm(u, v)}, tuple(adj))


# -- components -------------------------------------------------------------


class ComponentKind(enum.Enum):
    ISOLATED_VERTEX = "isolated-vertex"
    SINGLE_EDGE = "single-edge"
    PATH = "path"
    STAR = "star"
    TRIANGLE = "triangle"
    CYCLE = "cycle"
    TREE = "tree"
    OTHER = "other"


@dataclass(frozen=True)
class ComponentSummary:
    """One connected component.

    ``size`` is the path order for PATH / SINGLE_EDGE (2), the cycle length
    for CYCLE / TRIANGLE, and the leaf count for STAR (``center`` is set only
    for STAR).  ``x_count`` / ``y_count`` split the vertices by part on
    bipartite hosts (``y_count`` is 0 on complete hosts).
    """

    vertices: tuple[int, ...]
    kind: ComponentKind
    num_edges: int
    size: int = 0
    center: Optional[int] = None
    x_count: int = 0
    y_count: int = 0

    @property
    def trivial(self) -> bool:
        return self.kind is ComponentKind.ISOLATED_VERTEX

    @property
    def is_star_like(self) -> bool:
        """True for any star ``K_{1,t}`` with ``t >= 1`` (K_2 and P_3 included)."""
        return self.kind in (ComponentKind.SINGLE_EDGE, ComponentKind.STAR) or (
            self.kind is ComponentKind.PATH and self.size == 3
        )

    def star_center(self, g: GameGraph) -> Optional[int]:
        """Centre of a star-like component (least endpoint for K_2)."""
        if self.kind is ComponentKind.STAR:
            return self.center
        if self.kind is ComponentKind.SINGLE_EDGE:
            return self.vertices[0]
        if self.kind is ComponentKind.PATH and self.size == 3:
            return next(v for v in self.vertices if g.degree(v) == 2)
        return None


def _classify(g: GameGraph, verts: tuple[int, ...]) -> ComponentSummary:
    nv = len(verts)
    degs = [g.degree(v) for v in verts]
    ne = sum(degs) // 2
    host = g.host
    xc = sum(1 for v in verts if host.part(v) == 0) if host.is_bipartite else nv
    yc = nv - xc if host.is_bipartite else 0
    base = dict(vertices=verts, num_edges=ne, x_count=xc, y_count=yc)
    if nv == 1:
        return ComponentSummary(kind=ComponentKind.ISOLATED_VERTEX, **base)
    if ne == 1:
        return ComponentSummary(kind=ComponentKind.SINGLE_EDGE, size=2, **base)
    maxd = max(degs)
    if ne == nv - 1:
        if maxd <= 2:
            return ComponentSummary(kind=ComponentKind.PATH, size=nv, **base)
        if maxd == nv - 1:
            center = verts[degs.index(maxd)]
            return ComponentSummary(kind=ComponentKind.STAR, size=nv - 1, center=center, **base)
        return ComponentSummary(kind=ComponentKind.TREE, **base)
    if ne == nv and maxd == 2:
        kind = ComponentKind.TRIANGLE if nv == 3 else ComponentKind.CYCLE
        return ComponentSummary(kind=kind, size=nv, **base)
    return ComponentSummary(kind=ComponentKind.OTHER, **base)


def components(g: GameGraph) -> list[ComponentSummary]:
    """Connected components ordered by least vertex, each with its class label."""
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(g.component_of):
        groups.setdefault(c, []).append(v)
    return [_classify(g, tuple(vs)) for _, vs in sorted(groups.items())]


NOT_BIPARTITE = None


def bipartition_balance(g: GameGraph) -> list[Optional[tuple[int, int]]]:
    """Colour-class sizes of each nontrivial component.

    Entries follow component order.  Each entry is ``(a, b)`` where ``a``
    counts the class containing the component's least vertex, or
    ``NOT_BIPARTITE`` when the component has an odd cycle.
    """
    out: list[Optional[tuple[int, int]]] = []
    for comp in components(g):
        if comp.trivial:
            continue
        col: dict[int, int] = {comp.vertices[0]: 0}
        queue = deque([comp.vertices[0]])
        ok = True
        while queue and ok:
            u = queue.popleft()
            for w in g.adj[u]:
                if w not in col:
                    col[w] = 1 - col[u]
                    queue.append(w)
                elif col[w] == col[u]:
                    ok = False
                    break
        if not ok:
            out.append(NOT_BIPARTITE)
        else:
            a = sum(1 for c in col.values() if c == 0)
            out.append((a, len(col) - a))
    return out


# -- matchings --------------------------------------------------------------


def _bipartite_matching(g: GameGraph) -> int:
    host = g.host
    match_y: dict[int, int] = {}

    def augment(x: int, seen: set[int]) -> bool:
        for y in g.adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in match_y or augment(match_y[y], seen):
                match_y[y] = x
                return True
        return False

    size = 0
    for x in host.part_vertices(0):
        if g.adj[x] and augment(x, set()):
            size += 1
    return size


def _general_matching(g: GameGraph) -> int:
    # Exact recursion over vertex subsets; only used on small complete hosts.
    masks = g.nbr_masks
    memo: dict[int, int] = {}

    def best(avail: int) -> int:
        # drop vertices with no neighbour inside avail
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            if masks[v] & avail:
                break
            avail ^= low
        if not avail:
            return 0
        if avail in memo:
            return memo[avail]
        low = avail & -avail
        v = low.bit_length() - 1
        rest = avail ^ low
        res = best(rest)  # v unmatched
        cand = masks[v] & rest
        while cand:
            lw = cand & -cand
            res = max(res, 1 + best(rest ^ lw))
            cand ^= lw
        memo[avail] = res
        return res

    return best((1 << g.order) - 1)


def max_matching(g: GameGraph) -> int:
    """Size of a maximum matching, alpha'(g)."""
    if not g.edges:
        return 0
    if g.host.is_bipartite:
        return _bipartite_matching(g)
    if g.order <= 24:
        return _general_matching(g)
    import networkx as nx

    G = nx.Graph(list(g.edges))
    return len(nx.max_weight_matching(G, maxcardinality=True))


# -- paths ------------------------------------------------------------------


def p4_between(g: GameGraph, u: int, v: int) -> bool:
    """True iff g has a 3-edge path u-a-b-v on four distinct vertices."""
    if u == v:
        raise SatGameError("p4_between needs distinct endpoints")
    adj = g.adj
    nu, nv = adj[u], adj[v]
    if len(nu) > len(nv):
        u, v, nu, nv = v, u, nv, nu
    for a in nu:
        if a == v:
            continue
        na = adj[a]
        for b in (na if len(na) < len(nv) else nv):
            if b != u and b in na and b in nv:
                return True
    return False
