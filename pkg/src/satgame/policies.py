"""Move-selection policies: the proof strategies plus two baselines.

Every theorem strategy states a condition it tries to keep after its own
move.  When no legal move keeps it, or the strategy leaves the move free,
the policy plays the lexicographically least legal move (``first``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import PolicyHostMismatch, PositionSaturated, SatGameError
from .families import ForbiddenFamily, MoveTracker, tracker_for
from .graph import (
    ComponentKind,
    ComponentSummary,
    Edge,
    GameGraph,
    HostGraph,
    add_edge,
    bipartition_balance,
    components,
    norm,
)
from .solver import MAX, MIN, PlayerRole, first_of, shared_solver

STRATEGY_NAMES = (
    "odd-balance-max",
    "tree-one-max",
    "tree-split-min",
    "claw-parity",
    "p4-min",
    "p4-max",
    "bip-p4-min",
    "bip-p4-max",
    "c4-star-max",
)


@dataclass(frozen=True)
class Policy:
    name: str
    seed: Optional[int] = None

    def __post_init__(self):
        if self.name == "random":
            if self.seed is None:
                raise SatGameError("random policy needs a seed")
        elif self.name not in STRATEGY_NAMES + ("first",):
            raise SatGameError(f"unknown policy {self.name!r}")

    @classmethod
    def parse(cls, text: str) -> "Policy":
        t = text.strip().lower()
        if t.startswith("random:"):
            try:
                return cls("random", int(t.split(":", 1)[1]))
            except ValueError:
                raise SatGameError(f"bad random seed in {text!r}") from None
        return cls(t)

    @property
    def deterministic(self) -> bool:
        return self.name != "random"

    def label(self) -> str:
        return f"random:{self.seed}" if self.name == "random" else self.name

    def check(self, f: ForbiddenFamily, host: HostGraph) -> None:
        """Raise PolicyHostMismatch unless the policy is meant for (f, host)."""
        need = _COMPAT.get(self.name)
        if need is None:
            return
        kind, bip = need
        ok = f.kind == kind and host.is_bipartite == bip
        if self.name == "claw-parity":
            ok = ok and f.param == 2
        if self.name in ("p4-min", "p4-max", "bip-p4-min", "bip-p4-max"):
            ok = ok and f.param == 4
        if not ok:
            raise PolicyHostMismatch(f"{self.name} does not play {f} on {host}")


_COMPAT = {
    "odd-balance-max": ("odd-cycles", False),
    "tree-one-max": ("trees", False),
    "tree-split-min": ("trees", False),
    "claw-parity": ("star", False),
    "p4-min": ("path", False),
    "p4-max": ("path", False),
    "bip-p4-min": ("path", True),
    "bip-p4-max": ("path", True),
    "c4-star-max": ("cycle", True),
}


def select_move(
    p: Policy,
    f: ForbiddenFamily,
    g: GameGraph,
    mover: PlayerRole,
    tracker: Optional[MoveTracker] = None,
) -> Edge:
    """The policy's move at g.  ``tracker`` may carry precomputed legality
    for g (it must describe exactly this position)."""
    p.check(f, g.host)
    if tracker is None:
        tracker = tracker_for(f, g)
    if tracker.first() is None:
        raise PositionSaturated("no legal move: position is saturated")
    if p.name == "first":
        return tracker.first()
    if p.name == "random":
        rng = np.random.default_rng([p.seed, len(g.edges)])
        return tracker.sample(rng)
    e = _STRATEGIES[p.name](g, mover, tracker)
    return e if e is not None else tracker.first()


# -- helpers ----------------------------------------------------------------


def _first_keeping(
    g: GameGraph,
    tracker: MoveTracker,
    groups: Iterable[Iterable[Edge]],
    keep: Callable[[GameGraph], bool],
) -> Optional[Edge]:
    # first legal move, scanning groups in priority order, whose result satisfies keep
    for group in groups:
        for e in group:
            if tracker.contains(e) and keep(add_edge(g, e)):
                return e
    return None


def _legal(tracker: MoveTracker, *cands: Optional[Edge]) -> Optional[Edge]:
    for e in cands:
        if e is not None:
            e = norm(*e)
            if tracker.contains(e):
                return e
    return None


def _nontrivial(g: GameGraph) -> list[ComponentSummary]:
    return [c for c in components(g) if not c.trivial]


def _classify_moves(g: GameGraph, moves: list[Edge]) -> dict[str, list[Edge]]:
    comp = g.component_of
    out: dict[str, list[Edge]] = {"attach": [], "within": [], "join": [], "pair": []}
    for u, v in moves:
        iu, iv = not g.adj[u], not g.adj[v]
        if iu and iv:
            out["pair"].append((u, v))
        elif iu or iv:
            out["attach"].append((u, v))
        elif comp[u] == comp[v]:
            out["within"].append((u, v))
        else:
            out["join"].append((u, v))
    return out


# -- odd cycles -------------------------------------------------------------


def _all_balanced(g: GameGraph) -> bool:
    return all(b is not None and b[0] == b[1] for b in bipartition_balance(g))


def odd_balance_max(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Keep every nontrivial component's bipartition balanced.

    After Min attaches an isolated vertex to a component, another isolated
    vertex goes to the same component; otherwise prefer an edge inside a
    component, then joining two components, then pairing isolated vertices.
    """
    cats = _classify_moves(g, tr.moves())
    return _first_keeping(
        g, tr, (cats["attach"], cats["within"], cats["join"], cats["pair"]), _all_balanced
    )


# -- spanning trees ---------------------------------------------------------


def tree_one_max(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Leave exactly one nontrivial component after every move.

    Absorbing isolated vertices comes before filling the component, so the
    last isolated vertex is taken by Max whenever parity allows.
    """
    cats = _classify_moves(g, tr.moves())
    one = lambda h: len(_nontrivial(h)) == 1  # noqa: E731
    return _first_keeping(
        g, tr, (cats["join"], cats["attach"], cats["within"], cats["pair"]), one
    )


def tree_split_min(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Keep two nontrivial components once they exist; otherwise fix parity."""
    iso = g.isolated
    nt = len(_nontrivial(g))
    cats = _classify_moves(g, tr.moves())
    if nt >= 2:
        two = lambda h: len(_nontrivial(h)) >= 2  # noqa: E731
        if len(iso) >= 2:
            order = (cats["pair"],)
        elif len(iso) == 1:
            order = (cats["attach"],)
        else:
            order = (cats["within"],)
        return _first_keeping(g, tr, order, two)
    if nt == 1:
        if len(iso) % 2 == 0 and iso:
            return cats["pair"][0] if cats["pair"] else None
        for group in (cats["within"], cats["attach"]):
            if group:
                return group[0]
        return None
    return cats["pair"][0] if cats["pair"] else None


# -- claws ------------------------------------------------------------------

_CLAW = ForbiddenFamily.star(2)
ENDGAME_VERTICES = 7
# lookahead children may collapse to a few more vertices; those tables are tiny
LOOKAHEAD_VERTICES = 10


def claw_reduce(g: GameGraph) -> tuple[GameGraph, list[int]]:
    """Collapse a claw-free position to the part that can still move.

    Cycles are dead.  Every open path on three or more vertices behaves like
    P_3 (only its two ends can move), so it is replaced by one.  Returns the
    reduced position on K_r and the map from reduced to original vertices.
    """
    iso: list[int] = []
    pieces: list[list[int]] = []
    for c in components(g):
        if c.kind is ComponentKind.ISOLATED_VERTEX:
            iso.append(c.vertices[0])
        elif c.kind is ComponentKind.SINGLE_EDGE:
            pieces.append(list(c.vertices))
        elif c.kind is ComponentKind.PATH:
            ends = [v for v in c.vertices if g.degree(v) == 1]
            mid = next(v for v in c.vertices if g.degree(v) == 2)
            pieces.append([ends[0], mid, ends[1]])
        elif c.kind not in (ComponentKind.TRIANGLE, ComponentKind.CYCLE):
            raise SatGameError("position is not claw-free")
    back = iso + [v for piece in pieces for v in piece]
    edges = []
    base = len(iso)
    for piece in pieces:
        for i in range(len(piece) - 1):
            edges.append((base + i, base + i + 1))
        base += len(piece)
    host = HostGraph.complete(max(len(back), 1))
    return GameGraph.from_edges(host, edges), back


def _claw_value(red: GameGraph, mover: PlayerRole) -> int:
    first = first_of(red, mover)
    return shared_solver(_CLAW, red.host, first).value(red)


def _one_path_even(h: GameGraph) -> bool:
    paths = 0
    for c in components(h):
        if c.kind in (ComponentKind.SINGLE_EDGE, ComponentKind.PATH):
            paths += 1
    return paths == 1 and len(h.isolated) % 2 == 0


def claw_parity(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Winning strategy for the player the claw theorem favours.

    Small games (at most seven live vertices after collapsing long paths)
    are read from a solved table.  On larger boards the player keeps one
    open path, an even number of isolated vertices and any number of
    cycles; once six or fewer isolated vertices remain it picks the move
    whose collapsed result is best according to the solved tables.
    """
    red, back = claw_reduce(g)
    if red.order <= ENDGAME_VERTICES:
        first = first_of(red, mover)
        e = shared_solver(_CLAW, red.host, first).best_move(red)
        return None if e is None else norm(back[e[0]], back[e[1]])
    if len(g.isolated) <= 6:
        best: Optional[tuple[int, Edge]] = None
        for e in tr.moves():
            child_red, _ = claw_reduce(add_edge(g, e))
            if child_red.order > LOOKAHEAD_VERTICES:
                continue
            val = _claw_value(child_red, mover.other)
            better = best is None or (val > best[0] if mover is MAX else val < best[0])
            if better:
                best = (val, e)
        if best is not None:
            return best[1]
    return _first_keeping(g, tr, (tr.moves(),), _one_path_even)


# -- P_4 on K_n -------------------------------------------------------------


def _stars(g: GameGraph) -> list[ComponentSummary]:
    return [c for c in components(g) if c.is_star_like]


def p4_min(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Min's strategy: answer P_3 with K_{1,3}, otherwise add isolated edges.

    With exactly three isolated vertices Min enlarges a star that has at
    least two edges, and the last isolated vertex joins a largest star.
    """
    iso = g.isolated
    stars = _stars(g)
    if len(iso) >= 2:
        for c in stars:
            if c.kind is ComponentKind.PATH:  # P_3
                e = _legal(tr, (iso[0], c.star_center(g)))
                if e:
                    return e
    if len(iso) == 3:
        for c in stars:
            if c.num_edges >= 2:
                e = _legal(tr, (iso[0], c.star_center(g)))
                if e:
                    return e
    if len(iso) >= 2:
        e = _legal(tr, (iso[0], iso[1]))
        if e:
            return e
    if len(iso) == 1 and stars:
        top = max(c.num_edges for c in stars)
        for c in stars:
            if c.num_edges == top:
                e = _legal(tr, (iso[0], c.star_center(g)))
                if e:
                    return e
    return None


def p4_max(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Max's strategy: never make P_2 (bar the opening), grow P_2 into P_3,
    then feed stars of three or more edges or close triangles."""
    iso = g.isolated
    if not g.edges:
        return _legal(tr, (iso[0], iso[1])) if len(iso) >= 2 else None
    comps = components(g)
    if iso:
        for c in comps:
            if c.kind is ComponentKind.SINGLE_EDGE:
                e = _legal(tr, (iso[0], c.vertices[0]))
                if e:
                    return e
        for c in comps:
            if c.kind is ComponentKind.STAR:
                e = _legal(tr, (iso[0], c.center))
                if e:
                    return e
    for c in comps:
        if c.kind is ComponentKind.PATH and c.size == 3:
            a, b = (v for v in c.vertices if g.degree(v) == 1)
            e = _legal(tr, (a, b))
            if e:
                return e
    return None


# -- P_4 on K_{m,n} ---------------------------------------------------------


@dataclass
class _BipView:
    iso: tuple[list[int], list[int]]  # isolated vertices of X and of Y
    edges1: list[Edge]  # isolated edges (x, y)
    stars: tuple[list[ComponentSummary], list[ComponentSummary]]  # X-stars, Y-stars

    @property
    def full(self) -> bool:
        return bool(self.stars[0]) and bool(self.stars[1])


def _bip_view(g: GameGraph) -> _BipView:
    host = g.host
    iso: tuple[list[int], list[int]] = ([], [])
    edges1: list[Edge] = []
    stars: tuple[list, list] = ([], [])
    for c in components(g):
        if c.trivial:
            iso[host.part(c.vertices[0])].append(c.vertices[0])
        elif c.kind is ComponentKind.SINGLE_EDGE:
            edges1.append(c.vertices)
        elif c.is_star_like:
            # leaves sit in the part opposite the centre
            leaf_part = 1 - host.part(c.star_center(g))
            stars[leaf_part].append(c)
    return _BipView(iso, edges1, stars)


def _grow(g: GameGraph, tr: MoveTracker, view: _BipView, part: int, largest: bool = False) -> Optional[Edge]:
    # attach an isolated vertex of `part` to a star whose leaves lie in `part`
    if not view.iso[part]:
        return None
    stars = view.stars[part]
    if largest:
        stars = sorted(stars, key=lambda c: -c.num_edges)
    for c in stars:
        e = _legal(tr, (view.iso[part][0], c.star_center(g)))
        if e:
            return e
    return None


def _star_from_edge(tr: MoveTracker, view: _BipView, part: int) -> Optional[Edge]:
    # turn an isolated edge into a star with two leaves in `part`
    if not view.iso[part]:
        return None
    for x, y in view.edges1:
        center = y if part == 0 else x
        e = _legal(tr, (view.iso[part][0], center))
        if e:
            return e
    return None


def _new_edge(tr: MoveTracker, view: _BipView) -> Optional[Edge]:
    if view.iso[0] and view.iso[1]:
        return _legal(tr, (view.iso[0][0], view.iso[1][0]))
    return None


def bip_p4_min(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Min on K_{m,n}: force one star type when parity allows, else build a
    matching of size ceil(n/2) and then play freely."""
    m, n = g.host.m, g.host.n
    first = first_of(g, mover)
    view = _bip_view(g)
    if first is MAX:
        mode = 1 if n % 2 == 0 else (0 if m % 2 == 0 else None)
    elif (m * n) % 2 == 0 or not g.edges:
        mode = None
    else:
        xs, ys = view.stars
        mode = None
        if len(view.edges1) <= 1:
            if xs and not ys:
                mode = 0
            elif ys and not xs:
                mode = 1
    if mode is not None:
        return _star_from_edge(tr, view, mode) or _grow(g, tr, view, mode)
    # Min-start with mn odd: Max had to answer with a second isolated edge,
    # which enlarges the matching by one more
    target = (n + 1) // 2 + (1 if first is MIN and (m * n) % 2 == 1 else 0)
    built = len(view.edges1) + len(view.stars[0]) + len(view.stars[1])
    if built < target:
        return _new_edge(tr, view)
    return None


def bip_p4_max(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Max on K_{m,n}: force a full subgraph and keep one star growing."""
    m, n = g.host.m, g.host.n
    first = first_of(g, mover)
    view = _bip_view(g)
    xs, ys = view.stars
    if first is MAX and n % 2 == 0:
        return None  # Min holds the game to n whatever Max does
    if first is MAX and m % 2 == 0:
        # n odd: an X-star forces m edges
        if xs:
            return None
        return (
            _star_from_edge(tr, view, 0)
            or (_new_edge(tr, view) if len(view.iso[1]) == 1 else None)
            or _grow(g, tr, view, 1)
        )
    if first is MIN and n <= 2:
        return None if xs else _star_from_edge(tr, view, 0)
    if first is MIN and (m * n) % 2 == 1:
        if len(g.edges) == 1:
            return _new_edge(tr, view)
        if not view.full:
            want = 1 if (xs and not ys) else 0
            return _star_from_edge(tr, view, want) or _new_edge(tr, view)
        return _grow(g, tr, view, 1, largest=True)
    # Min-start with mn even, or Max-start with mn odd
    if first is MIN:
        part = 1 if n % 2 == 0 else 0
    elif xs and ys:
        part = 1 if max(c.num_edges for c in ys) >= max(c.num_edges for c in xs) else 0
    else:
        part = 0 if xs else 1
    if not view.stars[part]:
        return _star_from_edge(tr, view, part) or _new_edge(tr, view)
    if not view.stars[1 - part] and view.edges1 and len(view.iso[1 - part]) == 1:
        # the other star type from Min's isolated edge, using up the last
        # isolated vertex there: full, and no new component can appear
        e = _star_from_edge(tr, view, 1 - part)
        if e:
            return e
    if not view.full and len(view.iso[part]) == 1 and not view.edges1 and view.iso[1 - part]:
        # with an isolated edge around, the leftover isolates of the other
        # part will have to hang off it anyway; otherwise make K_2 and let
        # Min complete the full subgraph
        e = _legal(tr, (view.iso[part][0], view.iso[1 - part][0]))
        if e:
            return e
    return _grow(g, tr, view, part, largest=True)


# -- C_4 on K_{n,n} ---------------------------------------------------------


def star_count(n: int) -> int:
    """k = floor(sqrt(n/3)) - 1 designated stars per part."""
    return max(math.isqrt(n // 3) - 1, 0)


def designated_centers(host: HostGraph) -> tuple[list[int], list[int]]:
    k = star_count(host.n)
    return list(range(k)), list(range(host.m, host.m + k))


def designated_stars(g: GameGraph) -> dict[int, list[int]]:
    """Leaves of each designated star, as read off the position.

    A leaf of centre c is a neighbour of c that is neither a centre nor
    adjacent to another centre of c's part; the k lowest such ids count.
    """
    k = star_count(g.host.n)
    xc, yc = designated_centers(g.host)
    centers = set(xc) | set(yc)
    out: dict[int, list[int]] = {}
    for side in (xc, yc):
        for c in side:
            others = [d for d in side if d != c]
            leaves = [
                v for v in sorted(g.adj[c])
                if v not in centers and not any(d in g.adj[v] for d in others)
            ]
            out[c] = leaves[:k]
    return out


def _fresh(g: GameGraph, part: int, banned: set[int]) -> list[int]:
    return [v for v in g.host.part_vertices(part) if not g.adj[v] and v not in banned]


def c4_building(g: GameGraph) -> Optional[Edge]:
    """Next star-building move, or None once every star is finished or stuck."""
    k = star_count(g.host.n)
    if k <= 0:
        return None
    xc, yc = designated_centers(g.host)
    centers = set(xc) | set(yc)
    stars = designated_stars(g)
    for c in xc + yc:
        if len(stars[c]) >= k:
            continue
        fresh = _fresh(g, 1 - g.host.part(c), centers)
        if fresh:
            return norm(c, fresh[0])
    return None


def _c4_hub(g: GameGraph, tr: MoveTracker) -> Optional[Edge]:
    # give the centres of each part a common neighbour outside the leaves,
    # which rules out edges from a centre to another star's leaves
    xc, yc = designated_centers(g.host)
    centers = set(xc) | set(yc)
    stars = designated_stars(g)
    for side in (xc, yc):
        if len(side) < 2:
            continue
        leaves = {v for c in side for v in stars[c]}
        opp = 1 - g.host.part(side[0])
        best, best_hits = None, 0
        for h in g.host.part_vertices(opp):
            if h in centers or h in leaves:
                continue
            hits = sum(1 for c in side if c in g.adj[h])
            if hits > best_hits:
                best, best_hits = h, hits
        if best is None:
            for h in _fresh(g, opp, centers | leaves):
                for c in side:
                    e = _legal(tr, (c, h))
                    if e:
                        return e
            continue
        for c in side:
            if c not in g.adj[best]:
                e = _legal(tr, (c, best))
                if e:
                    return e
    return None


def c4_star_max(g: GameGraph, mover: PlayerRole, tr: MoveTracker) -> Optional[Edge]:
    """Give degree k to k specified vertices in each part, one fresh leaf at
    a time, then tie each part's centres to a common hub, then play
    ``first``."""
    e = c4_building(g)
    if e is not None and tr.contains(e):
        return e
    return _c4_hub(g, tr)


_STRATEGIES: dict[str, Callable[[GameGraph, PlayerRole, MoveTracker], Optional[Edge]]] = {
    "odd-balance-max": odd_balance_max,
    "tree-one-max": tree_one_max,
    "tree-split-min": tree_split_min,
    "claw-parity": claw_parity,
    "p4-min": p4_min,
    "p4-max": p4_max,
    "bip-p4-min": bip_p4_min,
    "bip-p4-max": bip_p4_max,
    "c4-star-max": c4_star_max,
}
