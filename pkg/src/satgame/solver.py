"""Exact game values by memoized, symmetry-reduced minimax.

The memo is keyed by certificate alone: the first player is fixed for a
solve and the player to move follows from the parity of the edge count.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .canonical import Certificate, certificate, orbit_children
from .errors import NodeBudgetExceeded, PositionSaturated, RandomPolicyNotCertifiable, SatGameError
from .families import ForbiddenFamily, is_free, legal_moves
from .graph import Edge, GameGraph, HostGraph, add_edge


class PlayerRole(enum.Enum):
    MAX = "max"
    MIN = "min"

    @property
    def other(self) -> "PlayerRole":
        return PlayerRole.MIN if self is PlayerRole.MAX else PlayerRole.MAX

    @classmethod
    def parse(cls, text: str) -> "PlayerRole":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise SatGameError(f"player must be 'max' or 'min', got {text!r}") from None

    def __str__(self) -> str:
        return self.value


MAX, MIN = PlayerRole.MAX, PlayerRole.MIN


def mover_of(g: GameGraph, first: PlayerRole) -> PlayerRole:
    return first if len(g.edges) % 2 == 0 else first.other


def first_of(g: GameGraph, mover: PlayerRole) -> PlayerRole:
    return mover if len(g.edges) % 2 == 0 else mover.other


@dataclass(frozen=True)
class SolveConfig:
    family: ForbiddenFamily
    host: HostGraph
    first: PlayerRole = MAX
    memo_capacity: int = 5_000_000
    node_budget: Optional[int] = None

    def __post_init__(self):
        if self.memo_capacity < 1 or (self.node_budget is not None and self.node_budget < 1):
            raise SatGameError("budgets must be positive")
        self.family.check_host(self.host)


@dataclass
class SolveResult:
    value: int
    optimal_move: Optional[Edge]
    nodes: int
    memo_entries: int
    elapsed: float
    exact: bool = True
    config: Optional[SolveConfig] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "family": cfg.family.label() if cfg else None,
            "host": cfg.host.label() if cfg else None,
            "first": str(cfg.first) if cfg else None,
            "value": self.value,
            "optimal_move": list(self.optimal_move) if self.optimal_move else None,
            "nodes": self.nodes,
            "exact": self.exact,
        }


class _OutOfBudget(Exception):
    pass


class Solver:
    """Minimax over positions of one (family, host, first player) game.

    ``symmetry=False`` drops both the orbit reduction and the certificate
    memo key (positions are keyed by their labelled edge set instead);
    ``orbits=False`` keeps certificate keys but expands every legal move.
    ``shuffle_seed`` permutes move enumeration order, and ``debug`` re-checks
    each node's legal moves against the from-scratch freeness test.
    """

    def __init__(
        self,
        family: ForbiddenFamily,
        host: HostGraph,
        first: PlayerRole = MAX,
        *,
        memo_capacity: int = 5_000_000,
        node_budget: Optional[int] = None,
        orbits: bool = True,
        symmetry: bool = True,
        shuffle_seed: Optional[int] = None,
        debug: bool = False,
    ):
        family.check_host(host)
        self.family = family
        self.host = host
        self.first = first
        self.memo_capacity = memo_capacity
        self.node_budget = node_budget
        self.orbits = orbits and symmetry
        self.symmetry = symmetry
        self.debug = debug
        self._rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
        self.memo: dict = {}
        self.nodes = 0

    @classmethod
    def from_config(cls, cfg: SolveConfig, **kw) -> "Solver":
        return cls(
            cfg.family, cfg.host, cfg.first,
            memo_capacity=cfg.memo_capacity, node_budget=cfg.node_budget, **kw,
        )

    def key(self, g: GameGraph):
        return certificate(g) if self.symmetry else g.edges

    def children(self, g: GameGraph) -> list[tuple[Edge, GameGraph, object]]:
        if self.debug:
            self._check_legal(g)
        if self.orbits:
            kids = orbit_children(self.family, g)
        else:
            kids = []
            for e in legal_moves(self.family, g):
                child = add_edge(g, e)
                kids.append((e, child, self.key(child)))
        if self._rng is not None:
            self._rng.shuffle(kids)
        return kids

    def _check_legal(self, g: GameGraph) -> None:
        fast = set(legal_moves(self.family, g))
        slow = {e for e in g.non_edges() if is_free(self.family, add_edge(g, e))}
        if fast != slow:
            raise AssertionError(f"legal-move mismatch at {g.sorted_edges()}")

    def value(self, g: GameGraph, key=None) -> int:
        """Remaining moves from g under optimal play."""
        if key is None:
            key = self.key(g)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _OutOfBudget
        kids = self.children(g)
        if not kids:
            v = 0
        else:
            vals = [self.value(c, k) for _, c, k in kids]
            v = 1 + (max(vals) if mover_of(g, self.first) is MAX else min(vals))
        if len(self.memo) >= self.memo_capacity:
            raise _OutOfBudget
        self.memo[key] = v
        return v

    def best_move(self, g: GameGraph) -> Optional[Edge]:
        """Least optimal move from g, or None at a terminal position."""
        kids = self.children(g)
        if not kids:
            return None
        vals = [(self.value(c, k), e) for e, c, k in kids]
        if mover_of(g, self.first) is MAX:
            target = max(v for v, _ in vals)
        else:
            target = min(v for v, _ in vals)
        return min(e for v, e in vals if v == target)

    def solve(self, g: Optional[GameGraph] = None) -> SolveResult:
        """Solve from g (default: the empty position)."""
        if g is None:
            g = GameGraph.empty(self.host)
        if not is_free(self.family, g):
            raise SatGameError("start position is not free for the family")
        t0 = time.perf_counter()
        kids = self.children(g)
        if not kids:
            return SolveResult(0, None, self.nodes, len(self.memo), time.perf_counter() - t0, config=self._cfg())
        maximize = mover_of(g, self.first) is MAX
        done: list[tuple[int, Edge]] = []
        try:
            for e, c, k in kids:
                done.append((self.value(c, k), e))
        except _OutOfBudget:
            vals = [v for v, _ in done]
            cap = self.host.num_edges - len(g.edges)
            if maximize:
                lower, upper = (1 + max(vals) if vals else 1), cap
            else:
                lower, upper = 1, (1 + min(vals) if vals else cap)
            raise NodeBudgetExceeded(self.nodes, len(self.memo), lower, upper) from None
        target = max(v for v, _ in done) if maximize else min(v for v, _ in done)
        move = min(e for v, e in done if v == target)
        return SolveResult(
            1 + target, move, self.nodes, len(self.memo), time.perf_counter() - t0, config=self._cfg()
        )

    def _cfg(self) -> SolveConfig:
        return SolveConfig(
            self.family, self.host, self.first,
            memo_capacity=self.memo_capacity, node_budget=self.node_budget,
        )


def game_value(cfg: SolveConfig, **kw) -> SolveResult:
    """Optimal game length from the empty position of ``cfg``.

    Raises :class:`NodeBudgetExceeded` (with root bounds) when the node
    budget or memo capacity runs out.
    """
    return Solver.from_config(cfg, **kw).solve()


@lru_cache(maxsize=64)
def shared_solver(family: ForbiddenFamily, host: HostGraph, first: PlayerRole) -> Solver:
    """A long-lived solver whose memo is reused across calls (tablebases)."""
    return Solver(family, host, first)


def best_move(f: ForbiddenFamily, g: GameGraph, mover: PlayerRole, first: PlayerRole) -> Edge:
    """A minimax-optimal move; ties go to the lexicographically least edge."""
    if mover_of(g, first) is not mover:
        raise SatGameError(f"{mover} cannot be to move after {len(g.edges)} edges when {first} starts")
    if not is_free(f, g):
        raise SatGameError("position is not free")
    e = shared_solver(f, g.host, first).best_move(g)
    if e is None:
        raise PositionSaturated("no legal move: position is saturated")
    return e


def best_response(policy, fixed_role: PlayerRole, cfg: SolveConfig) -> int:
    """Game length when ``fixed_role`` follows ``policy`` and the opponent
    searches exhaustively for its own objective.

    If the policy plays Max this is the length it forces from below; if it
    plays Min, the length it forces from above.  Positions are keyed by
    their labelled edge set because a policy need not commute with
    relabelling.
    """
    from .policies import select_move

    if not policy.deterministic:
        raise RandomPolicyNotCertifiable(f"{policy.name} is randomized")
    f, first = cfg.family, cfg.first
    policy.check(f, cfg.host)
    memo: dict[frozenset, int] = {}

    def rec(g: GameGraph) -> int:
        hit = memo.get(g.edges)
        if hit is not None:
            return hit
        moves = legal_moves(f, g)
        if not moves:
            v = 0
        else:
            mover = mover_of(g, first)
            if mover is fixed_role:
                e = select_move(policy, f, g, mover)
                v = 1 + rec(add_edge(g, e))
            else:
                vals = [rec(add_edge(g, e)) for e in moves]
                v = 1 + (max(vals) if mover is MAX else min(vals))
        memo[g.edges] = v
        if len(memo) > cfg.memo_capacity:
            raise NodeBudgetExceeded(len(memo), len(memo), 0, cfg.host.num_edges)
        return v

    return rec(GameGraph.empty(cfg.host))
