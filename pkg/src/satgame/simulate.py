"""Policy-vs-policy games, the random F-free process, and scaling runs."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import SatGameError
from .families import ForbiddenFamily, is_saturated, tracker_for
from .graph import Edge, GameGraph, HostGraph
from .policies import Policy, select_move
from .solver import MAX, PlayerRole, mover_of


@dataclass
class Transcript:
    family: str
    host: str
    first: str
    max_policy: Optional[str]
    min_policy: Optional[str]
    seed: Optional[int]
    moves: list[tuple[int, str, Edge]] = field(default_factory=list)
    final_size: int = 0
    saturated: bool = False

    def to_dict(self) -> dict:
        d = {
            "config": {
                "family": self.family,
                "host": self.host,
                "first": self.first,
                "max_policy": self.max_policy,
                "min_policy": self.min_policy,
                "seed": self.seed,
            },
            "moves": [[i, who, list(e)] for i, who, e in self.moves],
            "final_size": self.final_size,
            "saturated": self.saturated,
        }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        c = d["config"]
        return cls(
            c["family"], c["host"], c["first"], c.get("max_policy"), c.get("min_policy"),
            c.get("seed"),
            [(int(i), str(who), (int(e[0]), int(e[1]))) for i, who, e in d["moves"]],
            int(d["final_size"]), bool(d["saturated"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        return cls.from_dict(json.loads(text))

    def replay(self, upto: Optional[int] = None) -> GameGraph:
        """Rebuild the position after the first ``upto`` moves (default all),
        checking that every prefix stays free."""
        host = HostGraph.parse(self.host)
        f = ForbiddenFamily.parse(self.family, host)
        tr = tracker_for(f, GameGraph.empty(host))
        for _, _, e in self.moves[:upto]:
            if not tr.contains(e):
                raise SatGameError(f"replayed move {e} is illegal")
            tr.push(e)
        return tr.g


def play(
    pmax: Policy,
    pmin: Policy,
    f: ForbiddenFamily,
    h: HostGraph,
    first: PlayerRole = MAX,
    seed: Optional[int] = None,
    on_move: Optional[Callable[[GameGraph, PlayerRole, Edge], None]] = None,
) -> Transcript:
    """Alternate the two policies from the empty position until saturation.

    ``seed`` is recorded in the transcript; random policies carry their own
    seeds.  ``on_move`` sees each position after its move is played.
    """
    f.check_host(h)
    pmax.check(f, h)
    pmin.check(f, h)
    tr = tracker_for(f, GameGraph.empty(h))
    t = Transcript(f.label(), h.label(), str(first), pmax.label(), pmin.label(), seed)
    while tr.first() is not None:
        mover = mover_of(tr.g, first)
        pol = pmax if mover is MAX else pmin
        e = select_move(pol, f, tr.g, mover, tr)
        tr.push(e)
        t.moves.append((len(t.moves), str(mover), e))
        if on_move is not None:
            on_move(tr.g, mover, e)
    t.final_size = len(tr.g.edges)
    t.saturated = is_saturated(f, tr.g)
    return t


def random_process(f: ForbiddenFamily, h: HostGraph, seed: int) -> Transcript:
    """Add a uniformly random legal edge each step until saturation."""
    f.check_host(h)
    rng = np.random.default_rng(seed)
    tr = tracker_for(f, GameGraph.empty(h))
    t = Transcript(f.label(), h.label(), "max", None, None, seed)
    while True:
        e = tr.sample(rng)
        if e is None:
            break
        t.moves.append((len(t.moves), "max" if len(t.moves) % 2 == 0 else "min", e))
        tr.push(e)
    t.final_size = len(tr.g.edges)
    t.saturated = is_saturated(f, tr.g)
    return t


def trial_seed(master: int, trial: int) -> int:
    """Per-trial seed: SeedSequence mixing of (master, trial), 63 bits."""
    return int(np.random.SeedSequence([master, trial]).generate_state(1, np.uint64)[0]) >> 1


@dataclass
class ExperimentRow:
    n: int
    trials: int
    min: int
    mean: float
    max: int
    seconds: float
    m: Optional[int] = None
    seeds: list[int] = field(default_factory=list, repr=False)


def _with_seed(p: Policy, seed: int) -> Policy:
    return Policy("random", seed) if p.name == "random" else p


def scaling_experiment(
    f_text: str,
    hosts: Sequence[HostGraph],
    pmax: Policy,
    pmin: Policy,
    trials: int,
    seed: int,
    first: PlayerRole = MAX,
) -> list[ExperimentRow]:
    """One row per host, sizes ascending.

    Random policies are reseeded per trial with :func:`trial_seed`, so each
    trial is reproducible from the master seed and its index.
    """
    if trials < 1:
        raise SatGameError("trials must be >= 1")
    sizes = [h.order for h in hosts]
    if sizes != sorted(sizes):
        raise SatGameError("hosts must be in ascending size")
    rows = []
    for h in hosts:
        f = ForbiddenFamily.parse(f_text, h)
        t0 = time.perf_counter()
        finals, seeds = [], []
        for i in range(trials):
            s = trial_seed(seed, i)
            seeds.append(s)
            tr = play(_with_seed(pmax, s), _with_seed(pmin, s + 1), f, h, first, s)
            finals.append(tr.final_size)
        rows.append(ExperimentRow(
            n=h.n, m=h.m if h.is_bipartite else None, trials=trials,
            min=min(finals), mean=sum(finals) / trials, max=max(finals),
            seconds=time.perf_counter() - t0, seeds=seeds,
        ))
    return rows


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "trials", "min", "mean", "max", "seconds"])
    for r in rows:
        w.writerow([r.n, r.trials, r.min, f"{r.mean:.3f}", r.max, f"{r.seconds:.3f}"])
    return buf.getvalue()
