"""The acceptance table: each row recomputes its values from scratch and
compares them with the closed forms or structural checks it names."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

import numpy as np

from .analysis import (
    C4BoundParams, ClosedForm, Interval, closed_form, match_bound_report, parse_number,
)
from .canonical import certificate, random_automorphism, relabel
from .families import ForbiddenFamily, is_free, is_saturated, legal_moves
from .graph import GameGraph, HostGraph, add_edge
from .policies import (
    Policy, c4_building, designated_centers, designated_stars, star_count,
)
from .simulate import Transcript, play, random_process
from .solver import MAX, MIN, PlayerRole, SolveConfig, Solver, best_response


@dataclass
class RowResult:
    number: int
    name: str
    passed: bool
    seconds: float
    failures: list[str] = field(default_factory=list)
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.number:2d} {self.name} ({self.seconds:.1f}s)"
        if self.note:
            text += f" {self.note}"
        if self.failures:
            text += ": " + "; ".join(self.failures)
        return text


class _Check:
    """Collects failed comparisons for one row."""

    def __init__(self):
        self.failures: list[str] = []
        self.count = 0

    def __call__(self, ok: bool, what: str) -> None:
        self.count += 1
        if not ok:
            self.failures.append(what)


def _solve(f: ForbiddenFamily, h: HostGraph, first: PlayerRole, **kw) -> int:
    return Solver(f, h, first, **kw).solve().value


def _budget(check: _Check, t0: float, limit: float, what: str) -> None:
    took = time.perf_counter() - t0
    check(took <= limit, f"{what} took {took:.0f}s > {limit:.0f}s")


# -- rows -------------------------------------------------------------------


def row_odd_cycles(check: _Check) -> None:
    for k in (2, 3):
        for first in (MAX, MIN):
            t0 = time.perf_counter()
            v = _solve(ForbiddenFamily.odd_cycles(), HostGraph.complete(2 * k), first)
            check(v == k * k, f"K_{2 * k} {first}: {v} != {k * k}")
            if k == 3:
                _budget(check, t0, 60, f"K_6 {first}")


TREE_VALUES = {MAX: (2, 6, 7, 11), MIN: (3, 4, 7, 11)}


def row_trees(check: _Check) -> None:
    for first, vals in TREE_VALUES.items():
        for n, want in zip(range(4, 8), vals):
            t0 = time.perf_counter()
            v = _solve(ForbiddenFamily.trees(n), HostGraph.complete(n), first)
            check(v == want, f"K_{n} {first}: {v} != {want}")
            check(v == closed_form(ClosedForm("trees", n=n, first=first)), f"K_{n} {first}: formula")
            if n == 7:
                _budget(check, t0, 600, f"K_7 {first}")


def row_claw(check: _Check) -> None:
    t0 = time.perf_counter()
    for first in (MAX, MIN):
        for n in range(3, 9):
            v = _solve(ForbiddenFamily.star(2), HostGraph.complete(n), first)
            want = closed_form(ClosedForm("claw", n=n, first=first))
            check(v == want, f"K_{n} {first}: {v} != {want}")
    _budget(check, t0, 300, "claw row")


STAR_CHECKS = ((3, range(4, 9)), (4, range(5, 8)))


def row_star_check(check: _Check) -> None:
    t0 = time.perf_counter()
    for r, ns in STAR_CHECKS:
        for n in ns:
            v = _solve(ForbiddenFamily.star(r), HostGraph.complete(n), MAX)
            want = (r * n - 1) // 2
            check(v == want, f"r={r} K_{n}: {v} != {want}")
    _budget(check, t0, 900, "star row")


def row_p4_kn(check: _Check) -> None:
    t0 = time.perf_counter()
    for n in range(4, 10):
        for first in (MAX, MIN):
            v = _solve(ForbiddenFamily.path(4), HostGraph.complete(n), first)
            iv = closed_form(ClosedForm("p4-kn", n=n, first=first))
            check(v in iv, f"K_{n} {first}: {v} not in {iv}")
            if first is MAX:
                check(abs(5 * v - (4 * n - 1)) <= 5, f"K_{n}: |{v} - (4n-1)/5| > 1")
    _budget(check, t0, 300, "P_4 on K_n row")


def bip_pairs(top: int = 5) -> Iterator[tuple[int, int]]:
    for m in range(1, top + 1):
        for n in range(1, m + 1):
            yield m, n


def row_p4_kmn(check: _Check) -> None:
    t0 = time.perf_counter()
    for m, n in bip_pairs():
        for first in (MAX, MIN):
            v = _solve(ForbiddenFamily.path(4), HostGraph.bipartite(m, n), first)
            want = closed_form(ClosedForm("p4-kmn", m=m, n=n, first=first))
            check(v == want, f"K_{{{m},{n}}} {first}: {v} != {want}")
    _budget(check, t0, 300, "P_4 on K_{m,n} row")


def certification_cases() -> Iterator[tuple[str, PlayerRole, ForbiddenFamily, HostGraph, PlayerRole, Callable[[int], bool], str]]:
    """(policy, role, family, host, first, accept(value), description)."""
    for k in (2, 3):
        for first in (MAX, MIN):
            yield ("odd-balance-max", MAX, ForbiddenFamily.odd_cycles(), HostGraph.complete(2 * k),
                   first, lambda v, k=k: v >= k * k, f">= {k * k}")
    for n in (4, 5, 6):
        want = 6 if n == 5 else math.comb(n - 2, 2) + 1
        yield ("tree-one-max", MAX, ForbiddenFamily.trees(n), HostGraph.complete(n),
               MAX, lambda v, w=want: v >= w, f">= {want}")
    for n in range(5, 9):
        for first in (MAX, MIN):
            want = closed_form(ClosedForm("claw", n=n, first=first))
            winner = MAX if want == n else MIN
            yield ("claw-parity", winner, ForbiddenFamily.star(2), HostGraph.complete(n),
                   first, lambda v, w=want: v == w, f"== {want}")
    for n in range(4, 10):
        hi, lo = (4 * n + 4) // 5, -(-(4 * n - 6) // 5)
        yield ("p4-min", MIN, ForbiddenFamily.path(4), HostGraph.complete(n),
               MAX, lambda v, hi=hi: v <= hi, f"<= {hi}")
        yield ("p4-max", MAX, ForbiddenFamily.path(4), HostGraph.complete(n),
               MAX, lambda v, lo=lo: v >= lo, f">= {lo}")
    for m, n in bip_pairs():
        for first in (MAX, MIN):
            want = closed_form(ClosedForm("p4-kmn", m=m, n=n, first=first))
            for name, role in (("bip-p4-min", MIN), ("bip-p4-max", MAX)):
                yield (name, role, ForbiddenFamily.path(4), HostGraph.bipartite(m, n),
                       first, lambda v, w=want: v == w, f"== {want}")


def row_certify(check: _Check) -> None:
    t0 = time.perf_counter()
    for name, role, f, h, first, accept, desc in certification_cases():
        v = best_response(Policy(name), role, SolveConfig(f, h, first))
        check(accept(v), f"{name} as {role} on {h.label()} {first}-start: {v}, want {desc}")
    _budget(check, t0, 900, "certification row")


@dataclass
class C4Run:
    transcript: Transcript
    final: GameGraph
    stars_completed: bool
    stars_disjoint: bool
    max_s_neighbors: int
    seconds: float


def c4_star_run(n: int, seed: int) -> C4Run:
    """c4-star-max against random:seed on K_{n,n}, with building-phase checks."""
    h = HostGraph.bipartite(n, n)
    k = star_count(n)
    xc, yc = designated_centers(h)
    centers = set(xc) | set(yc)
    state = {"building": True, "completed": False, "disjoint": True}

    def on_move(g: GameGraph, mover: PlayerRole, e) -> None:
        if not state["building"]:
            return
        stars = designated_stars(g)
        leaves = [v for ls in stars.values() for v in ls]
        if len(set(leaves)) != len(leaves) or centers & set(leaves):
            state["disjoint"] = False
        if all(len(ls) >= k for ls in stars.values()):
            state["completed"] = True
            state["building"] = False
        elif mover is MAX and c4_building(g) is None and not g.isolated:
            state["building"] = False

    t0 = time.perf_counter()
    tr = play(Policy("c4-star-max"), Policy("random", seed), ForbiddenFamily.cycle4(), h, MAX, seed, on_move)
    secs = time.perf_counter() - t0
    g = tr.replay()
    S = {v for ls in designated_stars(g).values() for v in ls}
    most = max(sum(1 for w in g.adj[v] if w in S) for v in range(g.order))
    return C4Run(tr, g, state["completed"], state["disjoint"], most, secs)


def row_c4_structure(check: _Check, sizes=(100, 400), seeds=range(5)) -> None:
    for n in sizes:
        cap = math.ceil(math.sqrt(n / 3))
        for seed in seeds:
            run = c4_star_run(n, seed)
            tag = f"n={n} seed={seed}"
            check(run.transcript.saturated, f"{tag}: not saturated")
            check(run.stars_completed, f"{tag}: designated stars not completed")
            check(run.stars_disjoint, f"{tag}: designated stars overlap")
            check(run.max_s_neighbors <= cap, f"{tag}: a vertex has {run.max_s_neighbors} > {cap} S-neighbours")
            check(run.final.num_components == 1, f"{tag}: final graph disconnected")
            check(run.transcript.final_size >= 2 * n - 1, f"{tag}: {run.transcript.final_size} < {2 * n - 1} edges")
            if n == 400:
                check(run.seconds <= 600, f"{tag}: {run.seconds:.0f}s > 600s")


def saturated_subgraphs(f: ForbiddenFamily, h: HostGraph) -> Iterator[GameGraph]:
    """Every f-saturated subgraph of h, each exactly once (include/exclude
    search over host edges in order, pruned on freeness)."""
    edges = h.edges

    def rec(i: int, g: GameGraph) -> Iterator[GameGraph]:
        if i == len(edges):
            if is_saturated(f, g):
                yield g
            return
        e = edges[i]
        child = add_edge(g, e)
        if is_free(f, child):
            yield from rec(i + 1, child)
        yield from rec(i + 1, g)

    yield from rec(0, GameGraph.empty(h))


def row_matching_lemma(check: _Check) -> None:
    t0 = time.perf_counter()
    f = ForbiddenFamily.path(4)
    for m in range(1, 8):
        for n in range(1, min(m, 8 - m) + 1):
            h = HostGraph.bipartite(m, n)
            for g in saturated_subgraphs(f, h):
                rep = match_bound_report(g)
                check(rep.edges <= rep.bound, f"{h.label()} {g.sorted_edges()}: {rep.edges} > {rep.bound}")
                if rep.full or rep.isolated_edge:
                    check(rep.equality, f"{h.label()} {g.sorted_edges()}: no equality")
    _budget(check, t0, 300, "matching row")


CROSSOVER_DS = ("1/4", "1/5", "1/6", "3/16", "1/8", "1/10", "1/100")


def row_bound_constant(check: _Check) -> None:
    t0 = time.perf_counter()
    p = C4BoundParams(Fraction(1, 3), parse_number("1/sqrt(3)"))
    check(abs(float(p.a) - 1 / 10.4) <= 1e-3, f"a = {float(p.a):.6f} is not within 1e-3 of 1/10.4")
    for text in CROSSOVER_DS:
        d = parse_number(text)
        q = C4BoundParams(Fraction(1), d)
        check(isinstance(q.a, Fraction) and q.a == 1 / (2 * d), f"d={text}: a = {q.a} != 1/(2d)")
    _budget(check, t0, 1, "bound-constant row")


def _random_position(rng: np.random.Generator, f: ForbiddenFamily, h: HostGraph) -> GameGraph:
    g = GameGraph.empty(h)
    steps = int(rng.integers(0, h.num_edges + 1))
    for _ in range(steps):
        moves = legal_moves(f, g)
        if not moves:
            break
        g = add_edge(g, moves[int(rng.integers(len(moves)))])
    return g


def property_hosts() -> list[HostGraph]:
    return [HostGraph.complete(n) for n in range(2, 11)] + [
        HostGraph.bipartite(m, n) for m in range(1, 6) for n in range(1, m + 1) if m + n <= 10
    ]


def instance_list() -> list[tuple[ForbiddenFamily, HostGraph, PlayerRole]]:
    """Every solver instance of the value rows."""
    out = []
    for first in (MAX, MIN):
        out += [(ForbiddenFamily.odd_cycles(), HostGraph.complete(2 * k), first) for k in (2, 3)]
        out += [(ForbiddenFamily.trees(n), HostGraph.complete(n), first) for n in range(4, 8)]
        out += [(ForbiddenFamily.star(2), HostGraph.complete(n), first) for n in range(3, 9)]
        out += [(ForbiddenFamily.path(4), HostGraph.complete(n), first) for n in range(4, 10)]
        out += [(ForbiddenFamily.path(4), HostGraph.bipartite(m, n), first) for m, n in bip_pairs()]
    out += [(ForbiddenFamily.star(r), HostGraph.complete(n), MAX) for r, ns in STAR_CHECKS for n in ns]
    return out


def emitted_transcripts(seed: int = 0) -> Iterator[Transcript]:
    """Policy games and random processes covering every policy."""
    pairs = [
        ("odd-cycles", "K:6", "odd-balance-max", "first"),
        ("trees", "K:6", "tree-one-max", "tree-split-min"),
        ("star:3", "K:9", "claw-parity", "claw-parity"),
        ("path:4", "K:10", "p4-max", "p4-min"),
        ("path:4", "B:5,3", "bip-p4-max", "bip-p4-min"),
        ("cycle:4", "B:30,30", "c4-star-max", f"random:{seed}"),
    ]
    for fam, host, pmax, pmin in pairs:
        h = HostGraph.parse(host)
        f = ForbiddenFamily.parse(fam, h)
        for first in (MAX, MIN):
            yield play(Policy.parse(pmax), Policy.parse(pmin), f, h, first, seed)
    for fam, host in (("odd-cycles", "K:8"), ("star:4", "K:9"), ("path:4", "B:6,4"), ("cycle:4", "B:12,12")):
        h = HostGraph.parse(host)
        yield random_process(ForbiddenFamily.parse(fam, h), h, seed)


def row_properties(check: _Check, cases: int = 1000, seed: int = 20240611) -> None:
    rng = np.random.default_rng(seed)
    hosts = property_hosts()
    fams = [ForbiddenFamily.odd_cycles(), ForbiddenFamily.star(2), ForbiddenFamily.path(4), ForbiddenFamily.cycle4()]
    for i in range(cases):
        h = hosts[int(rng.integers(len(hosts)))]
        g = _random_position(rng, fams[i % len(fams)], h)
        img = relabel(g, random_automorphism(h, rng))
        check(certificate(img) == certificate(g), f"certificate moved under relabelling: {g.sorted_edges()}")
    for j, (f, h, first) in enumerate(instance_list()):
        ref = _solve(f, h, first)
        shuffled = _solve(f, h, first, shuffle_seed=j)
        check(ref == shuffled, f"{f.label()} {h.label()} {first}: shuffled {shuffled} != {ref}")
    for tr in emitted_transcripts():
        g = tr.replay()
        f = ForbiddenFamily.parse(tr.family, g.host)
        check(len(g.edges) == tr.final_size, f"{tr.family} {tr.host}: replay size differs")
        check(is_saturated(f, g) == tr.saturated, f"{tr.family} {tr.host}: replay saturation differs")
        check(Transcript.from_json(tr.to_json()) == tr, f"{tr.family} {tr.host}: JSON round trip differs")


ROWS: list[tuple[int, str, Callable[[_Check], None]]] = [
    (1, "odd-cycles", row_odd_cycles),
    (2, "trees", row_trees),
    (3, "claw", row_claw),
    (4, "star-check", row_star_check),
    (5, "p4-kn", row_p4_kn),
    (6, "p4-kmn", row_p4_kmn),
    (7, "certify", row_certify),
    (8, "c4-structure", row_c4_structure),
    (9, "matching-lemma", row_matching_lemma),
    (10, "bound-constant", row_bound_constant),
    (11, "properties", row_properties),
]


def run_row(number: int) -> RowResult:
    _, name, fn = ROWS[number - 1]
    check = _Check()
    t0 = time.perf_counter()
    fn(check)
    return RowResult(number, name, not check.failures, time.perf_counter() - t0,
                     check.failures, f"{check.count} checks")


def run_suite(name_filter: Optional[str] = None, out: Callable[[str], None] = print) -> list[RowResult]:
    """Run the rows whose name or number contains ``name_filter``."""
    results = []
    for number, name, _ in ROWS:
        if name_filter and name_filter not in name and name_filter != str(number):
            continue
        res = run_row(number)
        out(res.line())
        results.append(res)
    return results
