"""Command-line interface: ``satgame <command> ...`` (see ``--help``).

Exit codes: 0 success, 1 verification failure, 2 bad usage, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .analysis import (
    THEOREMS, C4BoundParams, ClosedForm, c4_bound_constant, closed_form,
    essential_path_report, match_bound_report, parse_number,
)
from .canonical import certificate
from .errors import NodeBudgetExceeded, SatGameError
from .families import ForbiddenFamily, is_free, is_saturated
from .graph import GameGraph, HostGraph, bipartition_balance, components, max_matching
from .policies import Policy, designated_stars
from .simulate import play, random_process, rows_to_csv, scaling_experiment
from .solver import PlayerRole, SolveConfig, game_value

EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 1, 2, 3

INSPECT_FAMILIES = ("odd-cycles", "trees", "star:3", "star:4", "path:4", "cycle:4")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _read_graph(path: str, host_text: Optional[str]) -> GameGraph:
    """Graph JSON, or a bare list of edges (then --host is required)."""
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    data = json.loads(text)
    if isinstance(data, dict):
        if host_text:
            data = dict(data, host=HostGraph.parse(host_text).to_dict())
        return GameGraph.from_dict(data)
    if not host_text:
        raise SatGameError("--host is required when the edge file is a bare list")
    return GameGraph.from_edges(HostGraph.parse(host_text), data)


def parse_hosts(text: str) -> list[HostGraph]:
    """``B:n,n@50,100,200`` -> hosts with n substituted; or a ``;``-list."""
    if "@" in text:
        template, sizes = text.split("@", 1)
        return [HostGraph.parse(template.replace("n", s.strip())) for s in sizes.split(",")]
    return [HostGraph.parse(t) for t in text.split(";")]


# -- commands ---------------------------------------------------------------


def cmd_solve(a: argparse.Namespace) -> int:
    host = HostGraph.parse(a.host)
    cfg = SolveConfig(
        ForbiddenFamily.parse(a.family, host), host, PlayerRole.parse(a.first),
        memo_capacity=a.memo_capacity, node_budget=a.budget,
    )
    try:
        res = game_value(cfg, symmetry=not a.no_symmetry)
    except NodeBudgetExceeded as exc:
        _emit({
            "family": cfg.family.label(), "host": host.label(), "first": str(cfg.first),
            "value": None, "lower": exc.lower, "upper": exc.upper,
            "nodes": exc.nodes, "exact": False,
        })
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    _emit(res.to_dict())
    return 0


def cmd_play(a: argparse.Namespace) -> int:
    host = HostGraph.parse(a.host)
    tr = play(
        Policy.parse(a.max), Policy.parse(a.min), ForbiddenFamily.parse(a.family, host),
        host, PlayerRole.parse(a.first), a.seed,
    )
    _emit(tr.to_dict())
    return 0


def cmd_process(a: argparse.Namespace) -> int:
    host = HostGraph.parse(a.host)
    _emit(random_process(ForbiddenFamily.parse(a.family, host), host, a.seed).to_dict())
    return 0


def cmd_experiment(a: argparse.Namespace) -> int:
    rows = scaling_experiment(
        a.family, parse_hosts(a.hosts), Policy.parse(a.max), Policy.parse(a.min),
        a.trials, a.seed, PlayerRole.parse(a.first),
    )
    text = rows_to_csv(rows)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_analyze(a: argparse.Namespace) -> int:
    if a.op == "formula":
        cf = ClosedForm(a.theorem, n=a.n, m=a.m, k=a.k, r=a.r, first=PlayerRole.parse(a.first))
        if a.json:
            _emit(cf.to_dict())
        else:
            v = closed_form(cf)
            print(f"{v}{'  (conjectural)' if cf.conjectural else ''}")
        return 0
    if a.op == "c4const":
        p = C4BoundParams(parse_number(a.c), parse_number(a.d))
        val, bound = c4_bound_constant(p, a.n)
        _emit({
            "c": str(p.c), "d": str(p.d), "a": str(val), "a_float": float(val),
            "b": float(p.b), "exact": p.exact, "at_crossover": p.at_crossover,
            "n": a.n, "bound": bound,
        })
        return 0
    g = _read_graph(a.edges, a.host)
    if a.op == "match":
        _emit(match_bound_report(g).to_dict())
        return 0
    # essential
    if a.designated:
        S = sorted({v for ls in designated_stars(g).values() for v in ls})
    else:
        S = [int(t) for t in a.S.split(",") if t.strip()] if a.S else []
    _emit(essential_path_report(g, S).to_dict())
    return 0


def cmd_verify(a: argparse.Namespace) -> int:
    from .verify import run_suite

    results = run_suite(a.filter)
    if not results:
        print(f"no acceptance row matches {a.filter!r}", file=sys.stderr)
        return EXIT_USAGE
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} rows passed")
    return EXIT_VERIFY if failed else 0


def cmd_inspect(a: argparse.Namespace) -> int:
    g = _read_graph(a.edges, a.host)
    status = {}
    for text in INSPECT_FAMILIES:
        try:
            f = ForbiddenFamily.parse(text, g.host)
            f.check_host(g.host)
        except SatGameError:
            continue
        free = is_free(f, g)
        status[f.label()] = {"free": free, "saturated": free and is_saturated(f, g)}
    _emit({
        "host": g.host.label(),
        "edges": len(g.edges),
        "components": [
            {"vertices": list(c.vertices), "kind": c.kind.value, "edges": c.num_edges, "size": c.size}
            for c in components(g)
        ],
        "bipartition": [list(b) if b else None for b in bipartition_balance(g)],
        "matching": max_matching(g),
        "certificate": certificate(g).hex(),
        "families": status,
    })
    return 0


# -- parser -----------------------------------------------------------------


def _host_family(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, help="odd-cycles | trees | star:r+1=R | path:K | cycle:4")
    p.add_argument("--host", required=True, help="K:n or B:m,n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satgame", description="Saturation games on K_n and K_{m,n}.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact game value")
    _host_family(p)
    p.add_argument("--first", default="max", help="max or min")
    p.add_argument("--budget", type=int, default=None, help="node budget")
    p.add_argument("--memo-capacity", type=int, default=5_000_000)
    p.add_argument("--no-symmetry", action="store_true", help="key positions by labelled edges")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("play", help="one game between two policies")
    _host_family(p)
    p.add_argument("--max", required=True, help="Max policy")
    p.add_argument("--min", required=True, help="Min policy")
    p.add_argument("--first", default="max")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("process", help="random free process")
    _host_family(p)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("experiment", help="scaling runs over host sizes")
    p.add_argument("--family", required=True)
    p.add_argument("--hosts", required=True, help="e.g. B:n,n@50,100,200")
    p.add_argument("--max", required=True)
    p.add_argument("--min", required=True)
    p.add_argument("--first", default="max")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("analyze", help="closed forms and structural reports")
    ops = p.add_subparsers(dest="op", required=True)
    q = ops.add_parser("formula", help="closed-form value of a theorem")
    q.add_argument("--theorem", required=True, choices=THEOREMS)
    for name in ("n", "m", "k", "r"):
        q.add_argument(f"--{name}", type=int)
    q.add_argument("--first", default="max")
    q.add_argument("--json", action="store_true")
    q = ops.add_parser("c4const", help="bound constant a for given c, d")
    q.add_argument("--c", required=True, help="rational like 1/3, or sqrt(x), 1/sqrt(x)")
    q.add_argument("--d", required=True)
    q.add_argument("--n", type=int, default=1)
    for name, helptext in (("match", "matching bound on K_{m,n}"), ("essential", "essential P_4 counts")):
        q = ops.add_parser(name, help=helptext)
        q.add_argument("--edges", required=True, help="graph JSON or edge list file, - for stdin")
        q.add_argument("--host")
        if name == "essential":
            grp = q.add_mutually_exclusive_group()
            grp.add_argument("--S", help="comma-separated vertex ids")
            grp.add_argument("--designated", action="store_true", help="S = designated star leaves")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run the acceptance table")
    p.add_argument("--suite", required=True, choices=("paper",))
    p.add_argument("--filter", help="row name or number")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("inspect", help="describe a position")
    p.add_argument("--edges", required=True)
    p.add_argument("--host")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NodeBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SatGameError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
