import pytest

from satgame.errors import PolicyHostMismatch, PositionSaturated, SatGameError
from satgame.families import ForbiddenFamily as F, is_legal, legal_moves
from satgame.graph import GameGraph, HostGraph, add_edge, bipartition_balance, components
from satgame.policies import (
    STRATEGY_NAMES, Policy, claw_reduce, designated_centers, designated_stars, select_move,
    star_count,
)
from satgame.simulate import play
from satgame.solver import MAX, MIN, SolveConfig, best_response, game_value
from satgame.verify import c4_star_run, certification_cases

K = HostGraph.complete
B = HostGraph.bipartite


def G(host, edges):
    return GameGraph.from_edges(host, edges)


# -- construction -----------------------------------------------------------


def test_parse_and_label():
    assert Policy.parse("random:7") == Policy("random", 7)
    assert Policy.parse("Bip-P4-Max") == Policy("bip-p4-max")
    for name in STRATEGY_NAMES + ("first",):
        assert Policy.parse(name).label() == name
    assert Policy("random", 3).label() == "random:3"


def test_bad_policies():
    for text in ("random", "random:x", "greedy"):
        with pytest.raises(SatGameError):
            Policy.parse(text)


def test_policy_host_mismatch():
    with pytest.raises(PolicyHostMismatch):
        Policy("p4-min").check(F.path(4), B(3, 3))
    with pytest.raises(PolicyHostMismatch):
        Policy("bip-p4-max").check(F.path(4), K(6))
    with pytest.raises(PolicyHostMismatch):
        Policy("claw-parity").check(F.star(3), K(6))
    with pytest.raises(PolicyHostMismatch):
        Policy("c4-star-max").check(F.path(4), B(4, 4))
    Policy("first").check(F.cycle4(), B(4, 4))
    Policy("random", 1).check(F.trees(5), K(5))


def test_select_move_on_saturated_position():
    with pytest.raises(PositionSaturated):
        select_move(Policy("first"), F.path(4), G(K(4), [(0, 1), (2, 3)]), MAX)


# -- examples ---------------------------------------------------------------


def test_odd_balance_answers_an_attachment():
    # Min attached vertex 2 to the edge 01; the reply attaches another isolated vertex
    g = G(K(6), [(0, 1), (1, 2)])
    e = select_move(Policy("odd-balance-max"), F.odd_cycles(), g, MAX)
    h = add_edge(g, e)
    assert all(b == (2, 2) or b == (1, 1) for b in bipartition_balance(h))


def test_tree_one_keeps_one_component():
    g = G(K(6), [(0, 1), (2, 3)])
    e = select_move(Policy("tree-one-max"), F.trees(6), g, MAX)
    assert len([c for c in components(add_edge(g, e)) if not c.trivial]) == 1


def test_first_is_lex_least():
    g = G(K(5), [(0, 1)])
    assert select_move(Policy("first"), F.star(2), g, MIN) == legal_moves(F.star(2), g)[0]


def test_claw_reduce_drops_full_cycles_and_keeps_paths():
    g = G(K(8), [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5)])
    red, kept = claw_reduce(g)
    assert red.order < g.order
    assert all(v not in kept for v in (0, 1, 2))


def test_star_count():
    assert [star_count(n) for n in (3, 12, 27, 48, 100, 400)] == [0, 1, 2, 3, 4, 10]
    assert designated_centers(B(12, 12)) == ([0], [12])


# -- invariants -------------------------------------------------------------


def _check_kept(name, f, hosts, keep, seeds=range(20)):
    # whenever Max could keep the condition, the policy's move keeps it
    pol = Policy(name)
    for h in hosts:
        fam = f(h)
        for s in seeds:
            t = play(pol, Policy("random", s), fam, h, MAX, s)
            g = GameGraph.empty(h)
            for _, who, e in t.moves:
                if who == "max":
                    possible = any(keep(add_edge(g, m)) for m in legal_moves(fam, g))
                    assert not possible or keep(add_edge(g, e)), (g.sorted_edges(), e)
                g = add_edge(g, e)


def test_odd_balance_condition_kept_when_possible():
    balanced = lambda g: all(b is not None and b[0] == b[1] for b in bipartition_balance(g))  # noqa: E731
    _check_kept("odd-balance-max", lambda h: F.odd_cycles(), [K(6), K(8), K(10)], balanced)


def test_tree_one_condition_kept_when_possible():
    one = lambda g: len([c for c in components(g) if not c.trivial]) == 1  # noqa: E731
    _check_kept("tree-one-max", lambda h: F.trees(h.order), [K(6), K(8), K(9)], one)


def test_odd_balance_reaches_the_bound():
    for n in (6, 8, 10):
        for s in range(10):
            t = play(Policy("odd-balance-max"), Policy("random", s), F.odd_cycles(), K(n), MAX, s)
            assert t.final_size == (n // 2) ** 2


def test_c4_building_phase_invariants():
    for seed in range(3):
        run = c4_star_run(48, seed)
        assert run.stars_completed and run.stars_disjoint
        assert run.max_s_neighbors <= 3
    g = run.transcript.replay()
    stars = designated_stars(g)
    assert all(len(v) == star_count(48) for v in stars.values())


@pytest.mark.parametrize("name,f,hosts", [
    ("odd-balance-max", lambda h: F.odd_cycles(), [K(7), K(9)]),
    ("tree-one-max", lambda h: F.trees(h.order), [K(7)]),
    ("tree-split-min", lambda h: F.trees(h.order), [K(7)]),
    ("claw-parity", lambda h: F.star(2), [K(9), K(12)]),
    ("p4-min", lambda h: F.path(4), [K(11)]),
    ("p4-max", lambda h: F.path(4), [K(11)]),
    ("bip-p4-min", lambda h: F.path(4), [B(7, 5), B(6, 6)]),
    ("bip-p4-max", lambda h: F.path(4), [B(7, 5), B(6, 6)]),
    ("c4-star-max", lambda h: F.cycle4(), [B(12, 12)]),
])
def test_strategies_only_play_legal_moves(name, f, hosts):
    for h in hosts:
        fam = f(h)
        for seed in range(10):
            for first in (MAX, MIN):
                opp = Policy("random", seed)
                pmax, pmin = (opp, Policy(name)) if name.endswith("-min") else (Policy(name), opp)
                t = play(pmax, pmin, fam, h, first, seed)
                assert t.saturated
                g = GameGraph.empty(h)
                for _, _, e in t.moves:
                    assert is_legal(fam, g, e)
                    g = add_edge(g, e)


def test_random_policy_is_a_function_of_seed_and_position():
    f, h = F.path(4), K(9)
    a = play(Policy("random", 5), Policy("random", 6), f, h)
    b = play(Policy("random", 5), Policy("random", 6), f, h)
    assert a.moves == b.moves
    g = a.replay(3)
    mover = MAX if len(g.edges) % 2 == 0 else MIN
    picks = {select_move(Policy("random", 5), f, g, mover) for _ in range(5)}
    assert len(picks) == 1


def test_random_policy_varies_with_seed():
    f, h = F.path(4), K(12)
    finals = {tuple(play(Policy("random", s), Policy("random", s + 1), f, h).moves[0][2]) for s in range(20)}
    assert len(finals) > 1


# -- certification on small hosts -------------------------------------------


SMALL_CERTS = [c for c in certification_cases() if c[3].order <= 7]


@pytest.mark.parametrize("case", SMALL_CERTS, ids=lambda c: f"{c[0]}-{c[3].label()}-{c[4]}")
def test_certified_against_best_response(case):
    name, role, f, h, first, accept, desc = case
    v = best_response(Policy(name), role, SolveConfig(f, h, first))
    assert accept(v), f"{v} not {desc}"


def test_certified_strategies_are_optimal_for_bipartite_p4():
    for m, n in ((3, 3), (4, 3), (5, 2)):
        for first in (MAX, MIN):
            cfg = SolveConfig(F.path(4), B(m, n), first)
            v = game_value(cfg).value
            assert best_response(Policy("bip-p4-min"), MIN, cfg) == v
            assert best_response(Policy("bip-p4-max"), MAX, cfg) == v
