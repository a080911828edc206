import numpy as np
import pytest

from oracles import oracle_free, random_graph
from satgame.errors import HostOrderMismatch, PositionNotFree, SatGameError
from satgame.families import (
    C4Tracker, ForbiddenFamily as F, MoveTracker, creates, is_free, is_legal, is_saturated,
    legal_moves, tracker_for,
)
from satgame.graph import GameGraph, HostGraph, add_edge, components


def G(host, edges):
    return GameGraph.from_edges(host, edges)


K = HostGraph.complete
B = HostGraph.bipartite


def test_parse_syntax():
    h = K(5)
    assert F.parse("odd-cycles") == F.odd_cycles()
    assert F.parse("trees", h) == F.trees(5)
    assert F.parse("star:r+1=4") == F.star(3)
    assert F.parse("star:4") == F.star(3)
    assert F.parse("path:4") == F.path(4)
    assert F.parse("cycle:4") == F.cycle4()
    for bad in ("cycle:5", "path:2", "star:1", "wheel"):
        with pytest.raises(SatGameError):
            F.parse(bad)
    with pytest.raises(SatGameError):
        F.parse("trees")


def test_label_round_trip():
    h = K(6)
    for f in (F.odd_cycles(), F.trees(6), F.star(3), F.path(4), F.cycle4()):
        assert F.parse(f.label(), h) == f


def test_trees_bound_to_host_order():
    with pytest.raises(HostOrderMismatch):
        is_free(F.trees(4), GameGraph.empty(K(5)))


# -- is_free ----------------------------------------------------------------


def test_is_free_examples():
    assert not is_free(F.odd_cycles(), G(K(4), [(0, 1), (1, 2), (0, 2)]))
    assert is_free(F.trees(4), G(K(4), [(0, 1), (1, 2), (0, 2)]))
    star3 = G(K(5), [(0, 1), (0, 2), (0, 3)])
    assert is_free(F.star(3), star3)
    assert not is_free(F.star(3), add_edge(star3, (0, 4)))


FAMILIES = [F.odd_cycles(), F.star(1), F.star(2), F.star(3), F.path(3), F.path(4), F.path(5), F.cycle4()]


def _hosts():
    return [K(n) for n in range(2, 9)] + [B(m, n) for m in range(1, 6) for n in range(1, m + 1) if m + n <= 9]


def test_is_free_against_subgraph_search():
    rng = np.random.default_rng(3)
    hosts = _hosts()
    for i in range(1500):
        h = hosts[int(rng.integers(len(hosts)))]
        f = F.trees(h.order) if i % 9 == 8 else FAMILIES[i % len(FAMILIES)]
        g = random_graph(rng, h, float(rng.uniform(0.0, 0.5)))
        assert is_free(f, g) == oracle_free(f, g), (f, g.sorted_edges())


def test_is_free_against_subgraph_search_ten_vertices():
    rng = np.random.default_rng(4)
    for i in range(120):
        h = K(10) if i % 2 else B(5, 5)
        f = [F.odd_cycles(), F.star(3), F.path(4), F.cycle4(), F.trees(10)][i % 5]
        g = random_graph(rng, h, float(rng.uniform(0.05, 0.3)))
        assert is_free(f, g) == oracle_free(f, g)


def test_creates_matches_from_scratch_check():
    rng = np.random.default_rng(5)
    hosts = _hosts()
    count = 0
    while count < 2000:
        h = hosts[int(rng.integers(len(hosts)))]
        f = FAMILIES[count % len(FAMILIES)] if count % 7 else F.trees(h.order)
        g = random_graph(rng, h, float(rng.uniform(0.0, 0.4)))
        if not is_free(f, g):
            continue
        for u, v in g.non_edges():
            assert creates(f, g, u, v) == (not is_free(f, add_edge(g, (u, v))))
            count += 1


# -- legal moves ------------------------------------------------------------


def test_legal_moves_p4_on_two_edges():
    assert legal_moves(F.path(4), G(K(4), [(0, 1), (2, 3)])) == []


def test_legal_moves_odd_cycles_single_edge():
    moves = legal_moves(F.odd_cycles(), G(K(4), [(0, 1)]))
    assert moves == [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_legal_moves_cycle4_empty_k22():
    assert legal_moves(F.cycle4(), GameGraph.empty(B(2, 2))) == [(0, 2), (0, 3), (1, 2), (1, 3)]


def test_legal_moves_requires_free_position():
    with pytest.raises(PositionNotFree):
        legal_moves(F.path(3), G(K(3), [(0, 1), (1, 2)]))


def test_legal_moves_sorted_and_extensional():
    rng = np.random.default_rng(6)
    for i in range(300):
        h = _hosts()[i % len(_hosts())]
        f = FAMILIES[i % len(FAMILIES)]
        g = random_graph(rng, h, 0.25)
        if not is_free(f, g):
            continue
        moves = legal_moves(f, g)
        assert moves == sorted(moves)
        assert set(moves) == {e for e in g.non_edges() if is_free(f, add_edge(g, e))}
        assert all(is_legal(f, g, e) for e in moves)


# -- saturation -------------------------------------------------------------


def test_is_saturated_examples():
    assert is_saturated(F.odd_cycles(), G(K(4), [(0, 2), (0, 3), (1, 2), (1, 3)]))
    assert is_saturated(F.star(2), G(K(5), [(0, 1), (1, 2), (2, 3), (3, 0)]))
    assert is_saturated(F.path(4), G(B(3, 3), [(0, 3), (1, 4), (2, 5)]))
    assert not is_saturated(F.path(4), G(B(3, 3), [(0, 3)]))
    assert not is_saturated(F.path(3), G(K(3), [(0, 1), (1, 2)]))


def test_played_out_games_end_saturated():
    rng = np.random.default_rng(8)
    for i in range(200):
        h = _hosts()[i % len(_hosts())]
        f = FAMILIES[i % len(FAMILIES)]
        g = GameGraph.empty(h)
        while True:
            moves = legal_moves(f, g)
            if not moves:
                break
            g = add_edge(g, moves[int(rng.integers(len(moves)))])
        assert is_saturated(f, g)
        assert oracle_free(f, g)


def test_bipartite_p4_positions_are_star_forests():
    rng = np.random.default_rng(9)
    f = F.path(4)
    for i in range(100):
        g = GameGraph.empty(B(5, 4))
        while True:
            moves = legal_moves(f, g)
            if not moves:
                break
            g = add_edge(g, moves[int(rng.integers(len(moves)))])
            assert all(c.trivial or c.is_star_like for c in components(g))


# -- trackers ---------------------------------------------------------------


@pytest.mark.parametrize("host", [B(9, 9), B(12, 7), K(7)])
def test_tracker_follows_legal_moves(host):
    f = F.cycle4() if host.is_bipartite else F.path(4)
    tr = tracker_for(f, GameGraph.empty(host))
    if host.is_bipartite and host.order > 16:
        assert isinstance(tr, C4Tracker)
    else:
        assert isinstance(tr, MoveTracker)
    rng = np.random.default_rng(10)
    while True:
        want = legal_moves(f, tr.g)
        assert tr.moves() == want
        assert tr.count == len(want)
        assert tr.first() == (want[0] if want else None)
        if not want:
            break
        e = tr.sample(rng)
        assert e in want and tr.contains(e)
        tr.push(e)
    assert is_saturated(f, tr.g)
