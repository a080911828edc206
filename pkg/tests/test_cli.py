import json
import subprocess
import sys

import pytest

from satgame.cli import main, parse_hosts
from satgame.graph import HostGraph
from satgame.simulate import Transcript


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "--family", "odd-cycles", "--host", "K:6")
    assert code == 0
    d = json.loads(out)
    assert d["value"] == 9 and d["exact"] is True


def test_solve_min_start_bipartite(capsys):
    code, out, _ = run(capsys, "solve", "--family", "path:4", "--host", "B:3,3", "--first", "min")
    assert code == 0 and json.loads(out)["value"] == 3


def test_solve_symmetry_off(capsys):
    _, out, _ = run(capsys, "solve", "--family", "star:r+1=3", "--host", "K:6", "--no-symmetry")
    _, out2, _ = run(capsys, "solve", "--family", "star:r+1=3", "--host", "K:6")
    assert json.loads(out)["value"] == json.loads(out2)["value"]


def test_solve_budget_exit_code(capsys):
    code, out, err = run(capsys, "solve", "--family", "trees", "--host", "K:7", "--budget", "20")
    assert code == 3
    d = json.loads(out)
    assert d["exact"] is False and d["lower"] <= d["upper"]
    assert "inexact" in err


def test_bad_family_exit_code(capsys):
    code, _, err = run(capsys, "solve", "--family", "wheel", "--host", "K:5")
    assert code == 2 and "error" in err


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["play", "--family", "path:4", "--host", "K:5", "--max", "first", "--min", "first"])
    assert info.value.code == 2


def test_play_transcript_round_trips(capsys):
    code, out, _ = run(capsys, "play", "--family", "path:4", "--host", "B:3,3",
                       "--max", "bip-p4-max", "--min", "bip-p4-min", "--seed", "0")
    assert code == 0
    t = Transcript.from_dict(json.loads(out))
    assert t.final_size == 4 and len(t.replay().edges) == 4


def test_play_policy_mismatch(capsys):
    code, _, _ = run(capsys, "play", "--family", "path:4", "--host", "B:3,3",
                     "--max", "p4-max", "--min", "first", "--seed", "0")
    assert code == 2


def test_process(capsys):
    code, out, _ = run(capsys, "process", "--family", "star:4", "--host", "K:6", "--seed", "3")
    assert code == 0 and json.loads(out)["final_size"] <= 9


def test_experiment_csv(capsys, tmp_path):
    dest = tmp_path / "rows.csv"
    code, _, _ = run(capsys, "experiment", "--family", "cycle:4", "--hosts", "B:n,n@6,8",
                     "--max", "c4-star-max", "--min", "random:0", "--trials", "2", "--seed", "1",
                     "--out", str(dest))
    assert code == 0
    lines = dest.read_text().splitlines()
    assert lines[0] == "n,trials,min,mean,max,seconds" and len(lines) == 3


def test_parse_hosts():
    assert parse_hosts("B:n,n@5,7") == [HostGraph.bipartite(5, 5), HostGraph.bipartite(7, 7)]
    assert parse_hosts("K:4;K:6") == [HostGraph.complete(4), HostGraph.complete(6)]


def test_analyze_formula(capsys):
    code, out, _ = run(capsys, "analyze", "formula", "--theorem", "p4-kn", "--n", "10")
    assert code == 0 and out.strip() == "[7, 8]"
    _, out, _ = run(capsys, "analyze", "formula", "--theorem", "star-conjecture", "--r", "3", "--n", "9", "--json")
    assert json.loads(out)["conjectural"] is True
    code, _, _ = run(capsys, "analyze", "formula", "--theorem", "trees", "--n", "2")
    assert code == 2


def test_analyze_c4const(capsys):
    _, out, _ = run(capsys, "analyze", "c4const", "--c", "1", "--d", "1/4", "--n", "10")
    d = json.loads(out)
    assert d["a"] == "2" and d["at_crossover"] is True
    _, out, _ = run(capsys, "analyze", "c4const", "--c", "1/3", "--d", "1/sqrt(3)")
    assert 1 / json.loads(out)["a_float"] == pytest.approx(10.39, abs=0.01)


def test_analyze_match_and_essential(capsys, tmp_path):
    src = tmp_path / "g.json"
    src.write_text(json.dumps([[0, 3], [1, 4], [2, 5]]))
    code, out, _ = run(capsys, "analyze", "match", "--edges", str(src), "--host", "B:3,3")
    assert code == 0 and json.loads(out)["equality"] is True
    src.write_text(json.dumps([[0, 2], [1, 2], [1, 3]]))
    _, out, _ = run(capsys, "analyze", "essential", "--edges", str(src), "--host", "B:2,2", "--S", "0,1,2,3")
    assert json.loads(out)["joined_pairs"] == 1
    code, _, _ = run(capsys, "analyze", "match", "--edges", str(src), "--host", "K:4")
    assert code == 2


def test_inspect(capsys, tmp_path):
    src = tmp_path / "g.json"
    src.write_text(json.dumps({"host": {"type": "complete", "n": 4}, "edges": [[0, 1], [1, 2], [0, 2]]}))
    code, out, _ = run(capsys, "inspect", "--edges", str(src))
    assert code == 0
    d = json.loads(out)
    assert [c["kind"] for c in d["components"]] == ["triangle", "isolated-vertex"]
    assert d["families"]["odd-cycles"]["free"] is False


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "inspect", "--edges", str(tmp_path / "nope.json"), "--host", "K:3")
    assert code == 2


def test_verify_filter(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "paper", "--filter", "bound")
    assert code == 0 and "[PASS]" in out
    code, _, _ = run(capsys, "verify", "--suite", "paper", "--filter", "nothing-matches")
    assert code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "satgame", "analyze", "formula", "--theorem", "trees", "--n", "5"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "6"
