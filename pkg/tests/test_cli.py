import hashlib
import io
import json
import subprocess
import sys

import pytest

from ckdyn import cli, corpus
from ckdyn.errors import ConsistencyError


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def result(*argv):
    code, out, err = call(*argv, "--json")
    assert code == 0, err
    return json.loads(out)["result"]


@pytest.fixture
def o2_file(tmp_path):
    p = tmp_path / "o2.json"
    p.write_text(json.dumps(corpus.GRAPHS["O_2"]))
    return str(p)


def test_graph_analyze_file(o2_file):
    assert result("graph", "analyze", o2_file)["verdicts"] == {"L": True, "K": True, "simple": True}


def test_psys_analyze_corpus():
    assert result("psys", "analyze", "corpus:nbar")["invariant_sets"] == [[], ["inf"], ["0", "inf"]]


def test_envelope(o2_file):
    code, out, _ = call("graph", "analyze", o2_file, "--json")
    doc = json.loads(out)
    assert doc["tool"] == "ckdyn" and doc["command"] == "graph analyze"
    with open(o2_file, "rb") as fh:
        assert doc["input_sha256"] == hashlib.sha256(fh.read()).hexdigest()


@pytest.mark.parametrize("argv,message", [
    (["graph", "analyze", "missing.json"], "file not found"),
    (["graph", "frobnicate", "corpus:O_2"], "invalid choice"),
    (["graph", "analyze", "corpus:nope"], "unknown corpus entry"),
    (["graph", "af", "corpus:O_2", "--depth", "99"], "--depth"),
    (["psys", "ypairs", "corpus:O_2"], "unknown corpus entry"),
])
def test_input_errors_exit_1(argv, message):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert message in err
    assert len(err.strip().splitlines()) == 1


def test_graph_file_given_to_psys(o2_file):
    code, _, err = call("psys", "ypairs", o2_file)
    assert code == 1 and "missing key" in err


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = call("graph", "analyze", str(p))
    assert code == 1 and "malformed JSON" in err


def test_ill_positioned_system(tmp_path):
    p = tmp_path / "sys.json"
    p.write_text(json.dumps({"points": ["a", "z"], "domain": ["a"], "map": {"a": "a"}, "Y": []}))
    code, _, err = call("psys", "ypairs", str(p))
    assert code == 1 and "uncovered points" in err


def test_consistency_failure_exit_2(monkeypatch):
    def boom(E):
        raise ConsistencyError("routes disagree", {"a": 1})
    monkeypatch.setattr(cli, "graph_analysis", boom)
    code, _, err = call("graph", "analyze", "corpus:O_2")
    assert code == 2 and "routes disagree" in err


def test_subcommands_produce_reports():
    assert result("graph", "af", "corpus:O_2", "--depth", "3")
    inter = result("graph", "interaction", "verify", "corpus:chain", "--depth", "2")
    assert inter
    assert result("graph", "interaction", "classify", "corpus:double_edge", "--complete")
    assert result("graph", "stochastic", "corpus:fails_at_3", "--max-power", "4")
    assert result("graph", "markov", "corpus:O_1")
    assert result("graph", "markov", "corpus:O_2", "--report", "periodic", "--n", "2")
    assert result("graph", "markov", "corpus:O_2", "--report", "conjugacy")
    assert result("psys", "extension", "corpus:chain_2")
    assert result("psys", "ypairs", "corpus:chain_2")


def test_dot_outputs():
    code, out, _ = call("psys", "extension", "corpus:nbar", "--format", "dot")
    assert code == 0 and out.startswith("digraph extension")
    code, out, _ = call("graph", "af", "corpus:O_2", "--dot")
    assert code == 0 and out.startswith("digraph Bratteli")


def test_text_output():
    code, out, _ = call("graph", "analyze", "corpus:chain")
    assert code == 0
    assert 'verdicts: {"L": true, "K": true, "simple": true}' in out
    assert "hereditary_saturated_sets: [[], [\"u\", \"v\"]]" in out


def test_corpus_list():
    code, out, _ = call("corpus", "list")
    names = [line.split()[-1] for line in out.splitlines()]
    assert names == [n for _, n in corpus.entries()]


def test_deterministic_output():
    first = call("corpus", "run", "O_2", "nbar", "chain", "--json")
    second = call("corpus", "run", "O_2", "nbar", "chain", "--json")
    assert first[0] == second[0] == 0
    assert hashlib.sha256(first[1].encode()).digest() == hashlib.sha256(second[1].encode()).digest()
    assert "elapsed" in first[2] and "elapsed" not in first[1]


def test_whole_corpus_runs_without_consistency_failures():
    code, out, err = call("corpus", "run", "--json")
    assert code == 0, err
    res = json.loads(out)["result"]
    assert sorted(res["graphs"]) == sorted(corpus.GRAPHS)
    assert sorted(res["systems"]) == sorted(corpus.SYSTEMS)


def test_shared_names_resolve_by_command():
    assert result("graph", "analyze", "corpus:chain_3")["vertices"] == 3
    assert result("psys", "analyze", "corpus:chain_3")["minimal"]["case"] == "ii"
    both = result("corpus", "run", "cycle_3")
    assert list(both["graphs"]) == ["cycle_3"] and list(both["systems"]) == ["cycle_3"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ckdyn", "graph", "analyze", "corpus:O_1", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["verdicts"] == {"L": False, "K": False, "simple": False}
