import json
from pathlib import Path

import pytest

from endgraph.cli import main
from endgraph.core import export, from_edges

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def diamond(tmp_path):
    g = from_edges(
        [("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")],
        level={"s": 0, "a": 1, "b": 1, "t": 2},
        span=1,
        name="diamond",
    )
    path = tmp_path / "diamond.json"
    path.write_text(export(g))
    return str(path)


def test_truncate_dot_matches_golden(capsys):
    code, out, _ = run(capsys, "truncate", "--family", "example52", "--depth", "6", "--format", "dot")
    assert code == 0
    assert out == (FIXTURES / "example52_depth6.dot").read_text()


def test_unknown_family(capsys):
    code, _, err = run(capsys, "truncate", "--family", "nosuch", "--depth", "3")
    assert code == 2 and "unknown family" in err


def test_depth_zero_is_empty(capsys):
    code, out, _ = run(capsys, "truncate", "--family", "counterexample", "--depth", "0", "--format", "json")
    assert code == 0 and json.loads(out)["vertices"] == []


def test_negative_depth(capsys):
    assert run(capsys, "truncate", "--family", "ray", "--depth", "-1")[0] == 2


@pytest.mark.parametrize("mode,count", [("internal", 2), ("edge", 2), ("vertex", 1)])
def test_menger_diamond(capsys, diamond, mode, count):
    # a single source is shared by every path, so vertex mode sees only one
    code, out, _ = run(capsys, "menger", "--input", diamond, "--sources", "s", "--targets", "t", "--mode", mode, "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["count"] == count and len(doc["separator"]) == count and doc["certificates_valid"]


def test_menger_example52(capsys):
    code, out, _ = run(
        capsys, "menger", "--family", "example52", "--depth", "12", "--sources", "b_*@6..12", "--targets", "a_*", "--format", "json"
    )
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 1 and doc["separator"] == ["c_0"]


def test_menger_bad_mode(capsys, diamond):
    assert run(capsys, "menger", "--input", diamond, "--sources", "s", "--targets", "t", "--mode", "bogus")[0] == 2


def test_menger_unreadable_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(capsys, "menger", "--input", str(bad), "--sources", "s", "--targets", "t")[0] == 2
    assert run(capsys, "menger", "--input", str(tmp_path / "missing.json"), "--sources", "s", "--targets", "t")[0] == 2


def test_degree_example52(capsys):
    code, out, _ = run(capsys, "degree", "--family", "example52", "--end", "omega", "--depth", "12", "-t", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert (doc["d_minus"], doc["delta_cap"], doc["K_upper"]) == ("1", "2", "2")


def test_degree_counterexample_capped(capsys):
    code, out, _ = run(capsys, "degree", "--family", "counterexample", "--end", "omega", "--depth", "36", "-t", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["d_minus"] == ">=5"
    assert int(doc["d_plus"].lstrip(">=")) >= 3


def test_degree_krays(capsys):
    code, out, _ = run(capsys, "degree", "--family", "krays", "--param", "k=4", "--end", "omega")
    assert code == 0
    assert "in-degree        4" in out and "combined         4" in out


def test_degree_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "degree", "--family", "example52", "--depth", "12")
    _, js, _ = run(capsys, "degree", "--family", "example52", "--depth", "12", "--format", "json")
    doc = json.loads(js)
    assert f"partition bound  {doc['delta_small']}" in text
    assert f"K upper bound    {doc['K_upper']}" in text


def test_degree_sweep_in_depth_order(capsys):
    code, out, _ = run(capsys, "degree", "--family", "example52", "--depths", "10..13", "--format", "json")
    docs = json.loads(out)
    assert code == 0 and [d["depth"] for d in docs] == [10, 11, 12, 13]


def test_degree_unknown_end(capsys):
    assert run(capsys, "degree", "--family", "example52", "--end", "nosuch")[0] == 2


def test_bad_param(capsys):
    assert run(capsys, "degree", "--family", "krays", "--param", "k")[0] == 2
    assert run(capsys, "degree", "--family", "krays", "--param", "z=3")[0] == 2


def test_verify_counterexample(capsys):
    code, out, _ = run(capsys, "verify", "--check", "counterexample", "--depth", "20")
    assert code == 0 and out.count("PASS") == 5


def test_verify_singles_fails_with_witness(capsys):
    code, out, _ = run(
        capsys, "verify", "--check", "exhausting", "--family", "example52", "--seq", str(FIXTURES / "singles.json"), "--format", "json"
    )
    doc = json.loads(out)
    assert code == 1 and doc["witness"] and "c_0" in doc["witness"]


def test_verify_pairs_pass(capsys):
    code, _, _ = run(capsys, "verify", "--check", "exhausting", "--family", "example52", "--seq", str(FIXTURES / "pairs.json"))
    assert code == 0


def test_verify_bad_sequence_file(capsys, tmp_path):
    bad = tmp_path / "seq.json"
    bad.write_text('{"not": "a list"}')
    assert run(capsys, "verify", "--check", "exhausting", "--family", "example52", "--seq", str(bad))[0] == 2
    assert run(capsys, "verify", "--check", "exhausting", "--family", "example52")[0] == 2


def test_export_round_trip(capsys, tmp_path):
    target = tmp_path / "g.json"
    assert run(capsys, "export", "--family", "ladder", "--depth", "8", "-o", str(target))[0] == 0
    code, out, _ = run(capsys, "truncate", "--input", str(target), "--format", "json")
    assert code == 0 and json.loads(out) == json.loads(target.read_text())


def test_export_split(capsys):
    code, out, _ = run(capsys, "export", "--family", "ray", "--depth", "3", "--split")
    doc = json.loads(out)
    assert code == 0 and len(doc["vertices"]) == 8


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["verify"])
    assert info.value.code == 2
