import json
import subprocess
import sys

import pytest

from allhops.cli import main

F1 = "3 3\n0 1 1\n1 2 1\n0 2 10\n"
F3 = "2 2\n0 1 -2\n1 0 1\n"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def f1_path(tmp_path):
    p = tmp_path / "f1.el"
    p.write_text(F1)
    return str(p)


def test_single_pair_stdout_bytes(capsys, f1_path):
    code, out, _ = run_cli(capsys, "single-pair", "--graph", f1_path, "--s", "0", "--t", "2")
    assert code == 0
    assert out == "1\t10\n2\t2\n"


def test_check_exit_codes(capsys, tmp_path, f1_path):
    code, out, _ = run_cli(capsys, "check", "--graph", f1_path)
    assert code == 0 and out == "no negative cycle\n"
    bad = tmp_path / "f3.el"
    bad.write_text(F3)
    code, _, err = run_cli(capsys, "check", "--graph", str(bad))
    assert code == 2 and "negative cycle" in err


def test_usage_and_io_errors(capsys, tmp_path):
    code, _, err = run_cli(capsys, "single-pair", "--graph", "missing.el", "--s", "0", "--t", "1")
    assert code == 1
    code, _, err = run_cli(capsys, "frobnicate")
    assert code == 1
    bad = tmp_path / "bad.el"
    bad.write_text("junk\n")
    code, _, err = run_cli(capsys, "check", "--graph", str(bad))
    assert code == 1 and "line 1" in err


def test_gen_bf_oracle_pipeline(capsys, tmp_path):
    graph_path = str(tmp_path / "g.el")
    code, _, _ = run_cli(
        capsys, "gen", "--n", "10", "--m", "25", "--M", "4", "--seed", "3",
        "--require-no-neg-cycle", "--out", graph_path,
    )
    assert code == 0
    code, bf_out, _ = run_cli(capsys, "bf", "--graph", graph_path, "--s", "0")
    assert code == 0
    bf_vals = {}
    for line in bf_out.splitlines():
        if line.startswith("#"):
            continue
        u, v, h, d = line.split("\t")
        bf_vals[(int(u), int(v), int(h))] = d

    oracle_path = str(tmp_path / "g.ahdo")
    code, _, _ = run_cli(
        capsys, "oracle", "build", "--kind", "mn", "--graph", graph_path,
        "--out", oracle_path, "--C", "8",
    )
    assert code == 0
    queries = tmp_path / "q.txt"
    queries.write_text("0 3 2\n0 7 9\n0 0 1\n")
    code, out, _ = run_cli(
        capsys, "oracle", "query", "--oracle", oracle_path, "--queries", str(queries)
    )
    assert code == 0
    for line in out.splitlines():
        if line.startswith("#"):
            continue
        u, v, h, d = line.split("\t")
        assert bf_vals[(int(u), int(v), int(h))] == d


def test_format_duality(capsys, f1_path):
    _, tsv, _ = run_cli(capsys, "single-pair", "--graph", f1_path, "--s", "0", "--t", "1")
    _, jsl, _ = run_cli(
        capsys, "--format", "json-lines", "single-pair", "--graph", f1_path, "--s", "0", "--t", "1"
    )
    tsv_records = [line.split("\t") for line in tsv.splitlines()]
    json_records = [json.loads(line) for line in jsl.splitlines()]
    assert [(int(h), d) for h, d in tsv_records] == [
        (rec["h"], str(rec["d"])) for rec in json_records
    ]


def test_infinity_rendering(capsys, tmp_path):
    p = tmp_path / "iso.el"
    p.write_text("2 0\n")
    _, tsv, _ = run_cli(capsys, "single-pair", "--graph", str(p), "--s", "0", "--t", "1")
    assert tsv == "1\tinf\n"
    _, jsl, _ = run_cli(
        capsys, "--format", "json-lines", "single-pair", "--graph", str(p), "--s", "0", "--t", "1"
    )
    assert json.loads(jsl)["d"] == "inf"


def test_byte_determinism(capsys, tmp_path):
    graph_path = str(tmp_path / "g.el")
    run_cli(capsys, "gen", "--n", "12", "--m", "30", "--M", "5", "--seed", "9",
            "--require-no-neg-cycle", "--out", graph_path)
    outs = set()
    for _ in range(2):
        _, out, _ = run_cli(capsys, "all-pairs", "--graph", graph_path, "--seed", "4")
        outs.add(out)
    assert len(outs) == 1


def test_all_pairs_matches_bf_rows(capsys, tmp_path, f1_path):
    _, ap_out, _ = run_cli(capsys, "all-pairs", "--graph", f1_path)
    _, bf_out, _ = run_cli(capsys, "bf", "--graph", f1_path, "--s", "0")
    ap_rows = {tuple(l.split("\t")) for l in ap_out.splitlines() if not l.startswith("#")}
    bf_rows = {tuple(l.split("\t")) for l in bf_out.splitlines() if not l.startswith("#")}
    assert bf_rows <= ap_rows


def test_single_source_paranoid(capsys, f1_path):
    code, out, _ = run_cli(
        capsys, "single-source", "--graph", f1_path, "--s", "0", "--paranoid"
    )
    assert code == 0
    assert "0\t2\t2\t2" in out.splitlines()


def test_max_hop(capsys, f1_path):
    _, out, _ = run_cli(capsys, "single-pair", "--graph", f1_path, "--s", "0", "--t", "2",
                        "--max-hop", "1")
    assert out == "1\t10\n"


def test_gadget_verify_commands(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "gadget", "tree", "--l", "3", "--verify")
    assert code == 0 and "verify ok" in out

    tri = tmp_path / "tri.txt"
    tri.write_text("2 2 2\nij 0 1\njk 1 0\nki 0 0\n")
    code, out, _ = run_cli(capsys, "gadget", "triangle", "--input", str(tri), "--verify")
    assert code == 0 and "triangle=yes" in out

    mpp = tmp_path / "mpp.txt"
    mpp.write_text("4 2\n1 2\n2 1\n1 1\n2 2\n1 2 1 2\n2 1 2 1\n")
    code, out, _ = run_cli(capsys, "gadget", "mpp", "--input", str(mpp), "--verify")
    assert code == 0 and "verify ok" in out

    conv = tmp_path / "conv.txt"
    conv.write_text("2\n1 2\n3 4\n5 6\n7 8\n")
    code, out, _ = run_cli(capsys, "gadget", "conv", "--input", str(conv), "--verify")
    assert code == 0 and "verify ok" in out


def test_gadget_emits_graph_and_names(capsys, tmp_path):
    out_path = tmp_path / "tree.el"
    names_path = tmp_path / "tree.names"
    code, _, _ = run_cli(capsys, "gadget", "tree", "--l", "2", "--out", str(out_path),
                         "--names-out", str(names_path))
    assert code == 0
    from allhops import parse_graph

    g = parse_graph(out_path.read_text())
    names = dict(line.split() for line in names_path.read_text().splitlines())
    assert "v" in names and g.n > 4


def test_console_script_installed():
    out = subprocess.run(
        [sys.executable, "-m", "allhops.cli", "gen", "--n", "3", "--m", "2", "--M", "1",
         "--seed", "0"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and out.stdout.startswith("3 2")


def test_threads_env_fallback(monkeypatch, capsys, f1_path):
    monkeypatch.setenv("ALLHOPS_THREADS", "2")
    code, out, _ = run_cli(capsys, "single-pair", "--graph", f1_path, "--s", "0", "--t", "2")
    assert code == 0 and out == "1\t10\n2\t2\n"
    monkeypatch.setenv("ALLHOPS_THREADS", "0")
    code, _, err = run_cli(capsys, "check", "--graph", f1_path)
    assert code == 1 and "threads" in err


def test_selftest_runs_green(capsys):
    code, out, _ = run_cli(capsys, "selftest")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("selftest")]
    assert lines and all(l.endswith("ok") for l in lines)
