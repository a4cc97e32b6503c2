import json

import pytest

from conftest import P5_TEXT
from transfer_systems.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_maximal_all_methods(capsys):
    code, out, _ = run(capsys, "maximal", "--group", "cyclic:6", "--edges", "1>C6",
                       "--method", "all")
    assert code == 0
    assert "M(O) edges: 1>C2, 1>C3" in out
    assert "methods agree" in out


def test_generate_s3(capsys):
    code, out, _ = run(capsys, "generate", "--group", "symmetric:3",
                       "--edges", "<(12)>>S3")
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln]
    assert len(lines) == 8
    assert "<(12)>>S3" in lines
    assert "<(123)>>S3" not in lines


def test_enumerate_census(capsys):
    code, out, _ = run(capsys, "enumerate", "--group", "cyclic:6", "--census")
    assert code == 0
    assert out.splitlines()[0] == "total=10 saturated=7 disklike=7 both=4"


def test_lattice_lists_labels(capsys):
    code, out, _ = run(capsys, "lattice", "--group", "symmetric:3")
    assert code == 0
    assert "<(12)>" in out and "S3" in out and out.count("\n") >= 7


def test_check_subcommand(capsys):
    code, out, _ = run(capsys, "check", "--group", "symmetric:3", "--edges", "<(12)>>S3")
    assert code == 0
    assert "saturated: no" in out and "<(123)>" in out
    assert "disklike: yes" in out
    assert "complexity: 1" in out


def test_check_reports_unclosed_input(capsys):
    code, out, _ = run(capsys, "check", "--group", "cyclic:6", "--edges", "1>C6")
    assert code == 0
    assert "not closed" in out


def test_inflate_and_fixed_points(capsys):
    code, out, _ = run(capsys, "inflate", "--group", "cyclic:12", "--normal", "C2",
                       "--edges", "C2>C4")
    assert code == 0
    assert "C2>C4" in out and "1>C3" not in out
    code, out, _ = run(capsys, "fixed-points", "--group", "cyclic:12", "--normal", "C2",
                       "--edges", "1>C2,1>C3,1>C6,C2>C6,C3>C6,1>C4,1>C12,C2>C4,C2>C12,C6>C12,C3>C12,C4>C12")
    assert code == 0
    assert "C2>C4" in out


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--group", "cyclic:6", "--edges", "1>C6")
    assert code == 0
    assert set(out.split()) == {"1>C2", "1>C3"}


def test_audit_clean(capsys):
    code, out, _ = run(capsys, "audit", "--group", "cyclic:6")
    assert code == 0
    report = json.loads(out)
    assert report["ok"] is True and report["total"] == 10


def test_conjecture_counterexample_exit_code(tmp_path, capsys):
    path = tmp_path / "p5.poset"
    path.write_text(P5_TEXT)
    code, out, _ = run(capsys, "conjecture", "--site", str(path))
    assert code == 1
    report = json.loads(out)
    assert report["ok"] is False
    assert len(report["counterexamples"]) == 1


def test_conjecture_positive(capsys):
    code, out, _ = run(capsys, "conjecture", "--groups", "cyclic:6,cyclic:12",
                       "--require-bottom-to-top")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_render_dot(capsys):
    code, out, _ = run(capsys, "render", "--group", "cyclic:6", "--edges", "1>C6",
                       "--highlight", "maximal")
    assert code == 0
    assert out.startswith("digraph") and "bold" in out


def test_maximal_algorithm_requires_disklike(capsys):
    # {1>C2, 1>C3} has no transfer into the top, so it is not disklike
    code, _, err = run(capsys, "maximal", "--group", "cyclic:6", "--edges", "1>C2,1>C3",
                       "--method", "algorithm")
    assert code == 2
    assert "disklike" in err


def test_usage_errors(capsys):
    code, _, err = run(capsys, "generate", "--group", "cyclic:6", "--edges", "oops")
    assert code == 2
    code, _, err = run(capsys, "generate", "--group", "nope:1", "--edges", "1>C2")
    assert code == 2
    code, _, err = run(capsys, "generate", "--group", "cyclic:6")
    assert code == 2
    code, _, err = run(capsys, "maximal", "--group", "cyclic:6", "--edges", "1>C6",
                       "--threads", "0")
    assert code == 2


def test_malformed_poset_file_names_line(tmp_path, capsys):
    path = tmp_path / "bad.poset"
    path.write_text("nodes: a b\ncover: a\n")
    code, _, err = run(capsys, "lattice", "--site", str(path))
    assert code == 2
    assert "line 2" in err


def test_seed_and_threads_accepted(capsys):
    code, out1, _ = run(capsys, "enumerate", "--group", "cyclic:6", "--census",
                        "--seed", "7", "--threads", "4")
    assert code == 0
    code, out2, _ = run(capsys, "enumerate", "--group", "cyclic:6", "--census",
                        "--seed", "99", "--threads", "1")
    assert out1 == out2


@pytest.mark.parametrize("argv", [
    ["lattice", "--group", "symmetric:3"],
    ["generate", "--group", "symmetric:3", "--edges", "<(12)>>S3"],
    ["maximal", "--group", "cyclic:6", "--edges", "1>C6", "--method", "all"],
    ["enumerate", "--group", "cyclic:12", "--census"],
    ["audit", "--group", "cyclic:6"],
    ["render", "--group", "cyclic:6", "--edges", "1>C6", "--highlight", "maximal"],
    ["check", "--group", "q8", "--edges", "<i>>Q8"],
])
def test_byte_identical_across_runs_and_threads(argv, capsys):
    outputs = set()
    for threads in ("1", "3"):
        for _ in range(2):
            code = main(argv + ["--threads", threads])
            outputs.add(capsys.readouterr().out)
            assert code == 0
    assert len(outputs) == 1


def test_out_file(tmp_path, capsys):
    target = tmp_path / "out.dot"
    code = main(["render", "--group", "cyclic:6", "--edges", "1>C6", "--out", str(target)])
    capsys.readouterr()
    assert code == 0
    assert target.read_text().startswith("digraph")


def test_enumerate_jsonl(tmp_path, capsys):
    target = tmp_path / "catalog.jsonl"
    code = main(["enumerate", "--group", "cyclic:6", "--jsonl", str(target)])
    capsys.readouterr()
    assert code == 0
    lines = target.read_text().strip().split("\n")
    assert len(lines) == 10
