from __future__ import annotations

import io
from pathlib import Path


from pcabench.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, Session, _parser, main, repl

ORACLES = Path(__file__).resolve().parent.parent / "oracles"
SUCC = str(ORACLES / "succ.tbl")
SUCC2 = str(ORACLES / "succ2.tbl")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_plain(capsys):
    code, out, _ = run(capsys, "eval", r"(\x y. x) K S")
    assert code == EXIT_OK and out.strip() == "K"


def test_trace_representer_asks_once(capsys):
    code, out, _ = run(capsys, "--oracle", SUCC, "trace", "r_f", "num:2")
    assert code == EXIT_OK
    assert [line[0] for line in out.splitlines()] == ["?", "!", "="]


def test_trace_k_f_asks_nothing(capsys):
    code, out, _ = run(capsys, "trace", "--oracle", SUCC, "K_f", "K")
    assert code == EXIT_OK
    assert [line[0] for line in out.splitlines()] == ["="]


def test_trace_without_oracle(capsys):
    code, _, err = run(capsys, "trace", "K", "K")
    assert code == EXIT_USAGE and "no oracle" in err


def test_parse_error(capsys):
    code, _, err = run(capsys, "eval", r"(\x. x")
    assert code == EXIT_USAGE and err.startswith("parse error")


def test_unknown_name_and_suite(capsys):
    assert run(capsys, "eval", "nosuchname")[0] == EXIT_USAGE
    assert run(capsys, "suite", "nosuchsuite")[0] == EXIT_USAGE


def test_leq(capsys):
    code, out, _ = run(capsys, "leq", SUCC, SUCC, "r_f")
    assert code == EXIT_OK and "PASS" in out
    code, out, _ = run(capsys, "leq", SUCC2, SUCC, "r_f")
    assert code == EXIT_FAIL and "FAIL" in out


def test_suite_assemblies(capsys):
    code, out, _ = run(capsys, "suite", "assemblies")
    assert code == EXIT_OK and "FAIL" not in out


def test_flags_after_command():
    args = _parser().parse_args(["eval", "K", "--fuel", "7", "--oracle", "a.tbl"])
    assert args.fuel == 7 and args.oracle == ["a.tbl"]
    args = _parser().parse_args(["--fuel", "9", "eval", "K"])
    assert args.fuel == 9 and args.oracle == []


def test_repl():
    session = Session()
    args = _parser().parse_args(["repl"])
    script = "\n".join([
        "-- comment",
        "let two = succ (succ zero)",
        "add two two",
        "trace r_f | num:1",
        f"push {SUCC}",
        "trace r_f | num:1",
        "pop",
        "pop",
        "(\\x. x",
        "quit",
        "K",
    ])
    out = io.StringIO()
    assert repl(session, args, io.StringIO(script), out) == EXIT_OK
    lines = out.getvalue().splitlines()
    assert lines[0] == session.eval("num:4")
    assert lines[1].startswith("error: no oracle")
    assert any(line.startswith("now in") for line in lines)
    assert sum(line.startswith("error") for line in lines) == 3
