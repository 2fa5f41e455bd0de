"""Command-line front end: ``pcabench eval|trace|suite|leq|repl``."""

from __future__ import annotations

import argparse
import shlex
import sys
from pathlib import Path

from .bracket import ParseError, compile_term, parse, resolve
from .kernel import Element, Meter, Pca, Undefined, outcome_of, show_result
from .morphisms import turing_leq
from .oracle import (ExtendedPca, OracleFn, _Env, dialogue_apply, make_extension, nontotal_witness,
                     parse_oracle_table, representer)
from .suites import SUITES, base_model, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class Session:
    """A base model, a stack of oracles over it, and named elements."""

    def __init__(self, model: str = "term", fuel: int = 100_000):
        self.base = base_model(model)
        self.model = model
        self.fuel = fuel
        self.stack: list[ExtendedPca] = []
        self.names: dict[str, Element] = {}

    @property
    def pca(self) -> Pca:
        return self.stack[-1] if self.stack else self.base

    def env(self, pca: Pca | None = None, names: Pca | None = None) -> _Env:
        """Kit names of ``pca``; ``K_f``, ``r_f``, ... of ``names`` (default ``pca``)."""
        pca = pca or self.pca
        names = names or pca
        extra = dict(self.names)
        if isinstance(names, ExtendedPca):
            extra.update({"K_f": names.K, "S_f": names.S, "r_f": representer(names.base),
                          "bot-witness": nontotal_witness(names.base)})
        return _Env(pca.kit, extra)

    def element(self, text: str, pca: Pca | None = None, names: Pca | None = None) -> Element:
        """Compile ``text`` in ``pca``; ``names`` picks the model whose
        ``K_f``, ``r_f`` and so on are in scope."""
        pca = pca or self.pca
        term = resolve(parse(text), self.env(pca, names), pca.spare)
        return compile_term(pca, term, Meter(self.fuel))

    def read_oracle(self, path: str) -> OracleFn:
        p = Path(path)
        return parse_oracle_table(p.read_text(), self.env(), self.pca, name=p.stem, fuel=self.fuel)

    def push(self, path: str) -> None:
        self.stack.append(make_extension(self.pca, self.read_oracle(path)))

    def pop(self) -> None:
        if not self.stack:
            raise ValueError("no oracle loaded")
        self.stack.pop()

    # -- commands -----------------------------------------------------------

    def eval(self, text: str) -> str:
        try:
            return self.pca.show(self.element(text))
        except Undefined as exc:
            return show_result(self.pca, outcome_of(exc))

    def trace(self, a_text: str, b_text: str) -> str:
        ext = self.pca
        if not isinstance(ext, ExtendedPca):
            raise ValueError("no oracle loaded")
        a, b = self.element(a_text), self.element(b_text)
        _, trace = dialogue_apply(ext, a, b, self.fuel)
        return trace.format(ext.show)

    def leq(self, f_path: str, g_path: str, witness: str, seed: int):
        f = self.read_oracle(f_path)
        ext = make_extension(self.pca, self.read_oracle(g_path))
        w = self.element(witness, self.pca, ext)  # a machine of the model being extended
        return turing_leq(f, ext, w, seed=seed, fuel=self.fuel)


def _options(top: bool) -> argparse.ArgumentParser:
    # flags may come before or after the command; only the top level sets defaults
    def default(v):
        return v if top else argparse.SUPPRESS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=("term", "numeric"), default=default("term"))
    common.add_argument("--fuel", type=int, default=default(100_000))
    common.add_argument("--seed", type=int, default=default(0))
    common.add_argument("--samples", type=int, default=default(200))
    common.add_argument("--oracle", action="append", default=default([]), metavar="FILE",
                        help="oracle table; repeat to extend further (innermost last)")
    return common


def _parser() -> argparse.ArgumentParser:
    common = _options(False)
    p = argparse.ArgumentParser(prog="pcabench", parents=[_options(True)],
                                description="Evaluate terms and check laws of partial combinatory algebras.")
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("eval", parents=[common], help="evaluate a term")
    e.add_argument("term")
    t = sub.add_parser("trace", parents=[common], help="print the oracle dialogue of a .f b")
    t.add_argument("a")
    t.add_argument("b")
    s = sub.add_parser("suite", parents=[common], help="run a check suite")
    s.add_argument("name", choices=[*SUITES, "all"])
    q = sub.add_parser("leq", parents=[common], help="check f <= g via a witness")
    q.add_argument("f")
    q.add_argument("g")
    q.add_argument("witness")
    sub.add_parser("repl", parents=[common], help="read commands from stdin")
    return p


REPL_HELP = """commands:
  <term>                 evaluate
  trace <a> | <b>        dialogue of a .f b
  push <file> / pop      extend by an oracle table / drop the last one
  let <name> = <term>    name an element
  suite <name>           run a suite
  quit"""


def repl(session: Session, args, stdin=sys.stdin, out=sys.stdout) -> int:
    status = EXIT_OK
    for raw in stdin:
        line = raw.strip()
        if not line or line.startswith("--"):
            continue
        try:
            word, _, rest = line.partition(" ")
            if word in ("quit", "exit"):
                break
            if word == "help":
                print(REPL_HELP, file=out)
            elif word == "trace":
                a, sep, b = rest.partition("|")
                if not sep:
                    raise ValueError("usage: trace <a> | <b>")
                print(session.trace(a.strip(), b.strip()), file=out)
            elif word == "push":
                session.push(shlex.split(rest)[0])
                print(f"now in {session.pca.name}", file=out)
            elif word == "pop":
                session.pop()
                print(f"now in {session.pca.name}", file=out)
            elif word == "let":
                name, sep, text = rest.partition("=")
                if not sep:
                    raise ValueError("usage: let <name> = <term>")
                session.names[name.strip()] = session.element(text.strip())
            elif word == "suite":
                report = run_suite(rest.strip(), args.seed, args.samples, session.fuel, session.model)
                print(report, file=out)
                status = max(status, EXIT_OK if report.passed else EXIT_FAIL)
            else:
                print(session.eval(line), file=out)
        except (ParseError, ValueError, NameError, KeyError, OSError, Undefined) as exc:
            print(f"error: {exc}", file=out)
    return status


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        session = Session(args.model, args.fuel)
        for path in args.oracle:
            session.push(path)
        if args.command == "eval":
            print(session.eval(args.term))
            return EXIT_OK
        if args.command == "trace":
            print(session.trace(args.a, args.b))
            return EXIT_OK
        if args.command == "suite":
            report = run_suite(args.name, args.seed, args.samples, args.fuel, args.model)
            print(report)
            return EXIT_OK if report.passed else EXIT_FAIL
        if args.command == "leq":
            report = session.leq(args.f, args.g, args.witness, args.seed)
            print(report)
            return EXIT_OK if report.passed else EXIT_FAIL
        return repl(session, args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, NameError, OSError, Undefined) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
