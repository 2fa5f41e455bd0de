"""Terms with variables, bracket abstraction, and the surface syntax.

Surface grammar::

    term  := '\\' name+ '.' term | atom+ ['\\' ...]
    atom  := name | '(' term ')' | '#' digits | 'num:' digits | 'seq[' [term (',' term)*] ']'

Application is juxtaposition and associates to the left.  ``\\x y. t`` is
compiled by :func:`lambda_star`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Protocol

from .kernel import Element, Meter, Pca


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    element: Element


@dataclass(frozen=True)
class Comb:
    """``K`` or ``S`` of whichever PCA the term is later compiled in."""

    name: str


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Var | Const | Comb | App


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    return frozenset()


def substitute(t: Term, binding: dict) -> Term:
    """Replace free variables by constants."""
    if isinstance(t, Var) and t.name in binding:
        return Const(binding[t.name])
    if isinstance(t, App):
        return App(substitute(t.fun, binding), substitute(t.arg, binding))
    return t


def _spine(t: Term) -> tuple[Term, list]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def is_safe(t: Term, spare: Callable[[Element], int]) -> bool:
    """True when ``t`` has a value under every substitution of its variables.

    Atoms are safe; so is ``K`` applied to at most one safe term, ``S`` to at
    most two, and a constant applied to no more arguments than it can absorb
    without contracting.
    """
    head, args = _spine(t)
    if not args:
        return True
    if isinstance(head, Comb):
        room = 1 if head.name == "K" else 2
    elif isinstance(head, Const):
        room = spare(head.element)
    else:
        return False
    return len(args) <= room and all(is_safe(a, spare) for a in args)


_I = App(App(Comb("S"), Comb("K")), Comb("K"))


def _abstract(x: str, t: Term, spare) -> Term:
    if isinstance(t, Var) and t.name == x:
        return _I
    if x not in free_vars(t) and is_safe(t, spare):
        return App(Comb("K"), t)
    if isinstance(t, App):
        return App(App(Comb("S"), _abstract(x, t.fun, spare)), _abstract(x, t.arg, spare))
    raise AssertionError("unreachable: atoms are always safe")


def lambda_star(vars: list[str], body: Term, spare: Callable[[Element], int] | None = None) -> Term:
    """Bracket-abstract ``vars`` (innermost variable first) out of ``body``.

    Raises ``ValueError`` if ``body`` has a free variable outside ``vars`` or
    ``vars`` repeats a name.  With ``spare`` the K-shortcut also fires on
    constant applications known to stay in normal form.
    """
    if not vars:
        raise ValueError("lambda_star needs at least one variable")
    if len(set(vars)) != len(vars):
        raise ValueError(f"repeated variable in {vars}")
    stray = free_vars(body) - set(vars)
    if stray:
        raise ValueError(f"free variable(s) {sorted(stray)} not bound by {vars}")
    spare = spare or (lambda e: 0)
    for x in reversed(vars):
        body = _abstract(x, body, spare)
    return body


def lambda_open(vars: list[str], body: Term, spare=None) -> Term:
    """Like :func:`lambda_star` but leaves outer variables free."""
    spare = spare or (lambda e: 0)
    for x in reversed(vars):
        body = _abstract(x, body, spare)
    return body


def compile_term(pca: Pca, term: Term, meter: Meter) -> Element:
    """Evaluate a closed term in ``pca``."""
    if isinstance(term, Const):
        return term.element
    if isinstance(term, Comb):
        return pca.K if term.name == "K" else pca.S
    if isinstance(term, App):
        f = compile_term(pca, term.fun, meter)
        return pca.app(f, compile_term(pca, term.arg, meter), meter)
    raise ValueError(f"cannot compile open term: free variable {term.name}")


def compile(pca: Pca, term: Term, fuel: int = 10**6) -> Element:
    return compile_term(pca, term, Meter(fuel))


# ---------------------------------------------------------------------------
# Surface syntax


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Lam:
    vars: tuple
    body: Any


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Code:
    value: int


@dataclass(frozen=True)
class Seq:
    items: tuple


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>num:\d+)
  | (?P<code>\#\d+)
  | (?P<seq>seq\[)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*)
  | (?P<sym>[\\().,\]])
""", re.VERBOSE)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def term(self):
        if self.peek()[1] == "\\":
            return self.lam()
        items = []
        while True:
            kind, val, pos = self.peek()
            if val == "\\":
                items.append(self.lam())
                break
            if kind in ("name", "num", "code", "seq") or val == "(":
                items.append(self.atom())
            else:
                break
        if not items:
            kind, val, pos = self.peek()
            raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos)
        t = items[0]
        for a in items[1:]:
            t = App(t, a)
        return t

    def lam(self):
        self.take("\\")
        names = []
        while self.peek()[0] == "name":
            names.append(self.take()[1])
        if not names:
            raise ParseError("expected a variable after '\\'", self.peek()[2])
        self.take(".")
        return Lam(tuple(names), self.term())

    def atom(self):
        kind, val, pos = self.take()
        if kind == "name":
            return Var(val)
        if kind == "num":
            return Num(int(val[4:]))
        if kind == "code":
            return Code(int(val[1:]))
        if kind == "seq":
            items = []
            if self.peek()[1] != "]":
                items.append(self.term())
                while self.peek()[1] == ",":
                    self.take(",")
                    items.append(self.term())
            self.take("]")
            return Seq(tuple(items))
        if val == "(":
            t = self.term()
            self.take(")")
            return t
        raise ParseError(f"unexpected {val!r}", pos)


def parse(text: str):
    """Parse surface syntax into an unresolved tree."""
    p = _Parser(text)
    t = p.term()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {val!r}", pos)
    return t


class Environment(Protocol):
    def lookup(self, name: str) -> Element | None: ...

    def numeral(self, n: int) -> Element: ...

    def code(self, n: int) -> Element: ...

    def seq_term(self, items: list[Term]) -> Term: ...


def resolve(tree, env: Environment, spare=None, bound: frozenset = frozenset()) -> Term:
    """Turn a parsed tree into a term: bound names become variables,
    free names are looked up in ``env``, lambdas are bracket-abstracted."""
    if isinstance(tree, Var):
        if tree.name in bound:
            return tree
        e = env.lookup(tree.name)
        if e is None:
            raise NameError(f"unbound name {tree.name!r}")
        return Const(e)
    if isinstance(tree, App):
        return App(resolve(tree.fun, env, spare, bound), resolve(tree.arg, env, spare, bound))
    if isinstance(tree, Lam):
        body = resolve(tree.body, env, spare, bound | set(tree.vars))
        if len(set(tree.vars)) != len(tree.vars):
            raise ValueError(f"repeated variable in \\{' '.join(tree.vars)}")
        return lambda_open(list(tree.vars), body, spare)
    if isinstance(tree, Num):
        return Const(env.numeral(tree.value))
    if isinstance(tree, Code):
        return Const(env.code(tree.value))
    if isinstance(tree, Seq):
        return env.seq_term([resolve(t, env, spare, bound) for t in tree.items])
    return tree


# ---------------------------------------------------------------------------
# Completeness check


def random_term(rng, vars: list[str], constant: Callable, size: int) -> Term:
    """A random applicative term over ``vars``, K, S and sampled constants."""
    if size <= 1:
        roll = rng.random()
        if vars and roll < 0.5:
            return Var(rng.choice(vars))
        if roll < 0.75:
            return Comb(rng.choice("KS"))
        return Const(constant())
    left = rng.randint(1, size - 1)
    return App(random_term(rng, vars, constant, left), random_term(rng, vars, constant, size - left))


def check_completeness(pca: Pca, samples: int, seed: int, fuel: int, max_arity: int = 3,
                       max_size: int = 8):
    """Under-application definedness and the substitution law of lambda_star.

    For each arity ``n`` draws ``samples`` pairs of a term ``t`` over
    ``x1..xn`` and arguments ``a1..an``; checks ``e a1..ak`` has a value for
    ``k < n`` and ``e a1..an`` is Kleene-equal to ``t[a/x]``.
    """
    import random

    from .kernel import Report, Value, eval_apps, kleene_agree, outcome_of, show_result, Undefined

    report = Report()
    report.note(f"{pca.name}: bracket abstraction, fuel={fuel}")

    def direct(term):
        def run(f):
            try:
                return Value(compile_term(pca, term, Meter(f)))
            except Undefined as exc:
                return outcome_of(exc)
        return run

    for n in range(1, max_arity + 1):
        rng = random.Random(f"{seed}/{n}")
        xs = [f"x{i}" for i in range(1, n + 1)]
        under = subst = None
        for _ in range(samples):
            body = random_term(rng, xs, lambda: pca.sample(rng), rng.randint(1, max_size))
            args = [pca.sample(rng) for _ in xs]
            try:
                e = compile(pca, lambda_star(xs, body, pca.spare), fuel)
            except Exception as exc:
                under = under or f"lambda_star of {body} did not compile: {exc!r}"
                continue
            for k in range(n):
                r = eval_apps(pca, e, args[:k], fuel)
                if not isinstance(r, Value) and under is None:
                    under = f"{k} of {n} arguments to lambda* of {body} -> {show_result(pca, r)}"
            if subst is None:
                binding = dict(zip(xs, args))
                ok, left, right = kleene_agree(pca, lambda f: eval_apps(pca, e, args, f),
                                               direct(substitute(body, binding)), fuel)
                if not ok:
                    shown = ", ".join(pca.show(a) for a in args)
                    subst = (f"lambda* of {body} at [{shown}] -> {show_result(pca, left)} "
                             f"but substitution -> {show_result(pca, right)}")
        report.record(f"under-application[arity={n}]", samples, seed, under)
        report.record(f"substitution[arity={n}]", samples, seed, subst)
    return report
