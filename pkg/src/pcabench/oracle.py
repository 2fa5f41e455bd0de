"""Adjoining a partial endofunction ``f`` to a PCA ``A``.

``A[f]`` keeps the carrier of ``A`` and changes application.  To apply a
machine ``a`` to ``b`` we repeatedly run ``a`` in ``A`` on ``[b] * u``,
where ``u`` lists the oracle answers so far.  An output ``pair false v`` is a
question, answered by appending ``f(v)``; ``pair true c`` ends the dialogue
with value ``c``.  Anything else is stuck.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .bracket import parse, resolve, compile_term
from .kernel import (AppResult, Element, Meter, OutsideDomainError, Pca,
                     Undefined, Value, outcome_of)
from .stdlib import StdKit


# ---------------------------------------------------------------------------
# Oracles


class OracleFn:
    """A partial function on a carrier: a finite table, a host builtin, or
    both (the table wins).  ``None`` means undefined."""

    def __init__(self, name: str, table: dict | None = None,
                 fn: Callable[[Element], Element | None] | None = None):
        self.name = name
        self.table = dict(table or {})
        self.fn = fn

    def __call__(self, v: Element) -> Element | None:
        out = self.table.get(v)
        if out is None and self.fn is not None:
            out = self.fn(v)
        return out

    def domain(self) -> list:
        """The tabulated part of the domain (builtins are not enumerable)."""
        return list(self.table)

    def __repr__(self) -> str:
        kind = "builtin" if self.fn else f"{len(self.table)} entries"
        return f"OracleFn({self.name}, {kind})"


def empty_oracle() -> OracleFn:
    return OracleFn("empty")


def identity_oracle() -> OracleFn:
    return OracleFn("identity", fn=lambda v: v)


def table_oracle(name: str, pairs: Iterable[tuple[Element, Element]]) -> OracleFn:
    table: dict = {}
    for k, v in pairs:
        if k in table:
            raise ValueError(f"duplicate input in oracle {name}")
        table[k] = v
    return OracleFn(name, table)


def succ_table(pca: Pca, size: int = 16, step: int = 1) -> OracleFn:
    """``n -> n + step`` on the numerals ``0 .. size-1``."""
    kit = pca.kit
    name = "succ" if step == 1 else f"plus{step}"
    return table_oracle(name, ((kit.numeral(n), kit.numeral(n + step)) for n in range(size)))


def compose_tables(f: OracleFn, g: OracleFn, name: str | None = None) -> OracleFn:
    """The table of ``f . g`` on ``dom(g)``."""
    pairs = []
    for v in g.domain():
        w = g(v)
        if w is not None and f(w) is not None:
            pairs.append((v, f(w)))
    return table_oracle(name or f"{f.name}.{g.name}", pairs)


HOST_FUEL = 10**5


def projection_oracle(pca: Pca) -> OracleFn:
    """``x -> fst x``, total wherever ``fst x`` converges."""
    kit = pca.kit

    def fst(v):
        try:
            return pca.app(kit["fst"], v, Meter(HOST_FUEL))
        except Undefined:
            return None

    return OracleFn("fst", fn=fst)


def eq_oracle(pca: Pca) -> OracleFn:
    """``x -> true`` if ``fst x = snd x`` and ``false`` otherwise."""
    kit = pca.kit

    def decide(v):
        try:
            m = Meter(HOST_FUEL)
            a = pca.app(kit["fst"], v, m)
            b = pca.app(kit["snd"], v, m)
        except Undefined:
            return None
        return kit["true"] if pca.equal(a, b) else kit["false"]

    return OracleFn("eq", fn=decide)


def parse_oracle_table(text: str, env, pca: Pca, name: str = "table", fuel: int = 10**6) -> OracleFn:
    """Read ``<input-term> => <output-term>`` lines; ``#`` starts a comment."""
    table: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or (line.startswith("#") and not line[1:2].isdigit()):
            continue
        if "=>" not in line:
            raise ValueError(f"line {lineno}: expected '<input> => <output>'")
        lhs, rhs = line.split("=>", 1)
        try:
            key = compile_term(pca, resolve(parse(lhs.strip()), env, pca.spare), Meter(fuel))
            val = compile_term(pca, resolve(parse(rhs.strip()), env, pca.spare), Meter(fuel))
        except (ValueError, NameError, Undefined) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
        if key in table:
            raise ValueError(f"line {lineno}: duplicate input {lhs.strip()}")
        table[key] = val
    return OracleFn(name, table)


def load_oracle_table(path: str | Path, env, pca: Pca) -> OracleFn:
    p = Path(path)
    return parse_oracle_table(p.read_text(), env, pca, name=p.stem)


def format_oracle_table(oracle: OracleFn, pca: Pca) -> str:
    return "".join(f"{pca.show(k)} => {pca.show(v)}\n" for k, v in oracle.table.items())


# ---------------------------------------------------------------------------
# Dialogues


@dataclass
class DialogueTrace:
    steps: list = field(default_factory=list)
    outcome: AppResult | None = None

    def format(self, show: Callable[[Element], str]) -> str:
        lines = []
        for q, a in self.steps:
            lines.append(f"? {show(q)}")
            lines.append(f"! {show(a)}")
        r = self.outcome
        if isinstance(r, Value):
            lines.append(f"= {show(r.element)}")
        elif r is None:
            lines.append("fuel-exhausted")
        else:
            from .kernel import FuelExhausted, OutsideDomain

            if isinstance(r, FuelExhausted):
                lines.append("fuel-exhausted")
            elif isinstance(r, OutsideDomain):
                lines.append(f"outside-domain {show(r.query)}")
            else:
                lines.append(f"stuck {r.reason}")
        return "\n".join(lines)


class ExtendedPca(Pca):
    """``A[f]``: same carrier as ``A``, application by ``f``-dialogues."""

    def __init__(self, base: Pca, oracle: OracleFn):
        super().__init__()
        self.base = base
        self.oracle = oracle
        self.name = f"{base.name}[{oracle.name}]"
        self.K = build_kf(base)
        self.S = build_sf(base)
        self._kit = LiftedKit(self)

    def _app(self, a: Element, b: Element, meter: Meter) -> Element:
        return self.dialogue(a, b, meter, None)

    def dialogue(self, a: Element, b: Element, meter: Meter, steps: list | None) -> Element:
        base, kit, f = self.base, self.base.kit, self.oracle
        s = kit.seq([b], meter)
        while True:
            meter.spend(1)
            done, payload = kit.unflag(base.app(a, s, meter), meter)
            if done:
                return payload
            meter.spend(1)
            answer = f(payload)
            if answer is None:
                raise OutsideDomainError(payload)
            if steps is not None:
                steps.append((payload, answer))
            s = kit.snoc(s, answer, meter)

    def equal(self, a, b) -> bool:
        return self.base.equal(a, b)

    def show(self, e) -> str:
        return self.base.show(e)

    def sample(self, rng: random.Random) -> Element:
        return machine_sampler(self)(rng)


def dialogue_apply(ext: ExtendedPca, a: Element, b: Element, fuel: int) -> tuple[AppResult, DialogueTrace]:
    """Run ``a .f b`` and return the outcome with the dialogue explored."""
    trace = DialogueTrace()
    try:
        trace.outcome = Value(ext.dialogue(a, b, Meter(fuel), trace.steps))
    except Undefined as exc:
        trace.outcome = outcome_of(exc)
    return trace.outcome, trace


def make_extension(base: Pca, oracle: OracleFn) -> ExtendedPca:
    return ExtendedPca(base, oracle)


# ---------------------------------------------------------------------------
# The combinators of A[f], built in A


class _Env:
    """Kit names plus a few extra constants, for compiling helper sources."""

    def __init__(self, kit: StdKit, extra: dict):
        self.kit = kit
        self.extra = extra

    def lookup(self, name):
        if name in self.extra:
            return self.extra[name]
        return self.kit.lookup(name)

    def numeral(self, n):
        return self.kit.numeral(n)

    def code(self, n):
        return self.kit.code(n)

    def seq_term(self, items):
        return self.kit.seq_term(items)


def compile_in(pca: Pca, text: str, fuel: int = 10**7, **extra) -> Element:
    term = resolve(parse(text), _Env(pca.kit, extra), pca.spare)
    return compile_term(pca, term, Meter(fuel))


def _cached(pca: Pca, key: str, build: Callable[[], Element]) -> Element:
    store = pca.__dict__.setdefault("_oracle_cache", {})
    if key not in store:
        store[key] = build()
    return store[key]


def build_kf(base: Pca) -> Element:
    """``\\x. pair true (\\y. pair true x0)``: it never consults the oracle."""
    return _cached(base, "Kf", lambda: compile_in(
        base, r"\x. pair true (\y. pair true (at x zero))"))


def build_t_combinator(base: Pca) -> Element:
    """The combinator ``T`` with ``T x y`` = t(x, y).

    On input ``[c, w0, ..., w(n-1)]`` it finds the least ``i`` at which ``x``
    answers on ``[c] * w[:i]``; up to then it forwards ``x``'s questions.
    With ``alpha`` that answer it does the same for ``y`` on ``[c] * w[i:j]``,
    obtaining ``beta``, and finally runs ``alpha`` on ``[beta] * w[j:k]``.
    """
    return base.kit["tdisp"]


def build_t(base: Pca, x: Element, y: Element, fuel: int = 10**5) -> Element:
    kit = base.kit
    return kit.app2(build_t_combinator(base), x, y, Meter(fuel))


FIX = r"\x. pair true (Y (\m. ydisp (at x zero) m))"


def build_yf(base: Pca) -> Element:
    """A fixpoint combinator of ``A[f]`` that is a machine of ``A``.

    ``Y .f h`` is the machine ``M`` (made self-referential with the ``Y`` of
    ``A``) that on ``[a] * w`` first runs ``h`` on ``[M] * w[:i]`` until it
    answers ``alpha``, then runs ``alpha`` on ``[a] * w[i:k]``.  So
    ``M .f a = (h .f M) .f a``.  Compiling the usual self-application inside
    ``A[f]`` instead would nest the dispatch of ``t`` once per level.
    """
    return _cached(base, "Yf", lambda: compile_in(base, FIX))


def build_sf(base: Pca) -> Element:
    """``\\x. pair true (\\y. pair true (t(x0, y0)))``."""
    return _cached(base, "Sf", lambda: compile_in(
        base, r"\x. pair true (\y. pair true (T (at x zero) (at y zero)))",
        T=build_t_combinator(base)))


def reference_t(ext: ExtendedPca, a: Element, b: Element, s: Element, meter: Meter) -> Element:
    """Host-level statement of what ``t(a, b)`` outputs on sequence ``s``."""
    base, kit = ext.base, ext.base.kit
    items = kit.decode_seq(s, meter)
    c, w = items[0], items[1:]
    n = len(w)

    def scan(machine, head, start):
        for i in range(start, n + 1):
            o = base.app(machine, kit.seq([head] + w[start:i], meter), meter)
            done, payload = kit.unflag(o, meter)
            if done:
                return i, payload, o
            if i == n:
                return None, None, o
        raise AssertionError

    i, alpha, o = scan(a, c, 0)
    if i is None:
        return o
    j, beta, o = scan(b, c, i)
    if j is None:
        return o
    _, _, o = scan(alpha, beta, j)
    return o


def reference_compose(ext: ExtendedPca, a, b, c, fuel: int) -> AppResult:
    """``(a .f c) .f (b .f c)`` by three direct dialogues."""
    try:
        m = Meter(fuel)
        return Value(ext.app(ext.app(a, c, m), ext.app(b, c, m), m))
    except Undefined as exc:
        return outcome_of(exc)


# ---------------------------------------------------------------------------
# Elements of A[f] with a fixed dialogue shape


def representer(base: Pca) -> Element:
    """``r_f``: asks ``f`` about its argument once, then returns the answer."""
    return _cached(base, "rep", lambda: compile_in(
        base, r"\s. numeq (lh s) (succ zero) (\z. pair false (at s zero)) (\z. pair true (at s (succ zero))) I"))


def double_query(base: Pca) -> Element:
    """Asks about its argument, then about the answer; returns the second answer."""
    return _cached(base, "rep2", lambda: compile_in(
        base, r"""\s. numeq (lh s) (succ zero) (\z. pair false (at s zero))
                   (\z. numeq (lh s) (succ (succ zero)) (\z. pair false (at s (succ zero)))
                              (\z. pair true (at s (succ (succ zero)))) I) I"""))


def nontotal_witness(base: Pca) -> Element:
    """``\\x. pair false false``: asks about ``false`` forever."""
    return _cached(base, "bot", lambda: compile_in(base, r"\x. pair false false"))


def lift_builder(base: Pca, arity: int) -> Element:
    """``B_n`` with ``B_n e .f a1 ... .f an = e a1 ... an`` (application in A)."""
    if arity <= 3:
        return base.kit[f"lift{arity}"]
    inner = lift_builder(base, arity - 1)
    return _cached(base, f"B{arity}", lambda: compile_in(
        base, r"\z x. pair true (inner (z (at x zero)))", inner=inner))


def lift(base: Pca, e: Element, arity: int = 1, fuel: int = 10**5) -> Element:
    return base.app(lift_builder(base, arity), e, Meter(fuel))


def iota_realizer(base: Pca) -> Element:
    """Realizer of ``a -> {a}`` from A to A[f]: ``r .f a .f b = a b``."""
    return _cached(base, "iota_r", lambda: compile_in(
        base, r"\y. pair true (\x. pair true ((at y zero) (at x zero)))"))


def iota_decider(ext: ExtendedPca) -> Element:
    """Sends ``true``/``false`` of A to those of A[f] without any questions."""
    kit = ext.kit
    return compile_in(ext.base, r"\x. pair true ((at x zero) tt ff)", tt=kit["true"], ff=kit["false"])


def iota(ext: ExtendedPca):
    from .morphisms import ApplicativeMorphism

    return ApplicativeMorphism(ext.base, ext, lambda a: (a,), iota_realizer(ext.base),
                               iota_decider(ext), name=f"iota_{ext.oracle.name}")


# ---------------------------------------------------------------------------
# Kit of A[f]: data shared with A, booleans and control native to A[f]

LIFTED = {"pair": 2, "fst": 1, "snd": 1, "succ": 1, "pred": 1, "lh": 1, "at": 2,
          "take": 2, "drop": 2, "slice": 3, "cat": 2, "cons": 2, "snoc": 2,
          "add": 2, "sub": 2, "mul": 2}


class LiftedKit(StdKit):
    """Pairs, numerals and sequences of ``A[f]`` are those of ``A``; the
    operations on them are lifted ``A``-combinators.  Booleans (and so every
    flag in an ``A[f][g]`` dialogue) are ``A[f]`` selectors, and control
    combinators are compiled in ``A[f]`` itself."""

    def _build(self, name: str) -> Element:
        ext = self.pca
        base = ext.base
        bk = base.kit
        if name in ("zero", "nil"):
            return bk[name]
        if name in ("true", "false"):
            return lift(base, bk[name], 2)
        if name in LIFTED:
            return lift(base, bk[name], LIFTED[name])
        if name == "flag":
            return lift(base, bk["fst"], 1)
        if name == "Y":
            return build_yf(base)
        if name in ("tdisp", "ydisp") and bk.native("f" + name) is not None:
            # the dispatch of A[f] run natively by one machine of A
            return compile_in(base, r"\xs. pair true (\ys. pair true (P (at xs zero) (at ys zero)))",
                              P=bk.native("f" + name))
        if name == "iszero":
            return lift(base, compile_in(base, r"\n. iszero n tt ff", tt=self["true"], ff=self["false"]), 1)
        if name == "numeq":
            return lift(base, compile_in(base, r"\n m. numeq n m tt ff", tt=self["true"], ff=self["false"]), 2)
        return super()._build(name)

    def numeral(self, n: int) -> Element:
        return self.pca.base.kit.numeral(n)

    def code(self, n: int) -> Element:
        return self.pca.base.kit.code(n)

    def unpair(self, o, meter):
        return self.pca.base.kit.unpair(o, meter)

    def snoc(self, u, a, meter):
        return self.pca.base.kit.snoc(u, a, meter)

    def decode_num(self, e, meter=None, limit=10**5):
        return self.pca.base.kit.decode_num(e, meter, limit)

    def decode_seq(self, u, meter=None):
        return self.pca.base.kit.decode_seq(u, meter)


# ---------------------------------------------------------------------------
# Sampling machines


def machine_sampler(ext: ExtendedPca, raw_share: float = 0.2, fuel: int = 20_000):
    """Random elements of ``A[f]`` that mostly behave as machines.

    Leaves are ``K``, ``S`` of ``A[f]``, the representer, lifted base
    elements and numerals; they are combined by ``A[f]`` application.  A
    ``raw_share`` of draws are plain base elements, whose outputs are
    usually not flagged pairs.
    """
    base = ext.base
    kit = base.kit
    atoms = [ext.K, ext.S, representer(base)]

    def leaf(rng):
        r = rng.random()
        if r < 0.45:
            return rng.choice(atoms)
        if r < 0.8:
            return lift(base, base.sample(rng))
        return kit.numeral(rng.randrange(6))

    def draw(rng):
        if rng.random() < raw_share:
            return base.sample(rng)
        while True:
            items = [leaf(rng) for _ in range(rng.randint(1, 4))]
            try:
                m = Meter(fuel)
                while len(items) > 1:
                    i = rng.randrange(len(items) - 1)
                    items[i:i + 2] = [ext.app(items[i], items[i + 1], m)]
                return items[0]
            except Undefined:
                continue

    return draw


# ---------------------------------------------------------------------------
# The universal lift


U_SOURCE = r"""Y (\u b b2 v.
    (\o. d (pi0 o) (\z. pi1 o) (\z. u b b2 (snocB (frep (pi1 o)) v)) I)
    (r b (consB b2 v)))"""


@dataclass
class LiftParts:
    """The elements of ``B`` behind a lifted morphism, kept for inspection."""

    pi0: Element
    pi1: Element
    cons: Element
    snoc: Element
    U: Element
    empty: Element
    rho: Element


def lift_morphism(gamma, decider: Element, f_rep: Element, ext: ExtendedPca):
    """Extend a decidable ``gamma: A -> B`` along ``iota: A -> A[f]``.

    ``f_rep`` must represent ``f`` with respect to ``gamma``.  The result has
    the same underlying map as ``gamma`` and is realized by
    ``rho = \\x x2. U x x2 e`` where ``U`` replays an ``f``-dialogue inside
    ``B`` by recursion.
    """
    from .morphisms import ApplicativeMorphism

    B = gamma.target
    A = ext.base
    kit = A.kit
    r = gamma.realizer

    def image(e):
        out = gamma.map(e)
        if not out:
            raise ValueError("applicative morphisms are total")
        return out[0]

    pi0 = compile_in(B, r"\b. r g b", r=r, g=image(kit["fst"]))
    pi1 = compile_in(B, r"\b. r g b", r=r, g=image(kit["snd"]))
    cons_b = compile_in(B, r"\b v. r (r g b) v", r=r, g=image(kit["cons"]))
    snoc_b = compile_in(B, r"\b v. r (r g v) b", r=r, g=image(kit["snoc"]))
    U = compile_in(B, U_SOURCE, d=decider, pi0=pi0, pi1=pi1, r=r, frep=f_rep,
                   consB=cons_b, snocB=snoc_b)
    empty = image(kit["nil"])
    rho = compile_in(B, r"\x x2. U x x2 e", U=U, e=empty)
    tt, ff = image(kit["true"]), image(kit["false"])
    # decider of the lift: run the A[f]-boolean on images of true/false
    d_lift = compile_in(B, r"\b. d (rho (rho b tt) ff)", d=decider, rho=rho, tt=tt, ff=ff)
    morph = ApplicativeMorphism(ext, B, gamma.map, rho, d_lift, name=f"{gamma.name}_{ext.oracle.name}")
    morph.parts = LiftParts(pi0, pi1, cons_b, snoc_b, U, empty, rho)
    return morph


# ---------------------------------------------------------------------------
# A model with the oracle built into its interpreter


DRIVER_SOURCE = r"""\a b. Y (\loop s.
    (\o. flag o (\z. snd o) (\z. loop (snoc s (ask (snd o)))) I) (a s)) (snoc nil b)"""


def oracle_machine_model(base, oracle: OracleFn):
    """The numeric model of ``base`` whose interpreter has one more
    instruction ``ask``, with ``ask x = f(x)``.

    ``base`` is a numeric model over the enriched term model.  Terms
    mentioning ``ask`` are outside the domain of ``f``.
    """
    from .kernel import NumericPca, Primitive, TermPca
    from .stdlib import EnrichedKit, NumericKit, enriched_primitives

    def ask_rule(pca, args, meter):
        x = args[0]
        if _mentions(x, "ask"):
            raise OutsideDomainError(x)
        answer = oracle(base.encode(x))
        if answer is None:
            raise OutsideDomainError(x)
        return ("v", base.decode(answer))

    terms = TermPca([*enriched_primitives(), Primitive("ask", 1, ask_rule)], name="term+ask")
    terms._kit = EnrichedKit(terms)
    model = NumericPca(terms, name=f"{base.name}^{oracle.name}")
    model._kit = NumericKit(model)
    return model


def _mentions(node, name: str) -> bool:
    stack = [node]
    while stack:
        e = stack.pop()
        if e.head == name:
            return True
        stack.extend(e.args)
    return False


def embed(base, model, e: Element) -> Element:
    """The code in ``model`` of the same term as ``e`` in ``base``."""
    return model.encode(base.decode(e))


def check_oracle_machine(ext: ExtendedPca, samples: int, seed: int, fuel: int):
    """Mutual simulation of ``A[f]`` and the model with ``ask`` built in.

    Forward, exact: the driver run in the ``ask`` model agrees with the
    ``f``-dialogue on sampled applications (Kleene equality, codes
    translated).  Backward, observational: programs over ``ask`` applied to
    numerals give the same numeral as their translation run in ``A[f]``,
    where ``ask`` becomes the representer.
    """
    from .kernel import Report, eval_apps, kleene_agree, show_result

    base = ext.base
    model = oracle_machine_model(base, ext.oracle)
    ask = model.encode(model.base.constant("ask"))
    drive = compile_in(model, DRIVER_SOURCE, ask=ask)
    rng = random.Random(f"{seed}/oracle-machine")
    draw = machine_sampler(ext)
    report = Report()
    report.note(f"{ext.name} against {model.name}: demonstration, not a proof of isomorphism")
    bad = None
    for i in range(samples):
        a = representer(base) if i == 0 else draw(rng)
        b = base.kit.numeral(rng.randrange(18))
        ok, left, right = kleene_agree(
            model, lambda f: _mapped(eval_apps(ext, a, [b], f), base, model),
            lambda f: eval_apps(model, drive, [embed(base, model, a), embed(base, model, b)], f), fuel)
        if not ok:
            bad = f"a={base.show(a)} b={base.show(b)}: A[f] -> {show_result(model, left)}, driver -> {show_result(model, right)}"
            break
    report.record(f"simulate[{ext.name} in {model.name}]", samples, seed, bad)

    # backward: small numeric programs over ask
    atoms = ["succ", "pred", "ask", "I"]
    bad = None
    kit, mkit = base.kit, model.kit
    for _ in range(samples):
        names = [rng.choice(atoms) for _ in range(rng.randint(1, 4))]
        n = rng.randrange(12)
        prog_text = r"\x. " + "".join(f"{w} (" for w in names) + "x" + ")" * len(names)
        direct = eval_apps(model, compile_in(model, prog_text, ask=ask), [mkit.numeral(n)], fuel)
        via = _run_translated(ext, names, n, fuel)
        got_direct = _as_num(model, direct)
        got_via = _as_num(base, via)
        if got_direct != got_via:
            bad = f"{' . '.join(names)} on {n}: builtin -> {got_direct}, A[f] -> {got_via}"
            break
    report.record(f"simulate[{model.name} in {ext.name}]", samples, seed, bad)
    return report


def _mapped(res, base, model):
    return Value(embed(base, model, res.element)) if isinstance(res, Value) else res


def _as_num(pca, res):
    if not isinstance(res, Value):
        return type(res).__name__
    try:
        return pca.kit.decode_num(res.element, Meter(10**5), limit=64)
    except Undefined:
        return pca.show(res.element)


def _run_translated(ext: ExtendedPca, names: list[str], n: int, fuel: int):
    """Apply the composite right to left in ``A[f]``: plain steps are lifted
    ``A`` elements, ``ask`` is the representer."""
    base = ext.base
    x = base.kit.numeral(n)
    meter = Meter(fuel)
    try:
        for w in reversed(names):
            step = representer(base) if w == "ask" else lift(base, base.kit[w])
            x = ext.app(step, x, meter)
    except Undefined as exc:
        return outcome_of(exc)
    return Value(x)
