"""Booleans, pairing, numerals, recursion and sequence coding in any PCA.

Every combinator has a definition in surface syntax compiled by bracket
abstraction, so it exists in every model.  The enriched term model replaces
the expensive ones (fixpoint, sequence slicing, numeral comparison) by
primitives with the same defining equations.

Codings:

* booleans are selectors, ``true = \\x y. x`` and ``false = \\x y. y``;
* numerals are Curry numerals, ``0 = I`` and ``n+1 = pair false n``;
* a sequence ``[u0, ..., u(n-1)]`` is ``pair n spine`` where the spine lists
  the items newest first: ``pair u(n-1) (... (pair u0 0))``.  Appending is
  then a constant-time operation, which dialogues do once per step.

Branches that recurse are wrapped as thunks, ``b (\\d. X) (\\d. Y) I``,
because application is strict.
"""

from __future__ import annotations

from .bracket import App, Const, Term, compile_term, parse, resolve
from .kernel import (Element, Meter, Node, Pca, Primitive, StuckError, TermPca,
                     mk)

SOURCES: dict[str, str] = {
    "I": r"\x. x",
    "true": r"\x y. x",
    "false": r"\x y. y",
    "if": r"\b x y. b x y",
    "not": r"\b. b false true",
    "pair": r"\x y z. z x y",
    "fst": r"\u. u true",
    "snd": r"\u. u false",
    "Y": r"(\w f a. f (w w f) a) (\w f a. f (w w f) a)",
    "zero": r"I",
    "succ": r"\n. pair false n",
    "iszero": r"\n. n true",
    "pred": r"\n. iszero n zero (n false)",
    "numeq": r"Y (\e n m. iszero n (\d. iszero m) (\d. iszero m (\d. false) (\d. e (pred n) (pred m)) I) I)",
    "add": r"Y (\r n m. iszero m (\d. n) (\d. r (succ n) (pred m)) I)",
    "sub": r"Y (\r n m. iszero m (\d. n) (\d. r (pred n) (pred m)) I)",
    "primrec": r"Y (\r g h n. iszero n (\d. g) (\d. h (pred n) (r g h (pred n))) I)",
    "mul": r"\n m. primrec zero (\k acc. add acc n) m",
    "flag": r"\o. fst o",
    "nil": r"pair zero zero",
    "lh": r"\u. fst u",
    "snoc": r"\u a. pair (succ (fst u)) (pair a (snd u))",
    "dropsp": r"Y (\r l k. iszero k (\d. l) (\d. r (snd l) (pred k)) I)",
    "takesp": r"Y (\r l k. iszero k (\d. zero) (\d. pair (fst l) (r (snd l) (pred k))) I)",
    "appsp": r"Y (\r l k acc. iszero k (\d. acc) (\d. pair (fst l) (r (snd l) (pred k) acc)) I)",
    "at": r"\u i. fst (dropsp (snd u) (pred (sub (fst u) i)))",
    "take": r"\u i. pair i (dropsp (snd u) (sub (fst u) i))",
    "drop": r"\u i. pair (sub (fst u) i) (takesp (snd u) (sub (fst u) i))",
    "slice": r"\u i j. take (drop u i) (sub j i)",
    "cat": r"\u v. pair (add (fst u) (fst v)) (appsp (snd v) (fst v) (snd u))",
    "cons": r"\a u. cat (snoc nil a) u",
    # dialogue dispatch: tdisp x y runs x, then y, then x's answer on y's
    # (see the oracle module); ydisp h m runs h on m, then the answer
    "tloop3": r"""Y (\r al be w n j k.
        (\o. flag o (\z. o) (\z. numeq k n (\z. o) (\z. r al be w n j (succ k)) I) I)
        (al (cons be (slice w j k))))""",
    "tloop2": r"""Y (\r al y c w n i j.
        (\o. flag o (\z. tloop3 al (snd o) w n j j)
                    (\z. numeq j n (\z. o) (\z. r al y c w n i (succ j)) I) I)
        (y (cons c (slice w i j))))""",
    "tloop1": r"""Y (\r x y c w n i.
        (\o. flag o (\z. tloop2 (snd o) y c w n i i)
                    (\z. numeq i n (\z. o) (\z. r x y c w n (succ i)) I) I)
        (x (cons c (take w i))))""",
    "tdisp": r"\x y s. (\w. tloop1 x y (at s zero) w (lh w) zero) (drop s (succ zero))",
    "yloop": r"""Y (\r h m a w n i.
        (\o. flag o (\z. tloop3 (snd o) a w n i i)
                    (\z. numeq i n (\z. o) (\z. r h m a w n (succ i)) I) I)
        (h (cons m (take w i))))""",
    "lift1": r"\z x. pair true (z (at x zero))",
    "lift2": r"\z x. pair true (lift1 (z (at x zero)))",
    "lift3": r"\z x. pair true (lift2 (z (at x zero)))",
    "ydisp": r"\h m s. (\w. yloop h m (at s zero) w (lh w) zero) (drop s (succ zero))",
}

BUILD_FUEL = 10**9  # compilation inside nested extensions is costly


class StdKit:
    """Lazily compiled derived combinators for one PCA, plus host helpers
    that build and take apart codes by evaluation."""

    def __init__(self, pca: Pca):
        self.pca = pca
        self._cache: dict[str, Element] = {}
        self._numerals: list[Element] = []
        self._building: set[str] = set()

    # -- elements ---------------------------------------------------------

    def __getitem__(self, name: str) -> Element:
        e = self._cache.get(name)
        if e is None:
            if name in self._building:
                raise RecursionError(f"cyclic definition of {name}")
            self._building.add(name)
            try:
                e = self._build(name)
            finally:
                self._building.discard(name)
            self._cache[name] = e
        return e

    def __contains__(self, name: str) -> bool:
        return name in SOURCES

    def _build(self, name: str) -> Element:
        if name not in SOURCES:
            raise KeyError(name)
        return self.compile_source(SOURCES[name])

    def native(self, name: str) -> Element | None:
        """The model's own primitive called ``name``, if it has one."""
        return None

    def compile_source(self, text: str, fuel: int = BUILD_FUEL) -> Element:
        term = resolve(parse(text), self, self.pca.spare)
        return compile_term(self.pca, term, Meter(fuel))

    def term(self, text: str) -> Term:
        return resolve(parse(text), self, self.pca.spare)

    # -- Environment protocol used by the parser ----------------------------

    def lookup(self, name: str) -> Element | None:
        if name == "K":
            return self.pca.K
        if name == "S":
            return self.pca.S
        if name in SOURCES:
            return self[name]
        return None

    def numeral(self, n: int) -> Element:
        nums = self._numerals
        if not nums:
            nums.append(self["zero"])
        succ = self["succ"]
        while len(nums) <= n:
            nums.append(self.pca.app(succ, nums[-1], Meter(BUILD_FUEL)))
        return nums[n]

    def code(self, n: int) -> Element:
        raise ValueError(f"#{n}: numeric codes need the numeric model")

    def seq_term(self, items: list[Term]) -> Term:
        t: Term = Const(self["nil"])
        snoc = Const(self["snoc"])
        for item in items:
            t = App(App(snoc, t), item)
        return t

    # -- host-side coding ---------------------------------------------------

    def app2(self, f: Element, a: Element, b: Element, meter: Meter) -> Element:
        pca = self.pca
        return pca.app(pca.app(f, a, meter), b, meter)

    def pair(self, a: Element, b: Element, meter: Meter) -> Element:
        return self.app2(self["pair"], a, b, meter)

    def unpair(self, o: Element, meter: Meter) -> tuple[Element, Element]:
        """Split ``o`` into its components, or get stuck if ``o`` is not
        literally a pair."""
        pca = self.pca
        a = pca.app(self["fst"], o, meter)
        b = pca.app(self["snd"], o, meter)
        if not pca.equal(self.pair(a, b, meter), o):
            raise StuckError("machine output is not a pair")
        return a, b

    def boolean(self, e: Element) -> bool:
        if self.pca.equal(e, self["true"]):
            return True
        if self.pca.equal(e, self["false"]):
            return False
        raise StuckError("non-boolean flag")

    def unflag(self, o: Element, meter: Meter) -> tuple[bool, Element]:
        flag, payload = self.unpair(o, meter)
        return self.boolean(flag), payload

    def snoc(self, u: Element, a: Element, meter: Meter) -> Element:
        return self.app2(self["snoc"], u, a, meter)

    def seq(self, items, meter: Meter | None = None) -> Element:
        meter = meter or Meter(BUILD_FUEL)
        u = self["nil"]
        for x in items:
            u = self.snoc(u, x, meter)
        return u

    def decode_num(self, e: Element, meter: Meter | None = None, limit: int = 10**5) -> int:
        meter = meter or Meter(BUILD_FUEL)
        pca = self.pca
        for n in range(limit):
            if self.boolean(pca.app(self["iszero"], e, meter)):
                return n
            e = pca.app(self["pred"], e, meter)
        raise StuckError("numeral too large")

    def decode_seq(self, u: Element, meter: Meter | None = None) -> list:
        meter = meter or Meter(BUILD_FUEL)
        n = self.decode_num(self.pca.app(self["lh"], u, meter), meter)
        return [self.app2(self["at"], u, self.numeral(i), meter) for i in range(n)]


# ---------------------------------------------------------------------------
# Enriched term model


def _structural(pca: TermPca):
    """Decoders over the literal shapes the enriched primitives build."""
    kit = pca.kit
    false, zero = kit["false"], kit["zero"]

    def num(e: Node):
        n = 0
        while e is not zero:
            if e.head != "pair" or len(e.args) != 2 or e.args[0] is not false:
                return None
            e = e.args[1]
            n += 1
        return n

    def seq(u: Node):
        if u.head != "pair" or len(u.args) != 2:
            return None
        n = num(u.args[0])
        if n is None:
            return None
        items = []
        spine = u.args[1]
        for _ in range(n):
            if spine.head != "pair" or len(spine.args) != 2:
                return None
            items.append(spine.args[0])
            spine = spine.args[1]
        if spine is not zero:
            return None
        items.reverse()
        return items

    def numeral(n: int) -> Node:
        return kit.numeral(n)

    def encode(items) -> Node:
        spine = zero
        for x in items:
            spine = mk("pair", (x, spine))
        return mk("pair", (numeral(len(items)), spine))

    return num, seq, numeral, encode


def lifted_booleans(pca: Pca) -> tuple[Element, Element]:
    """``true``/``false`` of any extension ``A[f]``: ``lift2`` of A's."""
    cached = pca.__dict__.get("_lifted_booleans")
    if cached is None:
        kit = pca.kit
        m = Meter(BUILD_FUEL)
        cached = tuple(pca.app(kit["lift2"], kit[b], m) for b in ("true", "false"))
        pca._lifted_booleans = cached
    return cached


def enriched_primitives() -> list[Primitive]:
    """Primitives whose contractions realize stdlib equations in one step.

    Ill-formed arguments (a numeral or sequence that is not one) make the
    application undefined: the rule burns the remaining budget.
    """

    def decoders(pca):
        d = getattr(pca, "_decoders", None)
        if d is None:
            d = pca._decoders = _structural(pca)
        return d

    def pair_rule(pca, args, meter):
        a, b, z = args
        return ("c", z, a, lambda x: ("t", x, b))

    def fst_rule(pca, args, meter):
        return ("t", args[0], pca.kit["true"])

    def snd_rule(pca, args, meter):
        return ("t", args[0], pca.kit["false"])

    def y_rule(pca, args, meter):
        f, a = args
        return ("c", f, mk("Y", (f,)), lambda x: ("t", x, a))

    def flag_rule(pca, args, meter):
        o = args[0]
        kit = pca.kit
        if o.head == "pair" and len(o.args) == 2:
            if o.args[0] is kit["true"]:
                return ("v", kit["true"])
            if o.args[0] is kit["false"]:
                return ("v", kit["false"])
        meter.exhaust()

    def numeq_rule(pca, args, meter):
        num = decoders(pca)[0]
        n, m = num(args[0]), num(args[1])
        if n is None or m is None:
            meter.exhaust()
        meter.spend(1 + n + m)
        return ("v", pca.kit["true" if n == m else "false"])

    def seq_op(fn, kinds):
        # kinds: one letter per argument -- s(equence), n(umeral), e(lement)
        def rule(pca, args, meter):
            num, seq, numeral, encode = decoders(pca)
            decoded = []
            walked = 0
            for kind, a in zip(kinds, args):
                v = a if kind == "e" else num(a) if kind == "n" else seq(a)
                if v is None:
                    meter.exhaust()
                if kind != "e":
                    walked += v if kind == "n" else 2 * len(v)
                decoded.append(v)
            # host-side decoding is paid for, so fuel bounds real work
            meter.spend(walked)
            out = fn(*decoded)
            if out is None:
                meter.exhaust()
            kind, value = out
            meter.spend(1 + (len(value) if kind == "seq" else 0))
            return ("v", encode(value) if kind == "seq" else value)

        return rule

    def at(u, i):
        return ("elem", u[i]) if i < len(u) else None

    def take(u, i):
        return ("seq", u[:i]) if i <= len(u) else None

    def drop(u, i):
        return ("seq", u[i:]) if i <= len(u) else None

    def slice_(u, i, j):
        return ("seq", u[i:j]) if i <= j <= len(u) else None

    def cat(u, v):
        return ("seq", u + v)

    def cons(a, u):
        return ("seq", [a] + u)

    def snoc_rule(pca, args, meter):
        u, a = args
        if u.head != "pair" or len(u.args) != 2:
            meter.exhaust()
        n = decoders(pca)[0](u.args[0])
        if n is None:
            meter.exhaust()
        meter.spend(1 + n)
        return ("v", mk("pair", (mk("pair", (pca.kit["false"], u.args[0])), mk("pair", (a, u.args[1])))))

    # -- dialogue dispatch ------------------------------------------------
    # A "level" describes how machines are applied: level 0 is application
    # in A; level 1 is application in A[f], simulated by forwarding the
    # machine's questions and reading answers from the stream ``u`` at a
    # cursor.  Continuations get (output, cursor) and return plans.

    def flag_of(o, true, false, meter):
        if o.head != "pair" or len(o.args) != 2 or o.args[0] not in (true, false):
            meter.exhaust()
        return o.args[0] is true

    def app_at(pca, level, p, a, u, cur, k, meter):
        encode = decoders(pca)[3]
        if level == 0:
            meter.spend(1)
            return ("c", p, a, lambda o: k(o, cur))
        true, false = pca.kit["true"], pca.kit["false"]

        def step(q):
            meter.spend(1 + q - cur)
            return ("c", p, encode([a] + u[cur:q]), lambda o: after(q, o))

        def after(q, o):
            if flag_of(o, true, false, meter):
                return k(o.args[1], q)
            # out of answers: the whole machine asks this question
            return ("v", o) if q == len(u) else step(q + 1)

        return step(cur)

    def scan(pca, level, machine, head, w, start, u, cur, done, meter):
        # run machine on [head] * w[start:i] for i = start, start+1, ...
        # until it answers; at the end of w, its question is the output
        encode = decoders(pca)[3]
        true, false = booleans_at(pca, level)

        def step(i, cur):
            meter.spend(i - start)
            return app_at(pca, level, machine, encode([head] + w[start:i]), u, cur,
                          lambda o, cur2: after(i, o, cur2), meter)

        def after(i, o, cur):
            if flag_of(o, true, false, meter):
                return done(i, o.args[1], o, cur)
            return finish(pca, level, o) if i == len(w) else step(i + 1, cur)

        return step(start, cur)

    def booleans_at(pca, level):
        kit = pca.kit
        if level == 0:
            return kit["true"], kit["false"]
        return lifted_booleans(pca)

    def finish(pca, level, o):
        # level 0 outputs o; level 1 answers its own dialogue with o
        return ("v", o if level == 0 else mk("pair", (pca.kit["true"], o)))

    def dialogue_args(pca, s, meter):
        items = decoders(pca)[1](s)
        if not items:
            meter.exhaust()
        meter.spend(2 * len(items))
        return items[0], items[1:]

    def t_rule(level):
        def rule(pca, args, meter):
            x, y, s = args
            u: list = []
            if level:
                s, u = dialogue_args(pca, s, meter)
            c, w = dialogue_args(pca, s, meter)
            last = lambda k, _, o, cur: finish(pca, level, o)
            return scan(pca, level, x, c, w, 0, u, 0, lambda i, alpha, _, cur: scan(
                pca, level, y, c, w, i, u, cur, lambda j, beta, _, cur: scan(
                    pca, level, alpha, beta, w, j, u, cur, last, meter), meter), meter)

        return rule

    def y_disp_rule(level):
        def rule(pca, args, meter):
            h, m, s = args
            u: list = []
            if level:
                s, u = dialogue_args(pca, s, meter)
            a, w = dialogue_args(pca, s, meter)
            last = lambda k, _, o, cur: finish(pca, level, o)
            return scan(pca, level, h, m, w, 0, u, 0, lambda i, alpha, _, cur: scan(
                pca, level, alpha, a, w, i, u, cur, last, meter), meter)

        return rule

    return [
        Primitive("tdisp", 3, t_rule(0)),
        Primitive("ydisp", 3, y_disp_rule(0)),
        Primitive("ftdisp", 3, t_rule(1)),
        Primitive("fydisp", 3, y_disp_rule(1)),
        Primitive("pair", 3, pair_rule),
        Primitive("fst", 1, fst_rule),
        Primitive("snd", 1, snd_rule),
        Primitive("Y", 2, y_rule),
        Primitive("flag", 1, flag_rule),
        Primitive("numeq", 2, numeq_rule),
        Primitive("at", 2, seq_op(at, "sn")),
        Primitive("take", 2, seq_op(take, "sn")),
        Primitive("drop", 2, seq_op(drop, "sn")),
        Primitive("slice", 3, seq_op(slice_, "snn")),
        Primitive("cat", 2, seq_op(cat, "ss")),
        Primitive("cons", 2, seq_op(cons, "es")),
        Primitive("snoc", 2, snoc_rule),
    ]


class EnrichedKit(StdKit):
    def _build(self, name: str) -> Element:
        if name in self.pca.primitives:
            return mk(name)
        return super()._build(name)

    def native(self, name: str) -> Element | None:
        return mk(name) if name in self.pca.primitives else None


def term_pca(enriched: bool = True) -> TermPca:
    """The SK term model; ``enriched`` adds the stdlib primitives."""
    if not enriched:
        return TermPca(name="term-sk")
    pca = TermPca(enriched_primitives(), name="term")
    pca._kit = EnrichedKit(pca)
    return pca


class NumericKit(StdKit):
    """Kit of a numeric model: the codes of the underlying term kit."""

    def _build(self, name: str) -> Element:
        return self.pca.encode(self.pca.base.kit[name])

    def numeral(self, n: int) -> Element:
        return self.pca.encode(self.pca.base.kit.numeral(n))

    def native(self, name: str) -> Element | None:
        e = self.pca.base.kit.native(name)
        return None if e is None else self.pca.encode(e)

    def code(self, n: int) -> Element:
        return n


def numeric_pca(enriched: bool = True, base: TermPca | None = None):
    from .kernel import NumericPca

    pca = NumericPca(base if base is not None else term_pca(enriched))
    pca._kit = NumericKit(pca)
    return pca


# ---------------------------------------------------------------------------
# Law checks


def spine_decode(pca: Pca, u: Element, fuel: int = 10**5) -> list:
    """Decode a sequence with projections only, independently of ``at``."""
    kit = pca.kit
    m = Meter(fuel)
    n = kit.decode_num(pca.app(kit["fst"], u, m), m)
    spine = pca.app(kit["snd"], u, m)
    items = []
    for _ in range(n):
        items.append(pca.app(kit["fst"], spine, m))
        spine = pca.app(kit["snd"], spine, m)
    items.reverse()
    return items


def check_laws(pca: Pca, samples: int, seed: int, fuel: int, fix_samples: int = 100):
    """Every defining equation of the kit on sampled instances."""
    import random

    from .kernel import Report, Value, eval_apps, kleene_agree, show_result

    kit = pca.kit
    rng = random.Random(seed)
    sh = pca.show
    report = Report()
    report.note(f"{pca.name}: stdlib equations, undefined means not defined within fuel={fuel}")
    els = [pca.sample(rng) for _ in range(3 * samples)]
    trip = [tuple(els[3 * i:3 * i + 3]) for i in range(samples)]
    num = kit.numeral

    def ev(head, *args):
        return eval_apps(pca, kit[head] if isinstance(head, str) else head, list(args), fuel)

    def law(name, cases, n=samples):
        """``cases`` yields (lhs result, expected element, description)."""
        bad = None
        for res, want, desc in cases:
            if not (isinstance(res, Value) and pca.equal(res.element, want)):
                bad = f"{desc} -> {show_result(pca, res)}, expected {sh(want)}"
                break
        report.record(name, n, seed, bad)

    T, F = kit["true"], kit["false"]
    law("if-true", ((ev("if", T, a, b), a, f"if true {sh(a)} {sh(b)}") for a, b, _ in trip))
    law("if-false", ((ev("if", F, a, b), b, f"if false {sh(a)} {sh(b)}") for a, b, _ in trip))
    bools = [rng.choice((True, False)) for _ in range(samples)]
    law("not", ((ev("not", T if b else F), F if b else T, f"not {b}") for b in bools))
    law("not-involution", ((ev("not", ev("not", T if b else F).element), T if b else F, f"not (not {b})")
                           for b in bools))
    law("fst-pair", ((ev("fst", ev("pair", a, b).element), a, f"fst (pair {sh(a)} {sh(b)})")
                     for a, b, _ in trip))
    law("snd-pair", ((ev("snd", ev("pair", a, b).element), b, f"snd (pair {sh(a)} {sh(b)})")
                     for a, b, _ in trip))

    ns = [rng.randint(0, 8) for _ in range(samples)]
    ms = [rng.randint(0, 8) for _ in range(samples)]
    law("succ", ((ev("succ", num(n)), num(n + 1), f"succ {n}") for n in ns))
    law("pred", ((ev("pred", num(n + 1)), num(n), f"pred {n + 1}") for n in ns))
    law("iszero", ((ev("iszero", num(n)), T if n == 0 else F, f"iszero {n}") for n in ns))
    law("numeq", ((ev("numeq", num(n), num(m)), T if n == m else F, f"numeq {n} {m}")
                  for n, m in zip(ns, ms)))
    law("add", ((ev("add", num(n), num(m)), num(n + m), f"add {n} {m}") for n, m in zip(ns, ms)))
    law("mul", ((ev("mul", num(n), num(m)), num(n * m), f"mul {n} {m}") for n, m in zip(ns, ms)))
    law("primrec-zero", ((ev("primrec", g, h, num(0)), g, f"primrec {sh(g)} {sh(h)} 0")
                         for g, h, _ in trip))

    bad = None
    for (g, h, _), n in zip(trip, ns):
        ok, left, right = kleene_agree(
            pca, lambda f: eval_apps(pca, kit["primrec"], [g, h, num(n + 1)], f),
            lambda f: _then(pca, eval_apps(pca, kit["primrec"], [g, h, num(n)], f),
                            lambda r: eval_apps(pca, h, [num(n), r], f)), fuel)
        if not ok:
            bad = (f"primrec {sh(g)} {sh(h)} {n + 1} -> {show_result(pca, left)} but "
                   f"h {n} (primrec g h {n}) -> {show_result(pca, right)}")
            break
    report.record("primrec-succ", samples, seed, bad)

    fs = [pca.sample(rng) for _ in range(fix_samples)]
    args = [pca.sample(rng) for _ in range(fix_samples)]
    bad = None
    for f_ in fs:
        if not isinstance(ev("Y", f_), Value):
            bad = f"Y {sh(f_)} undefined"
            break
    report.record("Y-defined", fix_samples, seed, bad)
    bad = None
    for f_, a in zip(fs, args):
        def rhs(fu, f_=f_, a=a):
            yf = eval_apps(pca, kit["Y"], [f_], fu)
            return _then(pca, yf, lambda v: eval_apps(pca, f_, [v, a], fu))

        ok, left, right = kleene_agree(pca, lambda fu, f_=f_, a=a: eval_apps(pca, kit["Y"], [f_, a], fu),
                                       rhs, fuel)
        if not ok:
            bad = f"Y {sh(f_)} {sh(a)} -> {show_result(pca, left)} but f (Y f) a -> {show_result(pca, right)}"
            break
    report.record("Y-unfold", fix_samples, seed, bad)
    fact = kit.compile_source(r"Y (\r n. iszero n (\z. succ zero) (\z. mul n (r (pred n))) I)")
    law("Y-factorial", [(ev(fact, num(4)), num(24), "fact 4")], n=1)

    # sequences, against host lists
    lists = [[pca.sample(rng) for _ in range(rng.randint(0, 6))] for _ in range(samples)]
    others = [[pca.sample(rng) for _ in range(rng.randint(0, 6))] for _ in range(samples)]
    enc = [kit.seq(xs) for xs in lists]
    enc2 = [kit.seq(xs) for xs in others]

    def seq_law(name, compute):
        bad = None
        for xs, u, ys, v in zip(lists, enc, others, enc2):
            got, want, desc = compute(xs, u, ys, v)
            if got is None:
                continue
            if not isinstance(got, Value):
                bad = f"{desc} -> {show_result(pca, got)}"
                break
            try:
                items = spine_decode(pca, got.element)
            except Exception:
                items = None
            if items is None or len(items) != len(want) or not all(map(pca.equal, items, want)):
                bad = f"{desc} -> {sh(got.element)}"
                break
        report.record(name, samples, seed, bad)

    bad = None
    for xs, u in zip(lists, enc):
        items = spine_decode(pca, u)
        if len(items) != len(xs) or not all(map(pca.equal, items, xs)):
            bad = f"seq of {len(xs)} items decodes to {len(items)}"
            break
    report.record("seq-roundtrip", samples, seed, bad)
    law("lh", ((ev("lh", u), num(len(xs)), f"lh of {len(xs)} items") for xs, u in zip(lists, enc)))
    idx = [rng.randrange(len(xs)) if xs else None for xs in lists]
    law("at", ((ev("at", u, num(i)), xs[i], f"at u {i}") for xs, u, i in zip(lists, enc, idx)
               if i is not None))
    cut = [(rng.randint(0, len(xs)), rng.randint(0, len(xs))) for xs in lists]
    cuts = {id(xs): sorted(c) for xs, c in zip(lists, cut)}
    seq_law("take", lambda xs, u, ys, v: (ev("take", u, num(cuts[id(xs)][1])), xs[:cuts[id(xs)][1]],
                                          f"take u {cuts[id(xs)][1]}"))
    seq_law("drop", lambda xs, u, ys, v: (ev("drop", u, num(cuts[id(xs)][0])), xs[cuts[id(xs)][0]:],
                                          f"drop u {cuts[id(xs)][0]}"))
    seq_law("slice", lambda xs, u, ys, v: (ev("slice", u, *map(num, cuts[id(xs)])),
                                           xs[slice(*cuts[id(xs)])], f"slice u {cuts[id(xs)]}"))
    seq_law("cat", lambda xs, u, ys, v: (ev("cat", u, v), xs + ys, f"cat of {len(xs)} and {len(ys)}"))
    seq_law("cons", lambda xs, u, ys, v: (ev("cons", ys[0], u), ys[:1] + xs, "cons")
            if ys else (None, None, None))
    seq_law("snoc", lambda xs, u, ys, v: (ev("snoc", u, ys[0]), xs + ys[:1], "snoc")
            if ys else (None, None, None))
    bad = None
    for u, v, w in zip(enc, enc2, enc[1:] + enc[:1]):
        left = ev("cat", ev("cat", u, v).element, w)
        right = ev("cat", u, ev("cat", v, w).element)
        if not (isinstance(left, Value) and isinstance(right, Value)
                and pca.equal(left.element, right.element)):
            bad = "cat (cat u v) w differs from cat u (cat v w)"
            break
    report.record("cat-associative", samples, seed, bad)
    return report


def _then(pca, res, k):
    from .kernel import Value

    return k(res.element) if isinstance(res, Value) else res
