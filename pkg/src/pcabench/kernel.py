"""Fuel-bounded partial application over pluggable PCA models.

Two base models live here:

* ``TermPca`` -- closed combinator terms in weak normal form.  A normal form
  is a constant applied to fewer arguments than its arity; elements are
  hash-consed so equality is identity.
* ``NumericPca`` -- the bijective Goedel-coded image of a term model, whose
  carrier is the natural numbers.

Application is strict: ``S a b c`` evaluates ``a c`` and ``b c`` before
applying one to the other, so a compound term is defined only when all of
its subterms are.  Divergence surfaces as :class:`FuelError` once the step
budget runs out.
"""

from __future__ import annotations

import random
import weakref
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice
from typing import Any, Callable, Iterable

Element = Any

MEMO_LIMIT = 400_000


# ---------------------------------------------------------------------------
# Outcomes


class Undefined(Exception):
    """Base class for every way an application can fail to produce a value."""


class FuelError(Undefined):
    pass


class StuckError(Undefined):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class OutsideDomainError(Undefined):
    def __init__(self, query: Element):
        super().__init__("query outside oracle domain")
        self.query = query


@dataclass(frozen=True)
class Value:
    element: Element


@dataclass(frozen=True)
class FuelExhausted:
    pass


@dataclass(frozen=True)
class Stuck:
    reason: str


@dataclass(frozen=True)
class OutsideDomain:
    query: Element


AppResult = Value | FuelExhausted | Stuck | OutsideDomain


def outcome_of(exc: Undefined) -> AppResult:
    if isinstance(exc, FuelError):
        return FuelExhausted()
    if isinstance(exc, OutsideDomainError):
        return OutsideDomain(exc.query)
    return Stuck(exc.reason)


class Meter:
    """A shared, decreasing step budget."""

    __slots__ = ("left",)

    def __init__(self, fuel: int):
        if fuel < 0:
            raise ValueError("fuel must be nonnegative")
        self.left = fuel

    def spend(self, n: int = 1) -> None:
        if self.left < n:
            self.left = 0
            raise FuelError()
        self.left -= n

    def exhaust(self) -> None:
        self.left = 0
        raise FuelError()


# ---------------------------------------------------------------------------
# Abstract PCA


class Pca:
    """A carrier with partial application and distinguished ``K`` and ``S``.

    Subclasses implement ``_app``.  ``app`` wraps it with a memo table that
    replays the recorded cost of a previous run, so caching never changes
    what a given budget can or cannot reach.
    """

    name = "pca"
    K: Element
    S: Element

    def __init__(self) -> None:
        self._memo: dict = {}
        self._kit = None

    # -- application ------------------------------------------------------

    def app(self, a: Element, b: Element, meter: Meter) -> Element:
        key = (a, b)
        left = meter.left
        hit = self._memo.get(key)
        if hit is not None:
            kind, cost, payload = hit
            if kind == "v":
                if cost <= left:
                    meter.left = left - cost
                    return payload
                meter.exhaust()
            elif kind == "x":
                if cost <= left:
                    meter.left = left - cost
                    raise payload
                meter.exhaust()
            elif left <= cost:
                meter.exhaust()
        try:
            result = self._app(a, b, meter)
        except FuelError:
            self._remember(key, ("f", left, None))
            raise
        except Undefined as exc:
            self._remember(key, ("x", left - meter.left, exc))
            raise
        self._remember(key, ("v", left - meter.left, result))
        return result

    def _remember(self, key, entry) -> None:
        memo = self._memo
        if len(memo) >= MEMO_LIMIT:
            # evict the oldest quarter; dicts iterate in insertion order
            for old in list(islice(memo, MEMO_LIMIT // 4)):
                del memo[old]
        memo[key] = entry

    def _app(self, a: Element, b: Element, meter: Meter) -> Element:
        raise NotImplementedError

    # -- carrier ----------------------------------------------------------

    def equal(self, a: Element, b: Element) -> bool:
        return a == b

    def sample(self, rng: random.Random) -> Element:
        raise NotImplementedError

    def show(self, e: Element) -> str:
        return repr(e)

    def spare(self, e: Element) -> int:
        """How many more arguments ``e`` accepts with a guaranteed value.

        Zero is always sound; models override it to let bracket abstraction
        use its K-shortcut on more subterms.
        """
        return 0

    @property
    def kit(self):
        if self._kit is None:
            from .stdlib import StdKit

            self._kit = StdKit(self)
        return self._kit


def apply(pca: Pca, a: Element, b: Element, fuel: int) -> AppResult:
    """Apply ``a`` to ``b`` within ``fuel`` steps."""
    try:
        return Value(pca.app(a, b, Meter(fuel)))
    except Undefined as exc:
        return outcome_of(exc)


def run_apps(pca: Pca, head: Element, args: Iterable[Element], meter: Meter) -> Element:
    for arg in args:
        head = pca.app(head, arg, meter)
    return head


def eval_apps(pca: Pca, head: Element, args: list, fuel: int) -> AppResult:
    """Left-associated ``head a1 ... an`` sharing a single budget."""
    try:
        return Value(run_apps(pca, head, args, Meter(fuel)))
    except Undefined as exc:
        return outcome_of(exc)


# ---------------------------------------------------------------------------
# Kleene equality at a shared budget

RETRY_FACTORS = (4, 16, 64)


def kleene_agree(pca: Pca, lhs: Callable[[int], AppResult], rhs: Callable[[int], AppResult],
                 fuel: int) -> tuple[bool, AppResult, AppResult]:
    """Compare two fuel-parametric computations under ``≃``.

    Both sides run at ``fuel``.  When exactly one side runs out of fuel while
    the other produced a value, the starved side is rerun with a larger
    budget (the two sides of an equation rarely cost the same); if it still
    has no value they disagree.  Stuck and outside-domain outcomes count as
    undefined.
    """
    left, right = lhs(fuel), rhs(fuel)
    for factor in RETRY_FACTORS:
        lv, rv = isinstance(left, Value), isinstance(right, Value)
        if lv == rv:
            break
        if lv and isinstance(right, FuelExhausted):
            right = rhs(fuel * factor)
        elif rv and isinstance(left, FuelExhausted):
            left = lhs(fuel * factor)
        else:
            break
    lv, rv = isinstance(left, Value), isinstance(right, Value)
    if lv and rv:
        return pca.equal(left.element, right.element), left, right
    return lv == rv, left, right


def show_result(pca: Pca, r: AppResult) -> str:
    if isinstance(r, Value):
        return pca.show(r.element)
    if isinstance(r, FuelExhausted):
        return "fuel-exhausted"
    if isinstance(r, OutsideDomain):
        return "outside-domain " + pca.show(r.query)
    return "stuck " + r.reason


# ---------------------------------------------------------------------------
# Reports


COUNTEREXAMPLE_LIMIT = 600


@dataclass
class Report:
    """Line-oriented check results: ``PASS <law> ...`` / ``FAIL <law> ...``."""

    lines: list[str] = field(default_factory=list)
    failures: int = 0

    def record(self, law: str, samples: int, seed: Any, counterexample: str | None = None) -> bool:
        if counterexample is None:
            self.lines.append(f"PASS {law} n={samples} seed={seed}")
            return True
        self.failures += 1
        if len(counterexample) > COUNTEREXAMPLE_LIMIT:
            counterexample = counterexample[:COUNTEREXAMPLE_LIMIT] + " ..."
        self.lines.append(f"FAIL {law} counterexample: {counterexample}")
        return False

    def note(self, text: str) -> None:
        self.lines.append(f"# {text}")

    def extend(self, other: "Report") -> None:
        self.lines.extend(other.lines)
        self.failures += other.failures

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def __str__(self) -> str:
        return "\n".join(self.lines)


def check_axioms(pca: Pca, samples: int, seed: int, fuel: int,
                 sampler: Callable[[random.Random], Element] | None = None) -> Report:
    """Sample the three K/S axiom schemata and report the first violation."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    draw = sampler or pca.sample
    rng = random.Random(seed)
    triples = [(draw(rng), draw(rng), draw(rng)) for _ in range(samples)]
    report = Report()
    report.note(f"{pca.name}: undefined means not defined within fuel={fuel}")
    sh = pca.show
    K, S = pca.K, pca.S

    bad = None
    for a, b, _ in triples:
        r = eval_apps(pca, K, [a], fuel)
        s = eval_apps(pca, K, [a, b], fuel)
        if not isinstance(r, Value) or not (isinstance(s, Value) and pca.equal(s.element, a)):
            bad = f"a={sh(a)} b={sh(b)} K a b -> {show_result(pca, s)}"
            break
    report.record("K-axiom", samples, seed, bad)

    bad = None
    for a, b, _ in triples:
        r1 = eval_apps(pca, S, [a], fuel)
        r2 = eval_apps(pca, S, [a, b], fuel)
        if not (isinstance(r1, Value) and isinstance(r2, Value)):
            bad = f"a={sh(a)} b={sh(b)} S a b -> {show_result(pca, r2)}"
            break
    report.record("S-defined", samples, seed, bad)

    bad = None
    for a, b, c in triples:
        def lhs(f, a=a, b=b, c=c):
            return eval_apps(pca, S, [a, b, c], f)

        def rhs(f, a=a, b=b, c=c):
            try:
                m = Meter(f)
                return Value(pca.app(pca.app(a, c, m), pca.app(b, c, m), m))
            except Undefined as exc:
                return outcome_of(exc)

        ok, left, right = kleene_agree(pca, lhs, rhs, fuel)
        if not ok:
            bad = (f"a={sh(a)} b={sh(b)} c={sh(c)} S a b c -> {show_result(pca, left)}"
                   f" but a c (b c) -> {show_result(pca, right)}")
            break
    report.record("S-axiom", samples, seed, bad)
    return report


# ---------------------------------------------------------------------------
# Term model


class Node:
    """A hash-consed normal form: ``head`` applied to ``args``."""

    __slots__ = ("head", "args", "size", "__weakref__")

    def __init__(self, head: str, args: tuple):
        self.head = head
        self.args = args
        self.size = 1 + sum(a.size for a in args)

    def __repr__(self) -> str:
        return f"Node({render(self)})"


_interned: "weakref.WeakValueDictionary[tuple, Node]" = weakref.WeakValueDictionary()


_refs = _interned.data  # direct reads skip the slow Python-level get()


def mk(head: str, args: tuple = ()) -> Node:
    key = (head, args)
    ref = _refs.get(key)
    if ref is not None:
        node = ref()
        if node is not None:
            return node
    node = Node(head, args)
    _interned[key] = node
    return node


SHOW_LIMIT = 50_000


def render(e: Node) -> str:
    if e.size > SHOW_LIMIT:
        return f"<term of size {e.size}>"
    parts: list[str] = []

    def go(n: Node, nested: bool) -> None:
        if not n.args:
            parts.append(n.head)
            return
        if nested:
            parts.append("(")
        parts.append(n.head)
        for a in n.args:
            parts.append(" ")
            go(a, True)
        if nested:
            parts.append(")")

    go(e, False)
    return "".join(parts)


@dataclass(frozen=True)
class Primitive:
    """A constant with a host-defined contraction rule.

    ``rule(pca, args, meter)`` returns a plan: ``("v", elem)`` for a value,
    ``("t", x, y)`` to continue with ``x y`` in tail position, or
    ``("c", x, y, k)`` to evaluate ``x y`` and pass the result to ``k``,
    which returns the next plan.
    """

    name: str
    arity: int
    rule: Callable


def _k_rule(pca, args, meter):
    return ("v", args[0])


def _s_rule(pca, args, meter):
    a, b, c = args
    return ("c", a, c, lambda x: ("c", b, c, lambda y: ("t", x, y)))


BASE_PRIMITIVES = (Primitive("K", 2, _k_rule), Primitive("S", 3, _s_rule))


class TermPca(Pca):
    """Weak normal forms over ``K``, ``S`` and optional extra primitives."""

    def __init__(self, extra: Iterable[Primitive] = (), name: str = "term"):
        super().__init__()
        self.name = name
        self.primitives: dict[str, Primitive] = {}
        for p in (*BASE_PRIMITIVES, *extra):
            if p.name in self.primitives:
                raise ValueError(f"duplicate primitive {p.name}")
            self.primitives[p.name] = p
        self.K = mk("K")
        self.S = mk("S")
        self.sample_weights = {n: (6 if n in ("K", "S") else 1) for n in self.primitives}

    def constant(self, name: str) -> Node:
        return mk(name)

    def spare(self, e: Node) -> int:
        return self.primitives[e.head].arity - len(e.args) - 1

    def show(self, e: Node) -> str:
        return render(e)

    def _app(self, a: Node, b: Node, meter: Meter) -> Node:
        # Explicit continuation stack.  Frames: ("m", key, fuel_at_entry)
        # memoizes a nested application, ("s1", b, c) and ("s2", x) sequence
        # the S rule, ("k", cont) resumes a primitive plan.  K and S are
        # inlined; the budget lives in ``fuel`` and is synced to ``meter``
        # around primitive rules and on exit.
        prims = self.primitives
        memo = self._memo
        remember = self._remember
        stack: list = []
        push = stack.append
        pop = stack.pop
        fuel = meter.left
        x, y = a, b
        try:
            while True:
                # -- evaluate x y --------------------------------------------
                key = (x, y)
                hit = memo.get(key)
                if hit is not None and hit[0] == "v" and hit[1] <= fuel:
                    fuel -= hit[1]
                    value = hit[2]
                else:
                    if hit is not None and (hit[0] == "v" or fuel <= hit[1]):
                        fuel = 0
                        raise FuelError()
                    push(("m", key, fuel))
                    if fuel < 1:
                        fuel = 0
                        raise FuelError()
                    fuel -= 1
                    head = x.head
                    xargs = x.args
                    if head == "S":
                        if len(xargs) == 2:
                            push(("s1", xargs[1], y))
                            x, y = xargs[0], y
                            continue
                        value = mk("S", xargs + (y,))
                    elif head == "K":
                        value = xargs[0] if xargs else mk("K", (y,))
                    else:
                        prim = prims[head]
                        args = xargs + (y,)
                        if len(args) < prim.arity:
                            value = mk(head, args)
                        else:
                            meter.left = fuel
                            plan = prim.rule(self, args, meter)
                            fuel = meter.left
                            if plan[0] != "v":
                                if plan[0] == "c":
                                    push(("k", plan[3]))
                                x, y = plan[1], plan[2]
                                continue
                            value = plan[1]
                # -- return value to the continuation -------------------------
                while True:
                    if not stack:
                        meter.left = fuel
                        return value
                    frame = pop()
                    kind = frame[0]
                    if kind == "m":
                        remember(frame[1], ("v", frame[2] - fuel, value))
                        continue
                    if kind == "s1":
                        push(("s2", value))
                        x, y = frame[1], frame[2]
                        break
                    if kind == "s2":
                        x, y = frame[1], value
                        break
                    meter.left = fuel
                    plan = frame[1](value)
                    fuel = meter.left
                    if plan[0] == "v":
                        value = plan[1]
                        continue
                    if plan[0] == "c":
                        push(("k", plan[3]))
                    x, y = plan[1], plan[2]
                    break
        except FuelError:
            meter.left = 0
            # innermost first, so eviction drops the inner frames before
            # the outer keys that callers are likely to ask about again
            for frame in reversed(stack):
                if frame[0] == "m":
                    remember(frame[1], ("f", frame[2], None))
            raise

    def app(self, a: Node, b: Node, meter: Meter) -> Node:
        # _app maintains the memo itself, including for the outer pair.
        return self._app(a, b, meter)

    def sample(self, rng: random.Random, leaves: int = 7, fuel: int = 2000) -> Node:
        names = list(self.sample_weights)
        weights = [self.sample_weights[n] for n in names]
        while True:
            n = rng.randint(1, leaves)
            items = [mk(c) for c in rng.choices(names, weights, k=n)]
            try:
                meter = Meter(fuel)
                while len(items) > 1:
                    i = rng.randrange(len(items) - 1)
                    items[i:i + 2] = [self.app(items[i], items[i + 1], meter)]
                return items[0]
            except Undefined:
                continue


# ---------------------------------------------------------------------------
# Numeric model


class NumericPca(Pca):
    """Natural-number codes of a term model's normal forms.

    Codes enumerate normal forms by tree size, then by head shape, then
    lexicographically by arguments, which is a bijection onto the naturals.
    Application decodes, applies in the term model, and encodes; the
    encoding charges the result's tree size to the budget.
    """

    def __init__(self, base: TermPca | None = None, name: str = "numeric"):
        super().__init__()
        self.name = name
        self.base = base if base is not None else TermPca()
        prims = list(self.base.primitives.values())
        self.shapes = [(p.name, k) for p in prims for k in range(p.arity)]
        self.shapes.sort(key=lambda s: s[1])
        self._rank = lru_cache(maxsize=200_000)(self._rank_uncached)
        self._unrank = lru_cache(maxsize=200_000)(self._unrank_uncached)
        self.K = self.encode(self.base.K)
        self.S = self.encode(self.base.S)

    # -- counting ---------------------------------------------------------

    @lru_cache(maxsize=None)
    def count(self, size: int) -> int:
        """Number of normal forms with exactly ``size`` nodes."""
        if size < 1:
            return 0
        return sum(self.tuples(k, size - 1) for _, k in self.shapes)

    @lru_cache(maxsize=None)
    def tuples(self, k: int, total: int) -> int:
        if k == 0:
            return 1 if total == 0 else 0
        return sum(self.count(i) * self.tuples(k - 1, total - i) for i in range(1, total + 1))

    @lru_cache(maxsize=None)
    def below(self, size: int) -> int:
        return sum(self.count(s) for s in range(1, size))

    # -- ranking ----------------------------------------------------------

    def encode(self, e: Node) -> int:
        return self.below(e.size) + self._rank(e)

    def decode(self, code: int) -> Node:
        if code < 0:
            raise ValueError("codes are nonnegative")
        size = 1
        while self.below(size + 1) <= code:
            size += 1
        return self._unrank(size, code - self.below(size))

    def _rank_uncached(self, e: Node) -> int:
        offset = 0
        k = len(e.args)
        for shape in self.shapes:
            if shape == (e.head, k):
                break
            offset += self.tuples(shape[1], e.size - 1)
        return offset + self._tuple_rank(e.args, e.size - 1)

    def _tuple_rank(self, args: tuple, total: int) -> int:
        rank = 0
        for idx, a in enumerate(args):
            rest = len(args) - idx - 1
            for i in range(1, a.size):
                rank += self.count(i) * self.tuples(rest, total - i)
            rank += self._rank(a) * self.tuples(rest, total - a.size)
            total -= a.size
        return rank

    def _unrank_uncached(self, size: int, r: int) -> Node:
        for head, k in self.shapes:
            n = self.tuples(k, size - 1)
            if r < n:
                return mk(head, self._tuple_unrank(k, size - 1, r))
            r -= n
        raise ValueError("rank out of range")

    def _tuple_unrank(self, k: int, total: int, r: int) -> tuple:
        out = []
        for idx in range(k):
            rest = k - idx - 1
            i = 1
            while True:
                block = self.count(i) * self.tuples(rest, total - i)
                if r < block:
                    break
                r -= block
                i += 1
            per = self.tuples(rest, total - i)
            out.append(self._unrank(i, r // per))
            r %= per
            total -= i
        return tuple(out)

    # -- PCA surface ------------------------------------------------------

    def _app(self, a: int, b: int, meter: Meter) -> int:
        result = self.base.app(self.decode(a), self.decode(b), meter)
        meter.spend(result.size)
        return self.encode(result)

    def spare(self, e: int) -> int:
        return self.base.spare(self.decode(e))

    def sample(self, rng: random.Random) -> int:
        return self.encode(self.base.sample(rng))

    def show(self, e: int) -> str:
        return f"#{e}"
