"""Finite assemblies over a PCA and the checks that make sense on them.

An assembly is a finite set of labels, each with a nonempty finite set of
realizing elements.  Because everything is finite, the checks here are
exhaustive rather than sampled; the one exception is ``nabla``, whose "all
of A" is replaced by a designated finite carrier sample.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .bracket import parse, resolve, compile_term
from .kernel import Element, Meter, Pca, Report, Value, apply, show_result
from .oracle import OracleFn, compile_in, _Env

__all__ = ["Assembly", "AssemblyMap", "check_tracked", "gamma_sections", "nabla", "identity_map",
           "compose_maps", "check_adjunction", "adjunction_instances", "gamma_star", "transport",
           "check_functoriality", "coproduct", "check_coproduct_preservation",
           "check_representable_iff_tracked", "parse_assembly"]


@dataclass(eq=False)
class Assembly:
    pca: Pca
    existence: dict  # label -> tuple of elements
    name: str = "X"

    def __post_init__(self):
        for x, es in self.existence.items():
            if not es:
                raise ValueError(f"empty existence set at {x!r} in {self.name}")

    @property
    def labels(self) -> list:
        return list(self.existence)

    def realizes(self, x: Hashable, e: Element) -> bool:
        return any(self.pca.equal(e, a) for a in self.existence[x])

    def show(self) -> str:
        sh = self.pca.show
        return "\n".join(f"{x}: {', '.join(sh(a) for a in es)}" for x, es in self.existence.items())


@dataclass(eq=False)
class AssemblyMap:
    source: Assembly
    target: Assembly
    fn: Mapping
    tracker: Element
    name: str = "f"


def check_tracked(m: AssemblyMap, fuel: int, law: str | None = None) -> Report:
    """``tracker a`` is defined and realizes ``fn(x)`` for every ``a`` realizing ``x``."""
    pca = m.target.pca
    report = Report()
    bad = None
    n = 0
    for x, es in m.source.existence.items():
        y = m.fn.get(x)
        if y not in m.target.existence:
            bad = f"{m.name}({x}) = {y!r} is not a label of {m.target.name}"
            break
        for a in es:
            n += 1
            r = apply(pca, m.tracker, a, fuel)
            if not (isinstance(r, Value) and m.target.realizes(y, r.element)):
                bad = f"{m.name}: x={x} a={pca.show(a)} tracker a -> {show_result(pca, r)}"
                break
        if bad:
            break
    report.record(law or f"tracked[{m.name}]", n, "exhaustive", bad)
    return report


def _is_tracked(m: AssemblyMap, fuel: int) -> bool:
    return check_tracked(m, fuel).passed


def identity_map(asm: Assembly) -> AssemblyMap:
    return AssemblyMap(asm, asm, {x: x for x in asm.labels}, asm.pca.kit["I"], f"id_{asm.name}")


def compose_maps(g: AssemblyMap, f: AssemblyMap) -> AssemblyMap:
    """``g . f`` with tracker ``\\x. tg (tf x)``."""
    t = compile_in(f.source.pca, r"\x. tg (tf x)", tg=g.tracker, tf=f.tracker)
    return AssemblyMap(f.source, g.target, {x: g.fn[f.fn[x]] for x in f.source.labels}, t,
                       f"{g.name}.{f.name}")


# ---------------------------------------------------------------------------
# Gamma and nabla


def gamma_sections(asm: Assembly) -> frozenset:
    """Global sections: the underlying set."""
    return frozenset(asm.labels)


def nabla(labels: Iterable, carrier: Iterable[Element], pca: Pca, name: str = "nabla") -> Assembly:
    """Every label realized by every element of the carrier sample."""
    carrier = tuple(carrier)
    return Assembly(pca, {s: carrier for s in labels}, name)


def _functions(domain: list, codomain: list):
    for values in itertools.product(codomain, repeat=len(domain)):
        yield dict(zip(domain, values))


def check_adjunction(asm: Assembly, S: list, carrier: list[Element], fuel: int) -> Report:
    """Gamma -| nabla on one finite instance.

    ``carrier`` stands in for the whole of A and must contain every element
    realizing a label of ``asm``.  Checks that transposition is a bijection
    between functions ``Gamma X -> S`` and tracked maps ``X -> nabla S`` and
    that both triangle identities hold.
    """
    pca = asm.pca
    I = pca.kit["I"]
    for es in asm.existence.values():
        for a in es:
            if not any(pca.equal(a, c) for c in carrier):
                raise ValueError("carrier sample must contain the realizers of the assembly")
    nS = nabla(S, carrier, pca, f"nabla{{{','.join(map(str, S))}}}")
    X = asm.labels
    report = Report()
    where = f"|X|={len(X)} |S|={len(S)}"

    # every function transposes to a map tracked by I, and Gamma gives it back
    bad = None
    sets = list(_functions(X, S))
    tracked = 0
    for fn in sets:
        m = AssemblyMap(asm, nS, fn, I, "transpose")
        if _is_tracked(m, fuel):
            tracked += 1
        elif bad is None:
            bad = f"{where}: transpose of {fn} is not tracked by I"
        if bad is None and dict((x, m.fn[x]) for x in gamma_sections(asm)) != fn:
            bad = f"{where}: Gamma of the transpose of {fn} differs"
    if bad is None and tracked != len(sets):
        bad = f"{where}: {tracked} tracked maps for {len(sets)} functions"
    report.record(f"adjunction-bijection[{where}]", len(sets), "exhaustive", bad)

    # triangles: Gamma X -> Gamma nabla Gamma X -> Gamma X and nabla S -> nabla Gamma nabla S -> nabla S
    bad = None
    nX = nabla(X, carrier, pca, "nablaGammaX")
    unit = AssemblyMap(asm, nX, {x: x for x in X}, I, "unit")
    counit = {x: x for x in X}
    if not _is_tracked(unit, fuel):
        bad = f"{where}: unit not tracked"
    elif {x: counit[unit.fn[x]] for x in X} != {x: x for x in X}:
        bad = f"{where}: counit . Gamma(unit) is not the identity"
    report.record(f"triangle-left[{where}]", len(X), "exhaustive", bad)
    bad = None
    nnS = nabla(S, carrier, pca, "nablaGammaNablaS")
    unit_n = AssemblyMap(nS, nnS, {s: s for s in S}, I, "unit_nabla")
    back = AssemblyMap(nnS, nS, {s: s for s in S}, I, "nabla_counit")
    comp = compose_maps(back, unit_n)
    if not (_is_tracked(unit_n, fuel) and _is_tracked(back, fuel) and _is_tracked(comp, fuel)):
        bad = f"{where}: a triangle map is not tracked"
    elif comp.fn != {s: s for s in S}:
        bad = f"{where}: nabla(counit) . unit is not the identity"
    report.record(f"triangle-right[{where}]", len(S), "exhaustive", bad)
    return report


def adjunction_instances(pca: Pca, pool: list[Element], max_labels: int = 3, max_exist: int = 2,
                         max_codomain: int = 2):
    """All assemblies on up to ``max_labels`` labels with existence sets drawn
    from ``pool`` of size at most ``max_exist``, paired with codomains."""
    subsets = [c for k in range(1, max_exist + 1) for c in itertools.combinations(pool, k)]
    for n in range(1, max_labels + 1):
        labels = [f"x{i}" for i in range(n)]
        for choice in itertools.product(subsets, repeat=n):
            asm = Assembly(pca, dict(zip(labels, choice)))
            for k in range(1, max_codomain + 1):
                yield asm, [f"s{j}" for j in range(k)]


# ---------------------------------------------------------------------------
# gamma^*


def gamma_star(gamma, asm: Assembly) -> Assembly:
    """Same labels; each realizer replaced by all its images under ``gamma``."""
    B = gamma.target
    existence = {}
    for x, es in asm.existence.items():
        out: list = []
        for a in es:
            for b in gamma.map(a):
                if not any(B.equal(b, c) for c in out):
                    out.append(b)
        existence[x] = tuple(out)
    return Assembly(B, existence, f"{gamma.name}*{asm.name}")


def transport(gamma, m: AssemblyMap, source: Assembly | None = None,
              target: Assembly | None = None) -> AssemblyMap:
    """``gamma^* m``: the tracker becomes ``r . gamma(t)``."""
    B = gamma.target
    t = B.app(gamma.realizer, gamma.image(m.tracker), Meter(10**6))
    return AssemblyMap(source or gamma_star(gamma, m.source), target or gamma_star(gamma, m.target),
                       dict(m.fn), t, f"{gamma.name}*{m.name}")


def check_functoriality(gamma, f: AssemblyMap, g: AssemblyMap, fuel: int) -> Report:
    """Transported maps are tracked; identities and ``g . f`` are preserved."""
    report = Report()
    X, Y, Z = (gamma_star(gamma, a) for a in (f.source, f.target, g.target))
    gf, gg = transport(gamma, f, X, Y), transport(gamma, g, Y, Z)
    for m in (gf, gg):
        report.extend(check_tracked(m, fuel))
    gid = transport(gamma, identity_map(f.source), X, X)
    report.extend(check_tracked(gid, fuel, f"preserves-identity[{gamma.name}]"))
    comp = transport(gamma, compose_maps(g, f), X, Z)
    after = compose_maps(gg, gf)
    bad = None
    if comp.fn != after.fn:
        bad = "underlying functions of gamma*(g.f) and gamma*g . gamma*f differ"
    elif not (_is_tracked(comp, fuel) and _is_tracked(after, fuel)):
        bad = "a composite is not tracked"
    report.record(f"preserves-composition[{gamma.name}]", len(X.labels), "exhaustive", bad)
    return report


# ---------------------------------------------------------------------------
# Coproducts


def coproduct(X: Assembly, Y: Assembly, name: str | None = None) -> Assembly:
    """Tagged union; left realizers become ``pair true a``, right ones ``pair false a``."""
    pca = X.pca
    kit = pca.kit
    m = Meter(10**6)

    def tag(t, a):
        return pca.app(pca.app(kit["pair"], kit[t], m), a, m)

    existence = {("inl", x): tuple(tag("true", a) for a in es) for x, es in X.existence.items()}
    existence.update({("inr", y): tuple(tag("false", a) for a in es) for y, es in Y.existence.items()})
    return Assembly(pca, existence, name or f"{X.name}+{Y.name}")


def coproduct_comparisons(gamma, decider: Element, X: Assembly, Y: Assembly):
    """The two comparison maps between ``gamma*(X+Y)`` and ``gamma*X + gamma*Y``."""
    A, B = gamma.source, gamma.target
    img = gamma.image
    left = gamma_star(gamma, coproduct(X, Y))
    right = coproduct(gamma_star(gamma, X), gamma_star(gamma, Y))
    labels = {x: x for x in left.labels}
    r = gamma.realizer
    down = compile_in(B, r"\e. pair (d (r gfst e)) (r gsnd e)", d=decider, r=r,
                      gfst=img(A.kit["fst"]), gsnd=img(A.kit["snd"]))
    up = compile_in(B, r"\z. fst z (\w. r (r gpair gt) (snd z)) (\w. r (r gpair gf) (snd z)) I",
                    r=r, gpair=img(A.kit["pair"]), gt=img(A.kit["true"]), gf=img(A.kit["false"]))
    return (AssemblyMap(left, right, labels, down, "split"),
            AssemblyMap(right, left, labels, up, "merge"))


def check_coproduct_preservation(gamma, decider: Element, X: Assembly, Y: Assembly, fuel: int) -> Report:
    """``gamma*(X+Y)`` and ``gamma*X + gamma*Y`` are isomorphic via the
    identity on labels, tracked both ways."""
    split, merge = coproduct_comparisons(gamma, decider, X, Y)
    report = Report()
    tag = f"{gamma.name} on {X.name}+{Y.name}"
    report.extend(check_tracked(split, fuel, f"coproduct-split[{tag}]"))
    report.extend(check_tracked(merge, fuel, f"coproduct-merge[{tag}]"))
    return report


# ---------------------------------------------------------------------------
# Representability as a tracked map


def check_representable_iff_tracked(gamma, f: OracleFn, candidates: list[Element], fuel: int) -> Report:
    """For each candidate ``rf``: it represents ``f`` w.r.t. ``gamma`` iff it
    tracks ``f`` as a map from ``(dom f, gamma)`` to ``(A, gamma)`` restricted
    to the finite labels involved."""
    from .morphisms import check_representable

    A, B = gamma.source, gamma.target
    dom = f.domain()
    D = Assembly(B, {a: tuple(gamma.map(a)) for a in dom}, "dom")
    codomain = {a: tuple(gamma.map(a)) for a in dom}
    for a in dom:
        codomain.setdefault(f(a), tuple(gamma.map(f(a))))
    C = Assembly(B, codomain, "A")
    report = Report()
    bad = None
    verdicts = []
    for rf in candidates:
        rep = check_representable(gamma, f, rf, dom, None, fuel).passed
        tr = check_tracked(AssemblyMap(D, C, {a: f(a) for a in dom}, rf, f.name), fuel).passed
        verdicts.append(rep)
        if rep != tr:
            bad = f"candidate {B.show(rf)}: representable={rep} tracked={tr}"
            break
    report.record(f"representable-iff-tracked[{f.name}]", len(candidates), "exhaustive", bad)
    if bad is None and not any(verdicts):
        report.note("no candidate represents the oracle; only the negative direction was exercised")
    return report


# ---------------------------------------------------------------------------
# Text format


def _split_terms(text: str) -> list[str]:
    """Split on commas that are not inside brackets or parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def parse_assembly(text: str, pca: Pca, name: str = "X", fuel: int = 10**6, env=None) -> Assembly:
    """Lines ``label: t1, t2, ...``; blank lines and ``#`` comments are skipped."""
    env = env or _Env(pca.kit, {})
    existence: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if raw.lstrip().startswith("#") else raw.strip()
        if not line:
            continue
        label, sep, rest = line.partition(":")
        if not sep or not label.strip():
            raise ValueError(f"line {lineno}: expected '<label>: <term>, ...'")
        label = label.strip()
        if label in existence:
            raise ValueError(f"line {lineno}: duplicate label {label}")
        terms = [t for t in _split_terms(rest) if t]
        if not terms:
            raise ValueError(f"line {lineno}: empty existence set for {label}")
        try:
            existence[label] = tuple(compile_term(pca, resolve(parse(t), env, pca.spare), Meter(fuel))
                                     for t in terms)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return Assembly(pca, existence, name)
