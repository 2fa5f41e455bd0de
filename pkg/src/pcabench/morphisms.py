"""Applicative morphisms between PCAs, and witness checks built on them.

A morphism is a total, finitely multi-valued map on carriers together with a
realizer ``r`` in the target: whenever ``a a' = c`` in the source and
``b, b'`` are images of ``a, a'``, then ``r b b'`` is an image of ``c``.
Every check here samples; none proves anything.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .kernel import (Element, Meter, Pca, Report, Value, apply, eval_apps,
                     show_result)
from .oracle import (ExtendedPca, OracleFn, compile_in, eq_oracle, iota, lift_morphism, make_extension)

__all__ = ["ApplicativeMorphism", "identity_morphism", "compose_morphisms", "defined_pairs",
           "check_realizer", "check_preorder", "check_iso", "check_decidable",
           "check_representable", "turing_leq", "transitivity_witness", "eq_oracle",
           "carry_representer"]


@dataclass(eq=False)
class ApplicativeMorphism:
    source: Pca
    target: Pca
    map: Callable[[Element], tuple]
    realizer: Element
    decider: Element | None = None
    name: str = "gamma"
    parts: object = field(default=None, repr=False)

    def image(self, a: Element) -> Element:
        """Some element of ``map(a)``; raises if the map is not total at ``a``."""
        out = self.map(a)
        if not out:
            raise ValueError(f"{self.name} has empty image at {self.source.show(a)}")
        return out[0]

    def contains(self, a: Element, b: Element) -> bool:
        return any(self.target.equal(b, x) for x in self.map(a))


def _singleton(a):
    return (a,)


def identity_morphism(pca: Pca) -> ApplicativeMorphism:
    return ApplicativeMorphism(pca, pca, _singleton, compile_in(pca, r"\x y. x y"),
                               pca.kit["I"], name=f"id_{pca.name}")


def compose_morphisms(delta: ApplicativeMorphism, gamma: ApplicativeMorphism) -> ApplicativeMorphism:
    """``delta . gamma``: images are unions, the realizer runs ``r_delta`` twice."""
    if gamma.target is not delta.source:
        raise ValueError(f"cannot compose {delta.name} after {gamma.name}")
    C = delta.target

    def union(a):
        out: list = []
        for b in gamma.map(a):
            for c in delta.map(b):
                if not any(C.equal(c, x) for x in out):
                    out.append(c)
        return tuple(out)

    rd = delta.realizer
    realizer = compile_in(C, r"\x y. rd (rd g x) y", rd=rd, g=delta.image(gamma.realizer))
    decider = None
    if gamma.decider is not None and delta.decider is not None:
        # images of true_A land in delta(true_B) after one rd step
        decider = compile_in(C, r"\c. dd (rd g c)", dd=delta.decider, rd=rd,
                             g=delta.image(gamma.decider))
    return ApplicativeMorphism(gamma.source, C, union, realizer, decider,
                               name=f"{delta.name}.{gamma.name}")


def carry_representer(delta: ApplicativeMorphism, rep: Element) -> Element:
    """If ``rep`` represents ``f`` w.r.t. ``gamma``, the result represents it
    w.r.t. ``delta . gamma``."""
    return delta.target.app(delta.realizer, delta.image(rep), Meter(10**6))


# ---------------------------------------------------------------------------
# Sampling


def _sampler(pca: Pca):
    return pca.sample


def defined_pairs(pca: Pca, count: int, seed: int, fuel: int,
                  sampler: Callable[[random.Random], Element] | None = None,
                  attempts: int = 50) -> list[tuple[Element, Element, Element]]:
    """``count`` triples ``(a, a', a a')`` with the application defined."""
    draw = sampler or pca.sample
    rng = random.Random(seed)
    out = []
    for _ in range(count * attempts):
        a, b = draw(rng), draw(rng)
        r = apply(pca, a, b, fuel)
        if isinstance(r, Value):
            out.append((a, b, r.element))
            if len(out) == count:
                return out
    raise RuntimeError(f"only {len(out)} defined applications in {count * attempts} draws")


# ---------------------------------------------------------------------------
# Checks


def check_realizer(gamma: ApplicativeMorphism, pairs: list, seed, fuel: int,
                   realizer: Element | None = None, law: str | None = None) -> Report:
    """The realizer law on the given defined source applications."""
    r = gamma.realizer if realizer is None else realizer
    src, tgt = gamma.source, gamma.target
    report = Report()
    bad = None
    for a, a2, c in pairs:
        for b in gamma.map(a):
            for b2 in gamma.map(a2):
                res = eval_apps(tgt, r, [b, b2], fuel)
                if not (isinstance(res, Value) and gamma.contains(c, res.element)):
                    bad = (f"a={src.show(a)} a'={src.show(a2)} r b b' -> "
                           f"{show_result(tgt, res)}, expected an image of {src.show(c)}")
                    break
            if bad:
                break
        if bad:
            break
    report.record(law or f"realizer[{gamma.name}]", len(pairs), seed, bad)
    return report


def check_preorder(gamma: ApplicativeMorphism, delta: ApplicativeMorphism, s: Element,
                   points: Iterable[Element], seed, fuel: int, law: str | None = None) -> Report:
    """``gamma <= delta`` via ``s``: ``s b`` is in ``delta(a)`` for ``b`` in ``gamma(a)``."""
    if gamma.source is not delta.source or gamma.target is not delta.target:
        raise ValueError("preorder needs morphisms with the same endpoints")
    tgt = gamma.target
    points = list(points)
    report = Report()
    bad = None
    for a in points:
        for b in gamma.map(a):
            res = apply(tgt, s, b, fuel)
            if not (isinstance(res, Value) and delta.contains(a, res.element)):
                bad = (f"a={gamma.source.show(a)} s b -> {show_result(tgt, res)}")
                break
        if bad:
            break
    report.record(law or f"preorder[{gamma.name}<={delta.name}]", len(points), seed, bad)
    return report


def check_iso(gamma, delta, s1, s2, points, seed, fuel: int) -> Report:
    points = list(points)
    report = check_preorder(gamma, delta, s1, points, seed, fuel)
    report.extend(check_preorder(delta, gamma, s2, points, seed, fuel))
    return report


def check_decidable(gamma: ApplicativeMorphism, d: Element, fuel: int, seed=None) -> Report:
    """Both decider clauses over the finite images of the source booleans."""
    A, B = gamma.source, gamma.target
    report = Report()
    bad = None
    n = 0
    for name in ("true", "false"):
        for b in gamma.map(A.kit[name]):
            n += 1
            res = apply(B, d, b, fuel)
            if not (isinstance(res, Value) and B.equal(res.element, B.kit[name])):
                bad = f"d applied to an image of {name} -> {show_result(B, res)}"
                break
        if bad:
            break
    report.record(f"decidable[{gamma.name}]", n, seed, bad)
    return report


def check_representable(gamma: ApplicativeMorphism, f: OracleFn, rf: Element,
                        points: Iterable[Element], seed, fuel: int) -> Report:
    """``rf b`` is in ``gamma(f(a))`` for ``a`` in ``dom(f)`` and ``b`` in ``gamma(a)``."""
    A, B = gamma.source, gamma.target
    report = Report()
    bad = None
    n = 0
    for a in points:
        fa = f(a)
        if fa is None:
            continue
        n += 1
        for b in gamma.map(a):
            res = apply(B, rf, b, fuel)
            if not (isinstance(res, Value) and gamma.contains(fa, res.element)):
                bad = f"a={A.show(a)} rf b -> {show_result(B, res)}, f(a)={A.show(fa)}"
                break
        if bad:
            break
    report.record(f"representable[{f.name} via {gamma.name}]", n, seed, bad)
    return report


def turing_leq(f: OracleFn, g: OracleFn | ExtendedPca, witness: Element, base: Pca | None = None,
               points: Iterable[Element] | None = None, seed=None, fuel: int = 10**6) -> Report:
    """``f <=_A g`` via ``witness``: it represents ``f`` in ``A[g]``.

    ``g`` may be given as an already built ``A[g]``.  Points default to the
    tabulated domain of ``f``.
    """
    ext = g if isinstance(g, ExtendedPca) else make_extension(base, g)
    pts = list(points) if points is not None else f.domain()
    gamma = iota(ext)
    report = check_representable(gamma, f, witness, pts, seed, fuel)
    report.lines = [line.replace(f"representable[{f.name} via {gamma.name}]",
                                 f"leq[{f.name}<={ext.oracle.name}]") for line in report.lines]
    return report


def transitivity_witness(ext_g: ExtendedPca, ext_h: ExtendedPca, w1: Element, w2: Element) -> Element:
    """From ``w1`` (``f <= g``) and ``w2`` (``g <= h``), a witness of ``f <= h``.

    ``iota_h`` lifts along ``g`` (represented by ``w2``) to ``A[g] -> A[h]``
    with realizer ``rho``; then ``rho . w1`` represents ``f`` in ``A[h]``.
    """
    io = iota(ext_h)
    lifted = lift_morphism(io, io.decider, w2, ext_g)
    return ext_h.app(lifted.realizer, w1, Meter(10**6))
