"""Density and inclusion witnesses for the identity map from A to A[f].

``m`` runs the head of a sequence on its tail, so a machine of ``A[f]``
can be made to start with any prefix already on its input.  ``c`` wraps an
element as a machine that answers at once with a machine that answers at
once with the element.
"""

from __future__ import annotations

import random

from .kernel import Element, Meter, Pca, Report, Value, apply, eval_apps, kleene_agree, show_result
from .oracle import (ExtendedPca, _cached, build_kf, compile_in, machine_sampler, nontotal_witness,
                     representer)

__all__ = ["density_m", "density_transform", "inclusion_c", "check_density_m", "check_density",
           "check_inclusion"]

M_SOURCE = r"\s. (at s zero) (drop s (succ zero))"
TRANSFORM_SOURCE = r"\b a2 v. b (cons a2 v)"
C_SOURCE = r"\x. pair true (\v. pair true (at x zero))"


def density_m(base: Pca) -> Element:
    return _cached(base, "density_m", lambda: compile_in(base, M_SOURCE))


def density_transform(base: Pca, b: Element) -> Element:
    """An ``a`` with ``m (a a2) = b a2`` in ``A[f]`` for every oracle ``f``."""
    t = _cached(base, "density_transform", lambda: compile_in(base, TRANSFORM_SOURCE))
    return base.app(t, b, Meter(1000))


def inclusion_c(base: Pca) -> Element:
    return _cached(base, "inclusion_c", lambda: compile_in(base, C_SOURCE))


def _cases(report: Report, law: str, values: int, diverging: int, seed) -> None:
    """Both kinds of agreement must show up for the sample to mean much."""
    report.note(f"{law}: {values} value agreements, {diverging} shared divergences")
    bad = None if values and diverging else "sample lacks value or divergence cases"
    report.record(f"{law}-cases", values + diverging, seed, bad)


def check_density_m(base: Pca, samples: int, seed: int, fuel: int) -> Report:
    """``m (cons y v) = y v`` in ``A`` for sampled ``y`` and short ``v``."""
    kit = base.kit
    m = density_m(base)
    rng = random.Random(f"{seed}/density-m")
    report = Report()
    bad = None
    values = diverging = 0
    for _ in range(samples):
        y = base.sample(rng)
        v = kit.seq([base.sample(rng) for _ in range(rng.randint(0, 4))])
        yv = kit.app2(kit["cons"], y, v, Meter(fuel))
        ok, left, right = kleene_agree(base, lambda f: apply(base, m, yv, f),
                                       lambda f: apply(base, y, v, f), fuel)
        if not ok:
            bad = f"y={base.show(y)} v={base.show(v)}: m -> {show_result(base, left)}, y v -> {show_result(base, right)}"
            break
        if isinstance(left, Value):
            values += 1
        else:
            diverging += 1
    report.record("density-m", samples, seed, bad)
    _cases(report, "density-m", values, diverging, seed)
    return report


def _special_machines(ext: ExtendedPca) -> list[Element]:
    base = ext.base
    return [build_kf(base), nontotal_witness(base), representer(base)]


def check_density(ext: ExtendedPca, samples: int, seed: int, fuel: int) -> Report:
    """For sampled ``b`` and ``a2``: ``a a2`` is defined in ``A`` and
    ``m .f (a a2)`` is Kleene-equal to ``b .f a2``, where ``a`` is the
    transform of ``b``."""
    base = ext.base
    m = density_m(base)
    rng = random.Random(f"{seed}/density")
    draw = machine_sampler(ext)
    specials = _special_machines(ext)
    report = Report()
    undefined = bad = None
    values = diverging = 0
    for i in range(samples):
        b = specials[i] if i < len(specials) else draw(rng)
        a2 = base.kit.numeral(rng.randrange(16)) if rng.random() < 0.5 else base.sample(rng)
        a = density_transform(base, b)
        aa = apply(base, a, a2, fuel)
        if not isinstance(aa, Value):
            undefined = undefined or f"a a2 -> {show_result(base, aa)} for b={base.show(b)}"
            continue
        ok, left, right = kleene_agree(ext, lambda f: apply(ext, m, aa.element, f),
                                       lambda f: apply(ext, b, a2, f), fuel)
        if not ok:
            bad = (f"b={base.show(b)} a2={base.show(a2)}: m .f (a a2) -> {show_result(ext, left)}, "
                   f"b .f a2 -> {show_result(ext, right)}")
            break
        if isinstance(left, Value):
            values += 1
        else:
            diverging += 1
    report.record("density-transform-defined", samples, seed, undefined)
    report.record(f"density[{ext.name}]", samples, seed, bad)
    _cases(report, f"density[{ext.name}]", values, diverging, seed)
    return report


def check_inclusion(ext: ExtendedPca, samples: int, seed: int, fuel: int, probes: int = 3) -> Report:
    """``c`` and ``m`` on sampled ``a``.

    In ``A``: ``c [a]`` is ``pair true e`` with ``e v = pair true a``.
    In ``A[f]``: ``c .f a`` is such an ``e`` and ``m .f (c .f a) = a``.
    """
    base = ext.base
    kit = base.kit
    c, m = inclusion_c(base), density_m(base)
    rng = random.Random(f"{seed}/inclusion")
    report = Report()
    shape = inverse = None
    for _ in range(samples):
        a = base.sample(rng)
        meter = Meter(fuel)
        out = apply(base, c, kit.seq([a], meter), fuel)
        ca = apply(ext, c, a, fuel)
        try:
            done, e = kit.unflag(out.element, meter) if isinstance(out, Value) else (False, None)
        except Exception:
            done = False
        if not (done and isinstance(ca, Value) and base.equal(ca.element, e)):
            shape = shape or f"c [a] -> {show_result(base, out)} for a={base.show(a)}"
        else:
            want = kit.pair(kit["true"], a, meter)
            for _ in range(probes):
                v = kit.seq([base.sample(rng) for _ in range(rng.randint(0, 2))], meter)
                r = apply(base, e, v, fuel)
                if not (isinstance(r, Value) and base.equal(r.element, want)):
                    shape = shape or f"(c [a]) v -> {show_result(base, r)} for a={base.show(a)}"
                    break
        back = eval_apps(ext, m, [ca.element], fuel) if isinstance(ca, Value) else ca
        if not (isinstance(back, Value) and base.equal(back.element, a)):
            inverse = inverse or f"m .f (c .f a) -> {show_result(ext, back)} for a={base.show(a)}"
    report.record("inclusion-c-shape", samples, seed, shape)
    report.record(f"inclusion-in[{ext.name}]", samples, seed, inverse)
    return report
