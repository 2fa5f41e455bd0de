"""Named check suites.  Each returns a :class:`Report`; all randomness comes
from the seed, so equal arguments give byte-identical reports."""

from __future__ import annotations

import random
from typing import Callable

from .assemblies import (AssemblyMap, adjunction_instances, check_adjunction,
                         check_coproduct_preservation, check_functoriality,
                         check_representable_iff_tracked, check_tracked, identity_map, parse_assembly)
from .bracket import check_completeness
from .density import check_density, check_density_m, check_inclusion
from .kernel import Meter, Pca, Report, Value, apply, check_axioms, eval_apps, kleene_agree, show_result
from .morphisms import (carry_representer, check_decidable, check_iso, check_realizer, compose_morphisms,
                        defined_pairs, identity_morphism, transitivity_witness, turing_leq)
from .oracle import (ExtendedPca, OracleFn, build_t, check_oracle_machine, compile_in,
                     compose_tables, dialogue_apply, double_query, eq_oracle, identity_oracle, iota,
                     lift_morphism, machine_sampler, make_extension, nontotal_witness,
                     projection_oracle, reference_t, representer, succ_table)
from .stdlib import check_laws, numeric_pca, term_pca

__all__ = ["SUITES", "run_suite", "base_model", "check_extension", "check_representer",
           "check_iota", "check_lift_iota", "check_representable_lift", "check_u_step",
           "check_nontotal", "check_commutation", "check_preorder_laws", "check_forced_decider",
           "check_assemblies"]

_MODELS: dict[str, Pca] = {}


def base_model(name: str) -> Pca:
    """Shared instances, so compiled kits are reused across suites."""
    if name not in _MODELS:
        if name == "term":
            _MODELS[name] = term_pca()
        elif name == "numeric":
            _MODELS[name] = numeric_pca(base=base_model("term"))
        elif name == "term-sk":
            _MODELS[name] = term_pca(enriched=False)
        else:
            raise ValueError(f"unknown model {name!r}")
    return _MODELS[name]


def _extension(base: Pca, oracle: OracleFn) -> ExtendedPca:
    key = f"ext:{oracle.name}"
    store = base.__dict__.setdefault("_extensions", {})
    if key not in store:
        store[key] = make_extension(base, oracle)
    return store[key]


# ---------------------------------------------------------------------------
# Oracle extension


def check_extension(ext: ExtendedPca, samples: int, seed: int, fuel: int, t_samples: int | None = None) -> Report:
    """Axioms of ``A[f]`` and the combinator ``T`` against the host loop."""
    report = check_axioms(ext, samples, seed, fuel)
    base, kit = ext.base, ext.base.kit
    rng = random.Random(f"{seed}/t-reference")
    draw = machine_sampler(ext)
    n = samples if t_samples is None else t_samples
    bad = None
    for _ in range(n):
        x, y, c = draw(rng), draw(rng), draw(rng)
        w = [kit.numeral(rng.randrange(16)) for _ in range(rng.randint(0, 3))]
        s = kit.seq([c, *w])

        def term(f, x=x, y=y, s=s):
            return eval_apps(base, build_t(base, x, y), [s], f)

        def host(f, x=x, y=y, s=s):
            from .kernel import Undefined, outcome_of
            try:
                return Value(reference_t(ext, x, y, s, Meter(f)))
            except Undefined as exc:
                return outcome_of(exc)

        ok, left, right = kleene_agree(base, term, host, fuel)
        if not ok:
            bad = f"x={base.show(x)} y={base.show(y)}: T -> {show_result(base, left)}, loop -> {show_result(base, right)}"
            break
    report.record(f"T-vs-reference[{ext.name}]", n, seed, bad)

    bad = None
    for a, b in ((draw(rng), draw(rng)) for _ in range(n)):
        ka = apply(ext, ext.K, a, fuel)
        res, trace = dialogue_apply(ext, ka.element, b, fuel) if isinstance(ka, Value) else (ka, None)
        if not (isinstance(res, Value) and ext.equal(res.element, a) and not trace.steps):
            bad = f"K_f a .f b with a={base.show(a)} -> {show_result(ext, res)}"
            break
    report.record(f"Kf-no-questions[{ext.name}]", n, seed, bad)
    return report


def check_representer(ext: ExtendedPca, fuel: int, seed=None) -> Report:
    """``r_f .f a = f(a)`` with exactly one question on the table, and
    outside-domain off it."""
    base, f = ext.base, ext.oracle
    rf = representer(base)
    report = Report()
    bad = None
    dom = f.domain()
    for a in dom:
        res, trace = dialogue_apply(ext, rf, a, fuel)
        if not (isinstance(res, Value) and base.equal(res.element, f(a))):
            bad = f"r_f .f {base.show(a)} -> {show_result(base, res)}"
        elif len(trace.steps) != 1 or not base.equal(trace.steps[0][0], a):
            bad = f"r_f .f {base.show(a)} asked {len(trace.steps)} questions"
        if bad:
            break
    report.record(f"representer[{f.name}]", len(dom), seed, bad)
    outside = [base.kit.numeral(n) for n in (len(dom), len(dom) + 3)] + [base.kit["K"]]
    bad = None
    for a in outside:
        res, _ = dialogue_apply(ext, rf, a, fuel)
        from .kernel import OutsideDomain
        if not isinstance(res, OutsideDomain):
            bad = f"r_f .f {base.show(a)} -> {show_result(base, res)}"
            break
    report.record(f"representer-outside[{f.name}]", len(outside), seed, bad)
    return report


def check_iota(ext: ExtendedPca, samples: int, seed: int, fuel: int) -> Report:
    io = iota(ext)
    pairs = defined_pairs(ext.base, samples, seed, fuel)
    report = check_realizer(io, pairs, seed, fuel)
    report.extend(check_decidable(io, io.decider, fuel, seed))
    return report


def check_lift_iota(ext: ExtendedPca, samples: int, seed: int, fuel: int) -> Report:
    """With ``gamma = iota`` and ``B = A[f]``: ``rho a a2 = a .f a2``."""
    io = iota(ext)
    lifted = lift_morphism(io, io.decider, representer(ext.base), ext)
    pairs = defined_pairs(ext, samples, seed, fuel, sampler=machine_sampler(ext))
    return check_realizer(lifted, pairs, seed, 10 * fuel, law=f"lift-rho[{ext.name}]")


def check_representable_lift(base: Pca, samples: int, seed: int, fuel: int) -> Report:
    """``f = fst`` is representable in ``A``; lifting the identity gives
    ``A[f] -> A``, inverse to ``iota`` up to the identity witnesses."""
    ext = _extension(base, projection_oracle(base))
    ident = identity_morphism(base)
    down = lift_morphism(ident, base.kit["I"], base.kit["fst"], ext)
    up = iota(ext)
    pairs_f = defined_pairs(ext, samples, seed, fuel, sampler=machine_sampler(ext))
    pairs_a = defined_pairs(base, samples, seed, fuel)
    report = check_realizer(down, pairs_f, seed, 10 * fuel)
    there = compose_morphisms(down, up)   # A -> A
    back = compose_morphisms(up, down)    # A[f] -> A[f]
    report.extend(check_realizer(there, pairs_a, seed, 10 * fuel))
    report.extend(check_iso(there, ident, base.kit["I"], base.kit["I"], [a for a, _, _ in pairs_a], seed, fuel))
    report.extend(check_iso(back, identity_morphism(ext), ext.kit["I"], ext.kit["I"],
                            [a for a, _, _ in pairs_f], seed, fuel))
    return report


def check_u_step(ext: ExtendedPca, instances: int, seed: int, fuel: int) -> Report:
    """Along a traced dialogue of ``b .f a2``, adding the next answer to the
    replayed prefix does not change ``U b a2 v``; at the end it is the value."""
    base, kit = ext.base, ext.base.kit
    io = iota(ext)
    U = lift_morphism(io, io.decider, representer(base), ext).parts.U
    rng = random.Random(f"{seed}/u-step")
    draw = machine_sampler(ext)
    fixed = [representer(base), double_query(base)]
    report = Report()
    bad = None
    found = steps = 0
    tries = 0
    while found < instances and tries < 200 * instances:
        tries += 1
        b = fixed[found % 2] if found < 4 else draw(rng)
        a2 = kit.numeral(rng.randrange(14))
        res, trace = dialogue_apply(ext, b, a2, fuel)
        if not trace.steps:
            continue
        found += 1
        answers = [ans for _, ans in trace.steps]
        outs = [eval_apps(ext, U, [b, a2, kit.seq(answers[:k])], 10 * fuel) for k in range(len(answers) + 1)]
        for k in range(len(answers)):
            steps += 1
            l, r = outs[k], outs[k + 1]
            same = (isinstance(l, Value) and isinstance(r, Value) and ext.equal(l.element, r.element)) \
                or (not isinstance(l, Value) and not isinstance(r, Value))
            if not same:
                bad = f"b={base.show(b)} a2={base.show(a2)} step {k}: {show_result(ext, l)} vs {show_result(ext, r)}"
                break
        if bad is None and isinstance(res, Value):
            last = outs[-1]
            if not (isinstance(last, Value) and ext.equal(last.element, res.element)):
                bad = f"b={base.show(b)} a2={base.show(a2)}: U -> {show_result(ext, last)}, dialogue -> {show_result(ext, res)}"
        if bad:
            break
    if bad is None and found < instances:
        bad = f"only {found} traced instances with questions in {tries} draws"
    report.record(f"U-step[{ext.name}]", found, seed, bad)
    report.note(f"U-step: {steps} consecutive prefixes compared")
    return report


def check_nontotal(base: Pca, samples: int, seed: int, fuels=(10**3, 10**4, 10**5)) -> Report:
    """``\\x. pair false false`` never answers, whatever the oracle."""
    bot = nontotal_witness(base)
    rng = random.Random(f"{seed}/nontotal")
    bs = [base.sample(rng) for _ in range(samples)]
    report = Report()
    for oracle in (succ_table(base), identity_oracle()):
        ext = _extension(base, oracle)
        bad = None
        for fuel in fuels:
            for b in bs:
                res, _ = dialogue_apply(ext, bot, b, fuel)
                if isinstance(res, Value):
                    bad = f"bot .f {base.show(b)} -> {show_result(ext, res)} at fuel {fuel}"
                    break
            if bad:
                break
        report.record(f"nontotal[{ext.name}]", samples * len(fuels), seed, bad)
    ext = _extension(base, identity_oracle())
    bad = None
    for b in bs:
        lengths = [len(dialogue_apply(ext, bot, b, fuel)[1].steps) for fuel in fuels[-2:]]
        if not lengths[0] < lengths[1]:
            bad = f"b={base.show(b)}: trace lengths {lengths} at fuels {fuels[-2:]}"
            break
    report.record(f"nontotal-trace-grows[{ext.name}]", samples, seed, bad)
    return report


# ---------------------------------------------------------------------------
# Morphisms


def swap_morphism(target: ExtendedPca, inner: ExtendedPca, other: ExtendedPca, source: ExtendedPca):
    """``source = A[g][f] -> target = A[f][g]`` by lifting twice.

    ``inner = A[f]`` and ``other = A[g]``.  First lift ``A -> A[f] -> A[f][g]``
    along ``g``, then the result along ``f``.
    """
    i1, i2 = iota(inner), iota(target)
    g0 = compose_morphisms(i2, i1)
    g1 = lift_morphism(g0, g0.decider, representer(inner), other)
    rep_f = carry_representer(i2, representer(inner.base))
    return lift_morphism(g1, g1.decider, rep_f, source)


def check_commutation(base: Pca, pairs: int, seed: int, fuel: int, composite_fuel: int) -> Report:
    """Mutual morphisms between ``A[f][g]`` and ``A[g][f]`` for the successor
    table and equality."""
    f, g = succ_table(base), eq_oracle(base)
    Af, Ag = _extension(base, f), _extension(base, g)
    X, Y = make_extension(Af, g), make_extension(Ag, f)
    yx = swap_morphism(X, Af, Ag, Y)
    xy = swap_morphism(Y, Ag, Af, X)
    yx.name, xy.name = "swap_gf", "swap_fg"
    report = Report()
    report.note(f"{Y.name} <-> {X.name}: composite realizers at fuel={composite_fuel}")
    py = defined_pairs(Y, pairs, seed, fuel)
    px = defined_pairs(X, pairs, seed + 1, fuel)
    report.extend(check_realizer(yx, py, seed, 100 * fuel))
    report.extend(check_realizer(xy, px, seed, 100 * fuel))
    for mor, ps in ((compose_morphisms(xy, yx), py), (compose_morphisms(yx, xy), px)):
        report.extend(check_realizer(mor, ps, seed, composite_fuel))
        P = mor.source
        report.extend(check_iso(mor, identity_morphism(P), P.kit["I"], P.kit["I"],
                                [a for a, _, _ in ps], seed, fuel))
    return report


def check_preorder_laws(base: Pca, seed: int, fuel: int) -> Report:
    """Reflexivity, ``f . f <= f`` with two questions, and one transitivity."""
    h = succ_table(base)
    g = compose_tables(h, h, "succ2")
    f = compose_tables(g, g, "succ4")
    ext_h, ext_g = _extension(base, h), _extension(base, g)
    report = turing_leq(h, ext_h, representer(base), seed=seed, fuel=fuel)
    hh = compose_tables(h, h, "succ.succ")
    two = double_query(base)
    report.extend(turing_leq(hh, ext_h, two, seed=seed, fuel=fuel))
    bad = None
    for a in hh.domain():
        res, trace = dialogue_apply(ext_h, two, a, fuel)
        if len(trace.steps) != 2:
            bad = f"{base.show(a)}: {len(trace.steps)} questions"
            break
    report.record("two-question-traces", len(hh.domain()), seed, bad)
    w = transitivity_witness(ext_g, ext_h, two, two)
    report.extend(turing_leq(f, ext_h, w, seed=seed, fuel=fuel))
    return report


FORCED_DECIDER = r"""\s. numeq (lh s) (succ zero) (\z. pair false (at s zero))
    (\z. pair true ((at s (succ zero)) tt ff)) I"""


def check_forced_decider(base: Pca, samples: int, seed: int, fuel: int) -> Report:
    """In ``A[eq]`` one element decides ``fst x = snd x``, answering with the
    booleans of ``A[eq]``."""
    ext = _extension(base, eq_oracle(base))
    d = compile_in(base, FORCED_DECIDER, tt=ext.kit["true"], ff=ext.kit["false"])
    rng = random.Random(f"{seed}/forced")
    kit = base.kit
    report = Report()
    bad = None
    same = 0
    for _ in range(samples):
        u = base.sample(rng)
        v = u if rng.random() < 0.5 else base.sample(rng)
        want = ext.kit["true"] if base.equal(u, v) else ext.kit["false"]
        same += base.equal(u, v)
        x = kit.pair(u, v, Meter(fuel))
        res = apply(ext, d, x, fuel)
        if not (isinstance(res, Value) and base.equal(res.element, want)):
            bad = f"x=pair {base.show(u)} {base.show(v)}: d .eq x -> {show_result(ext, res)}"
            break
    report.record(f"forced-decider[{ext.name}]", samples, seed, bad)
    report.note(f"forced-decider: {same} equal pairs of {samples}")
    return report


# ---------------------------------------------------------------------------
# Assemblies


def check_assemblies(base: Pca, fuel: int) -> Report:
    kit = base.kit
    report = Report()
    pool = [kit["K"], kit["S"], kit["I"]]
    carrier = pool + [kit["true"], kit["false"], kit.numeral(0)]
    bad = None
    count = 0
    for asm, S in adjunction_instances(base, pool):
        r = check_adjunction(asm, S, carrier, fuel)
        count += 1
        if not r.passed and bad is None:
            bad = next(line for line in r.lines if line.startswith("FAIL"))
    report.note("nabla uses a finite carrier sample standing in for the whole carrier")
    report.record("adjunction[|X|<=3, |E(x)|<=2, |S|<=2]", count, "exhaustive", bad)

    ext = _extension(base, succ_table(base))
    io = iota(ext)
    bools = parse_assembly("yes: true\nno: false", base, "Bool")
    nums = parse_assembly("zero: zero\none: succ zero, (\\x. x) (succ zero)", base, "Num")
    single_a = parse_assembly("a: K", base, "One")
    single_b = parse_assembly("b: S, I", base, "Two")
    for gamma, d in ((io, io.decider), (identity_morphism(base), kit["I"])):
        report.extend(check_coproduct_preservation(gamma, d, single_a, single_b, fuel))
        report.extend(check_coproduct_preservation(gamma, d, bools, nums, fuel))
    neg = AssemblyMap(bools, bools, {"yes": "no", "no": "yes"}, kit["not"], "not")
    report.extend(check_tracked(neg, fuel))
    wrong = AssemblyMap(bools, bools, {"yes": "yes", "no": "no"}, kit["not"], "not-as-identity")
    falsified = not check_tracked(wrong, fuel).passed
    report.record("wrong-tracker-rejected", 1, "exhaustive", None if falsified else "accepted a wrong tracker")
    to_num = AssemblyMap(bools, nums, {"yes": "zero", "no": "one"},
                         compile_in(base, r"\b. b zero (succ zero)"), "choose")
    report.extend(check_functoriality(io, neg, to_num, fuel))
    report.extend(check_tracked(identity_map(nums), fuel))
    table = succ_table(base, size=6)
    report.extend(check_representable_iff_tracked(io, table, [representer(base), kit["succ"], kit["I"]], fuel))
    return report


# ---------------------------------------------------------------------------
# Suites


def suite_axioms(seed: int, samples: int, fuel: int, model: str) -> Report:
    report = Report()
    for name in ("term", "numeric"):
        report.extend(check_axioms(base_model(name), samples, seed, fuel))
    A = base_model(model)
    report.extend(check_completeness(A, max(samples, 300), seed, fuel))
    report.extend(check_laws(A, samples, seed, fuel))
    return report


def suite_oracle(seed: int, samples: int, fuel: int, model: str) -> Report:
    A = base_model(model)
    ext = _extension(A, succ_table(A))
    report = Report()
    report.extend(check_extension(ext, samples, seed, 10 * fuel, t_samples=min(samples, 100)))
    report.extend(check_representer(ext, fuel, seed))
    report.extend(check_iota(ext, samples, seed, fuel))
    report.extend(check_lift_iota(ext, min(samples, 100), seed, fuel))
    report.extend(check_representable_lift(A, min(samples, 100), seed, fuel))
    report.extend(check_u_step(ext, min(samples, 50), seed, fuel))
    report.extend(check_nontotal(A, min(samples, 100), seed))
    N = base_model("numeric")
    report.extend(check_oracle_machine(_extension(N, succ_table(N)), min(samples, 100), seed, fuel))
    return report


def suite_morphisms(seed: int, samples: int, fuel: int, model: str, pairs: int | None = None,
                    composite_fuel: int = 10**8) -> Report:
    A = base_model(model)
    report = Report()
    report.extend(check_commutation(A, pairs if pairs is not None else max(10, samples // 10),
                                    seed, fuel, composite_fuel))
    report.extend(check_preorder_laws(A, seed, 10 * fuel))
    report.extend(check_forced_decider(A, samples, seed, fuel))
    return report


def suite_assemblies(seed: int, samples: int, fuel: int, model: str) -> Report:
    return check_assemblies(base_model(model), fuel)


def suite_density(seed: int, samples: int, fuel: int, model: str) -> Report:
    A = base_model(model)
    ext = _extension(A, succ_table(A))
    report = check_density_m(A, samples, seed, fuel)
    report.extend(check_density(ext, samples, seed, fuel))
    report.extend(check_inclusion(ext, samples, seed, fuel))
    return report


SUITES: dict[str, Callable[..., Report]] = {
    "axioms": suite_axioms,
    "oracle": suite_oracle,
    "morphisms": suite_morphisms,
    "assemblies": suite_assemblies,
    "density": suite_density,
}


def run_suite(name: str, seed: int = 0, samples: int = 200, fuel: int = 10**5, model: str = "term") -> Report:
    if name == "all":
        report = Report()
        for key, fn in SUITES.items():
            report.note(f"suite {key}")
            report.extend(fn(seed, samples, fuel, model))
        return report
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    return SUITES[name](seed, samples, fuel, model)
