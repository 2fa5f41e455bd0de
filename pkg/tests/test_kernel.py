from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from pcabench.kernel import (FuelError, FuelExhausted, Meter, Report, Stuck, Value, apply,
                             check_axioms, eval_apps, kleene_agree, mk, render)

seeds = st.integers(min_value=0, max_value=2**32)


# an independent reducer for pure S/K terms: (head, [args]) with recursion


class OutOfSteps(Exception):
    pass


def ref_apply(f, x, budget):
    budget[0] -= 1
    if budget[0] < 0:
        raise OutOfSteps
    head, args = f
    args = args + [x]
    if head == "K" and len(args) == 2:
        return args[0]
    if head == "S" and len(args) == 3:
        a, b, c = args
        return ref_apply(ref_apply(a, c, budget), ref_apply(b, c, budget), budget)
    return (head, args)


def ref_eval(tree, budget):
    if isinstance(tree, str):
        return (tree, [])
    return ref_apply(ref_eval(tree[0], budget), ref_eval(tree[1], budget), budget)


def to_node(nf):
    head, args = nf
    return mk(head, tuple(to_node(a) for a in args))


def sk_trees(depth=4):
    leaf = st.sampled_from(["K", "S"])
    return st.recursive(leaf, lambda t: st.tuples(t, t), max_leaves=9)


def evaluate(pca, tree, meter):
    if isinstance(tree, str):
        return mk(tree)
    return pca.app(evaluate(pca, tree[0], meter), evaluate(pca, tree[1], meter), meter)


@given(sk_trees())
def test_reducer_agrees_with_reference(sk, tree):
    try:
        want = to_node(ref_eval(tree, [2000]))
    except (OutOfSteps, RecursionError):
        want = None
    try:
        got = evaluate(sk, tree, Meter(10**5))
    except FuelError:
        got = None
    if want is not None:
        assert got is want


def test_k_and_s_examples(sk):
    K, S = sk.K, sk.S
    m = Meter(100)
    assert sk.app(sk.app(K, S, m), K, m) is S
    I = sk.app(sk.app(S, K, m), K, m)
    assert render(I) == "S K K"
    assert sk.app(I, S, m) is S


def test_omega_runs_out_of_fuel(sk):
    m = Meter(100)
    I = sk.app(sk.app(sk.S, sk.K, m), sk.K, m)
    omega = sk.app(sk.app(sk.S, I, m), I, m)
    assert isinstance(apply(sk, omega, omega, 10**4), FuelExhausted)


def test_memo_replays_cost(sk):
    m = Meter(100)
    I = sk.app(sk.app(sk.S, sk.K, m), sk.K, m)
    big = m.left
    sk.app(I, sk.S, m)
    cost = big - m.left
    assert cost > 0
    with pytest.raises(FuelError):
        sk.app(I, sk.S, Meter(cost - 1))
    assert sk.app(I, sk.S, Meter(cost)) is sk.S


def test_meter_rejects_negative_fuel():
    with pytest.raises(ValueError):
        Meter(-1)


@given(seeds, seeds)
def test_k_axiom_property(term, s1, s2):
    rng = random.Random(s1 ^ s2)
    a, b = term.sample(rng), term.sample(rng)
    r = eval_apps(term, term.K, [a, b], 10**5)
    assert isinstance(r, Value) and r.element is a


@given(seeds)
def test_s_axiom_property(term, seed):
    rng = random.Random(seed)
    a, b, c = (term.sample(rng) for _ in range(3))

    def rhs(f):
        m = Meter(f)
        try:
            return Value(term.app(term.app(a, c, m), term.app(b, c, m), m))
        except FuelError:
            return FuelExhausted()

    ok, _, _ = kleene_agree(term, lambda f: eval_apps(term, term.S, [a, b, c], f), rhs, 10**5)
    assert ok


@given(st.integers(min_value=0, max_value=5000))
def test_numeric_codes_roundtrip(numeric, code):
    assert numeric.encode(numeric.decode(code)) == code


def test_numeric_codes_are_a_bijection_on_a_prefix(numeric):
    # each code decodes to a different term and small terms get small codes
    terms = [numeric.decode(c) for c in range(300)]
    assert len(set(map(id, terms))) == 300
    sizes = [t.size for t in terms]
    assert sizes == sorted(sizes)


def test_numeric_application_commutes_with_coding(numeric):
    base = numeric.base
    rng = random.Random(5)
    for _ in range(100):
        a, b = base.sample(rng), base.sample(rng)
        r1 = apply(base, a, b, 10**4)
        r2 = apply(numeric, numeric.encode(a), numeric.encode(b), 10**4)
        if isinstance(r1, Value):
            assert isinstance(r2, Value) and numeric.decode(r2.element) is r1.element


def test_kleene_agree_retries_the_starved_side(term):
    calls = []

    def slow(f):
        calls.append(f)
        return Value(term.K) if f >= 400 else FuelExhausted()

    ok, left, right = kleene_agree(term, lambda f: Value(term.K), slow, 100)
    assert ok and calls == [100, 400]


def test_kleene_agree_values_must_match(term):
    ok, _, _ = kleene_agree(term, lambda f: Value(term.K), lambda f: Value(term.S), 10)
    assert not ok
    ok, _, _ = kleene_agree(term, lambda f: Stuck("x"), lambda f: FuelExhausted(), 10)
    assert ok


def test_check_axioms_is_reproducible(term):
    assert str(check_axioms(term, 30, 7, 10**4)) == str(check_axioms(term, 30, 7, 10**4))


def test_report_lines():
    r = Report()
    r.record("law", 3, 1)
    r.record("other", 3, 1, "x" * 2000)
    assert r.lines[0] == "PASS law n=3 seed=1"
    assert r.lines[1].startswith("FAIL other counterexample: ") and r.lines[1].endswith(" ...")
    assert not r.passed and r.failures == 1
