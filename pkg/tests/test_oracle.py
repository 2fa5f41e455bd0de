from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from pcabench.kernel import (FuelExhausted, Meter, OutsideDomain, Stuck, Undefined, Value, eval_apps, kleene_agree)
from pcabench.oracle import (DialogueTrace, build_t, check_oracle_machine, compose_tables,
                             dialogue_apply, double_query, empty_oracle, format_oracle_table,
                             identity_oracle, machine_sampler, make_extension, nontotal_witness,
                             parse_oracle_table, reference_t, representer, succ_table, _Env)


def num(pca, n):
    return pca.kit.numeral(n)


def test_table_text_roundtrip(term):
    text = "# successor, partly\nnum:0 => num:1\nnum:1 => num:2\n\nK => S\n"
    f = parse_oracle_table(text, _Env(term.kit, {}), term, "t")
    assert f(num(term, 1)) is num(term, 2) and f(term.K) is term.S and f(term.S) is None
    again = parse_oracle_table(format_oracle_table(f, term), _Env(term.kit, {}), term)
    assert again.table == f.table


def test_numeric_codes_in_tables(numeric):
    f = parse_oracle_table("#2 => #3\n# a comment\n#3 => #9\n", _Env(numeric.kit, {}), numeric)
    assert f(2) == 3 and f(3) == 9 and f(4) is None


@pytest.mark.parametrize("text", ["num:0 => num:1\nnum:0 => num:2", "num:0 num:1", "num:0 => (K"])
def test_bad_tables_are_rejected(term, text):
    with pytest.raises(ValueError):
        parse_oracle_table(text, _Env(term.kit, {}), term)


def test_representer_trace_has_one_question(term, ext):
    res, trace = dialogue_apply(ext, representer(term), num(term, 2), 10**5)
    sh = term.show
    assert trace.format(sh).splitlines() == [f"? {sh(num(term, 2))}", f"! {sh(num(term, 3))}",
                                              f"= {sh(num(term, 3))}"]


def test_outside_domain_and_empty_oracle(term, ext):
    res, trace = dialogue_apply(ext, representer(term), num(term, 40), 10**5)
    assert isinstance(res, OutsideDomain) and trace.format(term.show).startswith("outside-domain ")
    empty = make_extension(term, empty_oracle())
    res, trace = dialogue_apply(empty, representer(term), term.K, 10**5)
    assert isinstance(res, OutsideDomain) and res.query is term.K and not trace.steps


def test_kf_asks_nothing(term, ext):
    kk = ext.app(ext.K, term.S, Meter(10**5))
    res, trace = dialogue_apply(ext, kk, term.K, 10**5)
    assert res.element is term.S and trace.format(term.show) == f"= {term.show(term.S)}"


def test_non_pair_output_is_stuck(term, ext):
    res, trace = dialogue_apply(ext, term.kit["I"], term.K, 10**5)
    assert isinstance(res, Stuck) and trace.format(term.show).startswith("stuck ")


def test_combinators_do_not_depend_on_the_oracle(term, ext):
    other = make_extension(term, identity_oracle())
    assert other.K is ext.K and other.S is ext.S


def test_bot_witness_never_answers(term):
    ident = make_extension(term, identity_oracle())
    bot = nontotal_witness(term)
    short = dialogue_apply(ident, bot, term.K, 10**3)
    long = dialogue_apply(ident, bot, term.K, 10**4)
    assert isinstance(short[0], FuelExhausted) and isinstance(long[0], FuelExhausted)
    assert len(short[1].steps) < len(long[1].steps)


def test_two_question_machine(term, ext):
    res, trace = dialogue_apply(ext, double_query(term), num(term, 5), 10**5)
    assert res.element is num(term, 7) and len(trace.steps) == 2


@given(st.integers(min_value=0, max_value=2**32))
def test_dialogues_are_monotone_in_the_oracle(term, seed):
    small = make_extension(term, succ_table(term, size=8))
    big = make_extension(term, succ_table(term, size=16))
    rng = random.Random(seed)
    a = machine_sampler(small)(rng)
    b = num(term, rng.randrange(10))
    res, trace = dialogue_apply(small, a, b, 10**5)
    if isinstance(res, Value):
        res2, trace2 = dialogue_apply(big, a, b, 10**5)
        assert res2.element is res.element and trace2.steps == trace.steps


@given(st.integers(min_value=0, max_value=2**32))
def test_trace_prefixes_replay(term, ext, seed):
    """Each proper prefix of a dialogue makes the machine ask the next question."""
    rng = random.Random(seed)
    a = machine_sampler(ext)(rng)
    b = num(term, rng.randrange(14))
    res, trace = dialogue_apply(ext, a, b, 10**5)
    k = term.kit
    for i, (q, _) in enumerate(trace.steps):
        s = k.seq([b, *[ans for _, ans in trace.steps[:i]]])
        done, payload = k.unflag(term.app(a, s, Meter(10**6)), Meter(10**6))
        assert not done and payload is q



def test_compose_tables(term):
    h = succ_table(term)
    hh = compose_tables(h, h)
    assert hh(num(term, 3)) is num(term, 5) and hh(num(term, 15)) is None


def _t_agrees(ext, samples, seed):
    base, kit = ext.base, ext.base.kit
    rng = random.Random(seed)
    draw = machine_sampler(ext)
    for _ in range(samples):
        x, y, c = draw(rng), draw(rng), draw(rng)
        s = kit.seq([c, *[kit.numeral(rng.randrange(16)) for _ in range(rng.randint(0, 2))]])

        def host(f):
            try:
                return Value(reference_t(ext, x, y, s, Meter(f)))
            except Undefined as exc:
                from pcabench.kernel import outcome_of
                return outcome_of(exc)

        ok, l, r = kleene_agree(base, lambda f: eval_apps(base, build_t(base, x, y), [s], f), host, 10**5)
        assert ok, (base.show(x), base.show(y))


def test_t_matches_the_host_loop(ext):
    _t_agrees(ext, 60, 1)


def test_t_compiled_without_primitives_matches_the_host_loop(sk):
    """Without a strict flag primitive, junk machine outputs may give ``T``
    an accidental value where the host loop is stuck, so only dialogues
    the host loop completes are compared."""
    ext = make_extension(sk, succ_table(sk, size=6))
    kit = sk.kit
    rng = random.Random(2)
    draw = machine_sampler(ext, raw_share=0)
    compared = 0
    for _ in range(30):
        x, y, c = draw(rng), draw(rng), draw(rng)
        s = kit.seq([c, *[kit.numeral(rng.randrange(6)) for _ in range(rng.randint(0, 2))]])
        try:
            want = reference_t(ext, x, y, s, Meter(10**6))
        except Undefined:
            continue
        compared += 1
        got = eval_apps(sk, build_t(sk, x, y), [s], 10**7)
        assert isinstance(got, Value) and got.element is want
    assert compared >= 3


def test_fixpoint_inside_the_extension(term, ext):
    fact = ext.kit.compile_source(r"Y (\r n. iszero n (\z. succ zero) (\z. mul n (r (pred n))) I)")
    assert term.kit.decode_num(ext.app(fact, num(term, 4), Meter(10**7))) == 24


def test_builtin_oracle_model_simulates(numeric):
    ext = make_extension(numeric, succ_table(numeric))
    assert check_oracle_machine(ext, 20, 5, 10**5).passed


def test_trace_format_of_fuel_exhaustion():
    assert DialogueTrace([], FuelExhausted()).format(str) == "fuel-exhausted"
