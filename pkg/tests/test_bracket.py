from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from pcabench.bracket import (App, Comb, ParseError, Var, apps, check_completeness, compile,
                              free_vars, is_safe, lambda_star, parse, random_term, substitute,
                              tokenize)
from pcabench.kernel import Value, eval_apps, render
from pcabench.oracle import compile_in
from pcabench.stdlib import spine_decode


def test_identity_abstracts_to_skk(sk):
    assert render(compile(sk, lambda_star(["x"], Var("x")))) == "S K K"


def test_constant_body_uses_k(sk):
    t = lambda_star(["x"], Comb("S"))
    assert t == App(Comb("K"), Comb("S"))


def test_first_variable_is_first_argument(sk):
    e = compile(sk, lambda_star(["x", "y"], Var("x")))
    r = eval_apps(sk, e, [sk.K, sk.S], 1000)
    assert r.element is sk.K


def test_lambda_star_rejects_stray_and_repeated_variables():
    with pytest.raises(ValueError):
        lambda_star(["x"], Var("y"))
    with pytest.raises(ValueError):
        lambda_star(["x", "x"], Var("x"))


def test_safety_counts_arguments(term):
    spare = term.spare
    assert is_safe(apps(Comb("K"), Var("x")), spare)
    assert not is_safe(apps(Comb("K"), Var("x"), Var("y")), spare)
    assert is_safe(apps(Comb("S"), Comb("K"), Comb("K")), spare)
    assert not is_safe(apps(Var("x"), Comb("K")), spare)


def test_free_vars_and_substitute():
    t = apps(Var("x"), Comb("K"), Var("y"))
    assert free_vars(t) == {"x", "y"}
    assert free_vars(substitute(t, {"x": 1})) == {"y"}


def test_tokens_include_hyphenated_names_and_codes():
    kinds = [k for k, _, _ in tokenize("bot-witness #12 num:3 seq[a, b]")]
    assert kinds == ["name", "code", "num", "seq", "name", "sym", "name", "sym", "eof"]


@pytest.mark.parametrize("text, pos", [("(\\x. x", 6), ("\\. x", 1), ("x )", 2), ("?", 0)])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.pos == pos


def test_surface_lambda_and_numerals(term):
    k = term.kit
    e = compile_in(term, r"(\x y. add x y) num:2 num:3")
    assert k.decode_num(e) == 5


def test_seq_literal_decodes_in_order(term):
    u = compile_in(term, "seq[K, S, num:1]")
    assert spine_decode(term, u) == [term.K, term.S, term.kit.numeral(1)]


@given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=1, max_value=3))
def test_substitution_law_property(term, seed, n):
    rng = random.Random(seed)
    xs = [f"x{i}" for i in range(n)]
    body = random_term(rng, xs, lambda: term.sample(rng), rng.randint(1, 7))
    args = [term.sample(rng) for _ in xs]
    e = compile(term, lambda_star(xs, body, term.spare))
    for k in range(n):
        assert isinstance(eval_apps(term, e, args[:k], 10**4), Value)
    full = eval_apps(term, e, args, 10**4)
    try:
        direct = compile(term, substitute(body, dict(zip(xs, args))), 10**4)
    except Exception:
        direct = None
    if isinstance(full, Value) and direct is not None:
        assert full.element is direct


@pytest.mark.parametrize("model", ["term", "numeric"])
def test_completeness_check_passes(model, request):
    pca = request.getfixturevalue(model)
    assert check_completeness(pca, 40, 3, 10**4).passed


def test_completeness_check_catches_a_broken_abstraction(term, monkeypatch):
    import pcabench.bracket as bracket

    real = bracket.lambda_star

    def broken(vars, body, spare=None):
        return real(list(reversed(vars)), body, spare)  # swaps argument order

    monkeypatch.setattr(bracket, "lambda_star", broken)
    assert not check_completeness(term, 60, 3, 10**4).passed
