from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from pcabench.kernel import Meter, Value, eval_apps
from pcabench.stdlib import check_laws, spine_decode

small = st.integers(min_value=0, max_value=8)
lists = st.lists(small, max_size=6)


def nums(pca, xs):
    return [pca.kit.numeral(x) for x in xs]


def run(pca, name, *args, fuel=10**5):
    r = eval_apps(pca, pca.kit[name], list(args), fuel)
    assert isinstance(r, Value), name
    return r.element


@pytest.mark.parametrize("model", ["term", "sk", "numeric"])
def test_numerals_decode(model, request):
    pca = request.getfixturevalue(model)
    for n in range(9):
        assert pca.kit.decode_num(pca.kit.numeral(n)) == n


@given(small, small)
def test_arithmetic_matches_host(term, n, m):
    k = term.kit
    assert k.decode_num(run(term, "add", k.numeral(n), k.numeral(m))) == n + m
    assert k.decode_num(run(term, "mul", k.numeral(n), k.numeral(m))) == n * m
    assert run(term, "numeq", k.numeral(n), k.numeral(m)) is k["true" if n == m else "false"]


@given(lists, small, small)
def test_sequence_ops_match_python_slicing(term, xs, i, j):
    # indices stay within bounds, as the operations require
    i, j = min(i, len(xs)), min(j, len(xs))
    k = term.kit
    u = k.seq(nums(term, xs))
    decode = lambda e: [k.decode_num(x) for x in spine_decode(term, e)]
    assert k.decode_num(run(term, "lh", u)) == len(xs)
    assert decode(run(term, "take", u, k.numeral(i))) == xs[:i]
    assert decode(run(term, "drop", u, k.numeral(i))) == xs[i:]
    lo, hi = sorted((i, j))
    assert decode(run(term, "slice", u, k.numeral(lo), k.numeral(hi))) == xs[lo:hi]
    assert decode(run(term, "cons", k.numeral(i), u)) == [i, *xs]
    assert decode(run(term, "snoc", u, k.numeral(i))) == [*xs, i]
    if i < len(xs):
        assert k.decode_num(run(term, "at", u, k.numeral(i))) == xs[i]


@given(lists, lists)
def test_cat_matches_list_concatenation(term, xs, ys):
    k = term.kit
    got = run(term, "cat", k.seq(nums(term, xs)), k.seq(nums(term, ys)))
    assert [k.decode_num(x) for x in spine_decode(term, got)] == xs + ys


def test_pure_and_enriched_sequences_agree(term, sk):
    xs = [3, 1, 4]
    for pca in (term, sk):
        u = pca.kit.seq(nums(pca, xs))
        assert [pca.kit.decode_num(x) for x in pca.kit.decode_seq(u)] == xs


def test_fixpoint_factorial(term):
    fact = term.kit.compile_source(r"Y (\r n. iszero n (\z. succ zero) (\z. mul n (r (pred n))) I)")
    assert term.kit.decode_num(term.app(fact, term.kit.numeral(4), Meter(10**6))) == 24


def test_thunked_branches_do_not_run_the_other_side(term):
    k = term.kit
    loop = k.compile_source(r"Y (\r x. r x)")
    text = r"\b. b (\z. zero) (\z. loop zero) I"
    from pcabench.oracle import compile_in
    pick = compile_in(term, text, loop=loop)
    assert run(term, "I", term.app(pick, k["true"], Meter(10**4))) is k.numeral(0)


@pytest.mark.parametrize("model", ["term", "sk", "numeric"])
def test_laws_pass_on_every_model(model, request):
    pca = request.getfixturevalue(model)
    report = check_laws(pca, 30, 11, 10**5, fix_samples=20)
    assert report.passed, str(report)


def test_pairs_are_literal(term):
    k = term.kit
    p = k.pair(term.K, term.S, Meter(100))
    assert k.unpair(p, Meter(1000)) == (term.K, term.S)
