from __future__ import annotations

import random

import pytest

from pcabench.kernel import Meter, apply
from pcabench.morphisms import (ApplicativeMorphism, carry_representer, check_decidable, check_iso,
                                check_preorder, check_realizer, check_representable,
                                compose_morphisms, defined_pairs, identity_morphism,
                                transitivity_witness, turing_leq)
from pcabench.oracle import (double_query, iota, lift_morphism, machine_sampler, make_extension,
                             projection_oracle, representer, succ_table, compose_tables)


@pytest.fixture(scope="module")
def pairs(term):
    return defined_pairs(term, 40, 3, 10**5)


def test_defined_pairs_are_defined(term, pairs):
    for a, b, c in pairs:
        assert apply(term, a, b, 10**5).element is c


def test_identity_realizer(term, pairs):
    assert check_realizer(identity_morphism(term), pairs, 3, 10**5).passed


def test_iota_realizer_and_decider(ext, pairs):
    io = iota(ext)
    assert check_realizer(io, pairs, 3, 10**5).passed
    assert check_decidable(io, io.decider, 10**5).passed


def test_wrong_realizer_and_decider_are_caught(term, ext, pairs):
    io = iota(ext)
    assert not check_realizer(io, pairs, 3, 10**5, realizer=ext.K).passed
    assert not check_decidable(io, term.kit["I"], 10**5).passed


def test_composition_with_identity(term, ext, pairs):
    io = iota(ext)
    both = compose_morphisms(io, identity_morphism(term))
    assert check_realizer(both, pairs, 3, 10**6).passed
    assert check_iso(both, io, ext.kit["I"], ext.kit["I"], [a for a, _, _ in pairs], 3, 10**5).passed
    with pytest.raises(ValueError):
        compose_morphisms(identity_morphism(term), io)


def test_preorder_needs_matching_endpoints(term, ext):
    with pytest.raises(ValueError):
        check_preorder(identity_morphism(term), iota(ext), term.kit["I"], [], 0, 10)


def test_preorder_witness_must_land_in_the_image(term, pairs):
    ident = identity_morphism(term)
    assert not check_preorder(ident, ident, term.K, [a for a, _, _ in pairs], 0, 10**4).passed


def test_image_of_empty_map_raises(term):
    m = ApplicativeMorphism(term, term, lambda a: (), term.K)
    with pytest.raises(ValueError):
        m.image(term.K)


def test_projection_is_representable_by_fst(term):
    ident = identity_morphism(term)
    rng = random.Random(0)
    kit = term.kit
    points = [kit.pair(term.sample(rng), term.sample(rng), Meter(100)) for _ in range(30)]
    assert check_representable(ident, projection_oracle(term), kit["fst"], points, 0, 10**4).passed
    assert not check_representable(ident, projection_oracle(term), kit["snd"], points, 0, 10**4).passed


def test_turing_reflexive_and_false_witness(term, ext):
    f = ext.oracle
    assert turing_leq(f, ext, representer(term), fuel=10**5).passed
    assert not turing_leq(f, ext, term.kit["succ"], fuel=10**5).passed
    assert turing_leq(f, ext, representer(term), fuel=10**5).lines[0].startswith("PASS leq[succ<=succ]")


def test_double_question_witness(term, ext):
    h = ext.oracle
    assert turing_leq(compose_tables(h, h), ext, double_query(term), fuel=10**6).passed


def test_transitivity(term):
    h = succ_table(term)
    g = compose_tables(h, h, "g")
    f = compose_tables(g, g, "f")
    ext_g, ext_h = make_extension(term, g), make_extension(term, h)
    w = transitivity_witness(ext_g, ext_h, double_query(term), double_query(term))
    assert turing_leq(f, ext_h, w, fuel=10**6).passed


def test_lift_has_the_same_map_and_carries_representers(term, ext):
    io = iota(ext)
    lifted = lift_morphism(io, io.decider, representer(term), ext)
    rng = random.Random(1)
    for _ in range(10):
        a = term.sample(rng)
        assert lifted.map(a) == io.map(a)
    rep = carry_representer(identity_morphism(ext), representer(term))
    res = ext.app(rep, term.kit.numeral(3), Meter(10**6))
    assert res is term.kit.numeral(4)


def test_lift_realizer_simulates_the_extension(term, ext):
    io = iota(ext)
    lifted = lift_morphism(io, io.decider, representer(term), ext)
    pairs = defined_pairs(ext, 15, 9, 10**5, sampler=machine_sampler(ext))
    assert check_realizer(lifted, pairs, 9, 10**6).passed
    assert check_decidable(lifted, lifted.decider, 10**6).passed
