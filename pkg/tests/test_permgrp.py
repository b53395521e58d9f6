import math

import pytest
from hypothesis import given, settings, strategies as st

from ietlab.permgrp import (
    CapExceeded,
    GeneratedGroup,
    Perm,
    abelian_invariants,
    build_W,
    build_W0,
    commutator,
    conj_by_cycle_power,
    intersect,
    parse_perm,
    quotient_derived_length,
)


def perms(q):
    return st.permutations(list(range(q))).map(Perm)


small_groups = st.integers(2, 6).flatmap(lambda q: st.lists(perms(q), min_size=1, max_size=3).map(lambda g: GeneratedGroup(q, g)))


def test_cycle_notation_roundtrip():
    p = Perm.from_cycles("(1,3)(2,4,5)", 6)
    assert str(p) == "(1,3)(2,4,5)"
    assert str(Perm.identity(3)) == "()"
    assert parse_perm([3, 1, 2], 3) == Perm.from_cycles("(1,3,2)", 3)
    with pytest.raises(ValueError):
        Perm.from_cycles("(1,7)", 4)


def test_product_convention():
    a = Perm.from_cycles("(1,2)", 3)
    b = Perm.from_cycles("(2,3)", 3)
    assert (a * b)[1] == a[b[1]]
    assert commutator(a, b) == a * b * ~a * ~b


@pytest.mark.parametrize("q", range(1, 8))
def test_symmetric_and_alternating_orders(q):
    assert GeneratedGroup.symmetric(q).order() == math.factorial(q)
    if q >= 3:
        assert GeneratedGroup.alternating(q).order() == math.factorial(q) // 2


@pytest.mark.parametrize("q,dl", [(2, 1), (3, 2), (4, 3), (5, None), (6, None)])
def test_symmetric_derived_length(q, dl):
    assert GeneratedGroup.symmetric(q).derived_length() == dl


@settings(max_examples=60, deadline=None)
@given(small_groups)
def test_chain_agrees_with_closure(G):
    elems = G.closure()
    assert G.order() == len(elems)
    assert set(G.elements()) == set(elems)


@settings(max_examples=40, deadline=None)
@given(small_groups)
def test_derived_subgroup_by_brute_force(G):
    elems = list(G.closure())
    comms = {commutator(a, b) for a in elems for b in elems}
    D = G.derived_subgroup()
    assert D.closure() == GeneratedGroup(G.q, comms).closure()
    assert D.is_normal_in(G)


@settings(max_examples=40, deadline=None)
@given(small_groups)
def test_W0_is_derived_W(G):
    assert build_W0(G).closure() == build_W(G).derived_subgroup().closure()


@settings(max_examples=40, deadline=None)
@given(small_groups)
def test_abelianization_order(G):
    D = G.derived_subgroup()
    assert math.prod(abelian_invariants(G, D)) == G.order() // D.order()


def test_invariants():
    S3 = GeneratedGroup.symmetric(3)
    assert abelian_invariants(S3, GeneratedGroup.alternating(3)) == [2]
    assert abelian_invariants(GeneratedGroup(1)) == []
    c12 = GeneratedGroup(7, [Perm.from_cycles("(1,2,3,4)(5,6,7)", 7)])
    assert abelian_invariants(c12) == [12]
    with pytest.raises(ValueError):
        abelian_invariants(S3)


def test_intersect_and_quotient_length():
    S4 = GeneratedGroup.symmetric(4)
    D8 = GeneratedGroup(4, [Perm.cycle(4), Perm.from_cycles("(1,3)", 4)])
    assert D8.order() == 8
    A4 = GeneratedGroup.alternating(4)
    assert intersect(D8, A4).order() == 4
    assert quotient_derived_length(S4, A4) == 1
    assert quotient_derived_length(S4, GeneratedGroup(4)) == 3


def test_conj_by_cycle_power():
    assert conj_by_cycle_power(Perm.from_cycles("(1,3)", 4), 1) == Perm.from_cycles("(2,4)", 4)


def test_closure_cap(monkeypatch):
    monkeypatch.setenv("IETLAB_CLOSURE_CAP", "10")
    with pytest.raises(CapExceeded):
        GeneratedGroup.symmetric(5).elements()
    with pytest.raises(CapExceeded):
        GeneratedGroup.symmetric(5).closure()


def test_large_symmetric_fast():
    assert GeneratedGroup.symmetric(12).order() == math.factorial(12)
