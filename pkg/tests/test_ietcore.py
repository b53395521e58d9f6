from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ietlab.exactnum import IrrationalBasis, Real
from ietlab.ietcore import (
    IntervalExchange,
    NotDeltaRational,
    classes_mod_q,
    compose,
    from_lengths,
    from_permutation,
    rotation,
)
from ietlab.permgrp import Perm

B = IrrationalBasis.sqrt_primes(2)


def rot_amounts():
    return st.builds(lambda r, a, b: Real.of(B, r, [a, b]),
                     st.fractions(0, 1, max_denominator=12), st.integers(-4, 4), st.integers(-4, 4))


def rational_iets():
    return st.integers(1, 6).flatmap(
        lambda q: st.permutations(list(range(q))).map(lambda p: from_permutation(q, Perm(p), B)))


def product(fs):
    out = fs[0]
    for f in fs[1:]:
        out = compose(out, f)
    return out


iets = st.one_of(rot_amounts().map(rotation), rational_iets())
words = st.lists(iets, min_size=1, max_size=4).map(product)


points = st.builds(lambda r, a: Real.of(B, r, [a, 0]).mod1(), st.fractions(0, 1, max_denominator=30), st.integers(-3, 3))


@settings(max_examples=80, deadline=None)
@given(words, words, points)
def test_compose_evaluates_pointwise(f, g, x):
    assert (f * g)(x) == f(g(x))


@settings(max_examples=80, deadline=None)
@given(words, words, words)
def test_associative(f, g, h):
    assert (f * g) * h == f * (g * h)


@settings(max_examples=80, deadline=None)
@given(words)
def test_inverse(f):
    assert (f * f.inverse()).is_identity()
    assert (f.inverse() * f).is_identity()


@settings(max_examples=60, deadline=None)
@given(words)
def test_json_roundtrip(f):
    assert IntervalExchange.from_json(f.to_json(), B) == f


@given(rot_amounts(), rot_amounts())
def test_rotations_add(a, b):
    assert rotation(a) * rotation(b) == rotation(a + b)


def test_identity_cases():
    third = Real.of(B, Fraction(1, 3))
    assert from_lengths([third] * 3, Perm.identity(3)).is_identity()
    assert rotation(Real.of(B)).is_identity()
    half = rotation(Real.of(B, Fraction(1, 2)))
    assert (half * half).is_identity()


def test_two_interval_rotation():
    a = Real.of(B, 0, [1, 0])
    f = from_lengths([a, 1 - a], Perm([1, 0]))
    assert f == rotation(1 - a)


def test_lengths_and_perm():
    f = from_permutation(4, Perm.from_cycles("(1,3)", 4), B)
    assert f.lengths == [Fraction(1, 4)] * 4
    assert f.perm == Perm([2, 1, 0, 3])


def test_order_errors_and_values():
    with pytest.raises(NotDeltaRational):
        rotation(Real.of(B, 0, [1, 0])).order()
    assert rotation(Real.of(B, Fraction(1, 6))).order() == 6


def test_classes_mod_q():
    assert classes_mod_q([], 3) == []
    assert classes_mod_q([Real.of(B)], 4) == [Real.of(B, Fraction(k, 4)) for k in range(4)]
    at = Real.of(B, Fraction(-1, 3), [1, 0])
    assert classes_mod_q([at], 3) == sorted((at + Fraction(k, 3)).mod1() for k in range(3))


def test_bad_inputs():
    q = Real.of(B, Fraction(1, 4))
    with pytest.raises(ValueError):
        from_lengths([q, q], Perm([1, 0]))
    with pytest.raises(ValueError):
        from_permutation(3, Perm.identity(4), B)
    with pytest.raises(ValueError):
        from_permutation(2, Perm.identity(2), B)(Real.of(B, 1))
    bad = {"breakpoints": [{"rat": "0"}, {"rat": "1/2"}], "deltas": [{"rat": "0"}, {"rat": "1/4"}]}
    with pytest.raises(ValueError):
        IntervalExchange.from_json(bad, B)
