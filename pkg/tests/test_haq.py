import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ietlab.exactnum import IrrationalBasis, Real
from ietlab.haq import (
    CrossCheckFailed,
    GroupWord,
    HaqSpec,
    HElement,
    NotInKernel,
    StepProfile,
    breakpoint_disjointness,
    commutator_membership,
    commutator_word,
    decompose,
    default_probes,
    ell,
    faithful_lamplighter_check,
    gen,
    is_torsion,
    local_perm,
    omega_image_commutator,
    omega_image_kernel,
    parse_word,
    profile,
    random_kernel_word,
    random_word,
    rot,
    saf_of,
    torsion_order,
    validate_images,
    witness_search,
)
from ietlab.ietcore import rotation
from ietlab.permgrp import GeneratedGroup, Perm

SPEC = HaqSpec.make(4, ["(1,2)", "(3,4)"])
SPEC3 = HaqSpec.make(3, ["(1,3)"], s=2)
B = SPEC.basis


def P(text, q=4):
    return Perm.from_cycles(text, q)


seeds = st.integers(0, 10 ** 6)


def test_spec_json_roundtrip():
    obj = SPEC3.to_json()
    assert obj == {"q": 3, "Qgens": ["(1,3)"], "s": 2, "alphas": "sqrt-primes"}
    assert HaqSpec.from_json(obj) == SPEC3
    alt = HaqSpec.from_json({"q": 3, "Qgens": [[3, 2, 1]], "alphas": {"sqrt": [3]}})
    assert alt.basis.radicands == (3,)
    with pytest.raises(ValueError):
        HaqSpec.from_json({"q": 3, "Qgens": [], "s": 2, "alphas": {"sqrt": [3]}})


def test_spec_rejects_dependent_rotations():
    with pytest.raises(ValueError):
        HaqSpec(3, (), IrrationalBasis.sqrt_primes(1), ((1,), (2,)))


def test_ell_examples():
    a1 = Real.of(B, 0, [1])
    assert ell(rot(SPEC)) == a1
    assert ell(gen(SPEC, 0)) == 0
    assert ell(commutator_word(rot(SPEC), gen(SPEC, 0))) == 0


def test_ell_crosscheck_catches_corruption():
    w = rot(SPEC)
    object.__setattr__(w, "iet", rotation(Real.of(B, 0, [2])))
    with pytest.raises(CrossCheckFailed):
        ell(w)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_ell_is_a_morphism(seed):
    rng = random.Random(seed)
    f, g = random_word(SPEC3, rng, 4), random_word(SPEC3, rng, 4)
    assert ell(f * g) == (ell(f) + ell(g)).mod1()
    assert saf_of(f * g) == tuple(a + b for a, b in zip(saf_of(f), saf_of(g)))


def test_decompose_examples():
    Pf, a, Qf = decompose(rot(SPEC))
    assert Pf.iet.is_identity() and a == Real.of(B, 0, [1])
    Pf, a, _ = decompose(gen(SPEC, 0))
    assert Pf.iet == SPEC.E(P("(1,2)")) and a == 0
    f = rot(SPEC) * gen(SPEC, 0)
    Pf, a, Qf = decompose(f)
    assert Pf.iet == (rot(SPEC) * gen(SPEC, 0) * rot(SPEC, k=-1)).iet
    assert Pf.iet * rotation(a) == f.iet == rotation(a) * Qf.iet


def test_is_torsion():
    assert is_torsion(gen(SPEC, 0))
    assert not is_torsion(rot(SPEC))
    assert is_torsion(commutator_word(rot(SPEC), gen(SPEC, 1)))


def test_local_perm_requires_kernel():
    with pytest.raises(NotInKernel):
        local_perm(rot(SPEC).iet, Real.of(B), 4)
    with pytest.raises(ValueError):
        local_perm(SPEC.E(P("(1,2)")), Real.of(B, Fraction(1, 2)), 4)
    assert local_perm(SPEC.E(P("(1,2)")), Real.of(B, Fraction(1, 9)), 4) == P("(1,2)")


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_profile_compose_matches_iet(seed):
    rng = random.Random(seed)
    f = random_kernel_word(SPEC3, rng, 5)
    g = random_kernel_word(SPEC3, rng, 5)
    assert profile(f.iet, 3) * profile(g.iet, 3) == profile((f * g).iet, 3)
    assert profile(f.iet, 3).to_iet() == f.iet


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_pair_arithmetic_matches_iet(seed):
    rng = random.Random(seed)
    f = random_word(SPEC3, rng, 6)
    g = random_word(SPEC3, rng, 6)
    e = f.element() * g.element().inverse()
    assert e.realize() == (f * g.inverse()).iet
    assert (f.element() * f.element().inverse()).is_identity()


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_torsion_order_matches_iteration(seed):
    f = random_kernel_word(SPEC, random.Random(seed), 4)
    assert torsion_order(f.iet, 4) == f.iet.order()


def test_profile_basics():
    ident = StepProfile.identity(4, B)
    p = profile(commutator_word(rot(SPEC), gen(SPEC, 0)).iet, 4)
    assert ident * p == p == p * ident
    a = StepProfile.constant(4, P("(1,2)"), B)
    b = StepProfile.constant(4, P("(2,3)"), B)
    assert (a * b).values == (P("(1,2)") * P("(2,3)"),)
    assert torsion_order(ident) == 1
    assert torsion_order(SPEC.E(P("(1,3)")), 4) == 2


def test_image_groups():
    lamp = HaqSpec.make(4, ["(1,3)"])
    assert omega_image_kernel(lamp) == GeneratedGroup(4, [P("(1,3)"), P("(2,4)")])
    assert omega_image_kernel(HaqSpec.make(4, [])).is_trivial()
    assert omega_image_commutator(HaqSpec.make(3, ["(1,3)"])).closure() == GeneratedGroup.alternating(3).closure()
    assert validate_images(SPEC, random.Random(3), samples=10)


def test_word_json():
    items = [{"rot": "a1"}, {"gen": 0}, {"inv": {"rot": "a1"}}, {"inv": {"gen": 0}}]
    w = parse_word(SPEC, items)
    assert w.iet == commutator_word(rot(SPEC), gen(SPEC, 0)).iet
    assert parse_word(SPEC, w.to_json()).iet == w.iet
    with pytest.raises(ValueError):
        parse_word(SPEC, [{"gen": 5}])
    with pytest.raises(ValueError):
        parse_word(SPEC, [{"rot": "a2"}])


def test_default_probes_hit_every_interval():
    for q in range(2, 8):
        sp = HaqSpec.make(q, ["(1,2)"])
        probes = default_probes(sp)
        cls = [int((sp.amount(p).mod1() * q).floor()) for p in probes]
        assert cls == list(range(q))


def test_witness_outcomes():
    assert witness_search(SPEC, Perm.identity(4)).status == "trivial"
    assert len(witness_search(SPEC, Perm.identity(4)).word) == 0
    assert witness_search(SPEC, P("(1,2)")).status == "impossible"
    res = witness_search(SPEC, P("(1,2)(3,4)"))
    assert res.status == "found" and len(res.factors) <= 3
    assert all(v == P("(1,2)(3,4)") for _, v in res.cut_values())
    starved = witness_search(SPEC, P("(1,2)(3,4)"), budget=1)
    assert starved.status == "unresolved"


def test_commutator_membership():
    assert commutator_membership(SPEC, P("(1,2)(3,4)"))
    assert not commutator_membership(SPEC, P("(1,2)"))


def test_lamplighter_faithfulness():
    lamp = HaqSpec.make(4, ["(1,3)"])
    assert faithful_lamplighter_check(lamp, samples=30)
    assert faithful_lamplighter_check(HaqSpec.make(4, []), samples=5)
    with pytest.raises(ValueError):
        faithful_lamplighter_check(SPEC)


def test_shared_breakpoint_classes_detected():
    E = SPEC.E(P("(1,3)"))
    r = rotation(Real.of(B, Fraction(1, 4)))
    disjoint, _ = breakpoint_disjointness([E, r * E * ~r], 4)
    assert not disjoint
    a = rotation(Real.of(B, 0, [1]))
    disjoint, exact = breakpoint_disjointness([E, a * E * ~a], 4)
    assert disjoint and exact


def test_helement_letter_roundtrip():
    w = GroupWord(SPEC, ())
    assert w.element().is_identity()
    assert HElement.identity(SPEC).realize().is_identity()
