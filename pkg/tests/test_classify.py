import json
import math

from ietlab.classify import (
    UNDETERMINED,
    abelianization,
    classify,
    hermite_normal_form,
    kernel_bounds,
    non_isomorphism,
)
from ietlab.constructions import catalog_entry
from ietlab.exactnum import IrrationalBasis
from ietlab.haq import HaqSpec
from ietlab.permgrp import GeneratedGroup, Perm


def test_metabelian():
    r = classify(HaqSpec.make(3, ["(1,3)"]))
    assert r.derived_length == 2 and not r.is_abelian
    assert r.lamplighter is None
    assert r.abelianization.F == [2] and r.abelianization.free_rank == 1


def test_lamplighter():
    r = classify(HaqSpec.make(4, ["(1,3)"]))
    assert r.lamplighter == {"L": [2], "k": 1}
    assert r.abelianization.F == r.lamplighter["L"]
    assert any(c.rule == "V-abelian-implies-lamplighter" for c in r.certificates)


def test_not_virtually_solvable():
    r = classify(HaqSpec.make(5, ["(1,2)"]))
    assert r.virtually_solvable == "no" and r.derived_length is None
    assert "not-linear" in r.labels
    cert = next(c for c in r.certificates if c.rule.startswith("alternating"))
    assert cert.witness["contains_A_q"] and cert.witness["q"] == 5


def test_empty_generators_is_free_abelian():
    r = classify(HaqSpec.make(3, [], s=2))
    assert r.is_abelian and r.labels == []
    assert r.abelianization.F == [] and r.abelianization.free_rank == 2


def test_undetermined_verdict():
    # PSL(2,11) in its degree-11 action: nonsolvable, contains an 11-cycle, misses A_11
    a = Perm.from_cycles("(1,2,3,4,5,6,7,8,9,10,11)", 11)
    b = Perm.from_cycles("(1,10)(2,8)(3,11)(5,7)", 11)
    G = GeneratedGroup(11, [a, b])
    assert G.order() == 660
    r = classify(HaqSpec(11, (a, b), IrrationalBasis.sqrt_primes(1)))
    assert r.virtually_solvable == UNDETERMINED
    assert r.derived_length is None
    assert "not-linear" not in r.labels


def test_gap_resolved_by_witness():
    sp = HaqSpec.make(4, ["(1,2)", "(3,4)"])
    lo, up = kernel_bounds(sp)
    assert lo.is_trivial() and up.order() == 2 and lo.is_normal_in(up)
    ab = abelianization(sp)
    assert ab.resolved and ab.F == [2]
    assert ab.witnesses[0].status == "found"
    assert math.prod(ab.lower) <= math.prod(ab.F) <= math.prod(abelianization(sp, budget=1).upper)


def test_gap_left_open_without_budget():
    ab = abelianization(HaqSpec.make(4, ["(1,2)", "(3,4)"]), budget=1, probes=[])
    assert not ab.resolved
    assert ab.lower == [2] and ab.upper == [2, 2]


def test_report_json_is_deterministic():
    sp = catalog_entry("3solv-q4-pair")
    a, b = classify(sp).to_json(), classify(sp).to_json()
    assert a == b
    obj = json.loads(a)
    assert obj["solvable"] == {"dl": 3}
    assert list(obj) == sorted(obj)


def test_realization_independence():
    for name in ("metabelian-q3", "lamplighter", "3solv-q4-pair", "nvs-A5"):
        a = classify(catalog_entry(name)).to_json(realization=False)
        b = classify(catalog_entry(name, basis=IrrationalBasis.sqrt_of([7]))).to_json(realization=False)
        assert a == b


def test_hnf():
    assert hermite_normal_form([[2, 4], [1, 1]]) == hermite_normal_form([[1, 1], [0, 2]])
    assert hermite_normal_form([[0, 0]]) == []
    assert hermite_normal_form([[1, 0]]) != hermite_normal_form([[2, 0]])


def test_non_isomorphism_rank():
    ev = non_isomorphism(HaqSpec.make(3, ["(1,3)"], s=1), HaqSpec.make(3, ["(1,3)"], s=2))
    assert "rank" in {e["type"] for e in ev}


def test_non_isomorphism_sym_vs_alt():
    ev = non_isomorphism(catalog_entry("nvs-S5"), catalog_entry("nvs-A5"))
    f = next(e for e in ev if e["type"] == "F")
    assert f["detail"]["F_a"] == [2] and f["detail"]["F_b"] == []


def test_non_isomorphism_identical_is_empty():
    assert non_isomorphism(catalog_entry("lamplighter"), catalog_entry("lamplighter")) == []


def test_non_isomorphism_module():
    a = catalog_entry("lamplighter")
    b = catalog_entry("lamplighter", basis=IrrationalBasis.sqrt_of([3]))
    types = [e["type"] for e in non_isomorphism(a, b)]
    assert types == ["saf-module"]
    c = HaqSpec(4, a.qgens, a.basis, ((2,),))
    assert [e["type"] for e in non_isomorphism(a, c)] == ["saf-module"]
