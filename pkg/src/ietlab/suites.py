"""Randomized and exhaustive property suites, run by ``ietlab verify``.

Each suite returns a list of CheckResult; a failed check carries the first
counterexample found.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exactnum import IrrationalBasis, Real, decompose_mod
from .haq import (
    HaqSpec,
    StepProfile,
    breakpoint_disjointness,
    commutator_word,
    decompose,
    ell,
    faithful_lamplighter_check,
    local_perm,
    profile,
    random_kernel_word,
    random_word,
    rot_vec,
    torsion_order,
    validate_images,
)
from .ietcore import IntervalExchange, rotation
from .permgrp import GeneratedGroup, Perm, abelian_invariants, build_W, build_W0, commutator


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    trials: int
    counterexample: dict | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.suite}/{self.name} ({self.trials} cases)"
        if self.counterexample:
            out += f"\n    counterexample: {self.counterexample}"
        return out


@dataclass
class _Check:
    suite: str
    name: str
    trials: int = 0
    bad: dict | None = None

    def case(self, ok: bool, **info) -> None:
        self.trials += 1
        if not ok and self.bad is None:
            self.bad = {k: str(v) for k, v in info.items()}

    def result(self) -> CheckResult:
        return CheckResult(self.suite, self.name, self.bad is None, self.trials, self.bad)


def random_perm(rng: random.Random, q: int) -> Perm:
    img = list(range(q))
    rng.shuffle(img)
    return Perm(img)


def _random_spec(rng: random.Random, qmax: int = 6, s: int = 1) -> HaqSpec:
    q = rng.randint(2, qmax)
    gens = [random_perm(rng, q) for _ in range(rng.randint(1, 2))]
    return HaqSpec(q, tuple(gens), IrrationalBasis.sqrt_primes(s))


# individual suites -------------------------------------------------------------


def suite_conjugation(rng: random.Random, n: int = 200) -> list[CheckResult]:
    """Local permutations of R_g E_t R_-g and [R_g, E_t] against the closed forms."""
    conj = _Check("conjugation", "conjugate-closed-form")
    comm = _Check("conjugation", "commutator-closed-form")
    prof = _Check("conjugation", "two-piece-profile")
    basis = IrrationalBasis.sqrt_primes(1)
    for _ in range(n):
        q = rng.randint(2, 8)
        tau = random_perm(rng, q)
        k = rng.choice([i for i in range(-9, 10) if i])
        gamma = Real.of(basis, Fraction(rng.randrange(q), q), [k])
        j0, gt = decompose_mod(gamma, q)
        sig = Perm.cycle(q)
        s0, s1 = sig ** j0, sig ** (j0 + 1)
        E = IntervalExchange.from_permutation(q, tau, basis)
        R = rotation(gamma)
        f = R * E * ~R
        c = f * ~E
        # points on both sides of g~: 0, rationals in [0, 1/q), and g~ itself
        xs = [Real.of(basis), gt] + [Real.of(basis, Fraction(i, 5 * q)) for i in range(1, 5)]
        for x in xs:
            left = x < gt
            want = s1 * tau * ~s1 if left else s0 * tau * ~s0
            conj.case(local_perm(f, x, q) == want, q=q, tau=tau, gamma=gamma, x=x)
            cw = commutator(s1, tau) if left else commutator(s0, tau)
            comm.case(local_perm(c, x, q) == cw, q=q, tau=tau, gamma=gamma, x=x)
        p = profile(f, q)
        expect_pieces = 1 if s1 * tau * ~s1 == s0 * tau * ~s0 else 2
        prof.case(len(p.points) == expect_pieces and (expect_pieces == 1 or p.points[1] == gt),
                  q=q, tau=tau, gamma=gamma, profile=p)
    return [conj.result(), comm.result(), prof.result()]


def suite_ww0(rng: random.Random, n: int = 50) -> list[CheckResult]:
    """W0 = [W, W] as sets, for S(Q) generated by at most two random permutations."""
    chk = _Check("WW0", "W0-equals-derived-W")
    for _ in range(n):
        q = rng.randint(2, 7)
        SQ = GeneratedGroup(q, [random_perm(rng, q) for _ in range(rng.randint(1, 2))])
        W0 = build_W0(SQ)
        DW = build_W(SQ).derived_subgroup()
        chk.case(W0.closure() == DW.closure(), q=q, gens=[str(g) for g in SQ.gens])
    return [chk.result()]


def suite_morphism(rng: random.Random, n: int = 100) -> list[CheckResult]:
    add = _Check("morphism", "ell-additive")
    saf = _Check("morphism", "n-additive")
    for _ in range(n):
        sp = _random_spec(rng, s=rng.randint(1, 2))
        f = random_word(sp, rng, rng.randint(1, 5))
        g = random_word(sp, rng, rng.randint(1, 5))
        add.case(ell(f * g) == (ell(f) + ell(g)).mod1(), f=f, g=g)
        saf.case((f * g).n_vector() == tuple(a + b for a, b in zip(f.n_vector(), g.n_vector())), f=f, g=g)
    return [add.result(), saf.result()]


def suite_decomposition(rng: random.Random, n: int = 100) -> list[CheckResult]:
    pf = _Check("decomposition", "f=P_f.R_l=R_l.Q_f")
    sub = _Check("decomposition", "P_h1h2=P_h1.P_h2.[P_h2^-1,R_l(h1)]")
    for _ in range(n):
        sp = _random_spec(rng)
        h1 = random_word(sp, rng, rng.randint(1, 5))
        h2 = random_word(sp, rng, rng.randint(1, 5))
        P, a, Q = decompose(h1)
        R = rotation(a)
        pf.case(P.iet * R == h1.iet == R * Q.iet and ell(P) == 0 and ell(Q) == 0, f=h1)
        P1, P2, P12 = decompose(h1)[0], decompose(h2)[0], decompose(h1 * h2)[0]
        Rl = rot_vec(sp, h1.n_vector())
        rhs = P1 * P2 * commutator_word(P2.inverse(), Rl)
        sub.case(P12.iet == rhs.iet, h1=h1, h2=h2)
    return [pf.result(), sub.result()]


def suite_profile(rng: random.Random, n: int = 100) -> list[CheckResult]:
    comp = _Check("profile", "profile-compose-vs-iet-compose")
    rec = _Check("profile", "reconstruction")
    ident = _Check("profile", "identity-criterion")
    pair = _Check("profile", "pair-arithmetic-vs-iet")
    for _ in range(n):
        sp = _random_spec(rng, qmax=8)
        f = random_kernel_word(sp, rng, rng.randint(1, 5))
        g = random_kernel_word(sp, rng, rng.randint(1, 5))
        pf, pg = profile(f.iet, sp.q), profile(g.iet, sp.q)
        comp.case(pf * pg == profile((f * g).iet, sp.q), f=f, g=g)
        rec.case(pf.to_iet() == f.iet, f=f)
        ident.case(pf.is_identity() == f.iet.is_identity(), f=f)
        h = random_word(sp, rng, rng.randint(1, 6))
        pair.case(h.element().realize() == h.iet, h=h)
    return [comp.result(), rec.result(), ident.result(), pair.result()]


def suite_torsion(rng: random.Random, n: int = 100) -> list[CheckResult]:
    chk = _Check("torsion", "torsion-order-vs-iterated-order")
    for _ in range(n):
        sp = _random_spec(rng, qmax=6)
        f = random_kernel_word(sp, rng, rng.randint(1, 4))
        chk.case(torsion_order(f.iet, sp.q) == f.iet.order(), f=f)
    return [chk.result()]


def _profile_closure(gens: list[StepProfile], cap: int) -> set | None:
    seen = {StepProfile.identity(gens[0].q, gens[0].basis)}
    todo = list(seen)
    while todo:
        p = todo.pop()
        for g in gens:
            r = p * g
            if r not in seen:
                if len(seen) >= cap:
                    return None
                seen.add(r)
                todo.append(r)
    return seen


def suite_abelian_criterion(rng: random.Random, n: int = 40) -> list[CheckResult]:
    """A subgroup of ker l is abelian iff the groups of its local permutations are."""
    chk = _Check("abelian-criterion", "abelian-iff-local-groups-abelian")
    done = 0
    while done < n:
        sp = _random_spec(rng, qmax=5)
        gens = [random_kernel_word(sp, rng, rng.randint(1, 3)).element().kernel for _ in range(2)]
        group = _profile_closure(gens, 1000)
        if group is None:
            continue
        done += 1
        brute = all(a * b == b * a for a in group for b in gens)
        pts = sorted({x for g in gens for x in g.points})
        local = all(GeneratedGroup(sp.q, [g.value_at(x) for g in gens]).is_abelian() for x in pts)
        chk.case(brute == local, gens=[str(g) for g in gens])
    return [chk.result()]


def suite_images(rng: random.Random, n: int = 20) -> list[CheckResult]:
    chk = _Check("images", "local-perms-in-V-and-W0")
    eq = _Check("images", "W0-equals-derived-W")
    for _ in range(n):
        sp = _random_spec(rng, qmax=6)
        chk.case(validate_images(sp, rng, samples=5), spec=sp.to_json())
        eq.case(sp.W0 == sp.W.derived_subgroup(), spec=sp.to_json())
    return [chk.result(), eq.result()]


def _wreath(L: GeneratedGroup, G: GeneratedGroup) -> GeneratedGroup:
    """L wr G acting on |G| blocks of size deg(L), G permuting blocks regularly."""
    elems = G.elements()
    index = {g: i for i, g in enumerate(elems)}
    a, b = L.q, len(elems)
    gens = []
    for l in L.gens:
        img = list(range(a * b))
        for i in range(a):
            img[i] = l[i]
        gens.append(Perm(img))
    for g in G.gens:
        img = [0] * (a * b)
        for h, j in index.items():
            k = index[g * h]
            for i in range(a):
                img[j * a + i] = k * a + i
        gens.append(Perm(img))
    return GeneratedGroup(a * b, gens)


def _direct(L: GeneratedGroup, G: GeneratedGroup) -> GeneratedGroup:
    a, b = L.q, G.q
    gens = [Perm(list(l) + list(range(a, a + b))) for l in L.gens]
    gens += [Perm(list(range(a)) + [a + x for x in g]) for g in G.gens]
    return GeneratedGroup(a + b, gens)


WREATH_CASES = {
    "Z2 wr Z3": ("(1,2)", 2, "(1,2,3)", 3),
    "Z3 wr Z2": ("(1,2,3)", 3, "(1,2)", 2),
    "Z2xZ2 wr Z2": ("(1,2)(3,4);(1,3)(2,4)", 4, "(1,2)", 2),
}


def suite_wreath(rng: random.Random | None = None, n: int = 0) -> list[CheckResult]:
    chk = _Check("wreath", "ab(L wr G)=ab(L)xab(G)")
    for name, (lg, la, gg, gb) in WREATH_CASES.items():
        L = GeneratedGroup(la, [Perm.from_cycles(t, la) for t in lg.split(";")])
        G = GeneratedGroup(gb, [Perm.from_cycles(gg, gb)])
        Wr = _wreath(L, G)
        lhs = abelian_invariants(Wr, Wr.derived_subgroup())
        D = _direct(L, G)
        rhs = abelian_invariants(D, D.derived_subgroup())
        chk.case(lhs == rhs and Wr.order() == L.order() ** G.order() * G.order(),
                 case=name, wreath=lhs, product=rhs)
    return [chk.result()]


def suite_tower(rng: random.Random | None = None, n: int = 4) -> list[CheckResult]:
    from .constructions import solvable_tower

    chk = _Check("tower", "order-cycle-derived-length")
    prev = None
    for k in range(1, n + 1):
        lvl = solvable_tower(k)
        G = lvl.group
        ok = (G.derived_length() == k and G.contains(Perm.cycle(lvl.q))
              and lvl.full_cycle_witness == Perm.cycle(lvl.q)
              and (prev is None or G.order() == 2 * prev ** 2))
        chk.case(ok, n=k, order=G.order(), dl=G.derived_length())
        prev = G.order()
    return [chk.result()]


def suite_lamplighter(rng: random.Random, n: int = 100) -> list[CheckResult]:
    from .constructions import lamplighter_spec

    faithful = _Check("lamplighter", "faithful-on-random-words")
    broken = _Check("lamplighter", "shared-classes-detected")
    sp = lamplighter_spec()
    faithful.case(faithful_lamplighter_check(sp, samples=n, rng=rng), spec=sp.to_json())
    # conjugates by rotations in (1/q)Z share breakpoint classes mod 1/q
    E = sp.E(sp.qgens[0])
    for k in range(1, 4):
        r = rotation(Real.of(sp.basis, Fraction(k, sp.q)))
        disjoint, _ = breakpoint_disjointness([E, r * E * ~r], sp.q)
        broken.case(not disjoint, shift=Fraction(k, sp.q))
    return [faithful.result(), broken.result()]


def suite_realization(rng: random.Random | None = None, n: int = 0) -> list[CheckResult]:
    from .classify import classify
    from .constructions import catalog_entry

    chk = _Check("realization", "reports-identical-under-sqrt3-sqrt7")
    names = ["metabelian-q3", "lamplighter", "3solv-q4-pair", "nvs-q5-transposition",
             "nvs-S5", "nvs-A5", "nvs-S6", "nvs-A6", "nvs-S7", "nvs-A7"]
    for name in names:
        a = classify(catalog_entry(name)).to_json(realization=False)
        b = classify(catalog_entry(name, basis=IrrationalBasis.sqrt_of([3]))).to_json(realization=False)
        chk.case(a == b, spec=name)
    sp2 = HaqSpec.make(4, ["(1,3)"], s=2)
    a = classify(sp2).to_json(realization=False)
    b = classify(sp2.with_basis(IrrationalBasis.sqrt_of([3, 7]))).to_json(realization=False)
    chk.case(a == b, spec="lamplighter s=2")
    return [chk.result()]


SUITES: dict[str, tuple[Callable[..., list[CheckResult]], int]] = {
    "conjugation": (suite_conjugation, 200),
    "WW0": (suite_ww0, 50),
    "morphism": (suite_morphism, 100),
    "decomposition": (suite_decomposition, 100),
    "profile": (suite_profile, 100),
    "torsion": (suite_torsion, 100),
    "abelian-criterion": (suite_abelian_criterion, 40),
    "images": (suite_images, 20),
    "wreath": (suite_wreath, 0),
    "tower": (suite_tower, 4),
    "lamplighter": (suite_lamplighter, 100),
    "realization": (suite_realization, 0),
}


def run_suite(name: str, seed: int = 0, n: int | None = None) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    fn, default = SUITES[name]
    return fn(random.Random(seed), default if n is None else n)


def run_all(seed: int = 0) -> list[CheckResult]:
    out = []
    for name in SUITES:
        out += run_suite(name, seed)
    return out
