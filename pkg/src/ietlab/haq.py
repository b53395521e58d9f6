"""The groups H_{A,Q} generated by irrational rotations and rational IETs.

An element f of H splits as f = P o R_l where l = l(f) is the irrational part
of its translations and P has only translations in (1/q)Z.  Such kernel
elements are encoded by step profiles: for x in [0, 1/q) the local
permutation w(f, x) records how f permutes the q points x + (i-1)/q, and
x -> w(f, x) is piecewise constant with finitely many jumps.  Products of
kernel elements are pointwise products of profiles, and conjugating by a
rotation shifts and relabels a profile, so H can be computed without
composing IETs at all.  The IET realization stays available as a cross-check.
"""

from __future__ import annotations

import bisect
import functools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import IrrationalBasis, Real, decompose_mod
from .ietcore import IntervalExchange, classes_mod_q, from_permutation, reduce_mod_q, rotation
from .permgrp import GeneratedGroup, Perm, build_V, build_W, build_W0, parse_perm


class NotInKernel(ValueError):
    """The element has a nonzero irrational translation part."""


class CrossCheckFailed(AssertionError):
    pass


# specs -----------------------------------------------------------------------


@dataclass(frozen=True)
class HaqSpec:
    """H = < R_{a_1}, ..., R_{a_s}, E_{t_1}, ..., E_{t_m} >.

    ``rotations`` holds the rotation generators as integer coefficient vectors
    over ``basis``; by default they are the basis irrationals themselves.
    """

    q: int
    qgens: tuple[Perm, ...]
    basis: IrrationalBasis
    rotations: tuple[tuple[int, ...], ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be positive")
        for t in self.qgens:
            if len(t) != self.q:
                raise ValueError(f"generator {t} is not of degree {self.q}")
        if not self.rotations:
            s = self.basis.s
            object.__setattr__(self, "rotations", tuple(tuple(int(i == j) for j in range(s)) for i in range(s)))
        if not self.rotations:
            raise ValueError("need at least one irrational rotation")
        if any(len(v) != self.basis.s for v in self.rotations):
            raise ValueError("rotation vectors must match the basis size")
        if _rank(self.rotations) != len(self.rotations):
            raise ValueError("rotation generators must be independent")

    @classmethod
    def make(cls, q: int, qgens: Iterable, s: int = 1, basis: IrrationalBasis | None = None, name: str = "") -> "HaqSpec":
        basis = basis or IrrationalBasis.sqrt_primes(s)
        gens = tuple(parse_perm(t, q) if not isinstance(t, Perm) else t for t in qgens)
        return cls(q, gens, basis, name=name)

    @property
    def s(self) -> int:
        return len(self.rotations)

    def with_basis(self, basis: IrrationalBasis) -> "HaqSpec":
        return HaqSpec(self.q, self.qgens, basis, self.rotations, self.name)

    def amount(self, n: Sequence[int]) -> Real:
        """The real number sum n_j * (j-th rotation generator)."""
        coeffs = [sum(nj * v[k] for nj, v in zip(n, self.rotations)) for k in range(self.basis.s)]
        return Real.of(self.basis, 0, coeffs)

    @functools.cached_property
    def SQ(self) -> GeneratedGroup:
        return GeneratedGroup(self.q, self.qgens)

    @functools.cached_property
    def W(self) -> GeneratedGroup:
        return build_W(self.SQ)

    @functools.cached_property
    def V(self) -> GeneratedGroup:
        return build_V(self.SQ)

    @functools.cached_property
    def W0(self) -> GeneratedGroup:
        return build_W0(self.SQ)

    @property
    def sigma(self) -> Perm:
        return Perm.cycle(self.q)

    def E(self, tau: Perm) -> IntervalExchange:
        return from_permutation(self.q, tau, self.basis)

    def to_json(self) -> dict:
        out = {"q": self.q, "Qgens": [str(t) for t in self.qgens], "s": self.s}
        real = self.basis.to_json()["realization"]
        out["alphas"] = real
        default = tuple(tuple(int(i == j) for j in range(self.basis.s)) for i in range(self.basis.s))
        if self.rotations != default:
            out["rotations"] = [list(v) for v in self.rotations]
        return out

    @classmethod
    def from_json(cls, obj: dict, basis: IrrationalBasis | None = None) -> "HaqSpec":
        q = int(obj["q"])
        gens = tuple(parse_perm(t, q) for t in obj.get("Qgens", []))
        rots = tuple(tuple(v) for v in obj.get("rotations", ()))
        s = int(obj.get("s", len(rots) or 1))
        if basis is None:
            basis = basis_from_json(obj.get("alphas", "sqrt-primes"), len(rots[0]) if rots else s)
        spec = cls(q, gens, basis, rots, obj.get("name", ""))
        if spec.s != s:
            raise ValueError(f"s={s} but {spec.s} rotation generators given")
        return spec


def basis_from_json(real, s: int) -> IrrationalBasis:
    if real in (None, "sqrt-primes"):
        return IrrationalBasis.sqrt_primes(s)
    if isinstance(real, dict) and "sqrt" in real:
        if len(real["sqrt"]) != s:
            raise ValueError("number of radicands must equal s")
        return IrrationalBasis.sqrt_of(real["sqrt"])
    raise ValueError(f"unknown realization {real!r}")


def _rank(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


# words -------------------------------------------------------------------------


@dataclass(frozen=True)
class Rot:
    """Rotation by sum n_j * (j-th rotation generator)."""

    n: tuple[int, ...]

    def inverse(self) -> "Rot":
        return Rot(tuple(-x for x in self.n))


@dataclass(frozen=True)
class Gen:
    """E_{t_index} raised to ``power``."""

    index: int
    power: int = 1

    def inverse(self) -> "Gen":
        return Gen(self.index, -self.power)


Letter = Rot | Gen


@dataclass(frozen=True)
class GroupWord:
    """A product of letters, read as composition: [l1, l2] means l1 o l2."""

    spec: HaqSpec
    letters: tuple[Letter, ...] = ()

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.spec, self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(self.spec, tuple(l.inverse() for l in reversed(self.letters)))

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        return GroupWord(self.spec, base.letters * abs(k))

    def __len__(self):
        return len(self.letters)

    @functools.cached_property
    def iet(self) -> IntervalExchange:
        """The realized interval exchange, by exact composition."""
        sp = self.spec
        f = IntervalExchange.identity(sp.basis)
        for l in self.letters:
            if isinstance(l, Rot):
                g = rotation(sp.amount(l.n))
            else:
                g = sp.E(sp.qgens[l.index] ** l.power)
            f = f * g
        return f

    def element(self) -> "HElement":
        out = HElement.identity(self.spec)
        for l in self.letters:
            out = out * HElement.letter(self.spec, l)
        return out

    def n_vector(self) -> tuple[int, ...]:
        tot = [0] * self.spec.s
        for l in self.letters:
            if isinstance(l, Rot):
                tot = [a + b for a, b in zip(tot, l.n)]
        return tuple(tot)

    def to_json(self) -> list:
        out = []
        for l in self.letters:
            if isinstance(l, Rot):
                item = {"rot": list(l.n)}
                out.append(item)
            else:
                item = {"gen": l.index}
                out.extend([item] * l.power if l.power > 0 else [{"inv": item}] * -l.power)
        return out

    def __str__(self):
        parts = []
        for l in self.letters:
            if isinstance(l, Rot):
                parts.append("R[" + ",".join(map(str, l.n)) + "]")
            else:
                parts.append(f"E{l.index}" + (f"^{l.power}" if l.power != 1 else ""))
        return "*".join(parts) or "Id"


def word(spec: HaqSpec, *letters: Letter) -> GroupWord:
    return GroupWord(spec, tuple(letters))


def rot(spec: HaqSpec, i: int = 0, k: int = 1) -> GroupWord:
    n = [0] * spec.s
    n[i] = k
    return word(spec, Rot(tuple(n)))


def rot_vec(spec: HaqSpec, n: Sequence[int]) -> GroupWord:
    return word(spec, Rot(tuple(n)))


def gen(spec: HaqSpec, i: int, k: int = 1) -> GroupWord:
    return word(spec, Gen(i, k))


def commutator_word(a: GroupWord, b: GroupWord) -> GroupWord:
    return a * b * a.inverse() * b.inverse()


def parse_word(spec: HaqSpec, items: list) -> GroupWord:
    """Letters {"rot": "a1"} / {"rot": [n1, ...]}, {"gen": j}, {"inv": letter}."""
    letters: list[Letter] = []
    for it in items:
        inv = "inv" in it
        body = it["inv"] if inv else it
        if "rot" in body:
            r = body["rot"]
            if isinstance(r, str):
                if not (r.startswith("a") and r[1:].isdigit()) or not 1 <= int(r[1:]) <= spec.s:
                    raise ValueError(f"unknown rotation {r!r}")
                n = [0] * spec.s
                n[int(r[1:]) - 1] = 1
            else:
                n = list(r)
                if len(n) != spec.s:
                    raise ValueError("rotation vector has wrong length")
            letter: Letter = Rot(tuple(n))
        elif "gen" in body:
            j = int(body["gen"])
            if not 0 <= j < len(spec.qgens):
                raise ValueError(f"no rational generator {j}")
            letter = Gen(j)
        else:
            raise ValueError(f"bad letter {it!r}")
        letters.append(letter.inverse() if inv else letter)
    return GroupWord(spec, tuple(letters))


# the morphism l -------------------------------------------------------------------


def ell(f: GroupWord, check: bool = True) -> Real:
    """l(f) as a circle value, read off the rotation letters.

    With ``check`` the realized map is evaluated at sample points and
    f(x) - x - l(f) must be a multiple of 1/q at each.
    """
    sp = f.spec
    val = sp.amount(f.n_vector())
    if check:
        g = f.iet
        xs = [Real.of(sp.basis), Real.of(sp.basis, Fraction(1, 2)), sp.amount([1] + [0] * (sp.s - 1)).mod1()]
        for x in xs:
            d = g(x) - x - val
            if not d.is_rational() or (d.rat * sp.q).denominator != 1:
                raise CrossCheckFailed(f"translation at {x} is {d} off from l(f)")
    return val.mod1()


def saf_of(f: GroupWord) -> tuple[int, ...]:
    """Coordinates of l(f) on the rotation generators (the SAF invariant of f in H)."""
    return f.n_vector()


def decompose(f: GroupWord) -> tuple[GroupWord, Real, GroupWord]:
    """(P_f, l(f), Q_f) with f = P_f o R_l = R_l o Q_f and P_f, Q_f in ker l."""
    n = f.n_vector()
    back = rot_vec(f.spec, [-x for x in n])
    return f * back, ell(f, check=False), back * f


def is_torsion(f: GroupWord) -> bool:
    return not any(f.n_vector())


# local permutations and profiles ----------------------------------------------------


def _kernel_check(f: IntervalExchange, q: int) -> None:
    for d in f.deltas:
        if not d.is_rational() or (d.rat * q).denominator != 1:
            raise NotInKernel(f"translation {d} is not in (1/{q})Z")


def local_perm(f: IntervalExchange, x: Real, q: int) -> Perm:
    """w(f, x): f(x + i/q) = x + w(i)/q for i in [0, q) (0-based labels)."""
    _kernel_check(f, q)
    if x.sign() < 0 or not x < Fraction(1, q):
        raise ValueError(f"{x} is not in [0, 1/{q})")
    img = []
    for i in range(q):
        y = f(x + Fraction(i, q)) - x
        img.append(int(y.rat * q))
    return Perm(img)


@dataclass(frozen=True)
class StepProfile:
    """Piecewise constant map [0, 1/q) -> S_q: value ``values[j]`` on [points[j], points[j+1])."""

    q: int
    points: tuple[Real, ...]
    values: tuple[Perm, ...]

    @classmethod
    def _make(cls, q, points, values) -> "StepProfile":
        pts, vals = [points[0]], [values[0]]
        for x, v in zip(points[1:], values[1:]):
            if v != vals[-1]:
                pts.append(x)
                vals.append(v)
        return cls(q, tuple(pts), tuple(vals))

    @classmethod
    def constant(cls, q: int, tau: Perm, basis: IrrationalBasis) -> "StepProfile":
        return cls(q, (Real.of(basis),), (Perm._raw(tau),))

    @classmethod
    def identity(cls, q: int, basis: IrrationalBasis) -> "StepProfile":
        return cls.constant(q, Perm.identity(q), basis)

    @property
    def basis(self) -> IrrationalBasis:
        return self.points[0].basis

    def value_at(self, x: Real) -> Perm:
        return self.values[bisect.bisect_right(self.points, x) - 1]

    def __mul__(self, other: "StepProfile") -> "StepProfile":
        """Pointwise product: the profile of (self after other)."""
        if len(self.points) == 1 and len(other.points) == 1:
            return StepProfile(self.q, self.points, (self.values[0] * other.values[0],))
        pts = sorted(set(self.points) | set(other.points))
        return StepProfile._make(self.q, pts, [self.value_at(x) * other.value_at(x) for x in pts])

    def inverse(self) -> "StepProfile":
        return StepProfile(self.q, self.points, tuple(~v for v in self.values))

    def is_identity(self) -> bool:
        return len(self.values) == 1 and self.values[0].is_identity()

    def order(self) -> int:
        return math.lcm(*(v.order() for v in self.values))

    def conjugate_by_rotation(self, gamma: Real) -> "StepProfile":
        """Profile of R_gamma o f o R_-gamma.

        With gamma = j0/q + g~, points x >= g~ see sigma^j0 w(x - g~) sigma^-j0
        and points x < g~ see sigma^(j0+1) w(x - g~ + 1/q) sigma^-(j0+1).
        """
        q = self.q
        j0, gt = decompose_mod(gamma, q)
        if gt == 0 and j0 == 0:
            return self
        step = Fraction(1, q)
        pts = {Real.of(self.basis), gt}
        for y in self.points:
            x = y + gt
            pts.add(x if x < step else x - step)
        pts = sorted(pts)
        sig = Perm.cycle(q)
        s0, s1 = sig ** j0, sig ** (j0 + 1)
        vals = []
        for x in pts:
            if x < gt:
                vals.append(s1 * self.value_at(x - gt + step) * ~s1)
            else:
                vals.append(s0 * self.value_at(x - gt) * ~s0)
        return StepProfile._make(q, pts, vals)

    def to_iet(self) -> IntervalExchange:
        """Rebuild the kernel element: f(x + i/q) = x + w(i)/q on each piece."""
        q = self.q
        step = Fraction(1, q)
        ends = list(self.points[1:]) + [Real.of(self.basis, step)]
        pieces = []
        for (x0, x1), w in zip(zip(self.points, ends), self.values):
            for i in range(q):
                pieces.append((x0 + i * step, Real.of(self.basis, Fraction(w[i] - i, q))))
        pieces.sort(key=lambda t: t[0])
        return IntervalExchange._make([p[0] for p in pieces], [p[1] for p in pieces])

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points], "values": [str(v) for v in self.values]}

    def __str__(self):
        return " | ".join(f"[{x}: {v}]" for x, v in zip(self.points, self.values))


def profile(f: IntervalExchange, q: int) -> StepProfile:
    """The step profile of a kernel element, by exact evaluation."""
    _kernel_check(f, q)
    pts = sorted(set(reduce_mod_q(f.breakpoints, q)) | {Real.of(f.basis)})
    return StepProfile._make(q, pts, [local_perm(f, x, q) for x in pts])


def profile_compose(p: StepProfile, r: StepProfile) -> StepProfile:
    return p * r


def torsion_order(f: IntervalExchange | StepProfile, q: int | None = None) -> int:
    """Order of a kernel element: lcm of the orders of its local permutations."""
    if isinstance(f, IntervalExchange):
        f = profile(f, q)
    return f.order()


# elements of H as (kernel profile, rotation vector) ----------------------------------


@dataclass(frozen=True)
class HElement:
    """f = P o R_{l}, with P given by its profile and l by coordinates n."""

    spec: HaqSpec = field(repr=False)
    kernel: StepProfile
    n: tuple[int, ...]

    @classmethod
    def identity(cls, spec: HaqSpec) -> "HElement":
        return cls(spec, StepProfile.identity(spec.q, spec.basis), (0,) * spec.s)

    @classmethod
    def letter(cls, spec: HaqSpec, l: Letter) -> "HElement":
        if isinstance(l, Rot):
            return cls(spec, StepProfile.identity(spec.q, spec.basis), l.n)
        return cls(spec, StepProfile.constant(spec.q, spec.qgens[l.index] ** l.power, spec.basis), (0,) * spec.s)

    def __mul__(self, other: "HElement") -> "HElement":
        # P1 R1 P2 R2 = P1 (R1 P2 R1^-1) R1 R2
        moved = other.kernel
        if any(self.n):
            moved = moved.conjugate_by_rotation(self.spec.amount(self.n))
        return HElement(self.spec, self.kernel * moved, tuple(a + b for a, b in zip(self.n, other.n)))

    def inverse(self) -> "HElement":
        # (P R)^-1 = R^-1 P^-1 = (R^-1 P^-1 R) R^-1
        inv = self.kernel.inverse()
        if any(self.n):
            inv = inv.conjugate_by_rotation(-self.spec.amount(self.n))
        return HElement(self.spec, inv, tuple(-a for a in self.n))

    def is_identity(self) -> bool:
        return not any(self.n) and self.kernel.is_identity()

    def realize(self) -> IntervalExchange:
        return self.kernel.to_iet() * rotation(self.spec.amount(self.n))


# image groups ----------------------------------------------------------------------


def omega_image_kernel(spec: HaqSpec) -> GeneratedGroup:
    """w_x(ker l) = V, the same for every x."""
    return spec.V


def omega_image_commutator(spec: HaqSpec) -> GeneratedGroup:
    """w_x([H, H]) = W0."""
    return spec.W0


def random_word(spec: HaqSpec, rng: random.Random, length: int, max_rot: int = 3) -> GroupWord:
    letters: list[Letter] = []
    for _ in range(length):
        if spec.qgens and rng.random() < 0.5:
            letters.append(Gen(rng.randrange(len(spec.qgens)), rng.choice((1, -1))))
        else:
            n = [0] * spec.s
            n[rng.randrange(spec.s)] = rng.choice([k for k in range(-max_rot, max_rot + 1) if k])
            letters.append(Rot(tuple(n)))
    return GroupWord(spec, tuple(letters))


def random_kernel_word(spec: HaqSpec, rng: random.Random, length: int, max_rot: int = 3) -> GroupWord:
    f = random_word(spec, rng, length, max_rot)
    return decompose(f)[0]


def random_commutator_word(spec: HaqSpec, rng: random.Random, length: int) -> GroupWord:
    out = word(spec)
    for _ in range(length):
        a = random_word(spec, rng, rng.randint(1, 3))
        b = random_word(spec, rng, rng.randint(1, 3))
        out = out * commutator_word(a, b)
    return out


def validate_images(spec: HaqSpec, rng: random.Random, samples: int = 20) -> bool:
    """Local permutations of random kernel / commutator words stay in V / W0."""
    V, W0 = spec.V, spec.W0
    for _ in range(samples):
        k = random_kernel_word(spec, rng, rng.randint(1, 6)).element().kernel
        if not all(V.contains(v) for v in k.values):
            return False
        c = random_commutator_word(spec, rng, rng.randint(1, 2)).element().kernel
        if not all(W0.contains(v) for v in c.values):
            return False
    return True


# witness words in [H, H] -------------------------------------------------------------


def default_probes(spec: HaqSpec, per_interval: int = 1, search: int = 200) -> list[tuple[int, ...]]:
    """Rotation amounts a in A, one per residue interval (j/q, (j+1)/q).

    Candidates are k * (first rotation generator) for k = 1, -1, 2, -2, ...;
    the first hits in each interval are kept.
    """
    q = spec.q
    found: dict[int, list[tuple[int, ...]]] = {j: [] for j in range(q)}
    for m in range(1, search + 1):
        for k in (m, -m):
            n = (k,) + (0,) * (spec.s - 1)
            j, _ = decompose_mod(spec.amount(n), q)
            if len(found[j]) < per_interval:
                found[j].append(n)
        if all(len(v) >= per_interval for v in found.values()):
            break
    return [n for j in range(q) for n in found[j]]


@dataclass
class WitnessResult:
    target: Perm
    word: GroupWord | None
    factors: list[str]
    status: str  # "found", "trivial", "impossible", "unresolved"
    explored: int = 0
    probes: list[tuple[int, ...]] = field(default_factory=list)

    def cut_values(self) -> list[tuple[str, Perm]]:
        """w(g, 0) and w(g, a~) for every probe a used by the witness g."""
        if self.word is None:
            return []
        sp = self.word.spec
        f = self.word.iet
        out = [("0", local_perm(f, Real.of(sp.basis), sp.q))]
        used = sorted({int(name[3:name.index(",")]) for name in self.factors if name.startswith("[Rp")})
        for j in used:
            _, at = decompose_mod(sp.amount(self.probes[j]), sp.q)
            out.append((f"p{j}~", local_perm(f, at, sp.q)))
        return out

    def to_json(self) -> dict:
        out = {"target": str(self.target), "status": self.status, "explored": self.explored}
        if self.word is not None:
            out["factors"] = self.factors
            out["length"] = len(self.factors)
            out["word"] = self.word.to_json()
        return out


def commutator_generators(spec: HaqSpec, probes: Sequence[Sequence[int]]) -> list[tuple[str, GroupWord]]:
    """[R_a, E_t] for probes a and t in the generators and their inverses, plus [E_t1, E_t2].

    Probe j is named ``Rp{j}``; with the default probes j is also the
    residue interval (j/q, (j+1)/q) containing the probe.
    """
    out: list[tuple[str, GroupWord]] = []
    tl: list[tuple[str, GroupWord, Perm]] = []
    for i, t in enumerate(spec.qgens):
        tl.append((f"E{i}", gen(spec, i), t))
        if t.order() > 2:
            tl.append((f"E{i}^-1", gen(spec, i, -1), ~t))
    for j, a in enumerate(probes):
        ra = rot_vec(spec, a)
        for name, e, _ in tl:
            out.append((f"[Rp{j},{name}]", commutator_word(ra, e)))
    for i, (n1, e1, t1) in enumerate(tl):
        for n2, e2, t2 in tl[i + 1:]:
            if t1 * t2 != t2 * t1:
                out.append((f"[{n1},{n2}]", commutator_word(e1, e2)))
    return out


def witness_search(
    spec: HaqSpec,
    target: Perm,
    budget: int = 6,
    probes: Sequence[Sequence[int]] | None = None,
    node_cap: int = 200_000,
) -> WitnessResult:
    """Breadth-first search for a product of commutators realizing E_target.

    Letters are the commutator generators and their inverses; states are
    memoized on step profiles.  A hit is confirmed by exact IET equality.
    Targets outside [W, W] cannot lie in [H, H] and are rejected at once.
    """
    if target.is_identity():
        return WitnessResult(target, word(spec), [], "trivial")
    if not spec.W0.contains(target):
        return WitnessResult(target, None, [], "impossible")
    probes = default_probes(spec) if probes is None else [tuple(p) for p in probes]
    letters = []
    for name, w in commutator_generators(spec, probes):
        k = w.element().kernel
        letters.append((name, w, k))
        if k.inverse() != k:
            letters.append((name + "^-1", w.inverse(), k.inverse()))
    goal = StepProfile.constant(spec.q, target, spec.basis)
    start = StepProfile.identity(spec.q, spec.basis)
    parent: dict[StepProfile, tuple[StepProfile, int] | None] = {start: None}
    frontier = [start]
    hit = None
    for _depth in range(budget):
        nxt = []
        for p in frontier:
            for li, (_, _, k) in enumerate(letters):
                r = p * k
                if r in parent:
                    continue
                parent[r] = (p, li)
                if r == goal:
                    hit = r
                    break
                nxt.append(r)
            if hit is not None or len(parent) > node_cap:
                break
        if hit is not None or len(parent) > node_cap:
            break
        frontier = nxt
    if hit is None:
        return WitnessResult(target, None, [], "unresolved", len(parent), list(probes))
    seq = []
    cur = hit
    while parent[cur] is not None:
        prev, li = parent[cur]
        seq.append(li)
        cur = prev
    seq.reverse()  # cur = letters[seq[0]] * letters[seq[1]] * ...
    w = word(spec)
    for li in seq:
        w = w * letters[li][1]
    if w.iet != spec.E(target):
        raise CrossCheckFailed("witness profile matched but the realized map differs")
    return WitnessResult(target, w, [letters[li][0] for li in seq], "found", len(parent), list(probes))


def commutator_membership(spec: HaqSpec, target: Perm, probes: Sequence[Sequence[int]] | None = None) -> bool:
    """Is E_target in the subgroup generated by the probe commutators?

    All generator profiles break only at the points {0} and a~ of the probes,
    so the subgroup they generate acts faithfully on q copies of
    {1..q} indexed by those pieces; membership is then a stabilizer-chain
    sift.  True certifies E_target in [H, H]; False is inconclusive.
    """
    probes = default_probes(spec) if probes is None else [tuple(p) for p in probes]
    gens = [w.element().kernel for _, w in commutator_generators(spec, probes)]
    pts = sorted({x for k in gens for x in k.points} | {Real.of(spec.basis)})
    q = spec.q
    npts = len(pts)

    def flat(k: StepProfile) -> Perm:
        img = []
        for b, x in enumerate(pts):
            v = k.value_at(x)
            img.extend(b * q + v[i] for i in range(q))
        return Perm._raw(img)

    G = GeneratedGroup(q * npts, [flat(k) for k in gens])
    return G.contains(flat(StepProfile.constant(q, target, spec.basis)))


# lamplighter faithfulness --------------------------------------------------------------


def bp_classes(f: IntervalExchange, q: int) -> list[Real]:
    return classes_mod_q(f.breakpoints_circle(), q)


def breakpoint_disjointness(factors: Sequence[IntervalExchange], q: int) -> tuple[bool, bool]:
    """For kernel elements f_1..f_n: (classes pairwise disjoint, [BP]_q of the product is their union).

    Factors are applied f_1 first, as in f_n o ... o f_1.
    """
    classes = [set(bp_classes(f, q)) for f in factors]
    disjoint = all(not (classes[i] & classes[j]) for i in range(len(classes)) for j in range(i + 1, len(classes)))
    prod = IntervalExchange.identity(factors[0].basis) if factors else None
    for f in factors:
        prod = f * prod
    union = set().union(*classes) if classes else set()
    whole = set(bp_classes(prod, q)) if prod is not None else set()
    return disjoint, whole == union


def faithful_lamplighter_check(spec: HaqSpec, samples: int = 100, rng: random.Random | None = None,
                               spread: int = 6) -> bool:
    """Random lamplighter elements t^m prod_j t^(k_j) a_j t^(-k_j) act nontrivially.

    For each sample with at least one lamp, the conjugates by distinct
    rotations R_(k_j) must have pairwise disjoint breakpoint classes mod 1/q,
    and the product's classes must be exactly their union, which is nonempty.
    """
    if not spec.V.is_abelian():
        raise ValueError("V is not abelian: not a lamplighter configuration")
    rng = rng or random.Random(0)
    lamps = [t for t in spec.SQ.elements() if not t.is_identity()]
    if not lamps:
        return True
    for _ in range(samples):
        count = rng.randint(1, 4)
        ks: set[tuple[int, ...]] = set()
        while len(ks) < count:
            ks.add(tuple(rng.randint(-spread, spread) for _ in range(spec.s)))
        factors = []
        for k in sorted(ks):
            a = spec.amount(k)
            factors.append(rotation(a) * spec.E(rng.choice(lamps)) * rotation(-a))
        disjoint, exact = breakpoint_disjointness(factors, spec.q)
        if not (disjoint and exact):
            return False
        m = tuple(rng.randint(-spread, spread) for _ in range(spec.s))
        whole = factors[0]
        for f in factors[1:]:
            whole = f * whole
        whole = rotation(spec.amount(m)) * whole
        if whole.is_identity():
            return False
    return True
