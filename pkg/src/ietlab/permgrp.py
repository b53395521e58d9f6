"""Finite permutation groups: closure, membership, derived series.

Permutations act on {0..q-1} internally and print 1-based in cycle notation.
Products compose right to left: ``(a * b)(i) == a(b(i))``, and commutators
are ``[a, b] = a b a^-1 b^-1``.

Groups are held as generator lists backed by a Schreier-Sims stabilizer chain,
which answers order and membership without listing elements.  Breadth-first
closure is kept separately, both for small quotient computations and as an
independent check of the chain.
"""

from __future__ import annotations

import math
import os
import re
from collections import Counter, deque
from typing import Iterable, Sequence

DEFAULT_CLOSURE_CAP = 2_000_000


def closure_cap() -> int:
    return int(os.environ.get("IETLAB_CLOSURE_CAP", DEFAULT_CLOSURE_CAP))


class CapExceeded(RuntimeError):
    """Raised when an element listing would exceed the closure cap."""


class Perm(tuple):
    """A permutation in one-line form on {0..q-1}."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        p = super().__new__(cls, images)
        if sorted(p) != list(range(len(p))):
            raise ValueError(f"not a permutation: {tuple(p)}")
        return p

    @classmethod
    def _raw(cls, images) -> "Perm":
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, q: int) -> "Perm":
        return cls._raw(range(q))

    @classmethod
    def cycle(cls, q: int) -> "Perm":
        """The full cycle 1 -> 2 -> ... -> q -> 1."""
        return cls._raw([(i + 1) % q for i in range(q)])

    @classmethod
    def from_one_line(cls, images: Sequence[int]) -> "Perm":
        """From a 1-based one-line array."""
        return cls(i - 1 for i in images)

    @classmethod
    def from_cycles(cls, text: str, q: int) -> "Perm":
        """Parse 1-based cycle notation such as ``"(1,3)(2,4)"``; ``"()"`` is the identity."""
        img = list(range(q))
        text = text.replace(" ", "")
        if not re.fullmatch(r"(\((\d+(,\d+)*)?\))*", text):
            raise ValueError(f"bad cycle notation: {text!r}")
        seen: set[int] = set()
        for body in re.findall(r"\(([^)]*)\)", text):
            if not body:
                continue
            pts = [int(x) - 1 for x in body.split(",")]
            if any(not 0 <= x < q for x in pts) or seen.intersection(pts) or len(set(pts)) != len(pts):
                raise ValueError(f"bad cycle {body!r} for degree {q}")
            seen.update(pts)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm._raw([self[j] for j in other])

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return (~self) ** (-k)
        out = Perm.identity(len(self))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __invert__(self) -> "Perm":
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return Perm._raw(inv)

    inverse = __invert__

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self)):
            if i in seen or self[i] == i:
                continue
            c = [i]
            seen.add(i)
            j = self[i]
            while j != i:
                c.append(j)
                seen.add(j)
                j = self[j]
            out.append(tuple(c))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def one_line(self) -> list[int]:
        return [j + 1 for j in self]

    def __str__(self):
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + ",".join(str(i + 1) for i in c) + ")" for c in cs)

    def __repr__(self):
        return f"Perm({self})"


def commutator(a: Perm, b: Perm) -> Perm:
    return a * b * ~a * ~b


def conj(g: Perm, x: Perm) -> Perm:
    """g x g^-1."""
    return g * x * ~g


def conj_by_cycle_power(tau: Perm, p: int) -> Perm:
    """sigma^p tau sigma^-p for the full cycle sigma of matching degree."""
    s = Perm.cycle(len(tau)) ** p
    return s * tau * ~s


# stabilizer chains ---------------------------------------------------------


class _Level:
    __slots__ = ("base", "trans")

    def __init__(self, base: int, q: int):
        self.base = base
        self.trans: dict[int, Perm] = {base: Perm.identity(q)}


class StabilizerChain:
    """Deterministic Schreier-Sims.

    ``levels[i].trans[x]`` maps the i-th base point to x; the group at level i
    is generated by the strong generators fixing the first i base points.
    """

    def __init__(self, q: int, gens: Sequence[Perm]):
        self.q = q
        self.strong: list[Perm] = []
        self.levels: list[_Level] = []
        gens = [g for g in gens if not g.is_identity()]
        for g in gens:
            self._add_strong(g)
        self._complete()

    def _fixes_prefix(self, g: Perm, i: int) -> bool:
        return all(g[self.levels[k].base] == self.levels[k].base for k in range(i))

    def _add_strong(self, g: Perm) -> None:
        self.strong.append(g)
        if all(g[L.base] == L.base for L in self.levels):
            b = next(i for i in range(self.q) if g[i] != i)
            self.levels.append(_Level(b, self.q))

    def _orbit(self, i: int, gens: list[Perm]) -> None:
        L = self.levels[i]
        L.trans = {L.base: Perm.identity(self.q)}
        queue = deque([L.base])
        while queue:
            x = queue.popleft()
            tx = L.trans[x]
            for s in gens:
                y = s[x]
                if y not in L.trans:
                    L.trans[y] = s * tx
                    queue.append(y)

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for j in range(start, len(self.levels)):
            L = self.levels[j]
            t = L.trans.get(g[L.base])
            if t is None:
                return g, j
            g = ~t * g
        return g, len(self.levels)

    def _complete(self) -> None:
        i = len(self.levels) - 1
        while i >= 0:
            gens = [s for s in self.strong if self._fixes_prefix(s, i)]
            self._orbit(i, gens)
            L = self.levels[i]
            restart = None
            for x, tx in list(L.trans.items()):
                for s in gens:
                    h = ~L.trans[s[x]] * s * tx
                    if h.is_identity():
                        continue
                    r, j = self.sift(h, i + 1)
                    if not r.is_identity():
                        self._add_strong(r)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is None:
                i -= 1
            else:
                # recompute orbits below the new generator before rechecking
                for k in range(i + 1, restart):
                    self._orbit(k, [s for s in self.strong if self._fixes_prefix(s, k)])
                i = min(restart, len(self.levels) - 1)

    def order(self) -> int:
        return math.prod(len(L.trans) for L in self.levels)

    def contains(self, g: Perm) -> bool:
        r, _ = self.sift(g)
        return r.is_identity()

    def elements(self) -> Iterable[Perm]:
        out = [Perm.identity(self.q)]
        for L in reversed(self.levels):
            out = [t * g for t in L.trans.values() for g in out]
        return out


class GeneratedGroup:
    """A subgroup of S_q given by generators."""

    def __init__(self, q: int, gens: Iterable[Perm] = ()):
        self.q = q
        uniq = []
        for g in gens:
            if len(g) != q:
                raise ValueError(f"generator {g} has degree {len(g)}, expected {q}")
            if not g.is_identity() and g not in uniq:
                uniq.append(Perm._raw(g))
        self.gens: tuple[Perm, ...] = tuple(uniq)
        self._chain: StabilizerChain | None = None
        self._closure: frozenset[Perm] | None = None

    @classmethod
    def symmetric(cls, q: int) -> "GeneratedGroup":
        if q < 2:
            return cls(q)
        return cls(q, [Perm.from_cycles("(1,2)", q), Perm.cycle(q)])

    @classmethod
    def alternating(cls, q: int) -> "GeneratedGroup":
        return cls(q, [Perm.from_cycles(f"(1,2,{k})", q) for k in range(3, q + 1)])

    @classmethod
    def cyclic(cls, q: int) -> "GeneratedGroup":
        return cls(q, [Perm.cycle(q)]) if q > 1 else cls(q)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.q, self.gens)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def contains(self, g: Perm) -> bool:
        if self._closure is not None:
            return g in self._closure
        return self.chain.contains(g)

    __contains__ = contains

    def closure(self, cap: int | None = None) -> frozenset[Perm]:
        """All elements, by breadth-first products of the generators."""
        if self._closure is not None:
            return self._closure
        cap = closure_cap() if cap is None else cap
        e = Perm.identity(self.q)
        seen = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.gens:
                    y = g * x
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > cap:
                            raise CapExceeded(f"closure exceeds cap {cap}")
            frontier = nxt
        self._closure = frozenset(seen)
        return self._closure

    def elements(self) -> list[Perm]:
        """Element list from the chain; checked against the cap first."""
        if self.order() > closure_cap():
            raise CapExceeded(f"group of order {self.order()} exceeds cap {closure_cap()}")
        return list(self.chain.elements())

    def is_trivial(self) -> bool:
        return not self.gens

    def is_abelian(self) -> bool:
        return all(a * b == b * a for i, a in enumerate(self.gens) for b in self.gens[i + 1:])

    def is_subgroup_of(self, other: "GeneratedGroup") -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, GeneratedGroup):
            return NotImplemented
        return self.q == other.q and self.order() == other.order() and self.is_subgroup_of(other)

    def __hash__(self):
        return hash((self.q, self.order()))

    def is_normal_in(self, other: "GeneratedGroup") -> bool:
        return all(self.contains(conj(g, n)) for g in other.gens for n in self.gens)

    def join(self, extra: Iterable[Perm]) -> "GeneratedGroup":
        return GeneratedGroup(self.q, list(self.gens) + list(extra))

    def normal_closure(self, gens: Iterable[Perm]) -> "GeneratedGroup":
        """Smallest normal subgroup of self containing ``gens``."""
        N = GeneratedGroup(self.q, gens)
        todo = list(N.gens)
        while todo:
            n = todo.pop()
            for g in self.gens:
                c = conj(g, n)
                if not N.contains(c):
                    N = N.join([c])
                    todo.append(c)
        return N

    def derived_subgroup(self) -> "GeneratedGroup":
        comms = [commutator(a, b) for i, a in enumerate(self.gens) for b in self.gens[i + 1:]]
        return self.normal_closure(comms)

    def derived_series(self) -> list["GeneratedGroup"]:
        """G = D^0 > D^1 > ... ending at the trivial group or a perfect group."""
        series = [self]
        while not series[-1].is_trivial():
            D = series[-1].derived_subgroup()
            if D.order() == series[-1].order():
                break
            series.append(D)
        return series

    def derived_length(self) -> int | None:
        """Least n with D^n trivial, or None when the group is not solvable."""
        series = self.derived_series()
        if not series[-1].is_trivial():
            return None
        return len(series) - 1

    def is_solvable(self) -> bool:
        return self.derived_length() is not None

    def contains_alternating(self) -> bool:
        return all(self.contains(g) for g in GeneratedGroup.alternating(self.q).gens)

    def __repr__(self):
        return f"GeneratedGroup(q={self.q}, gens=[{', '.join(map(str, self.gens))}])"


def intersect(G: GeneratedGroup, H: GeneratedGroup) -> GeneratedGroup:
    """Exact intersection by listing the smaller group."""
    small, big = (G, H) if G.order() <= H.order() else (H, G)
    out = GeneratedGroup(G.q)
    for g in small.elements():
        if big.contains(g) and not out.contains(g):
            out = out.join([g])
    return out


def quotient_derived_length(G: GeneratedGroup, N: GeneratedGroup) -> int | None:
    """Derived length of G/N for N normal in G: least k with D^k(G) inside N."""
    D = G
    k = 0
    prev = None
    while not D.is_subgroup_of(N):
        if prev is not None and D.order() == prev:
            return None
        prev = D.order()
        D = D.derived_subgroup()
        k += 1
    return k


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _quotient_order(g: Perm, N: GeneratedGroup) -> int:
    n = g.order()
    for d in sorted(d for d in range(1, n + 1) if n % d == 0):
        if N.contains(g ** d):
            return d
    return n  # unreachable: g^n is the identity


def abelian_invariants(G: GeneratedGroup, N: GeneratedGroup | None = None) -> list[int]:
    """Invariant factors d1 | d2 | ... of the abelian quotient G/N, ascending.

    The quotient is enumerated through the order statistics of its elements:
    for each prime p the counts of elements of order dividing p^k determine
    the p-primary part.
    """
    N = N if N is not None else GeneratedGroup(G.q)
    if not N.is_subgroup_of(G) or not N.is_normal_in(G):
        raise ValueError("N must be a normal subgroup of G")
    if not all(N.contains(commutator(a, b)) for a in G.gens for b in G.gens):
        raise ValueError("quotient is not abelian")
    index = G.order() // N.order()
    if index == 1:
        return []
    hist = Counter(_quotient_order(g, N) for g in G.elements())
    nN = N.order()
    primary: dict[int, list[int]] = {}
    for p, e in _factor(index).items():
        counts = [1]
        k = 0
        while counts[-1] < p ** e:
            k += 1
            c = sum(v for o, v in hist.items() if (p ** k) % o == 0) // nN
            counts.append(c)
        ranks = [round(math.log(c, p)) for c in counts]
        at_least = [ranks[j] - ranks[j - 1] for j in range(1, len(ranks))]
        parts = []
        for j, cnt in enumerate(at_least):
            nxt = at_least[j + 1] if j + 1 < len(at_least) else 0
            parts += [j + 1] * (cnt - nxt)
        primary[p] = sorted(parts, reverse=True)
    width = max(len(v) for v in primary.values())
    factors = []
    for i in range(width):
        factors.append(math.prod(p ** parts[i] for p, parts in primary.items() if i < len(parts)))
    return sorted(factors)


def build_W(SQ: GeneratedGroup) -> GeneratedGroup:
    """<S(Q), sigma>."""
    return SQ.join([Perm.cycle(SQ.q)]) if SQ.q > 1 else GeneratedGroup(SQ.q)


def build_V(SQ: GeneratedGroup) -> GeneratedGroup:
    """Subgroup generated by all sigma-conjugates sigma^p t sigma^-p of S(Q)."""
    return GeneratedGroup(SQ.q, [conj_by_cycle_power(t, p) for p in range(SQ.q) for t in SQ.gens])


W0_ENUMERATION_LIMIT = 5040


def build_W0(SQ: GeneratedGroup) -> GeneratedGroup:
    """<[sigma^p, t], [t1, t2]> for p in [0, q) and t, t1, t2 in S(Q).

    The [t1, t2] part is exactly [S(Q), S(Q)], taken from the derived
    subgroup.  The [sigma^p, t] part runs over every element t of S(Q) while
    |S(Q)| <= W0_ENUMERATION_LIMIT; beyond that only generators t are used and
    the result is normally closed in W.
    """
    q = SQ.q
    sig = Perm.cycle(q)
    if SQ.order() <= W0_ENUMERATION_LIMIT:
        ts = SQ.elements()
    else:
        ts = list(SQ.gens)
    out = SQ.derived_subgroup()
    for p in range(1, q):
        sp = sig ** p
        for t in ts:
            c = commutator(sp, t)
            if not out.contains(c):
                out = out.join([c])
    if SQ.order() > W0_ENUMERATION_LIMIT:
        out = build_W(SQ).normal_closure(out.gens)
    return out


def parse_perm(obj, q: int) -> Perm:
    """Accept cycle notation strings or 1-based one-line arrays."""
    if isinstance(obj, str):
        return Perm.from_cycles(obj, q)
    p = Perm.from_one_line(obj)
    if len(p) != q:
        raise ValueError(f"one-line permutation {obj} has degree {len(p)}, expected {q}")
    return p
