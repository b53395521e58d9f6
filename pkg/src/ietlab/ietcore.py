"""Interval exchange transformations with exact breakpoints.

An IET is stored in its canonical [0, 1) form: breakpoints ``0 = a_0 < ... <
a_{m-1}`` and per-piece translations ``d_i`` such that [a_i, a_{i+1}) maps
onto [a_i + d_i, a_{i+1} + d_i), which lies inside [0, 1).  Adjacent pieces
with equal translation are merged, so two maps are equal exactly when their
canonical forms are equal.  The circle view (discontinuities on R/Z) is
derived from this form.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import IrrationalBasis, Real, decompose_mod, from_json
from .permgrp import Perm, parse_perm


class NotDeltaRational(ValueError):
    pass


@dataclass(frozen=True)
class IntervalExchange:
    breakpoints: tuple[Real, ...]
    deltas: tuple[Real, ...]

    @property
    def basis(self) -> IrrationalBasis:
        return self.breakpoints[0].basis

    # construction ---------------------------------------------------------

    @classmethod
    def _make(cls, bps: Sequence[Real], deltas: Sequence[Real]) -> "IntervalExchange":
        out_b = [bps[0]]
        out_d = [deltas[0]]
        for b, d in zip(bps[1:], deltas[1:]):
            if d == out_d[-1]:
                continue
            out_b.append(b)
            out_d.append(d)
        return cls(tuple(out_b), tuple(out_d))

    @classmethod
    def identity(cls, basis: IrrationalBasis) -> "IntervalExchange":
        z = Real.of(basis)
        return cls((z,), (z,))

    @classmethod
    def from_lengths(cls, lengths: Sequence[Real], perm: Perm) -> "IntervalExchange":
        """Build from the length vector and the image order ``perm`` (piece i lands in slot perm(i)).

        Breakpoints are the partial sums of the lengths; piece i moves by the
        total length of the pieces landing before it minus the total length
        of the pieces preceding it.
        """
        m = len(lengths)
        if len(perm) != m:
            raise ValueError(f"permutation degree {len(perm)} does not match {m} lengths")
        if m == 0:
            raise ValueError("need at least one interval")
        if any(l.sign() <= 0 for l in lengths):
            raise ValueError("lengths must be positive")
        total = sum(lengths[1:], lengths[0])
        if total != 1:
            raise ValueError(f"lengths sum to {total}, not 1")
        basis = lengths[0].basis
        zero = Real.of(basis)
        bps = [zero]
        for l in lengths[:-1]:
            bps.append(bps[-1] + l)
        deltas = []
        for i in range(m):
            before = sum((lengths[j] for j in range(m) if perm[j] < perm[i]), zero)
            deltas.append(before - bps[i])
        return cls._make(bps, deltas)

    @classmethod
    def from_permutation(cls, q: int, tau: Perm, basis: IrrationalBasis) -> "IntervalExchange":
        """E_tau: translate [(i-1)/q, i/q) onto [(tau(i)-1)/q, tau(i)/q)."""
        if len(tau) != q:
            raise ValueError(f"permutation degree {len(tau)} does not match q={q}")
        bps = [Real.of(basis, Fraction(i, q)) for i in range(q)]
        deltas = [Real.of(basis, Fraction(tau[i] - i, q)) for i in range(q)]
        return cls._make(bps, deltas)

    @classmethod
    def rotation(cls, a: Real) -> "IntervalExchange":
        a = a.mod1()
        if a == 0:
            return cls.identity(a.basis)
        zero = Real.of(a.basis)
        return cls((zero, 1 - a), (a, a - 1))

    # evaluation and group law ----------------------------------------------

    def _piece(self, x: Real) -> int:
        return bisect.bisect_right(self.breakpoints, x) - 1

    def __call__(self, x: Real) -> Real:
        if x.sign() < 0 or not x < 1:
            raise ValueError(f"point {x} outside [0, 1)")
        return x + self.deltas[self._piece(x)]

    evaluate = __call__

    def pieces(self) -> list[tuple[Real, Real, Real]]:
        """(left, right, delta) for every piece."""
        ends = list(self.breakpoints[1:]) + [Real.of(self.basis, 1)]
        return list(zip(self.breakpoints, ends, self.deltas))

    def __mul__(self, other: "IntervalExchange") -> "IntervalExchange":
        """self after other."""
        return compose(self, other)

    def inverse(self) -> "IntervalExchange":
        ps = sorted(((l + d, -d) for l, _, d in self.pieces()), key=lambda t: t[0])
        return IntervalExchange._make([p[0] for p in ps], [p[1] for p in ps])

    __invert__ = inverse

    def __pow__(self, k: int) -> "IntervalExchange":
        if k < 0:
            return self.inverse() ** (-k)
        out = IntervalExchange.identity(self.basis)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return len(self.deltas) == 1 and self.deltas[0] == 0

    # descriptors ------------------------------------------------------------

    @property
    def lengths(self) -> list[Real]:
        return [r - l for l, r, _ in self.pieces()]

    @property
    def perm(self) -> Perm:
        """Image order of the pieces, as a permutation of the piece indices."""
        starts = [l + d for l, _, d in self.pieces()]
        order = sorted(range(len(starts)), key=lambda i: starts[i])
        slot = [0] * len(starts)
        for k, i in enumerate(order):
            slot[i] = k
        return Perm(slot)

    def breakpoints_interval(self) -> list[Real]:
        """Break points on [0, 1): 0 together with every discontinuity."""
        return list(self.breakpoints)

    def breakpoints_circle(self) -> list[Real]:
        """Discontinuity points of the map seen on the circle R/Z."""
        out = []
        ds = self.deltas
        for i, b in enumerate(self.breakpoints):
            jump = ds[i] - ds[i - 1]  # i == 0 compares with the last piece across 1 ~ 0
            if not (jump.is_rational() and jump.rat.denominator == 1):
                out.append(b)
        return out

    def is_delta_rational(self) -> bool:
        return all(d.is_rational() for d in self.deltas)

    def order(self) -> int:
        """Least n >= 1 with self^n the identity, by iterated composition."""
        if not self.is_delta_rational():
            raise NotDeltaRational("order is only defined here for rational translations")
        den = math.lcm(*(d.rat.denominator for d in self.deltas))
        # orbits lie in x + Z/den, so every orbit has at most den points
        cap = math.lcm(*range(1, den + 1))
        f = self
        n = 1
        while not f.is_identity():
            if n >= cap:
                raise RuntimeError("order exceeded its a-priori bound")
            f = f * self
            n += 1
        return n

    def rotation_amount(self) -> Real | None:
        """The rotation amount if self is a circle rotation, else None."""
        if self.breakpoints_circle():
            return None
        return self.deltas[0].mod1()

    is_rotation = rotation_amount

    # serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "breakpoints": [b.to_json() for b in self.breakpoints],
            "deltas": [d.mod1().to_json() for d in self.deltas],
            "perm": self.perm.one_line(),
        }

    @classmethod
    def from_json(cls, obj: dict, basis: IrrationalBasis) -> "IntervalExchange":
        bps = [from_json(b, basis).mod1() for b in obj["breakpoints"]]
        ds = []
        for b, d in zip(bps, obj["deltas"]):
            d = from_json(d, basis).mod1()
            ds.append(d - 1 if not (b + d) < 1 else d)
        if not bps or bps[0] != 0 or any(not bps[i] < bps[i + 1] for i in range(len(bps) - 1)):
            raise ValueError("breakpoints must start at 0 and increase")
        f = cls._make(bps, ds)
        if "perm" in obj and parse_perm(obj["perm"], len(bps)) != _perm_unmerged(bps, ds):
            raise ValueError("perm does not match breakpoints and deltas")
        _check_bijective(f)
        return f

    def __str__(self):
        parts = [f"[{l}, {r}) +{d}" for l, r, d in self.pieces()]
        return "IET(" + "; ".join(parts) + ")"


def _perm_unmerged(bps, ds) -> Perm:
    starts = [b + d for b, d in zip(bps, ds)]
    order = sorted(range(len(starts)), key=lambda i: starts[i])
    slot = [0] * len(starts)
    for k, i in enumerate(order):
        slot[i] = k
    return Perm(slot)


def _check_bijective(f: IntervalExchange) -> None:
    imgs = sorted(((l + d, r + d) for l, r, d in f.pieces()), key=lambda t: t[0])
    pos = Real.of(f.basis)
    for lo, hi in imgs:
        if lo != pos:
            raise ValueError("images do not tile [0, 1)")
        pos = hi
    if pos != 1:
        raise ValueError("images do not tile [0, 1)")


def compose(f: IntervalExchange, g: IntervalExchange) -> IntervalExchange:
    """f after g, on the common refinement of the two partitions."""
    fb = f.breakpoints
    bps: list[Real] = []
    ds: list[Real] = []
    for l, r, d in g.pieces():
        lo, hi = l + d, r + d
        k = bisect.bisect_right(fb, lo) - 1
        u = lo
        while True:
            bps.append(u - d)
            ds.append(d + f.deltas[k])
            if k + 1 < len(fb) and fb[k + 1] < hi:
                k += 1
                u = fb[k]
            else:
                break
    return IntervalExchange._make(bps, ds)


def rotation(a: Real) -> IntervalExchange:
    return IntervalExchange.rotation(a)


def from_permutation(q: int, tau: Perm, basis: IrrationalBasis) -> IntervalExchange:
    return IntervalExchange.from_permutation(q, tau, basis)


def from_lengths(lengths: Sequence[Real], perm: Perm) -> IntervalExchange:
    return IntervalExchange.from_lengths(lengths, perm)


def classes_mod_q(points: Iterable[Real], q: int) -> list[Real]:
    """[X]_q: the union of the q rational translates x + p/q of the points."""
    out = {(x + Fraction(p, q)).mod1() for x in points for p in range(q)}
    return sorted(out)


def reduce_mod_q(points: Iterable[Real], q: int) -> list[Real]:
    """Representatives in [0, 1/q) of the points modulo 1/q."""
    return sorted({decompose_mod(x, q)[1] for x in points})
