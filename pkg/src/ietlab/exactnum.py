"""Exact real numbers of the form r + n1*a1 + ... + ns*as.

The a_i are fixed irrationals such that {1, a1, ..., as} is linearly
independent over the rationals.  Every value is stored as a reduced rational
``rat`` plus an integer coefficient vector ``irr``; independence makes this
representation unique, so equality is structural and only ordering needs
numerics.  Signs are decided by refining rational enclosures of the a_i until
the enclosure of the linear form excludes zero.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

DEFAULT_PRECISION = 64

# first primes, enough for any realistic rank
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


class BasisMismatch(ValueError):
    pass


def _is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class IrrationalBasis:
    """The irrationals a_1..a_s spanning the rotation module.

    The default realization uses fractional parts of square roots of the first
    ``s`` primes.  Any tuple of distinct squarefree radicands is also accepted
    (square roots of distinct squarefree integers are independent together
    with 1).  Arbitrary realizations can be passed as ``enclosures``: callables
    ``bits -> (lo, hi)`` with rational bounds of width at most ``2**-bits``;
    these must come with ``independence_asserted=True`` and are trusted.
    """

    radicands: tuple[int, ...] = ()
    enclosures: tuple[Callable[[int], tuple[Fraction, Fraction]], ...] = ()
    independence_asserted: bool = False
    precision_hint: int = field(default=DEFAULT_PRECISION, compare=False)
    label: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.enclosures and self.radicands:
            raise ValueError("give either radicands or enclosures, not both")
        if self.enclosures and not self.independence_asserted:
            raise ValueError("custom realizations must assert rational independence")
        rads = self.radicands
        if len(set(rads)) != len(rads) or not all(_is_squarefree(r) for r in rads):
            raise ValueError(f"radicands must be distinct squarefree integers > 1: {rads}")
        if not self.label:
            object.__setattr__(self, "label", f"sqrt{list(rads)}" if rads else "custom")

    @classmethod
    def sqrt_primes(cls, s: int, precision_hint: int = DEFAULT_PRECISION) -> "IrrationalBasis":
        if not 0 <= s <= len(_PRIMES):
            raise ValueError(f"rank {s} out of range")
        return cls(radicands=_PRIMES[:s], precision_hint=precision_hint, label="sqrt-primes")

    @classmethod
    def sqrt_of(cls, radicands: Sequence[int], precision_hint: int = DEFAULT_PRECISION) -> "IrrationalBasis":
        return cls(radicands=tuple(radicands), precision_hint=precision_hint)

    @property
    def s(self) -> int:
        return len(self.radicands) or len(self.enclosures)

    def bounds(self, bits: int) -> list[tuple[int, int]]:
        """Integer numerators ``(lo, hi)`` over ``2**bits`` enclosing each a_i."""
        hit = self._cache.get(bits)
        if hit is not None:
            return hit
        out = []
        scale = 1 << bits
        for r in self.radicands:
            n = math.isqrt(r << (2 * bits))
            lo = n - math.isqrt(r) * scale
            out.append((lo, lo + 1))
        for enc in self.enclosures:
            lo, hi = enc(bits)
            out.append((math.floor(Fraction(lo) * scale), math.ceil(Fraction(hi) * scale)))
        self._cache[bits] = out
        return out

    def approx(self) -> list[float]:
        return [(lo + hi) / 2 / (1 << 60) for lo, hi in self.bounds(60)]

    def to_json(self):
        if self.label == "sqrt-primes":
            return {"s": self.s, "realization": "sqrt-primes"}
        if self.radicands:
            return {"s": self.s, "realization": {"sqrt": list(self.radicands)}}
        return {"s": self.s, "realization": "custom"}


def _check_basis(a: "Real", b: "Real") -> None:
    if a.basis is not b.basis and a.basis != b.basis:
        raise BasisMismatch(f"{a.basis.label} vs {b.basis.label}")


def linear_form_sign(c0: Fraction, coeffs: Sequence[int], basis: IrrationalBasis) -> int:
    """Sign of c0 + sum(coeffs[i] * a_i), exactly."""
    if not any(coeffs):
        return (c0 > 0) - (c0 < 0)
    bits = basis.precision_hint
    num, den = c0.numerator, c0.denominator
    while True:
        bnds = basis.bounds(bits)
        base = num << bits
        lo = hi = 0
        for c, (l, h) in zip(coeffs, bnds):
            if c > 0:
                lo += c * l
                hi += c * h
            elif c < 0:
                lo += c * h
                hi += c * l
        if base + den * lo > 0:
            return 1
        if base + den * hi < 0:
            return -1
        # a nonzero form cannot vanish; refine until it separates from zero
        bits *= 2


@functools.total_ordering
@dataclass(frozen=True, eq=True)
class Real:
    """An exact element ``rat + sum(irr[i] * a_i)`` of the rotation module."""

    rat: Fraction
    irr: tuple[int, ...]
    basis: IrrationalBasis = field(repr=False)

    @classmethod
    def of(cls, basis: IrrationalBasis, rat=0, irr: Sequence[int] | None = None) -> "Real":
        irr = tuple(irr) if irr is not None else (0,) * basis.s
        if len(irr) != basis.s:
            raise ValueError(f"expected {basis.s} irrational coefficients, got {len(irr)}")
        return cls(Fraction(rat), tuple(int(n) for n in irr), basis)

    def _coerce(self, other) -> "Real":
        if isinstance(other, Real):
            _check_basis(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return Real(Fraction(other), (0,) * len(self.irr), self.basis)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Real(self.rat + other.rat, tuple(x + y for x, y in zip(self.irr, other.irr)), self.basis)

    __radd__ = __add__

    def __neg__(self):
        return Real(-self.rat, tuple(-x for x in self.irr), self.basis)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Real(self.rat - other.rat, tuple(x - y for x, y in zip(self.irr, other.irr)), self.basis)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if isinstance(k, int):
            return Real(self.rat * k, tuple(x * k for x in self.irr), self.basis)
        if isinstance(k, Fraction):
            if any(self.irr) and k.denominator != 1:
                raise ValueError("scaling would leave the integer module")
            return Real(self.rat * k, tuple(int(x * k) for x in self.irr), self.basis)
        return NotImplemented

    __rmul__ = __mul__

    def sign(self) -> int:
        return linear_form_sign(self.rat, self.irr, self.basis)

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.irr == other.irr:
            return self.rat < other.rat
        return (self - other).sign() < 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return not any(self.irr) and self.rat == other
        if not isinstance(other, Real):
            return NotImplemented
        return self.rat == other.rat and self.irr == other.irr and self.basis == other.basis

    def __hash__(self):
        return hash((self.rat, self.irr))

    def is_rational(self) -> bool:
        return not any(self.irr)

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        scale = 1 << bits
        lo = hi = 0
        for c, (l, h) in zip(self.irr, self.basis.bounds(bits)):
            lo += c * (l if c > 0 else h)
            hi += c * (h if c > 0 else l)
        return self.rat + Fraction(lo, scale), self.rat + Fraction(hi, scale)

    def floor(self) -> int:
        if not any(self.irr):
            return math.floor(self.rat)
        bits = self.basis.precision_hint
        while True:
            lo, hi = self.enclosure(bits)
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
            bits *= 2

    def mod1(self) -> "Real":
        """Canonical circle representative in [0, 1)."""
        k = self.floor()
        if k == 0:
            return self
        return Real(self.rat - k, self.irr, self.basis)

    def __float__(self):
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def to_json(self) -> dict:
        return {"rat": str(self.rat), "irr": list(self.irr)}

    def __repr__(self):
        return f"Real({self})"

    def __str__(self):
        terms = [str(self.rat)] if self.rat or not any(self.irr) else []
        for i, n in enumerate(self.irr, 1):
            if n:
                terms.append(f"{n}*a{i}")
        return " + ".join(terms)


# circle-level operations ---------------------------------------------------

CircleValue = Real


def canonicalize(rat, irr: Sequence[int], basis: IrrationalBasis) -> Real:
    return Real.of(basis, rat, irr).mod1()


def zero(basis: IrrationalBasis) -> Real:
    return Real.of(basis)


def add(a: Real, b: Real) -> Real:
    return (a + b).mod1()


def neg(a: Real) -> Real:
    return (-a).mod1()


def compare(a: Real, b: Real) -> int:
    """-1, 0 or 1 comparing the canonical representatives of a and b."""
    a, b = a.mod1(), b.mod1()
    if a == b:
        return 0
    return -1 if a < b else 1


def decompose_mod(gamma: Real, q: int) -> tuple[int, Real]:
    """Split gamma = j0/q + rest with j0 in [0, q) and rest in [0, 1/q)."""
    if q < 1:
        raise ValueError("q must be positive")
    g = gamma.mod1()
    j0 = (g * q).floor()
    return j0, g - Fraction(j0, q)


def is_rational(a: Real) -> bool:
    return a.is_rational()


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    text = str(text).strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"rationals are written as p/q, got {text!r}")
    return Fraction(text)


def from_json(obj: dict, basis: IrrationalBasis) -> Real:
    return Real.of(basis, parse_rational(obj["rat"]), obj.get("irr") or None)
