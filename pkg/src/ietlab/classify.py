"""Structural classification of H_{A,Q} from the finite groups W, V and W0.

Every verdict is backed by a certificate: the rule that produced it and the
finite data it was read from.  Labels such as exponential growth are implied
tags, never verified independently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .haq import (
    HaqSpec,
    WitnessResult,
    commutator_membership,
    default_probes,
    witness_search,
)
from .permgrp import GeneratedGroup, Perm, abelian_invariants, intersect

DEFAULT_WITNESS_BUDGET = 6

LABEL_EG2 = "elementary-amenable-EG2"
LABEL_NVN = "not-virtually-nilpotent"
LABEL_GROWTH = "exponential-growth"
LABEL_NOT_LINEAR = "not-linear"

UNDETERMINED = "undetermined-by-criteria"


@dataclass
class Certificate:
    rule: str
    witness: dict

    def to_dict(self) -> dict:
        return {"rule": self.rule, "witness": self.witness}


@dataclass
class Abelianization:
    """H_ab = F x Z^free_rank, with F = S(Q)/N for some N between two bounds."""

    free_rank: int
    F: list[int] | None
    lower: list[int]  # invariants of S(Q)/N_upper, the smallest possible F
    upper: list[int]  # invariants of S(Q)/N_resolved, the largest F still possible
    N_lower_order: int
    N_upper_order: int
    N_resolved_order: int
    witnesses: list[WitnessResult] = field(default_factory=list)
    membership: list[str] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return self.F is not None

    def to_dict(self, realization: bool = False) -> dict:
        out: dict = {"free_rank": self.free_rank}
        if self.F is not None:
            out["F"] = self.F
        else:
            out["F_bounds"] = {"lower": self.lower, "upper": self.upper}
        out["kernel"] = {
            "N_lower_order": self.N_lower_order,
            "N_upper_order": self.N_upper_order,
            "N_resolved_order": self.N_resolved_order,
        }
        if self.witnesses:
            out["witnesses"] = [_witness_summary(w, realization) for w in self.witnesses]
        if self.membership:
            out["membership_certified"] = self.membership
        return out


def _witness_summary(w: WitnessResult, realization: bool) -> dict:
    out = {"target": str(w.target), "status": w.status}
    if w.word is not None:
        out["factors"] = w.factors
        out["length"] = len(w.factors)
        prof = w.word.element().kernel
        out["profile_values"] = [str(v) for v in prof.values]
        out["local_perms"] = {name: str(v) for name, v in w.cut_values()}
        if realization:
            out["word"] = w.word.to_json()
    return out


@dataclass
class Report:
    spec: HaqSpec
    is_abelian: bool
    derived_length: int | None
    virtually_solvable: str  # "yes", "no" or UNDETERMINED
    lamplighter: dict | None
    labels: list[str]
    abelianization: Abelianization
    certificates: list[Certificate]
    probes: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def solvable(self) -> dict:
        if self.derived_length is None:
            return {"nonsolvable": True}
        return {"dl": self.derived_length}

    def to_dict(self, realization: bool = True) -> dict:
        """The report as plain data.

        The core fields only depend on q, S(Q) and s.  With ``realization``
        a block is added recording the irrationals, the rotation probes and
        the explicit witness words, which do depend on the chosen realization.
        """
        sp = self.spec.to_json()
        sp.pop("alphas", None)
        out = {
            "spec": sp,
            "is_abelian": self.is_abelian,
            "solvable": self.solvable,
            "virtually_solvable": self.virtually_solvable,
            "lamplighter": self.lamplighter,
            "labels": self.labels,
            "abelianization": self.abelianization.to_dict(),
            "certificates": [c.to_dict() for c in self.certificates],
        }
        if realization:
            out["realization"] = {
                "alphas": self.spec.basis.to_json()["realization"],
                "probes": [list(p) for p in self.probes],
                "witness_words": [
                    {"target": str(w.target), "word": w.word.to_json()}
                    for w in self.abelianization.witnesses if w.word is not None
                ],
            }
        return out

    def to_json(self, realization: bool = True) -> str:
        return json.dumps(self.to_dict(realization), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        sp = self.spec
        lines = [f"H_(A,Q) with q={sp.q}, S(Q)=<{', '.join(map(str, sp.qgens))}>, s={sp.s}"]
        lines.append(f"  abelian: {'yes' if self.is_abelian else 'no'}")
        lines.append("  solvable: " + (f"derived length {self.derived_length}" if self.derived_length is not None else "no"))
        lines.append(f"  virtually solvable: {self.virtually_solvable}")
        if self.lamplighter is not None:
            L = self.lamplighter["L"]
            lines.append(f"  lamplighter: L={_fmt_inv(L)}, k={self.lamplighter['k']}")
        if self.labels:
            lines.append("  labels: " + ", ".join(self.labels))
        ab = self.abelianization
        if ab.resolved:
            lines.append(f"  abelianization: {_fmt_ab(ab.F, ab.free_rank)}")
        else:
            lines.append(f"  abelianization: F between {_fmt_inv(ab.lower)} and {_fmt_inv(ab.upper)}, times Z^{ab.free_rank}")
        return "\n".join(lines)


def _fmt_inv(inv: Sequence[int]) -> str:
    return " x ".join(f"Z/{d}" for d in inv) if inv else "1"


def _fmt_ab(F: Sequence[int], r: int) -> str:
    parts = [f"Z/{d}" for d in F]
    parts.append("Z" if r == 1 else f"Z^{r}")
    return " x ".join(parts)


# abelianization ------------------------------------------------------------------


def kernel_bounds(spec: HaqSpec) -> tuple[GeneratedGroup, GeneratedGroup]:
    """N_lower = [S(Q), S(Q)] and N_upper = [W, W] intersected with S(Q)."""
    SQ = spec.SQ
    return SQ.derived_subgroup(), intersect(spec.W0, SQ)


def abelianization(
    spec: HaqSpec,
    budget: int = DEFAULT_WITNESS_BUDGET,
    probes: Sequence[Sequence[int]] | None = None,
    node_cap: int = 100_000,
) -> Abelianization:
    """Compute F, or bounds on it, by closing the gap between the kernel bounds.

    Elements t of N_upper outside the currently resolved kernel are tested
    with witness_search (and the probe-commutator membership test as a
    fallback); every certified t is added and the kernel normally closed in
    S(Q), since {t : E_t in [H, H]} is a normal subgroup of S(Q).
    """
    SQ = spec.SQ
    lo, up = kernel_bounds(spec)
    N = lo
    witnesses: list[WitnessResult] = []
    members: list[str] = []
    if N.order() != up.order():
        probes = default_probes(spec) if probes is None else [tuple(p) for p in probes]
        stuck: list[Perm] = []
        for t in sorted(up.elements(), key=lambda p: (p.order(), p.one_line())):
            if N.contains(t) or any(N.contains(t * ~u) for u in stuck):
                continue
            res = witness_search(spec, t, budget=budget, probes=probes, node_cap=node_cap)
            witnesses.append(res)
            if res.status == "found" or (res.status == "unresolved" and commutator_membership(spec, t, probes)):
                if res.status != "found":
                    members.append(str(t))
                N = SQ.normal_closure(list(N.gens) + [t])
            else:
                stuck.append(t)
            if N.order() == up.order():
                break
    free = spec.s
    lower_inv = abelian_invariants(SQ, up)
    upper_inv = abelian_invariants(SQ, N)
    F = upper_inv if N.order() == up.order() else None
    return Abelianization(free, F, lower_inv, upper_inv, lo.order(), up.order(), N.order(), witnesses, members)


# classification ------------------------------------------------------------------


def classify(
    spec: HaqSpec,
    budget: int = DEFAULT_WITNESS_BUDGET,
    probes: Sequence[Sequence[int]] | None = None,
) -> Report:
    q = spec.q
    W, V = spec.W, spec.V
    certs: list[Certificate] = []
    labels: list[str] = []
    lamp = None

    w_abelian = W.is_abelian()
    certs.append(Certificate("abelian-iff-W-abelian", {"W_order": W.order(), "W_abelian": w_abelian}))
    series = W.derived_series()
    dlW = W.derived_length()
    if w_abelian:
        # H contains an irrational rotation, so it is never trivial
        dl = 1
        vs = "yes"
    else:
        labels += [LABEL_EG2, LABEL_NVN, LABEL_GROWTH]
        certs.append(Certificate("W-nonabelian-implies-growth-labels", {"W_order": W.order()}))
        dl = dlW
        certs.append(Certificate(
            "derived-length-of-H-equals-W",
            {"W_derived_length": dlW, "derived_series_orders": [G.order() for G in series]},
        ))
        if dl is not None:
            vs = "yes"
        elif q >= 5 and W.contains_alternating():
            vs = "no"
            labels.append(LABEL_NOT_LINEAR)
            certs.append(Certificate(
                "alternating-in-W-implies-not-virtually-solvable",
                {"q": q, "W_order": W.order(), "contains_A_q": True},
            ))
        else:
            vs = UNDETERMINED
            certs.append(Certificate(
                "criteria-silent",
                {"q": q, "W_order": W.order(), "contains_A_q": q >= 3 and W.contains_alternating()},
            ))
        if V.is_abelian():
            lamp = {"L": abelian_invariants(spec.SQ), "k": spec.s}
            certs.append(Certificate(
                "V-abelian-implies-lamplighter",
                {"V_order": V.order(), "V_abelian": True, "V_gens": sorted(str(g) for g in V.gens)},
            ))
    ab = abelianization(spec, budget=budget, probes=probes)
    certs.append(Certificate(
        "abelianization-kernel-bounds",
        {"N_lower_order": ab.N_lower_order, "N_upper_order": ab.N_upper_order,
         "N_resolved_order": ab.N_resolved_order, "W0_order": spec.W0.order()},
    ))
    used = probes
    if used is None and ab.witnesses:
        used = default_probes(spec)
    return Report(spec, w_abelian, dl, vs, lamp, labels, ab, certs, [tuple(p) for p in (used or [])])


# non-isomorphism evidence -----------------------------------------------------------


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF of the integer lattice spanned by ``rows`` (zero rows dropped)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        # gcd-reduce column c among rows r..
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[piv] = m[piv], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    f = m[i][c] // m[r][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                f = m[i][c] // m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            r += 1
    out = [row for row in m[:r]]
    return out


def _module_lattice(spec: HaqSpec, radicands: Sequence[int]) -> list[list[int]] | None:
    """The rotation module A in R/Z as a lattice in the coordinates sqrt(r), r in ``radicands``.

    a_i = sqrt(r_i) - floor(sqrt(r_i)) agrees with sqrt(r_i) modulo Z.
    """
    b = spec.basis
    if not b.radicands:
        return None
    idx = {r: i for i, r in enumerate(radicands)}
    rows = []
    for v in spec.rotations:
        row = [0] * len(radicands)
        for c, r in zip(v, b.radicands):
            row[idx[r]] += c
        rows.append(row)
    return hermite_normal_form(rows)


def non_isomorphism(
    a: HaqSpec,
    b: HaqSpec,
    budget: int = DEFAULT_WITNESS_BUDGET,
) -> list[dict]:
    """Invariants that tell H_a and H_b apart.  An empty list means no evidence, not isomorphism."""
    ev: list[dict] = []
    if a.s != b.s:
        ev.append({"type": "rank", "detail": {"s_a": a.s, "s_b": b.s},
                   "reason": "the torsion-free rank of the abelianization differs"})
    if a.basis.radicands and b.basis.radicands:
        rads = sorted(set(a.basis.radicands) | set(b.basis.radicands))
        la, lb = _module_lattice(a, rads), _module_lattice(b, rads)
        if la != lb:
            ev.append({"type": "saf-module", "detail": {"radicands": rads, "A_a": la, "A_b": lb},
                       "reason": "the rotation modules differ, so the groups are not conjugate in IET"})
    ra, rb = classify(a, budget=budget), classify(b, budget=budget)
    aa, ab = ra.abelianization, rb.abelianization
    sig_a = a.SQ.contains(a.sigma) if a.q > 1 else True
    sig_b = b.SQ.contains(b.sigma) if b.q > 1 else True
    if aa.resolved and ab.resolved and (aa.F, aa.free_rank) != (ab.F, ab.free_rank):
        kind = "F" if sig_a and sig_b else "abelianization"
        ev.append({"type": kind, "detail": {"F_a": aa.F, "F_b": ab.F, "free_rank_a": aa.free_rank,
                                           "free_rank_b": ab.free_rank,
                                           "sigma_in_both": sig_a and sig_b},
                   "reason": "abelianizations differ"})
    elif not (aa.resolved and ab.resolved):
        # disjoint ranges of possible |F| still separate the groups
        ra_lo, ra_hi = math.prod(aa.lower), math.prod(aa.upper)
        rb_lo, rb_hi = math.prod(ab.lower), math.prod(ab.upper)
        if ra_hi < rb_lo or rb_hi < ra_lo:
            ev.append({"type": "abelianization", "detail": {"F_a_order": [ra_lo, ra_hi], "F_b_order": [rb_lo, rb_hi]},
                       "reason": "possible orders of F do not overlap"})
    if ra.derived_length != rb.derived_length:
        ev.append({"type": "derived-length", "detail": {"a": ra.solvable, "b": rb.solvable},
                   "reason": "derived lengths differ"})
    elif ra.virtually_solvable != rb.virtually_solvable and UNDETERMINED not in (ra.virtually_solvable, rb.virtually_solvable):
        ev.append({"type": "virtual-solvability", "detail": {"a": ra.virtually_solvable, "b": rb.virtually_solvable},
                   "reason": "one group is virtually solvable and the other is not"})
    return ev

