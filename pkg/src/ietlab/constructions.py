"""Named example groups: the solvable tower, the lamplighter spec and a catalog."""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import IrrationalBasis
from .haq import HaqSpec
from .permgrp import GeneratedGroup, Perm

MAX_TOWER = 6


@dataclass(frozen=True)
class TowerLevel:
    n: int
    group: GeneratedGroup
    full_cycle_witness: Perm

    @property
    def q(self) -> int:
        return 2 ** self.n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "gens": [str(g) for g in self.group.gens],
            "full_cycle": str(self.full_cycle_witness),
        }


def _embed(g: Perm, offset: int, q: int) -> Perm:
    img = list(range(q))
    for i, v in enumerate(g):
        img[offset + i] = offset + v
    return Perm._raw(img)


def _tower_step(G: GeneratedGroup) -> tuple[GeneratedGroup, Perm]:
    """G_{2N} from G_N (which contains the N-cycle), conjugated so the new full cycle is sigma."""
    N = G.q
    q = 2 * N
    gens = [_embed(g, 0, q) for g in G.gens] + [_embed(g, N, q) for g in G.gens]
    tau = Perm._raw([(k + N) % q for k in range(q)])
    gens.append(tau)
    pi1 = _embed(Perm.cycle(N), 0, q)
    s = tau * pi1
    # c sends s^i(0) to i, so that c s c^-1 = sigma
    c = [0] * q
    x = 0
    for i in range(q):
        c[x] = i
        x = s[x]
    if x != 0:
        raise AssertionError("tau * Pi_1 is not a full cycle")
    c = Perm._raw(c)
    ci = ~c
    new = GeneratedGroup(q, [c * g * ci for g in gens])
    return new, c * s * ci


def solvable_tower(n: int) -> TowerLevel:
    """A solvable subgroup of S_(2^n) containing the full cycle, of derived length n."""
    if not 1 <= n <= MAX_TOWER:
        raise ValueError(f"tower level must be in 1..{MAX_TOWER}")
    G = GeneratedGroup.symmetric(2)
    cyc = Perm.cycle(2)
    for _ in range(n - 1):
        G, cyc = _tower_step(G)
    return TowerLevel(n, G, cyc)


def lamplighter_spec(basis: IrrationalBasis | None = None) -> HaqSpec:
    return HaqSpec.make(4, ["(1,3)"], s=1, basis=basis, name="lamplighter")


def _symmetric_gens(q: int) -> list[str]:
    return ["(1,2)", "(" + ",".join(map(str, range(1, q + 1))) + ")"]


def _alternating_gens(q: int) -> list[str]:
    return [f"(1,2,{k})" for k in range(3, q + 1)]


def _entries() -> dict[str, tuple[int, list]]:
    out: dict[str, tuple[int, list]] = {
        "metabelian-q3": (3, ["(1,3)"]),
        "lamplighter": (4, ["(1,3)"]),
        "3solv-q4-pair": (4, ["(1,2)", "(3,4)"]),
        "3solv-q4-single": (4, ["(1,2)"]),
        "3solv-S4": (4, _symmetric_gens(4)),
        "nvs-q5-transposition": (5, ["(1,2)"]),
    }
    for q in (5, 6, 7):
        out[f"nvs-S{q}"] = (q, _symmetric_gens(q))
        out[f"nvs-A{q}"] = (q, _alternating_gens(q))
    return out


CATALOG_NAMES = tuple(_entries()) + tuple(f"tower-{n}" for n in range(1, 5))


def catalog_entry(name: str, s: int = 1, basis: IrrationalBasis | None = None) -> HaqSpec:
    if name.startswith("tower-"):
        try:
            n = int(name[len("tower-"):])
        except ValueError:
            raise KeyError(name) from None
        lvl = solvable_tower(n)
        return HaqSpec.make(lvl.q, lvl.group.gens, s=s, basis=basis, name=name)
    entries = _entries()
    if name not in entries:
        raise KeyError(f"unknown catalog entry {name!r}")
    q, gens = entries[name]
    return HaqSpec.make(q, gens, s=s, basis=basis, name=name)


def catalog(basis: IrrationalBasis | None = None) -> dict[str, HaqSpec]:
    return {name: catalog_entry(name, basis=basis) for name in CATALOG_NAMES}
