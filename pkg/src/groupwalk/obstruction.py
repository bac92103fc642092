"""Coset obstructions to convergence of a random walk on a finite group.

A walk with step law ``p`` fails to converge exactly when the support of ``p``
sits inside a coset ``bH`` with ``b`` normalizing ``H`` and ``b`` outside ``H``.
:func:`detect_obstruction` decides this with one normal-closure computation;
:func:`brute_force_obstruction` searches the subgroup lattice literally and
serves as its oracle.  See ``docs/obstruction_lemma.md`` for why the two agree.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySupport
from .group import (
    DEFAULT_LATTICE_CAP,
    Subgroup,
    cosets,
    enumerate_subgroups,
    normal_closure,
    normalizer,
)
from .measure import Distribution, support_subgroup, uniform_on

__all__ = [
    "Obstruction",
    "Converges",
    "Diverges",
    "detect_obstruction",
    "brute_force_obstruction",
    "verdict",
]


@dataclass(frozen=True)
class Obstruction:
    """Minimal witness ``H*`` with the support inside ``coset_rep * H*``."""

    subgroup: Subgroup
    coset_rep: int
    period: int

    def __post_init__(self):
        H = self.subgroup
        assert self.coset_rep not in H, "coset representative must lie outside H*"
        assert self.period >= 2

    def coset(self) -> tuple[int, ...]:
        G = self.subgroup.parent
        return tuple(sorted(int(x) for x in G.cayley[self.coset_rep, list(self.subgroup.members)]))

    def same_as(self, other: Obstruction) -> bool:
        """Equal witness and period, representatives defining the same coset."""
        return (self.subgroup == other.subgroup and self.period == other.period
                and self.coset() == other.coset())

    def to_dict(self) -> dict:
        return {
            "subgroup_members": list(self.subgroup.members),
            "coset_rep": self.coset_rep,
            "period": self.period,
            "normal_in_support": True,
        }


@dataclass(frozen=True)
class Converges:
    limit: Distribution
    support: Subgroup


@dataclass(frozen=True)
class Diverges:
    obstruction: Obstruction
    support: Subgroup


def _support_or_raise(p: Distribution, atom_threshold) -> tuple[int, ...]:
    S = p.support(atom_threshold)
    if not S:
        raise EmptySupport("distribution has no atom above the threshold")
    return S


def detect_obstruction(p: Distribution, atom_threshold=0) -> Obstruction | None:
    """Return the minimal coset obstruction of ``p``, or ``None`` if the walk converges.

    With ``S`` the support, ``s0`` its least element and ``Gbar = <S>``, the
    witness is the normal closure in ``Gbar`` of ``{s0^-1 s : s in S}``.  It
    depends on the support set only, never on the masses.
    """
    S = _support_or_raise(p, atom_threshold)
    G = p.group
    s0 = S[0]
    Gbar = support_subgroup(p, atom_threshold)
    diffs = {G.mul(G.inv(s0), s) for s in S}
    H = normal_closure(G, Gbar, diffs)
    if H.order == Gbar.order:
        return None
    assert H.is_normal_in(Gbar)
    return Obstruction(H, s0, Gbar.order // H.order)


def brute_force_obstruction(p: Distribution, atom_threshold=0,
                            cap: int = DEFAULT_LATTICE_CAP) -> Obstruction | None:
    """Literal search over every subgroup ``H`` of the support subgroup.

    For each ``H``, every coset ``bH`` with ``b`` in ``N(H) \\ H`` is tested for
    containing the whole support.  Among all witnesses the smallest by
    ``(size, members)`` is returned.
    """
    S = np.asarray(_support_or_raise(p, atom_threshold))
    G = p.group
    Gbar = support_subgroup(p, atom_threshold)
    for H in enumerate_subgroups(G, within=Gbar, cap=cap):
        N = normalizer(G, H)
        for Z in cosets(G, H):
            b = Z.representative
            if b in H or b not in N:
                continue
            if np.isin(S, Z.members).all():
                # b lies in Gbar because S is non-empty and inside bH
                return Obstruction(H, b, Gbar.order // H.order)
    return None


def verdict(p: Distribution, atom_threshold=0) -> Converges | Diverges:
    """Converges to the uniform law on the support subgroup, or diverges with a witness."""
    Gbar = support_subgroup(p, atom_threshold)
    obs = detect_obstruction(p, atom_threshold)
    if obs is None:
        return Converges(uniform_on(Gbar, exact=p.exact), Gbar)
    return Diverges(obs, Gbar)
