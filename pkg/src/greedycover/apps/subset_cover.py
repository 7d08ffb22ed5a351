"""Weighted set cover as a greedy system."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InstanceError
from ..lattice import BooleanLattice
from ..rational import to_rational
from ..system import GreedySystem


@dataclass
class SubsetCoverInstance:
    ground: tuple
    sets: list  # frozensets of ground items
    costs: tuple
    names: tuple | None = None

    @classmethod
    def build(cls, ground, sets, costs, names=None):
        return cls(tuple(ground), [frozenset(s) for s in sets], tuple(to_rational(c) for c in costs), names)

    def set_names(self) -> tuple:
        return tuple(self.names) if self.names is not None else tuple(f"T{i + 1}" for i in range(len(self.sets)))


def is_cover(inst: SubsetCoverInstance, x) -> bool:
    covered = set()
    for T, v in zip(inst.sets, x):
        if v > 0:
            covered |= T
    return covered >= set(inst.ground)


def build_subset_cover(inst: SubsetCoverInstance, validate: bool = True) -> GreedySystem:
    """Boolean lattice over set indices, rows indexed by the untaken sets.

    Row ``S`` reads ``sum_{i in S} |T_i| x_i >= |G| - |union_{i not in S} T_i|``.
    The rank is non-negative and every rounding is exact, so ``a = 0`` and
    ``b = 1``; column weights are constant (``beta = 1``) and
    ``gamma = max |T_i|`` bounds ``delta``.
    """
    ground = frozenset(inst.ground)
    if validate:
        if len(inst.costs) != len(inst.sets):
            raise InstanceError("one cost per set is required")
        for T in inst.sets:
            if not T <= ground:
                raise InstanceError("a set contains items outside the ground set")
        if frozenset().union(*inst.sets) != ground:
            raise InstanceError("the sets do not cover the ground set")
    sets = inst.sets
    m = len(sets)
    size = len(ground)
    gamma = Fraction(max((len(T) for T in sets), default=1))

    def rank(S):
        outside = frozenset().union(*(sets[i] for i in range(m) if i not in S))
        return size - len(outside)

    def separation(x):
        if is_cover(inst, x):
            return None
        return frozenset(i for i in range(m) if x[i] <= 0)

    declared = {"beta": Fraction(1), "gamma": gamma, "delta": gamma, "b": 1, "a": 0, "bound": gamma}
    return GreedySystem(
        BooleanLattice(m),
        lambda S, i: len(sets[i]),
        rank,
        inst.costs,
        names=inst.set_names(),
        rank_nonnegative=True,
        declared=declared,
        separation=separation,
    )
