"""Helpers shared by the application adapters."""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable

from ..errors import InstanceError
from ..product import ProductSystem, antichain_order


def complement(n: int, taken: Iterable[int]) -> frozenset:
    """Map a "taken" set to the untaken set used as a lattice row.

    Applications are naturally stated over the set of chosen elements; the
    solver walks down from the full support, so rows are indexed by the
    complement.  Boolean lattices map to Boolean lattices and ideals of a
    precedence order map to ideals of the reversed order.
    """
    return frozenset(range(n)) - frozenset(taken)


def check_supermodular(n: int, rank: Callable[[frozenset], object], limit: int = 12) -> list[str]:
    """Problems with monotonicity or supermodularity of ``rank`` on ``2^E``.

    Uses the local exchange form ``r(S+e) + r(S+f) <= r(S+e+f) + r(S)``,
    equivalent to full supermodularity.  Skipped above ``limit`` elements.
    """
    if n > limit:
        return []
    problems = []
    ground = range(n)
    for k in range(n + 1):
        for combo in combinations(ground, k):
            S = frozenset(combo)
            rs = rank(S)
            outside = [e for e in ground if e not in S]
            for e in outside:
                if rank(S | {e}) < rs:
                    problems.append(f"rank decreases when adding {e} to {sorted(S)}")
                    return problems
            for e, f in combinations(outside, 2):
                if rank(S | {e}) + rank(S | {f}) > rank(S | {e, f}) + rs:
                    problems.append(f"supermodularity fails at {sorted(S)} with {e}, {f}")
                    return problems
    return problems


def unit_cover_system(n: int, ufamily, costs, order=antichain_order, names=None, declared=None) -> ProductSystem:
    """Product system asking every member ``U`` to be hit at least once.

    Row ``(U, S)`` reads ``sum_{e in U & S} x_e >= 1 - |U \\ S|`` over the
    Boolean lattice of untaken elements; it is only active while ``U`` lies
    entirely inside ``S``.
    """
    from ..lattice import BooleanLattice

    fam = [frozenset(U) for U in ufamily]
    for U in fam:
        if not U:
            raise InstanceError("a member of the family is empty and can never be hit")
        if not U <= frozenset(range(n)):
            raise InstanceError("family member outside the ground set")
    return ProductSystem(
        BooleanLattice(n),
        fam,
        lambda u, S, e: 1,
        lambda u, S: 1 - len(fam[u] - S),
        costs,
        order=order,
        names=names,
        declared=declared,
        rank_nonnegative=False,
    )
