"""Knapsack cover with precedence constraints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InstanceError, LatticeError
from ..lattice import IdealLattice
from ..product import ProductSystem
from ..rational import to_rational
from .common import unit_cover_system


@dataclass
class PrecedenceKnapsackInstance:
    u: tuple
    c: tuple
    arcs: list  # (i, j): i must be taken before j
    D: Fraction
    names: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.u)


def width(n: int, arcs) -> int:
    """Largest antichain, via Dilworth: ``n`` minus a maximum matching on the comparability graph."""
    reach = IdealLattice(n, arcs)
    succ = [sorted(reach.above(i)) for i in range(n)]
    match = [-1] * n

    def augment(v, seen):
        for w in succ[v]:
            if w in seen:
                continue
            seen.add(w)
            if match[w] < 0 or augment(match[w], seen):
                match[w] = v
                return True
        return False

    return n - sum(1 for v in range(n) if augment(v, set()))


def minimal_outside(lat: IdealLattice, A: frozenset) -> frozenset:
    """Elements outside ``A`` whose predecessors all lie in ``A``."""
    return frozenset(e for e in range(lat.n) if e not in A and lat.below(e) <= A)


def build_precedence_knapsack(inst: PrecedenceKnapsackInstance, validate: bool = True) -> ProductSystem:
    """Family ``P(A)`` for every ideal ``A`` of weight below ``D``.

    A chosen set is feasible when it hits ``P(A)`` for every light ideal
    ``A``; its largest ideal then has weight at least ``D``.  Members are
    ordered by inclusion of their ideals, so duplicates of the same set stay
    apart.  Every member is an antichain, hence the witness-cover bound and
    the overall bound are the width ``w``.
    """
    u = [to_rational(v) for v in inst.u]
    D = to_rational(inst.D)
    if validate:
        if len(inst.c) != inst.n:
            raise InstanceError("one cost per item is required")
        if D <= 0:
            raise InstanceError("demand must be positive")
        if any(v <= 0 for v in u):
            raise InstanceError("weights must be positive")
        if sum(u) < D:
            raise InstanceError(f"total weight {sum(u)} is below the demand {D}")
    try:
        lat = IdealLattice(inst.n, inst.arcs)
    except LatticeError as exc:
        raise InstanceError(str(exc)) from None
    ideals = [A for A in lat.elements() if sum((u[e] for e in A), Fraction(0)) < D]
    fam = [minimal_outside(lat, A) for A in ideals]
    w = width(inst.n, inst.arcs)

    def leq(S, i, j):
        return ideals[i] <= ideals[j]

    names = inst.names or tuple(f"i{k}" for k in range(inst.n))
    ps = unit_cover_system(inst.n, fam, inst.c, order=leq, names=names, declared={"k": w, "cover_bound": w, "bound": Fraction(w)})
    ps.ideals = tuple(ideals)
    return ps


def is_ideal(n: int, arcs, chosen) -> bool:
    chosen = set(chosen)
    return all(i in chosen for i, j in arcs if j in chosen)
