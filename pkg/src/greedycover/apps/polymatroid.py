"""Contra-polymatroids and their intersections."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..errors import InstanceError
from ..lattice import BooleanLattice
from ..product import ProductSystem, antichain_order
from ..rational import to_rational
from ..system import GreedySystem
from .common import check_supermodular


@dataclass
class ContraPolymatroidInstance:
    """Monotone supermodular rank on subsets of element ids.

    ``rank(S)`` may be negative on small sets (a cardinality rank shifted by
    an offset); ``rank(empty) <= 0`` is required.
    """

    names: tuple
    costs: tuple
    rank: Callable[[frozenset], object]
    description: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.names)

    @classmethod
    def cardinality(cls, values, offset=0, costs=None, names=None):
        """``r(S) = g(|S|) - offset`` with ``g`` given by its values ``g(0..n)``."""
        g = [to_rational(v) for v in values]
        n = len(g) - 1
        t = to_rational(offset)
        names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(n))
        costs = tuple(to_rational(c) for c in (costs if costs is not None else [1] * n))
        return cls(names, costs, lambda S: g[len(S)] - t, {"values": g, "offset": t})

    @classmethod
    def from_table(cls, table: dict, costs, names):
        table = {frozenset(S): to_rational(v) for S, v in table.items()}

        def rank(S):
            try:
                return table[S]
            except KeyError:
                raise InstanceError(f"rank table has no entry for {sorted(S)}") from None

        return cls(tuple(names), tuple(to_rational(c) for c in costs), rank, {"table": table})


def _convex(values) -> bool:
    diffs = [b - a for a, b in zip(values, values[1:])]
    return all(d >= 0 for d in diffs) and all(p <= q for p, q in zip(diffs, diffs[1:]))


def _check(inst: ContraPolymatroidInstance):
    if len(inst.costs) != inst.n:
        raise InstanceError("one cost per element is required")
    if to_rational(inst.rank(frozenset())) > 0:
        raise InstanceError("rank of the empty set must be <= 0")
    values = inst.description.get("values")
    if values is not None:
        if not _convex(values):
            raise InstanceError("cardinality rank must be non-decreasing and convex")
        return
    problems = check_supermodular(inst.n, lambda S: to_rational(inst.rank(S)))
    if problems:
        raise InstanceError(problems[0])


def _nonnegative(inst) -> bool:
    return to_rational(inst.rank(frozenset())) >= 0


def build_contra_polymatroid(inst: ContraPolymatroidInstance, validate: bool = True) -> GreedySystem:
    """Boolean lattice with ``sum_{e in S} x_e >= r(S)``.

    The system is greedy by construction: unit columns and a supermodular
    rank.  Declares ``delta = 1``; ``b = 1`` when the rank is integral and
    ``a = 0`` when it is non-negative.
    """
    if validate:
        _check(inst)
    nonneg = _nonnegative(inst)
    values = inst.description.get("values")
    table = inst.description.get("table")
    ranks = values if values is not None else (table.values() if table is not None else None)
    integral = ranks is not None and all(Fraction(v).denominator == 1 for v in ranks)
    a = 0 if nonneg else 1
    declared = {"delta": Fraction(1), "a": a}
    if integral:
        declared["b"] = 1
        declared["bound"] = Fraction(1 + a)
    return GreedySystem(
        BooleanLattice(inst.n),
        lambda S, e: 1,
        inst.rank,
        inst.costs,
        names=inst.names,
        rank_nonnegative=nonneg,
        declared=declared,
    )


def build_intersection(insts: list[ContraPolymatroidInstance], validate: bool = True) -> ProductSystem:
    """``p`` contra-polymatroids on one ground set as a product system.

    Every member of the family is the full ground set; the members stay
    distinct because they are addressed by position.  Members are pairwise
    incomparable, so all members of maximal rank are raised together.
    Declares ``k = p``; the truncation is binary, so the bound is ``p``.
    """
    if not insts:
        raise InstanceError("at least one polymatroid is required")
    base = insts[0]
    for inst in insts:
        if inst.n != base.n or tuple(inst.costs) != tuple(base.costs):
            raise InstanceError("all polymatroids must share elements and costs")
        if validate:
            _check(inst)
    p = len(insts)
    ranks = [inst.rank for inst in insts]
    ground = range(base.n)
    return ProductSystem(
        BooleanLattice(base.n),
        [ground] * p,
        lambda u, S, e: 1,
        lambda u, S: ranks[u](S),
        base.costs,
        order=antichain_order,
        names=base.names,
        declared={"k": p, "bound": Fraction(p)},
        rank_nonnegative=all(_nonnegative(i) for i in insts),
    )
