"""Knapsack cover with multiplicities, convex costs and concave weights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DualUnbounded, InstanceError
from ..lattice import IdealLattice
from ..rational import ceil_div, to_rational
from ..system import GreedySystem


@dataclass
class KnapsackItem:
    u: Fraction
    c: Fraction
    d: int = 1
    u_marginals: tuple | None = None
    c_marginals: tuple | None = None

    def weights(self) -> tuple:
        return tuple(self.u_marginals) if self.u_marginals is not None else (self.u,) * self.d

    def costs(self) -> tuple:
        return tuple(self.c_marginals) if self.c_marginals is not None else (self.c,) * self.d

    @property
    def uniform(self) -> bool:
        return len(set(self.weights())) <= 1 and len(set(self.costs())) <= 1


@dataclass
class KnapsackInstance:
    items: list
    D: Fraction
    names: tuple | None = None

    @classmethod
    def simple(cls, u, c, D, d=None):
        d = d if d is not None else [1] * len(u)
        items = [KnapsackItem(to_rational(a), to_rational(b), int(k)) for a, b, k in zip(u, c, d)]
        return cls(items, to_rational(D))

    def item_names(self) -> tuple:
        return tuple(self.names) if self.names is not None else tuple(f"i{k}" for k in range(len(self.items)))


def _check(inst: KnapsackInstance):
    if inst.D <= 0:
        raise InstanceError("demand must be positive")
    for k, item in enumerate(inst.items):
        if item.d < 1:
            raise InstanceError(f"item {k} needs multiplicity >= 1")
        w, c = item.weights(), item.costs()
        if len(w) != item.d or len(c) != item.d:
            raise InstanceError(f"item {k}: marginal sequences must have length d")
        if any(v <= 0 for v in w):
            raise InstanceError(f"item {k}: weights must be positive")
        if any(v < 0 for v in c):
            raise InstanceError(f"item {k}: costs must be non-negative")
        if any(a < b for a, b in zip(w, w[1:])):
            raise InstanceError(f"item {k}: marginal weights must be non-increasing")
        if any(a > b for a, b in zip(c, c[1:])):
            raise InstanceError(f"item {k}: marginal costs must be non-decreasing")
    total = sum(sum(item.weights()) for item in inst.items)
    if total < inst.D:
        raise InstanceError(f"total weight {total} is below the demand {inst.D}")


def copy_layout(inst: KnapsackInstance) -> list[tuple[int, int]]:
    """``(item, copy)`` for each element id; item-major, lowest copy first."""
    return [(k, j) for k, item in enumerate(inst.items) for j in range(item.d)]


def build_knapsack_cover(inst: KnapsackInstance, validate: bool = True) -> GreedySystem:
    """Knapsack cover over copies of items.

    Each copy is an element.  Rows are the untaken sets: complements of
    ideals of the copy chains, so a copy can only be taken after all lower
    copies of the same item.  Row ``S`` reads
    ``sum_{e in S} u_e x_e >= D - u(E \\ S)``; truncation turns this into
    the knapsack-cover inequalities.  Declares ``delta = 1``; the global
    rounding flag ``b`` is 1 only for single copies, but the bound is 2 in
    every case.
    """
    if validate:
        _check(inst)
    layout = copy_layout(inst)
    n = len(layout)
    weights, costs, arcs = [], [], []
    for k, item in enumerate(inst.items):
        base = len(weights)
        weights.extend(item.weights())
        costs.extend(item.costs())
        arcs.extend((base + j + 1, base + j) for j in range(item.d - 1))
    total = sum(weights)
    D = inst.D
    names = inst.item_names()
    labels = [names[k] if inst.items[k].d == 1 else f"{names[k]}#{j + 1}" for k, j in layout]
    single = all(item.d == 1 for item in inst.items)
    declared = {"delta": Fraction(1), "beta": Fraction(1), "gamma": Fraction(1), "b": 1 if single else 2, "a": 1}
    # the lowest untaken copy always absorbs the whole rank drop, so no run
    # ever rounds up even when the global flag is 2
    declared["bound"] = Fraction(2)

    def rank(S):
        return D - (total - sum(weights[e] for e in S))

    return GreedySystem(
        IdealLattice(n, arcs),
        lambda S, e: weights[e],
        rank,
        costs,
        names=labels,
        rank_nonnegative=False,
        declared=declared,
    )


@dataclass
class BlockRun:
    counts: tuple
    raises: tuple
    dual_value: Fraction
    primal_cost: Fraction


def knapsack_greedy(inst: KnapsackInstance) -> BlockRun:
    """Greedy on item counts, taking copies of an item in blocks.

    Requires equal marginals within each item.  When an item becomes tight
    with residual demand ``R``, ``min(ceil(R / u), remaining)`` copies are
    taken at once; the element-level run takes the same copies one by one
    with zero raises in between, so both produce the same counts.
    """
    _check(inst)
    if not all(item.uniform for item in inst.items):
        raise InstanceError("block mode needs equal marginals within each item")
    m = len(inst.items)
    u = [item.u for item in inst.items]
    c = [item.c for item in inst.items]
    left = [item.d for item in inst.items]
    load = [Fraction(0)] * m
    counts = [0] * m
    R = inst.D
    raises = []
    dual = Fraction(0)
    while R > 0:
        best, estar = None, None
        coefs = {}
        for k in range(m):
            if left[k] == 0:
                continue
            coef = min(u[k], R)
            coefs[k] = coef
            ratio = (c[k] - load[k]) / coef
            if best is None or ratio < best:
                best, estar = ratio, k
        if estar is None:
            raise DualUnbounded(frozenset(), R)
        if best > 0:
            dual += best * R
            for k, coef in coefs.items():
                # every copy of an untaken item carries the same load
                load[k] += best * coef
        raises.append(best)
        s = min(ceil_div(R, u[estar]), left[estar])
        counts[estar] += s
        left[estar] -= s
        R -= s * u[estar]
    cost = sum((ck * k for ck, k in zip(c, counts)), Fraction(0))
    return BlockRun(tuple(counts), tuple(raises), dual, cost)


def aggregate_counts(inst: KnapsackInstance, x) -> tuple:
    """Sum an element-level solution into per-item counts."""
    counts = [0] * len(inst.items)
    for (k, _), v in zip(copy_layout(inst), x):
        counts[k] += v
    return tuple(counts)


def is_ideal_shaped(inst: KnapsackInstance, x) -> bool:
    """Copies of every item are used lowest first."""
    prev = {}
    for (k, j), v in zip(copy_layout(inst), x):
        if v and j > 0 and not prev.get(k):
            return False
        prev[k] = v
    return True
