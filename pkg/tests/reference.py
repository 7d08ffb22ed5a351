"""Brute-force reference implementations used to freeze expected values.

Nothing here calls into the solver, the truncation, the oracle or the
lattice's ``phi``.  A system is flattened into a plain table of rows
``(support, coeffs, rank)`` plus the order relation, and every quantity is
recomputed from its definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil


@dataclass
class Table:
    n: int
    costs: tuple
    rows: list  # (support frozenset, {e: coeff}, rank)
    leq: object  # leq(S, T) on supports

    def rank(self, S):
        return self._rank[S]

    def coeff(self, S, e):
        return self._coeff[S].get(e, Fraction(0))

    def __post_init__(self):
        self._rank = {S: Fraction(r) for S, _, r in self.rows}
        self._coeff = {S: {e: Fraction(v) for e, v in c.items()} for S, c, _ in self.rows}


def table_of(sys, elements) -> Table:
    """Flatten a system given the full list of its lattice elements."""
    rows = [(S, {e: sys.a(S, e) for e in S}, sys.r(S)) for S in elements]
    return Table(sys.n, tuple(sys.costs), rows, sys.lattice.leq)


def pos(q):
    return q if q > 0 else Fraction(0)


def phi(tab: Table, S, e):
    """Unique maximum of ``{T <= S : e not in T}`` found by enumeration."""
    below = [T for T, _, _ in tab.rows if e not in T and tab.leq(T, S)]
    tops = [T for T in below if all(tab.leq(U, T) for U in below)]
    assert len(tops) == 1, "no unique maximum"
    return tops[0]


def truncated(tab: Table) -> Table:
    rows = []
    for S, c, r in tab.rows:
        new = {}
        for e, v in c.items():
            cap = pos(Fraction(r)) - pos(tab.rank(phi(tab, S, e)))
            new[e] = min(Fraction(v), cap)
        rows.append((S, new, r))
    return Table(tab.n, tab.costs, rows, tab.leq)


def feasible(tab: Table, x) -> bool:
    return all(sum(tab.coeff(S, e) * x[e] for e in S) >= tab.rank(S) for S, _, _ in tab.rows)


def box(tab: Table) -> list[int]:
    ub = [0] * tab.n
    for S, c, r in tab.rows:
        for e, v in c.items():
            if v > 0 and r > 0:
                ub[e] = max(ub[e], ceil(Fraction(r) / Fraction(v)))
    return ub


def brute_opt(tab: Table, limit: int = 20_000):
    """``(value, lex-least argmin)`` over the clamping box, or ``None`` if too big."""
    ub = box(tab)
    size = 1
    for u in ub:
        size *= u + 1
    if size > limit:
        return None
    best = None
    for x in product(*(range(u + 1) for u in ub)):
        if feasible(tab, x):
            cost = sum(c * v for c, v in zip(tab.costs, x))
            if best is None or cost < best[0]:
                best = (cost, x)
    return best


def same_integer_points(a: Table, b: Table) -> bool:
    ub = [max(p, q) for p, q in zip(box(a), box(b))]
    return all(feasible(a, x) == feasible(b, x) for x in product(*(range(u + 1) for u in ub)))


def naive_greedy(tab: Table):
    """Primal-dual greedy by repeated selection over the remaining rows.

    Picks the remaining row of largest rank (ties: a maximal one in the
    order), raises its dual until an element becomes tight (smallest id on
    ties), and discards every remaining row containing that element.
    Returns ``(x, y, chain rows, bottlenecks, dual value)``.
    """
    tr = truncated(tab)
    remaining = [S for S, _, _ in tab.rows]
    load = [Fraction(0)] * tab.n
    y = {}
    chain, bots = [], []

    def pick(rows):
        best = max(tab.rank(S) for S in rows)
        ties = [S for S in rows if tab.rank(S) == best]
        top = [S for S in ties if not any(T != S and tab.leq(S, T) for T in ties)]
        assert len(top) == 1
        return top[0]

    S = pick(remaining)
    chain.append(S)
    while tab.rank(S) > 0:
        options = [(Fraction(tab.costs[e]) - load[e]) / tr.coeff(S, e) for e in sorted(S) if tr.coeff(S, e) > 0]
        elems = [e for e in sorted(S) if tr.coeff(S, e) > 0]
        if not elems:
            raise ValueError("dual unbounded")
        eps = min(options)
        e_star = elems[options.index(eps)]
        if eps > 0:
            y[S] = eps
            for e in elems:
                load[e] += eps * tr.coeff(S, e)
        bots.append(e_star)
        remaining = [T for T in remaining if e_star not in T]
        S = pick(remaining)
        chain.append(S)
    x = [0] * tab.n
    for j, e in enumerate(bots):
        gap = pos(tab.rank(chain[j])) - pos(tab.rank(chain[j + 1]))
        x[e] = max(0, ceil(gap / tr.coeff(chain[j], e)))
    dual = sum((v * tab.rank(S) for S, v in y.items()), Fraction(0))
    return tuple(x), y, tuple(chain), tuple(bots), dual
