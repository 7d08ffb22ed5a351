"""Exact ground truth for desk-sized instances.

Every feasible integer point can be clamped into the box
``u_e = max over rows with a(S,e) > 0 of ceil(r(S)^+ / a(S,e))`` without
losing feasibility or raising the cost: once ``x_e >= u_e`` the element
alone satisfies every row that contains it.  ``exact_opt`` therefore
searches that box by depth-first enumeration with feasibility and cost
pruning.  Rows are rescaled to integers first so the inner loop avoids
rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import BudgetExceeded
from .rational import ceil_div

DEFAULT_ORACLE_BUDGET = 10**7
DEFAULT_EQUIVALENCE_BUDGET = 10**6


@dataclass(frozen=True)
class OracleResult:
    opt_value: Fraction | None
    argmin: tuple | None
    nodes_enumerated: int

    @property
    def feasible(self) -> bool:
        return self.opt_value is not None


def row_table(sys) -> list[tuple[tuple, Fraction]]:
    """All rows of ``sys`` as ``(coefficients, rank)`` pairs."""
    n = sys.n
    return [(tuple(sys.a(key, e) for e in range(n)), sys.r(key)) for key in sys.rows()]


def box(rows, n: int) -> tuple:
    bound = [0] * n
    for coeffs, rank in rows:
        if rank <= 0:
            continue
        for e, a in enumerate(coeffs):
            if a > 0:
                bound[e] = max(bound[e], ceil_div(rank, a))
    return tuple(bound)


def _integral(rows):
    out = []
    seen = set()
    for coeffs, rank in rows:
        if rank <= 0:
            continue
        scale = lcm(rank.denominator, *(c.denominator for c in coeffs))
        key = (tuple(int(c * scale) for c in coeffs), int(rank * scale))
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def exact_opt(sys, budget: int = DEFAULT_ORACLE_BUDGET, rows=None) -> OracleResult:
    """Minimum-cost integer point of ``A x >= r`` by pruned enumeration.

    Variables are fixed in id order and values tried in increasing order,
    so the first optimum found is the lexicographically least one.
    ``budget`` caps the number of search nodes.  Infeasible systems return
    ``opt_value=None``.
    """
    n = sys.n
    rows = row_table(sys) if rows is None else rows
    ub = box(rows, n)
    irows = _integral(rows)
    cscale = lcm(*(c.denominator for c in sys.costs)) if n else 1
    costs = [int(c * cscale) for c in sys.costs]

    for coeffs, rank in irows:
        if sum(a * u for a, u in zip(coeffs, ub)) < rank:
            return OracleResult(None, None, 0)

    # rows touching each variable, and the best each row can still get from later variables
    touching = [[i for i, (coeffs, _) in enumerate(irows) if coeffs[k]] for k in range(n)]
    suffix = []
    # cheapest cost per unit of coverage a row can still buy from variables k..n-1,
    # kept as an integer pair (cost, coefficient)
    unit_price = []
    for coeffs, _ in irows:
        tail = [0] * (n + 1)
        price = [None] * (n + 1)
        for k in range(n - 1, -1, -1):
            tail[k] = tail[k + 1] + coeffs[k] * ub[k]
            here = (costs[k], coeffs[k]) if coeffs[k] else None
            nxt = price[k + 1]
            if here is None or (nxt is not None and nxt[0] * here[1] <= here[0] * nxt[1]):
                here = nxt
            price[k] = here
        suffix.append(tail)
        unit_price.append(price)
    need = [rank for _, rank in irows]
    current = [0] * len(irows)
    x = [0] * n
    best_cost = None
    best_x = None
    nodes = 0
    m = len(irows)

    def hopeless(k, slack):
        """Some row alone needs at least ``slack`` more cost from variables ``k..``."""
        for i in range(m):
            gap = need[i] - current[i]
            if gap > 0:
                price = unit_price[i][k]
                if price is not None and gap * price[0] >= slack * price[1]:
                    return True
        return False

    def search(k, cost):
        nonlocal best_cost, best_x, nodes
        if k == n:
            if best_cost is None or cost < best_cost:
                best_cost, best_x = cost, tuple(x)
            return
        rows_k = touching[k]
        ck = costs[k]
        for v in range(ub[k] + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"oracle search exceeded {budget} nodes")
            total = cost + ck * v
            if best_cost is not None and total >= best_cost:
                break
            ok = True
            for i in rows_k:
                if current[i] + irows[i][0][k] * v + suffix[i][k + 1] < need[i]:
                    ok = False
                    break
            if not ok:
                continue
            for i in rows_k:
                current[i] += irows[i][0][k] * v
            x[k] = v
            if best_cost is None or not hopeless(k + 1, best_cost - total):
                search(k + 1, total)
            for i in rows_k:
                current[i] -= irows[i][0][k] * v
        x[k] = 0

    search(0, 0)
    if best_x is None:
        return OracleResult(None, None, nodes)
    return OracleResult(Fraction(best_cost, cscale), best_x, nodes)


def _feasible_mask(irows, points):
    """Boolean mask of the points (one per array row) satisfying every row."""
    ok = np.ones(len(points), dtype=bool)
    for coeffs, rank in irows:
        ok &= points @ np.array(coeffs, dtype=points.dtype) >= rank
    return ok


def _grid(ub, start, stop, dtype):
    """Points ``start..stop-1`` of the box in lexicographic order."""
    idx = np.arange(start, stop, dtype=np.int64)
    cols = []
    for u in reversed(ub):
        cols.append(idx % (u + 1))
        idx //= u + 1
    return np.stack(cols[::-1], axis=1).astype(dtype) if cols else np.zeros((stop - start, 0), dtype=dtype)


def _dtype(ub, irows):
    big = max((abs(a) for coeffs, _ in irows for a in coeffs), default=0)
    top = max(ub, default=0)
    return np.int64 if big * top * max(len(ub), 1) < 2**62 else object


def truncation_equivalence(sys, tr, budget: int = DEFAULT_EQUIVALENCE_BUDGET, chunk: int = 1 << 16):
    """Compare the integer points of ``sys`` and ``tr`` inside a common box.

    The box is the larger of the two soundness boxes.  Returns
    ``(True, None)`` when feasibility agrees everywhere, else ``(False, x)``
    with the lexicographically first disagreeing point.
    """
    n = sys.n
    raw_rows = row_table(sys)
    tr_rows = row_table(tr)
    ub = tuple(max(p, q) for p, q in zip(box(raw_rows, n), box(tr_rows, n)))
    points = 1
    for u in ub:
        points *= u + 1
    if points > budget:
        raise BudgetExceeded(f"equivalence box has {points} points, budget is {budget}")
    raw_i, tr_i = _integral(raw_rows), _integral(tr_rows)
    dtype = _dtype(ub, raw_i + tr_i)
    for start in range(0, points, chunk):
        block = _grid(ub, start, min(points, start + chunk), dtype)
        differ = _feasible_mask(raw_i, block) != _feasible_mask(tr_i, block)
        if differ.any():
            first = int(np.argmax(differ))
            return False, tuple(int(v) for v in block[first])
    return True, None


def approximation_ratio(run, opt: OracleResult) -> Fraction:
    """``primal_cost / OPT``, asserting weak duality ``dual_value <= OPT``.

    Returns 1 when both cost and OPT are zero.
    """
    if not opt.feasible:
        raise ValueError("oracle reports an infeasible instance")
    if run.dual_value > opt.opt_value:
        raise AssertionError(f"weak duality fails: dual {run.dual_value} > OPT {opt.opt_value}")
    if opt.opt_value == 0:
        if run.primal_cost == 0:
            return Fraction(1)
        raise ZeroDivisionError("OPT is 0 but the greedy cost is positive")
    return Fraction(run.primal_cost) / opt.opt_value


def is_feasible(sys, x) -> bool:
    """Full row scan of ``sys`` (any system exposing ``rows``)."""
    return all(sum((sys.a(key, e) * x[e] for e in range(sys.n) if x[e]), Fraction(0)) >= sys.r(key) for key in sys.rows())
