"""Primal-dual greedy algorithm for a single covering system.

The dual phase walks down the lattice from the top row, raising one dual
variable at a time until an element's dual constraint becomes tight and then
stepping to ``phi`` of that element.  The primal phase rounds the rank drop
along that chain into integer element multiplicities.  ``build_certificate``
turns a run into an exact slackness certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded, DualUnbounded, LatticeError
from .lattice import scan_order
from .rational import ceil_div, positive_part
from .system import CoverSystem, GreedySystem, TruncatedSystem, rank_is_nonnegative


@dataclass(frozen=True)
class DualChain:
    """Rows ``S_1 > ... > S_{l+1}``, bottlenecks ``e_1..e_l`` and raises ``eps_1..eps_l``."""

    rows: tuple
    bottlenecks: tuple
    raises: tuple

    def __len__(self):
        return len(self.bottlenecks)


@dataclass(frozen=True)
class Certificate:
    rho: Fraction
    delta_effective: Fraction
    b: int
    a: int
    guarantee: Fraction


@dataclass
class RunResult:
    chain: DualChain
    x: tuple
    y: dict
    dual_value: Fraction
    primal_cost: Fraction
    certificate: Certificate | None = None
    names: tuple = ()
    raw_matrix: bool = False
    extra: dict = field(default_factory=dict)

    def x_map(self) -> dict:
        return {e: v for e, v in enumerate(self.x)}


def dual_phase(sys: CoverSystem) -> tuple[DualChain, dict, list]:
    """Run the dual phase on ``sys`` (normally a truncation).

    Returns the chain, the dual solution ``y`` (rows with a positive value,
    in raise order) and the final dual load ``sum_S a(S,e) y(S)`` per element.

    Among elements of the current row with a positive coefficient the raise
    is ``min (c_e - load_e) / a(S,e)``; ties go to the smallest element id.
    Raises of zero are recorded in the chain but never enter ``y``.
    """
    lat = sys.lattice
    costs = sys.costs
    load = [Fraction(0)] * sys.n
    y = {}
    S = lat.top()
    rows, bottlenecks, raises = [S], [], []
    while sys.r(S) > 0:
        best, estar = None, None
        coefs = {}
        for e in sorted(S):
            coef = sys.a(S, e)
            if coef > 0:
                coefs[e] = coef
                ratio = (costs[e] - load[e]) / coef
                if best is None or ratio < best:
                    best, estar = ratio, e
        if estar is None:
            raise DualUnbounded(S, sys.r(S))
        if best > 0:
            y[S] = y.get(S, Fraction(0)) + best
            for e, coef in coefs.items():
                load[e] += best * coef
        S = lat.phi(S, estar)
        rows.append(S)
        bottlenecks.append(estar)
        raises.append(best)
    return DualChain(tuple(rows), tuple(bottlenecks), tuple(raises)), y, load


def primal_phase(sys: CoverSystem, chain: DualChain) -> tuple:
    """Integer rounding ``x(e_j) = ceil((r(S_j)^+ - r(S_{j+1})^+) / a(S_j, e_j))``."""
    x = [0] * sys.n
    for j, e in enumerate(chain.bottlenecks):
        S, nxt = chain.rows[j], chain.rows[j + 1]
        gap = positive_part(sys.r(S)) - positive_part(sys.r(nxt))
        x[e] = max(0, ceil_div(gap, sys.a(S, e)))
    return tuple(x)


def check_feasibility(sys: CoverSystem, x) -> tuple[bool, object]:
    """``(True, None)`` if ``a_S x >= r(S)`` for every row, else ``(False, S)``.

    A system-provided separation routine is used when available and ``x``
    is integral; otherwise every lattice row is scanned, top first.
    """
    sep = getattr(sys, "separation", None)
    if sep is not None and all(Fraction(v).denominator == 1 for v in x):
        row = sep(tuple(int(v) for v in x))
        return (row is None), row
    for S in scan_order(sys.lattice):
        if sys.lhs(S, x) < sys.r(S):
            return False, S
    return True, None


def _delta_pair(tr: CoverSystem, St, Sj, e) -> Fraction:
    ap = tr.a(Sj, e)
    raw = tr.raw(Sj, e) if hasattr(tr, "raw") else ap
    if ap > 0 and (tr.r(tr.lattice.phi(Sj, e)) >= 0 or ap == raw):
        return tr.a(St, e) / ap
    return Fraction(1)


def chain_delta(tr: CoverSystem, chain: DualChain) -> Fraction:
    """Largest ``a'(S_t, e_j) / a'(S_j, e_j)`` over chain pairs ``t <= j``, at least 1."""
    best = Fraction(1)
    for j, e in enumerate(chain.bottlenecks):
        Sj = chain.rows[j]
        for t in range(j + 1):
            best = max(best, _delta_pair(tr, chain.rows[t], Sj, e))
    return best


def chain_b_flag(tr: CoverSystem, chain: DualChain) -> int:
    """1 when no rounding step of this run needed a ceiling, else 2."""
    for j, e in enumerate(chain.bottlenecks):
        S, nxt = chain.rows[j], chain.rows[j + 1]
        gap = positive_part(tr.r(S)) - positive_part(tr.r(nxt))
        if (gap / tr.a(S, e)).denominator != 1:
            return 2
    return 1


def slackness_ratio(tr: CoverSystem, y: dict, x) -> Fraction:
    """``max over rows with y > 0 of a'_S x / r(S)`` (0 when y is empty)."""
    rho = Fraction(0)
    for S, val in y.items():
        if val > 0:
            rho = max(rho, tr.lhs(S, x) / tr.r(S))
    return rho


def build_certificate(run: RunResult, tr: CoverSystem) -> Certificate:
    """Exact slackness certificate of a run.

    ``b`` is the rounding flag restricted to the run's chain and ``a`` is 0
    exactly when the rank is known to be non-negative.  Asserts the identity
    ``primal_cost <= rho * dual_value``.
    """
    rho = slackness_ratio(tr, run.y, run.x)
    if run.primal_cost > rho * run.dual_value:
        raise AssertionError(f"slackness identity fails: {run.primal_cost} > {rho} * {run.dual_value}")
    delta = chain_delta(tr, run.chain)
    b = chain_b_flag(tr, run.chain)
    try:
        a = 0 if rank_is_nonnegative(tr) else 1
    except (BudgetExceeded, LatticeError):
        a = 1
    return Certificate(rho, delta, b, a, b * delta + a)


def solve(sys: GreedySystem, raw_matrix: bool = False, certificate: bool = True) -> RunResult:
    """Truncate, run the dual phase, round, and certify.

    ``raw_matrix=True`` skips the truncation (debugging aid: the integrality
    gap of the raw matrix can be arbitrarily large).
    """
    tr = sys.truncate()
    work = sys if raw_matrix else tr
    chain, y, _ = dual_phase(work)
    x = primal_phase(work, chain)
    dual_value = sum((val * sys.r(S) for S, val in y.items()), Fraction(0))
    cost = sum((c * v for c, v in zip(sys.costs, x)), Fraction(0))
    run = RunResult(chain, x, y, dual_value, cost, names=sys.names, raw_matrix=raw_matrix)
    if certificate:
        run.certificate = build_certificate(run, work)
    return run


def dual_load(sys: CoverSystem, y: dict) -> list:
    """``sum_S a(S,e) y(S)`` for each element."""
    load = [Fraction(0)] * sys.n
    for S, val in y.items():
        for e in S:
            load[e] += sys.a(S, e) * val
    return load


def check_chain(sys: CoverSystem, chain: DualChain) -> list[str]:
    """Problems with chain well-formedness (empty list when fine)."""
    problems = []
    lat = sys.lattice
    for j, e in enumerate(chain.bottlenecks):
        S = chain.rows[j]
        if e not in S:
            problems.append(f"bottleneck {e} not in row {sorted(S)}")
        if lat.phi(S, e) != chain.rows[j + 1]:
            problems.append(f"row {j + 1} is not phi of row {j}")
        if sys.r(S) <= 0:
            problems.append(f"raised row {sorted(S)} has non-positive rank")
        for later in chain.rows[j + 1:]:
            if sys.a(later, e) != 0:
                problems.append(f"bottleneck {e} reappears in a later row")
    if chain.rows and sys.r(chain.rows[-1]) > 0:
        problems.append("chain ends at a positive-rank row")
    ranks = [sys.r(S) for S in chain.rows[:-1]]
    if any(a < b for a, b in zip(ranks, ranks[1:])):
        problems.append("ranks along the chain are not non-increasing")
    return problems
