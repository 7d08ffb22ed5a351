"""Covering systems ``A x >= r`` over a row lattice, their truncation and
the structural parameters that drive the approximation guarantees."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable

from .errors import BudgetExceeded, InstanceError, LatticeError
from .lattice import (
    ExplicitLattice,
    Lattice,
    ValidationReport,
    Violation,
    as_explicit,
    scan_order,
    verify_modular,
)
from .rational import positive_part, to_rational

DEFAULT_VALIDATION_BUDGET = 10**7

# marker returned by ``beta_gamma_bound`` when a zero rank gap meets a positive coefficient
UNBOUNDED = math.inf


class CoverSystem:
    """Shared read-only interface of raw and truncated systems.

    Subclasses provide ``a(S, e)``; ``r(S)`` and the bookkeeping below are
    common.  Coefficients outside ``support(S)`` are always zero.
    """

    lattice: Lattice
    costs: tuple
    names: tuple

    @property
    def n(self) -> int:
        return self.lattice.n

    def a(self, S, e) -> Fraction:
        raise NotImplementedError

    def r(self, S) -> Fraction:
        raise NotImplementedError

    def row(self, S) -> dict:
        """Non-zero coefficients of row ``S`` keyed by element id."""
        out = {}
        for e in sorted(S):
            v = self.a(S, e)
            if v:
                out[e] = v
        return out

    def lhs(self, S, x) -> Fraction:
        return sum((self.a(S, e) * x[e] for e in S if x[e]), Fraction(0))

    def rows(self):
        """Every lattice element, largest support first."""
        return scan_order(self.lattice)

    def element_label(self, S) -> str:
        return "{" + ",".join(self.names[e] for e in sorted(S)) + "}"


class GreedySystem(CoverSystem):
    """The pair ``(A, r)`` over a lattice with element costs.

    ``coeff(S, e)`` and ``rank(S)`` are callables evaluated lazily and
    memoized; ``coeff`` is only consulted for ``e`` in the support of ``S``.

    ``rank_nonnegative`` records an adapter's declaration that every row
    has rank >= 0 (``None`` means unknown).  ``declared`` holds any further
    adapter-certified parameters such as ``delta``, ``b``, ``beta`` or
    ``gamma``.  ``separation`` optionally maps a vector ``x`` to a violated
    row or ``None`` so feasibility checks can avoid enumerating the lattice.
    """

    def __init__(
        self,
        lattice: Lattice,
        coeff: Callable,
        rank: Callable,
        costs: Iterable,
        names: Iterable[str] | None = None,
        rank_nonnegative: bool | None = None,
        declared: dict | None = None,
        separation: Callable | None = None,
        strict_support: bool = True,
    ):
        self.lattice = lattice
        self._coeff = coeff
        self._rank = rank
        self.costs = tuple(to_rational(c) for c in costs)
        if len(self.costs) != lattice.n:
            raise InstanceError(f"expected {lattice.n} costs, got {len(self.costs)}")
        if any(c < 0 for c in self.costs):
            raise InstanceError("costs must be non-negative")
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(lattice.n))
        self.rank_nonnegative = rank_nonnegative
        self.declared = dict(declared or {})
        self.separation = separation
        self.strict_support = strict_support
        self._a_cache = {}
        self._r_cache = {}

    @classmethod
    def from_table(cls, lattice, coeffs: dict, ranks: dict, costs, **kw) -> "GreedySystem":
        """Build from explicit tables ``coeffs[S][e]`` and ``ranks[S]``."""
        coeffs = {frozenset(S): {int(e): to_rational(v) for e, v in row.items()} for S, row in coeffs.items()}
        ranks = {frozenset(S): to_rational(v) for S, v in ranks.items()}

        def coeff(S, e):
            return coeffs.get(S, {}).get(e, Fraction(0))

        def rank(S):
            try:
                return ranks[S]
            except KeyError:
                raise LatticeError(f"no rank for row {sorted(S)}") from None

        return cls(lattice, coeff, rank, costs, **kw)

    def a(self, S, e):
        if e not in S:
            return Fraction(0)
        key = (S, e)
        v = self._a_cache.get(key)
        if v is None:
            v = to_rational(self._coeff(S, e))
            if v < 0:
                raise InstanceError(f"negative coefficient at row {sorted(S)}, element {e}")
            self._a_cache[key] = v
        return v

    def r(self, S):
        v = self._r_cache.get(S)
        if v is None:
            v = to_rational(self._rank(S))
            self._r_cache[S] = v
        return v

    def truncate(self) -> "TruncatedSystem":
        return TruncatedSystem(self)


class TruncatedSystem(CoverSystem):
    """The truncation ``(A', r)`` of a system.

    ``a'(S,e) = min{a(S,e), r(S)^+ - r(phi_e(S))^+}`` for ``e`` in the support
    of ``S``.  Rows keep the supports of the original matrix even when a
    truncated coefficient drops to zero.
    """

    def __init__(self, base: GreedySystem):
        self.base = base
        self.lattice = base.lattice
        self.costs = base.costs
        self.names = base.names
        self.rank_nonnegative = base.rank_nonnegative
        self.declared = base.declared
        self.separation = None
        self._cache = {}

    def a(self, S, e):
        if e not in S:
            return Fraction(0)
        key = (S, e)
        v = self._cache.get(key)
        if v is None:
            raw = self.base.a(S, e)
            gap = positive_part(self.base.r(S)) - positive_part(self.base.r(self.lattice.phi(S, e)))
            v = min(raw, gap)
            if v < 0:
                v = Fraction(0)
            self._cache[key] = v
        return v

    def raw(self, S, e):
        return self.base.a(S, e)

    def r(self, S):
        return self.base.r(S)


def truncate(sys: GreedySystem) -> TruncatedSystem:
    return TruncatedSystem(sys)


def rank_plus(sys: CoverSystem, S) -> Fraction:
    return positive_part(sys.r(S))


def _explicit_rows(sys: CoverSystem, budget: int):
    lat = as_explicit(sys.lattice, limit=max(1, min(budget, 1 << 20)))
    return lat, list(lat.elements())


def validate_greedy_properties(sys: GreedySystem, budget: int = DEFAULT_VALIDATION_BUDGET) -> ValidationReport:
    """Exhaustively check P1-P4 on an enumerable lattice.

    P1: rank monotone along the order.  P2: every column monotone along the
    order.  P3: modular lattice, distinct supports, coefficients positive
    exactly on supports, and the support of a join inside the union of
    supports.  P4: weighted supermodularity
    ``(r(T) - r(S^T)) / a(T,e) <= (r(SvT) - r(S)) / a(SvT,e)`` for
    ``e`` in ``T`` minus ``S^T``.

    All violations are collected; ``budget`` bounds the number of
    ``(S, T, e)`` triples inspected.
    """
    lat, elems = _explicit_rows(sys, budget)
    m, n = len(elems), sys.n
    work = m * m * max(n, 1)
    if work > budget:
        raise BudgetExceeded(f"P4 scan needs {work} triples, budget is {budget}")
    report = ValidationReport()
    pairs = [(S, T) for S in elems for T in elems if S != T and lat.leq(S, T)]

    for S, T in pairs:
        if sys.r(S) > sys.r(T):
            report.violations.append(Violation("P1", (S, T), (sys.r(S), sys.r(T)), "rank decreases along the order"))

    for e in range(n):
        for S, T in pairs:
            if sys.a(S, e) > sys.a(T, e):
                report.violations.append(
                    Violation("P2", (S, T), (sys.a(S, e), sys.a(T, e)), "column decreases along the order", e)
                )

    # P3
    try:
        report.extend(verify_modular(lat, budget=budget))
    except LatticeError as exc:
        report.violations.append(Violation("P3", (), message=f"not a lattice: {exc}"))
        return report
    if getattr(sys, "strict_support", True):
        for S in elems:
            for e in sorted(S):
                if sys.a(S, e) == 0:
                    report.violations.append(Violation("P3", (S,), (0,), "zero coefficient on the support", e))
    for i, S in enumerate(elems):
        for T in elems[i + 1:]:
            J = lat.join(S, T)
            extra = J - (S | T)
            if extra:
                report.violations.append(
                    Violation("P3", (S, T, J), (), "join support leaves the union of supports", min(extra))
                )

    # P4
    for S in elems:
        for T in elems:
            M, J = lat.meet(S, T), lat.join(S, T)
            for e in sorted(T - M):
                aT, aJ = sys.a(T, e), sys.a(J, e)
                if aT == 0 or aJ == 0:
                    continue
                lhs = (sys.r(T) - sys.r(M)) / aT
                rhs = (sys.r(J) - sys.r(S)) / aJ
                if lhs > rhs:
                    report.violations.append(
                        Violation("P4", (S, T), (lhs, rhs), "weighted supermodularity fails", e)
                    )
    return report


def _delta_term(tr: TruncatedSystem, S, e, top):
    ap = tr.a(S, e)
    if ap > 0 and (tr.r(tr.lattice.phi(S, e)) >= 0 or ap == tr.raw(S, e)):
        return tr.a(top, e) / ap
    return Fraction(1)


def compute_delta(tr: TruncatedSystem, budget: int = DEFAULT_VALIDATION_BUDGET, naive: bool = False) -> Fraction:
    """Largest efficiency range ``a'(top,e) / a'(S,e)`` over all rows.

    With ``naive=False`` the ratio only counts where ``a'(S,e) > 0`` and either
    ``r(phi_e(S)) >= 0`` or the coefficient was not truncated; elsewhere the
    term is 1.  ``naive=True`` takes the plain maximum over positive
    truncated coefficients, for diagnostics.
    """
    _, elems = _explicit_rows(tr, budget)
    if len(elems) * max(tr.n, 1) > budget:
        raise BudgetExceeded("delta scan exceeds budget")
    top = tr.lattice.top()
    best = Fraction(1)
    for S in elems:
        for e in S:
            if naive:
                ap = tr.a(S, e)
                term = tr.a(top, e) / ap if ap > 0 else Fraction(1)
            else:
                term = _delta_term(tr, S, e, top)
            best = max(best, term)
    return best


def _b_ratio(tr: TruncatedSystem, S, e):
    ap = tr.a(S, e)
    if ap <= 0:
        return None
    return (positive_part(tr.r(S)) - positive_part(tr.r(tr.lattice.phi(S, e)))) / ap


def compute_b_flag(tr: TruncatedSystem, budget: int = DEFAULT_VALIDATION_BUDGET) -> int:
    """1 when every rounding step ``(r(S)^+ - r(phi_e S)^+) / a'(S,e)`` is integral, else 2."""
    _, elems = _explicit_rows(tr, budget)
    for S in elems:
        for e in S:
            q = _b_ratio(tr, S, e)
            if q is not None and (q.denominator != 1 or q < 0):
                return 2
    return 1


def b_flag_pretest(sys: GreedySystem, budget: int = DEFAULT_VALIDATION_BUDGET) -> bool:
    """Cheap sufficient condition for ``b = 1``.

    True when ``a(S,e) >= r(S) - r(phi_e(S))`` for every row and support
    element with ``r(phi_e(S)) >= 0``.
    """
    _, elems = _explicit_rows(sys, budget)
    for S in elems:
        for e in S:
            P = sys.lattice.phi(S, e)
            if sys.r(P) >= 0 and sys.a(S, e) < sys.r(S) - sys.r(P):
                return False
    return True


def beta_gamma(sys: GreedySystem, rows=None):
    """The pair ``(beta, gamma)`` over ``rows`` (default: every row).

    ``beta`` is the largest ``a(top,e) / a(S,e)``; ``gamma`` the largest
    ``a(S,e) / (r(S) - r(phi_e(S)))`` over pairs with ``r(phi_e(S)) >= 0``
    and a positive truncated coefficient.  A zero gap there makes
    ``gamma`` ``UNBOUNDED``.
    """
    if rows is None:
        rows = list(as_explicit(sys.lattice).elements())
    top = sys.lattice.top()
    tr = sys.truncate()
    beta = Fraction(0)
    gamma = Fraction(0)
    for S in rows:
        for e in S:
            a = sys.a(S, e)
            if a <= 0:
                continue
            beta = max(beta, sys.a(top, e) / a)
            P = sys.lattice.phi(S, e)
            if sys.r(P) < 0 or tr.a(S, e) <= 0:
                continue
            gap = sys.r(S) - sys.r(P)
            if gap <= 0:
                gamma = UNBOUNDED
            elif gamma is not UNBOUNDED:
                gamma = max(gamma, a / gap)
    return beta, gamma


def beta_gamma_bound(sys: GreedySystem, rows=None):
    """Upper bound ``beta * gamma`` on delta (``UNBOUNDED`` if gamma is)."""
    beta, gamma = beta_gamma(sys, rows)
    if gamma is UNBOUNDED:
        return UNBOUNDED
    return max(Fraction(1), beta * gamma)


def is_binary(sys: CoverSystem, rows=None) -> bool:
    rows = rows if rows is not None else sys.rows()
    return all(sys.a(S, e) in (0, 1) for S in rows for e in S)


def rank_is_nonnegative(sys: CoverSystem, budget: int = DEFAULT_VALIDATION_BUDGET) -> bool:
    """Declared value when present, otherwise an exhaustive scan."""
    declared = getattr(sys, "rank_nonnegative", None)
    if declared is not None:
        return declared
    _, elems = _explicit_rows(sys, budget)
    return all(sys.r(S) >= 0 for S in elems)
