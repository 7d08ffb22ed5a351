"""Greedy product systems and the revised primal-dual algorithm.

Rows are tuples ``(u, S)`` where ``u`` indexes a member ``U`` of the family
(duplicates allowed, so members are addressed by position) and ``S`` is a
lattice element.  The support of row ``(u, S)`` is ``U & S``.

The revised algorithm raises every lexicographically maximal row at once,
rounds each bottleneck against every member of the family, and finishes
with a cleanup pass that lowers bottleneck values in reverse order while
the solution stays feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

from .errors import DualUnbounded, InstanceError
from .lattice import Lattice, scan_order
from .rational import ceil_div, positive_part, to_rational
from .solver import DualChain, RunResult
from .system import GreedySystem


class TupleIndex(NamedTuple):
    u: int
    s: frozenset


def antichain_order(S, i, j) -> bool:
    """Members are pairwise incomparable."""
    return i == j


def order_by_key(key: Callable[[int], object]):
    """Total preorder: ``i <= j`` iff ``key(i) <= key(j)``; larger keys are raised first."""

    def leq(S, i, j):
        return key(i) <= key(j)

    return leq


def inclusion_order(ufamily):
    """``U_i <= U_j`` iff ``U_i`` is a subset of ``U_j`` (duplicates tie)."""

    def leq(S, i, j):
        return ufamily[i] <= ufamily[j]

    return leq


class ProductSystem:
    """The system ``A x >= r`` with rows indexed by ``family x lattice``.

    ``coeff(u, S, e)`` is consulted only for ``e`` in ``U_u & S``.
    ``order(S, i, j)`` decides ``U_i <=_S U_j``.  ``candidate_rows`` may
    restrict the rows scanned by cleanup and witness search; by default
    every tuple is used.
    """

    def __init__(
        self,
        lattice: Lattice,
        ufamily: Iterable[Iterable[int]],
        coeff: Callable,
        rank: Callable,
        costs: Iterable,
        order: Callable = antichain_order,
        names: Iterable[str] | None = None,
        declared: dict | None = None,
        rank_nonnegative: bool | None = None,
    ):
        self.lattice = lattice
        self.ufamily = tuple(frozenset(U) for U in ufamily)
        self._coeff = coeff
        self._rank = rank
        self.costs = tuple(to_rational(c) for c in costs)
        if len(self.costs) != lattice.n:
            raise InstanceError(f"expected {lattice.n} costs, got {len(self.costs)}")
        if any(c < 0 for c in self.costs):
            raise InstanceError("costs must be non-negative")
        self.order = order
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(lattice.n))
        self.declared = dict(declared or {})
        self.rank_nonnegative = rank_nonnegative
        self._a = {}
        self._r = {}

    @property
    def n(self):
        return self.lattice.n

    def support(self, t: TupleIndex) -> frozenset:
        return self.ufamily[t.u] & t.s

    def a(self, t: TupleIndex, e: int) -> Fraction:
        if e not in t.s or e not in self.ufamily[t.u]:
            return Fraction(0)
        key = (t, e)
        v = self._a.get(key)
        if v is None:
            v = to_rational(self._coeff(t.u, t.s, e))
            self._a[key] = v
        return v

    def r(self, t: TupleIndex) -> Fraction:
        v = self._r.get(t)
        if v is None:
            v = to_rational(self._rank(t.u, t.s))
            self._r[t] = v
        return v

    def lhs(self, t, x) -> Fraction:
        return sum((self.a(t, e) * x[e] for e in self.support(t) if x[e]), Fraction(0))

    def rows(self):
        """All tuples, lattice elements top first, members in index order."""
        return [TupleIndex(u, S) for S in scan_order(self.lattice) for u in range(len(self.ufamily))]

    def rows_with(self, e: int):
        return [t for t in self.rows() if e in self.support(t)]

    def truncate(self) -> "TruncatedProduct":
        return TruncatedProduct(self)

    def subsystem(self, u: int) -> GreedySystem:
        """The restriction to member ``u`` as a plain system over the same lattice."""
        return GreedySystem(
            self.lattice,
            lambda S, e: self.a(TupleIndex(u, S), e),
            lambda S: self.r(TupleIndex(u, S)),
            self.costs,
            names=self.names,
            strict_support=False,
        )

    @classmethod
    def from_system(cls, sys: GreedySystem) -> "ProductSystem":
        """Single-member family ``{E}``: the plain system in product form."""
        return cls(
            sys.lattice,
            [range(sys.n)],
            lambda u, S, e: sys.a(S, e),
            lambda u, S: sys.r(S),
            sys.costs,
            names=sys.names,
            rank_nonnegative=sys.rank_nonnegative,
        )


class TruncatedProduct(ProductSystem):
    """Member-wise truncation ``a'((u,S),e) = min{a, r(u,S)^+ - r(u,phi_e S)^+}``."""

    def __init__(self, base: ProductSystem):
        self.base = base
        self.lattice = base.lattice
        self.ufamily = base.ufamily
        self.costs = base.costs
        self.order = base.order
        self.names = base.names
        self.declared = base.declared
        self.rank_nonnegative = base.rank_nonnegative
        self._a = {}

    def a(self, t, e):
        if e not in t.s or e not in self.ufamily[t.u]:
            return Fraction(0)
        key = (t, e)
        v = self._a.get(key)
        if v is None:
            raw = self.base.a(t, e)
            nxt = TupleIndex(t.u, self.lattice.phi(t.s, e))
            gap = positive_part(self.base.r(t)) - positive_part(self.base.r(nxt))
            v = max(Fraction(0), min(raw, gap))
            self._a[key] = v
        return v

    def raw(self, t, e):
        return self.base.a(t, e)

    def r(self, t):
        return self.base.r(t)

    def truncate(self):
        return self


def lex_leq(ps: ProductSystem, t1: TupleIndex, t2: TupleIndex) -> bool:
    """``t1 <=_B t2``: lattice order first, then rank, then the member order at ``S``."""
    lat = ps.lattice
    if t1.s != t2.s:
        return lat.leq(t1.s, t2.s)
    r1, r2 = ps.r(t1), ps.r(t2)
    if r1 != r2:
        return r1 < r2
    return ps.order(t1.s, t1.u, t2.u)


def lex_max_tuples(ps: ProductSystem, S) -> tuple[tuple, Fraction | None]:
    """Maximal tuples among rows whose lattice part lies below ``S``.

    ``S`` is the top of the current sublattice, so every maximal tuple has
    lattice part ``S`` and the common maximum rank ``r*`` (returned too).
    """
    m = len(ps.ufamily)
    if m == 0:
        return (), None
    ranks = [ps.r(TupleIndex(u, S)) for u in range(m)]
    rstar = max(ranks)
    cand = [u for u in range(m) if ranks[u] == rstar]
    maximal = []
    for i in cand:
        dominated = any(j != i and ps.order(S, i, j) and not ps.order(S, j, i) for j in cand)
        if not dominated:
            maximal.append(TupleIndex(i, S))
    return tuple(maximal), rstar


@dataclass
class ProductRun(RunResult):
    families: tuple = ()
    rstars: tuple = ()
    x_before_cleanup: tuple = ()


def revised_solve(ps: ProductSystem, cleanup: bool = True, raw_matrix: bool = False) -> ProductRun:
    """Run the revised primal-dual algorithm.

    Each iteration raises all maximal tuples uniformly by
    ``eps = min_e slack(e) / sum_B a'(B, e)`` (smallest id on ties), sets
    ``x(e*) = max_W ceil((r(W,S)^+ - r(W,S')^+) / a'((W,S),e*))`` over members
    with a positive coefficient, and moves to ``S' = phi_{e*}(S)``.  It stops
    once the maximal rank is non-positive.
    """
    work = ps if raw_matrix else ps.truncate()
    lat = ps.lattice
    n = ps.n
    load = [Fraction(0)] * n
    x = [0] * n
    y = {}
    S = lat.top()
    rows, bottlenecks, raises, families, rstars = [S], [], [], [], []
    while True:
        fam, rstar = lex_max_tuples(work, S)
        if not fam or rstar <= 0:
            break
        sums = {}
        for t in fam:
            for e in work.support(t):
                coef = work.a(t, e)
                if coef > 0:
                    sums[e] = sums.get(e, Fraction(0)) + coef
        best, estar = None, None
        for e in sorted(sums):
            ratio = (ps.costs[e] - load[e]) / sums[e]
            if best is None or ratio < best:
                best, estar = ratio, e
        if estar is None:
            raise DualUnbounded(S, rstar)
        if best > 0:
            for t in fam:
                y[t] = y.get(t, Fraction(0)) + best
            for e, s in sums.items():
                load[e] += best * s
        nxt = lat.phi(S, estar)
        value = 0
        for u in range(len(ps.ufamily)):
            t = TupleIndex(u, S)
            coef = work.a(t, estar)
            if coef > 0:
                gap = positive_part(work.r(t)) - positive_part(work.r(TupleIndex(u, nxt)))
                value = max(value, ceil_div(gap, coef))
        x[estar] = value
        rows.append(nxt)
        bottlenecks.append(estar)
        raises.append(best)
        families.append(fam)
        rstars.append(rstar)
        S = nxt
    before = tuple(x)
    if cleanup:
        x = list(cleanup_phase(work, x, bottlenecks))
    dual_value = sum((v * ps.r(t) for t, v in y.items()), Fraction(0))
    cost = sum((c * v for c, v in zip(ps.costs, x)), Fraction(0))
    chain = DualChain(tuple(rows), tuple(bottlenecks), tuple(raises))
    return ProductRun(
        chain,
        tuple(x),
        y,
        dual_value,
        cost,
        names=ps.names,
        raw_matrix=raw_matrix,
        families=tuple(families),
        rstars=tuple(rstars),
        x_before_cleanup=before,
    )


def cleanup_phase(ps: ProductSystem, x, bottlenecks) -> tuple:
    """Lower bottleneck values in reverse order to the least feasible value.

    For element ``e`` the new value is the largest
    ``ceil((r - sum_{f != e} a'_f x_f) / a'_e)`` over rows containing ``e``,
    clamped to ``[0, x(e)]``.  Feasibility is monotone in ``x(e)`` so this
    equals decrementing one unit at a time.
    """
    x = list(x)
    done = set()
    rows = ps.rows()
    for e in reversed(bottlenecks):
        if e in done:
            continue
        done.add(e)
        if x[e] == 0:
            continue
        need = 0
        for t in rows:
            if e not in ps.support(t):
                continue
            coef = ps.a(t, e)
            if coef <= 0:
                continue
            others = ps.lhs(t, x) - coef * x[e]
            need = max(need, ceil_div(ps.r(t) - others, coef))
        x[e] = min(x[e], max(0, need))
    return tuple(x)


def check_product_feasibility(ps: ProductSystem, x) -> tuple[bool, TupleIndex | None]:
    for t in ps.rows():
        if ps.lhs(t, x) < ps.r(t):
            return False, t
    return True, None


def is_witness(ps: ProductSystem, x, t: TupleIndex, e: int) -> bool:
    """``a'_t x - a'_{t,e} < r(t) <= a'_t x`` with ``a'_{t,e} x_e > 0``."""
    coef = ps.a(t, e)
    if coef <= 0 or x[e] <= 0:
        return False
    total = ps.lhs(t, x)
    return total - coef < ps.r(t) <= total


def find_witness(ps: ProductSystem, x, e: int) -> TupleIndex | None:
    """First row (lattice element top first, then member index) witnessing ``e``.

    ``ps`` should be the truncated system.  Returns ``None`` when
    ``x(e) == 0`` or no witness exists.
    """
    if x[e] <= 0:
        return None
    for t in ps.rows():
        if is_witness(ps, x, t, e):
            return t
    return None


@dataclass
class IterationCover:
    index: int
    raised: tuple
    rstar: Fraction
    raise_value: Fraction
    cover: tuple | None
    lhs: Fraction = Fraction(0)

    @property
    def ratio(self) -> Fraction | None:
        if self.cover is None:
            return None
        return Fraction(len(self.cover), len(self.raised))


@dataclass
class WitnessReport:
    witnesses: dict
    iterations: list = field(default_factory=list)
    k_observed: Fraction | None = None
    delta_effective: Fraction = Fraction(1)
    binary: bool = False
    bound: Fraction | None = None
    holds: bool | None = None

    @property
    def covered(self) -> bool:
        return all(it.cover is not None for it in self.iterations if it.raise_value > 0)

    def iteration_checks(self) -> list[tuple[int, bool]]:
        """``sum_I a'x <= (delta + 1) |C| r*`` per covered iteration (``|C| r*`` if binary)."""
        factor = 1 if self.binary else self.delta_effective + 1
        return [
            (it.index, it.lhs <= factor * len(it.cover) * it.rstar)
            for it in self.iterations
            if it.raise_value > 0 and it.cover is not None
        ]


def _profile(ps, t, x):
    return frozenset(e for e in ps.support(t) if x[e] > 0 and ps.a(t, e) > 0)


def _min_multicover(need: dict, options: list, limit: int):
    """Fewest options (each usable once) so every ``e`` is hit ``need[e]`` times.

    ``options`` is a list of ``(profile, row)``.  Iterative deepening over
    distinct profiles; returns the chosen rows or ``None``.
    """
    groups = {}
    for prof, row in options:
        groups.setdefault(prof, []).append(row)
    profiles = sorted(groups, key=lambda p: (-len(p), sorted(p)))
    cap = max(need.values(), default=0)
    avail = [min(len(groups[p]), cap) for p in profiles]

    def search(idx, remaining, budget, picked):
        if all(v <= 0 for v in remaining.values()):
            return list(picked)
        if budget == 0 or idx == len(profiles):
            return None
        prof = profiles[idx]
        useful = any(remaining.get(e, 0) > 0 for e in prof)
        top = min(avail[idx], budget) if useful else 0
        for take in range(top, -1, -1):
            nxt = dict(remaining)
            for e in prof:
                if e in nxt:
                    nxt[e] -= take
            picked.extend([prof] * take)
            found = search(idx + 1, nxt, budget - take, picked)
            del picked[len(picked) - take:]
            if found is not None:
                return found
        return None

    need = {e: k for e, k in need.items() if k > 0}
    for size in range(0, limit + 1):
        found = search(0, dict(need), size, [])
        if found is not None:
            used = {}
            rows = []
            for prof in found:
                k = used.get(prof, 0)
                rows.append(groups[prof][k])
                used[prof] = k + 1
            return rows
    return None


def witness_cover_diagnostics(ps: ProductSystem, run: ProductRun, limit: int | None = None) -> WitnessReport:
    """Find small multiplicity witness-covers for each raised family.

    For every iteration with a positive raise, looks for the fewest rows
    ``C`` such that each row is a witness for some element, has rank at
    most ``r*``, and every element with ``a'x_e > 0`` is hit by ``C`` at
    least as often as by the raised family.  Reports ``k_observed`` as the
    largest ``|C| / |I|`` and checks
    ``cost <= k_observed * (delta + 1) * dual`` (``k_observed * dual`` for a
    binary truncation), where ``delta`` is the largest ratio of a raised
    row's coefficient to a cover row's coefficient on a shared element.
    Iterations where no cover exists are reported with ``cover=None``.
    """
    tr = ps.truncate()
    x = run.x
    rows = tr.rows()
    witnesses = {e: find_witness(tr, x, e) for e in range(ps.n) if x[e] > 0}
    witness_rows = []
    for t in rows:
        prof = _profile(tr, t, x)
        if any(is_witness(tr, x, t, e) for e in prof):
            witness_rows.append((t, prof))
    binary = all(tr.a(t, e) in (0, 1) for t in rows for e in tr.support(t))
    report = WitnessReport(witnesses, binary=binary)
    delta = Fraction(1)
    kmax = Fraction(0)
    for i, fam in enumerate(run.families):
        rstar = run.rstars[i]
        eps = run.chain.raises[i]
        need = {}
        for t in fam:
            for e in _profile(tr, t, x):
                need[e] = need.get(e, 0) + 1
        options = [(prof, t) for t, prof in witness_rows if tr.r(t) <= rstar and prof & need.keys()]
        cap = limit if limit is not None else sum(need.values())
        cover = _min_multicover(need, options, cap) if eps > 0 else None
        lhs = sum((tr.lhs(t, x) for t in fam), Fraction(0))
        it = IterationCover(i, fam, rstar, eps, tuple(cover) if cover is not None else None, lhs)
        report.iterations.append(it)
        if eps <= 0:
            continue
        if cover is None:
            kmax = None
            continue
        if kmax is not None:
            kmax = max(kmax, it.ratio)
        for t in fam:
            for w in cover:
                for e in _profile(tr, t, x) & _profile(tr, w, x):
                    delta = max(delta, tr.a(t, e) / tr.a(w, e))
    report.k_observed = kmax
    report.delta_effective = delta
    if kmax is not None:
        factor = kmax if binary else kmax * (delta + 1)
        report.bound = factor * run.dual_value
        report.holds = run.primal_cost <= report.bound
    return report


@dataclass(frozen=True)
class ProductCertificate:
    rho: Fraction
    delta_effective: Fraction
    k_observed: Fraction | None
    binary: bool
    guarantee: Fraction | None


def product_certificate(ps: ProductSystem, run: ProductRun, report: WitnessReport | None = None) -> ProductCertificate:
    """Slackness ratio of a product run plus the witness-cover bound.

    ``rho`` is the largest ``a'_t x / r(t)`` over raised rows; ``guarantee``
    is ``k_observed * (delta + 1)`` (or ``k_observed`` for binary
    truncations), ``None`` when some iteration has no cover.
    """
    tr = ps.truncate()
    report = report or witness_cover_diagnostics(ps, run)
    rho = Fraction(0)
    for t, val in run.y.items():
        if val > 0:
            rho = max(rho, tr.lhs(t, run.x) / tr.r(t))
    if run.primal_cost > rho * run.dual_value:
        raise AssertionError(f"slackness identity fails: {run.primal_cost} > {rho} * {run.dual_value}")
    k = report.k_observed
    if k is None:
        guarantee = None
    else:
        guarantee = k if report.binary else k * (report.delta_effective + 1)
    return ProductCertificate(rho, report.delta_effective, k, report.binary, guarantee)
