"""Row-index lattices and their structural validators.

Lattice elements are represented by their supports: a ``frozenset`` of
element ids.  Distinct lattice elements always carry distinct supports, so
the support doubles as a hashable handle.

Three implementations share one interface:

* ``BooleanLattice``: all subsets of the ground set ordered by inclusion.
* ``IdealLattice``: down-closed sets of a precedence DAG.
* ``ExplicitLattice``: enumerated supports plus a covering relation.

Only ``top``, ``phi``, ``support`` and ``leq`` are needed by the solvers, so
the two implicit lattices are never materialized unless a validator asks
for it via ``as_explicit``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .errors import BudgetExceeded, LatticeError

Element = frozenset

DEFAULT_MODULAR_BUDGET = 2**16
DEFAULT_MATERIALIZE_LIMIT = 1 << 14


@dataclass(frozen=True)
class Violation:
    tag: str
    rows: tuple
    values: tuple = ()
    message: str = ""
    element: int | None = None

    def describe(self, names=None) -> str:
        def label(row):
            if isinstance(row, frozenset):
                return "{" + ",".join(names[i] if names else str(i) for i in sorted(row)) + "}"
            return str(row)

        text = self.tag
        if self.element is not None:
            text += f" at element {names[self.element] if names else self.element}"
        if self.rows:
            text += ", rows " + " ".join(label(r) for r in self.rows)
        if self.values:
            text += ", values (" + ", ".join(str(v) for v in self.values) + ")"
        if self.message:
            text += f": {self.message}"
        return text


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def tags(self) -> set:
        return {v.tag for v in self.violations}

    def first(self, tag: str | None = None) -> Violation | None:
        for v in self.violations:
            if tag is None or v.tag == tag:
                return v
        return None

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)


class Lattice:
    """Abstract row lattice over the ground set ``range(n)``."""

    n: int

    def top(self) -> Element:
        raise NotImplementedError

    def bottom(self) -> Element:
        raise NotImplementedError

    def join(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def meet(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def phi(self, S: Element, e: int) -> Element:
        raise NotImplementedError

    def leq(self, a: Element, b: Element) -> bool:
        raise NotImplementedError

    def contains(self, S: Element) -> bool:
        raise NotImplementedError

    def support(self, S: Element) -> frozenset:
        return S

    def size(self) -> int | None:
        """Number of elements if cheaply known, else ``None``."""
        return None

    def elements(self) -> Iterator[Element]:
        raise LatticeError(f"{type(self).__name__} cannot be enumerated")


class BooleanLattice(Lattice):
    """All subsets of ``range(n)``; join is union and meet intersection."""

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("ground set size must be non-negative")
        self.n = n
        self._top = frozenset(range(n))

    def top(self):
        return self._top

    def bottom(self):
        return frozenset()

    def join(self, a, b):
        return a | b

    def meet(self, a, b):
        return a & b

    def phi(self, S, e):
        return S - {e}

    def leq(self, a, b):
        return a <= b

    def contains(self, S):
        return S <= self._top

    def size(self):
        return 1 << self.n

    def elements(self):
        for mask in range(1 << self.n):
            yield frozenset(i for i in range(self.n) if mask >> i & 1)

    def __repr__(self):
        return f"BooleanLattice({self.n})"


class IdealLattice(Lattice):
    """Ideals (down-closed sets) of a precedence DAG on ``range(n)``.

    An arc ``(i, j)`` means ``i`` precedes ``j``: every ideal holding ``j``
    also holds ``i``.  Removing ``e`` from an ideal therefore also removes
    everything in it that sits above ``e``.
    """

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        self.n = n
        self.arcs = tuple((int(i), int(j)) for i, j in arcs)
        succ = [set() for _ in range(n)]
        for i, j in self.arcs:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise LatticeError(f"bad precedence arc {(i, j)}")
            succ[i].add(j)
        self._above = [self._reach(succ, v) for v in range(n)]
        for v in range(n):
            if v in self._above[v]:
                raise LatticeError("precedence relation has a cycle")
        self._below = [frozenset(u for u in range(n) if v in self._above[u]) for v in range(n)]
        self._top = frozenset(range(n))

    @staticmethod
    def _reach(succ, v):
        seen = set()
        stack = list(succ[v])
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(succ[u])
        return frozenset(seen)

    def above(self, e: int) -> frozenset:
        return self._above[e]

    def below(self, e: int) -> frozenset:
        return self._below[e]

    def top(self):
        return self._top

    def bottom(self):
        return frozenset()

    def join(self, a, b):
        return a | b

    def meet(self, a, b):
        return a & b

    def phi(self, S, e):
        if e not in S:
            return S
        return S - self._above[e] - {e}

    def leq(self, a, b):
        return a <= b

    def contains(self, S):
        return S <= self._top and all(self._below[v] <= S for v in S)

    def elements(self):
        order = self._linear_extension()
        found = []

        def extend(idx, current):
            if idx == len(order):
                found.append(frozenset(current))
                return
            v = order[idx]
            extend(idx + 1, current)
            if self._below[v] <= current:
                current.add(v)
                extend(idx + 1, current)
                current.remove(v)

        extend(0, set())
        yield from sorted(found, key=lambda s: (len(s), sorted(s)))

    def _linear_extension(self):
        return sorted(range(self.n), key=lambda v: (len(self._below[v]), v))

    def __repr__(self):
        return f"IdealLattice({self.n}, arcs={list(self.arcs)})"


class ExplicitLattice(Lattice):
    """An enumerated lattice given by supports and a covering relation.

    ``covers`` lists ``(lo, hi)`` index pairs into ``supports``; the order is
    their reflexive-transitive closure.  When ``covers`` is ``None`` the order
    is support inclusion.  Joins, meets and ``phi`` are found by search and
    memoized; a missing least upper bound (etc.) raises ``LatticeError``.
    """

    def __init__(self, supports: Iterable[Iterable[int]], covers=None, n: int | None = None):
        elems = [frozenset(int(v) for v in s) for s in supports]
        if not elems:
            raise LatticeError("an explicit lattice needs at least one element")
        index = {}
        for k, s in enumerate(elems):
            if s in index:
                raise LatticeError(f"duplicate support {sorted(s)}")
            index[s] = k
        self._elems = elems
        self._index = index
        ground = set().union(*elems)
        self.n = n if n is not None else (max(ground) + 1 if ground else 0)
        m = len(elems)
        if covers is None:
            up = [0] * m
            for i, a in enumerate(elems):
                for j, b in enumerate(elems):
                    if a <= b:
                        up[i] |= 1 << j
        else:
            succ = [[] for _ in range(m)]
            for lo, hi in covers:
                if not (0 <= lo < m and 0 <= hi < m):
                    raise LatticeError(f"cover {(lo, hi)} out of range")
                succ[lo].append(hi)
            up = []
            for i in range(m):
                mask = 1 << i
                stack = list(succ[i])
                while stack:
                    j = stack.pop()
                    if not mask >> j & 1:
                        mask |= 1 << j
                        stack.extend(succ[j])
                up.append(mask)
            for i in range(m):
                for j in range(m):
                    if i != j and up[i] >> j & 1 and up[j] >> i & 1:
                        raise LatticeError("covering relation has a cycle")
        down = [0] * m
        for i in range(m):
            for j in range(m):
                if up[i] >> j & 1:
                    down[j] |= 1 << i
        self._up = up
        self._down = down
        self._full = (1 << m) - 1
        self._lack = [0] * self.n
        for e in range(self.n):
            for k, s in enumerate(elems):
                if e not in s:
                    self._lack[e] |= 1 << k
        self._top_idx = self._extreme(up, "top")
        self._bottom_idx = self._extreme(down, "bottom")
        self._join = {}
        self._meet = {}
        self._phi = {}

    def _extreme(self, cone, what):
        hits = [i for i, mask in enumerate(cone) if mask == 1 << i]
        if len(hits) != 1:
            raise LatticeError(f"order has no unique {what}")
        return hits[0]

    def _bounds_min(self, mask, cone):
        # the unique element of ``mask`` whose cone contains all of ``mask``
        k = 0
        rest = mask
        while rest:
            if rest & 1 and mask & ~cone[k] == 0:
                return k
            rest >>= 1
            k += 1
        return None

    def index(self, S: Element) -> int:
        try:
            return self._index[S]
        except KeyError:
            raise LatticeError(f"{sorted(S)} is not an element of this lattice") from None

    def element(self, k: int) -> Element:
        return self._elems[k]

    def top(self):
        return self._elems[self._top_idx]

    def bottom(self):
        return self._elems[self._bottom_idx]

    def size(self):
        return len(self._elems)

    def elements(self):
        return iter(self._elems)

    def contains(self, S):
        return S in self._index

    def leq(self, a, b):
        return bool(self._up[self.index(a)] >> self.index(b) & 1)

    def up_mask(self, S) -> int:
        return self._up[self.index(S)]

    def down_mask(self, S) -> int:
        return self._down[self.index(S)]

    def join(self, a, b):
        i, j = self.index(a), self.index(b)
        key = (i, j) if i <= j else (j, i)
        if key not in self._join:
            ub = self._up[i] & self._up[j]
            k = self._bounds_min(ub, self._up)
            if k is None:
                raise LatticeError(f"no least upper bound for {sorted(a)} and {sorted(b)}")
            self._join[key] = k
        return self._elems[self._join[key]]

    def meet(self, a, b):
        i, j = self.index(a), self.index(b)
        key = (i, j) if i <= j else (j, i)
        if key not in self._meet:
            lb = self._down[i] & self._down[j]
            k = self._bounds_min(lb, self._down)
            if k is None:
                raise LatticeError(f"no greatest lower bound for {sorted(a)} and {sorted(b)}")
            self._meet[key] = k
        return self._elems[self._meet[key]]

    def phi(self, S, e):
        if e not in S:
            return S
        i = self.index(S)
        key = (i, e)
        if key not in self._phi:
            cand = self._down[i] & self._lack[e]
            k = self._bounds_min(cand, self._down) if cand else None
            if k is None:
                raise LatticeError(f"phi({sorted(S)}, {e}) has no unique maximum")
            self._phi[key] = k
        return self._elems[self._phi[key]]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram of the order as index pairs."""
        out = []
        m = len(self._elems)
        for i in range(m):
            strict = self._up[i] & ~(1 << i)
            for j in range(m):
                if strict >> j & 1:
                    between = strict & self._down[j] & ~(1 << j)
                    if not between:
                        out.append((i, j))
        return out

    def __repr__(self):
        return f"ExplicitLattice({len(self._elems)} elements over {self.n})"


def as_explicit(lat: Lattice, limit: int = DEFAULT_MATERIALIZE_LIMIT) -> ExplicitLattice:
    """Materialize ``lat``; guarded by ``limit`` elements."""
    if isinstance(lat, ExplicitLattice):
        return lat
    size = lat.size()
    if size is not None and size > limit:
        raise BudgetExceeded(f"lattice has {size} elements, limit is {limit}")
    elems = []
    for S in lat.elements():
        elems.append(S)
        if len(elems) > limit:
            raise BudgetExceeded(f"lattice has more than {limit} elements")
    return ExplicitLattice(elems, covers=None, n=lat.n)


def scan_order(lat: Lattice) -> list[Element]:
    """All elements, largest support first (so the top comes first)."""
    return sorted(lat.elements(), key=lambda s: (-len(s), sorted(s)))


def check_lattice(lat: ExplicitLattice) -> list[str]:
    """Problems preventing ``lat`` from being a lattice with a trivial row."""
    problems = []
    elems = list(lat.elements())
    for a, b in combinations(elems, 2):
        for op in (lat.join, lat.meet):
            try:
                op(a, b)
            except LatticeError as exc:
                problems.append(str(exc))
    if lat.bottom():
        problems.append("bottom element has non-empty support")
    if lat.top() != frozenset(range(lat.n)):
        problems.append("top element does not have full support")
    return problems


def verify_modular(lat: Lattice, budget: int = DEFAULT_MODULAR_BUDGET) -> ValidationReport:
    """Search for a pentagon sublattice.

    Uses the modular law: for ``a <= c`` the lattice is modular iff
    ``a v (b ^ c) == (a v b) ^ c``.  A failing triple yields the pentagon
    ``(b ^ c, a v (b ^ c), (a v b) ^ c, b, a v b)`` which is reported as the
    violation's rows in the order ``(bottom, low, high, side, top)``.
    """
    lat = as_explicit(lat)
    elems = list(lat.elements())
    pairs = [(a, c) for a in elems for c in elems if a != c and lat.leq(a, c)]
    work = len(pairs) * len(elems)
    if work > budget:
        raise BudgetExceeded(f"modularity scan needs {work} triples, budget is {budget}")
    report = ValidationReport()
    for a, c in pairs:
        for b in elems:
            low = lat.join(a, lat.meet(b, c))
            high = lat.meet(lat.join(a, b), c)
            if low != high:
                pent = (lat.meet(b, c), low, high, b, lat.join(a, b))
                report.violations.append(
                    Violation("P3", pent, message="pentagon sublattice: order is not modular")
                )
                return report
    return report


def verify_phi_order_preserving(lat: Lattice) -> ValidationReport:
    """Check ``S <= T  =>  phi(S,e) <= phi(T,e)`` for all pairs and elements.

    An undefined ``phi`` (no unique maximum below ``S`` avoiding ``e``) is
    reported as well.  Stops at the first problem.
    """
    lat = as_explicit(lat)
    elems = list(lat.elements())
    report = ValidationReport()
    for e in range(lat.n):
        values = {}
        for S in elems:
            try:
                values[S] = lat.phi(S, e)
            except LatticeError as exc:
                report.violations.append(Violation("phi", (S,), message=str(exc), element=e))
                return report
        for S in elems:
            for T in elems:
                if S != T and lat.leq(S, T) and not lat.leq(values[S], values[T]):
                    report.violations.append(
                        Violation("phi", (S, T), (values[S], values[T]), "phi is not order preserving", e)
                    )
                    return report
    return report
