"""Flow cover on one or more lines.

Candidates are subpaths of given paths in a graph; every graph edge has a
demand that the weights of chosen candidates through it must cover.  The
product family has one member per graph edge (the candidates through that
edge), which is enough to state the problem; larger edge sets are not used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InstanceError
from ..lattice import BooleanLattice
from ..product import ProductSystem, antichain_order
from ..rational import to_rational


@dataclass(frozen=True)
class Candidate:
    path: int
    start: int  # index of the first edge on the path
    end: int  # index of the last edge, inclusive
    u: Fraction
    c: Fraction


@dataclass
class FlowCoverInstance:
    paths: list  # each a list of edge names in order
    demands: dict  # edge name -> demand
    candidates: list

    def edges(self) -> list:
        seen = []
        for p in self.paths:
            for f in p:
                if f not in seen:
                    seen.append(f)
        return seen

    def covered_edges(self, cand: Candidate) -> list:
        return list(self.paths[cand.path][cand.start:cand.end + 1])

    @property
    def k(self) -> int:
        """Largest number of paths sharing an edge."""
        counts = {}
        for p in self.paths:
            for f in set(p):
                counts[f] = counts.get(f, 0) + 1
        return max(counts.values(), default=0)


def _check(inst: FlowCoverInstance):
    for idx, cand in enumerate(inst.candidates):
        if not 0 <= cand.path < len(inst.paths):
            raise InstanceError(f"candidate {idx} refers to a missing path")
        length = len(inst.paths[cand.path])
        if not 0 <= cand.start <= cand.end < length:
            raise InstanceError(f"candidate {idx} is not a subpath of its path")
        if cand.u <= 0 or cand.c < 0:
            raise InstanceError(f"candidate {idx} needs positive weight and non-negative cost")
    for f, d in inst.demands.items():
        if to_rational(d) < 0:
            raise InstanceError(f"negative demand on edge {f}")
    edges = inst.edges()
    for f in inst.demands:
        if f not in edges:
            raise InstanceError(f"demand on unknown edge {f}")
    for f in edges:
        through = sum((c.u for c in inst.candidates if f in inst.covered_edges(c)), Fraction(0))
        if through < to_rational(inst.demands.get(f, 0)):
            raise InstanceError(f"demand on edge {f} cannot be covered")


def build_flow_cover_lines(inst: FlowCoverInstance, validate: bool = True) -> ProductSystem:
    """Rows ``(f, S)`` read ``sum_{P in U_f & S} u_P x_P >= D(f) - sum_{P in U_f \\ S} u_P``.

    ``S`` is the set of untaken candidates and ``U_f`` the candidates through
    edge ``f``.  Members are incomparable.  Declares the witness-cover bound
    ``2k`` and the overall bound ``4k``, where ``k`` is the largest number of
    paths through one edge.
    """
    if validate:
        _check(inst)
    edges = inst.edges()
    demand = [to_rational(inst.demands.get(f, 0)) for f in edges]
    cands = inst.candidates
    weights = [c.u for c in cands]
    fam = []
    for f in edges:
        fam.append(frozenset(i for i, c in enumerate(cands) if f in inst.covered_edges(c)))
    k = inst.k

    def rank(u, S):
        return demand[u] - sum((weights[i] for i in fam[u] - S), Fraction(0))

    names = [f"p{c.path}[{c.start}:{c.end}]" for c in cands]
    ps = ProductSystem(
        BooleanLattice(len(cands)),
        fam,
        lambda u, S, e: weights[e],
        rank,
        [c.c for c in cands],
        order=antichain_order,
        names=names,
        declared={"k": k, "cover_bound": 2 * k, "delta": Fraction(1), "bound": Fraction(4 * k)},
        rank_nonnegative=False,
    )
    ps.edge_names = tuple(edges)
    return ps
