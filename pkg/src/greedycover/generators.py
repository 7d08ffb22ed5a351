"""Seeded instance generators and fixed worked instances.

Every generator returns a JSON-ready dict in one of the formats understood
by :mod:`greedycover.formats`.  Random families take ``(size, seed)`` and
are deterministic for a given pair.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .errors import InstanceError
from .rational import format_rational


def _q(v) -> str:
    return format_rational(Fraction(v))


def _names(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def explicit(names, costs, rows) -> dict:
    """``rows`` is a list of ``(support ids, {id: coeff}, rank)``."""
    return {
        "format": "greedy-explicit-v1",
        "elements": list(names),
        "costs": {names[i]: _q(c) for i, c in enumerate(costs)},
        "rows": [
            {
                "support": [names[e] for e in sorted(sup)],
                "coeffs": {names[e]: _q(coeffs[e]) for e in sorted(sup)},
                "rank": _q(rank),
            }
            for sup, coeffs, rank in rows
        ],
    }


# random families -----------------------------------------------------------


def polymatroid_cardinality(n: int, seed: int = 0) -> dict:
    """``r(S) = g(|S|) - t`` with ``g`` convex non-decreasing, ``g(0) = 0``."""
    rng = random.Random(seed)
    inc = rng.randint(0, 2)
    values = [0]
    for _ in range(n):
        values.append(values[-1] + inc)
        inc += rng.randint(0, 3)
    offset = rng.choice([0, 0, rng.randint(1, max(1, values[-1] // 2))])
    names = _names("e", n)
    return {
        "format": "polymatroid-v1",
        "elements": names,
        "costs": {x: _q(rng.randint(1, 9)) for x in names},
        "cardinality": {"values": [_q(v) for v in values], "offset": _q(offset)},
    }


def knapsack(n: int, seed: int = 0, variant: str = "plain") -> dict:
    """Variants: ``plain`` (single copies), ``multi`` (``d`` up to 3), ``marginal``
    (convex costs and concave weights over up to 3 copies)."""
    rng = random.Random(seed)
    items = []
    for _ in range(n):
        if variant == "plain":
            items.append({"u": _q(rng.randint(1, 10)), "c": _q(rng.randint(1, 10))})
        elif variant == "multi":
            items.append({"u": _q(rng.randint(1, 8)), "c": _q(rng.randint(1, 10)), "d": rng.randint(1, 3)})
        elif variant == "marginal":
            d = rng.randint(1, 3)
            w = sorted((rng.randint(1, 8) for _ in range(d)), reverse=True)
            c = sorted(rng.randint(1, 10) for _ in range(d))
            items.append({"u": _q(w[0]), "c": _q(c[0]), "d": d, "u_marginals": [_q(v) for v in w], "c_marginals": [_q(v) for v in c]})
        else:
            raise InstanceError(f"unknown knapsack variant {variant!r}")
    total = sum(sum(Fraction(v) for v in it.get("u_marginals", [it["u"]] * it.get("d", 1))) for it in items)
    D = rng.randint(1, max(1, int(total)))
    return {"format": "knapsack-v1", "items": items, "D": _q(D)}


def subsetcover(size: int, seed: int = 0) -> dict:
    rng = random.Random(seed)
    ground = list(range(1, size + 1))
    m = rng.randint(2, max(2, size))
    sets = [set(rng.sample(ground, rng.randint(1, min(3, size)))) for _ in range(m)]
    for g in ground:
        if not any(g in s for s in sets):
            rng.choice(sets).add(g)
    return {
        "format": "subsetcover-v1",
        "ground": ground,
        "sets": [{"members": sorted(s), "cost": _q(rng.randint(1, 9))} for s in sets],
    }


def _subpaths(rng, path_idx, length, count):
    out = []
    for _ in range(count):
        a = rng.randint(0, length - 1)
        b = rng.randint(a, min(length - 1, a + rng.randint(0, 2)))
        out.append((path_idx, a, b))
    return out


def flowcover(edges: int, seed: int = 0, lines: int = 1) -> dict:
    """One line of ``edges`` edges, or two lines sharing a single edge."""
    rng = random.Random(seed)
    if lines == 1:
        paths = [[f"f{i + 1}" for i in range(edges)]]
    elif lines == 2:
        if edges < 3:
            raise InstanceError("two lines need at least 3 edges")
        left = (edges - 1) // 2
        right = edges - 1 - left
        first = [f"a{i + 1}" for i in range(left)]
        second = [f"b{i + 1}" for i in range(right)]
        first.insert(rng.randint(0, left), "s")
        second.insert(rng.randint(0, right), "s")
        paths = [first, second]
    else:
        raise InstanceError("only one or two lines are generated")
    demands = {}
    for p in paths:
        for f in p:
            demands.setdefault(f, rng.randint(0, 6))
    raw = []
    for idx, p in enumerate(paths):
        raw.extend(_subpaths(rng, idx, len(p), rng.randint(1, len(p) + 1)))
    cands = [{"path_idx": i, "from": a, "to": b, "u": _q(rng.randint(1, 6)), "c": _q(rng.randint(1, 9))} for i, a, b in raw]
    for idx, p in enumerate(paths):
        for pos, f in enumerate(p):
            through = sum(Fraction(c["u"]) for c in cands if paths[c["path_idx"]][c["from"]:c["to"] + 1].count(f))
            if through < demands[f]:
                cands.append({"path_idx": idx, "from": pos, "to": pos, "u": _q(demands[f]), "c": _q(rng.randint(1, 9))})
    return {"format": "flowcover-v1", "paths": paths, "demands": demands, "candidates": cands}


def multicut(edges: int, seed: int = 0) -> dict:
    rng = random.Random(seed)
    verts = [f"v{i}" for i in range(edges + 1)]
    tree = [[verts[i], verts[rng.randrange(i)], rng.randint(1, 9)] for i in range(1, edges + 1)]
    pairs = []
    for _ in range(rng.randint(1, 3)):
        s, t = rng.sample(verts, 2)
        pairs.append([s, t])
    return {"format": "multicut-v1", "edges": tree, "pairs": pairs, "root": verts[0]}


def precknap(n: int, seed: int = 0) -> dict:
    rng = random.Random(seed)
    arcs = [[i, j] for i, j in combinations(range(n), 2) if rng.random() < 0.3]
    items = [{"u": _q(rng.randint(1, 6)), "c": _q(rng.randint(1, 9))} for _ in range(n)]
    total = sum(int(it["u"]) for it in items)
    return {"format": "precknap-v1", "items": items, "arcs": arcs, "D": _q(rng.randint(1, total))}


# worked instances ------------------------------------------------------------


def lineargap(n: int) -> dict:
    """Boolean lattice, ``a = 2^n`` and ``r(S) = 2^n (2^{-(n-|S|)} - 2^{-n/2})``."""
    if n <= 0 or n % 2:
        raise InstanceError("the rank is rational only for even n")
    big = 2**n
    names = _names("e", n)
    rows = []
    for k in range(n + 1):
        rank = big * (Fraction(1, 2 ** (n - k)) - Fraction(1, 2 ** (n // 2)))
        for combo in combinations(range(n), k):
            rows.append((combo, {e: big for e in combo}, rank))
    return explicit(names, [1] * n, rows)


def baddual(M: int, n: int) -> dict:
    """Sets ``{1..M, M+i}`` over ground ``{1..M+n}`` with cost ``M+1`` each."""
    ground = list(range(1, M + n + 1))
    sets = [{"members": list(range(1, M + 1)) + [M + i], "cost": _q(M + 1)} for i in range(1, n + 1)]
    return {"format": "subsetcover-v1", "ground": ground, "sets": sets}


def kgap(k: int) -> dict:
    """Family ``{E, {1}, .., {k}}`` with ``E`` above every other member."""
    names = _names("e", k)
    fam = [list(names)] + [[x] for x in names]
    return {
        "format": "product-v1",
        "model": "unit-cover",
        "elements": names,
        "costs": {x: "1" for x in names},
        "ufamily": fam,
        "orders": {"type": "exposed", "member": 0},
    }


def starcleanup(n: int) -> dict:
    """Star with edges ``s-v_i`` of cost ``i``; every s-t cut must be hit.

    The cuts are exactly the edge sets containing ``s-v_n``; they are
    ordered by inclusion.
    """
    names = [f"s-v{i}" for i in range(1, n + 1)]
    last = names[-1]
    fam = []
    for size in range(n):
        for combo in combinations(names[:-1], size):
            fam.append(list(combo) + [last])
    return {
        "format": "product-v1",
        "model": "unit-cover",
        "elements": names,
        "costs": {x: _q(i + 1) for i, x in enumerate(names)},
        "ufamily": fam,
        "orders": "inclusion",
    }


def p1_counterexample() -> dict:
    """Non-monotone rank: ``x1+x2 >= 2, x1 >= -2, x2 >= 1``, costs ``(2, 1)``."""
    rows = [((0, 1), {0: 1, 1: 1}, 2), ((0,), {0: 1}, -2), ((1,), {1: 1}, 1), ((), {}, 0)]
    return explicit(["x1", "x2"], [2, 1], rows)


def p2_counterexample() -> dict:
    """Columns grow downwards: ``x1+x2 >= 10, 5x1 >= 5, 5x2 >= 5``, costs ``(1, 6)``."""
    rows = [((0, 1), {0: 1, 1: 1}, 10), ((0,), {0: 5}, 5), ((1,), {1: 5}, 5), ((), {}, 0)]
    return explicit(["x1", "x2"], [1, 6], rows)


def p4_counterexample() -> dict:
    """Not supermodular: ``5x1+5x2 >= 10, 2.5x1 >= 5, 2.5x2 >= 5``, costs ``(5, 6)``."""
    half = Fraction(5, 2)
    rows = [((0, 1), {0: 5, 1: 5}, 10), ((0,), {0: half}, 5), ((1,), {1: half}, 5), ((), {}, 0)]
    return explicit(["x1", "x2"], [5, 6], rows)


def knapsackgap(D: int) -> dict:
    """``min D x1 + x2`` subject to ``D x1 + (D-1) x2 >= D`` over single copies."""
    return {"format": "knapsack-v1", "items": [{"u": _q(D), "c": _q(D)}, {"u": _q(D - 1), "c": "1"}], "D": _q(D)}


RANDOM_FAMILIES = {
    "polymatroid-cardinality": polymatroid_cardinality,
    "knapsack": knapsack,
    "subsetcover": subsetcover,
    "flowcover": flowcover,
    "multicut": multicut,
    "precknap": precknap,
}

FIXED_FAMILIES = {
    "lineargap": lineargap,
    "kgap": kgap,
    "starcleanup": starcleanup,
    "knapsackgap": knapsackgap,
}


def generate(family: str, size: int | None = None, seed: int = 0, **options) -> dict:
    """Dispatch by family name (as used by the command line)."""
    if family in RANDOM_FAMILIES:
        if size is None:
            raise InstanceError(f"family {family} needs a size")
        return RANDOM_FAMILIES[family](size, seed, **options)
    if family in FIXED_FAMILIES:
        if size is None:
            raise InstanceError(f"family {family} needs a size")
        return FIXED_FAMILIES[family](size)
    if family == "baddual":
        if size is None:
            raise InstanceError("baddual needs n")
        return baddual(options.get("m", size - 1), size)
    fixed = {"p1": p1_counterexample, "p2": p2_counterexample, "p4": p4_counterexample}
    if family in fixed:
        return fixed[family]()
    raise InstanceError(f"unknown family {family!r}")


FAMILIES = sorted([*RANDOM_FAMILIES, *FIXED_FAMILIES, "baddual", "p1", "p2", "p4"])
