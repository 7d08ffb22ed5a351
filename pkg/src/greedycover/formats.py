"""JSON instance formats and result serialization.

Each instance document carries a ``"format"`` tag.  :func:`load_instance`
turns a document into a :class:`LoadedInstance` holding the built system;
numbers may be given as JSON numbers, decimal strings or ``"p/q"``
strings and are read exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import apps
from .errors import InstanceError, LatticeError
from .lattice import ExplicitLattice
from .product import ProductSystem, TupleIndex, antichain_order, inclusion_order, order_by_key
from .rational import format_rational, to_rational
from .system import GreedySystem


@dataclass
class LoadedInstance:
    format: str
    adapter: str
    system: object
    instance: object = None
    meta: dict = field(default_factory=dict)

    @property
    def is_product(self) -> bool:
        return isinstance(self.system, ProductSystem)

    @property
    def declared_bound(self) -> Fraction | None:
        b = self.system.declared.get("bound")
        return None if b is None else Fraction(b)


def _num(value, what: str) -> Fraction:
    try:
        return to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"bad number for {what}: {value!r}") from exc


def _require(doc: dict, key: str):
    if key not in doc:
        raise InstanceError(f"missing field {key!r}")
    return doc[key]


def _index(names) -> dict:
    names = list(names)
    if len(set(names)) != len(names):
        raise InstanceError("duplicate element names")
    return {str(x): i for i, x in enumerate(names)}


def _ids(index: dict, items, what: str) -> frozenset:
    try:
        return frozenset(index[str(x)] for x in items)
    except KeyError as exc:
        raise InstanceError(f"unknown element {exc.args[0]!r} in {what}") from None


def _costs(doc, names) -> list:
    costs = _require(doc, "costs")
    if isinstance(costs, list):
        if len(costs) != len(names):
            raise InstanceError("cost list length does not match the elements")
        return [_num(c, "cost") for c in costs]
    missing = [x for x in names if str(x) not in costs]
    if missing:
        raise InstanceError(f"no cost for {missing[0]!r}")
    return [_num(costs[str(x)], f"cost of {x}") for x in names]


def load_explicit(doc: dict) -> LoadedInstance:
    names = [str(x) for x in _require(doc, "elements")]
    index = _index(names)
    costs = _costs(doc, names)
    supports, coeffs, ranks = [], {}, {}
    for k, row in enumerate(_require(doc, "rows")):
        S = _ids(index, _require(row, "support"), f"row {k}")
        if S in ranks:
            raise InstanceError(f"two rows share the support {sorted(names[e] for e in S)}")
        given = row.get("coeffs", {})
        table = {}
        for name, v in given.items():
            e = index.get(str(name))
            if e is None:
                raise InstanceError(f"unknown element {name!r} in row {k}")
            if e not in S:
                raise InstanceError(f"row {k} has a coefficient outside its support")
            table[e] = _num(v, f"coefficient in row {k}")
        for e in S:
            if e not in table:
                raise InstanceError(f"row {k} lacks a coefficient for {names[e]!r}")
        supports.append(S)
        coeffs[S] = table
        ranks[S] = _num(_require(row, "rank"), f"rank of row {k}")
    added = False
    if frozenset() not in ranks:
        # the trivial row 0 >= 0 is implicit
        supports.append(frozenset())
        coeffs[frozenset()] = {}
        ranks[frozenset()] = Fraction(0)
        added = True
    covers = doc.get("lattice", {}).get("covers") if isinstance(doc.get("lattice"), dict) else None
    try:
        lat = ExplicitLattice(supports, covers=covers, n=len(names))
    except LatticeError as exc:
        raise InstanceError(f"rows do not form a lattice: {exc}") from None
    sys = GreedySystem.from_table(lat, coeffs, ranks, costs, names=names)
    return LoadedInstance("greedy-explicit-v1", "explicit", sys, meta={"added_trivial_row": added})


def _orders(order, fam):
    if order is None or order == "antichain":
        return antichain_order
    if order == "inclusion":
        return inclusion_order(fam)
    if isinstance(order, dict):
        kind = order.get("type")
        if kind == "exposed":
            top = int(_require(order, "member"))
            if not 0 <= top < len(fam):
                raise InstanceError("exposed member out of range")
            return lambda S, i, j: i == j or j == top
        if kind in ("key", "lca-depth"):
            keys = [_num(v, "order key") for v in _require(order, "keys")]
            if len(keys) != len(fam):
                raise InstanceError("one order key per family member is required")
            return order_by_key(keys.__getitem__)
    raise InstanceError(f"unknown order tag {order!r}")


def load_product(doc: dict) -> LoadedInstance:
    model = doc.get("model", "unit-cover")
    if model != "unit-cover":
        raise InstanceError(f"unknown product model {model!r}")
    names = [str(x) for x in _require(doc, "elements")]
    index = _index(names)
    costs = _costs(doc, names)
    fam = [_ids(index, U, "ufamily") for U in _require(doc, "ufamily")]
    order = _orders(doc.get("orders"), fam)
    ps = apps.unit_cover_system(len(names), fam, costs, order=order, names=names, declared=doc.get("declared"))
    return LoadedInstance("product-v1", "unit-cover", ps)


def _knapsack_instance(doc) -> "apps.KnapsackInstance":
    items = []
    for k, it in enumerate(_require(doc, "items")):
        u = _num(_require(it, "u"), f"weight of item {k}")
        c = _num(_require(it, "c"), f"cost of item {k}")
        d = int(it.get("d", 1))
        um = it.get("u_marginals")
        cm = it.get("c_marginals")
        items.append(
            apps.KnapsackItem(
                u,
                c,
                d,
                tuple(_num(v, "marginal weight") for v in um) if um is not None else None,
                tuple(_num(v, "marginal cost") for v in cm) if cm is not None else None,
            )
        )
    names = doc.get("names")
    return apps.KnapsackInstance(items, _num(_require(doc, "D"), "demand"), tuple(names) if names else None)


def load_knapsack(doc: dict) -> LoadedInstance:
    inst = _knapsack_instance(doc)
    return LoadedInstance("knapsack-v1", "knapsack", apps.build_knapsack_cover(inst), inst)


def load_subsetcover(doc: dict) -> LoadedInstance:
    ground = list(_require(doc, "ground"))
    sets = _require(doc, "sets")
    inst = apps.SubsetCoverInstance.build(
        ground,
        [frozenset(s["members"]) for s in sets],
        [_num(s.get("cost", 1), "set cost") for s in sets],
        tuple(s["name"] for s in sets) if all("name" in s for s in sets) else None,
    )
    return LoadedInstance("subsetcover-v1", "subsetcover", apps.build_subset_cover(inst), inst)


def load_flowcover(doc: dict) -> LoadedInstance:
    paths = [[str(f) for f in p] for p in _require(doc, "paths")]
    demands = {str(f): _num(d, f"demand of {f}") for f, d in _require(doc, "demands").items()}
    cands = []
    for k, c in enumerate(_require(doc, "candidates")):
        cands.append(
            apps.Candidate(
                int(_require(c, "path_idx")),
                int(_require(c, "from")),
                int(_require(c, "to")),
                _num(_require(c, "u"), f"weight of candidate {k}"),
                _num(_require(c, "c"), f"cost of candidate {k}"),
            )
        )
    inst = apps.FlowCoverInstance(paths, demands, cands)
    return LoadedInstance("flowcover-v1", "flowcover", apps.build_flow_cover_lines(inst), inst)


def load_multicut(doc: dict) -> LoadedInstance:
    edges = [(str(a), str(b), _num(c, "edge cost")) for a, b, c in _require(doc, "edges")]
    pairs = [(str(s), str(t)) for s, t in _require(doc, "pairs")]
    root = doc.get("root")
    inst = apps.MulticutInstance(edges, pairs, str(root) if root is not None else None)
    return LoadedInstance("multicut-v1", "multicut", apps.build_multicut_tree(inst), inst)


def load_precknap(doc: dict) -> LoadedInstance:
    items = _require(doc, "items")
    inst = apps.PrecedenceKnapsackInstance(
        tuple(_num(_require(it, "u"), "item weight") for it in items),
        tuple(_num(_require(it, "c"), "item cost") for it in items),
        [(int(i), int(j)) for i, j in doc.get("arcs", [])],
        _num(_require(doc, "D"), "demand"),
    )
    return LoadedInstance("precknap-v1", "precknap", apps.build_precedence_knapsack(inst), inst)


def _polymatroid_instance(doc) -> "apps.ContraPolymatroidInstance":
    names = [str(x) for x in _require(doc, "elements")]
    index = _index(names)
    costs = _costs(doc, names)
    if "cardinality" in doc:
        order = doc["cardinality"]
        values = _require(order, "values")
        if len(values) != len(names) + 1:
            raise InstanceError("cardinality values must cover sizes 0..n")
        return apps.ContraPolymatroidInstance.cardinality(values, order.get("offset", 0), costs, names)
    if "rank_table" in doc:
        table = {}
        for entry in doc["rank_table"]:
            table[_ids(index, _require(entry, "set"), "rank table")] = _num(_require(entry, "rank"), "rank")
        return apps.ContraPolymatroidInstance.from_table(table, costs, names)
    raise InstanceError("polymatroid needs 'cardinality' or 'rank_table'")


def load_polymatroid(doc: dict) -> LoadedInstance:
    inst = _polymatroid_instance(doc)
    return LoadedInstance("polymatroid-v1", "polymatroid", apps.build_contra_polymatroid(inst), inst)


def load_intersection(doc: dict) -> LoadedInstance:
    insts = [_polymatroid_instance(p) for p in _require(doc, "polymatroids")]
    return LoadedInstance("intersection-v1", "intersection", apps.build_intersection(insts), insts)


LOADERS = {
    "greedy-explicit-v1": load_explicit,
    "product-v1": load_product,
    "knapsack-v1": load_knapsack,
    "subsetcover-v1": load_subsetcover,
    "flowcover-v1": load_flowcover,
    "multicut-v1": load_multicut,
    "precknap-v1": load_precknap,
    "polymatroid-v1": load_polymatroid,
    "intersection-v1": load_intersection,
}


def load_instance(doc: dict) -> LoadedInstance:
    if not isinstance(doc, dict):
        raise InstanceError("instance must be a JSON object")
    fmt = doc.get("format")
    loader = LOADERS.get(fmt)
    if loader is None:
        raise InstanceError(f"unknown format {fmt!r}")
    try:
        return loader(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed {fmt} instance: {exc}") from exc


def read_instance(path) -> LoadedInstance:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from exc
    return load_instance(doc)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _row_json(names, key) -> dict:
    if isinstance(key, TupleIndex):
        return {"member": key.u, "row_support": [names[e] for e in sorted(key.s)]}
    return {"row_support": [names[e] for e in sorted(key)]}


def run_to_json(run, certificate=None, report=None) -> dict:
    """Serialize a run; ``certificate`` and ``report`` default to the run's own."""
    names = run.names or tuple(str(i) for i in range(len(run.x)))
    chain = []
    for j, row in enumerate(run.chain.rows):
        step = {"row_support": [names[e] for e in sorted(row)]}
        if j < len(run.chain.bottlenecks):
            step["bottleneck"] = names[run.chain.bottlenecks[j]]
            step["raise"] = format_rational(run.chain.raises[j])
        chain.append(step)
    out = {
        "x": {names[e]: int(v) for e, v in enumerate(run.x)},
        "y": [dict(_row_json(names, k), value=format_rational(v)) for k, v in run.y.items()],
        "chain": chain,
        "dual_value": format_rational(run.dual_value),
        "primal_cost": format_rational(run.primal_cost),
    }
    cert = certificate if certificate is not None else run.certificate
    if cert is not None:
        c = {"rho": format_rational(cert.rho), "delta_eff": format_rational(cert.delta_effective)}
        if hasattr(cert, "b"):
            c.update(b=cert.b, a=cert.a, guarantee=format_rational(cert.guarantee))
        else:
            c["k_observed"] = None if cert.k_observed is None else format_rational(cert.k_observed)
            c["binary"] = cert.binary
            c["guarantee"] = None if cert.guarantee is None else format_rational(cert.guarantee)
        out["certificate"] = c
    if hasattr(run, "x_before_cleanup"):
        out["x_before_cleanup"] = {names[e]: int(v) for e, v in enumerate(run.x_before_cleanup)}
    if report is not None:
        out["witnesses"] = {names[e]: (_row_json(names, t) if t is not None else None) for e, t in report.witnesses.items()}
        out["covers"] = [
            {
                "iteration": it.index,
                "raised": [_row_json(names, t) for t in it.raised],
                "cover": None if it.cover is None else [_row_json(names, t) for t in it.cover],
                "raise": format_rational(it.raise_value),
            }
            for it in report.iterations
        ]
    return out
