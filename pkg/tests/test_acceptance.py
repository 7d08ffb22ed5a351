"""Acceptance criteria 1-9.

Each test records one PASS/FAIL line (printed live and repeated in the
pytest terminal summary) before asserting, so a failing criterion still
reports its numbers.  Run standalone with ``python3 tests/test_acceptance.py``.
"""

import time
from fractions import Fraction

import pytest

from acceptance_log import record
from conftest import FIXTURES, load_fixture
from greedycover import generators as gen
from greedycover.apps import width
from greedycover.errors import BudgetExceeded
from greedycover.formats import load_instance, read_instance
from greedycover.oracle import approximation_ratio, exact_opt, is_feasible, truncation_equivalence
from greedycover.product import (
    ProductSystem,
    check_product_feasibility,
    revised_solve,
    witness_cover_diagnostics,
)
from greedycover.solver import check_feasibility, solve
from greedycover.system import GreedySystem, compute_b_flag, compute_delta, rank_is_nonnegative, validate_greedy_properties
from instances import plain_doc, product_doc

F = frozenset
Q = Fraction


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def verdict(number, failures, detail, clock, limit=None):
    ok = not failures and (limit is None or clock.seconds < limit)
    if failures:
        detail = f"{detail}; first failure: {failures[0]}"
    if limit is not None:
        detail = f"{detail}; limit {limit}s"
    record(number, ok, detail, clock.seconds)
    assert not failures, failures[:5]
    if limit is not None:
        assert clock.seconds < limit, f"took {clock.seconds:.1f}s, limit {limit}s"


# shared corpora -------------------------------------------------------------

KNAPSACK_VARIANTS = ("knapsack", "knapsack-multi", "knapsack-marginal")


def feasibility_suite():
    """1,000 seeded (kind, label, doc) triples, 200 per family."""
    out = []
    for i in range(200):
        out.append(("plain", f"polymatroid n={1 + i % 6} seed={i}", plain_doc("polymatroid", 1 + i % 6, i)))
        variant = KNAPSACK_VARIANTS[i % 3]
        out.append(("plain", f"{variant} n={1 + i % 6} seed={i}", plain_doc(variant, 1 + i % 6, i)))
        out.append(("plain", f"subsetcover |G|={1 + i % 6} seed={i}", plain_doc("subsetcover", 1 + i % 6, i)))
        if i % 4 == 3:
            edges = 3 + i % 3
            out.append(("product", f"flowcover2 edges={edges} seed={i}", product_doc("flowcover2", edges, i)))
        else:
            out.append(("product", f"flowcover edges={1 + i % 5} seed={i}", product_doc("flowcover", 1 + i % 5, i)))
        out.append(("product", f"multicut edges={1 + i % 6} seed={i}", product_doc("multicut", 1 + i % 6, i)))
    return out


def explicit_fixture_systems():
    out = []
    for path in sorted(FIXTURES.glob("*.json")):
        loaded = read_instance(path)
        if isinstance(loaded.system, GreedySystem):
            out.append((path.stem, loaded.system))
    return out


# criterion 1 ----------------------------------------------------------------


def test_criterion_1_counterexample_regression():
    failures = []
    with Clock() as clock:
        p2 = load_instance(gen.p2_counterexample()).system
        run = solve(p2, certificate=False)
        if run.x != (5, 1):
            failures.append(f"P2 x={run.x}")
        if check_feasibility(p2, run.x) != (False, p2.lattice.top()):
            failures.append(f"P2 violated row {check_feasibility(p2, run.x)[1]}")
        p4 = load_instance(gen.p4_counterexample()).system
        run = solve(p4, certificate=False)
        if run.x != (1, 2):
            failures.append(f"P4 x={run.x}")
        if check_feasibility(p4, run.x) != (False, F({0})):
            failures.append(f"P4 violated row {check_feasibility(p4, run.x)[1]}")
    verdict(1, failures, "P2 -> (5,1) fails at E; P4 -> (1,2) fails at {1}", clock, limit=1)


# criterion 2 ----------------------------------------------------------------


def test_criterion_2_feasibility_suite():
    failures = []
    with Clock() as clock:
        suite = feasibility_suite()
        for kind, label, doc in suite:
            system = load_instance(doc).system
            if kind == "plain":
                x = solve(system, certificate=False).x
                checks = (check_feasibility(system, x), check_feasibility(system.truncate(), x))
            else:
                x = revised_solve(system).x
                checks = (check_product_feasibility(system, x), check_product_feasibility(system.truncate(), x))
            for name, (ok, row) in zip(("P", "T"), checks):
                if not ok:
                    failures.append(f"{label}: infeasible in ({name}) at {row}")
    verdict(2, failures, f"{len(suite)} instances feasible in (P) and (T)", clock, limit=60)


# criterion 3 ----------------------------------------------------------------


def test_criterion_3_truncation_equivalence():
    failures, checked, outside = [], 0, 0
    with Clock() as clock:
        systems = [(label, load_instance(doc).system) for kind, label, doc in feasibility_suite() if kind == "plain"]
        systems += explicit_fixture_systems()
        for label, system in systems:
            try:
                ok, x = truncation_equivalence(system, system.truncate(), budget=10**6)
            except BudgetExceeded:
                outside += 1
                continue
            checked += 1
            if not ok:
                failures.append(f"{label}: point sets differ at {x}")
    verdict(3, failures, f"{checked} explicit systems compared, {outside} beyond the 10^6 box", clock)
    assert checked >= len(systems) // 2


# criterion 4 ----------------------------------------------------------------


def bound_corpus():
    out = []
    for i in range(60):
        for family in ("polymatroid", "knapsack", "subsetcover"):
            out.append((f"{family} n={1 + i % 6} seed={i}", load_instance(plain_doc(family, 1 + i % 6, i)).system))
        for family in ("knapsack-multi", "knapsack-marginal"):
            out.append((f"{family} n={1 + i % 4} seed={i}", load_instance(plain_doc(family, 1 + i % 4, i)).system))
    return out + explicit_fixture_systems()


def test_criterion_4_certificate_bounds():
    failures, validated = [], 0
    with Clock() as clock:
        for label, system in bound_corpus():
            try:
                if not validate_greedy_properties(system, budget=10**6).ok:
                    continue
            except BudgetExceeded:
                continue
            validated += 1
            tr = system.truncate()
            run = solve(system)
            cert = run.certificate
            bound = compute_b_flag(tr) * compute_delta(tr) + (0 if rank_is_nonnegative(tr) else 1)
            if run.primal_cost > cert.rho * run.dual_value:
                failures.append(f"{label}: cost {run.primal_cost} > rho {cert.rho} * dual {run.dual_value}")
            if cert.rho > bound:
                failures.append(f"{label}: rho {cert.rho} > {bound}")
            ratio = approximation_ratio(run, exact_opt(system))
            if ratio > bound:
                failures.append(f"{label}: ratio {ratio} > {bound}")
    verdict(4, failures, f"{validated} validated systems within b*delta+a", clock)
    assert validated >= 250


# criterion 5 ----------------------------------------------------------------


def intersection_doc(n, seed):
    first = gen.polymatroid_cardinality(n, seed)
    second = gen.polymatroid_cardinality(n, seed + 10**6)
    second["costs"] = first["costs"]
    return {"format": "intersection-v1", "polymatroids": [first, second]}


def family_ratio_cases():
    """(row, label, doc, bound) with the bound computed from the instance itself."""
    for i in range(200):
        yield "polymatroid", i, plain_doc("polymatroid", 1 + i % 6, i), 1
    for i in range(200):
        variant = KNAPSACK_VARIANTS[i % 3]
        n = 1 + i % (6 if variant == "knapsack" else 4)
        yield variant, i, plain_doc(variant, n, i), 2
    for i in range(100):
        doc = plain_doc("subsetcover", 1 + i % 6, i)
        yield "subsetcover", i, doc, max(len(s["members"]) for s in doc["sets"])
    for i in range(60):
        yield "intersection-2", i, intersection_doc(1 + i % 4, i), 2
    for i in range(100):
        yield "flowcover-1", i, product_doc("flowcover", 1 + i % 5, i), 4
    for i in range(40):
        yield "flowcover-2", i, product_doc("flowcover2", 3 + i % 3, i), 8
    for i in range(100):
        doc = product_doc("precknap", 1 + i % 6, i)
        yield "precknap", i, doc, width(len(doc["items"]), [tuple(a) for a in doc["arcs"]])
    for i in range(100):
        yield "multicut", i, product_doc("multicut", 1 + i % 6, i), 2


def test_criterion_5_family_ratios():
    failures, worst, counts = [], {}, {}
    with Clock() as clock:
        for row, seed, doc, bound in family_ratio_cases():
            loaded = load_instance(doc)
            system = loaded.system
            run = revised_solve(system) if loaded.is_product else solve(system)
            ratio = approximation_ratio(run, exact_opt(system))
            counts[row] = counts.get(row, 0) + 1
            worst[row] = max(worst.get(row, Q(0)), ratio)
            exact = row == "polymatroid"
            if (exact and ratio != 1) or ratio > bound:
                failures.append(f"{row} seed={seed}: ratio {ratio} vs bound {bound}")
    summary = ", ".join(f"{row} {counts[row]}x max {worst[row]}" for row in counts)
    verdict(5, failures, summary, clock, limit=300)


# criterion 6 ----------------------------------------------------------------


def test_criterion_6_tightness():
    failures = []
    with Clock() as clock:
        for n in (3, 4, 5):
            M = n - 1
            run = solve(load_instance(gen.baddual(M, n)).system)
            want = Q(n * (M + 1), M + n)
            if run.primal_cost / run.dual_value != want:
                failures.append(f"bad dual n={n}: {run.primal_cost / run.dual_value} != {want}")
        for k in range(2, 7):
            run = revised_solve(load_instance(gen.kgap(k)).system)
            if (run.dual_value, run.primal_cost) != (1, k):
                failures.append(f"k-gap k={k}: dual {run.dual_value}, cost {run.primal_cost}")
        for n in (4, 6, 8):
            system = load_instance(gen.lineargap(n)).system
            point = (Q(4, n - 1),) * n
            if not is_feasible(system.truncate(), point):
                failures.append(f"linear gap n={n}: 4/(n-1) point infeasible in (T)")
            opt = exact_opt(system).opt_value
            if opt < Q(n, 2):
                failures.append(f"linear gap n={n}: OPT {opt} < n/2")
        for D in (3, 10):
            system = load_instance(gen.knapsackgap(D)).system
            point = (Q(1, D), Q(1))
            cost = sum(c * v for c, v in zip(system.costs, point))
            if not is_feasible(system, point) or cost != 2:
                failures.append(f"knapsack gap D={D}: point feasible={is_feasible(system, point)} cost={cost}")
            opt = exact_opt(system).opt_value
            if opt != D:
                failures.append(f"knapsack gap D={D}: OPT {opt}")
    verdict(6, failures, "bad dual n=3..5, k-gap k=2..6, linear gap n=4,6,8, knapsack gap D=3,10", clock)


# criterion 7 ----------------------------------------------------------------


def test_criterion_7_cleanup_necessity():
    failures = []
    with Clock() as clock:
        ps = load_fixture("star-cleanup").system
        plain = revised_solve(ps, cleanup=False).primal_cost
        cleaned = revised_solve(ps).primal_cost
        opt = exact_opt(ps).opt_value
        if (plain, cleaned, opt) != (10, 4, 4):
            failures.append(f"costs {plain} / {cleaned}, OPT {opt}")
    verdict(7, failures, f"star n=4: {plain} without cleanup, {cleaned} with cleanup, OPT {opt}", clock)


# criterion 8 ----------------------------------------------------------------


def test_criterion_8_reduction_identity():
    failures = []
    families = ("polymatroid", *KNAPSACK_VARIANTS, "subsetcover")
    with Clock() as clock:
        for i in range(100):
            family = families[i % len(families)]
            system = load_instance(plain_doc(family, 1 + i % 5, 7000 + i)).system
            plain = solve(system, certificate=False)
            prod = revised_solve(ProductSystem.from_system(system), cleanup=False)
            got = (prod.x, prod.chain, {t.s: v for t, v in prod.y.items()}, prod.dual_value, prod.primal_cost)
            want = (plain.x, plain.chain, plain.y, plain.dual_value, plain.primal_cost)
            if got != want:
                failures.append(f"{family} seed={7000 + i}")
    verdict(8, failures, "100 single-member product runs identical to the plain solver", clock)


# criterion 9 ----------------------------------------------------------------


def test_criterion_9_witness_diagnostics():
    failures, runs, worst = [], 0, {}
    with Clock() as clock:
        cases = [("flowcover", name, load_fixture(name).system) for name in ("flowcover-line",)]
        cases += [("flowcover", f"seed={i}", load_instance(product_doc("flowcover", 1 + i % 5, i)).system) for i in range(60)]
        cases += [("multicut", name, load_fixture(name).system) for name in ("multicut-star",)]
        cases += [("multicut", f"seed={i}", load_instance(product_doc("multicut", 1 + i % 6, i)).system) for i in range(60)]
        cases += [("other", name, load_fixture(name).system) for name in ("flowcover-two-lines", "intersection-p2", "kgap-3", "precknap-diamond", "star-cleanup")]
        cases += [("other", f"precknap seed={i}", load_instance(product_doc("precknap", 1 + i % 5, i)).system) for i in range(30)]
        cases += [("other", f"flowcover2 seed={i}", load_instance(product_doc("flowcover2", 3 + i % 3, i)).system) for i in range(20)]
        for group, label, ps in cases:
            run = revised_solve(ps)
            report = witness_cover_diagnostics(ps, run)
            runs += 1
            if not report.covered:
                failures.append(f"{group} {label}: an iteration has no witness cover")
                continue
            ratios = [it.ratio for it in report.iterations if it.raise_value > 0]
            worst[group] = max([worst.get(group, Q(0)), *ratios])
            if group in ("flowcover", "multicut") and any(r > 2 for r in ratios):
                failures.append(f"{group} {label}: cover ratio {max(ratios)} > 2")
            if report.k_observed is not None:
                factor = report.k_observed if report.binary else report.k_observed * (report.delta_effective + 1)
                if run.primal_cost > factor * run.dual_value:
                    failures.append(f"{label}: cost {run.primal_cost} > {factor} * {run.dual_value}")
    detail = f"{runs} product runs; max cover ratio " + ", ".join(f"{g} {w}" for g, w in worst.items())
    verdict(9, failures, detail, clock)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
