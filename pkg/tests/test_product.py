from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_fixture
from greedycover import generators as gen
from greedycover.apps import ContraPolymatroidInstance, build_intersection
from greedycover.formats import load_instance
from greedycover.lattice import as_explicit
from greedycover.product import (
    ProductSystem,
    TupleIndex,
    check_product_feasibility,
    cleanup_phase,
    find_witness,
    lex_leq,
    lex_max_tuples,
    product_certificate,
    revised_solve,
    witness_cover_diagnostics,
)
from greedycover.solver import solve
from greedycover.system import validate_greedy_properties
from instances import PLAIN_FAMILIES, plain_system, product_doc

F = frozenset
Q = Fraction


def kgap(k):
    return load_instance(gen.kgap(k)).system


def star(n=4):
    return load_instance(gen.starcleanup(n)).system


def test_single_member_family_has_one_maximal_tuple():
    ps = ProductSystem.from_system(load_fixture("polymatroid-sq").system)
    top = ps.lattice.top()
    tuples, rstar = lex_max_tuples(ps.truncate(), top)
    assert tuples == (TupleIndex(0, top),)
    assert rstar == 4


def test_kgap_exposes_the_whole_set():
    ps = kgap(3)
    top = ps.lattice.top()
    tuples, rstar = lex_max_tuples(ps.truncate(), top)
    assert tuples == (TupleIndex(0, top),)
    assert rstar == 1


def test_equal_rank_members_are_raised_together():
    inst = ContraPolymatroidInstance.cardinality([0, 1, 3])
    ps = build_intersection([inst, inst])
    top = ps.lattice.top()
    tuples, _ = lex_max_tuples(ps.truncate(), top)
    assert tuples == (TupleIndex(0, top), TupleIndex(1, top))
    run = revised_solve(ps)
    assert run.families[0] == tuples


def test_lex_order_prefers_lattice_then_rank():
    ps = kgap(2)
    top = ps.lattice.top()
    assert lex_leq(ps, TupleIndex(1, F({1})), TupleIndex(1, top))
    assert lex_leq(ps, TupleIndex(1, top), TupleIndex(0, top))
    assert not lex_leq(ps, TupleIndex(0, top), TupleIndex(1, top))


def test_star_cleanup():
    ps = star(4)
    before = revised_solve(ps, cleanup=False)
    assert before.x == (1, 1, 1, 1) and before.primal_cost == 10
    after = revised_solve(ps)
    assert after.x_before_cleanup == (1, 1, 1, 1)
    assert after.x == (0, 0, 0, 1) and after.primal_cost == 4


def test_kgap_three():
    ps = kgap(3)
    run = revised_solve(ps)
    top = ps.lattice.top()
    assert run.y == {TupleIndex(0, top): 1}
    assert run.x == (1, 1, 1)
    assert (run.primal_cost, run.dual_value) == (3, 1)


def test_reduction_to_plain_solver():
    sys = load_fixture("polymatroid-sq").system
    plain = solve(sys)
    prod = revised_solve(ProductSystem.from_system(sys), cleanup=False)
    assert prod.x == plain.x
    assert prod.chain == plain.chain
    assert {t.s: v for t, v in prod.y.items()} == plain.y
    # cleanup has nothing to remove on this chain
    assert revised_solve(ProductSystem.from_system(sys)).x == plain.x


def test_cleanup_of_zero_vector():
    ps = star(3)
    assert cleanup_phase(ps.truncate(), (0, 0, 0), [0, 1, 2]) == (0, 0, 0)


def test_star_witness_is_the_single_edge_cut():
    ps = star(4)
    run = revised_solve(ps)
    t = find_witness(ps.truncate(), run.x, 3)
    assert ps.ufamily[t.u] == F({3})
    assert find_witness(ps.truncate(), run.x, 0) is None


@pytest.mark.parametrize("k", [2, 3, 4])
def test_kgap_witnesses_are_singletons(k):
    ps = kgap(k)
    run = revised_solve(ps)
    for i in range(k):
        t = find_witness(ps.truncate(), run.x, i)
        assert ps.ufamily[t.u] == F({i})


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_kgap_cover_ratio(k):
    ps = kgap(k)
    run = revised_solve(ps)
    report = witness_cover_diagnostics(ps, run)
    first = report.iterations[0]
    assert len(first.raised) == 1 and len(first.cover) == k
    assert report.k_observed == k
    assert report.binary and report.holds


def test_plain_polymatroid_cover_is_trivial():
    ps = ProductSystem.from_system(load_fixture("polymatroid-sq").system)
    run = revised_solve(ps)
    report = witness_cover_diagnostics(ps, run)
    assert report.k_observed == 1
    for it in report.iterations:
        if it.raise_value > 0:
            assert it.cover == it.raised


def test_flow_cover_line_fixture():
    loaded = load_fixture("flowcover-line")
    run = revised_solve(loaded.system)
    report = witness_cover_diagnostics(loaded.system, run)
    assert report.k_observed <= 2
    assert all(ok for _, ok in report.iteration_checks())


def test_product_certificate_identity():
    ps = star(4)
    run = revised_solve(ps)
    cert = product_certificate(ps, run)
    assert run.primal_cost <= cert.rho * run.dual_value
    assert cert.guarantee is not None


product_cases = st.tuples(
    st.sampled_from(["flowcover", "flowcover2", "multicut", "precknap"]),
    st.integers(2, 5),
    st.integers(0, 10**6),
)


@settings(max_examples=50, deadline=None)
@given(product_cases)
def test_product_runs(case):
    ps = load_instance(product_doc(*case)).system
    tr = ps.truncate()
    run = revised_solve(ps)
    assert check_product_feasibility(ps, run.x)[0]
    assert check_product_feasibility(tr, run.x)[0]
    assert all(a <= b for a, b in zip(run.x, run.x_before_cleanup))
    # every positive entry is pinned by some row after cleanup
    for e, v in enumerate(run.x):
        if v > 0:
            assert find_witness(tr, run.x, e) is not None
            lower = list(run.x)
            lower[e] -= 1
            assert not check_product_feasibility(tr, lower)[0]
    report = witness_cover_diagnostics(ps, run)
    assert report.covered
    assert all(ok for _, ok in report.iteration_checks())
    assert report.holds


@settings(max_examples=30, deadline=None)
@given(product_cases)
def test_chain_projects_to_lattice_chain(case):
    ps = load_instance(product_doc(*case)).system
    run = revised_solve(ps)
    lat = ps.lattice
    rows = run.chain.rows
    assert all(lat.leq(b, a) and a != b for a, b in zip(rows, rows[1:]))
    assert all(t.s == rows[i] for i, fam in enumerate(run.families) for t in fam)
    assert all(len({ps.truncate().r(t) for t in fam}) == 1 for fam in run.families)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["multicut", "precknap"]), st.integers(2, 4), st.integers(0, 10**6))
def test_members_are_greedy_systems(family, size, seed):
    ps = load_instance(product_doc(family, size, seed)).system
    if ps.n > 6:
        return
    for u in range(len(ps.ufamily)):
        report = validate_greedy_properties(ps.subsystem(u))
        assert report.ok, report.violations[:1]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PLAIN_FAMILIES), st.integers(1, 4), st.integers(0, 10**6))
def test_reduction_identity(family, size, seed):
    sys = plain_system(family, size, seed)
    plain = solve(sys, certificate=False)
    prod = revised_solve(ProductSystem.from_system(sys), cleanup=False)
    assert prod.x == plain.x
    assert prod.chain == plain.chain
    assert {t.s: v for t, v in prod.y.items()} == plain.y
    assert prod.dual_value == plain.dual_value
    cleaned = revised_solve(ProductSystem.from_system(sys))
    assert all(a <= b for a, b in zip(cleaned.x, plain.x))
