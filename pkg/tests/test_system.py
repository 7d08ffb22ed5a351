from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import reference as ref
from conftest import load_fixture
from greedycover import generators as gen
from greedycover.apps import SubsetCoverInstance, build_subset_cover
from greedycover.errors import BudgetExceeded, InstanceError
from greedycover.formats import load_instance
from greedycover.lattice import BooleanLattice, ExplicitLattice, as_explicit
from greedycover.system import (
    UNBOUNDED,
    GreedySystem,
    b_flag_pretest,
    beta_gamma,
    beta_gamma_bound,
    compute_b_flag,
    compute_delta,
    rank_is_nonnegative,
    rank_plus,
    validate_greedy_properties,
)
from instances import PLAIN_FAMILIES, plain_system

F = frozenset
Q = Fraction


def single_row(coef, rank):
    lat = ExplicitLattice([[], [0]], n=1)
    return GreedySystem.from_table(lat, {(0,): {0: coef}}, {(): 0, (0,): rank}, [1])


def test_rank_plus():
    assert rank_plus(single_row(1, -2), F({0})) == 0
    assert rank_plus(single_row(1, 10), F({0})) == 10
    assert rank_plus(single_row(1, 0), F({0})) == 0


def test_constructor_rejects_bad_costs():
    with pytest.raises(InstanceError):
        GreedySystem(BooleanLattice(2), lambda S, e: 1, len, [1])
    with pytest.raises(InstanceError):
        GreedySystem(BooleanLattice(1), lambda S, e: 1, len, [-1])


def test_negative_coefficient_rejected():
    sys = GreedySystem(BooleanLattice(1), lambda S, e: -1, len, [1])
    with pytest.raises(InstanceError):
        sys.a(F({0}), 0)


def test_subset_cover_formulation_is_valid():
    inst = SubsetCoverInstance.build([1, 2, 3], [{1, 2}, {3}], [1, 1])
    assert validate_greedy_properties(build_subset_cover(inst)).ok


def test_p2_violation_located():
    sys = load_fixture("p2-counterexample").system
    report = validate_greedy_properties(sys)
    v = report.first("P2")
    assert v is not None
    assert v.element == 0
    assert v.rows == (F({0}), F({0, 1}))
    assert v.values == (5, 1)


def test_p4_violation_reported():
    report = validate_greedy_properties(load_fixture("p4-counterexample").system)
    assert "P4" in report.tags()


def test_p1_violation_reported():
    report = validate_greedy_properties(load_fixture("p1-counterexample").system)
    assert "P1" in report.tags()


def test_validation_budget():
    sys = plain_system("polymatroid", 4, 0)
    with pytest.raises(BudgetExceeded):
        validate_greedy_properties(sys, budget=100)


def test_truncation_of_knapsack_gap():
    tr = load_instance(gen.knapsackgap(3)).system.truncate()
    top = F({0, 1})
    assert tr.raw(top, 1) == 2 and tr.a(top, 1) == 2
    assert tr.r(F({1})) == 0
    assert tr.a(F({1}), 1) == 0


def test_truncation_of_linear_gap():
    tr = load_fixture("lineargap-4").system.truncate()
    assert tr.r(F(range(4))) == 12
    assert tr.r(F({0, 1, 2})) == 4
    assert tr.r(F({0, 1})) == 0
    assert tr.raw(F(range(4)), 0) == 16
    assert tr.a(F(range(4)), 0) == 8
    assert tr.a(F({0, 1, 2}), 0) == 4
    assert tr.a(F({0, 1}), 0) == 0


def test_truncation_zero_on_nonpositive_rows():
    tr = load_fixture("lineargap-4").system.truncate()
    for S in tr.rows():
        if tr.r(S) <= 0:
            assert all(tr.a(S, e) == 0 for e in S)


def test_delta_bad_dual():
    tr = load_instance(gen.baddual(2, 3)).system.truncate()
    top = F(range(3))
    assert all(tr.a(top, i) == 3 for i in range(3))
    assert all(tr.a(F({i}), i) == 1 for i in range(3))
    assert compute_delta(tr) == 3


def test_delta_polymatroid_square():
    assert compute_delta(load_fixture("polymatroid-sq").system.truncate()) == 1


def test_delta_naive_at_least_exclusion_variant():
    tr = load_instance(gen.knapsack(3, 4)).system.truncate()
    assert compute_delta(tr, naive=True) >= compute_delta(tr)


def test_b_flag_examples():
    assert compute_b_flag(load_instance(gen.knapsack(4, 1)).system.truncate()) == 1
    assert compute_b_flag(load_fixture("subset-cover").system.truncate()) == 1
    assert compute_b_flag(single_row(4, 10).truncate()) == 2


def test_b_pretest_is_sufficient():
    for seed in range(10):
        sys = plain_system("knapsack", 3, seed)
        if b_flag_pretest(sys):
            assert compute_b_flag(sys.truncate()) == 1


def test_beta_gamma_subset_cover():
    loaded = load_fixture("subset-cover")
    beta, gamma = beta_gamma(loaded.system)
    widest = max(len(T) for T in loaded.instance.sets)
    assert beta == 1
    assert gamma <= widest == loaded.system.declared["gamma"]
    # the bad-dual family attains the declared value
    sys = load_instance(gen.baddual(2, 3)).system
    assert beta_gamma(sys) == (1, 3)
    assert beta_gamma_bound(sys) == 3 == compute_delta(sys.truncate())


def test_beta_gamma_knapsack():
    sys = load_instance(gen.knapsack(3, 2)).system
    assert beta_gamma(sys) == (1, 1)
    assert beta_gamma_bound(sys) == 1


def test_beta_gamma_skips_zero_gap_pairs():
    # a zero rank drop forces the truncated coefficient to zero, so the pair
    # never contributes to gamma
    lat = ExplicitLattice([[], [0], [0, 1]], n=2)
    sys = GreedySystem.from_table(lat, {(0,): {0: 1}, (0, 1): {0: 1, 1: 1}}, {(): 0, (0,): 1, (0, 1): 1}, [1, 1])
    assert sys.truncate().a(F({0, 1}), 1) == 0
    assert beta_gamma_bound(sys) == 1
    assert beta_gamma_bound(sys) is not UNBOUNDED


def test_rank_nonnegative_declared_or_scanned():
    assert rank_is_nonnegative(load_fixture("polymatroid-sq").system)
    assert not rank_is_nonnegative(load_fixture("lineargap-4").system)


plain_cases = st.tuples(st.sampled_from(PLAIN_FAMILIES), st.integers(1, 4), st.integers(0, 10**6))


@settings(max_examples=40, deadline=None)
@given(plain_cases)
def test_generated_systems_are_greedy(case):
    sys = plain_system(*case)
    assert validate_greedy_properties(sys).ok


@settings(max_examples=40, deadline=None)
@given(plain_cases)
def test_truncation_matches_reference(case):
    sys = plain_system(*case)
    elems = list(as_explicit(sys.lattice).elements())
    expected = ref.truncated(ref.table_of(sys, elems))
    tr = sys.truncate()
    for S in elems:
        for e in S:
            assert tr.a(S, e) == expected.coeff(S, e)
            assert 0 <= tr.a(S, e) <= sys.a(S, e)


@settings(max_examples=40, deadline=None)
@given(plain_cases)
def test_truncation_monotone_along_order(case):
    sys = plain_system(*case)
    tr = sys.truncate()
    lat = as_explicit(sys.lattice)
    elems = list(lat.elements())
    for S in elems:
        for T in elems:
            if lat.leq(S, T):
                for e in S:
                    assert tr.a(S, e) <= tr.a(T, e)


@settings(max_examples=40, deadline=None)
@given(plain_cases)
def test_marginal_increase_supermodularity(case):
    sys = plain_system(*case)
    lat = as_explicit(sys.lattice)
    elems = list(lat.elements())
    for S in elems:
        for T in elems:
            if S != T and lat.leq(S, T):
                for e in S:
                    lhs = (sys.r(S) - sys.r(lat.phi(S, e))) / sys.a(S, e)
                    rhs = (sys.r(T) - sys.r(lat.phi(T, e))) / sys.a(T, e)
                    assert lhs <= rhs


@settings(max_examples=30, deadline=None)
@given(plain_cases)
def test_declared_parameters_are_honest(case):
    sys = plain_system(*case)
    tr = sys.truncate()
    declared = sys.declared
    if "delta" in declared:
        assert compute_delta(tr) <= declared["delta"]
    if declared.get("b") == 1:
        assert compute_b_flag(tr) == 1
    if declared.get("a") == 0:
        assert rank_is_nonnegative(tr)
