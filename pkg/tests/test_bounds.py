"""Closed-form bounds: frozen values, domain checks, and consistency with
the exact solver and the greedy scheduler on small instances."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbpebble import (
    BoundResult,
    DomainError,
    InfeasibleError,
    ProblemInstance,
    SearchLimits,
    build_dag,
    cost_of,
    exact_opt,
    fft_mpp_lower_bound,
    gen_fig1,
    gen_random_dag,
    greedy_schedule,
    greedy_upper_factor,
    mmm_mpp_lower_bound,
    transfer_cost_lower_bound,
    transfer_io_lower_bound,
    trivial_bounds,
)


# ---------------------------------------------------------------------------
# trivial sandwich


def test_trivial_bounds_fig_values():
    res = trivial_bounds(n=15, k=1, r=3, g=1, delta_in=2)
    assert isinstance(res, BoundResult)
    assert res.lower == 15
    assert res.upper == 60
    assert isinstance(res.lower, Fraction) and isinstance(res.upper, Fraction)


def test_trivial_bounds_sandwich_exact_optimum():
    art = gen_fig1(g=1)
    inst = ProblemInstance(k=1, r=3, g=1)
    res = exact_opt(art.dag, inst, limits=SearchLimits(max_n=15))
    b = trivial_bounds(art.dag.n, inst.k, inst.r, inst.g, art.dag.delta_in)
    assert b.lower <= res.opt_total <= b.upper


@settings(deadline=None, max_examples=10)
@given(seed=st.integers(0, 5_000), k=st.integers(1, 2))
def test_trivial_bounds_sandwich_random(seed, k):
    art = gen_random_dag(n=6, seed=seed, max_in_degree=2, edge_prob=0.5)
    inst = ProblemInstance(k=k, r=art.dag.delta_in + 2, g=2)
    res = exact_opt(art.dag, inst)
    b = trivial_bounds(art.dag.n, inst.k, inst.r, inst.g, art.dag.delta_in)
    assert b.lower <= res.opt_total <= b.upper


def test_trivial_bounds_infeasible_and_domain():
    with pytest.raises(InfeasibleError):
        trivial_bounds(n=15, k=1, r=2, g=1, delta_in=2)
    with pytest.raises(DomainError):
        trivial_bounds(n=0, k=1, r=3, g=1, delta_in=2)
    with pytest.raises(DomainError):
        trivial_bounds(n=15, k=1, r=3, g=0, delta_in=2)


# ---------------------------------------------------------------------------
# transfer floor


def test_transfer_floors_are_exact_fractions():
    assert transfer_io_lower_bound(5, 2) == Fraction(5, 2)
    assert transfer_io_lower_bound(0, 3) == 0
    assert transfer_cost_lower_bound(n=12, L=5, k=2, g=3) == Fraction(12, 2) + 3 * Fraction(5, 2)
    with pytest.raises(DomainError):
        transfer_io_lower_bound(-1, 2)
    with pytest.raises(DomainError):
        transfer_cost_lower_bound(n=0, L=0, k=1, g=1)


def test_transfer_floor_matches_solved_chain():
    # a 4-chain at k=1 moves nothing through slow memory: the L=0 floor is
    # n/k and the solver attains it exactly
    dag = build_dag(4, [(0, 1), (1, 2), (2, 3)])
    res = exact_opt(dag, ProblemInstance(k=1, r=2, g=1))
    assert res.opt_total == transfer_cost_lower_bound(n=4, L=0, k=1, g=1) == 4


# ---------------------------------------------------------------------------
# structured-DAG floors


def test_fft_bound_frozen_value():
    val = fft_mpp_lower_bound(n=16, r=4, k=2, g=1)
    assert isinstance(val, float)
    assert f"{val:.6g}" == "18.6667"
    with pytest.raises(DomainError):
        fft_mpp_lower_bound(n=1, r=4, k=2, g=1)
    with pytest.raises(DomainError):
        fft_mpp_lower_bound(n=16, r=1, k=1, g=1)


def test_fft_bound_grows_with_scarcity():
    rich = fft_mpp_lower_bound(n=64, r=16, k=2, g=2)
    poor = fft_mpp_lower_bound(n=64, r=2, k=2, g=2)
    assert poor > rich


def test_mmm_bound_exact_iff_square_pool():
    exact = mmm_mpp_lower_bound(n=4, r=8, k=2, g=1)  # r*k = 16 square
    assert isinstance(exact, Fraction)
    assert exact == Fraction(4, 2) * (1 * (2 * 16 * Fraction(1, 4) + 4) + 1)
    rough = mmm_mpp_lower_bound(n=4, r=3, k=2, g=1)  # r*k = 6 not square
    assert isinstance(rough, float)
    with pytest.raises(DomainError):
        mmm_mpp_lower_bound(n=0, r=8, k=2, g=1)


# ---------------------------------------------------------------------------
# greedy guarantee


def test_greedy_factor_formula():
    assert greedy_upper_factor(g=1, delta_in=2) == 8
    assert greedy_upper_factor(g=3, delta_in=1) == 14
    with pytest.raises(DomainError):
        greedy_upper_factor(g=0, delta_in=2)


@settings(deadline=None, max_examples=15)
@given(seed=st.integers(0, 5_000), g=st.integers(1, 3))
def test_greedy_stays_within_published_factor(seed, g):
    art = gen_random_dag(n=10, seed=seed, max_in_degree=2, edge_prob=0.5)
    inst = ProblemInstance(k=2, r=art.dag.delta_in + 1, g=g)
    strat = greedy_schedule(art.dag, inst)
    total = cost_of(inst, art.dag, strat).total
    floor = trivial_bounds(art.dag.n, inst.k, inst.r, inst.g, art.dag.delta_in).lower
    assert total <= greedy_upper_factor(g, art.dag.delta_in) * floor
