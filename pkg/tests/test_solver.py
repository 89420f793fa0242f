"""Exact state-space search, the tower-abstraction search, and brute-force
graph oracles."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbpebble import (
    CliqueReductionParams,
    OptStatus,
    ParamError,
    ProblemInstance,
    RuleVariant,
    SearchLimits,
    UndirectedGraph,
    WitnessKind,
    build_dag,
    clique_bruteforce,
    exact_opt,
    gen_clique_reduction,
    gen_fig1,
    gen_level_tower,
    gen_random_dag,
    gen_skip_chain,
    progression_to_strategy,
    tower_abstract_opt,
    tower_metadata,
    validate_strategy,
    vc_bruteforce,
    witness_strategy,
)
from tests.conftest import replay

TRIANGLE = UndirectedGraph(3, ((0, 1), (0, 2), (1, 2)))
FIVE_CYCLE = UndirectedGraph(5, ((0, 1), (0, 4), (1, 2), (2, 3), (3, 4)))


# ---------------------------------------------------------------------------
# exact search: hand-checkable instances


def test_chain_optimum_is_pure_compute():
    dag = build_dag(3, [(0, 1), (1, 2)])
    res = exact_opt(dag, ProblemInstance(k=1, r=2, g=1))
    assert res.status is OptStatus.OPTIMAL
    assert res.opt_total == 3
    assert res.opt_io_steps == 0


def test_fig_example_exact_optimum():
    # frozen measurement: 21 with 6 I/O steps at k=1, r=3, g=1; the replayed
    # hand schedule attains the same value, so the search is tight here
    art = gen_fig1(g=1)
    inst = ProblemInstance(k=1, r=3, g=1)
    res = exact_opt(art.dag, inst, limits=SearchLimits(max_n=15))
    assert res.status is OptStatus.OPTIMAL
    assert (res.opt_total, res.opt_io_steps) == (21, 6)
    assert replay(inst, art.dag, res.strategy).total == 21
    hand = replay(inst, art.dag, witness_strategy(WitnessKind.FIG_1P, art, inst))
    assert res.opt_total == hand.total


def test_skip_chain_m2_needs_no_io():
    art = gen_skip_chain(m=2, copies=2, g=1)
    inst = ProblemInstance(k=2, r=3, g=1)
    res = exact_opt(art.dag, inst)
    assert (res.opt_total, res.opt_io_steps) == (4, 0)
    assert replay(inst, art.dag, res.strategy).total == 4


def test_skip_chain_m3_recompute_beats_transfers():
    # frozen measurement: with free deletes and g=1 the optimum re-derives
    # two dropped mid-chain values per copy (4 recomputations) instead of
    # paying 4 I/O steps: total 8, zero I/O
    art = gen_skip_chain(m=3, copies=2, g=1)
    inst = ProblemInstance(k=2, r=3, g=1)
    res = exact_opt(art.dag, inst)
    assert (res.opt_total, res.opt_io_steps) == (8, 0)
    cost = replay(inst, art.dag, res.strategy)
    assert cost.recompute_count == 4


def test_skip_chain_one_shot_pays_transfers():
    # single copy at k=1, r=3: under the compute-once rule the recompute
    # trick is illegal, so the optimum parks two values in slow memory and
    # pays 4 I/O steps (10 vs the unrestricted 8)
    art = gen_skip_chain(m=3, copies=1, g=1)
    plain = exact_opt(art.dag, ProblemInstance(k=1, r=3, g=1))
    assert (plain.opt_total, plain.opt_io_steps) == (8, 0)
    once = exact_opt(
        art.dag, ProblemInstance(k=1, r=3, g=1, variant=RuleVariant.ONE_SHOT)
    )
    assert (once.opt_total, once.opt_io_steps) == (10, 4)


def test_skip_chain_m2_no_delete_dichotomy():
    # without deletes each shade can ever hold only r values: infeasible at
    # r=3 (a copy needs 4), feasible and I/O-free at r=4
    art = gen_skip_chain(m=2, copies=2, g=1)
    res = exact_opt(
        art.dag, ProblemInstance(k=2, r=3, g=1, variant=RuleVariant.NO_DELETE)
    )
    assert res.status is OptStatus.INFEASIBLE
    res = exact_opt(
        art.dag, ProblemInstance(k=2, r=4, g=1, variant=RuleVariant.NO_DELETE)
    )
    assert (res.opt_total, res.opt_io_steps) == (4, 0)


def test_two_component_memory_tradeoff():
    # two independent copies of (s1 -> v1 -> v2, s2 -> v2): doubling the
    # shades while halving per-shade memory HELPS (each shade takes a copy)
    edges = [(0, 2), (2, 3), (1, 3), (4, 6), (6, 7), (5, 7)]
    dag = build_dag(8, edges)
    one = exact_opt(dag, ProblemInstance(k=1, r=8, g=1))
    two = exact_opt(dag, ProblemInstance(k=2, r=4, g=1))
    assert one.opt_total == 8
    assert two.opt_total == 4


def test_extra_idle_shades_never_hurt():
    # a k-shade strategy is verbatim a (k+1)-shade strategy at equal cost, so
    # optima are non-increasing in k at fixed r; checked by embedding the
    # 2-shade optimum into a 4-shade instance (exact search beyond k=2 is out
    # of scope, so only the upper-bound direction is asserted)
    edges = [(0, 2), (2, 3), (1, 3), (4, 6), (6, 7), (5, 7)]
    dag = build_dag(8, edges)
    two = exact_opt(dag, ProblemInstance(k=2, r=3, g=1))
    report = validate_strategy(
        ProblemInstance(k=4, r=3, g=1), dag, two.strategy
    )
    assert report.ok
    assert report.cost.total == two.opt_total


def test_optimum_never_exceeds_witness():
    art = gen_skip_chain(m=2, copies=2, g=2)
    inst = ProblemInstance(k=2, r=3, g=2)
    witness = replay(
        inst, art.dag, witness_strategy(WitnessKind.SKIP_CHAIN, art, inst)
    )
    res = exact_opt(art.dag, inst)
    assert res.opt_total <= witness.total


# ---------------------------------------------------------------------------
# exact search: statuses, limits, tie-breaking


def test_infeasible_when_budget_at_most_max_in_degree():
    art = gen_fig1(g=1)
    res = exact_opt(art.dag, ProblemInstance(k=1, r=2, g=1), limits=SearchLimits(max_n=15))
    assert res.status is OptStatus.INFEASIBLE
    assert res.opt_total is None and res.strategy is None


def test_exhausted_on_state_cap():
    art = gen_fig1(g=1)
    res = exact_opt(
        art.dag,
        ProblemInstance(k=1, r=3, g=1),
        limits=SearchLimits(max_n=15, max_states=10),
    )
    assert res.status is OptStatus.EXHAUSTED


def test_param_errors():
    art = gen_fig1(g=1)
    with pytest.raises(ParamError):
        exact_opt(art.dag, ProblemInstance(k=1, r=3, g=1))  # n over default cap
    dag = build_dag(3, [(0, 1), (1, 2)])
    with pytest.raises(ParamError):
        exact_opt(dag, ProblemInstance(k=3, r=2, g=1))  # k over default cap
    with pytest.raises(ParamError):
        exact_opt(
            dag, ProblemInstance(k=1, r=2, g=1, variant=RuleVariant.DIRECT_SEND)
        )


def test_io_step_tie_break_is_minimal():
    # among minimum-total strategies the search reports the fewest I/O steps;
    # a pure-compute optimum must therefore report zero
    dag = build_dag(4, [(0, 1), (1, 2), (2, 3)])
    res = exact_opt(dag, ProblemInstance(k=1, r=2, g=1))
    assert (res.opt_total, res.opt_io_steps) == (4, 0)


@settings(deadline=None, max_examples=12)
@given(seed=st.integers(0, 2_000))
def test_dominance_pruning_preserves_the_optimum(seed):
    art = gen_random_dag(n=6, seed=seed, max_in_degree=2, edge_prob=0.5)
    inst = ProblemInstance(k=2, r=art.dag.delta_in + 1, g=2)
    fast = exact_opt(art.dag, inst, prune=True)
    slow = exact_opt(art.dag, inst, prune=False)
    assert (fast.opt_total, fast.opt_io_steps) == (slow.opt_total, slow.opt_io_steps)


@settings(deadline=None, max_examples=10)
@given(seed=st.integers(0, 2_000), g=st.integers(1, 3))
def test_exact_strategy_replays_to_reported_cost(seed, g):
    art = gen_random_dag(n=7, seed=seed, max_in_degree=2, edge_prob=0.5)
    inst = ProblemInstance(k=1, r=art.dag.delta_in + 1, g=g)
    res = exact_opt(art.dag, inst)
    assert res.status is OptStatus.OPTIMAL
    cost = replay(inst, art.dag, res.strategy)
    assert cost.total == res.opt_total
    assert cost.io_step_count == res.opt_io_steps


# ---------------------------------------------------------------------------
# tower-abstraction search


def test_level_tower_progression_converts_and_validates():
    art = gen_level_tower([3, 5, 2], g=1)
    source = tower_metadata(art)
    res = tower_abstract_opt(source, r=6, io_slack=0)
    assert res.status == "feasible"
    strat = progression_to_strategy(source, res.progression)
    inst = ProblemInstance(k=1, r=6, g=1)
    cost = replay(inst, art.dag, strat)
    assert cost.io_cost == 0
    assert cost.total == art.dag.n


def test_level_tower_infeasible_below_transient_peak():
    # advancing 3 -> 5 keeps the current level while building the next:
    # transient max(3+1, 5) = 5, plus nothing else; r=4 cannot do it
    art = gen_level_tower([3, 5], g=1)
    source = tower_metadata(art)
    assert tower_abstract_opt(source, r=4, io_slack=0).feasible is False
    assert tower_abstract_opt(source, r=5, io_slack=0).feasible is True


def test_clique_reduction_triangle_is_io_free():
    art = gen_clique_reduction(TRIANGLE, CliqueReductionParams(q=3, T=1))
    inst = art.prescribed_instance
    source = tower_metadata(art)
    res = tower_abstract_opt(source, r=inst.r, io_slack=0)
    assert res.feasible
    strat = progression_to_strategy(source, res.progression)
    cost = replay(inst, art.dag, strat)
    assert cost.io_cost == 0
    assert cost.surplus == 0
    assert cost.total == art.dag.n == 1266


def test_clique_reduction_triangle_budget_is_tight():
    # the same schedule must overflow with one red pebble fewer
    art = gen_clique_reduction(TRIANGLE, CliqueReductionParams(q=3, T=1))
    source = tower_metadata(art)
    res = tower_abstract_opt(source, r=art.prescribed_instance.r, io_slack=0)
    strat = progression_to_strategy(source, res.progression)
    tight = ProblemInstance(k=1, r=art.prescribed_instance.r - 1, g=1)
    report = validate_strategy(tight, art.dag, strat)
    assert not report.ok
    assert "BudgetError" in report.first_violation[1]


def test_clique_reduction_five_cycle_no_triangle():
    art = gen_clique_reduction(FIVE_CYCLE, CliqueReductionParams(q=3, T=2))
    assert art.prescribed_instance.r == 270
    source = tower_metadata(art)
    for slack in (0, 1):
        res = tower_abstract_opt(source, r=270, io_slack=slack)
        assert res.status == "infeasible"
        assert not res.feasible


def test_tower_search_exhausted_status():
    art = gen_clique_reduction(FIVE_CYCLE, CliqueReductionParams(q=3, T=2))
    source = tower_metadata(art)
    res = tower_abstract_opt(source, r=270, io_slack=0, max_states=1)
    assert res.status == "exhausted"


# ---------------------------------------------------------------------------
# brute-force graph oracles


def test_vc_bruteforce_small_graphs():
    assert vc_bruteforce(TRIANGLE)[0] == 2
    k4 = UndirectedGraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
    size, cover = vc_bruteforce(k4)
    assert size == 3
    assert all(a in cover or b in cover for a, b in k4.edges)
    assert vc_bruteforce(FIVE_CYCLE)[0] == 3


def test_clique_bruteforce_small_graphs():
    assert clique_bruteforce(TRIANGLE, 3) == (0, 1, 2)
    assert clique_bruteforce(FIVE_CYCLE, 3) is None
    assert clique_bruteforce(FIVE_CYCLE, 2) == (0, 1)


def test_bruteforce_size_caps():
    big = UndirectedGraph(21, ())
    with pytest.raises(ParamError):
        vc_bruteforce(big)
    with pytest.raises(ParamError):
        clique_bruteforce(big, 2)
