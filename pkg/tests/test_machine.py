"""Transition rules, validation, costs, rule variants, and the trace format."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbpebble import (
    SLOW_MEMORY,
    BudgetError,
    Compute,
    Configuration,
    Delete,
    DirectComm,
    InjectivityError,
    Load,
    PebbleParseError,
    PreconditionError,
    ProblemInstance,
    RangeError,
    RuleVariant,
    Save,
    Strategy,
    TerminalMode,
    VariantError,
    apply_rule,
    baseline_sequential,
    build_dag,
    cost_of,
    format_trace,
    gen_fig1,
    gen_random_dag,
    initial_config,
    is_terminal,
    parse_trace,
    rewrite_transfers,
    validate_strategy,
    witness_strategy,
    WitnessKind,
)
from tests.conftest import replay

CHAIN3 = build_dag(3, [(0, 1), (1, 2)])
FORK = build_dag(3, [(0, 2), (1, 2)])


def step(inst, dag, config, rule):
    return apply_rule(inst, dag, config, rule)


# ---------------------------------------------------------------------------
# single-rule semantics


def test_initial_config_is_empty():
    config = initial_config(ProblemInstance(k=2, r=3, g=1))
    assert config.red == (frozenset(), frozenset())
    assert config.blue == frozenset()
    assert config.computed is None


def test_compute_requires_all_inputs_red_on_same_shade():
    inst = ProblemInstance(k=2, r=3, g=1)
    config = initial_config(inst)
    config = step(inst, FORK, config, Compute(placements=((1, 0),)))
    config = step(inst, FORK, config, Compute(placements=((2, 1),)))
    # node 2 needs both 0 and 1 red on one shade; they sit on different shades
    with pytest.raises(PreconditionError):
        step(inst, FORK, config, Compute(placements=((1, 2),)))


def test_compute_source_needs_nothing():
    inst = ProblemInstance(k=1, r=1, g=1)
    config = step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0),)))
    assert 0 in config.red[0]


def test_save_keeps_the_red_pebble():
    inst = ProblemInstance(k=1, r=2, g=1)
    config = step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0),)))
    config = step(inst, CHAIN3, config, Save(placements=((1, 0),)))
    assert 0 in config.red[0] and 0 in config.blue


def test_load_keeps_the_blue_pebble():
    inst = ProblemInstance(k=2, r=2, g=1)
    config = step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0),)))
    config = step(inst, CHAIN3, config, Save(placements=((1, 0),)))
    config = step(inst, CHAIN3, config, Load(placements=((2, 0),)))
    assert 0 in config.blue and 0 in config.red[1] and 0 in config.red[0]


def test_save_requires_red_and_load_requires_blue():
    inst = ProblemInstance(k=1, r=2, g=1)
    config = initial_config(inst)
    with pytest.raises(PreconditionError):
        step(inst, CHAIN3, config, Save(placements=((1, 0),)))
    with pytest.raises(PreconditionError):
        step(inst, CHAIN3, config, Load(placements=((1, 0),)))


def test_budget_enforced_per_shade():
    inst = ProblemInstance(k=1, r=1, g=1)
    config = step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0),)))
    with pytest.raises(BudgetError):
        step(inst, CHAIN3, config, Compute(placements=((1, 1),)))


def test_shade_injectivity_within_one_step():
    inst = ProblemInstance(k=2, r=3, g=1)
    with pytest.raises(InjectivityError):
        step(inst, FORK, initial_config(inst), Compute(placements=((1, 0), (1, 1))))


def test_same_node_on_two_shades_is_legal():
    # shades are injective, node lists are not: a dual compute is fine
    inst = ProblemInstance(k=2, r=1, g=1)
    config = step(
        inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0), (2, 0)))
    )
    assert 0 in config.red[0] and 0 in config.red[1]


def test_shade_out_of_range():
    inst = ProblemInstance(k=1, r=2, g=1)
    with pytest.raises(RangeError):
        step(inst, CHAIN3, initial_config(inst), Compute(placements=((2, 0),)))


def test_delete_is_free_and_batched():
    inst = ProblemInstance(k=1, r=3, g=1)
    config = initial_config(inst)
    config = step(inst, FORK, config, Compute(placements=((1, 0),)))
    config = step(inst, FORK, config, Compute(placements=((1, 1),)))
    config = step(inst, FORK, config, Save(placements=((1, 0),)))
    config = step(
        inst, FORK, config, Delete(reds=((1, 0), (1, 1)), blues=(0,))
    )
    assert config.red[0] == frozenset() and config.blue == frozenset()


def test_delete_missing_pebble_rejected():
    inst = ProblemInstance(k=1, r=2, g=1)
    with pytest.raises(PreconditionError):
        step(inst, CHAIN3, initial_config(inst), Delete(reds=((1, 0),)))


# ---------------------------------------------------------------------------
# terminal modes


def _pebble_all(inst, dag):
    config = initial_config(inst)
    for v in dag.topo:
        config = step(inst, dag, config, Compute(placements=((1, v),)))
    return config


def test_terminal_any_accepts_red_sink():
    inst = ProblemInstance(k=1, r=3, g=1)
    config = _pebble_all(inst, CHAIN3)
    assert is_terminal(inst, CHAIN3, config)


def test_terminal_blue_mode_requires_saved_sink():
    inst = ProblemInstance(
        k=1, r=3, g=1, terminal_mode=TerminalMode.BLUE_PEBBLE_ON_SINKS
    )
    config = _pebble_all(inst, CHAIN3)
    assert not is_terminal(inst, CHAIN3, config)
    config = step(inst, CHAIN3, config, Save(placements=((1, 2),)))
    assert is_terminal(inst, CHAIN3, config)


def test_not_terminal_when_sink_unpebbled():
    inst = ProblemInstance(k=1, r=3, g=1)
    assert not is_terminal(inst, CHAIN3, initial_config(inst))


# ---------------------------------------------------------------------------
# variants


def test_no_delete_variant_rejects_delete():
    inst = ProblemInstance(k=1, r=3, g=1, variant=RuleVariant.NO_DELETE)
    config = step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0),)))
    with pytest.raises(VariantError):
        step(inst, CHAIN3, config, Delete(reds=((1, 0),)))


def test_one_shot_variant_rejects_recompute():
    inst = ProblemInstance(k=1, r=3, g=1, variant=RuleVariant.ONE_SHOT)
    config = initial_config(inst)
    assert config.computed == frozenset()
    config = step(inst, CHAIN3, config, Compute(placements=((1, 0),)))
    config = step(inst, CHAIN3, config, Delete(reds=((1, 0),)))
    with pytest.raises(VariantError):
        step(inst, CHAIN3, config, Compute(placements=((1, 0),)))


def test_one_shot_variant_rejects_dual_compute():
    inst = ProblemInstance(k=2, r=2, g=1, variant=RuleVariant.ONE_SHOT)
    with pytest.raises(VariantError):
        step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0), (2, 0))))


def test_direct_comm_requires_direct_send_variant():
    inst = ProblemInstance(k=2, r=2, g=1)
    config = step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0),)))
    with pytest.raises(VariantError):
        step(inst, CHAIN3, config, DirectComm(moves=((1, 2, 0),)))


def test_direct_send_moves_between_shades_and_memory():
    inst = ProblemInstance(k=2, r=2, g=1, variant=RuleVariant.DIRECT_SEND)
    config = step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0),)))
    config = step(inst, CHAIN3, config, DirectComm(moves=((1, 2, 0),)))
    assert 0 in config.red[1] and 0 in config.red[0]  # copy semantics
    config = step(inst, CHAIN3, config, DirectComm(moves=((2, SLOW_MEMORY, 0),)))
    assert 0 in config.blue


def test_direct_send_forbids_save_and_load():
    inst = ProblemInstance(k=1, r=2, g=1, variant=RuleVariant.DIRECT_SEND)
    config = step(inst, CHAIN3, initial_config(inst), Compute(placements=((1, 0),)))
    with pytest.raises(VariantError):
        step(inst, CHAIN3, config, Save(placements=((1, 0),)))


def test_direct_send_endpoint_injectivity():
    inst = ProblemInstance(k=2, r=2, g=1, variant=RuleVariant.DIRECT_SEND)
    config = step(
        inst, FORK, initial_config(inst), Compute(placements=((1, 0), (2, 1)))
    )
    with pytest.raises(InjectivityError):
        step(inst, FORK, config, DirectComm(moves=((1, 2, 0), (1, SLOW_MEMORY, 0))))


# ---------------------------------------------------------------------------
# whole-strategy validation and costs


def test_validate_reports_first_violation_index():
    inst = ProblemInstance(k=1, r=3, g=1)
    bad = Strategy(
        steps=(
            Compute(placements=((1, 0),)),
            Compute(placements=((1, 2),)),  # inputs missing
        )
    )
    report = validate_strategy(inst, CHAIN3, bad)
    assert not report.ok
    assert report.first_violation[0] == 1
    assert "PreconditionError" in report.first_violation[1]
    assert report.cost is None


def test_validate_rejects_non_terminal_end():
    inst = ProblemInstance(k=1, r=3, g=1)
    partial = Strategy(steps=(Compute(placements=((1, 0),)),))
    report = validate_strategy(inst, CHAIN3, partial)
    assert not report.ok


def test_cost_accounting_and_surplus():
    # one shared compute step costs 1 regardless of how many shades fire
    inst = ProblemInstance(k=2, r=2, g=3)
    dag = build_dag(2, [])  # two isolated sinks
    strat = Strategy(
        steps=(
            Compute(placements=((1, 0), (2, 1))),
            Save(placements=((1, 0),)),
        )
    )
    cost = replay(inst, dag, strat)
    assert cost.compute_cost == 1
    assert cost.io_cost == 3  # one I/O step at g=3
    assert cost.total == 4
    assert cost.compute_step_count == 1
    assert cost.io_step_count == 1
    assert cost.surplus == Fraction(4) - Fraction(2, 2)
    assert isinstance(cost.surplus, Fraction)


def test_recompute_counter():
    inst = ProblemInstance(k=1, r=1, g=1)
    dag = build_dag(1, [])
    strat = Strategy(
        steps=(
            Compute(placements=((1, 0),)),
            Delete(reds=((1, 0),)),
            Compute(placements=((1, 0),)),
        )
    )
    cost = replay(inst, dag, strat)
    assert cost.recompute_count == 1


def test_cost_of_matches_validate():
    inst = ProblemInstance(k=1, r=3, g=2)
    art = gen_fig1(g=2)
    strat = witness_strategy(WitnessKind.FIG_1P, art, inst)
    assert cost_of(inst, art.dag, strat) == replay(inst, art.dag, strat)


# ---------------------------------------------------------------------------
# frozen example replays: the 15-node running example


def test_fig_example_one_processor_replay():
    art = gen_fig1(g=1)
    inst = ProblemInstance(k=1, r=3, g=1)
    cost = replay(inst, art.dag, witness_strategy(WitnessKind.FIG_1P, art, inst))
    assert cost.compute_step_count == 15
    assert cost.io_step_count == 6
    assert cost.total == 21


def test_fig_example_two_processor_replay():
    art = gen_fig1(g=1)
    inst = ProblemInstance(k=2, r=3, g=1)
    cost = replay(inst, art.dag, witness_strategy(WitnessKind.FIG_2P, art, inst))
    assert cost.compute_step_count == 8
    assert cost.io_step_count == 4
    assert cost.total == 12


# ---------------------------------------------------------------------------
# trace text format


def test_trace_round_trip_explicit():
    strat = Strategy(
        steps=(
            Compute(placements=((1, 0), (2, 4))),
            Save(placements=((1, 0),)),
            Load(placements=((2, 0),)),
            Delete(reds=((1, 0),), blues=(0,)),
            DirectComm(moves=((1, 2, 0), (2, SLOW_MEMORY, 4))),
        )
    )
    assert parse_trace(format_trace(strat)) == strat


def test_trace_rejects_garbage():
    with pytest.raises(PebbleParseError):
        parse_trace("jump 1:0\n")
    with pytest.raises(PebbleParseError):
        parse_trace("compute 1-0\n")


@settings(deadline=None, max_examples=25)
@given(seed=st.integers(0, 5_000), k=st.integers(1, 3))
def test_trace_round_trip_generated(seed, k):
    art = gen_random_dag(n=8, seed=seed, max_in_degree=2, edge_prob=0.5)
    inst = ProblemInstance(k=k, r=art.dag.delta_in + 1, g=1)
    strat = baseline_sequential(art.dag, inst)
    assert parse_trace(format_trace(strat)) == strat


# ---------------------------------------------------------------------------
# transfer rewriting (DirectSend -> plain save/load)


def test_rewrite_collapses_save_load_pair_into_one_send():
    # shade 1 hands node 0 to shade 2; the blue copy is never touched again,
    # so the round trip (cost 2g) becomes a single direct send (cost g)
    inst = ProblemInstance(k=2, r=2, g=2)
    strat = Strategy(
        steps=(
            Compute(placements=((1, 0),)),
            Save(placements=((1, 0),)),
            Load(placements=((2, 0),)),
            Compute(placements=((2, 1),)),
            Delete(reds=((2, 0),)),
            Compute(placements=((2, 2),)),
        )
    )
    assert replay(inst, CHAIN3, strat).total == 3 + 2 * 2
    rewritten = rewrite_transfers(strat)
    assert not any(isinstance(s, (Save, Load)) for s in rewritten.steps)
    comms = [s for s in rewritten.steps if isinstance(s, DirectComm)]
    assert len(comms) == 1 and comms[0].moves == ((1, 2, 0),)
    direct = ProblemInstance(k=2, r=2, g=2, variant=RuleVariant.DIRECT_SEND)
    assert replay(direct, CHAIN3, rewritten).total == 3 + 2


def test_rewrite_keeps_memory_round_trip_when_blue_reused():
    # the blue copy feeds two later loads, so the save cannot collapse;
    # every transfer becomes a comm step through slow memory at equal cost
    fan = build_dag(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    inst = ProblemInstance(k=3, r=3, g=1)
    strat = Strategy(
        steps=(
            Compute(placements=((1, 0),)),
            Save(placements=((1, 0),)),
            Load(placements=((2, 0),)),
            Load(placements=((3, 0),)),
            Compute(placements=((2, 1), (3, 2))),
            Save(placements=((2, 1),)),
            Delete(reds=((3, 0),)),
            Load(placements=((3, 1),)),
            Compute(placements=((3, 3),)),
        )
    )
    base_cost = replay(inst, fan, strat)
    rewritten = rewrite_transfers(strat)
    assert not any(isinstance(s, (Save, Load)) for s in rewritten.steps)
    direct = ProblemInstance(k=3, r=3, g=1, variant=RuleVariant.DIRECT_SEND)
    new_cost = replay(direct, fan, rewritten)
    assert new_cost.compute_cost == base_cost.compute_cost
    assert new_cost.io_cost <= base_cost.io_cost


def test_rewrite_without_transfers_is_identity():
    inst = ProblemInstance(k=1, r=3, g=1)
    strat = Strategy(
        steps=tuple(Compute(placements=((1, v),)) for v in CHAIN3.topo)
    )
    assert rewrite_transfers(strat) == strat
