"""Executable model of the multiprocessor red-blue pebble game.

k processors each hold at most r red pebbles (fast memory); a shared blue
store (slow memory) is unbounded.  Compute steps cost 1, save/load steps cost
g, deletes are free; up to k placements (one per processor) share a step.
The package provides the rule engine, DAG family generators, greedy and
witness schedulers, an exact optimizer for small instances, tower-abstraction
search for the hardness reductions, and closed-form bounds.
"""

from .bounds import (
    BoundResult,
    fft_mpp_lower_bound,
    greedy_upper_factor,
    mmm_mpp_lower_bound,
    transfer_cost_lower_bound,
    transfer_io_lower_bound,
    trivial_bounds,
)
from .dag import (
    CompDag,
    DagStats,
    NodeId,
    UndirectedGraph,
    attach_antirecompute_chains,
    build_dag,
    build_graph,
    dag_stats,
    export_dot,
    format_dag_text,
    format_graph_text,
    parse_dag_text,
    parse_graph_text,
)
from .errors import (
    BudgetError,
    CycleError,
    DivisibilityError,
    DomainError,
    DuplicateEdgeError,
    InfeasibleError,
    InjectivityError,
    InvalidStrategyError,
    MetadataError,
    MismatchError,
    NotASourceError,
    NotCubicError,
    ParamError,
    PebbleError,
    PebbleParseError,
    PreconditionError,
    RangeError,
    VariantError,
    WitnessUnavailableError,
)
from .generators import (
    CliqueReductionParams,
    ReductionArtifact,
    VcReductionParams,
    ZipperParams,
    artifact_from_metadata,
    artifact_metadata_dict,
    clique_constants,
    gen_chain,
    gen_clique_reduction,
    gen_fig1,
    gen_greedy_adversarial_a,
    gen_greedy_adversarial_b,
    gen_independent_chains,
    gen_io_tradeoff_decrease,
    gen_io_tradeoff_increase,
    gen_level_tower,
    gen_random_dag,
    gen_skip_chain,
    gen_subgroup_cycle,
    gen_vc_reduction,
    gen_zipper,
    tower_metadata,
    vc_witness_total,
)
from .machine import (
    SLOW_MEMORY,
    Compute,
    Configuration,
    CostBreakdown,
    Delete,
    DirectComm,
    Load,
    ProblemInstance,
    RuleVariant,
    Save,
    Strategy,
    TerminalMode,
    ValidationReport,
    apply_rule,
    cost_of,
    format_trace,
    initial_config,
    is_terminal,
    parse_trace,
    rewrite_transfers,
    validate_strategy,
)
from .solver import (
    OptResult,
    OptStatus,
    SearchLimits,
    TowerMove,
    TowerSearchResult,
    TowerState,
    clique_bruteforce,
    exact_opt,
    progression_to_strategy,
    tower_abstract_opt,
    vc_bruteforce,
)
from .strategies import (
    GreedyPolicy,
    WitnessKind,
    baseline_sequential,
    greedy_schedule,
    witness_strategy,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
