"""The multiprocessor red-blue pebbling rule engine.

A configuration holds k red pebble sets (one per processor shade, capacity r
each) and one unbounded blue set (slow memory).  One transition rule fires per
time step:

* ``Compute``: place a red pebble of shade j on a node whose in-neighbors all
  hold shade-j red pebbles.  Up to k placements per step, at most one per
  shade.  Cost 1 regardless of how many shades act.
* ``Save``: copy a red pebble to blue (the red stays).  Up to one per shade
  per step.  Cost g.
* ``Load``: copy a blue pebble to a shade (the blue stays).  Up to one per
  shade per step.  Cost g.
* ``Delete``: remove an arbitrary list of pebbles.  Cost 0.
* ``DirectComm`` (DirectSend variant only, replacing Save/Load): endpoints are
  the k shades plus slow memory; each endpoint sends at most one value and
  receives at most one value per step.  Cost g.

Node lists may repeat a node across shades (e.g. the same value loaded onto
two shades, or a node computed on two shades at once); only the *shades* in a
step must be distinct.  Sinks must end pebbled (any pebble by default, blue
only under the stricter terminal mode).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .dag import CompDag, NodeId
from .errors import (
    BudgetError,
    InjectivityError,
    InvalidStrategyError,
    MismatchError,
    ParamError,
    PebbleParseError,
    PreconditionError,
    RangeError,
    VariantError,
)

SLOW_MEMORY = 0  # DirectComm endpoint id for slow memory; shades are 1..k.


class RuleVariant(enum.Enum):
    MPP = "MPP"
    ONE_SHOT = "OneShot"
    NO_DELETE = "NoDelete"
    DIRECT_SEND = "DirectSend"


class TerminalMode(enum.Enum):
    ANY_PEBBLE_ON_SINKS = "AnyPebbleOnSinks"
    BLUE_PEBBLE_ON_SINKS = "BluePebbleOnSinks"


@dataclass(frozen=True)
class ProblemInstance:
    """Machine parameters: k processors, r red pebbles each, I/O cost g."""

    k: int
    r: int
    g: int
    variant: RuleVariant = RuleVariant.MPP
    terminal_mode: TerminalMode = TerminalMode.ANY_PEBBLE_ON_SINKS

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ParamError(f"processor count k must be >= 1, got {self.k}")
        if self.r < 1:
            raise ParamError(f"red capacity r must be >= 1, got {self.r}")
        if self.g < 1:
            raise ParamError(f"I/O cost g must be >= 1, got {self.g}")


@dataclass(frozen=True)
class Configuration:
    """Pebble state: red sets per shade, the blue set, and (under the
    OneShot variant only) the set of nodes computed so far."""

    red: tuple[frozenset, ...]
    blue: frozenset
    computed: frozenset | None = None

    @property
    def k(self) -> int:
        return len(self.red)

    def red_of(self, shade: int) -> frozenset:
        return self.red[shade - 1]

    def contains(self, other: "Configuration") -> bool:
        """Componentwise pebble containment (ignores the computed set)."""
        if self.k != other.k:
            return False
        return self.blue >= other.blue and all(
            a >= b for a, b in zip(self.red, other.red)
        )


# ---------------------------------------------------------------------------
# Transition rules


@dataclass(frozen=True)
class Compute:
    placements: tuple[tuple[int, NodeId], ...]  # (shade, node)

    kind = "compute"


@dataclass(frozen=True)
class Save:
    placements: tuple[tuple[int, NodeId], ...]  # (shade, node)

    kind = "save"


@dataclass(frozen=True)
class Load:
    placements: tuple[tuple[int, NodeId], ...]  # (shade, node)

    kind = "load"


@dataclass(frozen=True)
class Delete:
    reds: tuple[tuple[int, NodeId], ...] = ()  # (shade, node)
    blues: tuple[NodeId, ...] = ()

    kind = "delete"


@dataclass(frozen=True)
class DirectComm:
    moves: tuple[tuple[int, int, NodeId], ...]  # (src endpoint, dst endpoint, node)

    kind = "comm"


TransitionRule = Compute | Save | Load | Delete | DirectComm


@dataclass(frozen=True)
class Strategy:
    """A finite sequence of transition rules."""

    steps: tuple[TransitionRule, ...]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class CostBreakdown:
    """Cost totals of a clean replay: total = compute_cost + io_cost,
    surplus = total - n/k (exact rational)."""

    compute_cost: int
    io_cost: int
    total: int
    surplus: Fraction
    io_step_count: int
    compute_step_count: int
    recompute_count: int


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    first_violation: tuple[int, str] | None
    final_config: Configuration | None
    cost: CostBreakdown | None


# ---------------------------------------------------------------------------
# Rule application


def initial_config(instance: ProblemInstance) -> Configuration:
    """All red sets and the blue set start empty."""
    computed = frozenset() if instance.variant is RuleVariant.ONE_SHOT else None
    return Configuration(
        red=tuple(frozenset() for _ in range(instance.k)),
        blue=frozenset(),
        computed=computed,
    )


def _check_placements(instance: ProblemInstance, dag: CompDag, placements) -> None:
    if not placements:
        raise ParamError("a step must contain at least one placement")
    shades_seen = set()
    for shade, node in placements:
        if not (1 <= shade <= instance.k):
            raise RangeError(f"shade {shade} outside 1..{instance.k}")
        if not (0 <= node < dag.n):
            raise RangeError(f"node {node} outside 0..{dag.n - 1}")
        if shade in shades_seen:
            raise InjectivityError(f"shade {shade} used twice in one step")
        shades_seen.add(shade)


def apply_rule(
    instance: ProblemInstance,
    dag: CompDag,
    config: Configuration,
    rule: TransitionRule,
) -> Configuration:
    """Apply one transition rule, returning the successor configuration.

    Pure function: raises a PebbleError subclass and leaves the input
    untouched when the rule is malformed or its preconditions fail.
    """
    if config.k != instance.k:
        raise MismatchError(
            f"configuration has {config.k} shades but instance has k={instance.k}"
        )
    red = list(config.red)
    blue = config.blue
    computed = config.computed

    if isinstance(rule, Compute):
        _check_placements(instance, dag, rule.placements)
        if instance.variant is RuleVariant.ONE_SHOT:
            nodes = [node for _, node in rule.placements]
            for node in nodes:
                if node in config.computed or nodes.count(node) > 1:
                    raise VariantError(
                        f"node {node} computed a second time under OneShot"
                    )
        for shade, node in rule.placements:
            missing = [u for u in dag.in_nbrs[node] if u not in red[shade - 1]]
            if missing:
                raise PreconditionError(
                    f"compute {node} on shade {shade}: in-neighbors {missing} "
                    f"lack shade-{shade} red pebbles"
                )
        for shade, node in rule.placements:
            red[shade - 1] = red[shade - 1] | {node}
        _check_budget(instance, red)
        if computed is not None:
            computed = computed | {node for _, node in rule.placements}

    elif isinstance(rule, Save):
        if instance.variant is RuleVariant.DIRECT_SEND:
            raise VariantError("Save is replaced by DirectComm under DirectSend")
        _check_placements(instance, dag, rule.placements)
        for shade, node in rule.placements:
            if node not in red[shade - 1]:
                raise PreconditionError(
                    f"save {node} from shade {shade}: no red pebble there"
                )
        blue = blue | {node for _, node in rule.placements}

    elif isinstance(rule, Load):
        if instance.variant is RuleVariant.DIRECT_SEND:
            raise VariantError("Load is replaced by DirectComm under DirectSend")
        _check_placements(instance, dag, rule.placements)
        for _, node in rule.placements:
            if node not in blue:
                raise PreconditionError(f"load {node}: no blue pebble")
        for shade, node in rule.placements:
            red[shade - 1] = red[shade - 1] | {node}
        _check_budget(instance, red)

    elif isinstance(rule, Delete):
        if instance.variant is RuleVariant.NO_DELETE:
            raise VariantError("Delete is not available under NoDelete")
        if not rule.reds and not rule.blues:
            raise ParamError("a delete step must remove at least one pebble")
        seen_r = set()
        for shade, node in rule.reds:
            if not (1 <= shade <= instance.k):
                raise RangeError(f"shade {shade} outside 1..{instance.k}")
            if not (0 <= node < dag.n):
                raise RangeError(f"node {node} outside 0..{dag.n - 1}")
            if (shade, node) in seen_r:
                raise PreconditionError(f"red pebble {shade}:{node} deleted twice")
            seen_r.add((shade, node))
            if node not in red[shade - 1]:
                raise PreconditionError(
                    f"delete red {node} on shade {shade}: no pebble there"
                )
        seen_b = set()
        for node in rule.blues:
            if not (0 <= node < dag.n):
                raise RangeError(f"node {node} outside 0..{dag.n - 1}")
            if node in seen_b:
                raise PreconditionError(f"blue pebble {node} deleted twice")
            seen_b.add(node)
            if node not in blue:
                raise PreconditionError(f"delete blue {node}: no pebble there")
        for shade, node in rule.reds:
            red[shade - 1] = red[shade - 1] - {node}
        blue = blue - set(rule.blues)

    elif isinstance(rule, DirectComm):
        if instance.variant is not RuleVariant.DIRECT_SEND:
            raise VariantError("DirectComm requires the DirectSend variant")
        if not rule.moves:
            raise ParamError("a comm step must contain at least one move")
        srcs = set()
        dsts = set()
        for src, dst, node in rule.moves:
            for end in (src, dst):
                if not (0 <= end <= instance.k):
                    raise RangeError(f"endpoint {end} outside 0..{instance.k}")
            if not (0 <= node < dag.n):
                raise RangeError(f"node {node} outside 0..{dag.n - 1}")
            if src in srcs:
                raise InjectivityError(f"endpoint {src} sends twice in one step")
            if dst in dsts:
                raise InjectivityError(f"endpoint {dst} receives twice in one step")
            srcs.add(src)
            dsts.add(dst)
        for src, dst, node in rule.moves:
            holder = blue if src == SLOW_MEMORY else red[src - 1]
            if node not in holder:
                raise PreconditionError(
                    f"comm {node} from endpoint {src}: no pebble there"
                )
        for src, dst, node in rule.moves:
            if dst == SLOW_MEMORY:
                blue = blue | {node}
            else:
                red[dst - 1] = red[dst - 1] | {node}
        _check_budget(instance, red)

    else:
        raise ParamError(f"unknown rule type {type(rule).__name__}")

    return Configuration(red=tuple(red), blue=blue, computed=computed)


def _check_budget(instance: ProblemInstance, red) -> None:
    for j, pebbles in enumerate(red, start=1):
        if len(pebbles) > instance.r:
            raise BudgetError(
                f"shade {j} would hold {len(pebbles)} > r = {instance.r} red pebbles"
            )


def is_terminal(
    instance: ProblemInstance, dag: CompDag, config: Configuration
) -> bool:
    """True when every sink is pebbled per the instance's terminal mode."""
    if instance.terminal_mode is TerminalMode.BLUE_PEBBLE_ON_SINKS:
        covered = config.blue
    else:
        covered = set(config.blue)
        for pebbles in config.red:
            covered |= pebbles
    return all(v in covered for v in dag.sinks())


# ---------------------------------------------------------------------------
# Replay, validation, cost


def _is_io(rule: TransitionRule) -> bool:
    return isinstance(rule, (Save, Load, DirectComm))


def validate_strategy(
    instance: ProblemInstance, dag: CompDag, strategy: Strategy
) -> ValidationReport:
    """Replay a strategy from the empty configuration.

    The report carries the first violation (step index and reason) on
    failure, or the exact cost breakdown on success.  A strategy that
    replays cleanly but ends with an unpebbled sink is not ok.
    """
    config = initial_config(instance)
    compute_steps = 0
    io_steps = 0
    compute_placements: dict[NodeId, int] = {}
    for idx, rule in enumerate(strategy.steps):
        try:
            config = apply_rule(instance, dag, config, rule)
        except Exception as exc:  # noqa: BLE001 - report, do not mask, the cause
            reason = f"{type(exc).__name__}: {exc}"
            return ValidationReport(
                ok=False, first_violation=(idx, reason), final_config=config, cost=None
            )
        if isinstance(rule, Compute):
            compute_steps += 1
            for _, node in rule.placements:
                compute_placements[node] = compute_placements.get(node, 0) + 1
        elif _is_io(rule):
            io_steps += 1
    if not is_terminal(instance, dag, config):
        missing = [
            v
            for v in dag.sinks()
            if v not in config.blue
            and all(v not in pebbles for pebbles in config.red)
        ]
        hint = missing if missing else "blue pebbles required on sinks"
        return ValidationReport(
            ok=False,
            first_violation=(len(strategy.steps), f"not terminal: sinks unpebbled {hint}"),
            final_config=config,
            cost=None,
        )
    recompute = sum(c - 1 for c in compute_placements.values() if c > 1)
    total = compute_steps + instance.g * io_steps
    cost = CostBreakdown(
        compute_cost=compute_steps,
        io_cost=instance.g * io_steps,
        total=total,
        surplus=Fraction(total) - Fraction(dag.n, instance.k),
        io_step_count=io_steps,
        compute_step_count=compute_steps,
        recompute_count=recompute,
    )
    return ValidationReport(ok=True, first_violation=None, final_config=config, cost=cost)


def cost_of(
    instance: ProblemInstance, dag: CompDag, strategy: Strategy
) -> CostBreakdown:
    """Cost of a valid strategy; raises InvalidStrategyError otherwise."""
    report = validate_strategy(instance, dag, strategy)
    if not report.ok:
        idx, reason = report.first_violation
        raise InvalidStrategyError(f"step {idx}: {reason}")
    return report.cost


# ---------------------------------------------------------------------------
# Trace format


def _format_placements(placements) -> str:
    return " ".join(f"{s}:{v}" for s, v in sorted(placements))


def _endpoint_str(end: int) -> str:
    return "M" if end == SLOW_MEMORY else f"p{end}"


def format_trace(strategy: Strategy) -> str:
    """Serialize a strategy, one step per line, in a stable order."""
    lines = []
    for rule in strategy.steps:
        if isinstance(rule, (Compute, Save, Load)):
            lines.append(f"{rule.kind} {_format_placements(rule.placements)}")
        elif isinstance(rule, Delete):
            items = [f"r{s}:{v}" for s, v in sorted(rule.reds)]
            items += [f"b:{v}" for v in sorted(rule.blues)]
            lines.append("delete " + " ".join(items))
        elif isinstance(rule, DirectComm):
            moves = sorted(rule.moves)
            parts = [
                f"{_endpoint_str(s)}->{_endpoint_str(d)}:{v}" for s, d, v in moves
            ]
            lines.append("comm " + " ".join(parts))
        else:
            raise ParamError(f"unknown rule type {type(rule).__name__}")
    return "\n".join(lines) + ("\n" if lines else "")


_PLACEMENT_RE = re.compile(r"^(\d+):(\d+)$")
_DELETE_RE = re.compile(r"^(?:r(\d+)|b):(\d+)$")
_COMM_RE = re.compile(r"^(M|p\d+)->(M|p\d+):(\d+)$")


def _parse_endpoint(token: str) -> int:
    return SLOW_MEMORY if token == "M" else int(token[1:])


def parse_trace(text: str) -> Strategy:
    """Parse the one-step-per-line trace format (``#`` starts a comment)."""
    steps: list[TransitionRule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind, args = tokens[0], tokens[1:]
        if kind in ("compute", "save", "load"):
            placements = []
            for tok in args:
                m = _PLACEMENT_RE.match(tok)
                if not m:
                    raise PebbleParseError(
                        f"line {lineno}: bad placement {tok!r} (want shade:node)"
                    )
                placements.append((int(m.group(1)), int(m.group(2))))
            if not placements:
                raise PebbleParseError(f"line {lineno}: empty {kind} step")
            cls = {"compute": Compute, "save": Save, "load": Load}[kind]
            steps.append(cls(placements=tuple(placements)))
        elif kind == "delete":
            reds = []
            blues = []
            for tok in args:
                m = _DELETE_RE.match(tok)
                if not m:
                    raise PebbleParseError(
                        f"line {lineno}: bad delete item {tok!r} (want r<shade>:<node> or b:<node>)"
                    )
                if m.group(1) is None:
                    blues.append(int(m.group(2)))
                else:
                    reds.append((int(m.group(1)), int(m.group(2))))
            if not reds and not blues:
                raise PebbleParseError(f"line {lineno}: empty delete step")
            steps.append(Delete(reds=tuple(reds), blues=tuple(blues)))
        elif kind == "comm":
            moves = []
            for tok in args:
                m = _COMM_RE.match(tok)
                if not m:
                    raise PebbleParseError(
                        f"line {lineno}: bad comm move {tok!r} (want src->dst:node)"
                    )
                moves.append(
                    (_parse_endpoint(m.group(1)), _parse_endpoint(m.group(2)), int(m.group(3)))
                )
            if not moves:
                raise PebbleParseError(f"line {lineno}: empty comm step")
            steps.append(DirectComm(moves=tuple(moves)))
        else:
            raise PebbleParseError(f"line {lineno}: unknown step kind {kind!r}")
    return Strategy(steps=tuple(steps))


# ---------------------------------------------------------------------------
# DirectSend translation


def rewrite_transfers(strategy: Strategy) -> Strategy:
    """Translate Save/Load steps into DirectComm steps.

    Where a single-value save is consumed by exactly one later single-value
    load — with the source red pebble intact in between and the blue copy
    never used again — the pair collapses into one shade-to-shade comm step
    (cost 2g -> g).  Every other save/load becomes the equivalent comm step
    through slow memory; batched save/load steps are split (one endpoint can
    receive only one value per step under the direct-sending rule).
    """
    steps = list(strategy.steps)
    drop: set[int] = set()
    replace: dict[int, TransitionRule] = {}

    # Index future loads and blue-deletes per node for the pairing check.
    loads_of: dict[NodeId, list[int]] = {}
    blue_del_of: dict[NodeId, list[int]] = {}
    for i, rule in enumerate(steps):
        if isinstance(rule, Load):
            for _, node in rule.placements:
                loads_of.setdefault(node, []).append(i)
        elif isinstance(rule, Delete):
            for node in rule.blues:
                blue_del_of.setdefault(node, []).append(i)

    for i, rule in enumerate(steps):
        if not isinstance(rule, Save) or len(rule.placements) != 1:
            continue
        (shade, node) = rule.placements[0]
        future_loads = [j for j in loads_of.get(node, []) if j > i]
        if len(future_loads) != 1:
            continue
        j = future_loads[0]
        load_rule = steps[j]
        if not isinstance(load_rule, Load) or len(load_rule.placements) != 1:
            continue
        if any(d > i for d in blue_del_of.get(node, [])):
            continue
        # The source red pebble must survive until the comm fires at j.
        intact = True
        for mid in steps[i + 1 : j]:
            if isinstance(mid, Delete) and (shade, node) in mid.reds:
                intact = False
                break
            if isinstance(mid, Save) and (shade, node) in mid.placements:
                intact = False  # re-saved: leave both steps alone
                break
        if not intact:
            continue
        dst = load_rule.placements[0][0]
        drop.add(i)
        replace[j] = DirectComm(moves=((shade, dst, node),))

    out: list[TransitionRule] = []
    for i, rule in enumerate(steps):
        if i in drop:
            continue
        if i in replace:
            out.append(replace[i])
        elif isinstance(rule, Save):
            for shade, node in sorted(rule.placements):
                out.append(DirectComm(moves=((shade, SLOW_MEMORY, node),)))
        elif isinstance(rule, Load):
            for shade, node in sorted(rule.placements):
                out.append(DirectComm(moves=((SLOW_MEMORY, shade, node),)))
        else:
            out.append(rule)
    return Strategy(steps=tuple(out))
