"""Exact optimization and reduction search.

``exact_opt`` runs a lexicographic-cost Dijkstra over machine configurations
(total cost first, I/O steps second), with composite successors: a pebble
placement that would exceed the red budget is fused with the eviction of one
victim, so every edge has positive cost.  ``tower_abstract_opt`` searches the
level-advance abstraction used by the clique reduction, and
``progression_to_strategy`` lowers a zero-overflow progression to concrete
machine steps.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product

from heapq import heappop, heappush

from .dag import CompDag, UndirectedGraph
from .errors import ParamError
from .generators import tower_metadata
from .machine import (
    Compute,
    Delete,
    Load,
    ProblemInstance,
    RuleVariant,
    Save,
    Strategy,
    TerminalMode,
)

# ---------------------------------------------------------------------------
# Exact optimum


class OptStatus(Enum):
    OPTIMAL = "Optimal"
    EXHAUSTED = "Exhausted"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class SearchLimits:
    """Hard caps for the exact search; exceeding size caps raises ParamError,
    exceeding state/time caps returns status Exhausted."""

    max_n: int = 12
    max_k: int = 2
    max_states: int = 4_000_000
    max_seconds: float = 300.0


@dataclass(frozen=True)
class OptResult:
    status: OptStatus
    opt_total: int | None
    opt_io_steps: int | None
    strategy: Strategy | None
    states_expanded: int


def exact_opt(
    dag: CompDag,
    instance: ProblemInstance,
    limits: SearchLimits | None = None,
    prune: bool = True,
) -> OptResult:
    """Minimum total cost (and, among those, minimum I/O step count).

    ``prune=False`` disables the blue-superset dominance check and the rule
    that skips saving recomputable non-sink sources (used to validate that
    pruning preserves optimality on small instances).
    """
    limits = limits or SearchLimits()
    if instance.variant is RuleVariant.DIRECT_SEND:
        raise ParamError("exact search does not support the direct-send variant")
    if dag.n > limits.max_n:
        raise ParamError(f"n={dag.n} exceeds search cap max_n={limits.max_n}")
    if instance.k > limits.max_k:
        raise ParamError(f"k={instance.k} exceeds search cap max_k={limits.max_k}")
    if instance.r <= dag.delta_in:
        return OptResult(OptStatus.INFEASIBLE, None, None, None, 0)

    k, r, g = instance.k, instance.r, instance.g
    one_shot = instance.variant is RuleVariant.ONE_SHOT
    no_delete = instance.variant is RuleVariant.NO_DELETE
    blue_mode = instance.terminal_mode is TerminalMode.BLUE_PEBBLE_ON_SINKS
    sinks = frozenset(dag.sinks())
    sources = frozenset(dag.sources())
    in_sets = [frozenset(s) for s in dag.in_nbrs]
    empty = frozenset()

    start = (tuple(empty for _ in range(k)), empty, empty if one_shot else None)

    def is_terminal(state) -> bool:
        red, blue, _ = state
        if blue_mode:
            return sinks <= blue
        covered = blue
        for rj in red:
            covered = covered | rj
        return sinks <= covered

    def successors(state):
        red, blue, computed = state
        # --- save steps (cost g, one I/O step)
        save_opts = []
        for j in range(k):
            opts = [None]
            for v in sorted(red[j] - blue):
                # Skipping saves of source values is loss-free only when the
                # value can be recomputed on demand (not one-shot) and is not
                # itself a sink that the terminal check may need in blue.
                if prune and not one_shot and v in sources and v not in sinks:
                    continue
                opts.append(v)
            save_opts.append(opts)
        for combo in product(*save_opts):
            vs = [v for v in combo if v is not None]
            if not vs:
                continue
            new_blue = blue | set(vs)
            yield (
                (red, frozenset(new_blue), computed),
                (g, 1),
                ("save", tuple((j + 1, v) for j, v in enumerate(combo) if v is not None), ()),
            )

        # --- load steps (cost g, one I/O step); evict one victim when full
        load_opts = []
        for j in range(k):
            opts = [None]
            cands = sorted(blue - red[j])
            full = len(red[j]) >= r
            for v in cands:
                if full:
                    if no_delete:
                        continue
                    for u in sorted(red[j]):
                        opts.append((v, u))
                else:
                    opts.append((v, None))
            load_opts.append(opts)
        for combo in product(*load_opts):
            if all(c is None for c in combo):
                continue
            new_red = list(red)
            placements = []
            victims = []
            for j, c in enumerate(combo):
                if c is None:
                    continue
                v, u = c
                rj = set(new_red[j])
                if u is not None:
                    rj.discard(u)
                    victims.append((j + 1, u))
                rj.add(v)
                new_red[j] = frozenset(rj)
                placements.append((j + 1, v))
            yield (
                (tuple(new_red), blue, computed),
                (g, 1),
                ("load", tuple(placements), tuple(victims)),
            )

        # --- compute steps (cost 1); evict one victim when full
        comp_opts = []
        for j in range(k):
            opts = [None]
            full = len(red[j]) >= r
            for v in range(dag.n):
                if v in red[j]:
                    continue
                if one_shot and v in computed:
                    continue
                if not in_sets[v] <= red[j]:
                    continue
                if full:
                    if no_delete:
                        continue
                    for u in sorted(red[j] - in_sets[v]):
                        opts.append((v, u))
                else:
                    opts.append((v, None))
            comp_opts.append(opts)
        for combo in product(*comp_opts):
            chosen = [(j, c) for j, c in enumerate(combo) if c is not None]
            if not chosen:
                continue
            if one_shot and len({c[0] for _, c in chosen}) < len(chosen):
                continue  # the one-shot variant rejects same-step dual computes
            new_red = list(red)
            placements = []
            victims = []
            nodes = []
            for j, (v, u) in chosen:
                rj = set(new_red[j])
                if u is not None:
                    rj.discard(u)
                    victims.append((j + 1, u))
                rj.add(v)
                new_red[j] = frozenset(rj)
                placements.append((j + 1, v))
                nodes.append(v)
            new_computed = computed
            if one_shot:
                new_computed = computed | set(nodes)
            yield (
                (tuple(new_red), blue, new_computed),
                (1, 0),
                ("compute", tuple(placements), tuple(victims)),
            )

    INF = (float("inf"), float("inf"))
    dist = {start: (0, 0)}
    parent = {}
    heap = [((0, 0), 0, start)]
    counter = 1
    settled: dict = {}
    expanded = 0
    t0 = time.monotonic()

    def dominated(state, d) -> bool:
        red, blue, computed = state
        for b, bd in settled.get((red, computed), ()):
            if bd <= d and blue <= b:
                return True
        return False

    def reconstruct(state) -> Strategy:
        recs = []
        cur = state
        while cur in parent:
            cur, rec = parent[cur]
            recs.append(rec)
        recs.reverse()
        steps = []
        for kind, placements, victims in recs:
            if victims:
                steps.append(Delete(reds=tuple(sorted(victims))))
            if kind == "compute":
                steps.append(Compute(placements))
            elif kind == "load":
                steps.append(Load(placements))
            else:
                steps.append(Save(placements))
        return Strategy(tuple(steps))

    while heap:
        d, _, state = heappop(heap)
        if d > dist.get(state, INF):
            continue
        if prune and dominated(state, d):
            continue
        if is_terminal(state):
            return OptResult(OptStatus.OPTIMAL, d[0], d[1], reconstruct(state), expanded)
        expanded += 1
        if expanded > limits.max_states or time.monotonic() - t0 > limits.max_seconds:
            return OptResult(OptStatus.EXHAUSTED, None, None, None, expanded)
        if prune:
            red, blue, computed = state
            settled.setdefault((red, computed), []).append((blue, d))
        for nxt, w, rec in successors(state):
            nd = (d[0] + w[0], d[1] + w[1])
            if nd < dist.get(nxt, INF):
                dist[nxt] = nd
                parent[nxt] = (state, rec)
                heappush(heap, (nd, counter, nxt))
                counter += 1
    return OptResult(OptStatus.INFEASIBLE, None, None, None, expanded)


# ---------------------------------------------------------------------------
# Tower abstraction


@dataclass(frozen=True)
class TowerMove:
    kind: str  # "init" | "advance" | "retire"
    tower: int
    level: int  # target level for init/advance; last level for retire


@dataclass(frozen=True)
class TowerState:
    levels: tuple[int, ...]  # 0 = not started, i >= 1 = at level i, -1 retired
    slack_used: int


@dataclass(frozen=True)
class TowerSearchResult:
    status: str  # "feasible" | "infeasible" | "exhausted"
    feasible: bool
    progression: tuple[TowerMove, ...] | None
    states_explored: int
    slack_used: int | None


def tower_abstract_opt(
    source,
    r: int,
    io_slack: int = 0,
    max_states: int = 2_000_000,
) -> TowerSearchResult:
    """Search the tower abstraction for a completion within red budget r.

    A tower occupies its current level's node count; advancing to the next
    level transiently costs max(current+1, next) on top of the other active
    towers.  ``io_slack`` grants that many one-pebble budget overflows in
    total (an accounting device for near-miss analysis; progressions that
    consume slack do not lower to valid strategies).

    Forced moves (applied without branching): retiring a final level whose
    cross-tower dependents have all been reached; a non-growing advance that
    is free of budget overflow and drops no still-needed level; the lowest-id
    init when inits are the only legal moves.  These are loss-free because
    every tower in the generated families is needed to reach the terminal.
    """
    meta = tower_metadata(source)
    towers = meta["towers"]
    nt = len(towers)
    sizes = [list(t["levels"]) for t in towers]
    term_tower, term_level = meta["terminal"]
    prereqs: dict[tuple[int, int], list[tuple[int, int]]] = {}
    dependents: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for key, lst in meta.get("prereqs", {}).items():
        t_str, l_str = key.split(":")
        tl = (int(t_str), int(l_str))
        for src_t, src_l in lst:
            prereqs.setdefault(tl, []).append((src_t, src_l))
            dependents.setdefault((src_t, src_l), []).append(tl)

    def reached(levels, t, lvl) -> bool:
        return levels[t] == -1 or levels[t] >= lvl

    def prereqs_active(levels, t, lvl) -> bool:
        return all(levels[st] == sl for st, sl in prereqs.get((t, lvl), ()))

    def deps_reached(levels, t, lvl) -> bool:
        return all(reached(levels, dt, dl) for dt, dl in dependents.get((t, lvl), ()))

    def active_sum(levels) -> int:
        return sum(sizes[t][lv - 1] for t, lv in enumerate(levels) if lv >= 1)

    def overflow_of(levels, move: TowerMove) -> int:
        base = active_sum(levels)
        t = move.tower
        if move.kind == "init":
            transient = base + sizes[t][0]
        elif move.kind == "advance":
            cur = levels[t]
            base -= sizes[t][cur - 1]
            transient = base + max(sizes[t][cur - 1] + 1, sizes[t][cur])
        else:  # retire only removes pebbles
            return 0
        return max(0, transient - r)

    def is_terminal(levels) -> bool:
        return reached(levels, term_tower, term_level)

    def legal_moves(state: TowerState):
        levels = state.levels
        slack_left = io_slack - state.slack_used
        moves = []
        for t in range(nt):
            lv = levels[t]
            if lv == -1:
                continue
            if lv == 0:
                m = TowerMove("init", t, 1)
                if prereqs_active(levels, t, 1) and overflow_of(levels, m) <= slack_left:
                    moves.append(m)
            else:
                if lv < len(sizes[t]):
                    m = TowerMove("advance", t, lv + 1)
                    if (
                        prereqs_active(levels, t, lv + 1)
                        and deps_reached(levels, t, lv)
                        and overflow_of(levels, m) <= slack_left
                    ):
                        moves.append(m)
                elif deps_reached(levels, t, lv):
                    moves.append(TowerMove("retire", t, lv))
        return moves

    def apply(state: TowerState, move: TowerMove) -> TowerState:
        levels = list(state.levels)
        slack = state.slack_used + overflow_of(state.levels, move)
        if move.kind == "retire":
            levels[move.tower] = -1
        else:
            levels[move.tower] = move.level
        return TowerState(tuple(levels), slack)

    def forced_prefix(state: TowerState):
        prefix = []
        while True:
            if is_terminal(state.levels):
                return state, prefix
            moves = legal_moves(state)
            if not moves:
                return state, prefix
            forced = None
            for m in moves:
                if m.kind == "retire":
                    forced = m
                    break
                if (
                    m.kind == "advance"
                    and sizes[m.tower][m.level - 1] <= sizes[m.tower][m.level - 2]
                    and overflow_of(state.levels, m) == 0
                ):
                    forced = m
                    break
            if forced is None and all(m.kind == "init" for m in moves):
                forced = moves[0]
            if forced is None:
                return state, prefix
            prefix.append(forced)
            state = apply(state, forced)

    failed: set[TowerState] = set()
    explored = 0
    exhausted = False

    def dfs(state: TowerState):
        nonlocal explored, exhausted
        state, prefix = forced_prefix(state)
        if is_terminal(state.levels):
            return prefix, state.slack_used
        if state in failed or exhausted:
            return None
        explored += 1
        if explored > max_states:
            exhausted = True
            return None
        for m in legal_moves(state):
            sub = dfs(apply(state, m))
            if sub is not None:
                return prefix + [m] + sub[0], sub[1]
        failed.add(state)
        return None

    start = TowerState(tuple(0 for _ in range(nt)), 0)
    out = dfs(start)
    if out is not None:
        return TowerSearchResult("feasible", True, tuple(out[0]), explored, out[1])
    if exhausted:
        return TowerSearchResult("exhausted", False, None, explored, None)
    return TowerSearchResult("infeasible", False, None, explored, None)


def progression_to_strategy(source, progression, shade: int = 1) -> Strategy:
    """Lower a tower progression to single-processor machine steps.

    Init computes a first level in chain order; advance interleaves the next
    level's computes with deletes of the spent level (peaking at
    max(current+1, next) tower-local pebbles); retire deletes the last level.
    Only valid for progressions that never consumed budget slack.
    """
    meta = tower_metadata(source)
    towers = meta["towers"]
    steps: list = []

    def compute(v):
        steps.append(Compute(((shade, v),)))

    def delete(vs):
        if vs:
            steps.append(Delete(reds=tuple((shade, v) for v in vs)))

    for move in progression:
        nodes = towers[move.tower]["nodes"]
        if move.kind == "init":
            for v in nodes[0]:
                compute(v)
        elif move.kind == "retire":
            delete(nodes[-1])
        else:
            U = nodes[move.level - 2]
            V = nodes[move.level - 1]
            lc, ln = len(U), len(V)
            pivot = min(lc, ln)
            for j in range(ln):
                compute(V[j])
                if j < pivot - 1:
                    delete([U[j]])
                elif j == pivot - 1:
                    # U[pivot-1..lc-1] were all still needed up to here: the
                    # pair/top/fan-in edges end at this V node.
                    delete(U[pivot - 1 : lc])
    return Strategy(tuple(steps))


# ---------------------------------------------------------------------------
# Brute-force reference oracles


def vc_bruteforce(graph: UndirectedGraph) -> tuple[int, tuple[int, ...]]:
    """Minimum vertex cover by subset enumeration (small graphs only)."""
    if graph.n > 20:
        raise ParamError("vertex-cover brute force capped at 20 nodes")
    edges = list(graph.edges)
    for size in range(graph.n + 1):
        for cand in combinations(range(graph.n), size):
            cs = set(cand)
            if all(a in cs or b in cs for a, b in edges):
                return size, tuple(cand)
    raise ParamError("unreachable: full node set always covers")


def clique_bruteforce(graph: UndirectedGraph, q: int) -> tuple[int, ...] | None:
    """Some q-clique of the graph, or None (small graphs only)."""
    if graph.n > 20:
        raise ParamError("clique brute force capped at 20 nodes")
    for cand in combinations(range(graph.n), q):
        if all(graph.has_edge(a, b) for a, b in combinations(cand, 2)):
            return tuple(cand)
    return None
