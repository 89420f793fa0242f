"""Strategy construction: baseline, greedy scheduler, and witness schedules.

Witness schedules are hand-derived plans for the generated DAG families.
Each one validates under :func:`rbpebble.machine.validate_strategy`; they are
upper-bound constructions, not claimed optima (the exact solver provides
those at small sizes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .dag import CompDag, NodeId
from .errors import (
    InfeasibleError,
    InvalidStrategyError,
    MismatchError,
    WitnessUnavailableError,
)
from .generators import ReductionArtifact
from .machine import (
    Compute,
    Delete,
    Load,
    ProblemInstance,
    Save,
    Strategy,
    TerminalMode,
)

# ---------------------------------------------------------------------------
# Baseline


def baseline_sequential(dag: CompDag, instance: ProblemInstance) -> Strategy:
    """Compute nodes one at a time on shade 1: load inputs, compute, save,
    delete.  Realizes the generic upper bound n*(g*(max-in-degree+1)+1)."""
    if instance.r <= dag.delta_in:
        raise InfeasibleError(
            f"need r > max in-degree ({dag.delta_in}), got r={instance.r}"
        )
    steps = []
    for v in dag.topo:
        preds = sorted(dag.in_nbrs[v])
        for u in preds:
            steps.append(Load(((1, u),)))
        steps.append(Compute(((1, v),)))
        steps.append(Save(((1, v),)))
        steps.append(Delete(reds=tuple((1, x) for x in preds + [v])))
    return Strategy(tuple(steps))


# ---------------------------------------------------------------------------
# Greedy scheduler


@dataclass(frozen=True)
class GreedyPolicy:
    """Knobs for the greedy scheduler.

    score: 'count-red' ranks ready nodes by how many in-neighbors hold a red
    pebble on any processor; 'fraction-red' divides by in-degree, scoring
    in-degree-0 nodes as ``source_score`` (0.0 or 1.0).
    eviction: 'farthest' evicts the red pebble whose next use (earliest
    topological position among uncomputed out-neighbors) is farthest away;
    'lru' evicts the least recently touched.
    """

    score: str = "count-red"
    source_score: float = 0.0
    eviction: str = "farthest"

    def __post_init__(self):
        if self.score not in ("count-red", "fraction-red"):
            raise InvalidStrategyError(f"unknown score rule {self.score!r}")
        if self.eviction not in ("farthest", "lru"):
            raise InvalidStrategyError(f"unknown eviction rule {self.eviction!r}")
        if self.source_score not in (0.0, 1.0):
            raise InvalidStrategyError("source_score must be 0.0 or 1.0")


def greedy_schedule(
    dag: CompDag,
    instance: ProblemInstance,
    policy: GreedyPolicy | None = None,
) -> Strategy:
    """List scheduler: each round every processor claims its best ready node
    (score order, then smallest id; lower processor index wins contested
    picks), stages the missing inputs, and all claims compute in one shared
    step.

    I/O discipline: values are written to slow memory lazily — when a red
    pebble is evicted while some out-neighbor is uncomputed (or the node is a
    sink), or on demand when another processor needs a value that is red
    elsewhere.  Save steps carry one pebble each; loads are batched across
    processors into shared steps.  No node is ever recomputed.
    """
    policy = policy or GreedyPolicy()
    if instance.r <= dag.delta_in:
        raise InfeasibleError(
            f"need r > max in-degree ({dag.delta_in}), got r={instance.r}"
        )
    k, r = instance.k, instance.r
    red: list[set[NodeId]] = [set() for _ in range(k)]
    blue: set[NodeId] = set()
    computed: set[NodeId] = set()
    touch: list[dict[NodeId, int]] = [{} for _ in range(k)]
    clock = 0
    topo_pos = {v: i for i, v in enumerate(dag.topo)}
    remaining = [len(dag.in_nbrs[v]) for v in range(dag.n)]
    ready = {v for v in range(dag.n) if remaining[v] == 0}
    steps: list = []

    def next_use(v: NodeId) -> float:
        best = math.inf
        for w in dag.out_nbrs[v]:
            if w not in computed and topo_pos[w] < best:
                best = topo_pos[w]
        return best

    def node_score(v: NodeId) -> float:
        din = len(dag.in_nbrs[v])
        if din == 0:
            return 0.0 if policy.score == "count-red" else policy.source_score
        cnt = sum(1 for u in dag.in_nbrs[v] if any(u in red[j] for j in range(k)))
        return float(cnt) if policy.score == "count-red" else cnt / din

    def save_step(j: int, u: NodeId):
        steps.append(Save(((j + 1, u),)))
        blue.add(u)

    while len(computed) < dag.n:
        clock += 1
        claims: list[tuple[int, NodeId]] = []
        claimed: set[NodeId] = set()
        for j in range(k):
            best_v, best_key = None, None
            for v in ready:
                if v in claimed:
                    continue
                key = (-node_score(v), v)
                if best_key is None or key < best_key:
                    best_key, best_v = key, v
            if best_v is not None:
                claims.append((j, best_v))
                claimed.add(best_v)
        if not claims:
            raise InvalidStrategyError("greedy scheduler stalled")  # unreachable

        # Stage loads; publish values that are red elsewhere but not blue.
        load_q: list[list[NodeId]] = [[] for _ in range(k)]
        for j, v in claims:
            for u in sorted(dag.in_nbrs[v]):
                if u in red[j]:
                    touch[j][u] = clock
                    continue
                if u not in blue:
                    holder = next(
                        (h for h in range(k) if u in red[h]), None
                    )
                    if holder is None:
                        raise InvalidStrategyError(
                            f"value {u} lost (neither red nor blue)"
                        )
                    save_step(holder, u)
                load_q[j].append(u)

        # Evict per processor so loads plus the new node fit in r.
        evictions: list[tuple[int, NodeId]] = []
        for j, v in claims:
            over = len(red[j]) + len(load_q[j]) + 1 - r
            if over <= 0:
                continue
            protected = set(dag.in_nbrs[v]) | {v}
            victims = [u for u in red[j] if u not in protected]
            if policy.eviction == "farthest":
                victims.sort(key=lambda u: (-next_use(u), u))
            else:
                victims.sort(key=lambda u: (touch[j].get(u, 0), u))
            for u in victims[:over]:
                needs_value = any(w not in computed for w in dag.out_nbrs[u])
                if u not in blue and (needs_value or not dag.out_nbrs[u]):
                    save_step(j, u)
                evictions.append((j, u))
                red[j].discard(u)
        if evictions:
            steps.append(
                Delete(reds=tuple(sorted((j + 1, u) for j, u in evictions)))
            )

        # Batched loads: one shared step per queue position.
        depth = max(len(q) for q in load_q)
        for t in range(depth):
            placements = tuple(
                (j + 1, load_q[j][t]) for j in range(k) if t < len(load_q[j])
            )
            steps.append(Load(placements))
            for shade, u in placements:
                red[shade - 1].add(u)
                touch[shade - 1][u] = clock

        steps.append(Compute(tuple((j + 1, v) for j, v in claims)))
        for j, v in claims:
            red[j].add(v)
            touch[j][v] = clock
            computed.add(v)
            ready.discard(v)
            for w in dag.out_nbrs[v]:
                remaining[w] -= 1
                if remaining[w] == 0:
                    ready.add(w)

    if instance.terminal_mode is TerminalMode.BLUE_PEBBLE_ON_SINKS:
        for s in sorted(dag.sinks()):
            if s not in blue:
                holder = next(h for h in range(k) if s in red[h])
                save_step(holder, s)
    return Strategy(tuple(steps))


# ---------------------------------------------------------------------------
# Witness schedules


class WitnessKind(str, Enum):
    FIG_1P = "fig-1p"
    FIG_2P = "fig-2p"
    ZIPPER_1P = "zipper-1p"
    ZIPPER_2P = "zipper-2p"
    SKIP_CHAIN = "skip-chain"
    SUBGROUP_CYCLE_1P = "subgroup-cycle-1p"
    SUBGROUP_CYCLE_2P = "subgroup-cycle-2p"
    GREEDY_ADVERSARIAL_A = "greedy-adversarial-a"
    GREEDY_ADVERSARIAL_B = "greedy-adversarial-b"
    IO_INCREASE_1P = "io-increase-1p"
    IO_INCREASE_2P = "io-increase-2p"
    IO_DECREASE_1P = "io-decrease-1p"
    IO_DECREASE_2P = "io-decrease-2p"
    VC_REDUCTION = "vc-reduction"
    CLIQUE_REDUCTION = "clique-reduction"


def _require_family(artifact: ReductionArtifact, *families: str):
    if artifact.family not in families:
        raise MismatchError(
            f"witness expects family {families}, artifact is {artifact.family!r}"
        )


def _require_k(instance: ProblemInstance, k: int):
    if instance.k != k:
        raise MismatchError(f"witness needs k={k}, instance has k={instance.k}")


def _require_r(instance: ProblemInstance, r_min: int):
    if instance.r < r_min:
        raise WitnessUnavailableError(
            f"witness needs r >= {r_min}, instance has r={instance.r}"
        )


class _Emit:
    """Step accumulator with per-shade red tracking (assertion aid only)."""

    def __init__(self, k: int):
        self.steps: list = []
        self.red = [set() for _ in range(k)]

    def compute(self, *placements):
        self.steps.append(Compute(tuple(placements)))
        for shade, v in placements:
            self.red[shade - 1].add(v)

    def save(self, *placements):
        self.steps.append(Save(tuple(placements)))

    def load(self, *placements):
        self.steps.append(Load(tuple(placements)))
        for shade, v in placements:
            self.red[shade - 1].add(v)

    def delete(self, *reds):
        self.steps.append(Delete(reds=tuple(reds)))
        for shade, v in reds:
            self.red[shade - 1].discard(v)

    def done(self) -> Strategy:
        return Strategy(tuple(self.steps))


def _walk_chain_1(em: _Emit, shade: int, chain: list[NodeId]):
    """Compute a path with a sliding 2-node window; leaves the last node red."""
    for i, c in enumerate(chain):
        em.compute((shade, c))
        if i > 0:
            em.delete((shade, chain[i - 1]))


def _witness_fig_1p(art, inst):
    _require_k(inst, 1)
    _require_r(inst, 3)
    left, right = art.metadata["left"], art.metadata["right"]
    em = _Emit(1)

    def subtree(meta):
        s, inner, root = meta["sources"], meta["inner"], meta["root"]
        em.compute((1, s[0]))
        em.compute((1, s[1]))
        em.compute((1, inner[0]))
        em.delete((1, s[0]), (1, s[1]))
        em.save((1, inner[0]))
        em.delete((1, inner[0]))
        em.compute((1, s[2]))
        em.compute((1, s[3]))
        em.compute((1, inner[1]))
        em.delete((1, s[2]), (1, s[3]))
        em.load((1, inner[0]))
        em.compute((1, root))
        em.delete((1, inner[0]), (1, inner[1]))

    subtree(left)
    em.save((1, left["root"]))
    em.delete((1, left["root"]))
    subtree(right)
    em.load((1, left["root"]))
    em.compute((1, art.metadata["sink"]))
    return em.done()


def _witness_fig_2p(art, inst):
    _require_k(inst, 2)
    _require_r(inst, 3)
    L, R = art.metadata["left"], art.metadata["right"]
    em = _Emit(2)
    ls, li, lr = L["sources"], L["inner"], L["root"]
    rs, ri, rr = R["sources"], R["inner"], R["root"]
    em.compute((1, ls[0]), (2, rs[0]))
    em.compute((1, ls[1]), (2, rs[1]))
    em.compute((1, li[0]), (2, ri[0]))
    em.delete((1, ls[0]), (1, ls[1]), (2, rs[0]), (2, rs[1]))
    em.save((1, li[0]), (2, ri[0]))
    em.delete((1, li[0]), (2, ri[0]))
    em.compute((1, ls[2]), (2, rs[2]))
    em.compute((1, ls[3]), (2, rs[3]))
    em.compute((1, li[1]), (2, ri[1]))
    em.delete((1, ls[2]), (1, ls[3]), (2, rs[2]), (2, rs[3]))
    em.load((1, li[0]), (2, ri[0]))
    em.compute((1, lr), (2, rr))
    em.delete((1, li[0]), (1, li[1]), (2, ri[0]), (2, ri[1]))
    em.save((1, lr))
    em.load((2, lr))
    em.compute((2, art.metadata["sink"]))
    return em.done()


def _source_with_chain(em, shade, src, chains):
    chain = chains.get(str(src), [])
    if chain:
        _walk_chain_1(em, shade, chain)
    em.compute((shade, src))
    if chain:
        em.delete((shade, chain[-1]))


def _witness_zipper_1p(art, inst):
    _require_k(inst, 1)
    d, G = art.params["d"], art.params["groups"]
    groups, main = art.metadata["groups"], art.metadata["main"]
    chains = art.metadata["chains"]
    em = _Emit(1)
    if inst.r >= G * d + 2:
        for grp in groups:
            for s in grp:
                _source_with_chain(em, 1, s, chains)
        for i, v in enumerate(main):
            em.compute((1, v))
            if i > 0:
                em.delete((1, main[i - 1]))
        return em.done()
    _require_r(inst, d + 2)
    for grp in groups:
        for s in grp:
            _source_with_chain(em, 1, s, chains)
            em.save((1, s))
            em.delete((1, s))
    for i, v in enumerate(main):
        grp = groups[i % G]
        for u in grp:
            em.load((1, u))
        em.compute((1, v))
        dels = [(1, u) for u in grp]
        if i > 0:
            dels.append((1, main[i - 1]))
        em.delete(*dels)
    return em.done()


def _witness_zipper_2p(art, inst):
    _require_k(inst, 2)
    d, G = art.params["d"], art.params["groups"]
    if G != 2:
        raise MismatchError("two-processor zipper witness needs exactly 2 groups")
    _require_r(inst, d + 2)
    groups, main = art.metadata["groups"], art.metadata["main"]
    chains = art.metadata["chains"]
    em = _Emit(2)
    # Setup: processor j computes and keeps group j (chains walked in step).
    for s1, s2 in zip(groups[0], groups[1]):
        c1 = chains.get(str(s1), [])
        c2 = chains.get(str(s2), [])
        for i in range(len(c1)):
            em.compute((1, c1[i]), (2, c2[i]))
            if i > 0:
                em.delete((1, c1[i - 1]), (2, c2[i - 1]))
        em.compute((1, s1), (2, s2))
        if c1:
            em.delete((1, c1[-1]), (2, c2[-1]))
    # Main chain: node i sits on the processor owning its group; each value
    # crosses via one save and one load, except the last.
    for i, v in enumerate(main):
        owner = 1 if i % 2 == 0 else 2
        other = 3 - owner
        em.compute((owner, v))
        if i > 0:
            em.delete((owner, main[i - 1]))  # the copy loaded from blue
        if i + 1 < len(main):
            em.save((owner, v))
            em.load((other, v))
            em.delete((owner, v))  # keep only the consumer's copy
    return em.done()


def _witness_skip_chain(art, inst):
    m, copies = art.params["m"], art.params["copies"]
    _require_k(inst, copies)
    _require_r(inst, 3)
    chains = art.metadata["chains"]
    em = _Emit(copies)
    shades = list(range(1, copies + 1))
    for i in range(m):
        em.compute(*((s, chains[s - 1][i]) for s in shades))
        em.save(*((s, chains[s - 1][i]) for s in shades))
        if i > 0:
            em.delete(*((s, chains[s - 1][i - 1]) for s in shades))
    # Entering the second half: u_m is red (window), u_{m..}: need u_i loads.
    for i in range(m):
        em.load(*((s, chains[s - 1][i]) for s in shades))
        em.compute(*((s, chains[s - 1][m + i]) for s in shades))
        dels = []
        for s in shades:
            dels.append((s, chains[s - 1][i]))
            dels.append((s, chains[s - 1][m + i - 1]))
        em.delete(*dels)
    return em.done()


def _witness_subgroup_cycle_1p(art, inst):
    _require_k(inst, 1)
    k, d = art.params["k"], art.params["d"]
    _require_r(inst, k * d + 2)
    subgroups, main = art.metadata["subgroups"], art.metadata["main"]
    em = _Emit(1)
    for key in sorted(subgroups):
        for s in subgroups[key]:
            em.compute((1, s))
    for i, v in enumerate(main):
        em.compute((1, v))
        if i > 0:
            em.delete((1, main[i - 1]))
    return em.done()


def _witness_subgroup_cycle_2p(art, inst):
    k, d = art.params["k"], art.params["d"]
    _require_k(inst, k)
    _require_r(inst, d + 2)
    subgroups = art.metadata["subgroups"]
    cycle, main = art.metadata["cycle"], art.metadata["main"]
    em = _Emit(k)
    # Setup: processor j computes row j (the batch-1 tuple at position j),
    # then saves it for the later redistributions.
    for col in range(1, k + 1):
        for t in range(d // k):
            em.compute(*((j, subgroups[f"S{j}_{col}"][t]) for j in range(1, k + 1)))
    for col in range(1, k + 1):
        for t in range(d // k):
            em.save(*((j, subgroups[f"S{j}_{col}"][t]) for j in range(1, k + 1)))
    held = [set(subgroups[f"S{j}_{col}"][t] for col in range(1, k + 1)
                for t in range(d // k)) for j in range(1, k + 1)]
    for idx, v in enumerate(main):
        proc = idx % k + 1
        tup = cycle[idx % (k * k)]
        want = {s for key in tup for s in subgroups[key]}
        mine = held[proc - 1]
        stale = sorted(mine - want)
        if stale:
            em.delete(*((proc, s) for s in stale))
            mine -= set(stale)
        for s in sorted(want - mine):
            em.load((proc, s))
            mine.add(s)
        if idx > 0:
            em.load((proc, main[idx - 1]))
        em.compute((proc, v))
        if idx + 1 < len(main):
            em.save((proc, v))
        dels = [(proc, v)] if idx + 1 < len(main) else []
        if idx > 0:
            dels.append((proc, main[idx - 1]))
        if dels:
            em.delete(*dels)
    return em.done()


def _witness_adversarial_a(art, inst):
    _require_k(inst, 2)
    d, n0, g = art.params["d"], art.params["n0"], art.params["g"]
    _require_r(inst, d + 2)
    copies = art.metadata["copies"]
    em = _Emit(2)
    # Phase 1: each processor walks one copy's serialized input phase,
    # saving every input value as it is produced.
    in_a, in_b = copies[0], copies[1]
    for i in range(2 * d):
        ca, cb = in_a["chains"][i], in_b["chains"][i]
        for t in range(len(ca)):
            em.compute((1, ca[t]), (2, cb[t]))
            if t > 0:
                em.delete((1, ca[t - 1]), (2, cb[t - 1]))
        ua, ub = in_a["inputs"][i], in_b["inputs"][i]
        em.compute((1, ua), (2, ub))
        em.save((1, ua), (2, ub))
        dels = [(1, ca[-1]), (2, cb[-1])]
        if i > 0:
            dels += [(1, in_a["inputs"][i - 1]), (2, in_b["inputs"][i - 1])]
        em.delete(*dels)
    em.delete((1, in_a["inputs"][-1]), (2, in_b["inputs"][-1]))
    # Phases 2+3 per copy: p1 holds group 1, p2 group 2; the chain value
    # crosses processors after every compute.
    for c, meta in enumerate((in_a, in_b)):
        g1, g2, main = meta["group1"], meta["group2"], meta["main"]
        for t in range(d):
            em.load((1, g1[t]), (2, g2[t]))
        for i, v in enumerate(main):
            owner = 2 if i % 2 == 0 else 1  # first main node reads group 2
            other = 3 - owner
            em.compute((owner, v))
            if i > 0:
                em.delete((owner, main[i - 1]))  # the copy loaded from blue
            if i + 1 < len(main):
                em.save((owner, v))
                em.load((other, v))
                em.delete((owner, v))  # keep only the consumer's copy
        dels = [(1, x) for x in g1] + [(2, x) for x in g2]
        if c == 0:
            # Park the finished copy's sink in slow memory so its red slot
            # is free while the second copy runs.
            last_owner = 2 if (len(main) - 1) % 2 == 0 else 1
            em.save((last_owner, main[-1]))
            dels.append((last_owner, main[-1]))
        em.delete(*dels)
    return em.done()


def _witness_adversarial_b(art, inst):
    _require_k(inst, 2)
    m = art.params["m"]
    _require_r(inst, 3 * m + 1)
    u, v = art.metadata["u"], art.metadata["v"]
    w, z = art.metadata["w"], art.metadata["z"]
    em = _Emit(2)
    for i in range(m):
        em.compute((1, u[i]), (2, v[i]))
    em.save((1, u[m - 1]), (2, v[m - 1]))
    em.load((1, v[m - 1]), (2, u[m - 1]))
    for i in range(m, 2 * m):
        em.compute((1, v[i]), (2, u[i]))
    for i in range(m):
        em.compute((1, w[i]), (2, z[i]))
    return em.done()


def _witness_io_increase_1p(art, inst):
    _require_k(inst, 1)
    _require_r(inst, 3)
    junctions, diamonds = art.metadata["junctions"], art.metadata["diamonds"]
    em = _Emit(1)
    em.compute((1, junctions[0]))
    for c, dia in enumerate(diamonds):
        a, b = dia["a"], dia["b"]
        j, out = junctions[c], junctions[c + 1]
        _walk_chain_1(em, 1, a)
        em.compute((1, b[0]))
        em.delete((1, j))
        for t in range(1, len(b)):
            em.compute((1, b[t]))
            em.delete((1, b[t - 1]))
        em.compute((1, out))
        em.delete((1, a[-1]), (1, b[-1]))
    return em.done()


def _witness_io_increase_2p(art, inst):
    _require_k(inst, 2)
    _require_r(inst, 3)
    junctions, diamonds = art.metadata["junctions"], art.metadata["diamonds"]
    em = _Emit(2)
    em.compute((1, junctions[0]), (2, junctions[0]))
    for c, dia in enumerate(diamonds):
        a, b = dia["a"], dia["b"]
        j, out = junctions[c], junctions[c + 1]
        for t in range(len(a)):
            em.compute((1, a[t]), (2, b[t]))
            dels = []
            if t > 0:
                dels += [(1, a[t - 1]), (2, b[t - 1])]
            if t == 0:
                dels += [(1, j), (2, j)]
            em.delete(*dels)
        em.save((1, a[-1]), (2, b[-1]))
        em.load((1, b[-1]), (2, a[-1]))
        em.compute((1, out), (2, out))
        em.delete((1, a[-1]), (1, b[-1]), (2, a[-1]), (2, b[-1]))
    return em.done()


def _witness_io_decrease_2p(art, inst):
    _require_k(inst, 2)
    d, g = art.params["d"], art.params["g"]
    _require_r(inst, d + 2)
    solo, main = art.metadata["solo"], art.metadata["main"]
    groups, chains = art.metadata["groups"], art.metadata["chains"]
    G = len(groups)
    # Build p2's compute script: per main node, rebuild its group through the
    # anti-recompute chains, then advance the gadget chain one node.
    script: list[tuple[str, object]] = []
    for idx, vv in enumerate(main):
        grp = groups[idx % G]
        for s in grp:
            for t, c in enumerate(chains[str(s)]):
                script.append(("c", c, chains[str(s)][t - 1] if t else None))
            script.append(("c", s, chains[str(s)][-1]))
        script.append(("v", vv, idx))
    assert len(script) == len(solo), "gadget period must match solo length"
    em = _Emit(2)
    for t, action in enumerate(script):
        em.compute((1, solo[t]), (2, action[1]))
        dels = []
        if t > 0:
            dels.append((1, solo[t - 1]))  # sliding window on the solo chain
        if action[0] == "c" and action[2] is not None:
            dels.append((2, action[2]))
        if action[0] == "v":
            idx = action[2]
            grp = groups[idx % G]
            dels += [(2, s) for s in grp]
            if idx > 0:
                dels.append((2, main[idx - 1]))
        if dels:
            em.delete(*dels)
    return em.done()


def _witness_io_decrease_1p(art, inst):
    _require_k(inst, 1)
    d = art.params["d"]
    _require_r(inst, d + 2)
    solo, main = art.metadata["solo"], art.metadata["main"]
    groups, chains = art.metadata["groups"], art.metadata["chains"]
    G = len(groups)
    em = _Emit(1)
    for grp in groups:
        for s in grp:
            _source_with_chain(em, 1, s, chains)
            em.save((1, s))
            em.delete((1, s))
    for idx, vv in enumerate(main):
        grp = groups[idx % G]
        for s in grp:
            em.load((1, s))
        em.compute((1, vv))
        dels = [(1, s) for s in grp]
        if idx > 0:
            dels.append((1, main[idx - 1]))
        em.delete(*dels)
    # The solo chain runs last so its sink's red pebble never competes with
    # the gadget loop, whose budget is exactly d + 2.
    _walk_chain_1(em, 1, solo)
    return em.done()


def _witness_vc(art, inst, certificate):
    _require_k(inst, 1)
    B0, B1, g = art.params["B0"], art.params["B1"], art.params["g"]
    _require_r(inst, B0 + B1 + 2)
    if certificate is None:
        raise WitnessUnavailableError("vertex-cover witness needs a cover list")
    meta = art.metadata
    N = meta["graph_n"]
    cover = sorted(set(int(x) for x in certificate))
    edges = [tuple(e) for e in meta["graph_edges"]]
    for a, b in edges:
        if a not in cover and b not in cover:
            raise MismatchError(f"certificate misses edge ({a},{b})")
    commons = {int(kk): vv for kk, vv in meta["commons"].items()}
    owns = {int(kk): vv for kk, vv in meta["owns"].items()}
    extras = {int(kk): vv for kk, vv in meta["extras"].items()}
    targets = {int(kk): vv for kk, vv in meta["targets"].items()}
    chains4 = {}
    for key, ids in meta["chains4"].items():
        a, b = key.split("->")
        chains4[(int(a), int(b))] = ids
    chains = meta["chains"]
    incid = {vv: sorted(uu for (a, uu) in chains4 if a == vv) for vv in range(N)}
    em = _Emit(1)
    last_target = targets[cover[-1]] if cover else targets[N - 1]

    def process_s1(vv):
        held = []
        for s in commons[vv] + owns[vv]:
            _source_with_chain(em, 1, s, chains)
            held.append(s)
        for uu in incid[vv]:
            w0, w1, w2, w3 = chains4[(vv, uu)]
            _source_with_chain(em, 1, w0, chains)
            em.compute((1, w1))
            em.save((1, w1))
            em.delete((1, w0))
            em.compute((1, w2))
            em.delete((1, w1))
            em.compute((1, w3))
            em.save((1, w3))
            em.delete((1, w2), (1, w3))
        return held

    def process_s2(vv, commons_red: bool):
        if not commons_red:
            for s in commons[vv]:
                em.load((1, s))
        held = list(commons[vv])
        for uu in incid[vv]:
            w1 = chains4[(uu, vv)][1]
            em.load((1, w1))
            held.append(w1)
        for s in extras[vv]:
            _source_with_chain(em, 1, s, chains)
            held.append(s)
        t = targets[vv]
        em.compute((1, t))
        if t != last_target:
            em.save((1, t))
            em.delete((1, t), *((1, x) for x in held))
        else:
            em.delete(*((1, x) for x in held))

    outside = [vv for vv in range(N) if vv not in cover]
    for vv in cover:
        held = process_s1(vv)
        for s in commons[vv]:
            em.save((1, s))
        em.delete(*((1, x) for x in held))
    for vv in outside:
        held = process_s1(vv)
        em.delete(*((1, x) for x in owns[vv]))
        process_s2(vv, commons_red=True)
    for vv in cover:
        process_s2(vv, commons_red=False)
    return em.done()


def _witness_clique(art, inst, certificate):
    _require_k(inst, 1)
    from .solver import progression_to_strategy, tower_abstract_opt

    result = tower_abstract_opt(art, inst.r, io_slack=0)
    if not result.feasible:
        raise WitnessUnavailableError(
            "tower search found no zero-I/O completion at this budget"
        )
    return progression_to_strategy(art, result.progression)


def witness_strategy(
    kind: WitnessKind | str,
    artifact: ReductionArtifact,
    instance: ProblemInstance,
    certificate=None,
) -> Strategy:
    """Build the hand-derived schedule of the given kind for this artifact."""
    kind = WitnessKind(kind)
    table = {
        WitnessKind.FIG_1P: ("fig-example", _witness_fig_1p),
        WitnessKind.FIG_2P: ("fig-example", _witness_fig_2p),
        WitnessKind.ZIPPER_1P: ("zipper", _witness_zipper_1p),
        WitnessKind.ZIPPER_2P: ("zipper", _witness_zipper_2p),
        WitnessKind.SKIP_CHAIN: ("skip-chain", _witness_skip_chain),
        WitnessKind.SUBGROUP_CYCLE_1P: ("subgroup-cycle", _witness_subgroup_cycle_1p),
        WitnessKind.SUBGROUP_CYCLE_2P: ("subgroup-cycle", _witness_subgroup_cycle_2p),
        WitnessKind.GREEDY_ADVERSARIAL_A: (
            "greedy-adversarial-a",
            _witness_adversarial_a,
        ),
        WitnessKind.GREEDY_ADVERSARIAL_B: (
            "greedy-adversarial-b",
            _witness_adversarial_b,
        ),
        WitnessKind.IO_INCREASE_1P: ("io-increase", _witness_io_increase_1p),
        WitnessKind.IO_INCREASE_2P: ("io-increase", _witness_io_increase_2p),
        WitnessKind.IO_DECREASE_1P: ("io-decrease", _witness_io_decrease_1p),
        WitnessKind.IO_DECREASE_2P: ("io-decrease", _witness_io_decrease_2p),
    }
    if kind in table:
        family, fn = table[kind]
        _require_family(artifact, family)
        return fn(artifact, instance)
    if kind is WitnessKind.VC_REDUCTION:
        _require_family(artifact, "vc-reduction")
        return _witness_vc(artifact, instance, certificate)
    if kind is WitnessKind.CLIQUE_REDUCTION:
        _require_family(artifact, "clique-reduction")
        return _witness_clique(artifact, instance, certificate)
    raise WitnessUnavailableError(f"no witness builder for {kind}")  # unreachable
