"""DAG family generators.

Every generator returns a :class:`ReductionArtifact` bundling the DAG with
its family name, parameters, structural metadata (node roles, group/tower
tables — everything the witness builders and the tower search need), expected
cost formulas, and a prescribed machine instance where the construction pins
one.

Families
--------
chain, independent-chains, random              — baseline shapes
fig-example                                    — the 15-node two-subtree DAG
zipper                                         — G input groups + main chain
skip-chain                                     — chain with length-m skips
subgroup-cycle                                 — k^2 subgroups on a cycle
greedy-adversarial-a / greedy-adversarial-b    — greedy worst cases
io-increase / io-decrease                      — parallel I/O trade-offs
vc-reduction                                   — vertex-cover cost reduction
clique-reduction, level-tower                  — zero-I/O tower machinery
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .dag import (
    CompDag,
    UndirectedGraph,
    attach_antirecompute_chains,
    build_dag,
)
from .errors import (
    DivisibilityError,
    MetadataError,
    NotCubicError,
    ParamError,
)
from .machine import ProblemInstance, RuleVariant, TerminalMode

# ---------------------------------------------------------------------------
# Artifact container


@dataclass(frozen=True)
class ReductionArtifact:
    """A generated DAG plus everything needed to reason about it."""

    dag: CompDag
    family: str
    params: dict
    metadata: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    prescribed_instance: ProblemInstance | None = None


@dataclass(frozen=True)
class ZipperParams:
    """Input-group/main-chain construction parameters.

    d: group size; n0: main chain length; groups: number of input groups
    (chain node i reads group ((i-1) mod groups)+1); antirecompute: prepend a
    2g-chain to every group source so recomputing costs 2g+1 > 2g; g: the I/O
    cost the chains are sized against.
    """

    d: int
    n0: int
    g: int = 1
    groups: int = 2
    antirecompute: bool = False


@dataclass(frozen=True)
class VcReductionParams:
    """Vertex-cover reduction sizes: B0 shared sources and B1 own sources per
    first group; fast memory is prescribed as B0+B1+2."""

    B0: int
    B1: int
    g: int


@dataclass(frozen=True)
class CliqueReductionParams:
    """Clique-size target q and number of serial copies T."""

    q: int
    T: int = 1


# ---------------------------------------------------------------------------
# Baseline shapes


def gen_chain(n: int, g: int = 1) -> ReductionArtifact:
    """A directed path 0 -> 1 -> ... -> n-1."""
    if n < 1:
        raise ParamError("chain length must be >= 1")
    dag = build_dag(n, [(i, i + 1) for i in range(n - 1)])
    return ReductionArtifact(
        dag=dag,
        family="chain",
        params={"n": n, "g": g},
        metadata={"chain": list(range(n))},
        expected={"opt_total": n, "opt_io_steps": 0},
        prescribed_instance=ProblemInstance(k=1, r=2, g=g),
    )


def gen_independent_chains(lengths, g: int = 1) -> ReductionArtifact:
    """Disjoint directed paths, one per requested length."""
    lengths = [int(x) for x in lengths]
    if not lengths or any(x < 1 for x in lengths):
        raise ParamError("need at least one chain of length >= 1")
    edges = []
    chains = []
    base = 0
    for length in lengths:
        chains.append(list(range(base, base + length)))
        edges += [(i, i + 1) for i in range(base, base + length - 1)]
        base += length
    dag = build_dag(base, edges)
    k = len(lengths)
    return ReductionArtifact(
        dag=dag,
        family="independent-chains",
        params={"lengths": lengths, "g": g},
        metadata={"chains": chains},
        expected={"opt_total_k_chains": max(lengths)},
        prescribed_instance=ProblemInstance(k=k, r=2, g=g),
    )


def gen_random_dag(
    n: int,
    seed: int = 0,
    max_in_degree: int | None = None,
    edge_prob: float | None = None,
    g: int = 1,
) -> ReductionArtifact:
    """A layered random DAG: edges only point from lower to higher ids.

    With ``max_in_degree`` set, each node draws its in-degree uniformly from
    0..min(cap, id) and samples that many distinct predecessors; otherwise
    each candidate edge appears independently with ``edge_prob``
    (default 0.3).  Deterministic for a fixed seed.
    """
    if n < 1:
        raise ParamError("node count must be >= 1")
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        if max_in_degree is not None:
            cap = min(max_in_degree, v)
            deg = rng.randint(0, cap)
            preds = rng.sample(range(v), deg)
            edges += [(u, v) for u in sorted(preds)]
        else:
            p = 0.3 if edge_prob is None else edge_prob
            for u in range(v):
                if rng.random() < p:
                    edges.append((u, v))
    dag = build_dag(n, edges)
    return ReductionArtifact(
        dag=dag,
        family="random",
        params={
            "n": n,
            "seed": seed,
            "max_in_degree": max_in_degree,
            "edge_prob": edge_prob,
            "g": g,
        },
        metadata={},
        expected={},
        prescribed_instance=None,
    )


def gen_fig1(g: int = 1) -> ReductionArtifact:
    """The 15-node worked example: two mirrored 7-node subtrees and a root.

    Ids 0..7 are the sources (0 and 1 feed the left inner node), 8..11 the
    four inner nodes, 12/13 the subtree roots, 14 the sink.
    """
    edges = [
        (0, 8), (1, 8),     # left inner pair -> v3
        (2, 9), (3, 9),     # -> v4
        (4, 10), (5, 10),   # right mirror inner
        (6, 11), (7, 11),
        (8, 12), (9, 12),   # v3, v4 -> v5
        (10, 13), (11, 13),  # -> v6
        (12, 14), (13, 14),  # v5, v6 -> v7
    ]
    labels = {0: "v1", 1: "v2", 8: "v3", 9: "v4", 12: "v5", 13: "v6", 14: "v7"}
    dag = build_dag(15, edges, labels)
    return ReductionArtifact(
        dag=dag,
        family="fig-example",
        params={"g": g},
        metadata={
            "left": {"sources": [0, 1, 2, 3], "inner": [8, 9], "root": 12},
            "right": {"sources": [4, 5, 6, 7], "inner": [10, 11], "root": 13},
            "sink": 14,
        },
        expected={
            "witness_1p": {"compute_steps": 15, "io_steps": 6},
            "witness_2p": {"compute_steps": 8, "io_steps": 4},
        },
        prescribed_instance=ProblemInstance(k=1, r=3, g=g),
    )


# ---------------------------------------------------------------------------
# Zipper family


def gen_zipper(params: ZipperParams) -> ReductionArtifact:
    """G input groups of size d feeding an n0-node main chain cyclically."""
    d, n0, g, groups = params.d, params.n0, params.g, params.groups
    if d < 1 or n0 < 1:
        raise ParamError("need d >= 1 and n0 >= 1")
    if groups < 2:
        raise ParamError("need at least 2 input groups")
    if g < 1:
        raise ParamError("need g >= 1")
    group_ids = [list(range(j * d, (j + 1) * d)) for j in range(groups)]
    chain0 = groups * d
    main = list(range(chain0, chain0 + n0))
    edges = []
    for i, v in enumerate(main):
        for u in group_ids[i % groups]:
            edges.append((u, v))
        if i > 0:
            edges.append((main[i - 1], v))
    dag = build_dag(chain0 + n0, edges)
    chain_map: dict[str, list[int]] = {}
    if params.antirecompute:
        sources = [u for grp in group_ids for u in grp]
        dag, _ = attach_antirecompute_chains(dag, g, sources)
        nxt = chain0 + n0
        for u in sorted(sources):
            chain_map[str(u)] = list(range(nxt, nxt + 2 * g))
            nxt += 2 * g
    setup = d * ((2 * g + 1) if params.antirecompute else 1) - 2 * g
    return ReductionArtifact(
        dag=dag,
        family="zipper",
        params={
            "d": d,
            "n0": n0,
            "g": g,
            "groups": groups,
            "antirecompute": params.antirecompute,
        },
        metadata={"groups": group_ids, "main": main, "chains": chain_map},
        expected={
            "n": dag.n,
            "witness_2p_setup": setup,
            "witness_2p_total": n0 * (2 * g + 1) + setup,
            "hold_all_r": 2 * d + 2,
            "half_r": d + 2,
        },
        prescribed_instance=ProblemInstance(k=2, r=d + 2, g=g),
    )


def gen_skip_chain(m: int, copies: int = 1, g: int = 1) -> ReductionArtifact:
    """Per copy: a 2m-chain u_1..u_2m plus skip edges u_i -> u_{m+i}."""
    if m < 2 or copies < 1:
        raise ParamError("need m >= 2 and copies >= 1")
    edges = []
    chains = []
    for c in range(copies):
        base = c * 2 * m
        chain = list(range(base, base + 2 * m))
        chains.append(chain)
        edges += [(chain[i], chain[i + 1]) for i in range(2 * m - 1)]
        edges += [(chain[i], chain[m + i]) for i in range(m)]
    dag = build_dag(copies * 2 * m, edges)
    return ReductionArtifact(
        dag=dag,
        family="skip-chain",
        params={"m": m, "copies": copies, "g": g},
        metadata={"chains": chains},
        expected={
            "witness_compute_steps": 2 * m,
            "witness_io_steps": 2 * m,
            "witness_total": 2 * m + 2 * m * g,
            "pooled_memory_r": 3 * copies,
        },
        prescribed_instance=ProblemInstance(k=copies, r=3, g=g),
    )


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    i = 2
    while i * i <= x:
        if x % i == 0:
            return False
        i += 1
    return True


def gen_subgroup_cycle(k: int, d: int, n0: int, g: int = 1) -> ReductionArtifact:
    """k^2 input subgroups of size d/k feeding a main chain on a k^2-cycle.

    The chain node at cycle batch i, position j (both 1-based in [k]) reads
    one subgroup per column: S[row(l), l] with
    row(l) = ((j-1 + (l-1)(i-1)) mod k) + 1.  With k prime, tuples within a
    batch are pairwise disjoint and any two tuples share at most one
    subgroup, so consecutive chain nodes overlap in at most d/k inputs.
    """
    if not _is_prime(k):
        raise ParamError(f"subgroup-cycle needs prime k, got {k}")
    if d % k != 0:
        raise DivisibilityError(f"group size d={d} must be divisible by k={k}")
    if n0 < 1 or g < 1:
        raise ParamError("need n0 >= 1 and g >= 1")
    sub = d // k
    subgroup_ids = {}
    for row in range(1, k + 1):
        for col in range(1, k + 1):
            base = ((row - 1) * k + (col - 1)) * sub
            subgroup_ids[f"S{row}_{col}"] = list(range(base, base + sub))
    chain0 = k * k * sub
    main = list(range(chain0, chain0 + n0))
    cycle = []
    for i in range(1, k + 1):  # batch
        for j in range(1, k + 1):  # position within batch
            tup = []
            for col in range(1, k + 1):
                row = ((j - 1 + (col - 1) * (i - 1)) % k) + 1
                tup.append(f"S{row}_{col}")
            cycle.append(tup)
    edges = []
    for idx, v in enumerate(main):
        for key in cycle[idx % (k * k)]:
            for u in subgroup_ids[key]:
                edges.append((u, v))
        if idx > 0:
            edges.append((main[idx - 1], v))
    dag = build_dag(chain0 + n0, edges)
    formula = (k - 1) / k * g * d + 1  # per-node cost floor as n0 grows
    return ReductionArtifact(
        dag=dag,
        family="subgroup-cycle",
        params={"k": k, "d": d, "n0": n0, "g": g},
        metadata={"subgroups": subgroup_ids, "cycle": cycle, "main": main},
        expected={
            "n": dag.n,
            "delta_in": d + 1,
            "per_node_floor": formula,
            "fair_1p_r": k * (d + 2),
        },
        prescribed_instance=ProblemInstance(k=k, r=d + 2, g=g),
    )


# ---------------------------------------------------------------------------
# Greedy adversaries


def gen_greedy_adversarial_a(d: int, n0: int, g: int) -> ReductionArtifact:
    """Two zipper copies with sequentialized, recompute-hostile inputs.

    Per copy: inputs u_1..u_2d (first/second halves are the two groups), each
    behind a 2g-chain; edges u_i -> head(chain(u_{i+1})) force the inputs to
    be computed one after another.  Main chain node 1 reads the *second*
    group, node 2 the first, alternating.  A greedy scheduler sends one
    processor into each copy and then pays d loads per chain node, while the
    witness runs both processors down one copy's chain alternating nodes,
    paying one transfer (2g) per node.
    """
    if d < 1 or n0 < 1 or g < 1:
        raise ParamError("need d >= 1, n0 >= 1, g >= 1")
    per_core = 2 * d + n0
    per_chain = 2 * d * 2 * g
    per_copy = per_core + per_chain
    edges = []
    meta_copies = []
    for c in range(2):
        base = c * per_copy
        inputs = list(range(base, base + 2 * d))
        main = list(range(base + 2 * d, base + 2 * d + n0))
        chain_base = base + per_core
        chains = []
        for i in range(2 * d):
            chain = list(range(chain_base + i * 2 * g, chain_base + (i + 1) * 2 * g))
            chains.append(chain)
            edges += [(chain[t], chain[t + 1]) for t in range(2 * g - 1)]
            edges.append((chain[-1], inputs[i]))
        for i in range(2 * d - 1):  # sequentialize the input phase
            edges.append((inputs[i], chains[i + 1][0]))
        group1 = inputs[:d]
        group2 = inputs[d:]
        for idx, v in enumerate(main):
            grp = group2 if idx % 2 == 0 else group1  # first chain node reads group 2
            edges += [(u, v) for u in grp]
            if idx > 0:
                edges.append((main[idx - 1], v))
        meta_copies.append(
            {"inputs": inputs, "group1": group1, "group2": group2, "main": main,
             "chains": chains}
        )
    dag = build_dag(2 * per_copy, edges)
    return ReductionArtifact(
        dag=dag,
        family="greedy-adversarial-a",
        params={"d": d, "n0": n0, "g": g},
        metadata={"copies": meta_copies},
        expected={
            "n": dag.n,
            "greedy_per_node": 1 + d * g,
            "witness_per_node": 1 + 2 * g,
        },
        prescribed_instance=ProblemInstance(k=2, r=d + 2, g=g),
    )


def gen_greedy_adversarial_b(m: int, g: int) -> ReductionArtifact:
    """Two 2m-chains u, v and two m-chains w, z with crossing edges.

    w_i reads u_i and v_{m+i}; z_i reads u_{m+i} and v_i; additionally
    u_2m -> z_1 and v_2m -> w_1.  A midpoint swap lets a clever two-processor
    schedule finish in 3m + 2g, while a greedy scheduler computes u and v on
    separate processors and then pays one cross-transfer per w/z node.
    """
    if m < 2 or g < 1:
        raise ParamError("need m >= 2 and g >= 1")
    u = list(range(0, 2 * m))
    v = list(range(2 * m, 4 * m))
    w = list(range(4 * m, 5 * m))
    z = list(range(5 * m, 6 * m))
    edges = []
    edges += [(u[i], u[i + 1]) for i in range(2 * m - 1)]
    edges += [(v[i], v[i + 1]) for i in range(2 * m - 1)]
    edges += [(w[i], w[i + 1]) for i in range(m - 1)]
    edges += [(z[i], z[i + 1]) for i in range(m - 1)]
    for i in range(m):
        edges.append((u[i], w[i]))
        edges.append((v[m + i], w[i]))
        edges.append((u[m + i], z[i]))
        edges.append((v[i], z[i]))
    edges.append((u[2 * m - 1], z[0]))
    edges.append((v[2 * m - 1], w[0]))
    dag = build_dag(6 * m, edges)
    return ReductionArtifact(
        dag=dag,
        family="greedy-adversarial-b",
        params={"m": m, "g": g},
        metadata={"u": u, "v": v, "w": w, "z": z},
        expected={
            "n": dag.n,
            "witness_total": 3 * m + 2 * g,
            "greedy_total": 3 * m + (3 * m + 3) * g,
        },
        prescribed_instance=ProblemInstance(k=2, r=6 * m + 1, g=g),
    )


# ---------------------------------------------------------------------------
# I/O trade-off gadgets


def gen_io_tradeoff_increase(g: int, copies: int = 1) -> ReductionArtifact:
    """Chained diamonds: junction -> two (2g+1)-chains -> next junction.

    One processor pebbles each diamond with zero I/O; two processors can run
    the chains in parallel, saving 2g+1 compute steps per copy at the price
    of 2 I/O steps per copy — so the optimal I/O count *rises* with k.
    """
    if g < 1 or copies < 1:
        raise ParamError("need g >= 1 and copies >= 1")
    length = 2 * g + 1
    edges = []
    junctions = [0]
    diamonds = []
    nxt = 1
    for _ in range(copies):
        a = list(range(nxt, nxt + length))
        b = list(range(nxt + length, nxt + 2 * length))
        nxt += 2 * length
        out = nxt
        nxt += 1
        j = junctions[-1]
        edges += [(j, a[0]), (j, b[0])]
        edges += [(a[i], a[i + 1]) for i in range(length - 1)]
        edges += [(b[i], b[i + 1]) for i in range(length - 1)]
        edges += [(a[-1], out), (b[-1], out)]
        diamonds.append({"a": a, "b": b})
        junctions.append(out)
    dag = build_dag(nxt, edges)
    return ReductionArtifact(
        dag=dag,
        family="io-increase",
        params={"g": g, "copies": copies},
        metadata={"junctions": junctions, "diamonds": diamonds},
        expected={
            "n": dag.n,
            "witness_1p_io_steps": 0,
            "witness_2p_io_steps": 2 * copies,
        },
        prescribed_instance=ProblemInstance(k=2, r=dag.n + 1, g=g),
    )


def gen_io_tradeoff_decrease(d: int, g: int, m: int) -> ReductionArtifact:
    """A long solo chain next to a recompute-friendly group/chain gadget.

    The main-chain node period is d(2g+1)+1 (rebuild one input group through
    its anti-recompute chains, then advance), so the gadget's chain length n0
    must satisfy m = n0 * (d(2g+1)+1) for the two components to run in
    lockstep.  With two processors, one computes the solo chain while the
    other recomputes groups — zero I/O, total exactly m.  A single processor
    short on red pebbles instead keeps group values in slow memory and pays
    I/O per chain node.  min(4, n0) input groups are emitted (four only when
    the chain is long enough to visit them all).
    """
    if d < 1 or g < 1 or m < 1:
        raise ParamError("need d >= 1, g >= 1, m >= 1")
    period = d * (2 * g + 1) + 1
    if m % period != 0:
        raise DivisibilityError(
            f"m={m} must be a multiple of d(2g+1)+1 = {period}"
        )
    n0 = m // period
    groups = min(4, n0)
    if groups < 2:
        raise ParamError(f"m={m} gives n0={n0}; need n0 >= 2 for two groups")
    solo = list(range(m))
    group_ids = [
        list(range(m + j * d, m + (j + 1) * d)) for j in range(groups)
    ]
    main0 = m + groups * d
    main = list(range(main0, main0 + n0))
    edges = [(solo[i], solo[i + 1]) for i in range(m - 1)]
    for idx, vv in enumerate(main):
        edges += [(u, vv) for u in group_ids[idx % groups]]
        if idx > 0:
            edges.append((main[idx - 1], vv))
    dag = build_dag(main0 + n0, edges)
    sources = [u for grp in group_ids for u in grp]
    dag, _ = attach_antirecompute_chains(dag, g, sources)
    chain_map = {}
    nxt = main0 + n0
    for u in sorted(sources):
        chain_map[str(u)] = list(range(nxt, nxt + 2 * g))
        nxt += 2 * g
    return ReductionArtifact(
        dag=dag,
        family="io-decrease",
        params={"d": d, "g": g, "m": m},
        metadata={
            "solo": solo,
            "groups": group_ids,
            "main": main,
            "chains": chain_map,
        },
        expected={
            "n": dag.n,
            "n0": n0,
            "witness_2p_total": m,
            "witness_2p_io_steps": 0,
            "witness_1p_io_steps": groups * d + n0 * d,
            "solo_r": 2 * d + 4,
        },
        prescribed_instance=ProblemInstance(k=2, r=d + 2, g=g),
    )


# ---------------------------------------------------------------------------
# Vertex-cover cost reduction


def gen_vc_reduction(
    graph: UndirectedGraph, params: VcReductionParams
) -> ReductionArtifact:
    """Encode minimum vertex cover of a cubic graph into pebbling cost.

    Per graph node v: a first source group S1(v) (B0 shared + B1 own) feeding
    three 4-chains w0->w1->w2->w3 (one per incident edge; S1(v) also feeds
    each w1,w2,w3), and a second group S2(v) (the same B0 shared sources, the
    three w1 nodes of the *neighbor-owned* chains pointing at v, and B1-2
    extra sources) feeding a single target.  Every source sits behind a
    2g-chain.  With r = B0+B1+2, a pebbling visits groups one at a time; only
    consecutive S1(v)/S2(v) visits reuse the B0 shared values without I/O,
    and the visit order can serialize the two groups of v exactly when v lies
    outside a vertex cover — so the minimum total cost is
    n + (6M+N-1)g + 2g*B0*VC(G).
    """
    B0, B1, g = params.B0, params.B1, params.g
    if not graph.is_regular(3):
        raise NotCubicError("vertex-cover reduction needs a 3-regular graph")
    if B0 < 1 or B1 < 2 or g < 1:
        raise ParamError("need B0 >= 1, B1 >= 2, g >= 1")
    N, M = graph.n, graph.m

    nxt = 0

    def take(count):
        nonlocal nxt
        ids = list(range(nxt, nxt + count))
        nxt += count
        return ids

    commons = {v: take(B0) for v in range(N)}
    owns = {v: take(B1) for v in range(N)}
    extras = {v: take(B1 - 2) for v in range(N)}
    targets = {v: take(1)[0] for v in range(N)}
    incidences = []
    for v in range(N):
        for u in graph.neighbors(v):
            incidences.append((v, u))
    chains4 = {inc: take(4) for inc in incidences}  # w0, w1, w2, w3

    edges = []
    for inc in incidences:
        v = inc[0]
        w0, w1, w2, w3 = chains4[inc]
        edges += [(w0, w1), (w1, w2), (w2, w3)]
        for s in commons[v] + owns[v]:
            edges += [(s, w1), (s, w2), (s, w3)]
    for v in range(N):
        second = commons[v] + [chains4[(u, v)][1] for u in graph.neighbors(v)]
        second += extras[v]
        for s in second:
            edges.append((s, targets[v]))

    dag = build_dag(nxt, edges)
    sources = sorted(
        [s for v in range(N) for s in commons[v] + owns[v] + extras[v]]
        + [chains4[inc][0] for inc in incidences]
    )
    base_n = dag.n
    dag, _ = attach_antirecompute_chains(dag, g, sources)
    chain_map = {}
    at = base_n
    for s in sources:
        chain_map[str(s)] = list(range(at, at + 2 * g))
        at += 2 * g
    base_io = (6 * M + N - 1) * g
    return ReductionArtifact(
        dag=dag,
        family="vc-reduction",
        params={"B0": B0, "B1": B1, "g": g, "N": N, "M": M},
        metadata={
            "commons": {str(v): commons[v] for v in range(N)},
            "owns": {str(v): owns[v] for v in range(N)},
            "extras": {str(v): extras[v] for v in range(N)},
            "targets": {str(v): targets[v] for v in range(N)},
            "chains4": {f"{a}->{b}": chains4[(a, b)] for a, b in incidences},
            "chains": chain_map,
            "graph_edges": [list(e) for e in graph.edges],
            "graph_n": N,
        },
        expected={
            "n": dag.n,
            "base_io_steps": 6 * M + N - 1,
            "total_for_cover": f"n + {base_io} + {2 * g * B0}*|cover|",
            "cover_step_factor": 2 * B0,
        },
        prescribed_instance=ProblemInstance(k=1, r=B0 + B1 + 2, g=g),
    )


def vc_witness_total(artifact: ReductionArtifact, cover_size: int) -> int:
    """Expected total cost of the cover-ordered witness strategy."""
    p = artifact.params
    g, N, M, B0 = p["g"], p["N"], p["M"], p["B0"]
    return artifact.dag.n + (6 * M + N - 1) * g + 2 * g * B0 * cover_size


# ---------------------------------------------------------------------------
# Clique reduction (towers)


def clique_constants(N: int, M: int, q: int) -> dict:
    """The pinned tower size constants for an (N, M) graph and target q."""
    a, b2, c2 = 7, 9, 3
    c1 = (N + M) * b2
    b1 = 2 * c1
    r = 3 * (N + M) * b2
    return {"a": a, "b2": b2, "c2": c2, "c1": c1, "b1": b1, "r": r}


def _main_level_sizes(N: int, M: int, q: int) -> list[int]:
    c = clique_constants(N, M, q)
    a, b1, b2, c1, c2, r = c["a"], c["b1"], c["b2"], c["c1"], c["c2"], c["r"]
    Q = q * (q - 1) // 2
    lvl12 = r - 1 - (N + M) * a
    lvl3 = r - 1 - (N + M - q) * a - b1 - (q - 1) * b2
    lvl45 = r - 1 - (N + M - q) * a - q * b2
    lvl6 = r - 1 - (N + M - q - 1) * a - q * b2 - c1
    lvl7 = r - 1 - (N + M - q - Q) * a - q * b2 - Q * c2
    lvl89 = r - 1 - b1 - N * b2 - M * a
    return [lvl12, lvl12, lvl3, lvl45, lvl45, lvl6, lvl7, lvl89, lvl89]


def _tower_edges(level_nodes: list[list[int]]) -> list[tuple[int, int]]:
    """Within-tower edges: chains inside each level plus the transition
    pattern between consecutive levels (pairs, top-to-first, and a fan-in to
    the last node when the next level is smaller)."""
    edges = set()
    for level in level_nodes:
        for i in range(len(level) - 1):
            edges.add((level[i], level[i + 1]))
    for uu, vv in zip(level_nodes, level_nodes[1:]):
        l_cur, l_nxt = len(uu), len(vv)
        for i in range(min(l_cur, l_nxt)):
            edges.add((uu[i], vv[i]))
        edges.add((uu[-1], vv[0]))
        if l_cur > l_nxt:
            for i in range(l_nxt, l_cur):
                edges.add((uu[i], vv[l_nxt - 1]))
    return sorted(edges)


def gen_level_tower(levels, g: int = 1) -> ReductionArtifact:
    """A single standalone tower DAG for exercising the tower search."""
    sizes = [int(x) for x in levels]
    if not sizes or any(s < 1 for s in sizes):
        raise ParamError("need at least one level of size >= 1")
    level_nodes = []
    nxt = 0
    for s in sizes:
        level_nodes.append(list(range(nxt, nxt + s)))
        nxt += s
    dag = build_dag(nxt, _tower_edges(level_nodes))
    metadata = {
        "towers": [
            {"name": "tower", "kind": "plain", "levels": sizes, "nodes": level_nodes}
        ],
        "prereqs": {},
        "terminal": [0, len(sizes)],
    }
    return ReductionArtifact(
        dag=dag,
        family="level-tower",
        params={"levels": sizes, "g": g},
        metadata=metadata,
        expected={"min_r_advance": max(
            (max(len(a) + 1, len(b)) for a, b in zip(level_nodes, level_nodes[1:])),
            default=sizes[0],
        )},
        prescribed_instance=None,
    )


def gen_clique_reduction(
    graph: UndirectedGraph, params: CliqueReductionParams
) -> ReductionArtifact:
    """Encode q-clique into zero-I/O feasibility of a tower-advancing DAG.

    One main tower (9 levels) is flanked by a 3-level tower per graph node
    and a 4-level tower per graph edge.  Budget arithmetic at main level 7
    admits exactly q node towers raised early and C(q,2) edge towers raised
    cheaply — possible if and only if the raised nodes are pairwise adjacent.
    T serial copies are chained through single-node junctions.
    """
    q, T = params.q, params.T
    N, M = graph.n, graph.m
    if q < 2:
        raise ParamError("need clique size q >= 2")
    if q > N:
        raise ParamError(f"clique size q={q} exceeds node count {N}")
    if M < 1:
        raise ParamError(
            "clique reduction needs at least one edge (top levels have size 2M-1)"
        )
    if T < 1:
        raise ParamError("need T >= 1 copies")
    c = clique_constants(N, M, q)
    a, b1, b2, c1, c2, r = c["a"], c["b1"], c["b2"], c["c1"], c["c2"], c["r"]
    main_sizes = _main_level_sizes(N, M, q)
    if any(s < 1 for s in main_sizes):
        raise ParamError(f"degenerate main-tower level sizes {main_sizes}")

    towers = []  # dicts: name, kind, levels, nodes, copy, graph_node/graph_edge
    prereqs: dict[str, list[list[int]]] = {}
    edges: list[tuple[int, int]] = []
    nxt = 0

    def take_level(size):
        nonlocal nxt
        ids = list(range(nxt, nxt + size))
        nxt += size
        return ids

    def add_prereq(tower_idx, level, src_tower, src_level):
        prereqs.setdefault(f"{tower_idx}:{level}", []).append([src_tower, src_level])

    def bipartite(src_nodes, dst_nodes):
        for s in src_nodes:
            for t in dst_nodes:
                edges.append((s, t))

    def new_tower(name, kind, sizes, copy, **extra):
        nodes = [take_level(s) for s in sizes]
        edges.extend(_tower_edges(nodes))
        towers.append(
            {"name": name, "kind": kind, "levels": list(sizes), "nodes": nodes,
             "copy": copy, **extra}
        )
        return len(towers) - 1

    j_prev = new_tower("j0", "junction", [1], copy=-1)
    for cpy in range(T):
        main = new_tower(f"main/{cpy}", "main", main_sizes, copy=cpy)
        add_prereq(main, 1, j_prev, 1)
        bipartite(towers[j_prev]["nodes"][0], towers[main]["nodes"][0])
        gadgets = []
        node_tower_of = {}
        for v in range(N):
            t = new_tower(
                f"node{v}/{cpy}", "node", [a, b1, b2], copy=cpy, graph_node=v
            )
            node_tower_of[v] = t
            gadgets.append(t)
        edge_tower_of = {}
        for ge in graph.edges:
            t = new_tower(
                f"edge{ge[0]}-{ge[1]}/{cpy}", "edge", [a, a, c1, c2], copy=cpy,
                graph_edge=list(ge),
            )
            edge_tower_of[ge] = t
            gadgets.append(t)
        for t in gadgets:
            add_prereq(t, 1, main, 1)
            bipartite(towers[main]["nodes"][0], towers[t]["nodes"][0])
            add_prereq(main, 2, t, 1)
            bipartite(towers[t]["nodes"][0], towers[main]["nodes"][1])
            add_prereq(main, 9, t, len(towers[t]["levels"]))
            bipartite(towers[t]["nodes"][-1], towers[main]["nodes"][8])
        for ge, t in edge_tower_of.items():
            add_prereq(t, 2, main, 4)
            bipartite(towers[main]["nodes"][3], towers[t]["nodes"][1])
            add_prereq(main, 5, t, 2)
            bipartite(towers[t]["nodes"][1], towers[main]["nodes"][4])
            for v in ge:
                add_prereq(t, 3, node_tower_of[v], 3)
                bipartite(towers[node_tower_of[v]]["nodes"][2], towers[t]["nodes"][2])
        j_new = new_tower(f"j{cpy + 1}", "junction", [1], copy=cpy)
        add_prereq(j_new, 1, main, 9)
        bipartite(towers[main]["nodes"][8], towers[j_new]["nodes"][0])
        j_prev = j_new

    dag = build_dag(nxt, sorted(set(edges)))
    metadata = {
        "towers": towers,
        "prereqs": prereqs,
        "terminal": [j_prev, 1],
        "constants": c,
        "main_sizes": main_sizes,
        "graph_edges": [list(e) for e in graph.edges],
        "graph_n": N,
        "q": q,
        "T": T,
    }
    return ReductionArtifact(
        dag=dag,
        family="clique-reduction",
        params={"q": q, "T": T, "N": N, "M": M},
        metadata=metadata,
        expected={
            "n": dag.n,
            "r": r,
            "zero_io_iff": f"graph has a {q}-clique",
        },
        prescribed_instance=ProblemInstance(k=1, r=r, g=1),
    )


def artifact_metadata_dict(artifact: ReductionArtifact) -> dict:
    """Everything the CLI writes to metadata.json (JSON-serializable)."""
    inst = artifact.prescribed_instance
    return {
        "family": artifact.family,
        "params": artifact.params,
        "metadata": artifact.metadata,
        "expected": artifact.expected,
        "prescribed_instance": None
        if inst is None
        else {
            "k": inst.k,
            "r": inst.r,
            "g": inst.g,
            "variant": inst.variant.value,
            "terminal_mode": inst.terminal_mode.value,
        },
    }


def artifact_from_metadata(dag: CompDag, info: dict) -> ReductionArtifact:
    """Rebuild a ReductionArtifact from a parsed DAG plus the JSON metadata
    written by :func:`artifact_metadata_dict`."""
    for key in ("family", "params", "metadata"):
        if key not in info:
            raise MetadataError(f"metadata file lacks required key {key!r}")
    inst = info.get("prescribed_instance")
    prescribed = None
    if inst is not None:
        prescribed = ProblemInstance(
            k=inst["k"],
            r=inst["r"],
            g=inst["g"],
            variant=RuleVariant(inst.get("variant", "MPP")),
            terminal_mode=TerminalMode(
                inst.get("terminal_mode", "AnyPebbleOnSinks")
            ),
        )
    return ReductionArtifact(
        dag=dag,
        family=info["family"],
        params=info["params"],
        metadata=info["metadata"],
        expected=info.get("expected", {}),
        prescribed_instance=prescribed,
    )


def tower_metadata(source) -> dict:
    """Extract (and sanity-check) tower metadata from an artifact or dict."""
    if isinstance(source, ReductionArtifact):
        meta = source.metadata
    elif isinstance(source, dict):
        meta = source.get("metadata", source)
    else:
        raise MetadataError(f"unsupported metadata source {type(source).__name__}")
    if "towers" not in meta or "terminal" not in meta:
        raise MetadataError("metadata lacks tower tables ('towers'/'terminal')")
    for t in meta["towers"]:
        if len(t["levels"]) != len(t["nodes"]):
            raise MetadataError(f"tower {t.get('name')}: levels/nodes length mismatch")
        for size, ids in zip(t["levels"], t["nodes"]):
            if size != len(ids):
                raise MetadataError(
                    f"tower {t.get('name')}: declared size {size} != {len(ids)} ids"
                )
    return meta
