"""Computation DAGs, undirected reduction inputs, and their file formats.

Node ids are dense integers ``0..n-1``.  A :class:`CompDag` is immutable once
built; :func:`build_dag` validates the edge list and precomputes adjacency and
a deterministic topological order (smallest ready id first).

File formats (whitespace-separated tokens, ``#`` starts a comment):

* DAG:   ``dag <n> <m>`` header, then ``e <u> <v>`` per edge and optional
  ``label <v> <text>`` lines.
* Graph: ``graph <n> <m>`` header, then ``e <u> <v>`` per undirected edge.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .errors import (
    CycleError,
    DuplicateEdgeError,
    NotASourceError,
    ParamError,
    PebbleParseError,
    RangeError,
)

NodeId = int


@dataclass(frozen=True)
class DagStats:
    """Summary statistics of a computation DAG."""

    n: int
    m: int
    delta_in: int
    delta_out: int
    sources: int
    sinks: int
    longest_path: int  # number of edges on a longest directed path


@dataclass(frozen=True)
class CompDag:
    """An immutable computation DAG with precomputed adjacency."""

    n: int
    edges: tuple[tuple[NodeId, NodeId], ...]
    labels: dict[NodeId, str] = field(default_factory=dict)
    in_nbrs: tuple[tuple[NodeId, ...], ...] = ()
    out_nbrs: tuple[tuple[NodeId, ...], ...] = ()
    topo: tuple[NodeId, ...] = ()

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def delta_in(self) -> int:
        return max((len(p) for p in self.in_nbrs), default=0)

    @property
    def delta_out(self) -> int:
        return max((len(s) for s in self.out_nbrs), default=0)

    def sources(self) -> tuple[NodeId, ...]:
        return tuple(v for v in range(self.n) if not self.in_nbrs[v])

    def sinks(self) -> tuple[NodeId, ...]:
        return tuple(v for v in range(self.n) if not self.out_nbrs[v])

    def node_ids(self) -> range:
        return range(self.n)


def build_dag(
    n: int,
    edges,
    labels: dict[NodeId, str] | None = None,
) -> CompDag:
    """Validate and assemble a :class:`CompDag`.

    Raises RangeError for out-of-range ids, DuplicateEdgeError for repeated
    edges, ParamError for self-loops or bad n, and CycleError when the edges
    do not form a DAG.
    """
    if n < 0:
        raise ParamError(f"node count must be non-negative, got {n}")
    edge_list: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise RangeError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
        if u == v:
            raise ParamError(f"self-loop on node {u}")
        if (u, v) in seen:
            raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        edge_list.append((u, v))
    edge_list.sort()

    in_lists: list[list[int]] = [[] for _ in range(n)]
    out_lists: list[list[int]] = [[] for _ in range(n)]
    for u, v in edge_list:
        out_lists[u].append(v)
        in_lists[v].append(u)

    # Kahn's algorithm, smallest ready id first, for a deterministic order.
    in_deg = [len(p) for p in in_lists]
    ready = [v for v in range(n) if in_deg[v] == 0]
    heapq.heapify(ready)
    topo: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        topo.append(v)
        for w in out_lists[v]:
            in_deg[w] -= 1
            if in_deg[w] == 0:
                heapq.heappush(ready, w)
    if len(topo) != n:
        raise CycleError(f"edge list contains a cycle ({n - len(topo)} nodes unresolved)")

    lbls = dict(labels) if labels else {}
    for v in lbls:
        if not (0 <= v < n):
            raise RangeError(f"label on out-of-range node {v}")
    return CompDag(
        n=n,
        edges=tuple(edge_list),
        labels=lbls,
        in_nbrs=tuple(tuple(sorted(p)) for p in in_lists),
        out_nbrs=tuple(tuple(sorted(s)) for s in out_lists),
        topo=tuple(topo),
    )


def dag_stats(dag: CompDag) -> DagStats:
    """Compute summary statistics, including the longest path length."""
    dist = [0] * dag.n
    for v in dag.topo:
        for w in dag.out_nbrs[v]:
            if dist[v] + 1 > dist[w]:
                dist[w] = dist[v] + 1
    return DagStats(
        n=dag.n,
        m=dag.m,
        delta_in=dag.delta_in,
        delta_out=dag.delta_out,
        sources=len(dag.sources()),
        sinks=len(dag.sinks()),
        longest_path=max(dist, default=0),
    )


def attach_antirecompute_chains(
    dag: CompDag, g: int, targets
) -> tuple[CompDag, dict[NodeId, NodeId]]:
    """Prepend a fresh chain of 2g nodes to each listed source.

    Recomputing a chained source from scratch then costs 2g+1 compute steps,
    which exceeds the 2g cost of a save+load round trip, so strategies are
    steered toward I/O instead of recomputation.

    Original node ids are preserved unchanged (the returned id map is the
    identity on them); chain nodes get fresh ids appended after ``dag.n``.
    """
    if g < 0:
        raise ParamError(f"chain half-length g must be non-negative, got {g}")
    tgt = sorted(set(int(t) for t in targets))
    src = set(dag.sources())
    for t in tgt:
        if not (0 <= t < dag.n):
            raise RangeError(f"chain target {t} outside node range")
        if t not in src:
            raise NotASourceError(f"chain target {t} is not a source")
    edges = list(dag.edges)
    next_id = dag.n
    for t in tgt:
        prev = None
        for _ in range(2 * g):
            if prev is not None:
                edges.append((prev, next_id))
            prev = next_id
            next_id += 1
        if prev is not None:
            edges.append((prev, t))
    new = build_dag(next_id, edges, dag.labels)
    return new, {v: v for v in range(dag.n)}


# ---------------------------------------------------------------------------
# DAG text format


def _content_lines(text: str):
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield idx, line


def parse_dag_text(text: str) -> CompDag:
    """Parse the ``dag n m`` line format into a :class:`CompDag`."""
    header = None
    edges: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    for lineno, line in _content_lines(text):
        tokens = line.split()
        kind = tokens[0]
        if kind == "dag":
            if header is not None:
                raise PebbleParseError(f"line {lineno}: second 'dag' header")
            if len(tokens) != 3:
                raise PebbleParseError(f"line {lineno}: expected 'dag <n> <m>'")
            try:
                header = (int(tokens[1]), int(tokens[2]))
            except ValueError:
                raise PebbleParseError(f"line {lineno}: non-integer header fields") from None
        elif kind == "e":
            if header is None:
                raise PebbleParseError(f"line {lineno}: edge before 'dag' header")
            if len(tokens) != 3:
                raise PebbleParseError(f"line {lineno}: expected 'e <u> <v>'")
            try:
                edges.append((int(tokens[1]), int(tokens[2])))
            except ValueError:
                raise PebbleParseError(f"line {lineno}: non-integer edge endpoint") from None
        elif kind == "label":
            if header is None:
                raise PebbleParseError(f"line {lineno}: label before 'dag' header")
            if len(tokens) < 3:
                raise PebbleParseError(f"line {lineno}: expected 'label <v> <text>'")
            try:
                node = int(tokens[1])
            except ValueError:
                raise PebbleParseError(f"line {lineno}: non-integer label node") from None
            labels[node] = " ".join(tokens[2:])
        else:
            raise PebbleParseError(f"line {lineno}: unknown directive {kind!r}")
    if header is None:
        raise PebbleParseError("missing 'dag <n> <m>' header")
    n, m = header
    if m != len(edges):
        raise PebbleParseError(f"header declares {m} edges but {len(edges)} given")
    return build_dag(n, edges, labels)


def format_dag_text(dag: CompDag) -> str:
    """Serialize a DAG to the line format (byte-stable ordering)."""
    out = [f"dag {dag.n} {dag.m}"]
    for v in sorted(dag.labels):
        out.append(f"label {v} {dag.labels[v]}")
    for u, v in dag.edges:
        out.append(f"e {u} {v}")
    return "\n".join(out) + "\n"


def export_dot(dag: CompDag) -> str:
    """Render the DAG as Graphviz DOT with stable ordering.

    Node lines appear in ascending id order, edge lines in lexicographic
    (u, v) order, so equal DAGs always produce byte-identical output.
    """
    lines = ["digraph G {"]
    for v in range(dag.n):
        if v in dag.labels:
            text = dag.labels[v].replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  {v} [label="{text}"];')
        else:
            lines.append(f"  {v};")
    for u, v in dag.edges:
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Undirected graphs (reduction inputs)


@dataclass(frozen=True)
class UndirectedGraph:
    """A simple undirected graph on nodes 0..n-1."""

    n: int
    edges: tuple[tuple[NodeId, NodeId], ...]  # each stored as (min, max), sorted

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: NodeId) -> tuple[NodeId, ...]:
        out = [b if a == v else a for a, b in self.edges if v in (a, b)]
        return tuple(sorted(out))

    def degree(self, v: NodeId) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        return (min(u, v), max(u, v)) in self._edge_set()

    def _edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def is_regular(self, d: int) -> bool:
        return all(self.degree(v) == d for v in range(self.n))


def build_graph(n: int, edges) -> UndirectedGraph:
    """Validate and assemble an :class:`UndirectedGraph`."""
    if n < 0:
        raise ParamError(f"node count must be non-negative, got {n}")
    seen: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise RangeError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
        if u == v:
            raise ParamError(f"self-loop on node {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {key}")
        seen.add(key)
        out.append(key)
    out.sort()
    return UndirectedGraph(n=n, edges=tuple(out))


def parse_graph_text(text: str) -> UndirectedGraph:
    """Parse the ``graph n m`` line format."""
    header = None
    edges: list[tuple[int, int]] = []
    for lineno, line in _content_lines(text):
        tokens = line.split()
        if tokens[0] == "graph":
            if header is not None:
                raise PebbleParseError(f"line {lineno}: second 'graph' header")
            if len(tokens) != 3:
                raise PebbleParseError(f"line {lineno}: expected 'graph <n> <m>'")
            try:
                header = (int(tokens[1]), int(tokens[2]))
            except ValueError:
                raise PebbleParseError(f"line {lineno}: non-integer header fields") from None
        elif tokens[0] == "e":
            if header is None:
                raise PebbleParseError(f"line {lineno}: edge before 'graph' header")
            if len(tokens) != 3:
                raise PebbleParseError(f"line {lineno}: expected 'e <u> <v>'")
            try:
                edges.append((int(tokens[1]), int(tokens[2])))
            except ValueError:
                raise PebbleParseError(f"line {lineno}: non-integer edge endpoint") from None
        else:
            raise PebbleParseError(f"line {lineno}: unknown directive {tokens[0]!r}")
    if header is None:
        raise PebbleParseError("missing 'graph <n> <m>' header")
    n, m = header
    if m != len(edges):
        raise PebbleParseError(f"header declares {m} edges but {len(edges)} given")
    return build_graph(n, edges)


def format_graph_text(graph: UndirectedGraph) -> str:
    """Serialize an undirected graph to the line format."""
    out = [f"graph {graph.n} {graph.m}"]
    for u, v in graph.edges:
        out.append(f"e {u} {v}")
    return "\n".join(out) + "\n"
