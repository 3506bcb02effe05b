"""Weighted directed multigraphs with conjugate edge pairs.

A delta graph is a locally finite directed multigraph with a distinguished
basepoint, an involution pairing each edge with a reverse edge of inverse
weight, and outgoing weight sum equal to ``delta`` at every vertex.  Graphs
may be infinite: adjacency is a pure function from a vertex to its outgoing
edges, and all computations work on a finite ball around the basepoint.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .weights import GeneratorContext, Weight

VertexId = Hashable
EdgeId = Hashable


class GraphConstructionError(ValueError):
    """A procedural graph's adjacency function failed or returned bad data."""


class NonTracialGraphError(ValueError):
    """An operation requiring a tracial graph was given a non-tracial one."""

    def __init__(self, message: str, witness: "Path | None" = None):
        super().__init__(message)
        self.witness = witness


def vid_key(v):
    """Total order on vertex/edge ids of mixed shapes (ints, strings, tuples)."""
    if hasattr(v, "_vid_key_"):
        return v._vid_key_()
    if isinstance(v, bool):
        return ("b", v)
    if isinstance(v, int):
        return ("i", v)
    if isinstance(v, float):
        return ("f", v)
    if isinstance(v, str):
        return ("s", v)
    if isinstance(v, tuple):
        return ("t",) + tuple(vid_key(x) for x in v)
    return ("r", repr(v))


@dataclass(frozen=True)
class Edge:
    """Directed edge; ``conjugate`` names the paired reverse edge."""

    eid: EdgeId
    source: VertexId
    target: VertexId
    weight: Weight
    conjugate: EdgeId

    def __repr__(self):
        return "Edge(%r: %r->%r, %s)" % (self.eid, self.source, self.target, self.weight.text())


@dataclass(frozen=True)
class Path:
    """Edge sequence starting at ``start``; consecutive edges must compose."""

    start: VertexId
    edges: tuple[Edge, ...]
    weight: Weight

    @classmethod
    def empty(cls, context: GeneratorContext, start: VertexId) -> "Path":
        return cls(start, (), context.identity())

    @classmethod
    def of(cls, context: GeneratorContext, start: VertexId, edges: Sequence[Edge]) -> "Path":
        edges = tuple(edges)
        at = start
        w = context.identity()
        for e in edges:
            if e.source != at:
                raise ValueError("edges do not compose at %r" % (at,))
            at = e.target
            w = w * e.weight
        return cls(start, edges, w)

    @property
    def target(self) -> VertexId:
        return self.edges[-1].target if self.edges else self.start

    def __len__(self):
        return len(self.edges)

    def is_loop(self) -> bool:
        return self.target == self.start

    def __mul__(self, other: "Path") -> "Path":
        if other.start != self.target:
            raise ValueError("paths do not compose")
        return Path(self.start, self.edges + other.edges, self.weight * other.weight)

    def reversed_in(self, graph) -> "Path":
        """The conjugate path: reversed edge order, each edge conjugated."""
        rev = tuple(graph.conjugate_edge(e) for e in reversed(self.edges))
        return Path(self.target, rev, self.weight.inverse())

    def edge_ids(self) -> tuple[EdgeId, ...]:
        return tuple(e.eid for e in self.edges)

    def __eq__(self, other):
        if not isinstance(other, Path):
            return NotImplemented
        return self.start == other.start and self.edges == other.edges

    def __hash__(self):
        got = self.__dict__.get("_hash")
        if got is None:
            got = hash((self.start, tuple(e.eid for e in self.edges)))
            object.__setattr__(self, "_hash", got)
        return got

    def __repr__(self):
        return "Path(%r, [%s])" % (self.start, ", ".join(repr(e.eid) for e in self.edges))


Loop = Path


def loop_weight(l: Path) -> Weight:
    """Ordered product of the loop's edge weights."""
    return l.weight


class DeltaGraph:
    """A delta graph given by a pure outgoing-adjacency function.

    ``out_edges_fn(v)`` returns the finite list of outgoing :class:`Edge`
    records of ``v`` in a stable order.  ``frontier(v)`` marks vertices whose
    adjacency is only partially known (boundaries of truncations); such
    vertices are exempt from fairness checks and never expanded past.
    """

    def __init__(
        self,
        delta: float,
        context: GeneratorContext,
        basepoint: VertexId,
        out_edges_fn: Callable[[VertexId], Sequence[Edge]],
        *,
        declared_vertices: Iterable[VertexId] | None = None,
        frontier: Callable[[VertexId], bool] | None = None,
        label: str = "",
    ):
        if not (delta >= 2):
            raise ValueError("delta must be >= 2, got %r" % delta)
        self.delta = float(delta)
        self.context = context
        self.basepoint = basepoint
        self.label = label
        self._fn = out_edges_fn
        self._frontier = frontier
        self.declared_vertices = (
            None if declared_vertices is None else tuple(declared_vertices)
        )
        self._memo: dict[VertexId, tuple[Edge, ...]] = {}

    def out_edges(self, v: VertexId) -> tuple[Edge, ...]:
        got = self._memo.get(v)
        if got is None:
            try:
                got = tuple(self._fn(v))
            except Exception as exc:
                raise GraphConstructionError(
                    "adjacency function failed at vertex %r: %s" % (v, exc)
                ) from exc
            for e in got:
                if e.source != v:
                    raise GraphConstructionError(
                        "edge %r listed at %r has source %r" % (e.eid, v, e.source)
                    )
            self._memo[v] = got
        return got

    def conjugate_edge(self, e: Edge) -> Edge:
        for cand in self.out_edges(e.target):
            if cand.eid == e.conjugate:
                return cand
        raise GraphConstructionError(
            "conjugate %r of edge %r not found at %r" % (e.conjugate, e.eid, e.target)
        )

    def is_frontier(self, v: VertexId) -> bool:
        return bool(self._frontier and self._frontier(v))

    def __repr__(self):
        return "DeltaGraph(%s, delta=%g)" % (self.label or "?", self.delta)


class TruncatedGraph:
    """A finite window onto a delta graph: the ball of a given radius.

    Boundary vertices (at full radius, or sitting on the underlying graph's
    own frontier) have incomplete adjacency and are exempt from fairness.
    """

    def __init__(
        self,
        *,
        delta: float,
        context: GeneratorContext,
        basepoint: VertexId,
        radius: int,
        out: Mapping[VertexId, Sequence[Edge]],
        distance: Mapping[VertexId, int],
        boundary: Iterable[VertexId],
        exhausted: bool = False,
        label: str = "",
    ):
        self.delta = float(delta)
        self.context = context
        self.basepoint = basepoint
        self.radius = int(radius)
        self._out = {v: tuple(es) for v, es in out.items()}
        self.distance = dict(distance)
        self.vertices = tuple(sorted(self._out, key=vid_key))
        self.boundary = frozenset(boundary)
        self.exhausted = exhausted
        self.label = label
        self._edges: dict[EdgeId, Edge] = {}
        for es in self._out.values():
            for e in es:
                if e.eid in self._edges:
                    raise GraphConstructionError("duplicate edge id %r" % (e.eid,))
                self._edges[e.eid] = e

    @property
    def interior(self) -> tuple[VertexId, ...]:
        return tuple(v for v in self.vertices if v not in self.boundary)

    def out_edges(self, v: VertexId) -> tuple[Edge, ...]:
        return self._out[v]

    def edge(self, eid: EdgeId) -> Edge:
        return self._edges[eid]

    def has_edge(self, eid: EdgeId) -> bool:
        return eid in self._edges

    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges[k] for k in sorted(self._edges, key=vid_key))

    def conjugate_edge(self, e: Edge) -> Edge:
        got = self._edges.get(e.conjugate)
        if got is None:
            raise GraphConstructionError(
                "conjugate %r of edge %r not materialized" % (e.conjugate, e.eid)
            )
        return got

    def is_frontier(self, v: VertexId) -> bool:
        return v in self.boundary

    def __contains__(self, v: VertexId) -> bool:
        return v in self._out

    def as_graph(self) -> DeltaGraph:
        """View this truncation as a delta graph (boundary marked as frontier)."""
        out = self._out
        return DeltaGraph(
            self.delta,
            self.context,
            self.basepoint,
            lambda v: out[v],
            declared_vertices=self.vertices,
            frontier=self.boundary.__contains__,
            label=self.label + "|trunc",
        )

    def __repr__(self):
        return "TruncatedGraph(%s, radius=%d, %d vertices)" % (
            self.label or "?",
            self.radius,
            len(self.vertices),
        )


def _as_graph(g) -> DeltaGraph:
    return g.as_graph() if isinstance(g, TruncatedGraph) else g


def ball(g: DeltaGraph | TruncatedGraph, radius: int) -> TruncatedGraph:
    """All vertices within ``radius`` of the basepoint and all edges among them."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    g = _as_graph(g)
    dist = {g.basepoint: 0}
    order = [g.basepoint]
    frontier = [g.basepoint]
    exhausted = False
    for d in range(radius):
        nxt = []
        for v in frontier:
            if g.is_frontier(v):
                continue
            for e in g.out_edges(v):
                if e.target not in dist:
                    dist[e.target] = d + 1
                    order.append(e.target)
                    nxt.append(e.target)
        if not nxt:
            exhausted = True
            break
        frontier = nxt
    else:
        # probe whether anything lies beyond the ball
        exhausted = not any(
            e.target not in dist
            for v in frontier
            if not g.is_frontier(v)
            for e in g.out_edges(v)
        )
    out = {}
    boundary = set()
    for v in order:
        if g.is_frontier(v):
            boundary.add(v)
        elif dist[v] == radius:
            boundary.add(v)
        out[v] = tuple(e for e in g.out_edges(v) if e.target in dist)
    return TruncatedGraph(
        delta=g.delta,
        context=g.context,
        basepoint=g.basepoint,
        radius=radius,
        out=out,
        distance=dist,
        boundary=boundary,
        exhausted=exhausted,
        label=g.label,
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    radius: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)


def validate(g: DeltaGraph | TruncatedGraph, radius: int | None = None) -> ValidationReport:
    """Check the delta-graph axioms on the ball of the given radius.

    Checks: the conjugation involution is well formed, conjugate weight
    products are 1, outgoing weight sums equal delta at interior vertices,
    and (for graphs with a declared finite vertex set) connectivity from the
    basepoint.
    """
    if isinstance(g, TruncatedGraph) and radius is None:
        b = g
        radius = g.radius
        declared = None
    else:
        if radius is None:
            raise ValueError("radius required for a non-truncated graph")
        declared = _as_graph(g).declared_vertices
        b = ball(g, radius)

    inv_bad: list[str] = []
    wprod_bad: list[str] = []
    identity = b.context.identity()
    for e in b.edges():
        if not b.has_edge(e.conjugate):
            inv_bad.append("edge %r has no conjugate %r" % (e.eid, e.conjugate))
            continue
        c = b.edge(e.conjugate)
        if c.source != e.target or c.target != e.source or c.conjugate != e.eid:
            inv_bad.append("edges %r / %r are not a conjugate pair" % (e.eid, c.eid))
            continue
        if c.eid == e.eid and e.source != e.target:
            inv_bad.append("edge %r is self-conjugate but not a self-loop" % (e.eid,))
        if not (e.weight * c.weight).eq(identity):
            wprod_bad.append(
                "w(%r) * w(%r) = %s != 1" % (e.eid, c.eid, (e.weight * c.weight).text())
            )

    fair_bad: list[str] = []
    for v in b.interior:
        total = sum(e.weight.value for e in b.out_edges(v))
        if not b.context.close(total, b.delta):
            fair_bad.append("vertex %r: outgoing sum %.12g != delta %.12g" % (v, total, b.delta))

    conn_bad: list[str] = []
    if declared is not None and b.exhausted:
        seen = set(b.vertices)
        for v in declared:
            if v not in seen:
                conn_bad.append("vertex %r unreachable from basepoint" % (v,))

    checks = (
        CheckResult("involution", not inv_bad, tuple(inv_bad)),
        CheckResult("conjugate-weights", not wprod_bad, tuple(wprod_bad)),
        CheckResult("fairness", not fair_bad, tuple(fair_bad)),
        CheckResult("connectivity", not conn_bad, tuple(conn_bad)),
    )
    return ValidationReport(radius=radius, checks=checks)


@dataclass(frozen=True)
class VertexWeighting:
    """Vertex weights inducing the edge weighting: w(e) = w(target)/w(source)."""

    weights: Mapping[VertexId, Weight]

    def __getitem__(self, v: VertexId) -> Weight:
        return self.weights[v]

    def __contains__(self, v: VertexId) -> bool:
        return v in self.weights

    def items(self):
        return self.weights.items()


@dataclass(frozen=True)
class WeightingResult:
    """Either a vertex weighting, or a witness loop of non-unit weight."""

    weighting: VertexWeighting | None
    witness: Path | None

    def __bool__(self):
        return self.weighting is not None


def vertex_weighting(
    g: DeltaGraph | TruncatedGraph, radius: int | None = None
) -> WeightingResult:
    """Assign w(basepoint)=1 and extend along edges; detect inconsistency.

    The graph is tracial on the ball exactly when the assignment is
    consistent; otherwise the result carries a based loop of weight != 1.
    """
    b = g if isinstance(g, TruncatedGraph) and radius is None else ball(g, radius)
    ctx = b.context
    w: dict[VertexId, Weight] = {b.basepoint: ctx.identity()}
    tree: dict[VertexId, Path] = {b.basepoint: Path.empty(ctx, b.basepoint)}
    queue = deque([b.basepoint])
    inconsistent: Edge | None = None
    while queue and inconsistent is None:
        v = queue.popleft()
        for e in b.out_edges(v):
            expected = w[v] * e.weight
            got = w.get(e.target)
            if got is None:
                w[e.target] = expected
                tree[e.target] = Path(
                    b.basepoint, tree[v].edges + (e,), expected
                )
                queue.append(e.target)
            elif not got.eq(expected):
                inconsistent = e
                break
    if inconsistent is None:
        return WeightingResult(VertexWeighting(dict(w)), None)
    e = inconsistent
    witness = tree[e.source] * Path(e.source, (e,), e.weight) * tree[e.target].reversed_in(b)
    return WeightingResult(None, witness)


def enumerate_loops(g: DeltaGraph | TruncatedGraph, n: int) -> tuple[Path, ...]:
    """Every based loop of length exactly ``n``, lexicographic by edge ids."""
    if n < 0:
        raise ValueError("loop length must be nonnegative")
    graph = _as_graph(g)
    ctx = graph.context
    if n == 0:
        return (Path.empty(ctx, graph.basepoint),)
    b = ball(graph, (n + 1) // 2)
    dist = b.distance
    loops: list[Path] = []
    stack: list[Edge] = []

    def walk(v: VertexId, remaining: int):
        if remaining == 0:
            if v == graph.basepoint:
                loops.append(Path.of(ctx, graph.basepoint, tuple(stack)))
            return
        for e in sorted(b.out_edges(v), key=lambda e: vid_key(e.eid)):
            d = dist.get(e.target)
            if d is None or d > remaining - 1:
                continue
            stack.append(e)
            walk(e.target, remaining - 1)
            stack.pop()

    walk(graph.basepoint, n)
    return tuple(loops)
