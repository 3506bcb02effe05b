"""Tracial covers: the path graph, the cover construction, and loop lifting.

The tracial cover of a delta graph has one vertex per equivalence class of
based paths under "same target, same total weight".  It is always tracial,
and weight-1 based loops of the original graph lift bijectively to based
loops of the cover.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .graph import (
    DeltaGraph,
    Edge,
    Path,
    TruncatedGraph,
    VertexWeighting,
    _as_graph,
    enumerate_loops,
    vid_key,
)
from .weights import Weight, reduce_generators


class LoopLiftError(ValueError):
    """A loop of non-unit weight cannot be lifted to the tracial cover."""

    def __init__(self, weight: Weight):
        super().__init__("loop has non-unit weight %s" % weight.text())
        self.weight = weight


@dataclass(frozen=True)
class CoverVertex:
    """A class of based paths: common target vertex and common total weight."""

    target: object
    weight: Weight

    def _vid_key_(self):
        return ("cv", self.weight.key(), vid_key(self.target))

    def __repr__(self):
        return "[%s, %r]" % (self.weight.text(), self.target)


class CoverResult(NamedTuple):
    graph: TruncatedGraph
    weighting: VertexWeighting


class _Interner:
    """Canonicalizes cover vertices; float weights are bucketed on log(value).

    The exact identity at the root is registered in both branches: in a
    float-weighted graph every loop returns to the basepoint with a float
    weight near 1 and must land on the root, not split it.
    """

    def __init__(self, tolerance: float):
        self.tolerance = tolerance
        self.known: set[CoverVertex] = set()
        self.buckets: dict[object, list[tuple[float, CoverVertex]]] = {}

    def root(self, target, weight: Weight) -> CoverVertex:
        cv = CoverVertex(target, weight)
        self.known.add(cv)
        self.buckets.setdefault(target, []).append((math.log(weight.value), cv))
        return cv

    def get(self, target, weight: Weight, create: bool) -> CoverVertex | None:
        if weight.is_exact:
            cv = CoverVertex(target, weight)
            if cv in self.known:
                return cv
            if create:
                self.known.add(cv)
                return cv
            return None
        lw = math.log(weight.value)
        bucket = self.buckets.setdefault(target, [])
        for lv, cv in bucket:
            if abs(lw - lv) <= self.tolerance:
                return cv
        if not create:
            return None
        cv = CoverVertex(target, weight)
        bucket.append((lw, cv))
        self.known.add(cv)
        return cv


def tracial_cover(g: DeltaGraph | TruncatedGraph, radius: int) -> CoverResult:
    """BFS construction of the cover out to the given radius.

    Returns the cover as a truncated graph over :class:`CoverVertex` ids,
    together with its canonical vertex weighting (the path-class weight).
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    g = _as_graph(g)
    ctx = g.context
    intern = _Interner(ctx.tolerance)
    root = intern.root(g.basepoint, ctx.identity())
    depth: dict[CoverVertex, int] = {root: 0}
    order = [root]
    out: dict[CoverVertex, list[Edge]] = {root: []}
    frontier = [root]
    for d in range(radius):
        nxt = []
        for cv in frontier:
            if g.is_frontier(cv.target):
                continue
            for e in g.out_edges(cv.target):
                cv2 = intern.get(e.target, cv.weight * e.weight, create=True)
                if cv2 not in depth:
                    depth[cv2] = d + 1
                    order.append(cv2)
                    out[cv2] = []
                    nxt.append(cv2)
                out[cv].append(
                    Edge((cv, e.eid), cv, cv2, e.weight, (cv2, e.conjugate))
                )
        if not nxt:
            break
        frontier = nxt
    # unexpanded states still get their edges into already-known states, so
    # the conjugation involution closes inside the truncation
    boundary = set()
    for cv in order:
        if depth[cv] < radius and not g.is_frontier(cv.target):
            continue
        boundary.add(cv)
        for e in g.out_edges(cv.target):
            cv2 = intern.get(e.target, cv.weight * e.weight, create=False)
            if cv2 is not None and cv2 in depth:
                out[cv].append(
                    Edge((cv, e.eid), cv, cv2, e.weight, (cv2, e.conjugate))
                )
    cover = TruncatedGraph(
        delta=g.delta,
        context=ctx,
        basepoint=root,
        radius=radius,
        out=out,
        distance=depth,
        boundary=boundary,
        exhausted=False,
        label=(g.label + "|cover") if g.label else "cover",
    )
    nu = VertexWeighting({cv: cv.weight for cv in order})
    return CoverResult(cover, nu)


def path_graph(g: DeltaGraph | TruncatedGraph, radius: int) -> TruncatedGraph:
    """The based-path tree: one vertex per based path of length <= radius.

    An edge joins p to p*e with weight w(e).  Conjugate ids point at the
    extension by the conjugate edge, so conjugation closes only after passing
    to the path-class quotient; fairness holds at every interior vertex.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    g = _as_graph(g)
    targets: dict[tuple, object] = {(): g.basepoint}
    out: dict[tuple, list[Edge]] = {(): []}
    depth: dict[tuple, int] = {(): 0}
    order: list[tuple] = [()]
    level: list[tuple] = [()]
    boundary: set[tuple] = set()
    for d in range(radius):
        nxt = []
        for pid in level:
            tgt = targets[pid]
            if g.is_frontier(tgt):
                boundary.add(pid)
                continue
            for e in g.out_edges(tgt):
                pid2 = pid + (e.eid,)
                targets[pid2] = e.target
                depth[pid2] = d + 1
                out[pid2] = []
                order.append(pid2)
                nxt.append(pid2)
                out[pid].append(
                    Edge((pid, e.eid), pid, pid2, e.weight, (pid2, e.conjugate))
                )
        level = nxt
    boundary.update(pid for pid in order if depth[pid] == radius)
    return TruncatedGraph(
        delta=g.delta,
        context=g.context,
        basepoint=(),
        radius=radius,
        out=out,
        distance=depth,
        boundary=boundary,
        exhausted=False,
        label=(g.label + "|paths") if g.label else "paths",
    )


def lift_loop(
    g: DeltaGraph | TruncatedGraph,
    l: Path,
    cover: TruncatedGraph | None = None,
) -> Path:
    """Trace a weight-1 based loop through the tracial cover.

    The lift is injective on weight-1 loops and multiplicative under
    concatenation; loops of non-unit weight are rejected.
    """
    g = _as_graph(g)
    ctx = g.context
    if not l.weight.eq(ctx.identity()):
        raise LoopLiftError(l.weight)
    if cover is None:
        cover = tracial_cover(g, max(len(l), 1)).graph
    cv = cover.basepoint
    edges = []
    for e in l.edges:
        try:
            ce = cover.edge((cv, e.eid))
        except KeyError:
            raise ValueError(
                "cover of radius %d too small to trace the loop" % cover.radius
            ) from None
        edges.append(ce)
        cv = ce.target
    if cv != cover.basepoint:
        raise AssertionError("weight-1 loop failed to close in the cover")
    return Path(cover.basepoint, tuple(edges), ctx.identity())


@dataclass(frozen=True)
class LoopWeightGroup:
    """Generators found for the group of based-loop weights.

    A depth-bounded lower approximation: only loops of length <= search_depth
    were examined, and no completeness claim is made.
    """

    generators: tuple[Weight, ...]
    search_depth: int

    def is_trivial(self) -> bool:
        return not self.generators


def loop_weight_group(g: DeltaGraph | TruncatedGraph, max_len: int) -> LoopWeightGroup:
    """Collect non-unit loop weights up to max_len and reduce to generators."""
    g = _as_graph(g)
    ctx = g.context
    identity = ctx.identity()
    weights = []
    for n in range(1, max_len + 1):
        for l in enumerate_loops(g, n):
            if not l.weight.eq(identity):
                weights.append(l.weight)
    return LoopWeightGroup(reduce_generators(weights, ctx), max_len)
