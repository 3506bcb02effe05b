"""Group actions on tracial graphs, quotients, and recovery from the cover.

An action is given by generators, each a label, a weight h, and a vertex map
satisfying w(h.v) = h * w(v) and preserving weighted adjacency.  The quotient
collapses vertices to orbits, keeping one outgoing edge per base edge of a
fixed representative; it is generally non-tracial, and its tracial cover is
the original graph.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Mapping

from .cover import tracial_cover
from .graph import (
    DeltaGraph,
    Edge,
    NonTracialGraphError,
    TruncatedGraph,
    VertexId,
    ball,
    vertex_weighting,
    vid_key,
)
from .weights import Weight


class ActionError(ValueError):
    """The supplied vertex maps are not a weight-scaling graph action."""


@dataclass(frozen=True)
class ActionGenerator:
    """One group generator: its weight and its action on vertex ids.

    ``act(v)`` returns the image vertex, or None where the action is unknown
    (outside a finite table, or past the materializable region).
    """

    label: str
    weight: Weight
    act: Callable[[VertexId], VertexId | None]
    shift_by: object = None  # set for built-in translations; serialization hint
    table: tuple[tuple[VertexId, VertexId], ...] | None = None


@dataclass(frozen=True)
class GraphAction:
    generators: tuple[ActionGenerator, ...]

    def generator(self, label: str) -> ActionGenerator:
        for g in self.generators:
            if g.label == label:
                return g
        raise KeyError(label)


@dataclass(frozen=True)
class ActionReport:
    passed: bool
    failures: tuple[str, ...]
    checked: int
    skipped: int  # vertex/edge checks that were inconclusive at this radius


@dataclass(frozen=True)
class Orbit:
    """An orbit of the action within a ball, labeled by its minimal-weight
    member; the representative is the minimal-weight interior member (None
    when the orbit only touches the boundary)."""

    label: VertexId
    members: tuple[VertexId, ...]
    representative: VertexId | None


def _forward_map(gen: ActionGenerator, b: TruncatedGraph) -> dict:
    fwd = {}
    for v in b.vertices:
        img = gen.act(v)
        if img is not None:
            fwd[v] = img
    return fwd


def check_action(
    g: DeltaGraph | TruncatedGraph, action: GraphAction, radius: int
) -> ActionReport:
    """Verify weight scaling and adjacency preservation on the ball.

    Images outside the materialized ball are counted as skipped, not failed;
    a unit-weight generator acting nontrivially is rejected outright.
    """
    b = ball(g, radius)
    wr = vertex_weighting(b)
    if not wr:
        raise NonTracialGraphError(
            "action checks need a tracial graph; witness loop of weight %s"
            % wr.witness.weight.text(),
            wr.witness,
        )
    wv = wr.weighting
    failures: list[str] = []
    checked = 0
    skipped = 0
    for gen in action.generators:
        fwd = _forward_map(gen, b)
        images = [v2 for v2 in fwd.values() if v2 in b]
        if len(set(images)) != len(images):
            failures.append("generator %s is not injective on the ball" % gen.label)
        if gen.weight.is_identity() and any(v != v2 for v, v2 in fwd.items()):
            failures.append(
                "generator %s has unit weight but acts nontrivially" % gen.label
            )
        for v in sorted(fwd, key=vid_key):
            img = fwd[v]
            if img not in b:
                skipped += 1
                continue
            checked += 1
            if not wv[img].eq(gen.weight * wv[v]):
                failures.append(
                    "generator %s: w(%r) = %s but %s * w(%r) = %s"
                    % (
                        gen.label,
                        img,
                        wv[img].text(),
                        gen.weight.text(),
                        v,
                        (gen.weight * wv[v]).text(),
                    )
                )
        # adjacency: compare full out-edge weight classes at interior pairs
        for u in sorted(b.interior, key=vid_key):
            iu = fwd.get(u)
            if iu is None or iu not in b or iu in b.boundary:
                skipped += 1
                continue
            by_target: dict = {}
            for e in b.out_edges(u):
                by_target.setdefault(e.target, []).append(e)
            for t, edges in by_target.items():
                it = fwd.get(t)
                if it is None or it not in b:
                    skipped += 1
                    continue
                checked += 1
                img_edges = [e for e in b.out_edges(iu) if e.target == it]
                if not _weight_multisets_equal(edges, img_edges):
                    failures.append(
                        "generator %s does not preserve the edges %r -> %r"
                        % (gen.label, u, t)
                    )
    return ActionReport(not failures, tuple(failures), checked, skipped)


def _weight_multisets_equal(e1, e2) -> bool:
    if len(e1) != len(e2):
        return False
    remaining = list(e2)
    for e in e1:
        for i, f in enumerate(remaining):
            if e.weight.eq(f.weight):
                del remaining[i]
                break
        else:
            return False
    return True


def _orbits(b: TruncatedGraph, action: GraphAction):
    """Partition ball vertices into orbits, closing under generators and
    their inverses but never stepping outside the ball."""
    maps = []
    for gen in action.generators:
        fwd = {v: w for v, w in _forward_map(gen, b).items() if w in b}
        inv = {}
        for v, w in fwd.items():
            if w in inv:
                raise ActionError("generator %s not invertible on the ball" % gen.label)
            inv[w] = v
        maps.append(fwd)
        maps.append(inv)
    assigned: dict[VertexId, int] = {}
    orbits: list[list[VertexId]] = []
    for v in b.vertices:
        if v in assigned:
            continue
        idx = len(orbits)
        members = [v]
        assigned[v] = idx
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for m in maps:
                w = m.get(u)
                if w is not None and w not in assigned:
                    assigned[w] = idx
                    members.append(w)
                    queue.append(w)
        orbits.append(members)
    return orbits, assigned


def orbit_partition(
    g: DeltaGraph | TruncatedGraph, action: GraphAction, radius: int
) -> tuple[Orbit, ...]:
    """The orbits of the action on the ball; members must carry pairwise
    distinct vertex weights (a unit-weight element acting freely would
    merge them, and such actions are rejected)."""
    b = ball(g, radius)
    wr = vertex_weighting(b)
    if not wr:
        raise NonTracialGraphError(
            "orbit computation needs a tracial graph", wr.witness
        )
    wv = wr.weighting
    orbit_lists, _ = _orbits(b, action)
    orbits = []
    for members in orbit_lists:
        for m1 in members:
            for m2 in members:
                if m1 is not m2 and wv[m1].eq(wv[m2]):
                    raise ActionError(
                        "orbit members %r and %r share weight %s"
                        % (m1, m2, wv[m1].text())
                    )
        key = lambda m: (wv[m].value, vid_key(m))
        inner = [m for m in members if m not in b.boundary]
        orbits.append(
            Orbit(
                min(members, key=key),
                tuple(sorted(members, key=vid_key)),
                min(inner, key=key) if inner else None,
            )
        )
    return tuple(orbits)


def quotient(
    g: DeltaGraph | TruncatedGraph, action: GraphAction, radius: int
) -> TruncatedGraph:
    """Collapse a tracial graph to orbits of the action.

    One vertex per orbit meeting the ball, labeled by its minimal-weight
    member; outgoing edges copied from a minimal-weight interior member.
    Orbits with no interior member become boundary vertices.
    """
    report = check_action(g, action, radius)
    if not report.passed:
        raise ActionError("action check failed: " + "; ".join(report.failures))
    b = ball(g, radius)
    orbits = orbit_partition(g, action, radius)
    assigned = {m: orb for orb in orbits for m in orb.members}

    raw: list[dict] = []
    for orb in orbits:
        if orb.representative is None:
            continue
        for e in b.out_edges(orb.representative):
            raw.append(
                {
                    "eid": e.eid,
                    "source": orb.label,
                    "target": assigned[e.target].label,
                    "weight": e.weight,
                }
            )
    boundary = {orb.label for orb in orbits if orb.representative is None}
    edges = _pair_conjugates(raw, boundary)

    out: dict[VertexId, list[Edge]] = {orb.label: [] for orb in orbits}
    for e in edges:
        out[e.source].append(e)
    bp = assigned[b.basepoint].label
    dist = _bfs_distances(out, bp)
    return TruncatedGraph(
        delta=b.delta,
        context=b.context,
        basepoint=bp,
        radius=radius,
        out=out,
        distance=dist,
        boundary=boundary,
        exhausted=True,
        label=(b.label + "|quotient") if b.label else "quotient",
    )


def _bfs_distances(out: Mapping, start) -> dict:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for e in out[v]:
            if e.target not in dist:
                dist[e.target] = dist[v] + 1
                queue.append(e.target)
    for v in out:
        dist.setdefault(v, len(dist))
    return dist


def _pair_conjugates(raw: list[dict], boundary: set) -> list[Edge]:
    """Assign conjugates within (endpoint pair, weight class); reverse edges
    at boundary vertices (which emit none of their own) are synthesized.

    Only interior vertices emit records, so a missing partner class is legal
    exactly when the target is a boundary vertex.
    """

    def take(source, target, weight: Weight) -> list[dict]:
        got = []
        for r in raw:
            if r.get("_used"):
                continue
            if r["source"] == source and r["target"] == target and r["weight"].eq(weight):
                r["_used"] = True
                got.append(r)
        return got

    edges: list[Edge] = []
    for r in sorted(raw, key=lambda r: vid_key(r["eid"])):
        if r.get("_used"):
            continue
        s, t, w = r["source"], r["target"], r["weight"]
        winv = w.inverse()
        members = take(s, t, w)
        members.sort(key=lambda m: vid_key(m["eid"]))
        if s == t and w.eq(winv):
            # weight-1 self-loops pair among themselves; odd middle one
            # becomes self-conjugate
            k = len(members)
            for a in range(k):
                m, p = members[a], members[k - 1 - a]
                edges.append(Edge(m["eid"], s, s, m["weight"], p["eid"]))
            continue
        partners = take(t, s, winv)
        if not partners and t in boundary:
            partners = [
                {"eid": ("rev", m["eid"]), "source": t, "target": s, "weight": winv}
                for m in members
            ]
        if len(partners) != len(members):
            raise ActionError(
                "edge classes %r -> %r do not pair under conjugation" % (s, t)
            )
        partners.sort(key=lambda p: vid_key(p["eid"]))
        for m, p in zip(members, partners):
            edges.append(Edge(m["eid"], s, t, m["weight"], p["eid"]))
            edges.append(Edge(p["eid"], t, s, p["weight"], m["eid"]))
    return edges


def recover(g: DeltaGraph | TruncatedGraph, radius: int) -> TruncatedGraph:
    """Rebuild a graph from its tracial cover.

    The loop-weight group acts on the cover by rescaling the path-class
    weight, and its orbits are exactly the path-class targets; collapsing
    cover vertices by target therefore reproduces the original graph up to
    basepoint isomorphism.
    """
    cov, _ = tracial_cover(g, radius)
    groups: dict[VertexId, list] = {}
    for cv in cov.vertices:
        groups.setdefault(cv.target, []).append(cv)

    reps: dict[VertexId, object] = {}
    boundary = set()
    dist = {}
    for v, members in groups.items():
        dist[v] = min(cov.distance[cv] for cv in members)
        inner = [cv for cv in members if cv not in cov.boundary]
        if inner:
            reps[v] = min(inner, key=lambda cv: (cov.distance[cv], vid_key(cv)))
        else:
            boundary.add(v)

    out: dict[VertexId, list[Edge]] = {v: [] for v in groups}
    emitted: dict = {}
    for v in sorted(reps, key=vid_key):
        for ce in cov.out_edges(reps[v]):
            base_eid = ce.eid[1]
            conj_eid = ce.conjugate[1]
            e = Edge(base_eid, v, ce.target.target, ce.weight, conj_eid)
            out[v].append(e)
            emitted[base_eid] = e
    # conjugates landing on boundary targets are not emitted there; add them
    for v in sorted(reps, key=vid_key):
        for e in list(out[v]):
            if e.conjugate not in emitted:
                if e.target not in boundary:
                    raise AssertionError(
                        "missing conjugate %r at interior vertex %r" % (e.conjugate, e.target)
                    )
                rev = Edge(e.conjugate, e.target, v, e.weight.inverse(), e.eid)
                out[e.target].append(rev)
                emitted[rev.eid] = rev
    return TruncatedGraph(
        delta=cov.delta,
        context=cov.context,
        basepoint=cov.basepoint.target,
        radius=radius,
        out=out,
        distance=dist,
        boundary=boundary,
        exhausted=False,
        label=(cov.label + "|recovered"),
    )
