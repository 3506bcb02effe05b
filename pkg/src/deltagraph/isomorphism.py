"""Basepoint-aware isomorphism testing of truncated graphs.

Backtracking search over a BFS ordering with weight-signature pruning; no
canonical labeling.  Two truncations are isomorphic when a vertex bijection
induces an edge bijection preserving source, target, weight, conjugation and
boundary flags.
"""
from __future__ import annotations

from collections import deque

from .graph import Edge, TruncatedGraph, VertexId, vid_key


def interior_restriction(t: TruncatedGraph) -> TruncatedGraph:
    """The subgraph induced on interior (non-boundary) vertices."""
    keep = set(t.interior)
    if t.basepoint not in keep:
        raise ValueError("basepoint is on the boundary; nothing to restrict to")
    out = {
        v: tuple(e for e in t.out_edges(v) if e.target in keep) for v in keep
    }
    return TruncatedGraph(
        delta=t.delta,
        context=t.context,
        basepoint=t.basepoint,
        radius=t.radius,
        out=out,
        distance={v: t.distance[v] for v in keep},
        boundary=(),
        exhausted=True,
        label=t.label + "|interior",
    )


def _is_exact(t: TruncatedGraph) -> bool:
    return all(e.weight.is_exact for e in t.edges())


def _weq(w1, w2) -> bool:
    """Weight equality that also works across generator contexts, where it
    falls back to a value comparison at the tighter tolerance."""
    if w1.context == w2.context:
        return w1.eq(w2)
    tol = min(w1.context.tolerance, w2.context.tolerance)
    return abs(w1.value - w2.value) <= tol * max(w1.value, w2.value)


def _signature(t: TruncatedGraph, v: VertexId, exact: bool):
    es = t.out_edges(v)
    if exact:
        return (v in t.boundary, tuple(sorted(e.weight.key() for e in es)))
    return (v in t.boundary, len(es))


def _classes(edges: tuple[Edge, ...]) -> list[tuple[Edge, list[Edge]]]:
    """Group edges into weight classes using tolerance-aware equality."""
    out: list[tuple[Edge, list[Edge]]] = []
    for e in edges:
        for rep, members in out:
            if rep.weight.eq(e.weight):
                members.append(e)
                break
        else:
            out.append((e, [e]))
    return out


def _pair_counts_match(t1: TruncatedGraph, u, m, t2: TruncatedGraph, v, w) -> bool:
    """Edges u->m in t1 must match edges v->w in t2, classwise by weight."""
    e1 = tuple(e for e in t1.out_edges(u) if e.target == m)
    e2 = tuple(e for e in t2.out_edges(v) if e.target == w)
    if len(e1) != len(e2):
        return False
    if not e1:
        return True
    c1 = _classes(e1)
    c2 = list(_classes(e2))
    for rep, members in c1:
        for i, (rep2, members2) in enumerate(c2):
            if _weq(rep.weight, rep2.weight):
                if len(members) != len(members2):
                    return False
                if u == m:
                    # self-loop class: self-conjugate counts must agree
                    f1 = sum(1 for e in members if e.conjugate == e.eid)
                    f2 = sum(1 for e in members2 if e.conjugate == e.eid)
                    if f1 != f2:
                        return False
                del c2[i]
                break
        else:
            return False
    return not c2


def _bfs_order(t: TruncatedGraph):
    """Vertices in BFS order with the tree edge used to reach each of them."""
    order: list[VertexId] = [t.basepoint]
    parent: dict[VertexId, Edge] = {}
    seen = {t.basepoint}
    queue = deque([t.basepoint])
    while queue:
        v = queue.popleft()
        for e in sorted(t.out_edges(v), key=lambda e: vid_key(e.eid)):
            if e.target not in seen:
                seen.add(e.target)
                parent[e.target] = e
                order.append(e.target)
                queue.append(e.target)
    if len(order) != len(t.vertices):
        raise ValueError("iso_check requires truncations connected from the basepoint")
    return order, parent


def iso_check(
    g1: TruncatedGraph,
    g2: TruncatedGraph,
    fix_basepoint: bool = True,
    *,
    interior_only: bool = False,
) -> dict | None:
    """Vertex bijection inducing a weight/conjugation-preserving edge bijection.

    Returns the mapping g1 -> g2, or None.  With ``interior_only`` both sides
    are first restricted to their interior-induced subgraphs.
    """
    if g1.radius != g2.radius:
        raise ValueError("truncations have different radii (%d vs %d)" % (g1.radius, g2.radius))
    if interior_only:
        g1 = interior_restriction(g1)
        g2 = interior_restriction(g2)
    if len(g1.vertices) != len(g2.vertices):
        return None
    if len(g1.edges()) != len(g2.edges()):
        return None
    exact = _is_exact(g1) and _is_exact(g2) and g1.context == g2.context
    sig2: dict = {}
    for v in g2.vertices:
        sig2.setdefault(_signature(g2, v, exact), []).append(v)
    for v in g1.vertices:
        if _signature(g1, v, exact) not in sig2:
            return None

    order, parent = _bfs_order(g1)

    def compatible(u, v, mapping) -> bool:
        if (u in g1.boundary) != (v in g2.boundary):
            return False
        if _signature(g1, u, exact) != _signature(g2, v, exact):
            return False
        if not _pair_counts_match(g1, u, u, g2, v, v):
            return False
        for m, w in mapping.items():
            if not _pair_counts_match(g1, u, m, g2, v, w):
                return False
            if not _pair_counts_match(g1, m, u, g2, w, v):
                return False
        return True

    if fix_basepoint:
        roots = [g2.basepoint]
    else:
        roots = list(g2.vertices)

    def extend(idx: int, mapping: dict, used: set) -> dict | None:
        if idx == len(order):
            return dict(mapping)
        u = order[idx]
        e = parent[u]
        p_img = mapping[e.source]
        cands = []
        for e2 in g2.out_edges(p_img):
            if e2.target in used or not _weq(e2.weight, e.weight):
                continue
            if e2.target not in cands:
                cands.append(e2.target)
        for v in sorted(cands, key=vid_key):
            if compatible(u, v, mapping):
                mapping[u] = v
                used.add(v)
                got = extend(idx + 1, mapping, used)
                if got is not None:
                    return got
                del mapping[u]
                used.remove(v)
        return None

    for root in sorted(roots, key=vid_key):
        if not compatible(order[0], root, {}):
            continue
        got = extend(1, {order[0]: root}, {root})
        if got is not None:
            return got
    return None
