"""Constructors for the standard example graphs and their built-in actions.

Chains, grids and Cayley graphs of free abelian groups are procedural
(infinite, materialized on demand); cycles are finite.  The deformed chain
carries float weights and is the one family where all comparisons are
tolerance-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .actions import ActionGenerator, GraphAction
from .graph import DeltaGraph, Edge
from .weights import GeneratorContext

DEFAULT_TOLERANCE = 1e-9


def single_chain(q: float, *, name: str = "q", tolerance: float = DEFAULT_TOLERANCE) -> DeltaGraph:
    """Bi-infinite chain on the integers: weight q rightward, 1/q leftward."""
    q = float(q)
    if q <= 0 or q == 1.0:
        raise ValueError("single_chain needs q > 0, q != 1 (so that delta > 2)")
    ctx = GeneratorContext(((name, q),), tolerance)
    wq = ctx.gen(name)
    wqi = wq.inverse()

    def out(m: int):
        return (
            Edge(("l", m), m, m - 1, wqi, ("r", m - 1)),
            Edge(("r", m), m, m + 1, wq, ("l", m + 1)),
        )

    return DeltaGraph(q + 1 / q, ctx, 0, out, label="single_chain(q=%g)" % q)


def double_chain(
    a: float, b: float, *, names: tuple[str, str] = ("a", "b"), tolerance: float = DEFAULT_TOLERANCE
) -> DeltaGraph:
    """Chain on the integers with two parallel edge families of weights a, b."""
    a, b = float(a), float(b)
    delta = a + 1 / a + b + 1 / b
    if a <= 0 or b <= 0 or delta <= 4:
        raise ValueError("double_chain needs a, b > 0 with a + 1/a + b + 1/b > 4")
    na, nb = names
    ctx = GeneratorContext(((na, a), (nb, b)), tolerance)
    wa, wb = ctx.gen(na), ctx.gen(nb)
    wai, wbi = wa.inverse(), wb.inverse()

    def out(m: int):
        return (
            Edge(("a-", m), m, m - 1, wai, ("a+", m - 1)),
            Edge(("a+", m), m, m + 1, wa, ("a-", m + 1)),
            Edge(("b-", m), m, m - 1, wbi, ("b+", m - 1)),
            Edge(("b+", m), m, m + 1, wb, ("b-", m + 1)),
        )

    return DeltaGraph(delta, ctx, 0, out, label="double_chain(a=%g,b=%g)" % (a, b))


def cayley(
    weights: Sequence[float],
    *,
    names: Sequence[str] | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    label: str | None = None,
) -> DeltaGraph:
    """Cayley graph of Z^k with one generator per weight.

    Vertices are integer k-tuples; the edge along +e_i carries weight
    phi_i, its conjugate 1/phi_i, so the weighting is constant on each
    generator's edge class.
    """
    phis = tuple(float(w) for w in weights)
    if not phis or any(w <= 0 for w in phis):
        raise ValueError("cayley needs at least one positive generator weight")
    k = len(phis)
    if names is None:
        names = tuple("g%d" % (i + 1) for i in range(k))
    names = tuple(names)
    ctx = GeneratorContext(tuple(zip(names, phis)), tolerance)
    gens = [ctx.gen(n) for n in names]
    invs = [w.inverse() for w in gens]

    def out(v: tuple):
        edges = []
        for i in range(k):
            up = v[:i] + (v[i] + 1,) + v[i + 1 :]
            dn = v[:i] + (v[i] - 1,) + v[i + 1 :]
            edges.append(Edge(("m%d" % i, v), v, dn, invs[i], ("p%d" % i, dn)))
            edges.append(Edge(("p%d" % i, v), v, up, gens[i], ("m%d" % i, up)))
        return tuple(edges)

    delta = sum(w + 1 / w for w in phis)
    return DeltaGraph(
        delta, ctx, (0,) * k, out, label=label or "cayley(%s)" % ",".join("%g" % w for w in phis)
    )


def grid(a: float, b: float, *, tolerance: float = DEFAULT_TOLERANCE) -> DeltaGraph:
    """Z^2 lattice with horizontal weight a and vertical weight b."""
    return cayley(
        (a, b), names=("a", "b"), tolerance=tolerance, label="grid(a=%g,b=%g)" % (a, b)
    )


def cycle(n: int, q: float, *, name: str = "q", tolerance: float = DEFAULT_TOLERANCE) -> DeltaGraph:
    """Finite n-cycle, weight q forward and 1/q backward.

    With q = 1 all weights are the unit weight (the graph is tracial).
    """
    n = int(n)
    q = float(q)
    if n < 1 or q <= 0:
        raise ValueError("cycle needs n >= 1 and q > 0")
    if q == 1.0:
        ctx = GeneratorContext((), tolerance)
        wq = ctx.identity()
    else:
        ctx = GeneratorContext(((name, q),), tolerance)
        wq = ctx.gen(name)
    wqi = wq.inverse()

    def out(i: int):
        return (
            Edge(("b", i), i, (i - 1) % n, wqi, ("f", (i - 1) % n)),
            Edge(("f", i), i, (i + 1) % n, wq, ("b", (i + 1) % n)),
        )

    return DeltaGraph(
        q + 1 / q,
        ctx,
        0,
        out,
        declared_vertices=range(n),
        label="cycle(n=%d,q=%g)" % (n, q),
    )


def deformed_chain(q: float, x: float, *, tolerance: float = DEFAULT_TOLERANCE) -> DeltaGraph:
    """Chain with site-dependent float weights f(m+1)/f(m), f(m) = q^(x+m) + q^-(x+m).

    The outgoing sums telescope to q + 1/q at every vertex, so the graph is
    fair within floating-point tolerance; all equality here is approximate.
    """
    q, x = float(q), float(x)
    if q <= 0 or q == 1.0:
        raise ValueError("deformed_chain needs q > 0, q != 1")
    ctx = GeneratorContext((), tolerance)

    def f(m: int) -> float:
        return q ** (x + m) + q ** -(x + m)

    def out(m: int):
        fm = f(m)
        return (
            Edge(("l", m), m, m - 1, ctx.float_weight(f(m - 1) / fm), ("r", m - 1)),
            Edge(("r", m), m, m + 1, ctx.float_weight(f(m + 1) / fm), ("l", m + 1)),
        )

    return DeltaGraph(q + 1 / q, ctx, 0, out, label="deformed_chain(q=%g,x=%g)" % (q, x))


def chain_shift_action(g: DeltaGraph, steps: int, label: str = "s") -> GraphAction:
    """Translation by ``steps`` on an integer chain; weight q^steps."""
    steps = int(steps)
    name = g.context.names[0]
    h = g.context.gen(name, steps)
    return GraphAction(
        (
            ActionGenerator(label, h, lambda v: v + steps, shift_by=steps),
        )
    )


def lattice_shift_action(g: DeltaGraph, vec: Sequence[int], label: str = "t") -> GraphAction:
    """Translation by an integer vector on a Cayley/grid graph; weight
    is the product of generator weights along the vector."""
    vec = tuple(int(c) for c in vec)
    h = g.context.exact({n: c for n, c in zip(g.context.names, vec)})
    return GraphAction(
        (
            ActionGenerator(
                label,
                h,
                lambda v: tuple(a + b for a, b in zip(v, vec)),
                shift_by=vec,
            ),
        )
    )


@dataclass(frozen=True)
class GraphSpec:
    """A builder name with parameters, the CLI's notion of a graph source."""

    variant: str
    params: Mapping[str, float] = field(default_factory=dict)


_VARIANTS = ("single_chain", "double_chain", "grid", "cycle", "cayley", "deformed_chain")


def build(spec: GraphSpec) -> DeltaGraph:
    """Instantiate a builder from a spec; raises on out-of-domain parameters."""
    v = spec.variant
    p = dict(spec.params)
    try:
        if v == "single_chain":
            return single_chain(p.pop("q"), tolerance=p.pop("tolerance", DEFAULT_TOLERANCE))
        if v == "double_chain":
            return double_chain(
                p.pop("a"), p.pop("b"), tolerance=p.pop("tolerance", DEFAULT_TOLERANCE)
            )
        if v == "grid":
            return grid(p.pop("a"), p.pop("b"), tolerance=p.pop("tolerance", DEFAULT_TOLERANCE))
        if v == "cycle":
            return cycle(
                int(p.pop("n")), p.pop("q"), tolerance=p.pop("tolerance", DEFAULT_TOLERANCE)
            )
        if v == "cayley":
            k = int(p.pop("k"))
            ws = [p.pop("w%d" % (i + 1)) for i in range(k)]
            return cayley(ws, tolerance=p.pop("tolerance", DEFAULT_TOLERANCE))
        if v == "deformed_chain":
            return deformed_chain(
                p.pop("q"), p.pop("x"), tolerance=p.pop("tolerance", DEFAULT_TOLERANCE)
            )
    except KeyError as exc:
        raise ValueError("builder %s is missing parameter %s" % (v, exc)) from exc
    raise ValueError("unknown builder %r (have: %s)" % (v, ", ".join(_VARIANTS)))


def spec_from_text(text: str) -> GraphSpec:
    """Parse ``name:key=value,key=value`` into a GraphSpec."""
    variant, _, rest = text.partition(":")
    variant = variant.strip()
    if variant not in _VARIANTS:
        raise ValueError("unknown builder %r (have: %s)" % (variant, ", ".join(_VARIANTS)))
    params = {}
    if rest.strip():
        for item in rest.split(","):
            key, sep, val = item.partition("=")
            if not sep:
                raise ValueError("bad builder parameter %r (want key=value)" % item)
            params[key.strip()] = float(val)
    return GraphSpec(variant, params)
