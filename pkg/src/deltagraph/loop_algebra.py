"""The loop-space model: vectors over based loops, cup/cap maps, star,
concatenation, the two inner products, and the modular spectrum.

Vectors of length n are finitely supported linear combinations of based
loops of length n.  Cup inserts a conjugate edge pair after position i
(0 <= i <= n, position 0 anchoring at the basepoint) with coefficient
w(e)^(1/2); cap contracts positions i, i+1 (1 <= i <= n-1) when they are a
conjugate pair, with coefficient w(e_i)^(1/2).  With these conventions
cap_(i+1) o cup_i = delta * id and both zig-zag composites are the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .graph import Path, VertexId, enumerate_loops, vid_key
from .weights import GeneratorContext, Weight

ExpKey = tuple  # canonical exact exponent tuple, as in Weight.exponents


@dataclass(frozen=True)
class Coefficient:
    """Scalar closed under the sums the cup map produces.

    Exact mode: a rational linear combination of exact monomial weights,
    stored as (exponent-key, rational) terms.  Float mode: one complex value.
    """

    context: GeneratorContext
    terms: tuple[tuple[ExpKey, Fraction], ...] | None
    cvalue: complex | None = None

    @classmethod
    def zero(cls, context: GeneratorContext) -> "Coefficient":
        return cls(context, ())

    @classmethod
    def one(cls, context: GeneratorContext) -> "Coefficient":
        return cls(context, (((), Fraction(1)),))

    @classmethod
    def of_weight(cls, w: Weight, scalar=1) -> "Coefficient":
        if w.is_exact:
            s = Fraction(scalar)
            if s == 0:
                return cls.zero(w.context)
            return cls(w.context, ((w.exponents, s),))
        return cls(w.context, None, complex(scalar) * w.value)

    @property
    def is_exact(self) -> bool:
        return self.terms is not None

    def is_zero(self) -> bool:
        if self.is_exact:
            return not self.terms
        return self.cvalue == 0

    def _normalized(self, acc: dict) -> "Coefficient":
        items = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        return Coefficient(self.context, items)

    def __add__(self, other: "Coefficient") -> "Coefficient":
        if self.is_exact and other.is_exact:
            acc = dict(self.terms)
            for k, v in other.terms:
                acc[k] = acc.get(k, Fraction(0)) + v
            return self._normalized(acc)
        return Coefficient(self.context, None, self.value() + other.value())

    def __mul__(self, other: "Coefficient") -> "Coefficient":
        if self.is_exact and other.is_exact:
            acc: dict = {}
            for k1, v1 in self.terms:
                e1 = dict(k1)
                for k2, v2 in other.terms:
                    e2 = dict(e1)
                    for n, e in k2:
                        e2[n] = e2.get(n, Fraction(0)) + e
                    key = tuple(sorted((n, e) for n, e in e2.items() if e))
                    acc[key] = acc.get(key, Fraction(0)) + v1 * v2
            return self._normalized(acc)
        return Coefficient(self.context, None, self.value() * other.value())

    def __neg__(self) -> "Coefficient":
        if self.is_exact:
            return Coefficient(self.context, tuple((k, -v) for k, v in self.terms))
        return Coefficient(self.context, None, -self.cvalue)

    def conjugate(self) -> "Coefficient":
        if self.is_exact:
            return self  # rational combinations of positive reals are real
        return Coefficient(self.context, None, self.cvalue.conjugate())

    def value(self) -> complex:
        if not self.is_exact:
            return self.cvalue
        total = 0.0
        for key, r in self.terms:
            total += float(r) * self.context.exact(dict(key)).value
        return complex(total)

    def isclose(self, other: "Coefficient") -> bool:
        a, b = self.value(), other.value()
        scale = max(abs(a), abs(b), 1.0)
        return abs(a - b) <= self.context.tolerance * scale

    def text(self) -> str:
        if not self.is_exact:
            v = self.cvalue
            if v.imag == 0:
                return format(v.real, ".17g")
            return format(v, ".17g")
        if not self.terms:
            return "0"
        parts = []
        for key, r in self.terms:
            mono = Weight(self.context, key, 0.0).text() if key else "1"
            parts.append(mono if r == 1 and key else ("%s" % r if not key else "%s %s" % (r, mono)))
        return " + ".join(parts)

    def __repr__(self):
        return "Coefficient(%s)" % self.text()


@dataclass(frozen=True, eq=True)
class LoopVector:
    """Finitely supported linear combination of based loops of one length."""

    length: int
    terms: Mapping[Path, Coefficient]

    __hash__ = None  # mapping-valued; never used as a key

    def __post_init__(self):
        for l in self.terms:
            if len(l) != self.length:
                raise ValueError("loop of length %d in a length-%d vector" % (len(l), self.length))

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> tuple[Path, ...]:
        return tuple(sorted(self.terms, key=lambda l: tuple(vid_key(e) for e in l.edge_ids())))

    def __add__(self, other: "LoopVector") -> "LoopVector":
        if other.length != self.length:
            raise ValueError("length mismatch")
        acc = dict(self.terms)
        for l, c in other.terms.items():
            got = acc.get(l)
            acc[l] = c if got is None else got + c
        return _vec(self.length, acc)

    def scaled(self, c: Coefficient) -> "LoopVector":
        return _vec(self.length, {l: c0 * c for l, c0 in self.terms.items()})

    def eq(self, other: "LoopVector", exact: bool = True) -> bool:
        """Structural equality (exact) or coefficient-wise tolerance equality."""
        if self.length != other.length:
            return False
        if exact:
            return dict(self.terms) == dict(other.terms)
        keys = set(self.terms) | set(other.terms)
        for l in keys:
            a = self.terms.get(l)
            b = other.terms.get(l)
            if a is None:
                a = Coefficient.zero(b.context)
            if b is None:
                b = Coefficient.zero(a.context)
            if not a.isclose(b):
                return False
        return True


def _vec(length: int, terms: dict) -> LoopVector:
    return LoopVector(length, {l: c for l, c in terms.items() if not c.is_zero()})


def zero_vector(length: int) -> LoopVector:
    return LoopVector(length, {})


def loop_vector(l: Path, coeff: Coefficient | None = None) -> LoopVector:
    c = coeff if coeff is not None else Coefficient.one(l.weight.context)
    return _vec(len(l), {l: c})


def basis(graph, n: int) -> tuple[LoopVector, ...]:
    return tuple(loop_vector(l) for l in enumerate_loops(graph, n))


def format_vector(v: LoopVector) -> str:
    """One line per term: ``(coefficient-text) eid eid ...``."""
    lines = []
    for l in v.support():
        ids = " ".join(str(e) for e in l.edge_ids()) or "-"
        lines.append("(%s) %s" % (v.terms[l].text(), ids))
    return "\n".join(lines) if lines else "(0)"


def _anchor(graph, l: Path, i: int) -> VertexId:
    return l.edges[i - 1].target if i else l.start


def cup(graph, v: LoopVector, i: int) -> LoopVector:
    """Insert a summed conjugate pair after edge i, weighted by w(e)^(1/2)."""
    if not 0 <= i <= v.length:
        raise IndexError("cup index %d out of range 0..%d" % (i, v.length))
    acc: dict[Path, Coefficient] = {}
    inserts: dict = {}  # per-anchor: (e, e-bar, pair weight, sqrt coefficient)
    for l, c in v.terms.items():
        at = _anchor(graph, l, i)
        if graph.is_frontier(at):
            raise ValueError(
                "cup anchored at %r, whose adjacency is truncated; enlarge the ball" % (at,)
            )
        rows = inserts.get(at)
        if rows is None:
            rows = []
            for e in graph.out_edges(at):
                ebar = graph.conjugate_edge(e)
                rows.append(
                    (e, ebar, e.weight * ebar.weight, Coefficient.of_weight(e.weight.sqrt()))
                )
            inserts[at] = rows
        for e, ebar, pair_w, sq in rows:
            nl = Path(l.start, l.edges[:i] + (e, ebar) + l.edges[i:], l.weight * pair_w)
            coeff = c * sq
            got = acc.get(nl)
            acc[nl] = coeff if got is None else got + coeff
    return _vec(v.length + 2, acc)


def cap(v: LoopVector, i: int) -> LoopVector:
    """Contract edges i, i+1 when conjugate, weighted by w(e_i)^(1/2)."""
    if v.length < 2:
        raise IndexError("cap needs length >= 2")
    if not 1 <= i <= v.length - 1:
        raise IndexError("cap index %d out of range 1..%d" % (i, v.length - 1))
    acc: dict[Path, Coefficient] = {}
    for l, c in v.terms.items():
        e1, e2 = l.edges[i - 1], l.edges[i]
        if e1.conjugate != e2.eid or e2.conjugate != e1.eid:
            continue
        nl = Path(
            l.start,
            l.edges[: i - 1] + l.edges[i + 1 :],
            l.weight * (e1.weight * e2.weight).inverse(),
        )
        coeff = c * Coefficient.of_weight(e1.weight.sqrt())
        got = acc.get(nl)
        acc[nl] = coeff if got is None else got + coeff
    return _vec(v.length - 2, acc)


def star(graph, v: LoopVector) -> LoopVector:
    """Conjugate-linear involution: l -> w(l-bar)^(1/2) l-bar."""
    acc: dict[Path, Coefficient] = {}
    for l, c in v.terms.items():
        lbar = l.reversed_in(graph)
        coeff = c.conjugate() * Coefficient.of_weight(lbar.weight.sqrt())
        got = acc.get(lbar)
        acc[lbar] = coeff if got is None else got + coeff
    return _vec(v.length, acc)


def concat(u: LoopVector, v: LoopVector) -> LoopVector:
    """Bilinear extension of loop concatenation."""
    acc: dict[Path, Coefficient] = {}
    for l1, c1 in u.terms.items():
        for l2, c2 in v.terms.items():
            nl = l1 * l2
            coeff = c1 * c2
            got = acc.get(nl)
            acc[nl] = coeff if got is None else got + coeff
    return _vec(u.length + v.length, acc)


def inner(graph, f: LoopVector, g: LoopVector, side: str) -> Coefficient:
    """Left/right inner product by literal nested-cap evaluation.

    Both sides are linear in f and conjugate-linear in g; ``left`` evaluates
    caps on f * star(g), ``right`` on star(g) * f.  Returns the coefficient
    of the empty loop.
    """
    if f.length != g.length:
        raise ValueError("length mismatch: %d vs %d" % (f.length, g.length))
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    n = f.length
    word = concat(f, star(graph, g)) if side == "left" else concat(star(graph, g), f)
    for k in range(n, 0, -1):
        word = cap(word, k)
    ctx = graph.context
    empty = Path.empty(ctx, graph.basepoint)
    return word.terms.get(empty, Coefficient.zero(ctx))


def apply_modular(v: LoopVector) -> LoopVector:
    """The diagonal modular operator: l -> w(l) * l."""
    acc = {}
    for l, c in v.terms.items():
        acc[l] = c * Coefficient.of_weight(l.weight)
    return _vec(v.length, acc)


@dataclass(frozen=True)
class ModularSpectrum:
    """Eigenvalue multiset of the modular operator on length-n loops."""

    length: int
    eigenvalues: tuple[tuple[Weight, int], ...]
    verified: bool

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def is_trivial(self) -> bool:
        return all(w.is_identity() for w, _ in self.eigenvalues)


def _group_weights(weights: Iterable[Weight], ctx: GeneratorContext):
    groups: list[tuple[Weight, int]] = []
    for w in sorted(weights, key=lambda w: (w.value, w.key())):
        for i, (rep, m) in enumerate(groups):
            if rep.eq(w):
                groups[i] = (rep, m + 1)
                break
        else:
            groups.append((w, 1))
    return tuple(groups)


def modular_spectrum(
    graph, n: int, verify: bool | None = None, verify_limit: int = 256
) -> ModularSpectrum:
    """Loop-weight multiset at length n, optionally re-derived from the
    inner products.

    When verification runs, every basis pair (f, g) is checked to satisfy
    inner(f, g, left) == inner(Delta f, g, right); a mismatch raises.  With
    ``verify=None`` the check runs iff the basis has at most ``verify_limit``
    loops.
    """
    loops = enumerate_loops(graph, n)
    ctx = graph.context
    spectrum = _group_weights((l.weight for l in loops), ctx)
    run = verify if verify is not None else len(loops) <= verify_limit
    if run:
        vecs = [loop_vector(l) for l in loops]
        exact = all(l.weight.is_exact for l in loops)
        for f in vecs:
            df = apply_modular(f)
            for g in vecs:
                lhs = inner(graph, f, g, "left")
                rhs = inner(graph, df, g, "right")
                ok = lhs == rhs if exact else lhs.isclose(rhs)
                if not ok:
                    raise ArithmeticError(
                        "modular relation failed at n=%d: %s vs %s"
                        % (n, lhs.text(), rhs.text())
                    )
    return ModularSpectrum(n, spectrum, bool(run))
