"""The flat space wavefunction of a graph, four ways.

* bulk: signed sum over spanning subgraphs and their admissible tubings,
* boundary: sum over complete tubings,
* canonical: adjoint polynomial over the product of every tube form,
* recursion: disjoint-union product plus edge deletion with shifted energies.

Every representation lives in the ring ``X1..Xn, Y[e1]..Y[em]`` of the
graph, and tube forms are always taken against the full graph.
"""

from __future__ import annotations

import enum
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    FactoredRational,
    LinearForm,
    Polynomial,
    Ring,
    horner_sum,
    rational_equal,
    rational_sum,
)
from .graph import Graph, Subgraph, bits, connected_components, spanning_subgraphs
from .tubes import Tube, enumerate_tubes, format_tube, overlapping
from .tubings import enumerate_admissible_tubings, enumerate_complete_tubings


class Method(enum.Enum):
    BULK = "bulk"
    BOUNDARY = "boundary"
    CANONICAL = "canonical"
    RECURSION = "recursion"


@dataclass
class PsiResult:
    value: FactoredRational
    method: Method
    graph: Graph = field(repr=False)
    terms: list[FactoredRational] | None = field(default=None, repr=False)
    seconds: float = 0.0

    def reduced(self) -> PsiResult:
        return PsiResult(self.value.reduced(), self.method, self.graph, self.terms, self.seconds)


def ring_of(g: Graph) -> Ring:
    return Ring.for_graph(g)


def linear_form(g: Graph, t: Tube) -> LinearForm:
    """Vertex energies of ``t``, plus ``Y_e`` per crossing edge and ``2Y_e``
    per edge of ``g`` joining two vertices of ``t`` but missing from ``t``."""
    c = [0] * (g.n + g.m)
    for i in bits(t.vertices):
        c[i] = 1
    for k, ends in enumerate(g.edge_ends):
        inside = ends & t.vertices
        if not inside:
            continue
        if inside != ends:
            c[g.n + k] = 1
        elif not t.edges >> k & 1:
            c[g.n + k] = 2
    return LinearForm(ring_of(g), c)


def primed_form(g: Graph, t: Tube) -> LinearForm:
    """``sum X'_v + sum Y'_e`` with ``X'_v = X_v + sum_{e at v} Y_e`` and
    ``Y'_e = -2 Y_e``, expanded back into the original variables."""
    c = [0] * (g.n + g.m)
    for i in bits(t.vertices):
        c[i] += 1
        for k, e in enumerate(g.edges):
            c[g.n + k] += (e.u == i + 1) + (e.v == i + 1)
    for k in bits(t.edges):
        c[g.n + k] -= 2
    return LinearForm(ring_of(g), c)


@dataclass
class OverlapCheck:
    pairs: int
    failure: tuple[Tube, Tube] | None = None

    def __bool__(self):
        return self.failure is None

    def describe(self) -> str:
        if self.failure is None:
            return f"{self.pairs} overlapping pairs satisfy the relation"
        s, t = self.failure
        return f"relation fails for {format_tube(s)} and {format_tube(t)}"


def overlap_relation_check(g: Graph) -> OverlapCheck:
    """``l_S + l_T == l_{S u T} + sum_i l_{U_i}`` for every overlapping pair,
    with ``U_i`` the components of the common part of ``S`` and ``T``."""
    tubes = enumerate_tubes(g)
    forms = {t.key: linear_form(g, t) for t in tubes}
    pairs = 0
    for i, s in enumerate(tubes):
        for t in tubes[i + 1:]:
            if not overlapping(s, t):
                continue
            pairs += 1
            union = Subgraph(g, s.vertices | t.vertices, s.edges | t.edges)
            common = Subgraph(g, s.vertices & t.vertices, s.edges & t.edges)
            rhs = linear_form(g, union)
            for u in connected_components(common):
                rhs = rhs + forms[u.key]
            if forms[s.key] + forms[t.key] != rhs:
                return OverlapCheck(pairs, (s, t))
    return OverlapCheck(pairs)


def _reciprocal(ring: Ring, forms, sign: int = 1) -> FactoredRational:
    return FactoredRational(ring, sign, forms)


def boundary_terms(g: Graph) -> list[FactoredRational]:
    ring = ring_of(g)
    return [
        _reciprocal(ring, [linear_form(g, t) for t in tubing])
        for tubing in enumerate_complete_tubings(g)
    ]


def psi_boundary(g: Graph, reduce: bool = True, keep_terms: bool = False) -> PsiResult:
    start = time.perf_counter()
    terms = boundary_terms(g)
    value = rational_sum(terms, reduce=reduce, ring=ring_of(g))
    return PsiResult(value, Method.BOUNDARY, g, terms if keep_terms else None,
                     time.perf_counter() - start)


def bulk_terms(g: Graph) -> list[FactoredRational]:
    """Signed summands before the ``1 / prod 2Y_e`` prefactor, by subgraph then tubing."""
    ring = ring_of(g)
    out = []
    for h in spanning_subgraphs(g):
        sign = -1 if (g.m - h.edges.bit_count()) % 2 else 1
        for tubing in enumerate_admissible_tubings(h):
            out.append(_reciprocal(ring, [linear_form(g, t) for t in tubing], sign))
    return out


def bulk_prefactor(g: Graph) -> FactoredRational:
    ring = ring_of(g)
    return FactoredRational(ring, 1, [LinearForm.variable(ring, g.n + k) for k in range(g.m)],
                            Fraction(1, 2**g.m))


def _subgraph_sum(g: Graph, emask: int) -> FactoredRational:
    ring = ring_of(g)
    terms = [_reciprocal(ring, [linear_form(g, t) for t in tubing])
             for tubing in enumerate_admissible_tubings(Subgraph(g, g.all_vertices, emask))]
    return rational_sum(terms, reduce=False, ring=ring)


def _alternating_sum(g: Graph) -> FactoredRational:
    """``sum_H (-1)^|E - E_H| S(H) / prod 2Y_e`` as nested differences.

    ``S(H)`` is the admissible-tubing sum of the spanning subgraph ``H``.
    Summing out one edge at a time turns the signed sum into differences
    ``D(H + e) - D(H)``; each is divided by ``2Y_e`` on the spot, exactly
    when ``Y_e`` divides its numerator and as a denominator atom otherwise.
    Depth first, so only one partial difference per edge is alive at a time.
    """
    ring = ring_of(g)

    def diff(k: int, mask: int) -> FactoredRational:
        if k == g.m:
            return _subgraph_sum(g, mask)
        high = diff(k + 1, mask | 1 << k)
        d = rational_sum([high, -diff(k + 1, mask)], reduce=False, ring=ring)
        del high
        y = LinearForm.variable(ring, g.n + k)
        q = None if d.is_zero() else d.numerator.divexact(y.poly)
        if q is not None:
            return FactoredRational(ring, q, d.denominator, d.scalar / 2)
        return d.divide_by([y], 2)

    return diff(0, 0)


def psi_bulk(g: Graph, reduce: bool = True, keep_terms: bool = False,
             direct: bool = False) -> PsiResult:
    """Sum over spanning subgraphs ``H`` and admissible tubings of ``H``.

    ``direct`` expands the flat signed sum over one common denominator and
    then applies the prefactor; the default groups the same summands by
    ``H`` and sums out edges one at a time, which avoids the huge
    intermediate numerators of the flat sum.
    """
    start = time.perf_counter()
    terms = bulk_terms(g) if keep_terms or direct else None
    if direct:
        value = rational_sum(terms, reduce=False, ring=ring_of(g)) * bulk_prefactor(g)
    else:
        value = _alternating_sum(g)
    if reduce:
        value = value.reduced()
    return PsiResult(value, Method.BULK, g, terms if keep_terms else None,
                     time.perf_counter() - start)


def adjoint(g: Graph) -> Polynomial:
    """``sum over complete tubings of the product of the forms they omit``."""
    ring = ring_of(g)
    tubes = enumerate_tubes(g)
    forms = [linear_form(g, t) for t in tubes]
    everything = {t.key: f for t, f in zip(tubes, forms)}
    items = []
    for tubing in enumerate_complete_tubings(g):
        inside = {t.key for t in tubing}
        cof = {f: 1 for key, f in everything.items() if key not in inside}
        items.append((1, Polynomial.constant(ring, 1), cof))
    if not items:
        return Polynomial.constant(ring, 1)
    return Polynomial(ring, horner_sum(ring, items, _order_by_spread(items, forms), 0))


def _order_by_spread(items, forms):
    # branch first on atoms that split the summands least
    counts = Counter()
    for _, _, cof in items:
        counts.update(cof.keys())
    n = len(items)
    return sorted(forms, key=lambda f: (-max(counts[f], n - counts[f]), f.sort_key()))


def psi_canonical(g: Graph, reduce: bool = False) -> PsiResult:
    """``adj_G`` over the product of all tube forms.

    Left unreduced by default: the point of this representation is its
    denominator, one factor per tube.
    """
    start = time.perf_counter()
    value = FactoredRational(ring_of(g), adjoint(g), [linear_form(g, t) for t in enumerate_tubes(g)])
    if reduce:
        value = value.reduced()
    return PsiResult(value, Method.CANONICAL, g, None, time.perf_counter() - start)


Terms = dict[tuple[LinearForm, ...], Fraction]


def _key(atoms) -> tuple[LinearForm, ...]:
    return tuple(sorted(atoms, key=LinearForm.sort_key))


class _Recursion:
    """Memoized recursion over spanning subgraphs of one graph.

    Values are kept as sums of reciprocal products of linear forms (atom
    tuple -> coefficient); shifting moves the atoms, and like terms merge.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.ring = ring_of(g)
        self.memo: dict[tuple[int, int], Terms] = {}

    def spanning(self, vmask: int, emask: int) -> Terms:
        value: Terms = {(): Fraction(1)}
        for part in connected_components(Subgraph(self.g, vmask, emask)):
            factor = self.connected(part.vertices, part.edges)
            prod: Terms = {}
            for a, ca in value.items():
                for b, cb in factor.items():
                    k = _key(a + b)
                    prod[k] = prod.get(k, 0) + ca * cb
            value = prod
        return value

    def connected(self, vmask: int, emask: int) -> Terms:
        key = (vmask, emask)
        if key in self.memo:
            return self.memo[key]
        g, ring = self.g, self.ring
        total = LinearForm(ring, [vmask >> i & 1 for i in range(g.n)] + [0] * g.m)
        acc: Terms = {}
        if not emask:
            acc[()] = Fraction(1)
        for k in bits(emask):
            e = g.edges[k]
            y = LinearForm.variable(ring, g.n + k)
            shifts = {e.u - 1: y.scale(2)} if e.is_loop else {e.u - 1: y, e.v - 1: y}
            for atoms, c in self.spanning(vmask, emask & ~(1 << k)).items():
                moved = []
                for a in atoms:
                    for var, by in shifts.items():
                        if a.coeffs[var]:
                            a = a + by.scale(a.coeffs[var])
                    moved.append(a)
                moved = _key(moved)
                acc[moved] = acc.get(moved, 0) + c
        value = {_key(atoms + (total,)): c for atoms, c in acc.items() if c}
        self.memo[key] = value
        return value


def recursion_terms(g: Graph) -> list[FactoredRational]:
    ring = ring_of(g)
    terms = _Recursion(g).spanning(g.all_vertices, g.all_edges)
    return [FactoredRational(ring, 1, atoms, c) for atoms, c in terms.items()]


def psi_recursion(g: Graph, reduce: bool = True, keep_terms: bool = False) -> PsiResult:
    """Edge-deletion recursion; the independent reference for the other three."""
    start = time.perf_counter()
    terms = recursion_terms(g)
    value = rational_sum(terms, reduce=reduce, ring=ring_of(g))
    return PsiResult(value, Method.RECURSION, g, terms if keep_terms else None,
                     time.perf_counter() - start)


COMPUTE = {
    Method.BULK: psi_bulk,
    Method.BOUNDARY: psi_boundary,
    Method.CANONICAL: psi_canonical,
    Method.RECURSION: psi_recursion,
}


def psi(g: Graph, method: Method | str, reduce: bool | None = None) -> PsiResult:
    method = Method(method)
    if reduce is None:
        return COMPUTE[method](g)
    return COMPUTE[method](g, reduce=reduce)


@dataclass
class VerifyReport:
    graph: Graph = field(repr=False)
    seconds: dict[Method, float]
    mismatches: list[tuple[Method, Method]]
    check_seconds: float
    canonical: FactoredRational
    adjoint_degree: int
    results: dict[Method, PsiResult] = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    @property
    def agreeing(self) -> int:
        bad = {m for pair in self.mismatches for m in pair if m is not Method.RECURSION}
        return len(self.seconds) - len(bad)

    def summary(self) -> str:
        total = len(self.seconds)
        if self.ok:
            return f"{total}/{total} representations equal"
        pairs = ", ".join(f"{a.value} != {b.value}" for a, b in self.mismatches)
        return f"{self.agreeing}/{total} representations equal ({pairs})"


def verify_all(g: Graph, reduce: bool = True, seed: int | None = 0,
               keep: bool = True) -> VerifyReport:
    """Compute all four representations and test each against the recursion.

    Equality is transitive, so three exact comparisons against one reference
    settle all six pairs.  With ``reduce`` off nothing is cancelled, which
    is much cheaper on large graphs and does not change any verdict.  With
    ``keep`` off each representation is dropped once compared, so at most
    two large numerators are alive at a time.
    """
    ref = psi_recursion(g, reduce=reduce)
    seconds = {Method.RECURSION: ref.seconds}
    results = {Method.RECURSION: ref} if keep else {}
    mismatches = []
    check = 0.0
    degree = 0
    for m in (Method.BOUNDARY, Method.CANONICAL, Method.BULK):
        res = COMPUTE[m](g, reduce=reduce and m is not Method.CANONICAL)
        seconds[m] = res.seconds
        if m is Method.CANONICAL:
            degree = res.value.numerator.total_degree()
        start = time.perf_counter()
        if not rational_equal(res.value, ref.value, seed=seed):
            mismatches.append((m, Method.RECURSION))
        check += time.perf_counter() - start
        if keep:
            results[m] = res
        del res
    return VerifyReport(g, seconds, mismatches, check, ref.value, degree, results)
