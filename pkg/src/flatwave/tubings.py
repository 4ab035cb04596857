"""Complete and admissible tubings.

Both families are maximal independent sets of a conflict graph on tubes:
overlapping pairs for complete tubings, incompatible pairs among induced tubes
for admissible ones.  They are enumerated with pivoting Bron-Kerbosch on the
complementary compatibility graph, using int bitsets throughout.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field

from .graph import Graph, GraphValidationError, Orientation, Subgraph, bits, line_graph
from .tubes import Tube, enumerate_tubes, format_tube, incompatible, is_induced, overlapping


class TubingKind(enum.Enum):
    COMPLETE = "complete"
    ADMISSIBLE = "admissible"


class TubingError(ValueError):
    """A collection of tubes fails the defining property of its kind."""


@dataclass(frozen=True, eq=False)
class Tubing:
    graph: Graph = field(repr=False)
    tubes: tuple[Tube, ...]
    kind: TubingKind
    within: int = -1  # edge mask of the spanning subgraph hosting the tubing

    def __post_init__(self):
        object.__setattr__(self, "tubes", tuple(sorted(self.tubes, key=lambda t: t.key)))
        if self.within == -1:
            object.__setattr__(self, "within", self.graph.all_edges)

    @property
    def keys(self) -> frozenset:
        return frozenset(t.key for t in self.tubes)

    def __eq__(self, other):
        if not isinstance(other, Tubing):
            return NotImplemented
        return self.kind == other.kind and self.keys == other.keys

    def __hash__(self):
        return hash((self.kind, self.keys))

    def __len__(self):
        return len(self.tubes)

    def __iter__(self):
        return iter(self.tubes)

    def __str__(self):
        return " ".join(format_tube(t) for t in self.tubes)


def maximal_independent_sets(conflicts: Sequence[int]) -> list[int]:
    """Every maximal independent set of the graph with adjacency bitmasks ``conflicts``.

    Returned as bitmasks, sorted by their sorted member lists.
    """
    n = len(conflicts)
    full = (1 << n) - 1
    compat = [full & ~c & ~(1 << i) for i, c in enumerate(conflicts)]
    found: list[int] = []

    def extend(chosen: int, cand: int, excl: int) -> None:
        if not cand and not excl:
            found.append(chosen)
            return
        pool = cand | excl
        pivot = max(bits(pool), key=lambda u: (cand & compat[u]).bit_count())
        for v in bits(cand & ~compat[pivot]):
            bit = 1 << v
            extend(chosen | bit, cand & compat[v], excl & compat[v])
            cand &= ~bit
            excl |= bit

    extend(0, full, 0)
    found.sort(key=lambda s: list(bits(s)))
    return found


def _host(h: Graph | Subgraph) -> tuple[Graph, int]:
    if isinstance(h, Subgraph):
        if h.vertices != h.parent.all_vertices:
            raise GraphValidationError("tubings live on spanning subgraphs only")
        return h.parent, h.edges
    return h, h.all_edges


def _conflict_masks(tubes: Sequence[Tube], related) -> list[int]:
    masks = [0] * len(tubes)
    for i in range(len(tubes)):
        for j in range(i + 1, len(tubes)):
            if related(tubes[i], tubes[j]):
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def enumerate_complete_tubings(g: Graph) -> list[Tubing]:
    """Maximal collections of pairwise non-overlapping tubes."""
    tubes = enumerate_tubes(g)
    sets = maximal_independent_sets(_conflict_masks(tubes, overlapping))
    return [Tubing(g, tuple(tubes[i] for i in bits(s)), TubingKind.COMPLETE) for s in sets]


def enumerate_admissible_tubings(h: Graph | Subgraph) -> list[Tubing]:
    """Maximal collections of pairwise compatible induced tubes.

    ``h`` is a graph or a spanning subgraph of one; in the latter case the
    tubes are subgraphs of the parent that use only edges of ``h``.
    """
    g, within = _host(h)
    tubes = [t for t in enumerate_tubes(g, within) if is_induced(t, within)]
    sets = maximal_independent_sets(
        _conflict_masks(tubes, lambda s, t: incompatible(s, t, within))
    )
    return [
        Tubing(g, tuple(tubes[i] for i in bits(s)), TubingKind.ADMISSIBLE, within)
        for s in sets
    ]


@dataclass(frozen=True)
class TubingLabeling:
    """Tube -> vertex (admissible) or tube -> edge id (complete, tubes with edges)."""

    kind: TubingKind
    labels: dict

    def inverse(self) -> dict:
        return {label: tube for tube, label in self.labels.items()}


def label_tubing(t: Tubing) -> TubingLabeling:
    """Mark each tube with the unique vertex or edge it adds to its sub-tubes."""
    labels = {}
    for tube in t.tubes:
        below_v = below_e = 0
        for other in t.tubes:
            if other is not tube and other.issubgraph(tube) and other.key != tube.key:
                below_v |= other.vertices
                below_e |= other.edges
        if t.kind is TubingKind.ADMISSIBLE:
            fresh = tube.vertices & ~below_v
            if fresh.bit_count() != 1:
                raise TubingError(f"tube {format_tube(tube)} does not add exactly one vertex")
            labels[tube] = fresh.bit_length()
        elif tube.edges:
            fresh = tube.edges & ~below_e
            if fresh.bit_count() != 1:
                raise TubingError(f"tube {format_tube(tube)} does not add exactly one edge")
            labels[tube] = t.graph.edges[fresh.bit_length() - 1].id
    return TubingLabeling(t.kind, labels)


def admissible_from_vertex_order(g: Graph, order: Sequence[int], within: int | None = None) -> Tubing:
    """The admissible tubing generated by adding vertices in ``order``.

    The tube of the k-th vertex is its connected component in the subgraph
    induced on the first k vertices.
    """
    if sorted(order) != list(range(1, g.n + 1)):
        raise GraphValidationError("order must be a permutation of the vertices")
    if within is None:
        within = g.all_edges
    tubes = []
    seen = 0
    for v in order:
        seen |= 1 << (v - 1)
        internal = g.internal_edges(seen, within)
        comp = g.reach(v - 1, seen, internal)
        tubes.append(Subgraph(g, comp, g.internal_edges(comp, within)))
    return Tubing(g, tuple(tubes), TubingKind.ADMISSIBLE, within)


def orientation_from_tubing(t: Tubing) -> Orientation:
    """Direct every edge toward the endpoint whose labeled tube is larger."""
    g = t.graph
    if g.has_loops:
        raise GraphValidationError("orientations are only defined for loopless graphs")
    if t.kind is not TubingKind.ADMISSIBLE:
        raise TubingError("only admissible tubings induce orientations")
    tube_of = label_tubing(t).inverse()
    arcs = []
    for e in g.edges:
        a, b = tube_of[e.u], tube_of[e.v]
        if a.issubgraph(b):
            arcs.append((e.u, e.v))
        elif b.issubgraph(a):
            arcs.append((e.v, e.u))
        else:
            raise TubingError(f"tubes at the ends of edge {e.id!r} are not nested")
    return Orientation(g, tuple(arcs))


def is_admissible_for_dag(h: Orientation, tubes: Sequence[Tube]) -> bool:
    """Check a set of induced tubes against an acyclic orientation.

    Requires ``|V|`` tubes, no overlapping pair, and no arc entering a tube
    from outside it.
    """
    g = h.parent
    keys = {t.key for t in tubes}
    if len(keys) != g.n:
        return False
    tubes = list(tubes)
    for i, s in enumerate(tubes):
        for t in tubes[i + 1:]:
            if overlapping(s, t):
                return False
    for t in tubes:
        for tail, head in h.arcs:
            if not t.vertices >> (tail - 1) & 1 and t.vertices >> (head - 1) & 1:
                return False
    return True


def complete_to_line_admissible(g: Graph, t: Tubing) -> Tubing:
    """Send each tube with an edge to its line graph, an induced tube of L(g)."""
    lg, index = line_graph(g)
    tubes = []
    for tube in t.tubes:
        if not tube.edges:
            continue
        vmask = 0
        for eid in tube.edge_list:
            vmask |= 1 << (index[eid] - 1)
        tubes.append(Subgraph(lg, vmask, lg.internal_edges(vmask)))
    return Tubing(lg, tuple(tubes), TubingKind.ADMISSIBLE)
