"""Finite multigraphs, subgraphs and orientations.

Vertices are numbered ``1..n``.  Edges keep the string ids they were given
(``"e1"``, ``"e2"``, ... by default) and their position in the edge list, which
fixes every enumeration order in the package.  Vertex and edge subsets are
Python ints used as bitsets: bit ``i - 1`` stands for vertex ``i`` and bit
``k`` for the ``k``-th edge.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

MAX_VERTICES = 32
MAX_EDGES = 32


class GraphError(ValueError):
    """Base class for malformed graph input."""


class GraphValidationError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphSizeError(GraphError):
    """Raised when a graph exceeds the 32 vertex / 32 edge bitset bound."""


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Edge:
    id: str
    u: int
    v: int

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class Graph:
    """A finite multigraph; loops and parallel edges are allowed."""

    vertex_count: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise GraphValidationError("vertex count must be non-negative")
        if n > MAX_VERTICES or len(self.edges) > MAX_EDGES:
            raise GraphSizeError(
                f"graph has {n} vertices and {len(self.edges)} edges; "
                f"the limit is {MAX_VERTICES} and {MAX_EDGES}"
            )
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise GraphValidationError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            for end in (e.u, e.v):
                if not 1 <= end <= n:
                    raise GraphValidationError(
                        f"edge {e.id!r} has endpoint {end} outside 1..{n}"
                    )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, ids: Sequence[str] | None = None) -> Graph:
        """Build a graph from ``(u, v)`` pairs or ``(id, u, v)`` triples.

        >>> Graph.from_edges(2, [(1, 2), (1, 2)], ids="AB").edge_ids
        ('A', 'B')
        """
        out = []
        for k, item in enumerate(edges):
            if len(item) == 3:
                eid, u, v = item
            else:
                u, v = item
                eid = ids[k] if ids is not None else f"e{k + 1}"
            out.append(Edge(str(eid), int(u), int(v)))
        return cls(n, tuple(out))

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def all_vertices(self) -> int:
        return (1 << self.vertex_count) - 1

    @cached_property
    def all_edges(self) -> int:
        return (1 << len(self.edges)) - 1

    @cached_property
    def edge_ends(self) -> tuple[int, ...]:
        """Vertex bitmask of the endpoints of each edge."""
        return tuple((1 << (e.u - 1)) | (1 << (e.v - 1)) for e in self.edges)

    @cached_property
    def incident(self) -> tuple[int, ...]:
        """Edge bitmask of the edges at each vertex (index ``i - 1``)."""
        inc = [0] * self.vertex_count
        for k, e in enumerate(self.edges):
            inc[e.u - 1] |= 1 << k
            inc[e.v - 1] |= 1 << k
        return tuple(inc)

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: k for k, e in enumerate(self.edges)}

    @property
    def has_loops(self) -> bool:
        return any(e.is_loop for e in self.edges)

    def internal_edges(self, vmask: int, within: int | None = None) -> int:
        """Edges (restricted to ``within``) with both endpoints in ``vmask``."""
        if within is None:
            within = self.all_edges
        out = 0
        for k in bits(within):
            if self.edge_ends[k] & ~vmask == 0:
                out |= 1 << k
        return out

    def reach(self, start: int, vmask: int, emask: int) -> int:
        """Vertices of ``vmask`` reachable from vertex bit ``start`` along ``emask``."""
        seen = 1 << start
        frontier = seen
        while frontier:
            step = 0
            for v in bits(frontier):
                for k in bits(self.incident[v] & emask):
                    step |= self.edge_ends[k]
            step &= vmask & ~seen
            seen |= step
            frontier = step
        return seen

    # JSON interchange
    def to_dict(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "edges": [{"id": e.id, "ends": [e.u, e.v]} for e in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True, eq=False)
class Subgraph:
    """A vertex set and an edge set of ``parent`` closed under taking endpoints."""

    parent: Graph = field(repr=False)
    vertices: int
    edges: int

    def __post_init__(self):
        for k in bits(self.edges):
            if self.parent.edge_ends[k] & ~self.vertices:
                raise GraphValidationError(
                    f"edge {self.parent.edges[k].id!r} has an endpoint outside the subgraph"
                )

    @property
    def key(self) -> tuple[int, int]:
        return (self.vertices, self.edges)

    def __eq__(self, other):
        if not isinstance(other, Subgraph):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def issubgraph(self, other: Subgraph) -> bool:
        return self.vertices & ~other.vertices == 0 and self.edges & ~other.edges == 0

    @property
    def vertex_list(self) -> list[int]:
        return [i + 1 for i in bits(self.vertices)]

    @property
    def edge_list(self) -> list[str]:
        return [self.parent.edges[k].id for k in bits(self.edges)]

    def __repr__(self):
        return f"Subgraph({{{','.join(map(str, self.vertex_list))}|{','.join(self.edge_list)}}})"


def is_connected(sub: Subgraph) -> bool:
    """True iff ``sub`` is nonempty and any two of its vertices are joined inside it."""
    if not sub.vertices:
        return False
    start = (sub.vertices & -sub.vertices).bit_length() - 1
    return sub.parent.reach(start, sub.vertices, sub.edges) == sub.vertices


def connected_components(sub: Subgraph) -> list[Subgraph]:
    """Maximal connected pieces of ``sub``, ordered by smallest vertex."""
    g = sub.parent
    out = []
    rest = sub.vertices
    while rest:
        start = (rest & -rest).bit_length() - 1
        comp = g.reach(start, rest, sub.edges)
        out.append(Subgraph(g, comp, g.internal_edges(comp, sub.edges)))
        rest &= ~comp
    return out


def induced_subgraph(g: Graph, vs: int) -> Subgraph:
    return Subgraph(g, vs, g.internal_edges(vs))


def spanning_subgraphs(g: Graph) -> Iterator[Subgraph]:
    """All ``2**m`` spanning subgraphs, by ascending edge bitmask."""
    for emask in range(1 << g.m):
        yield Subgraph(g, g.all_vertices, emask)


def line_graph(g: Graph) -> tuple[Graph, dict[str, int]]:
    """The line graph of ``g`` and the map from edge id to its vertex there.

    Edges sharing two endpoints still give a single edge, and a loop is
    adjacent to every other edge at its vertex.
    """
    if g.m == 0:
        raise GraphValidationError("the line graph needs at least one edge")
    pairs = []
    for a in range(g.m):
        for b in range(a + 1, g.m):
            if g.edge_ends[a] & g.edge_ends[b]:
                pairs.append((f"{g.edges[a].id}~{g.edges[b].id}", a + 1, b + 1))
    mapping = {e.id: k + 1 for k, e in enumerate(g.edges)}
    return Graph.from_edges(g.m, pairs), mapping


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    """Place ``g2`` after ``g1``; clashing edge ids of ``g2`` get a ``'`` suffix."""
    taken = set(g1.edge_ids)
    edges = list(g1.edges)
    for e in g2.edges:
        eid = e.id
        while eid in taken:
            eid += "'"
        taken.add(eid)
        edges.append(Edge(eid, e.u + g1.n, e.v + g1.n))
    return Graph(g1.n + g2.n, tuple(edges))


def relabel(g: Graph, vertex_perm: Sequence[int], edge_perm: Sequence[int] | None = None,
            ids: Sequence[str] | None = None) -> Graph:
    """Isomorphic copy: vertex ``i`` becomes ``vertex_perm[i-1]``.

    ``edge_perm[k]`` is the new list position of edge ``k``; ``ids`` renames
    the edges (indexed by new position).
    """
    if edge_perm is None:
        edge_perm = range(g.m)
    slots: list[Edge | None] = [None] * g.m
    for k, e in enumerate(g.edges):
        pos = edge_perm[k]
        eid = ids[pos] if ids is not None else e.id
        slots[pos] = Edge(eid, vertex_perm[e.u - 1], vertex_perm[e.v - 1])
    return Graph(g.n, tuple(slots))


@dataclass(frozen=True)
class Orientation:
    """Each edge of a loopless graph directed as ``(tail, head)``."""

    parent: Graph = field(repr=False)
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.parent.has_loops:
            raise GraphValidationError("orientations are only defined for loopless graphs")
        if len(self.arcs) != self.parent.m:
            raise GraphValidationError("one direction is needed per edge")
        for e, (a, b) in zip(self.parent.edges, self.arcs):
            if {a, b} != {e.u, e.v}:
                raise GraphValidationError(f"arc {a}->{b} does not match edge {e.id!r}")


def is_acyclic(o: Orientation) -> bool:
    """Kahn's algorithm on the directed multigraph."""
    g = o.parent
    if g.has_loops:
        raise GraphValidationError("orientations are only defined for loopless graphs")
    indeg = [0] * (g.n + 1)
    out: list[list[int]] = [[] for _ in range(g.n + 1)]
    for a, b in o.arcs:
        out[a].append(b)
        indeg[b] += 1
    ready = [v for v in range(1, g.n + 1) if indeg[v] == 0]
    done = 0
    while ready:
        v = ready.pop()
        done += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return done == g.n


def all_orientations(g: Graph) -> Iterator[Orientation]:
    for flips in range(1 << g.m):
        yield Orientation(g, tuple(
            (e.v, e.u) if flips >> k & 1 else (e.u, e.v) for k, e in enumerate(g.edges)
        ))
