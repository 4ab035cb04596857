"""Tubes (connected subgraphs) and the relations between pairs of them."""

from __future__ import annotations

from .graph import Graph, Subgraph, bits

Tube = Subgraph


def _submasks(mask: int) -> list[int]:
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    out.reverse()
    return out


def enumerate_tubes(g: Graph, within: int | None = None) -> list[Tube]:
    """All connected subgraphs of ``g``, ordered by vertex then edge bitmask.

    With ``within`` set, only edges in that mask are used, which gives the
    tubes of the spanning subgraph with that edge set.
    """
    if within is None:
        within = g.all_edges
    tubes = []
    for vmask in range(1, 1 << g.n):
        internal = g.internal_edges(vmask, within)
        start = (vmask & -vmask).bit_length() - 1
        if g.reach(start, vmask, internal) != vmask:
            continue
        for emask in _submasks(internal):
            if g.reach(start, vmask, emask) == vmask:
                tubes.append(Subgraph(g, vmask, emask))
    return tubes


def is_induced(t: Tube, within: int | None = None) -> bool:
    """True iff ``t`` holds every edge (of ``within``) between its vertices."""
    return t.edges == t.parent.internal_edges(t.vertices, within)


def nested(s: Tube, t: Tube) -> bool:
    return s.issubgraph(t) or t.issubgraph(s)


def overlapping(s: Tube, t: Tube) -> bool:
    return bool(s.vertices & t.vertices) and not nested(s, t)


def adjacent(s: Tube, t: Tube, within: int | None = None) -> bool:
    """Some edge (of ``within``) has one endpoint in ``s`` and the other in ``t``."""
    g = s.parent
    if within is None:
        within = g.all_edges
    for k in bits(within):
        e = g.edges[k]
        a, b = 1 << (e.u - 1), 1 << (e.v - 1)
        if (a & s.vertices and b & t.vertices) or (b & s.vertices and a & t.vertices):
            return True
    return False


def incompatible(s: Tube, t: Tube, within: int | None = None) -> bool:
    """Not nested, and either sharing a vertex or joined by an edge."""
    if nested(s, t):
        return False
    return bool(s.vertices & t.vertices) or adjacent(s, t, within)


def format_tube(t: Tube) -> str:
    """Render as ``{1,2|A,B}`` with sorted vertices and edge ids."""
    vs = ",".join(str(v) for v in t.vertex_list)
    es = ",".join(sorted(t.edge_list))
    return "{" + vs + "|" + es + "}"
