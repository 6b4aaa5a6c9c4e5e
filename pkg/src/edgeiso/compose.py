"""Graphs with optimal orders built by joining partials of one ordered graph."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .catalog import disjoint_cliques
from .delta import DeltaSequence, HspiParams, hspi_delta, monotonic_segments
from .errors import InputError
from .exact import ORDER_LIMIT, EipProfile, delta_of_order, eip_profile, find_nested_order
from .graph import Graph, join


@dataclass(frozen=True, eq=False)
class OrderedGraph:
    graph: Graph
    order: tuple[int, ...]
    profile: EipProfile | None
    # False when the graph was too large to re-check prefix optimality
    verified: bool

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def delta(self) -> DeltaSequence:
        return delta_of_order(self.graph, self.order)

    def to_json(self) -> dict:
        data = self.graph.to_json()
        data["order"] = list(self.order)
        if not self.verified:
            data["note"] = "order asserted by theorem, not re-verified"
        return data


def ordered(graph: Graph, order: Sequence[int] | None = None, verify_limit: int = ORDER_LIMIT) -> OrderedGraph:
    """Attach an optimal order, searching for one when ``order`` is omitted."""
    if order is None:
        res = find_nested_order(graph)
        if not res.found:
            raise InputError("graph admits no optimal order")
        return OrderedGraph(graph, res.order, eip_profile(graph), True)
    order = tuple(order)
    if sorted(order) != list(range(graph.n)):
        raise InputError("order must be a permutation of the vertices")
    if graph.n > verify_limit:
        return OrderedGraph(graph, order, None, False)
    prof = eip_profile(graph)
    if tuple(delta_of_order(graph, order).prefix_sums()) != prof.I:
        raise InputError("order is not optimal: some prefix is not an optimal set")
    return OrderedGraph(graph, order, prof, True)


@dataclass(frozen=True, eq=False)
class Partial:
    parent: OrderedGraph
    size: int
    # induced on the first ``size`` ordered vertices, relabelled so the inherited order is 0, 1, ...
    graph: Graph

    @property
    def delta(self) -> DeltaSequence:
        return delta_of_order(self.graph, range(self.size))


def partial_graph(og: OrderedGraph, i: int) -> Partial:
    if not 1 <= i <= og.n:
        raise InputError(f"partial size must be in 1..{og.n}, got {i}")
    sub = og.graph.induced(og.order[:i])
    if i <= ORDER_LIMIT:
        prof = eip_profile(sub)
        if tuple(delta_of_order(sub, range(i)).prefix_sums()) != prof.I:
            raise InputError("inherited order is not optimal for the partial")
    return Partial(og, i, sub)


def compose_ordered(partials: Sequence[Partial], verify_limit: int = ORDER_LIMIT) -> OrderedGraph:
    """Join partials of one ordered graph and order the result.

    A vertex in monotonic set ``s`` of partial ``j`` at local position ``r`` sorts by
    ``(s, j, r)``: first by monotonic set index, then by partial, then locally.
    """
    if not partials:
        raise InputError("need at least one partial")
    parent = partials[0].parent
    if any(pt.parent is not parent for pt in partials):
        raise InputError("all partials must come from the same ordered graph")
    sizes = [pt.size for pt in partials]
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        raise InputError(f"partial sizes must be nonincreasing, got {sizes}")

    graph = partials[0].graph
    for pt in partials[1:]:
        graph = join(graph, pt.graph)

    keys = []
    offset = 0
    for j, pt in enumerate(partials):
        seg_of = monotonic_segments(pt.delta).segment_of()
        for r in range(pt.size):
            keys.append(((seg_of[r], j, r), offset + r))
        offset += pt.size
    order = [v for _, v in sorted(keys)]
    if graph.n > verify_limit:
        return OrderedGraph(graph, tuple(order), None, False)
    return ordered(graph, order, verify_limit)


def realize_hspi(s: int, p: int, i: int, verify_limit: int = ORDER_LIMIT) -> OrderedGraph:
    """H(s,p,i) for ``i | p``: ``p/i`` joined copies of ``s`` disjoint ``K_i`` (clique-by-clique order)."""
    params = HspiParams(s, p, i)
    if p % i:
        raise InputError(f"H(s,p,i) is only constructed when i divides p; got p={p}, i={i}")
    base = disjoint_cliques(s, i)
    og = ordered(base, range(base.n), verify_limit)
    copies = [partial_graph(og, base.n)] * (p // i)
    out = compose_ordered(copies, verify_limit)
    if out.delta != hspi_delta(params):
        raise AssertionError(f"composition delta {list(out.delta)} != H{(s, p, i)} pattern")
    return out


@dataclass(frozen=True)
class MonotonicStructure:
    cliques: bool
    back_degrees: bool
    remark_inequality: bool

    def __bool__(self) -> bool:
        return self.cliques and self.back_degrees and self.remark_inequality


def verify_monotonic_structure(og: OrderedGraph) -> MonotonicStructure:
    """Check the clique structure forced by an optimal order.

    Each monotonic set must be a clique, each of its vertices must see exactly
    ``d[a]`` vertices of the earlier sets (``a`` = first index of the segment), and
    for sets ``k < l`` members of set ``k`` see at least as much of ``X`` as members
    of set ``l``, where ``X`` is the union of all sets before ``k``.

    Only that ``X`` is checked. Smaller ``X`` inside the union can break the
    inequality: the octahedron H(3,2,1) with ``X`` a single vertex, and the Petersen
    graph with ``X`` the first monotonic set while comparing sets 2 and 3.
    """
    g = og.graph
    d = og.delta
    segs = monotonic_segments(d).segments
    sets = [[og.order[t] for t in range(a, b + 1)] for a, b in segs]
    masks = [sum(1 << v for v in m) for m in sets]

    cliques = all(g.has_edge(u, v) for m in sets for u, v in combinations(m, 2))

    back = True
    earlier = 0
    for (a, _), m, mk in zip(segs, sets, masks):
        if any((g.adjacency[u] & earlier).bit_count() != d[a] for u in m):
            back = False
        earlier |= mk

    remark = True
    for k in range(len(sets)):
        x = sum(masks[:k])
        lo_k = min((g.adjacency[u] & x).bit_count() for u in sets[k])
        later = [v for m in sets[k + 1 :] for v in m]
        if later and max((g.adjacency[v] & x).bit_count() for v in later) > lo_k:
            remark = False
    return MonotonicStructure(cliques, back, remark)
