"""Simple undirected graphs stored as per-vertex neighbour bitmasks.

Vertex sets are plain ``int`` bitmasks (bit ``v`` set iff ``v`` is a member);
any iterable of vertex indices is accepted wherever a set is expected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InputError

MAX_VERTICES = 1 << 16


def _check_size(n: int) -> None:
    if n < 1:
        raise InputError(f"graph needs at least one vertex, got n={n}")
    if n > MAX_VERTICES:
        raise InputError(f"graph of {n} vertices exceeds the {MAX_VERTICES}-vertex limit")


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_size(self.n)
        if len(self.adjacency) != self.n:
            raise InputError("adjacency must have one neighbour set per vertex")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adjacency):
            if nb & ~full:
                raise InputError(f"vertex {v} has a neighbour index >= n")
            if (nb >> v) & 1:
                raise InputError(f"self-loop at vertex {v}")
            rest = nb
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                if not (self.adjacency[u] >> v) & 1:
                    raise InputError(f"edge {v}-{u} is not symmetric")
                rest ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        _check_size(n)
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            nb = self.adjacency[u] >> (u + 1)
            v = u + 1
            while nb:
                if nb & 1:
                    out.append((u, v))
                nb >>= 1
                v += 1
        return out

    @property
    def edge_count(self) -> int:
        return sum(nb.bit_count() for nb in self.adjacency) // 2

    def degrees(self) -> list[int]:
        return [nb.bit_count() for nb in self.adjacency]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) == 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adjacency[u] >> v) & 1)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; new vertex ``k`` is ``vertices[k]``."""
        pos = {v: k for k, v in enumerate(vertices)}
        edges = [
            (pos[u], pos[v])
            for u, v in combinations(vertices, 2)
            if self.has_edge(u, v)
        ]
        return Graph.from_edges(len(vertices), edges)

    def relabel(self, order: Sequence[int]) -> "Graph":
        """Graph in which vertex ``k`` is the old vertex ``order[k]``."""
        return self.induced(order)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        try:
            n = int(data["n"])
            raw = data["edges"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"graph JSON needs integer 'n' and list 'edges': {exc}") from exc
        seen = set()
        for e in raw:
            if len(e) != 2:
                raise InputError(f"edge {e!r} must have two endpoints")
            u, v = int(e[0]), int(e[1])
            if not 0 <= u < v < n:
                raise InputError(f"edge {e!r} must satisfy 0 <= u < v < n")
            if (u, v) in seen:
                raise InputError(f"duplicate edge {e!r}")
            seen.add((u, v))
        return cls.from_edges(n, seen)


def load_graph_json(path) -> Graph:
    with open(path) as fh:
        return Graph.from_json(json.load(fh))


def as_mask(g: Graph, a) -> int:
    """Normalise a vertex set (bitmask or iterable of indices) to a bitmask."""
    if isinstance(a, int):
        if a < 0 or a >> g.n:
            raise InputError(f"vertex set {a:#x} has members outside 0..{g.n - 1}")
        return a
    mask = 0
    for v in a:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} outside 0..{g.n - 1}")
        mask |= 1 << v
    return mask


def inner_edge_count(g: Graph, a) -> int:
    """Number of edges with both ends in ``a`` (each edge counted once)."""
    mask = as_mask(g, a)
    total = 0
    rest = mask
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        total += (g.adjacency[v] & mask).bit_count()
        rest ^= low
    return total // 2


def cross_edge_count(g: Graph, a, b) -> int:
    """Number of ordered pairs ``(u, v)`` with ``u in a``, ``v in b`` and ``uv`` an edge.

    Ordered pairs: ``cross_edge_count(g, a, a) == 2 * inner_edge_count(g, a)``.
    """
    ma, mb = as_mask(g, a), as_mask(g, b)
    total = 0
    rest = ma
    while rest:
        low = rest & -rest
        total += (g.adjacency[low.bit_length() - 1] & mb).bit_count()
        rest ^= low
    return total


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Vertex ``(x, y)`` gets index ``x * h.n + y``."""
    n = g.n * h.n
    _check_size(n)
    edges = []
    for x in range(g.n):
        for y, v in h.edges():
            edges.append((x * h.n + y, x * h.n + v))
    for x, u in g.edges():
        for y in range(h.n):
            edges.append((x * h.n + y, u * h.n + y))
    return Graph.from_edges(n, edges)


def cartesian_power(g: Graph, k: int) -> Graph:
    if k < 1:
        raise InputError(f"power must be >= 1, got {k}")
    _check_size(g.n**k)
    out = g
    for _ in range(k - 1):
        out = cartesian_product(out, g)
    return out


def disjoint_union(g: Graph, h: Graph) -> Graph:
    n = g.n + h.n
    _check_size(n)
    edges = g.edges() + [(u + g.n, v + g.n) for u, v in h.edges()]
    return Graph.from_edges(n, edges)


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union plus every edge between the two parts."""
    n = g.n + h.n
    _check_size(n)
    edges = g.edges() + [(u + g.n, v + g.n) for u, v in h.edges()]
    edges += [(u, g.n + v) for u in range(g.n) for v in range(h.n)]
    return Graph.from_edges(n, edges)


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple((~nb & full) & ~(1 << v) for v, nb in enumerate(g.adjacency)))


def find_isomorphism(g: Graph, h: Graph) -> list[int] | None:
    """Backtracking search for a map ``phi`` with ``uv in g <=> phi(u)phi(v) in h``.

    Intended for tiny graphs only (n <= 10).
    """
    if g.n != h.n or g.edge_count != h.edge_count:
        return None
    if sorted(g.degrees()) != sorted(h.degrees()):
        return None
    n = g.n
    dg, dh = g.degrees(), h.degrees()
    phi = [-1] * n
    used = [False] * n

    def extend(v: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if used[w] or dg[v] != dh[w]:
                continue
            if all(g.has_edge(v, u) == h.has_edge(w, phi[u]) for u in range(v)):
                phi[v] = w
                used[w] = True
                if extend(v + 1):
                    return True
                used[w] = False
        phi[v] = -1
        return False

    return list(phi) if extend(0) else None
