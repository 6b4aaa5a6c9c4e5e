"""Exhaustive edge-isoperimetric oracle for small graphs.

Everything here is exact: results are either correct or an error is raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .delta import DeltaSequence
from .errors import CapacityError, InputError
from .graph import Graph

EXACT_LIMIT = 24
ORDER_LIMIT = 20


@dataclass(frozen=True)
class EipProfile:
    n: int
    I: tuple[int, ...]

    @property
    def delta(self) -> DeltaSequence:
        return DeltaSequence(self.I[m] - self.I[m - 1] for m in range(1, self.n + 1))


@dataclass(frozen=True)
class OrderSearchResult:
    found: bool
    order: tuple[int, ...] | None = None
    # number of optimal sets reachable by a nested chain, per size
    layer_sizes: tuple[int, ...] = field(default=(), compare=False)


def _check_limit(g: Graph, limit: int) -> None:
    if g.n > limit:
        raise CapacityError(
            f"exhaustive search is limited to n <= {limit} vertices (got n={g.n}); "
            "for squares of ordered graphs use the downset engine instead"
        )


def subset_edge_counts(g: Graph, limit: int = EXACT_LIMIT) -> np.ndarray:
    """Array ``e`` with ``e[S]`` = inner edge count of the vertex bitmask ``S``."""
    _check_limit(g, limit)
    return _subset_edge_counts(g.n, g.adjacency)


@lru_cache(maxsize=8)
def _subset_edge_counts(n: int, adjacency: tuple[int, ...]) -> np.ndarray:
    dtype = np.int16 if n <= 24 else np.int32
    e = np.zeros(1 << n, dtype=dtype)
    for k in range(n):
        lo = np.arange(1 << k, dtype=np.uint32)
        e[1 << k : 1 << (k + 1)] = e[: 1 << k] + np.bitwise_count(lo & np.uint32(adjacency[k]))
    e.flags.writeable = False
    return e


@lru_cache(maxsize=4)
def _popcounts(n: int) -> np.ndarray:
    pc = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.uint8)
    pc.flags.writeable = False
    return pc


def eip_profile(g: Graph, limit: int = EXACT_LIMIT) -> EipProfile:
    e = subset_edge_counts(g, limit)
    pc = _popcounts(g.n)
    return EipProfile(g.n, tuple(int(e[pc == m].max()) for m in range(g.n + 1)))


def max_inner_edges(g: Graph, m: int, limit: int = EXACT_LIMIT) -> int:
    """Maximum inner edges over all ``m``-subsets, by depth-first branch and bound.

    Vertices are chosen in increasing index order; a branch is cut when the edges
    already inside plus an upper bound on what ``r`` more picks can add cannot beat
    the incumbent. The bound is ``C(r,2) + r * min(k, maxdeg)`` for ``k`` chosen.
    """
    _check_limit(g, limit)
    if not 0 <= m <= g.n:
        raise InputError(f"set size m={m} outside 0..{g.n}")
    if m < 2:
        return 0
    adj = g.adjacency
    maxdeg = max(g.degrees())
    n = g.n
    best = -1

    def search(start: int, chosen: int, k: int, edges: int) -> None:
        nonlocal best
        r = m - k
        if r == 0:
            if edges > best:
                best = edges
            return
        if n - start < r:
            return
        if edges + r * (r - 1) // 2 + r * min(k, maxdeg) <= best:
            return
        for v in range(start, n - r + 1):
            search(v + 1, chosen | (1 << v), k + 1, edges + (adj[v] & chosen).bit_count())

    search(0, 0, 0, 0)
    return best


def delta_from_graph(g: Graph, limit: int = EXACT_LIMIT) -> DeltaSequence:
    return eip_profile(g, limit).delta


def delta_of_order(g: Graph, order) -> DeltaSequence:
    """Increments along a given order: edges from each vertex back to its predecessors.

    Equals the graph's delta-sequence whenever ``order`` is optimal.
    """
    seen = 0
    out = []
    for v in order:
        out.append((g.adjacency[v] & seen).bit_count())
        seen |= 1 << v
    return DeltaSequence(out)


def find_nested_order(g: Graph, limit: int = ORDER_LIMIT) -> OrderSearchResult:
    """Search for a vertex order whose every prefix is an optimal set.

    Layer ``m`` holds the optimal ``m``-sets reachable from the empty set through
    optimal sets only; each set is stored once (with one parent), so the search is
    exhaustive and ``found=False`` proves that no optimal order exists.
    """
    _check_limit(g, limit)
    n = g.n
    e = subset_edge_counts(g, max(limit, n))
    best = eip_profile(g, max(limit, n)).I
    bits = np.array([1 << v for v in range(n)], dtype=np.int64)
    layer = np.zeros(1, dtype=np.int64)
    parents: list[tuple[np.ndarray, np.ndarray]] = []
    sizes = [1]
    for m in range(1, n + 1):
        cand = layer[:, None] | bits[None, :]
        fresh = (layer[:, None] & bits[None, :]) == 0
        par = np.broadcast_to(layer[:, None], cand.shape)
        cand, par = cand[fresh], par[fresh]
        keep = e[cand] == best[m]
        cand, par = cand[keep], par[keep]
        if cand.size == 0:
            return OrderSearchResult(False, None, tuple(sizes))
        uniq, idx = np.unique(cand, return_index=True)
        parents.append((uniq, par[idx]))
        layer = uniq
        sizes.append(int(uniq.size))
    order = []
    cur = (1 << n) - 1
    for uniq, par in reversed(parents):
        j = int(np.searchsorted(uniq, cur))
        prev = int(par[j])
        order.append((cur ^ prev).bit_length() - 1)
        cur = prev
    order.reverse()
    return OrderSearchResult(True, tuple(order), tuple(sizes))


def is_optimal_order(g: Graph, order, profile: EipProfile | None = None) -> bool:
    profile = profile or eip_profile(g)
    return tuple(delta_of_order(g, order).prefix_sums()) == profile.I


def complement_duality_check(g: Graph, limit: int = EXACT_LIMIT) -> bool:
    """Check ``I(n-m) == I(m) + k*n/2 - k*m`` for a ``k``-regular graph.

    This is the edge count identity behind "a set is optimal iff its complement is".
    """
    if not g.is_regular():
        raise InputError("complement duality needs a regular graph")
    k = g.degrees()[0]
    prof = eip_profile(g, limit)
    n = g.n
    return all(prof.I[n - m] == prof.I[m] + k * n // 2 - k * m for m in range(n + 1))
