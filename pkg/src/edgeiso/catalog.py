"""Named graph families used throughout the study."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InputError
from .graph import Graph, cartesian_power, disjoint_union


@dataclass(frozen=True)
class OneFactorization:
    p: int
    matchings: tuple[tuple[tuple[int, int], ...], ...]

    def validate(self) -> None:
        seen: set[tuple[int, int]] = set()
        for m in self.matchings:
            covered = [v for e in m for v in e]
            if sorted(covered) != list(range(self.p)):
                raise InputError(f"matching {m} is not perfect on {self.p} vertices")
            for e in m:
                if e in seen:
                    raise InputError(f"edge {e} appears in two matchings")
                seen.add(e)
        if seen != set(combinations(range(self.p), 2)):
            raise InputError("matchings do not cover every edge of K_p")


def round_robin_one_factorization(p: int) -> OneFactorization:
    """Circle method: vertex p-1 stays fixed, vertices 0..p-2 rotate."""
    if p < 2 or p % 2:
        raise InputError(f"one-factorization of K_p needs even p >= 2, got p={p}")
    r = p - 1
    rounds = []
    for k in range(r):
        pairs = [(k, p - 1)]
        for j in range(1, p // 2):
            a, b = (k + j) % r, (k - j) % r
            pairs.append((min(a, b), max(a, b)))
        rounds.append(tuple(sorted(pairs)))
    return OneFactorization(p, tuple(rounds))


def _require(cond: bool, family: str, rule: str) -> None:
    if not cond:
        raise InputError(f"{family}: requires {rule}")


def complete(p: int) -> Graph:
    return Graph.from_edges(p, combinations(range(p), 2))


def cycle(p: int) -> Graph:
    return Graph.from_edges(p, [(v, (v + 1) % p) for v in range(p)])


def path(p: int) -> Graph:
    return Graph.from_edges(p, [(v, v + 1) for v in range(p - 1)])


def petersen() -> Graph:
    outer = [(v, (v + 1) % 5) for v in range(5)]
    spokes = [(v, v + 5) for v in range(5)]
    inner = [(5 + v, 5 + (v + 2) % 5) for v in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def complete_bipartite_minus_matchings(p: int, s: int) -> Graph:
    """K_{p,p} on parts 0..p-1 / p..2p-1, minus matchings a -> p + (a+k) mod p for k < s."""
    removed = {(a, p + (a + k) % p) for k in range(s) for a in range(p)}
    return Graph.from_edges(
        2 * p,
        [(a, p + b) for a in range(p) for b in range(p) if (a, p + b) not in removed],
    )


def clique_minus_matchings(p: int, s: int) -> Graph:
    """K_p minus the first ``s`` rounds of the round-robin one-factorization."""
    removed = {e for m in round_robin_one_factorization(p).matchings[:s] for e in m}
    return Graph.from_edges(p, [e for e in combinations(range(p), 2) if e not in removed])


def clique_minus_circulant(p: int, steps: tuple[int, ...]) -> Graph:
    removed = set()
    for k in steps:
        for v in range(p):
            u = (v + k) % p
            removed.add((min(u, v), max(u, v)))
    return Graph.from_edges(p, [e for e in combinations(range(p), 2) if e not in removed])


def circulant(p: int, steps: tuple[int, ...]) -> Graph:
    edges = set()
    for k in steps:
        for v in range(p):
            u = (v + k) % p
            edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(p, edges)


def perfect_matching_decomposition(g: Graph, s: int) -> list[list[tuple[int, int]]] | None:
    """Split the edges of an ``s``-regular graph into ``s`` perfect matchings, or return None.

    Backtracking edge colouring; meant for the handful of removed factors checked in tests.
    """
    if g.n % 2 or any(k != s for k in g.degrees()):
        return None
    edges = g.edges()
    colour_at = [0] * g.n  # bitmask of colours used at each vertex
    colours: list[int] = []

    def place(k: int) -> bool:
        if k == len(edges):
            return True
        u, v = edges[k]
        used = colour_at[u] | colour_at[v]
        # symmetry: never open colour c+1 before colour c
        top = max(colours, default=-1) + 1
        for c in range(min(s, top + 1)):
            if not (used >> c) & 1:
                colours.append(c)
                colour_at[u] |= 1 << c
                colour_at[v] |= 1 << c
                if place(k + 1):
                    return True
                colour_at[u] &= ~(1 << c)
                colour_at[v] &= ~(1 << c)
                colours.pop()
        return False

    if not place(0):
        return None
    out: list[list[tuple[int, int]]] = [[] for _ in range(s)]
    for e, c in zip(edges, colours):
        out[c].append(e)
    return out


def complete_multipartite(t: int, p: int) -> Graph:
    n = t * p
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if u // p != v // p])


def disjoint_cliques(s: int, i: int) -> Graph:
    g = complete(i)
    out = g
    for _ in range(s - 1):
        out = disjoint_union(out, g)
    return out


# family name -> number of integer parameters
FAMILIES = {
    "K": 1,
    "C": 1,
    "path": 1,
    "Q": 1,
    "Kpp": 1,
    "KppmM": 2,
    "KmM": 2,
    "KmC": 1,
    "Km2C": 1,
    "Kmulti": 2,
    "petersen": 0,
    "sKi": 2,
    "hspi": 3,
    # circulant on p vertices with the given steps; any number of steps >= 1
    "circ": -1,
}


def catalog_build(family: str, *params: int) -> Graph:
    """Build a named family member; raises :class:`InputError` naming any violated rule."""
    if family not in FAMILIES:
        raise InputError(f"unknown graph family {family!r}; known: {', '.join(FAMILIES)}")
    arity = FAMILIES[family]
    if arity < 0 and len(params) < 2:
        raise InputError(f"{family} takes p followed by at least one step")
    if arity >= 0 and len(params) != arity:
        raise InputError(f"{family} takes {arity} integer parameter(s), got {len(params)}")
    for x in params:
        if not isinstance(x, int) or isinstance(x, bool):
            raise InputError(f"{family}: parameters must be integers, got {x!r}")

    if family == "K":
        (p,) = params
        _require(p >= 1, family, "p >= 1")
        return complete(p)
    if family == "C":
        (p,) = params
        _require(p >= 3, family, "p >= 3")
        return cycle(p)
    if family == "path":
        (p,) = params
        _require(p >= 1, family, "p >= 1")
        return path(p)
    if family == "Q":
        (d,) = params
        _require(1 <= d <= 16, family, "1 <= d <= 16")
        return cartesian_power(complete(2), d)
    if family == "Kpp":
        (p,) = params
        _require(p >= 1, family, "p >= 1")
        return complete_bipartite_minus_matchings(p, 0)
    if family == "KppmM":
        p, s = params
        _require(p >= 1, family, "p >= 1")
        _require(0 <= s <= p, family, "0 <= s <= p")
        return complete_bipartite_minus_matchings(p, s)
    if family == "KmM":
        p, s = params
        _require(p >= 2 and p % 2 == 0, family, "p even and p >= 2")
        _require(0 <= s <= p - 1, family, "0 <= s <= p-1")
        return clique_minus_matchings(p, s)
    if family == "KmC":
        (p,) = params
        _require(p >= 3, family, "p >= 3")
        return clique_minus_circulant(p, (1,))
    if family == "Km2C":
        (p,) = params
        _require(p >= 5, family, "p >= 5")
        return clique_minus_circulant(p, (1, 2))
    if family == "Kmulti":
        t, p = params
        _require(t >= 1 and p >= 1, family, "t >= 1 and p >= 1")
        return complete_multipartite(t, p)
    if family == "petersen":
        return petersen()
    if family == "circ":
        p, *steps = params
        _require(p >= 3, family, "p >= 3")
        _require(all(1 <= k <= p // 2 for k in steps), family, "every step in 1..p/2")
        _require(len(set(steps)) == len(steps), family, "distinct steps")
        return circulant(p, tuple(steps))
    if family == "sKi":
        s, i = params
        _require(s >= 1 and i >= 1, family, "s >= 1 and i >= 1")
        return disjoint_cliques(s, i)
    # hspi
    s, p, i = params
    _require(s >= 1 and p >= 1 and 1 <= i <= p, family, "s >= 1, p >= 1, 1 <= i <= p")
    _require(p % i == 0, family, "i divides p")
    from .compose import realize_hspi

    return realize_hspi(s, p, i).graph


__all__ = [
    "OneFactorization",
    "round_robin_one_factorization",
    "catalog_build",
    "FAMILIES",
    "circulant",
    "perfect_matching_decomposition",
]
