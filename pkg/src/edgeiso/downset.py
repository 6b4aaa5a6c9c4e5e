"""Maximum-weight downsets of the square matrix of an ordered vertex set.

Cell ``(x, y)`` (column ``x``, row ``y``, both 0-based) weighs ``d[x] + d[y]``.
A downset is a Young diagram given by nonincreasing column heights; for a graph
with an optimal order its weight equals the inner edge count of the matching
compressed subset of the Cartesian square.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from itertools import accumulate
from typing import Sequence

import numpy as np

from .delta import DeltaSequence, HspiParams, hspi_delta
from .errors import CapacityError, InputError

DP_LIMIT = 128
CHAIN_LIMIT = 12
CHAIN_CAP = 2_000_000
CUBE_LIMIT = 6

_NEG = np.int64(-(1 << 60))


@dataclass(frozen=True)
class YoungDiagram:
    heights: tuple[int, ...]

    def __post_init__(self) -> None:
        h = self.heights
        n = len(h)
        if any(not 0 <= v <= n for v in h):
            raise InputError(f"column heights must lie in 0..{n}: {h}")
        if any(h[k] < h[k + 1] for k in range(n - 1)):
            raise InputError(f"column heights must be nonincreasing: {h}")

    @classmethod
    def empty(cls, n: int) -> "YoungDiagram":
        return cls((0,) * n)

    @classmethod
    def from_cells(cls, n: int, cells) -> "YoungDiagram":
        cells = set(cells)
        heights = [0] * n
        for x, y in cells:
            if not (0 <= x < n and 0 <= y < n):
                raise InputError(f"cell {(x, y)} outside the {n}x{n} matrix")
            heights[x] += 1
        diag = cls(tuple(heights))
        if diag.cells() != cells:
            raise InputError("cells do not form a downset")
        return diag

    @property
    def size(self) -> int:
        return sum(self.heights)

    def cells(self) -> set[tuple[int, int]]:
        return {(x, y) for x, h in enumerate(self.heights) for y in range(h)}

    def addable(self) -> list[int]:
        """Columns whose next cell can be added while staying a downset."""
        h = self.heights
        n = len(h)
        return [x for x in range(n) if h[x] < n and (x == 0 or h[x - 1] > h[x])]

    def add(self, x: int) -> "YoungDiagram":
        h = list(self.heights)
        h[x] += 1
        return YoungDiagram(tuple(h))


def _column_weights(d: Sequence[int]) -> np.ndarray:
    """``cw[x, h]``: weight of column ``x`` filled to height ``h``."""
    n = len(d)
    dv = np.asarray(d, dtype=np.int64)
    prefix = np.concatenate(([0], np.cumsum(dv)))
    hs = np.arange(n + 1, dtype=np.int64)
    return hs[None, :] * dv[:, None] + prefix[None, :]


def downset_weight(d: Sequence[int], y: YoungDiagram) -> int:
    if len(y.heights) != len(d):
        raise InputError(f"diagram has {len(y.heights)} columns, delta-sequence has {len(d)}")
    prefix = list(accumulate(d, initial=0))
    return sum(h * d[x] + prefix[h] for x, h in enumerate(y.heights))


def max_weight_by_size(d: Sequence[int], limit: int = DP_LIMIT) -> list[int]:
    """``W[m]`` = maximum weight of an ``m``-cell downset, for ``m = 0..N^2``.

    Column DP: state is (column, its height, cells used so far). The best
    predecessor for height ``h`` is a suffix maximum over previous heights ``>= h``.
    """
    n = len(d)
    if n > limit:
        raise CapacityError(f"downset DP is limited to N <= {limit}, got N={n}")
    cw = _column_weights(d)
    size = n * n + 1
    f = np.full((n + 1, size), _NEG, dtype=np.int64)
    for h in range(n + 1):
        f[h, h] = cw[0, h]
    for x in range(1, n):
        g = np.maximum.accumulate(f[::-1], axis=0)[::-1]
        nf = np.full_like(f, _NEG)
        for h in range(n + 1):
            src = g[h, : size - h]
            nf[h, h:] = np.where(src > _NEG, src + cw[x, h], _NEG)
        f = nf
    w = f.max(axis=0)
    return [int(v) for v in w]


def lex_prefix_weight(d: Sequence[int], m: int) -> int:
    """Weight of the first ``m`` cells in lexicographic order (full columns, then a partial one)."""
    n = len(d)
    if not 0 <= m <= n * n:
        raise InputError(f"m={m} outside 0..{n * n}")
    k, r = divmod(m, n)
    heights = (n,) * k + ((r,) if k < n else ()) + (0,) * max(0, n - k - 1)
    return downset_weight(d, YoungDiagram(heights))


def lex_weights(d: Sequence[int]) -> list[int]:
    return [lex_prefix_weight(d, m) for m in range(len(d) ** 2 + 1)]


def increments(w: Sequence[int]) -> list[int]:
    return [w[m] - w[m - 1] for m in range(1, len(w))]


def lemma1_violation(seq: Sequence[int]) -> int | None:
    """Smallest ``m`` with ``seq[m+1] > seq[m] + 1``; such a jump rules out any optimal order."""
    for m in range(len(seq) - 1):
        if seq[m + 1] > seq[m] + 1:
            return m
    return None


@dataclass(frozen=True)
class ChainResult:
    status: str  # "exists" | "none" | "cap-exceeded"
    chain: tuple[YoungDiagram, ...] = ()
    # number of reachable maximum-weight diagrams per size
    layer_sizes: tuple[int, ...] = ()

    @property
    def exists(self) -> bool | None:
        return {"exists": True, "none": False}.get(self.status)


def optimal_chain(
    d: Sequence[int], W: Sequence[int] | None = None, limit: int = CHAIN_LIMIT, cap: int = CHAIN_CAP
) -> ChainResult:
    """Search for nested maximum-weight downsets ``D_0 < D_1 < ... < D_{N^2}``.

    Layer ``m`` holds every maximum-weight ``m``-cell diagram reachable from the empty
    diagram by single-cell additions through maximum-weight diagrams only.
    """
    n = len(d)
    if n > limit:
        raise CapacityError(f"chain search is limited to N <= {limit}, got N={n}")
    if W is None:
        W = max_weight_by_size(d)
    layer: dict[tuple[int, ...], tuple[int, ...] | None] = {(0,) * n: None}
    history = [layer]
    sizes = [1]
    for m in range(1, n * n + 1):
        gain = W[m] - W[m - 1]
        nxt: dict[tuple[int, ...], tuple[int, ...]] = {}
        for h in layer:
            for x in range(n):
                hx = h[x]
                if hx < n and (x == 0 or h[x - 1] > hx) and d[x] + d[hx] == gain:
                    child = h[:x] + (hx + 1,) + h[x + 1 :]
                    if child not in nxt:
                        nxt[child] = h
        if not nxt:
            return ChainResult("none", (), tuple(sizes))
        if len(nxt) > cap:
            return ChainResult("cap-exceeded", (), tuple(sizes))
        layer = nxt
        history.append(layer)
        sizes.append(len(layer))
    chain = []
    cur: tuple[int, ...] | None = (n,) * n
    for m in range(n * n, -1, -1):
        chain.append(YoungDiagram(cur))
        cur = history[m][cur]
    chain.reverse()
    return ChainResult("exists", tuple(chain), tuple(sizes))


def optimal_chain_exists(d: Sequence[int], limit: int = CHAIN_LIMIT) -> bool:
    res = optimal_chain(d, limit=limit)
    if res.status == "cap-exceeded":
        raise CapacityError(f"more than {CHAIN_CAP} maximum-weight diagrams in one layer")
    return res.status == "exists"


@dataclass(frozen=True)
class SquareReport:
    N: int
    delta: list[int]
    W: list[int]
    lexW: list[int]
    lex_optimal: bool
    first_gap: int | None
    delta_square: list[int]
    lemma1_violation: int | None
    chain_exists: bool | str

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_rows(self) -> list[list[int | str]]:
        rows: list[list[int | str]] = [["m", "W", "lexW", "gap"]]
        for m, (a, b) in enumerate(zip(self.W, self.lexW)):
            rows.append([m, a, b, a - b])
        return rows

    @property
    def isoperimetric(self) -> bool:
        return self.lex_optimal or self.chain_exists is True

    @property
    def verdict(self) -> str:
        if self.lex_optimal:
            return "lex-optimal"
        if self.chain_exists is True:
            return "chain-only"
        if self.lemma1_violation is not None:
            return "lemma1-refuted"
        return "no-chain-found"


def square_lex_report(d: Sequence[int], chain_limit: int = CHAIN_LIMIT) -> SquareReport:
    d = DeltaSequence(d)
    n = len(d)
    if n > DP_LIMIT:
        raise CapacityError(f"square report is limited to N <= {DP_LIMIT}, got N={n}")
    W = max_weight_by_size(d)
    lexW = lex_weights(d)
    gaps = [m for m in range(len(W)) if lexW[m] < W[m]]
    dsq = increments(W)
    if n <= chain_limit:
        res = optimal_chain(d, W)
        chain: bool | str = res.exists if res.exists is not None else res.status
    else:
        chain = "skipped"
    return SquareReport(
        N=n,
        delta=list(d),
        W=W,
        lexW=lexW,
        lex_optimal=not gaps,
        first_gap=gaps[0] if gaps else None,
        delta_square=dsq,
        lemma1_violation=lemma1_violation(dsq),
        chain_exists=chain,
    )


@dataclass(frozen=True)
class MarginalContext:
    base: YoungDiagram
    addition: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        n = len(self.base.heights)
        cells = self.base.cells()
        add = set(self.addition)
        if len(add) != len(self.addition):
            raise InputError("addition lists a cell twice")
        if cells & add:
            raise InputError("addition overlaps the base diagram")
        YoungDiagram.from_cells(n, cells | add)

    @property
    def union(self) -> YoungDiagram:
        n = len(self.base.heights)
        return YoungDiagram.from_cells(n, self.base.cells() | set(self.addition))


def marginal_gain(d: Sequence[int], ctx: MarginalContext) -> int:
    """Edges gained by adding ``ctx.addition`` to ``ctx.base``."""
    return downset_weight(d, ctx.union) - downset_weight(d, ctx.base)


def _column_base(n: int, x: int, height: int) -> YoungDiagram:
    """Full columns left of ``x``, column ``x`` at ``height``, empty to the right."""
    return YoungDiagram((n,) * x + (height,) + (0,) * (n - x - 1))


def random_shift_instance(params: HspiParams, case: str, rng: random.Random) -> dict:
    """Random instance for :func:`shift_identity_check` valid inside ``N = s*p``."""
    s, p = params.s, params.p
    n = s * p
    if case == "L1":
        if s < 2:
            raise InputError("L1 needs s >= 2")
        q = rng.randint(1, s - 1)
        y = rng.randrange(0, n - q * p)
        return {"x": rng.randrange(n), "y": y, "q": q}
    if case == "L2":
        b = rng.randrange(0, n - p + 1)
        q = rng.randint(0, n - p - b)
        return {"a": rng.randrange(n), "b": b, "q": q}
    if case == "L4":
        return {"a": rng.randrange(1, n), "h": rng.randint(1, n)}
    raise InputError(f"unknown lemma case {case!r}; use L1, L2 or L4")


def shift_identity_check(params: HspiParams, case: str, instance: dict) -> bool:
    """Evaluate a marginal-gain shift identity on an H(s,p,i) delta-sequence.

    L1: moving one cell up by ``q*p`` rows gains ``q*(p-i)``.
    L2: moving a ``p``-cell column block up by ``q`` rows gains ``q*(p-i)``.
    L4: moving a column segment one column left loses at most its size.
    """
    d = hspi_delta(params)
    n = len(d)
    p, i = params.p, params.i
    try:
        if case == "L1":
            x, y, q = instance["x"], instance["y"], instance["q"]
            lo = marginal_gain(d, MarginalContext(_column_base(n, x, y), ((x, y),)))
            hi = marginal_gain(d, MarginalContext(_column_base(n, x, y + q * p), ((x, y + q * p),)))
            return hi - lo == q * (p - i)
        if case == "L2":
            a, b, q = instance["a"], instance["b"], instance["q"]
            a1 = tuple((a, y) for y in range(b, b + p))
            a2 = tuple((a, y + q) for y in range(b, b + p))
            g1 = marginal_gain(d, MarginalContext(_column_base(n, a, b), a1))
            g2 = marginal_gain(d, MarginalContext(_column_base(n, a, b + q), a2))
            return g2 - g1 == q * (p - i)
        if case == "L4":
            a, h = instance["a"], instance["h"]
            col_a = tuple((a, y) for y in range(h))
            col_b = tuple((a - 1, y) for y in range(h))
            ga = marginal_gain(d, MarginalContext(_column_base(n, a, 0), col_a))
            gb = marginal_gain(d, MarginalContext(_column_base(n, a - 1, 0), col_b))
            return gb - ga >= -h
    except KeyError as exc:
        raise InputError(f"instance for {case} is missing {exc}") from exc
    raise InputError(f"unknown lemma case {case!r}; use L1, L2 or L4")


def _all_diagrams(n: int) -> list[tuple[int, ...]]:
    out = []

    def rec(prefix: list[int], cap: int) -> None:
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for h in range(cap, -1, -1):
            prefix.append(h)
            rec(prefix, h)
            prefix.pop()

    rec([], n)
    return out


def cube_max_weight(d: Sequence[int], limit: int = CUBE_LIMIT) -> list[int]:
    """``W3[m]``: maximum weight of an ``m``-cell downset of the ``N^3`` box.

    Cell ``(x, y, z)`` weighs ``d[x] + d[y] + d[z]``. Layers ``z = 0..N-1`` are 2D
    diagrams, each contained in the one below; the DP state is the current layer.
    """
    n = len(d)
    if n > limit:
        raise CapacityError(f"cube DP is limited to N <= {limit}, got N={n}")
    diags = _all_diagrams(n)
    index = {h: k for k, h in enumerate(diags)}
    sizes = np.array([sum(h) for h in diags])
    w2 = np.array([downset_weight(d, YoungDiagram(h)) for h in diags], dtype=np.int64)
    succ = []
    for h in diags:
        yd = YoungDiagram(h)
        succ.append([index[yd.add(x).heights] for x in yd.addable()])
    by_size_desc = np.argsort(-sizes, kind="stable")
    total = n**3 + 1

    f = np.full((len(diags), total), _NEG, dtype=np.int64)
    for k in range(len(diags)):
        f[k, sizes[k]] = w2[k] + sizes[k] * d[0]
    for z in range(1, n):
        # g[k] = best over layers-so-far whose top layer contains diagram k
        g = f.copy()
        for k in by_size_desc:
            for j in succ[k]:
                np.maximum(g[k], g[j], out=g[k])
        nf = np.full_like(f, _NEG)
        for k in range(len(diags)):
            sz = sizes[k]
            src = g[k, : total - sz]
            nf[k, sz:] = np.where(src > _NEG, src + w2[k] + sz * d[z], _NEG)
        f = nf
    return [int(v) for v in f.max(axis=0)]


def cube_lex_weights(d: Sequence[int]) -> list[int]:
    """Weights of lexicographic prefixes of the ``N^3`` box (first coordinate most significant)."""
    n = len(d)
    out = [0]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                out.append(out[-1] + d[x] + d[y] + d[z])
    return out
