"""Delta-sequence algebra: predicates, segments, closed forms and enumeration.

Sequences are stored 0-based: ``d[j]`` is the increment ``I(j+1) - I(j)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .errors import CapacityError, InputError

MAX_ENUM_LENGTH = 16


class DeltaSequence(tuple):
    """Immutable tuple of non-negative ints with ``d[0] == 0``."""

    def __new__(cls, values: Iterable[int] = ()):
        vals = tuple(int(v) for v in values)
        if not vals:
            raise InputError("delta-sequence must be non-empty")
        if vals[0] != 0:
            raise InputError(f"delta-sequence must start with 0, got {vals[0]}")
        if any(v < 0 for v in vals):
            raise InputError("delta-sequence entries must be non-negative")
        return super().__new__(cls, vals)

    def __repr__(self) -> str:
        return f"DeltaSequence({list(self)})"

    def to_csv(self) -> str:
        return ",".join(str(v) for v in self)

    def to_json(self) -> str:
        return json.dumps(list(self))

    def prefix_sums(self) -> list[int]:
        out = [0]
        for v in self:
            out.append(out[-1] + v)
        return out


def parse_delta(text: str) -> DeltaSequence:
    """Parse ``"0,1,2"`` or ``"[0, 1, 2]"``."""
    text = text.strip()
    try:
        if text.startswith("["):
            vals = json.loads(text)
        else:
            vals = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse delta-sequence {text!r}: {exc}") from exc
    return DeltaSequence(vals)


def is_symmetric(d) -> bool:
    n = len(d)
    return all(d[j] + d[n - 1 - j] == d[n - 1] for j in range(n))


def is_appropriate(d) -> bool:
    if not d or d[0] != 0:
        return False
    if any(v < 1 for v in d[1:]):
        return False
    return all(d[j + 1] <= d[j] + 1 for j in range(len(d) - 1))


@dataclass(frozen=True)
class SegmentDecomposition:
    # inclusive index ranges
    segments: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.segments)

    def lengths(self) -> list[int]:
        return [b - a + 1 for a, b in self.segments]

    def segment_of(self) -> list[int]:
        """Segment index of every position."""
        out = []
        for k, (a, b) in enumerate(self.segments):
            out.extend([k] * (b - a + 1))
        return out


def monotonic_segments(d) -> SegmentDecomposition:
    if not len(d):
        return SegmentDecomposition(())
    segs = []
    start = 0
    for j in range(1, len(d)):
        if d[j] <= d[j - 1]:
            segs.append((start, j - 1))
            start = j
    segs.append((start, len(d) - 1))
    return SegmentDecomposition(tuple(segs))


@dataclass(frozen=True)
class HspiParams:
    s: int
    p: int
    i: int

    def __post_init__(self) -> None:
        if self.s < 1 or self.p < 1 or not 1 <= self.i <= self.p:
            raise InputError(
                f"H(s,p,i) needs s >= 1, p >= 1 and 1 <= i <= p; got ({self.s},{self.p},{self.i})"
            )

    @property
    def in_theorem_range(self) -> bool:
        return 1 <= self.i <= self.p - self.i

    @property
    def size(self) -> int:
        return self.s * self.p


def hspi_delta(params: HspiParams | tuple[int, int, int]) -> DeltaSequence:
    """``s`` strictly increasing runs of length ``p``; run ``j`` starts at ``j*(p-i)``."""
    if not isinstance(params, HspiParams):
        params = HspiParams(*params)
    s, p, i = params.s, params.p, params.i
    return DeltaSequence(j * (p - i) + r for j in range(s) for r in range(p))


def family_delta(family: str, *params: int) -> DeltaSequence:
    """Closed-form delta-sequences of the classical dense regular families.

    ``K(p)``, ``KmM(p, s)`` (clique minus s perfect matchings), ``Kpp(p)``,
    ``KppmM(p, s)`` (only s = 0 has a closed form here), ``KmC(p)`` for odd p >= 5,
    ``Kmulti(t, p)`` and ``hspi(s, p, i)``.
    """
    if family == "K":
        (p,) = params
        return DeltaSequence(range(p))
    if family == "KmM":
        p, s = params
        # two runs: the halves of a bisection crossed by all s matchings are cliques.
        # needs 4s <= p, and other matching choices (round-robin with s >= 3) can differ
        if p % 2 or not 0 <= 4 * s <= p:
            raise InputError("KmM closed form: requires p even and 0 <= s <= p/4")
        h = p // 2
        return DeltaSequence(list(range(h)) + list(range(h - s, p - s)))
    if family == "Kpp":
        (p,) = params
        return DeltaSequence(v for k in range(p) for v in (k, k + 1))
    if family == "KmC":
        (p,) = params
        if p < 5 or p % 2 == 0:
            raise InputError("KmC closed form: requires odd p >= 5")
        h = (p - 3) // 2
        return DeltaSequence(list(range(h + 1)) + [h] + list(range(h, p - 2)))
    if family == "Kmulti":
        t, p = params
        return hspi_delta(HspiParams(p, t, 1))
    if family == "hspi":
        return hspi_delta(HspiParams(*params))
    raise InputError(f"no closed-form delta-sequence for family {family!r}")


def enumerate_appropriate_symmetric(n: int) -> list[DeltaSequence]:
    """All appropriate symmetric sequences of length ``n``, lexicographically sorted.

    Backtracks over ``d[1..n-1]``; the last entry fixes the symmetry target, so it is
    guessed up front and every mirrored pair is checked as soon as both ends exist.
    """
    if n < 1:
        raise InputError("length must be >= 1")
    if n > MAX_ENUM_LENGTH:
        raise CapacityError(f"enumeration is limited to length <= {MAX_ENUM_LENGTH}, got {n}")
    if n == 1:
        return [DeltaSequence((0,))]
    out: list[DeltaSequence] = []
    d = [0] * n

    def extend(j: int, top: int) -> None:
        if j == n:
            out.append(DeltaSequence(d))
            return
        lo = 1
        hi = d[j - 1] + 1
        mirror = n - 1 - j
        if mirror <= j:
            # value is forced by symmetry (middle entry: 2*d[j] == top)
            if mirror == j:
                if top % 2:
                    return
                v = top // 2
            else:
                v = top - d[mirror]
            if lo <= v <= hi:
                d[j] = v
                extend(j + 1, top)
            return
        for v in range(lo, hi + 1):
            d[j] = v
            extend(j + 1, top)

    # top = d[n-1] <= n-1 because increments are at most 1
    for top in range(1, n):
        extend(1, top)
    out.sort()
    return out


TABLES: dict[int, list[tuple[tuple[int, ...], str]]] = {
    1: [
        ((0, 1, 1, 2, 2, 2, 3, 3, 4), "interesting new graph*"),
        ((0, 1, 2, 1, 2, 3, 2, 3, 4), "K_3xK_3 or K_9-2C_9* or K_9-(K_3xK_3)*"),
        ((0, 1, 2, 2, 3, 4, 4, 5, 6), "K_{3,3,3} or K_9-3C_3*"),
        ((0, 1, 2, 3, 3, 3, 4, 5, 6), "K_9-C_9*"),
        ((0, 1, 2, 3, 4, 5, 6, 7, 8), "K_9"),
    ],
    2: [
        ((0, 1, 1, 1, 2, 1, 2, 2, 2, 3), "Petersen graph"),
        ((0, 1, 1, 2, 1, 2, 1, 2, 2, 3), "C_5xP_1"),
        ((0, 1, 1, 2, 2, 2, 2, 3, 3, 4), "K_{5,5}-M"),
        ((0, 1, 1, 2, 2, 3, 3, 4, 4, 5), "K_{5,5}"),
        ((0, 1, 2, 2, 2, 3, 3, 3, 4, 5), "K_10-4M"),
        ((0, 1, 2, 2, 3, 3, 4, 4, 5, 6), "K_10-3M"),
        ((0, 1, 2, 3, 3, 4, 4, 5, 6, 7), "K_10-2C_5*"),
        ((0, 1, 2, 3, 4, 1, 2, 3, 4, 5), "K_5xK_1"),
        ((0, 1, 2, 3, 4, 3, 4, 5, 6, 7), "K_10-2M"),
        ((0, 1, 2, 3, 4, 4, 5, 6, 7, 8), "K_10-M"),
        ((0, 1, 2, 3, 4, 5, 6, 7, 8, 9), "K_10"),
    ],
    3: [
        ((0, 1, 2, 2, 2, 3, 4, 4, 4, 5, 6), "K_11-2C_11*"),
        ((0, 1, 2, 2, 3, 3, 3, 4, 4, 5, 6), "previously unknown*"),
        ((0, 1, 2, 3, 3, 4, 5, 5, 6, 7, 8), "previously unknown*"),
        ((0, 1, 2, 3, 4, 4, 4, 5, 6, 7, 8), "K_11-C_11*"),
        ((0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10), "K_11"),
    ],
}

# table -> sequence length
TABLE_LENGTHS = {1: 9, 2: 10, 3: 11}


def delta_of_named_table_row(table: int, row: int | str) -> DeltaSequence:
    """Golden sequence of a table row, addressed by 0-based index or by a label substring."""
    if table not in TABLES:
        raise InputError(f"unknown table {table}; tables are 1, 2, 3")
    rows = TABLES[table]
    if isinstance(row, int):
        if not 0 <= row < len(rows):
            raise InputError(f"table {table} has rows 0..{len(rows) - 1}, got {row}")
        return DeltaSequence(rows[row][0])
    key = _norm_label(row)
    for seq, label in rows:
        if key in [_norm_label(a) for a in label.split(" or ")]:
            return DeltaSequence(seq)
    for seq, label in rows:
        if _norm_label(label).startswith(key):
            return DeltaSequence(seq)
    raise InputError(f"table {table} has no row labelled {row!r}")


def _norm_label(text: str) -> str:
    for a, b in (("\\times", "x"), ("×", "x"), ("−", "-"), ("*", ""), (" ", ""), ("{", ""), ("}", "")):
        text = text.replace(a, b)
    return text.lower()


def table_sequences(length: int) -> list[DeltaSequence]:
    for t, n in TABLE_LENGTHS.items():
        if n == length:
            return [DeltaSequence(seq) for seq, _ in TABLES[t]]
    return []
