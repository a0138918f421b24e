"""Binary-sequence algebra for the deletion channel.

Strings are carried as :class:`BitString`, an immutable ``str`` of ``'0'`` and
``'1'`` characters. All user-facing positions are 1-indexed: position 1 is the
first (leftmost) symbol.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Union

__all__ = [
    "BitString",
    "BitLike",
    "DeletionPair",
    "Marker",
    "Segmentation",
    "RunProfile",
    "Preservation",
    "MARKERS",
    "as_bits",
    "delete",
    "delete2",
    "deletion_ball",
    "deletion_ball2",
    "insertion_ball",
    "is_subsequence",
    "occurrences",
    "count_occurrences",
    "count_symbols",
    "segment_by_marker",
    "max_gap",
    "run_profile",
    "longest_run",
    "balance_sum",
    "realizing_deletions",
    "is_preserved",
]

EMPTY_TOKEN = "-"


class BitString(str):
    """Immutable binary string.

    Accepts ``'0'``/``'1'`` text (``'-'`` is the empty string) or an iterable
    of 0/1 integers.

    >>> BitString([0, 1, 1])
    BitString('011')
    >>> BitString("-").bits
    ()
    """

    __slots__ = ()

    def __new__(cls, value: "BitLike" = "") -> "BitString":
        if isinstance(value, BitString):
            return value
        if isinstance(value, str):
            text = "" if value == EMPTY_TOKEN else value
        else:
            text = "".join("1" if int(b) else "0" for b in _checked_ints(value))
        if text.strip("01"):
            raise ValueError(f"not a binary string: {value!r}")
        return super().__new__(cls, text)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(1 if ch == "1" else 0 for ch in self)

    def serialize(self) -> str:
        return str(self) if self else EMPTY_TOKEN

    def __repr__(self) -> str:
        return f"BitString({str(self)!r})"


def _checked_ints(values: Iterable[int]) -> Iterable[int]:
    for b in values:
        if b not in (0, 1):
            raise ValueError(f"binary symbols must be 0 or 1, got {b!r}")
        yield b


BitLike = Union[BitString, str, Iterable[int]]


def as_bits(x: BitLike) -> BitString:
    return x if isinstance(x, BitString) else BitString(x)


@dataclass(frozen=True)
class DeletionPair:
    i1: int
    i2: int

    def check(self, length: int) -> None:
        if not 1 <= self.i1 < self.i2 <= length:
            raise ValueError(
                f"deletion positions must satisfy 1 <= i1 < i2 <= {length}, got ({self.i1}, {self.i2})"
            )


@dataclass(frozen=True)
class Marker:
    pattern: BitString

    def __post_init__(self) -> None:
        object.__setattr__(self, "pattern", as_bits(self.pattern))
        if not 1 <= len(self.pattern) <= 9:
            raise ValueError("marker length must be between 1 and 9")

    @property
    def m(self) -> int:
        return len(self.pattern)

    def __str__(self) -> str:
        return str(self.pattern)


def _marker(w: "Marker | BitLike") -> Marker:
    return w if isinstance(w, Marker) else Marker(as_bits(w))


#: The four segmentation markers, in the order used throughout the codes.
MARKERS = tuple(Marker(BitString(w)) for w in ("0000", "1111", "110011", "11011"))


# ---------------------------------------------------------------- deletions


def delete(x: BitLike, *positions: int) -> BitString:
    """Delete the symbols at the given distinct 1-indexed positions."""
    x = as_bits(x)
    if len(set(positions)) != len(positions):
        raise ValueError("deletion positions must be distinct")
    for p in positions:
        if not 1 <= p <= len(x):
            raise ValueError(f"position {p} out of range 1..{len(x)}")
    out = str(x)
    for p in sorted(positions, reverse=True):
        out = out[: p - 1] + out[p:]
    return BitString(out)


def delete2(x: BitLike, d: DeletionPair | tuple[int, int]) -> BitString:
    if not isinstance(d, DeletionPair):
        d = DeletionPair(*d)
    x = as_bits(x)
    d.check(len(x))
    return delete(x, d.i1, d.i2)


def _ball_str(x: str, t: int) -> set[str]:
    layer = {x}
    for _ in range(t):
        layer = {z[:i] + z[i + 1 :] for z in layer for i in range(len(z))}
    return layer


def deletion_ball(x: BitLike, t: int) -> set[BitString]:
    x = as_bits(x)
    if t < 0 or t > len(x):
        raise ValueError(f"cannot delete {t} symbols from a string of length {len(x)}")
    return {BitString(z) for z in _ball_str(str(x), t)}


def deletion_ball2(x: BitLike) -> set[BitString]:
    """All distinct results of deleting exactly two symbols."""
    x = as_bits(x)
    if len(x) < 2:
        raise ValueError("deletion_ball2 needs |x| >= 2")
    return deletion_ball(x, 2)


def insertion_ball(y: BitLike, t: int) -> set[BitString]:
    """All strings of length ``|y| + t`` that contain ``y`` as a subsequence."""
    y = as_bits(y)
    if t not in (0, 1, 2):
        raise ValueError("insertion_ball supports t in {0, 1, 2}")
    layer = {str(y)}
    for _ in range(t):
        layer = {z[:i] + b + z[i:] for z in layer for i in range(len(z) + 1) for b in "01"}
    return {BitString(z) for z in layer}


def is_subsequence(y: str, x: str) -> bool:
    it = iter(x)
    return all(ch in it for ch in y)


# ------------------------------------------------------------ occurrences


def occurrences(x: BitLike, w: "Marker | BitLike") -> list[int]:
    """Ascending 1-indexed start positions of ``w`` in ``x``, overlaps included."""
    pat = str(_marker(w).pattern)
    text = str(x)
    out = []
    i = text.find(pat)
    while i >= 0:
        out.append(i + 1)
        i = text.find(pat, i + 1)
    return out


def count_occurrences(x: BitLike, w: "Marker | BitLike") -> int:
    return len(occurrences(x, w))


def count_symbols(x: BitLike) -> tuple[int, int]:
    """``(N0, N1)``: the number of zeros and ones."""
    text = str(x)
    ones = text.count("1")
    return len(text) - ones, ones


@dataclass(frozen=True)
class Segmentation:
    """Occurrences of a marker and the ``k + 1`` segments around them.

    ``spans`` holds the 0-based half-open ``(start, end)`` slice of each segment
    in the source string, so segments can be spliced back in place.
    """

    marker: Marker
    starts: tuple[int, ...]
    segments: tuple[BitString, ...]
    spans: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.starts)

    @property
    def max_gap(self) -> int:
        return max(len(seg) for seg in self.segments)


def segment_by_marker(x: BitLike, w: "Marker | BitLike") -> Segmentation:
    x = as_bits(x)
    w = _marker(w)
    starts = occurrences(x, w)
    m = w.m
    # span boundaries in 0-based slice coordinates
    lefts = [0] + [p - 1 + m for p in starts]
    rights = [p - 1 for p in starts] + [len(x)]
    spans = tuple((a, max(a, b)) for a, b in zip(lefts, rights))
    segments = tuple(BitString(x[a:b]) for a, b in spans)
    return Segmentation(w, tuple(starts), segments, spans)


def max_gap(x: BitLike, w: "Marker | BitLike") -> int:
    return segment_by_marker(x, w).max_gap


# ------------------------------------------------------------------- runs


@dataclass(frozen=True)
class RunProfile:
    tau: int
    tau1: tuple[int, ...]
    tau_ge2: tuple[int, ...]


def run_profile(x: BitLike) -> RunProfile:
    runs = [(sym, len(list(grp))) for sym, grp in itertools.groupby(str(x))]
    tau1 = tuple(n for sym, n in runs if sym == "1")
    return RunProfile(
        tau=max((n for _, n in runs), default=0),
        tau1=tau1,
        tau_ge2=tuple(n for n in tau1 if n >= 2),
    )


def longest_run(x: BitLike) -> int:
    return max((len(list(g)) for _, g in itertools.groupby(str(x))), default=0)


def balance_sum(x: BitLike, s: int) -> int:
    """Sum of the 1st, 3rd, 5th, ... one-run lengths, reduced mod ``s + 1``."""
    if s < 1:
        raise ValueError("s must be >= 1")
    return sum(run_profile(x).tau1[::2]) % (s + 1)


# ----------------------------------------------------------- preservation


class Preservation(enum.Enum):
    PRESERVED = "preserved"
    DESTROYED = "destroyed"
    CREATED = "created"
    BOTH = "both"


def realizing_deletions(x: BitLike, y: BitLike) -> list[tuple[int, ...]]:
    """Every ascending 1-indexed position tuple whose deletion turns ``x`` into ``y``."""
    x, y = str(x), str(y)
    t = len(x) - len(y)
    if t < 0:
        return []
    return [
        combo
        for combo in itertools.combinations(range(1, len(x) + 1), t)
        if _without(x, combo) == y
    ]


def _without(x: str, positions: tuple[int, ...]) -> str:
    keep = set(range(1, len(x) + 1)).difference(positions)
    return "".join(x[i - 1] for i in sorted(keep))


def is_preserved(x: BitLike, y: BitLike, w: "Marker | BitLike", *, joint: bool = False) -> Preservation:
    """Classify how the occurrences of ``w`` fare from ``x`` to ``y``.

    By default each occurrence is judged on its own: an occurrence of ``w`` in
    ``x`` is destroyed when every realizing deletion tuple deletes one of its
    symbols, and an occurrence in ``y`` is created when, under every realizing
    tuple, its symbols do not come from a contiguous block of ``x``. Different
    occurrences may be witnessed by different tuples, so a deletion can hide
    between two abutting occurrences and still count as preserved.

    With ``joint=True`` a single realizing tuple must keep every occurrence of
    ``x`` and create none in ``y``. Only then are the deleted symbols confined
    to the segments between occurrences.
    """
    x, y, w = as_bits(x), as_bits(y), _marker(w)
    if len(x) - len(y) not in (1, 2):
        raise ValueError("is_preserved expects |x| - |y| in {1, 2}")
    tuples = realizing_deletions(x, y)
    if not tuples:
        raise ValueError("y is not obtainable from x by deletions")
    m = w.m
    occ_x, occ_y = occurrences(x, w), occurrences(y, w)

    def survives(p: int, combo: tuple[int, ...]) -> bool:
        return all(not p <= i <= p + m - 1 for i in combo)

    def inherited(q: int, combo: tuple[int, ...]) -> bool:
        # y position j maps to x position j + (#deleted positions at or before it)
        src = []
        for j in range(q, q + m):
            pos, shift = j, 0
            for i in combo:
                if i <= pos + shift:
                    shift += 1
            src.append(pos + shift)
        return src[-1] - src[0] == m - 1

    if joint:
        hit = [not all(survives(p, c) for p in occ_x) for c in tuples]
        new = [not all(inherited(q, c) for q in occ_y) for c in tuples]
        if any(not h and not nw for h, nw in zip(hit, new)):
            return Preservation.PRESERVED
        destroyed, created = all(hit), all(new)
        if destroyed == created:
            return Preservation.BOTH
        return Preservation.DESTROYED if destroyed else Preservation.CREATED

    destroyed = any(not any(survives(p, c) for c in tuples) for p in occ_x)
    created = any(not any(inherited(q, c) for c in tuples) for q in occ_y)
    if destroyed and created:
        return Preservation.BOTH
    if destroyed:
        return Preservation.DESTROYED
    if created:
        return Preservation.CREATED
    return Preservation.PRESERVED
