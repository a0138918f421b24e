"""Segment hashes: the index map, the recoverable colouring family and the run hash.

The colouring family assigns a colour to every string of length ``0..s`` such
that two strings whose two-deletion balls intersect never share a colour. A
segment can then be recovered from any of its one- or two-deletion results
together with its colour.
"""
from __future__ import annotations

import logging
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Union

import numpy as np

from twodel import kernels
from twodel.bitseq import BitLike, BitString, Marker, as_bits, insertion_ball, run_profile, segment_by_marker
from twodel.errors import ConstraintViolation, HashFamilyError, SegmentInversionError

log = logging.getLogger(__name__)

CACHE_ENV = "TWODEL_CACHE_DIR"
_MAGIC = b"TDHF"
_VERSION = 1
_HEADER = struct.Struct("<4sHHI")


def f_index(v: BitLike, s: int) -> int:
    """Injective map from strings of length <= s into ``[1, 2**(s+1) - 1]``.

    The empty string maps to 1 and a string of length ``l`` to ``2**l`` plus its
    big-endian value, so the result is also the 1-based canonical position of
    ``v`` in the shortest-first, then lexicographic, order.
    """
    v = str(v)
    if len(v) > s:
        raise ValueError(f"string of length {len(v)} exceeds bound s={s}")
    return (1 << len(v)) + (int(v, 2) if v else 0)


@dataclass(frozen=True, eq=False)
class HashFamily:
    s: int
    colors: int
    table: np.ndarray

    def color(self, v: BitLike) -> int:
        return int(self.table[f_index(v, self.s) - 1])

    @property
    def cache_key(self) -> str:
        return f"hashfamily-v{_VERSION}-s{self.s}"

    def save(self, path: str | os.PathLike) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, _VERSION, self.s, self.colors))
            fh.write(self.table.astype("<i4").tobytes())
        tmp.replace(path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "HashFamily":
        data = Path(path).read_bytes()
        magic, version, s, colors = _HEADER.unpack_from(data)
        if magic != _MAGIC or version != _VERSION:
            raise ValueError(f"{path}: not a version-{_VERSION} hash family table")
        table = np.frombuffer(data, dtype="<i4", offset=_HEADER.size).astype(np.int32)
        if table.size != (1 << (s + 1)) - 1:
            raise ValueError(f"{path}: truncated table")
        return cls(s, colors, table)


def default_cache_dir() -> Path:
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "twodel"


_MEMO: dict[int, HashFamily] = {}


def build_hash_family(s: int, cache_dir: str | os.PathLike | None = None, use_cache: bool = True) -> HashFamily:
    """Greedy confusability colouring of all strings of length ``0..s``.

    Strings are visited shortest first, then lexicographically; each takes the
    smallest colour not held by an already-coloured string sharing a
    <=2-deletion descendant with it. Tables are memoised in-process and cached
    on disk under ``cache_dir`` (default from ``$TWODEL_CACHE_DIR``).
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    if s in _MEMO:
        return _MEMO[s]
    path = None
    if use_cache:
        path = Path(cache_dir) if cache_dir is not None else default_cache_dir()
        path = path / f"hashfamily-v{_VERSION}-s{s}.bin"
        if path.exists():
            try:
                family = HashFamily.load(path)
            except (ValueError, struct.error):
                log.warning("ignoring unreadable cache file %s", path)
            else:
                _MEMO[s] = family
                return family
    table = kernels.greedy_coloring(s)
    family = HashFamily(s, int(table.max()) + 1, table)
    if path is not None:
        try:
            family.save(path)
        except OSError as exc:
            log.warning("could not write hash family cache %s: %s", path, exc)
    _MEMO[s] = family
    return family


def invert_segment(y_seg: BitLike, t: int, color: int, family: HashFamily) -> BitString:
    """Recover the segment of colour ``color`` that lost ``t`` symbols to become ``y_seg``."""
    y_seg = as_bits(y_seg)
    if len(y_seg) + t > family.s:
        raise SegmentInversionError(f"|y|+t = {len(y_seg) + t} exceeds family bound s={family.s}")
    found = [z for z in insertion_ball(y_seg, t) if family.color(z) == color]
    if not found:
        raise SegmentInversionError(f"no length-{len(y_seg) + t} supersequence of {y_seg.serialize()} has colour {color}")
    if len(found) > 1:
        raise HashFamilyError(f"colour {color} is shared by confusable strings {sorted(found)}")
    return found[0]


@dataclass(frozen=True)
class RunHash:
    """Two parity checks ``(1, ..., 1)`` and ``(1, 2, ..., s)`` over GF(Q)
    applied to the zero-padded lengths of the one-runs of length >= 2."""

    s: int
    Q: int

    def __post_init__(self) -> None:
        from sympy import isprime

        if not isprime(self.Q) or self.Q < self.s + 2:
            raise ValueError(f"Q must be a prime >= s + 2 = {self.s + 2}, got {self.Q}")

    def padded(self, v: BitLike) -> tuple[int, ...]:
        if len(v) > self.s:
            raise ValueError(f"segment of length {len(v)} exceeds s={self.s}")
        runs = run_profile(v).tau_ge2
        if any(r >= self.Q for r in runs):
            raise ValueError(f"run length {max(runs)} cannot be embedded in GF({self.Q})")
        return runs + (0,) * (self.s - len(runs))

    def __call__(self, v: BitLike) -> tuple[int, int]:
        vec = self.padded(v)
        return self.checks(vec)

    def checks(self, vec) -> tuple[int, int]:
        return sum(vec) % self.Q, sum(j * r for j, r in enumerate(vec, start=1)) % self.Q

    def pack(self, pair: tuple[int, int]) -> int:
        return pair[0] * self.Q + pair[1]

    def unpack(self, symbol: int) -> tuple[int, int]:
        if not 0 <= symbol < self.Q * self.Q:
            raise ValueError(f"symbol {symbol} is not a packed pair over GF({self.Q})")
        return divmod(symbol, self.Q)

    def locate(self, before: tuple[int, int], after: tuple[int, int]) -> tuple[int, int]:
        """Single substitution turning check pair ``before`` into ``after``.

        Returns ``(position, change)`` with a 1-based position such that adding
        ``change`` (mod Q) at that position maps ``before`` to ``after``.
        """
        d0 = (after[0] - before[0]) % self.Q
        d1 = (after[1] - before[1]) % self.Q
        if d0 == 0:
            raise ValueError("check pairs do not differ by a single substitution")
        pos = d1 * pow(d0, -1, self.Q) % self.Q
        if not 1 <= pos <= self.s:
            raise ValueError(f"located position {pos} outside 1..{self.s}")
        return pos, d0


def run_hash(v: BitLike, rh: RunHash) -> tuple[int, int]:
    return rh(v)


HashFn = Union[HashFamily, RunHash, Callable[[BitString], int]]


@dataclass(frozen=True)
class HashSeq:
    marker: Marker
    symbols: tuple


def _segment_symbol(seg: BitString, hashfn: HashFn):
    if isinstance(hashfn, HashFamily):
        return hashfn.color(seg)
    if isinstance(hashfn, RunHash):
        return hashfn.pack(hashfn(seg))
    return hashfn(seg)


def hash_sequence(x: BitLike, w: "Marker | BitLike", hashfn: HashFn) -> HashSeq:
    """Hash each of the ``k + 1`` segments of ``x`` around the marker ``w``.

    Run-hash symbols are packed into single integers ``h0 * Q + h1``.
    """
    seg = segment_by_marker(x, w)
    bound = hashfn.s if isinstance(hashfn, (HashFamily, RunHash)) else None
    if bound is not None:
        for i, part in enumerate(seg.segments):
            if len(part) > bound:
                raise ConstraintViolation(
                    f"segment {i} ({part.serialize()}) around {seg.marker} has length {len(part)} > s={bound}"
                )
    return HashSeq(seg.marker, tuple(_segment_symbol(part, hashfn) for part in seg.segments))
