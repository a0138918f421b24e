"""Code parameters, constraint targets, membership and desk-scale codebooks.

Construction 1 places four distance-5 syndrome constraints on the colour
sequences around the markers 0000, 1111, 110011 and 11011. Construction 2
swaps the 11011 constraint for a distance-3 constraint on run-hash symbols and
adds a longest-run bound and a run-length balance residue.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, TextIO

from sympy import nextprime

from twodel import kernels
from twodel.bitseq import (
    MARKERS,
    BitLike,
    BitString,
    as_bits,
    balance_sum,
    count_occurrences,
    count_symbols,
    longest_run,
    max_gap,
)
from twodel.errors import ConstraintViolation
from twodel.gf import ComponentCode, make_code, syndromes
from twodel.hashing import HashFamily, RunHash, hash_sequence

W0000, W1111, W110011, W11011 = (str(w) for w in MARKERS)
MARKER_ORDER = (W0000, W1111, W110011, W11011)
#: order of the six mod-7 counters: N0, N1, N0000, N1111, N110011, N11011
COUNTER_NAMES = ("N0", "N1", W0000, W1111, W110011, W11011)
MAX_ENUMERATION_N = 22


def smallest_odd_prime_above(k: int) -> int:
    q = nextprime(k)
    return 3 if q == 2 else q


@dataclass(frozen=True)
class CodeParams:
    n: int
    s: int
    construction: int
    image_size: int
    q1: int
    N1: int
    r1_paper: int
    r1_impl: int
    Q: int | None = None
    q2: int | None = None
    N2: int | None = None
    r2_paper: int | None = None
    r2_impl: int | None = None
    family: HashFamily | None = field(default=None, compare=False, repr=False)
    run_hash: RunHash | None = field(default=None, compare=False, repr=False)

    @cached_property
    def code2(self) -> ComponentCode:
        """Distance-5 code over GF(q1) with roots in GF(q1^(N1-1))."""
        return make_code(self.q1, self.N1 - 1, 4)

    @cached_property
    def code1(self) -> ComponentCode:
        """Distance-3 code over GF(q2) of primitive length q2^N2 - 1."""
        if self.construction != 2:
            raise AttributeError("only construction 2 has a distance-3 component code")
        return make_code(self.q2, self.N2, 2)

    def hash_fn(self, marker: str):
        if self.construction == 2 and marker == W11011:
            return self.run_hash
        if self.family is None:
            raise ValueError("parameters were derived without a hash family")
        return self.family

    def code_for(self, marker: str) -> ComponentCode:
        if self.construction == 2 and marker == W11011:
            return self.code1
        return self.code2

    @property
    def uses_tau(self) -> bool:
        return self.construction == 2

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "construction": self.construction,
            "image_size": self.image_size,
            "q1": self.q1,
            "N1": self.N1,
            "r1_paper": self.r1_paper,
            "r1_impl": self.r1_impl,
            "Q": self.Q,
            "q2": self.q2,
            "N2": self.N2,
            "r2_paper": self.r2_paper,
            "r2_impl": self.r2_impl,
            "hash_family": self.family.cache_key if self.family is not None else None,
        }


def derive_params(
    n: int,
    s: int,
    construction: int,
    family: HashFamily | None = None,
    *,
    image_size: int | None = None,
) -> CodeParams:
    """Derive the public parameters from ``(n, s)`` and the segment-hash image size.

    ``image_size`` overrides the family's colour count (used for the
    asymptotic formula reproduction, where no table can be built).
    """
    if construction not in (1, 2):
        raise ValueError("construction must be 1 or 2")
    if n < 1:
        raise ValueError("n must be positive")
    if s < 9:
        raise ValueError("s must be >= 9 (markers up to length 6 and runs of length >= 4 must fit)")
    if family is not None and family.s != s:
        raise ValueError(f"hash family built for s={family.s}, expected s={s}")
    if image_size is None:
        if family is None:
            raise ValueError("need a hash family or an explicit image size")
        image_size = family.colors
    q1 = smallest_odd_prime_above(image_size)
    N1 = 1
    while q1 ** (N1 - 1) <= n:
        N1 += 1
    r1_paper = 2 * N1 + math.ceil((N1 - 1) / 3)
    r1_impl = 1 + 3 * (N1 - 1)
    if construction == 1:
        return CodeParams(n, s, 1, image_size, q1, N1, r1_paper, r1_impl, family=family)
    Q = nextprime(s + 1)
    q2 = nextprime(Q * Q)
    N2 = 1
    while q2**N2 - 1 <= n:
        N2 += 1
    return CodeParams(
        n, s, 2, image_size, q1, N1, r1_paper, r1_impl,
        Q=Q, q2=q2, N2=N2, r2_paper=1 + N2, r2_impl=1 + N2,
        family=family, run_hash=RunHash(s, Q),
    )


@dataclass(frozen=True, order=True)
class ConstraintTargets:
    c: tuple[int, ...]
    a_0000: tuple[int, ...]
    a_1111: tuple[int, ...]
    a_110011: tuple[int, ...]
    a_11011: tuple[int, ...]
    b: int | None = None

    def __post_init__(self) -> None:
        if len(self.c) != 6 or not all(0 <= ci < 7 for ci in self.c):
            raise ValueError("c must hold six residues mod 7")

    def syndrome_target(self, marker: str) -> tuple[int, ...]:
        return getattr(self, f"a_{marker}")

    def to_json(self) -> dict:
        return {
            "c": list(self.c),
            "a_0000": list(self.a_0000),
            "a_1111": list(self.a_1111),
            "a_110011": list(self.a_110011),
            "a_11011": list(self.a_11011),
            "b": self.b,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConstraintTargets":
        return cls(
            tuple(data["c"]),
            tuple(data["a_0000"]),
            tuple(data["a_1111"]),
            tuple(data["a_110011"]),
            tuple(data["a_11011"]),
            data.get("b"),
        )


@dataclass(frozen=True)
class ConstraintProfile:
    """Everything the membership predicate looks at, computed from one string."""

    gaps: dict[str, int]
    tau: int
    counters: tuple[int, ...]
    syndromes: dict[str, tuple[int, ...]] | None
    balance: int | None

    def feasible(self, p: CodeParams) -> bool:
        return self.violated_gap(p) is None

    def violated_gap(self, p: CodeParams) -> str | None:
        for w in MARKER_ORDER:
            if self.gaps[w] > p.s:
                return f"gap:{w}"
        if p.uses_tau and self.tau > p.s:
            return "tau"
        return None

    def targets(self) -> ConstraintTargets:
        if self.syndromes is None:
            raise ConstraintViolation("string lies outside the gap-constrained space")
        return ConstraintTargets(
            self.counters,
            self.syndromes[W0000],
            self.syndromes[W1111],
            self.syndromes[W110011],
            self.syndromes[W11011],
            self.balance,
        )


def marker_counts(x: BitLike) -> tuple[int, ...]:
    """Raw (unreduced) counters N0, N1, N0000, N1111, N110011, N11011."""
    n0, n1 = count_symbols(x)
    return (n0, n1) + tuple(count_occurrences(x, w) for w in MARKER_ORDER)


def constraint_profile(x: BitLike, p: CodeParams) -> ConstraintProfile:
    x = as_bits(x)
    gaps = {w: max_gap(x, w) for w in MARKER_ORDER}
    tau = longest_run(x)
    counters = tuple(v % 7 for v in marker_counts(x))
    balance = balance_sum(x, p.s) if p.construction == 2 else None
    prof = ConstraintProfile(gaps, tau, counters, None, balance)
    if not prof.feasible(p):
        return prof
    synd = {}
    for w in MARKER_ORDER:
        seq = hash_sequence(x, w, p.hash_fn(w)).symbols
        synd[w] = syndromes(seq, p.code_for(w))
    return ConstraintProfile(gaps, tau, counters, synd, balance)


@dataclass(frozen=True)
class MembershipReport:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_member(x: BitLike, p: CodeParams, t: ConstraintTargets) -> MembershipReport:
    """Check every defining clause of the code; report the first failing one."""
    x = as_bits(x)
    if len(x) != p.n:
        return MembershipReport(False, "length")
    prof = constraint_profile(x, p)
    gap = prof.violated_gap(p)
    if gap is not None:
        return MembershipReport(False, gap)
    for name, have, want in zip(COUNTER_NAMES, prof.counters, t.c):
        if have != want:
            return MembershipReport(False, f"count:{name}")
    for w in MARKER_ORDER:
        if prof.syndromes[w] != t.syndrome_target(w):
            return MembershipReport(False, f"syndrome:{w}")
    if p.construction == 2 and prof.balance != t.b:
        return MembershipReport(False, "balance")
    return MembershipReport(True)


# --------------------------------------------------------------- codebooks


def _check_enumerable(n: int) -> None:
    if n > MAX_ENUMERATION_N:
        raise ValueError(
            f"exhaustive enumeration is limited to n <= {MAX_ENUMERATION_N}; "
            "use monte_carlo_membership for larger lengths"
        )


def constrained_space(p: CodeParams) -> Iterator[BitString]:
    """Lexicographic scan of the gap-constrained space (C_T or C_T2)."""
    _check_enumerable(p.n)
    for v in range(1 << p.n):
        if kernels.ct2_member(v, p.n, p.s, p.uses_tau):
            yield BitString(format(v, f"0{p.n}b") if p.n else "")


def enumerate_codebook(p: CodeParams, t: ConstraintTargets) -> list[BitString]:
    return [x for x in constrained_space(p) if is_member(x, p, t)]


@dataclass(frozen=True)
class Census:
    """Sizes of every non-empty target bucket over the constrained space."""

    constrained_size: int
    buckets: Counter

    def best(self) -> tuple[ConstraintTargets, int]:
        if not self.buckets:
            raise ValueError("the constrained space is empty; no targets can be selected")
        top = max(self.buckets.values())
        return min(t for t, k in self.buckets.items() if k == top), top


_CENSUS: dict[tuple, Census] = {}


def target_census(p: CodeParams) -> Census:
    key = (p.n, p.s, p.construction, p.image_size, p.family.cache_key if p.family else None)
    if key not in _CENSUS:
        buckets: Counter = Counter()
        total = 0
        for x in constrained_space(p):
            total += 1
            buckets[constraint_profile(x, p).targets()] += 1
        _CENSUS[key] = Census(total, buckets)
    return _CENSUS[key]


def select_targets(p: CodeParams) -> ConstraintTargets:
    """Targets maximising the codebook size; ties go to the smallest tuple."""
    return target_census(p).best()[0]


def averaging_denominator(p: CodeParams) -> int:
    """Number of distinct target tuples the averaging argument divides by."""
    if p.construction == 1:
        return 7**6 * p.q1 ** (4 * p.r1_impl)
    return 7**6 * p.q1 ** (3 * p.r1_impl) * p.q2**p.r2_impl * (p.s + 1)


def pigeonhole_holds(p: CodeParams) -> bool:
    census = target_census(p)
    _, best = census.best()
    return best * averaging_denominator(p) >= census.constrained_size


# -------------------------------------------------------------- file format


def header_json(p: CodeParams, t: ConstraintTargets | None) -> dict:
    out = p.to_json()
    if t is not None:
        out.update(t.to_json())
    return out


def write_codebook(fh: TextIO, p: CodeParams, t: ConstraintTargets, words: Iterable[BitString]) -> None:
    """One JSON header line, then one serialized codeword per line."""
    fh.write(json.dumps(header_json(p, t), sort_keys=True) + "\n")
    for x in words:
        fh.write(as_bits(x).serialize() + "\n")


def read_codebook(fh: TextIO, family: HashFamily | None = None) -> tuple[CodeParams, ConstraintTargets, list[BitString]]:
    header = json.loads(fh.readline())
    if family is None:
        from twodel.hashing import build_hash_family

        family = build_hash_family(header["s"])
    p = derive_params(header["n"], header["s"], header["construction"], family)
    stored = {k: header.get(k) for k in p.to_json()}
    if stored != p.to_json():
        raise ValueError("codebook header parameters do not match the rederived parameters")
    t = ConstraintTargets.from_json(header)
    words = [BitString(line.strip()) for line in fh if line.strip()]
    return p, t, words
