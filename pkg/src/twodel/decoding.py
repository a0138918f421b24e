"""Structured two-deletion decoders and the brute-force oracle.

Each decoder reads the deletion pattern off the mod-7 counters, picks one
marker whose occurrences survived the deletions, and repairs the received word
segment by segment. Every branch verifies its result (membership plus
``y`` being a two-deletion descendant) and fails loudly instead of falling
through to another branch.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from twodel.bitseq import (
    BitLike,
    BitString,
    as_bits,
    balance_sum,
    count_occurrences,
    count_symbols,
    delete2,
    deletion_ball2,
    insertion_ball,
    is_subsequence,
    segment_by_marker,
)
from twodel.construction import (
    W0000,
    W1111,
    W110011,
    W11011,
    CodeParams,
    ConstraintTargets,
    is_member,
    marker_counts,
)
from twodel.errors import (
    BranchFailure,
    ClassificationError,
    ConstraintViolation,
    CorrectabilityError,
    DecodeFailure,
    NotACorruption,
    SegmentInversionError,
)
from twodel.gf import correct_up_to_1, correct_up_to_2
from twodel.hashing import HashFamily, hash_sequence, invert_segment


@dataclass(frozen=True)
class DecodeOutcome:
    recovered: BitString
    branch: str


def _accept(cand: str, origin: str, p: CodeParams, t: ConstraintTargets) -> bool:
    if len(cand) != p.n or not is_subsequence(origin, cand):
        return False
    # the mod-7 counters are cheap and reject most wrong candidates early
    if tuple(v % 7 for v in marker_counts(cand)) != t.c:
        return False
    return bool(is_member(cand, p, t))


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    if parts == 0:
        return
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def repair_via_marker(
    y: BitLike,
    w: str,
    p: CodeParams,
    t: ConstraintTargets,
    *,
    origin: BitLike | None = None,
    branch: str | None = None,
) -> BitString:
    """Restore the missing ``n - |y|`` symbols assuming ``w`` is preserved.

    ``origin`` is the received word the final post-check is made against
    (it differs from ``y`` when ``y`` is an intermediate, partly repaired word).
    """
    y = as_bits(y)
    origin = as_bits(origin) if origin is not None else y
    branch = branch or f"repair/{w}"
    missing = p.n - len(y)
    if missing not in (1, 2):
        raise BranchFailure(branch, f"expected 1 or 2 missing symbols, got {missing}")
    hashfn = p.hash_fn(w)
    if not isinstance(hashfn, HashFamily):
        raise BranchFailure(branch, f"marker {w} is not hashed by a recoverable colouring")
    code = p.code_for(w).with_target(t.syndrome_target(w))
    try:
        seq = hash_sequence(y, w, hashfn).symbols
        corr = correct_up_to_2(seq, code) if code.n_roots == 4 else correct_up_to_1(seq, code)
    except (ConstraintViolation, DecodeFailure) as exc:
        raise BranchFailure(branch, f"hash sequence not correctable: {exc}") from None
    seg = segment_by_marker(y, w)
    positions = [pos for pos, _ in corr.errors]
    if any(pos >= len(seg.segments) for pos in positions):
        raise BranchFailure(branch, "correction touches a segment that does not exist in y")
    survivors = _segment_candidates(y, seg, positions, corr.corrected, missing, hashfn, origin, p, t, hidden=0)
    # a deletion can also sit between two abutting occurrences of w, where the
    # segmentation of y cannot see it; those bits go back inside the windows
    hidden = 1
    while not survivors and hidden <= missing:
        survivors = _segment_candidates(y, seg, positions, corr.corrected, missing, hashfn, origin, p, t, hidden)
        hidden += 1
    if len(survivors) != 1:
        raise BranchFailure(branch, f"{len(survivors)} candidates survived the post-check")
    return BitString(survivors.pop())


def _window_slots(seg) -> list[int]:
    """Insertion slots strictly inside an occurrence window of the marker."""
    m = seg.marker.m
    return sorted({q - 1 + k for q in seg.starts for k in range(1, m)})


def _segment_candidates(y, seg, positions, corrected, missing, hashfn, origin, p, t, hidden) -> set[str]:
    out: set[str] = set()
    visible = missing - hidden
    if visible and not positions:
        return out
    splits = list(_compositions(visible, len(positions))) if visible else [()]
    inserts = list(itertools.combinations_with_replacement(_window_slots(seg), hidden)) if hidden else [()]
    for split in splits:
        edits = []
        try:
            for pos, extra in zip(positions, split):
                a, b = seg.spans[pos]
                edits.append((a, b, str(invert_segment(seg.segments[pos], extra, corrected[pos], hashfn))))
        except SegmentInversionError:
            continue
        for slots in inserts:
            for symbols in itertools.product("01", repeat=hidden):
                cand = _apply_edits(str(y), edits + [(q, q, b) for q, b in zip(slots, symbols)])
                if _accept(cand, origin, p, t):
                    out.add(cand)
    return out


def _apply_edits(y: str, edits: list[tuple[int, int, str]]) -> str:
    for a, b, text in sorted(edits, key=lambda e: (e[0], e[1]), reverse=True):
        y = y[:a] + text + y[b:]
    return y


def tau_recovery_path(
    y: BitLike,
    p: CodeParams,
    t: ConstraintTargets,
    *,
    use_balance: bool = True,
    branch: str = "tau-recovery",
) -> list[BitString]:
    """Re-insert a zero deleted from between a one-run of length 1 and a longer one.

    The run-hash sequence around 11011 is corrected in one symbol, which fixes
    the run hash of the damaged segment. Every way of putting a zero back into
    that segment is tried and kept when it reproduces the corrected hash. The
    usual survivor splits a merged run ``l + 1`` as ``1,0,l`` or ``l,0,1``;
    scanning all slots also covers runs cut short by a marker occurrence at the
    segment edge. With ``use_balance`` only candidates matching ``t.b`` are
    returned; otherwise the caller's post-check decides.
    """
    y = as_bits(y)
    rh = p.run_hash
    if rh is None:
        raise BranchFailure(branch, "no run hash in these parameters")
    code = p.code1.with_target(t.a_11011)
    try:
        seq = hash_sequence(y, W11011, rh).symbols
        corr = correct_up_to_1(seq, code)
    except (ConstraintViolation, DecodeFailure) as exc:
        raise BranchFailure(branch, f"run-hash sequence not correctable: {exc}") from None
    if len(corr.errors) != 1:
        raise BranchFailure(branch, f"expected one run-hash symbol in error, found {len(corr.errors)}")
    pos = corr.errors[0][0]
    seg = segment_by_marker(y, W11011)
    if pos >= len(seg.segments):
        raise BranchFailure(branch, "corrected symbol lies beyond the last segment of y")
    try:
        want = rh.unpack(corr.corrected[pos])
    except ValueError as exc:
        raise BranchFailure(branch, str(exc)) from None
    v = str(seg.segments[pos])
    if len(v) + 1 > rh.s:
        raise BranchFailure(branch, "segment is already at the gap bound")
    a = seg.spans[pos][0]
    cands = set()
    for k in range(len(v) + 1):
        if rh(v[:k] + "0" + v[k:]) == want:
            cands.add(str(y)[: a + k] + "0" + str(y)[a + k:])
    if not cands:
        raise BranchFailure(branch, "no zero insertion reproduces the corrected run hash")
    if use_balance:
        cands = {c for c in cands if balance_sum(c, p.s) == t.b}
        if not cands:
            raise BranchFailure(branch, "no candidate matches the balance target")
    return [BitString(c) for c in sorted(cands)]


# ----------------------------------------------------------------- dispatch


@dataclass(frozen=True)
class Residues:
    """Counter deltas ``x - y`` reduced mod 7."""

    zeros: int
    ones: int
    d: dict

    @classmethod
    def of(cls, y: BitString, t: ConstraintTargets) -> "Residues":
        n0, n1 = count_symbols(y)
        d = {
            w: (c - count_occurrences(y, w)) % 7
            for w, c in zip((W0000, W1111, W110011, W11011), t.c[2:])
        }
        return cls((t.c[0] - n0) % 7, (t.c[1] - n1) % 7, d)


def _mixed_class(r: int, w: str) -> tuple[str, int]:
    if r == 0:
        return "none", 0
    if r == 1:
        return "destroyed", 1
    if r in (4, 5, 6):
        return "created", 7 - r
    raise ClassificationError(f"residue {r} for {w} is impossible with one zero and one one deleted")


def _single(y, w, p, t, branch) -> DecodeOutcome:
    return DecodeOutcome(repair_via_marker(y, w, p, t, branch=branch), branch)


def _via_tau(y, p, t, finish: str, use_balance: bool, branch: str) -> DecodeOutcome:
    found = set()
    for mid in tau_recovery_path(y, p, t, use_balance=use_balance, branch=branch):
        try:
            found.add(repair_via_marker(mid, finish, p, t, origin=y, branch=branch))
        except BranchFailure:
            continue
    if len(found) != 1:
        raise BranchFailure(branch, f"{len(found)} candidates after the run-hash step")
    return DecodeOutcome(found.pop(), branch)


def _majority(y, p, t) -> DecodeOutcome:
    branch = "mixed/majority"
    votes: Counter = Counter()
    for w in (W0000, W1111, W110011):
        try:
            votes[repair_via_marker(y, w, p, t, branch=branch)] += 1
        except BranchFailure:
            pass
    winners = [x for x, k in votes.items() if k >= 2]
    if len(winners) != 1:
        raise DecodeFailure(f"{branch}: no candidate produced by two of the three repairs ({dict(votes)})")
    return DecodeOutcome(winners[0], branch)


def _both_created(y, p, t, r: Residues) -> DecodeOutcome:
    if p.construction == 1:
        if r.d[W11011] == 0:
            return _single(y, W11011, p, t, "mixed/created-both/11011")
        return _single(y, W110011, p, t, "mixed/created-both/110011")
    if r.d[W110011] != 0:
        # the zero and the one both came from length-1 runs; after the zero is
        # back, the lone deleted one leaves every 1111 occurrence in place
        return _via_tau(y, p, t, W1111, False, "mixed/created-both/tau-recovery")
    return _single(y, W110011, p, t, "mixed/created-both/110011")


def decode(y: BitLike, p: CodeParams, t: ConstraintTargets) -> DecodeOutcome:
    """Recover the codeword from a word that lost exactly two symbols."""
    y = as_bits(y)
    if len(y) != p.n - 2:
        raise ValueError(f"received word must have length n - 2 = {p.n - 2}, got {len(y)}")
    r = Residues.of(y, t)
    if r.zeros + r.ones != 2:
        raise ClassificationError(f"counters imply {r.zeros} zeros and {r.ones} ones were deleted")
    d = r.d
    if r.ones == 2:
        if d[W0000] == 0:
            return _single(y, W0000, p, t, "two-ones/0000")
        if d[W1111] == 0:
            return _single(y, W1111, p, t, "two-ones/1111")
        return _single(y, W110011, p, t, "two-ones/110011")
    if r.zeros == 2:
        if d[W1111] == 0:
            return _single(y, W1111, p, t, "two-zeros/1111")
        if d[W0000] == 0:
            return _single(y, W0000, p, t, "two-zeros/0000")
        if p.construction == 1:
            if d[W11011] == 0:
                return _single(y, W11011, p, t, "two-zeros/11011")
            return _single(y, W110011, p, t, "two-zeros/110011")
        if d[W110011] != 0:
            return _via_tau(y, p, t, W1111, True, "two-zeros/tau-recovery")
        return _single(y, W110011, p, t, "two-zeros/110011")

    k0, _ = _mixed_class(d[W0000], W0000)
    k1, _ = _mixed_class(d[W1111], W1111)
    pattern = (k0, k1)
    if pattern == ("destroyed", "destroyed"):
        return _single(y, W110011, p, t, "mixed/destroyed-both/110011")
    if pattern == ("destroyed", "none"):
        return _single(y, W1111, p, t, "mixed/0000-destroyed/1111")
    if pattern == ("none", "destroyed"):
        return _single(y, W0000, p, t, "mixed/1111-destroyed/0000")
    if pattern == ("created", "none"):
        return _single(y, W1111, p, t, "mixed/0000-created/1111")
    if pattern == ("none", "created"):
        return _single(y, W0000, p, t, "mixed/1111-created/0000")
    if pattern == ("created", "created"):
        return _both_created(y, p, t, r)
    if pattern == ("none", "none"):
        if d[W110011] == 0:
            return _majority(y, p, t)
        return _single(y, W0000, p, t, "mixed/none/0000")
    raise ClassificationError(f"0000 {k0} together with 1111 {k1} cannot arise from one zero and one one")


def decode_c1(y: BitLike, p: CodeParams, t: ConstraintTargets) -> DecodeOutcome:
    if p.construction != 1:
        raise ValueError("decode_c1 needs construction-1 parameters")
    return decode(y, p, t)


def decode_c2(y: BitLike, p: CodeParams, t: ConstraintTargets) -> DecodeOutcome:
    if p.construction != 2:
        raise ValueError("decode_c2 needs construction-2 parameters")
    return decode(y, p, t)


# ------------------------------------------------------------------- oracle


def oracle_candidates(y: BitLike, p: CodeParams, t: ConstraintTargets) -> list[BitString]:
    return sorted(z for z in insertion_ball(y, 2) if is_member(z, p, t))


def oracle_decode(y: BitLike, p: CodeParams, t: ConstraintTargets) -> BitString:
    """Brute force: the unique member in the two-insertion ball of ``y``."""
    y = as_bits(y)
    if len(y) != p.n - 2:
        raise ValueError(f"received word must have length n - 2 = {p.n - 2}, got {len(y)}")
    found = oracle_candidates(y, p, t)
    if not found:
        raise NotACorruption(f"no codeword lies within two insertions of {y.serialize()}")
    if len(found) > 1:
        raise CorrectabilityError(y, found)
    return found[0]


# ----------------------------------------------------------------- verifier


@dataclass(frozen=True)
class Failure:
    x: BitString
    pair: tuple[int, int]
    y: BitString
    reason: str


@dataclass(frozen=True)
class VerifyReport:
    codewords: int
    instances: int
    failures: tuple[Failure, ...]
    oracle_mismatches: int
    branches: Counter

    @property
    def ok(self) -> bool:
        return not self.failures and not self.oracle_mismatches


def verify_codebook(
    codebook: list[BitString],
    p: CodeParams,
    t: ConstraintTargets,
    *,
    with_oracle: bool = False,
    stop_after: int | None = None,
) -> VerifyReport:
    """Decode every two-deletion descendant of every codeword.

    With ``with_oracle`` each distinct received word is also decoded by the
    oracle, which additionally checks that the deletion balls are disjoint.
    """
    failures: list[Failure] = []
    mismatches = 0
    branches: Counter = Counter()
    instances = 0
    oracle_seen: dict[str, str] = {}
    for x in codebook:
        for pair in itertools.combinations(range(1, p.n + 1), 2):
            instances += 1
            y = delete2(x, pair)
            try:
                out = decode(y, p, t)
            except (DecodeFailure, ValueError) as exc:
                failures.append(Failure(x, pair, y, f"{type(exc).__name__}: {exc}"))
            else:
                branches[out.branch] += 1
                if out.recovered != x:
                    failures.append(Failure(x, pair, y, f"decoded to {out.recovered} via {out.branch}"))
            if with_oracle:
                if y not in oracle_seen:
                    try:
                        oracle_seen[y] = oracle_decode(y, p, t)
                    except (CorrectabilityError, NotACorruption) as exc:
                        oracle_seen[y] = f"error: {exc}"
                if oracle_seen[y] != x:
                    mismatches += 1
                    failures.append(Failure(x, pair, y, f"oracle: {oracle_seen[y]}"))
            if stop_after is not None and len(failures) >= stop_after:
                return VerifyReport(len(codebook), instances, tuple(failures), mismatches, branches)
    return VerifyReport(len(codebook), instances, tuple(failures), mismatches, branches)


def balls_disjoint(codebook: list[BitString]) -> bool:
    seen: set[str] = set()
    for x in codebook:
        ball = deletion_ball2(x)
        if not seen.isdisjoint(ball):
            return False
        seen |= ball
    return True

