import itertools
import random

import numpy as np
import pytest

from twodel.bitseq import delete2, deletion_ball, segment_by_marker
from twodel.errors import ConstraintViolation, HashFamilyError, SegmentInversionError
from twodel.hashing import (
    HashFamily,
    RunHash,
    build_hash_family,
    f_index,
    hash_sequence,
    invert_segment,
    run_hash,
)

EX1_X = "011000101100"


def strings_upto(s):
    for n in range(s + 1):
        for tup in itertools.product("01", repeat=n):
            yield "".join(tup)


def descendants(v):
    """Everything reachable from ``v`` by at most two deletions."""
    out = {v}
    for t in (1, 2):
        if len(v) >= t:
            out |= deletion_ball(v, t)
    return out


def test_f_index_examples():
    assert f_index("", 5) == 1
    assert f_index("011", 5) == 11
    seen = {f_index(v, 8) for v in strings_upto(8)}
    assert len(seen) == 2**9 - 1
    assert seen == set(range(1, 2**9))
    with pytest.raises(ValueError):
        f_index("0" * 6, 5)


def test_family_small_cases():
    fam0 = build_hash_family(0, use_cache=False)
    assert fam0.colors == 1 and fam0.table.size == 1
    fam2 = build_hash_family(2, use_cache=False)
    assert fam2.color("0") != fam2.color("1")


def _brute_conflicts(s, family):
    by_desc = {}
    for v in strings_upto(s):
        for z in descendants(v):
            by_desc.setdefault(z, []).append(v)
    for group in by_desc.values():
        colours = [family.color(v) for v in group]
        if len(set(colours)) != len(colours):
            return group
    return None


@pytest.mark.parametrize("s", [4, 6, 8])
def test_colouring_valid_exhaustive(s):
    fam = build_hash_family(s)
    assert _brute_conflicts(s, fam) is None
    assert fam.colors == len(np.unique(fam.table))


def test_measured_colour_counts():
    # frozen from the greedy colouring; the exhaustive check above is the oracle
    assert {s: build_hash_family(s).colors for s in (6, 8, 10)} == {6: 48, 8: 98, 10: 181}


def test_colouring_valid_sampled_s12():
    fam = build_hash_family(12)
    rng = random.Random(3)
    for _ in range(20_000):
        u = "".join(rng.choice("01") for _ in range(rng.randint(0, 12)))
        z = rng.choice(sorted(descendants(u)))
        # climb back up to a random confusable partner of u
        v = z
        for _ in range(rng.randint(0, min(2, 12 - len(z)))):
            i = rng.randint(0, len(v))
            v = v[:i] + rng.choice("01") + v[i:]
        if v != u:
            assert fam.color(u) != fam.color(v)


def test_invert_segment_examples():
    fam = build_hash_family(6)
    x = "110100"
    assert invert_segment(x, 0, fam.color(x), fam) == x
    for y in deletion_ball(x, 2):
        assert invert_segment(y, 2, fam.color(x), fam) == x


def test_invert_segment_exhaustive_s6():
    fam = build_hash_family(6)
    for x in strings_upto(6):
        for t in (0, 1, 2):
            if t > len(x):
                continue
            for y in deletion_ball(x, t):
                assert invert_segment(y, t, fam.color(x), fam) == x


def test_invert_segment_errors():
    fam = build_hash_family(6)
    with pytest.raises(SegmentInversionError):
        invert_segment("000000", 1, fam.color("0000000"[:6]), fam)
    broken = HashFamily(fam.s, 1, np.zeros_like(fam.table))
    with pytest.raises(HashFamilyError):
        invert_segment("01", 1, 0, broken)


def test_family_cache_round_trip(tmp_path):
    fam = build_hash_family(7, use_cache=False)
    path = tmp_path / "fam.bin"
    fam.save(path)
    back = HashFamily.load(path)
    assert back.s == 7 and back.colors == fam.colors
    assert np.array_equal(back.table, fam.table)
    path.write_bytes(b"junk" * 4)
    with pytest.raises(ValueError):
        HashFamily.load(path)


def test_run_hash_examples():
    rh = RunHash(12, 17)
    assert rh.padded(EX1_X) == (2, 2) + (0,) * 10
    assert run_hash(EX1_X, rh) == (4, 2 + 4)
    assert run_hash("0101010", rh) == (0, 0)
    assert run_hash("111010011", rh) != run_hash("11110011", rh)
    with pytest.raises(ValueError):
        RunHash(12, 13)
    with pytest.raises(ValueError):
        RunHash(12, 16)


def test_run_hash_single_substitution_locates():
    rh = RunHash(10, 13)
    rng = random.Random(5)
    for _ in range(5000):
        vec = [rng.randrange(13) for _ in range(10)]
        j = rng.randrange(10)
        new = list(vec)
        new[j] = (vec[j] + rng.randrange(1, 13)) % 13
        before, after = rh.checks(vec), rh.checks(new)
        assert before != after
        assert rh.locate(before, after) == (j + 1, (new[j] - vec[j]) % 13)


def test_run_hash_pack_round_trip():
    rh = RunHash(9, 11)
    for pair in itertools.product(range(11), repeat=2):
        assert rh.unpack(rh.pack(pair)) == pair
    with pytest.raises(ValueError):
        rh.unpack(121)


def test_hash_sequence_small_word():
    hs = hash_sequence(EX1_X, "00", lambda v: f_index(v, 4))
    assert hs.symbols == (11, 1, f_index("1011", 4), 1)
    y = delete2(EX1_X, (1, 9))
    hy = hash_sequence(y, "00", lambda v: f_index(v, 4))
    assert sum(a != b for a, b in zip(hs.symbols, hy.symbols)) == 2
    assert len(hash_sequence("111", "00", lambda v: f_index(v, 4)).symbols) == 1


def test_hash_sequence_gap_violation():
    fam = build_hash_family(6)
    with pytest.raises(ConstraintViolation):
        hash_sequence("1" * 8, "0000", fam)


def test_hash_sequence_matches_segmentation():
    fam = build_hash_family(10)
    rng = random.Random(9)
    for _ in range(2000):
        x = "".join(rng.choice("01") for _ in range(rng.randint(0, 30)))
        w = rng.choice(["0000", "1111", "110011", "11011"])
        seg = segment_by_marker(x, w)
        if seg.max_gap > 10:
            continue
        hs = hash_sequence(x, w, fam)
        assert hs.symbols == tuple(fam.color(v) for v in seg.segments)
