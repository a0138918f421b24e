"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Same packing and canonical ordering; results must be identical.
"""
import numpy as np

_MARKERS = ((0b0000, 4), (0b1111, 4), (0b110011, 6), (0b11011, 5))


def _drop(v, length, i):
    low = length - 1 - i
    return ((v >> (low + 1)) << low) | (v & ((1 << low) - 1))


def greedy_coloring(s):
    if s < 0 or s > 20:
        raise ValueError("s must be in [0, 20]")
    total = (1 << (s + 1)) - 1
    colors = np.full(total, -1, dtype=np.int32)
    # bitmask of colours already used by strings having a given descendant
    used = [0] * total
    for length in range(s + 1):
        base = (1 << length) - 1
        for v in range(1 << length):
            desc = {base + v}
            for i in range(length):
                d1 = _drop(v, length, i)
                desc.add((1 << (length - 1)) - 1 + d1)
                for j in range(i, length - 1):
                    desc.add((1 << (length - 2)) - 1 + _drop(d1, length - 1, j))
            forbidden = 0
            for z in desc:
                forbidden |= used[z]
            c = (~forbidden & (forbidden + 1)).bit_length() - 1
            colors[base + v] = c
            bit = 1 << c
            for z in desc:
                used[z] |= bit
    return colors


def _member(v, n, s, tau):
    for pat, m in _MARKERS:
        if n < m:
            if n > s:
                return False
            continue
        mask = (1 << m) - 1
        last = -1
        for p in range(n - m + 1):
            if (v >> (n - m - p)) & mask == pat:
                gap = p if last < 0 else p - last - m
                if gap > s:
                    return False
                last = p
        if last < 0:
            if n > s:
                return False
        elif n - last - m > s:
            return False
    if tau and n > 0:
        run = best = 1
        for p in range(1, n):
            if (v >> (n - 1 - p)) & 1 == (v >> (n - p)) & 1:
                run += 1
                best = max(best, run)
            else:
                run = 1
        if best > s:
            return False
    return True


def ct2_member(v, n, s, tau=True):
    if n > 63:
        raise ValueError("packed kernels support n <= 63")
    return _member(int(v), n, s, tau)


def ct2_count(n, s, tau=True):
    if n > 40:
        raise ValueError("exhaustive count limited to n <= 40")
    return sum(1 for v in range(1 << n) if _member(v, n, s, tau))


def ct2_batch(words, n, s, tau=True):
    if n > 63:
        raise ValueError("packed kernels support n <= 63")
    mask = (1 << n) - 1
    return sum(1 for w in np.asarray(words, dtype=np.uint64).tolist() if _member(w & mask, n, s, tau))
