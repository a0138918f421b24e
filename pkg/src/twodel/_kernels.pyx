# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: confusability coloring and gap-constraint scans.

Strings are packed big-endian into unsigned 64-bit words (position 1 is the
most significant of the ``length`` low bits). Canonical index of a string of
length ``l`` with value ``v`` is ``2**l - 1 + v``.
"""
import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector

ctypedef unsigned long long u64

# (pattern, length) for 0000, 1111, 110011, 11011
cdef u64[4] MARKER_BITS = [0b0000, 0b1111, 0b110011, 0b11011]
cdef int[4] MARKER_LEN = [4, 4, 6, 5]


cdef inline Py_ssize_t _canon(u64 v, int length) nogil:
    return ((<Py_ssize_t>1) << length) - 1 + <Py_ssize_t>v


cdef inline u64 _drop(u64 v, int length, int i) nogil:
    cdef int low = length - 1 - i
    cdef u64 mask = ((<u64>1) << low) - 1
    return ((v >> (low + 1)) << low) | (v & mask)


def greedy_coloring(int s):
    if s < 0 or s > 20:
        raise ValueError("s must be in [0, 20]")
    cdef Py_ssize_t total = ((<Py_ssize_t>1) << (s + 1)) - 1
    colors = np.full(total, -1, dtype=np.int32)
    cdef int[::1] col = colors
    cdef vector[vector[int]] used
    used.resize(total)
    cdef vector[int] seen
    seen.assign(total, 0)
    cdef vector[int] mark
    cdef vector[Py_ssize_t] desc
    cdef int length, i, j, c, stamp = 0
    cdef u64 v, d1, d2
    cdef Py_ssize_t idx, z, k
    with nogil:
        for length in range(s + 1):
            for v in range((<u64>1) << length):
                stamp += 1
                desc.clear()
                idx = _canon(v, length)
                seen[idx] = stamp
                desc.push_back(idx)
                for i in range(length):
                    d1 = _drop(v, length, i)
                    z = _canon(d1, length - 1)
                    if seen[z] != stamp:
                        seen[z] = stamp
                        desc.push_back(z)
                    for j in range(i, length - 1):
                        d2 = _drop(d1, length - 1, j)
                        z = _canon(d2, length - 2)
                        if seen[z] != stamp:
                            seen[z] = stamp
                            desc.push_back(z)
                for k in range(<Py_ssize_t>desc.size()):
                    for c in used[desc[k]]:
                        if c >= <int>mark.size():
                            mark.resize(c + 1, 0)
                        mark[c] = stamp
                c = 0
                while c < <int>mark.size() and mark[c] == stamp:
                    c += 1
                col[idx] = c
                for k in range(<Py_ssize_t>desc.size()):
                    used[desc[k]].push_back(c)
    return colors


cdef inline bint _member(u64 v, int n, int s, bint tau) nogil:
    cdef int w, m, p, last, gap, run, best
    cdef u64 pat, mask
    for w in range(4):
        pat = MARKER_BITS[w]
        m = MARKER_LEN[w]
        if n < m:
            if n > s:
                return False
            continue
        mask = ((<u64>1) << m) - 1
        last = -1
        for p in range(n - m + 1):
            if ((v >> (n - m - p)) & mask) == pat:
                if last < 0:
                    gap = p
                else:
                    gap = p - last - m
                if gap > s:
                    return False
                last = p
        if last < 0:
            if n > s:
                return False
        elif n - last - m > s:
            return False
    if tau and n > 0:
        run = 1
        best = 1
        for p in range(1, n):
            if ((v >> (n - 1 - p)) & 1) == ((v >> (n - p)) & 1):
                run += 1
                if run > best:
                    best = run
            else:
                run = 1
        if best > s:
            return False
    return True


def ct2_member(u64 v, int n, int s, bint tau=True):
    if n > 63:
        raise ValueError("packed kernels support n <= 63")
    return _member(v, n, s, tau)


def ct2_count(int n, int s, bint tau=True):
    if n > 40:
        raise ValueError("exhaustive count limited to n <= 40")
    cdef u64 v, total = 0
    with nogil:
        for v in range((<u64>1) << n):
            if _member(v, n, s, tau):
                total += 1
    return total


def ct2_batch(cnp.uint64_t[::1] words, int n, int s, bint tau=True):
    if n > 63:
        raise ValueError("packed kernels support n <= 63")
    cdef Py_ssize_t i, total = 0
    cdef u64 mask = ((<u64>1) << n) - 1
    with nogil:
        for i in range(words.shape[0]):
            if _member(words[i] & mask, n, s, tau):
                total += 1
    return total
