"""Finite fields GF(p^m) and the syndrome-defined component codes.

Field elements are plain ints: the base-``p`` digits of an element are the
coefficients of its polynomial representative, lowest degree first, so the
base field GF(p) is exactly ``range(p)``.

The component codes have symbols in GF(p) and parity checks evaluated at
consecutive powers ``alpha**0 .. alpha**(d-2)`` of a primitive element of
GF(p^m): ``d = 5`` corrects two substitutions, ``d = 3`` corrects one.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from twodel.errors import DecodeFailure

TABLE_LIMIT = 1 << 20


def _digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(d: Sequence[int], p: int) -> int:
    v = 0
    for c in reversed(d):
        v = v * p + c
    return v


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lowest-first coefficients of the lexicographically smallest monic irreducible."""
    if m == 1:
        return (0, 1)
    for t in range(p**m):
        low = _digits(t, p, m)
        if low[0] == 0:
            continue
        # galoistools wants highest degree first
        if gf_irreducible_p([1] + low[::-1], p, ZZ):
            return tuple(low) + (1,)
    raise AssertionError("unreachable: irreducibles exist in every degree")


class Field:
    """GF(p^m) with a deterministic modulus and primitive element."""

    def __init__(self, p: int, m: int = 1):
        if not isprime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.size = p**m
        self.modulus = _smallest_irreducible(p, m)
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"Field({self.p}, {self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self) -> int:
        return hash((self.p, self.m))

    # -- arithmetic -------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        return _undigits([(x + y) % p for x, y in zip(_digits(a, p, self.m), _digits(b, p, self.m))], p)

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        p = self.p
        return _undigits([-x % p for x in _digits(a, p, self.m)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _polymul(self, a: int, b: int) -> int:
        p, m, mod = self.p, self.m, self.modulus
        da, db = _digits(a, p, m), _digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(m + 1):
                    prod[k - m + i] -= c * mod[i]
        return _undigits([c % p for c in prod[:m]], p)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        if self.has_tables:
            return int(self._exp[(self._log[a] + self._log[b]) % (self.size - 1)])
        return self._polymul(a, b)

    def pow(self, a: int, k: int) -> int:
        if self.m == 1:
            return pow(a, k, self.p)
        if a == 0:
            return 0 if k else 1
        k %= self.size - 1
        if self.has_tables:
            return int(self._exp[self._log[a] * k % (self.size - 1)])
        result, base = 1, a
        while k:
            if k & 1:
                result = self._polymul(result, base)
            base = self._polymul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.size - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- structure --------------------------------------------------------
    @cached_property
    def primitive(self) -> int:
        """Smallest element (as an int) of multiplicative order ``size - 1``."""
        order = self.size - 1
        if order == 1:
            return 1
        factors = list(factorint(order))
        for g in range(2, self.size):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise AssertionError("unreachable: the multiplicative group is cyclic")

    def _slow_pow(self, a: int, k: int) -> int:
        if self.m == 1:
            return pow(a, k, self.p)
        result, base = 1, a
        while k:
            if k & 1:
                result = self._polymul(result, base)
            base = self._polymul(base, base)
            k >>= 1
        return result

    @property
    def has_tables(self) -> bool:
        if self._exp is None and self.size <= TABLE_LIMIT:
            self._build_tables()
        return self._exp is not None

    def _build_tables(self) -> None:
        n = self.size - 1
        exp = np.empty(n, dtype=np.int64)
        log = np.full(self.size, -1, dtype=np.int64)
        g = self.primitive
        cur = 1
        for k in range(n):
            exp[k] = cur
            log[cur] = k
            cur = self._polymul(cur, g) if self.m > 1 else cur * g % self.p
        self._exp, self._log = exp, log

    def alpha_pow(self, k: int) -> int:
        if self.has_tables:
            return int(self._exp[k % (self.size - 1)])
        return self.pow(self.primitive, k)

    def log(self, a: int) -> int:
        """Discrete log base the primitive element."""
        if a == 0:
            raise ValueError("log of zero")
        if self.has_tables:
            return int(self._log[a])
        g, cur = self.primitive, 1
        for k in range(self.size - 1):
            if cur == a:
                return k
            cur = self.mul(cur, g)
        raise AssertionError("unreachable")

    def sqrt(self, a: int) -> int | None:
        if a == 0:
            return 0
        k = self.log(a)
        if k % 2:
            return None
        return self.alpha_pow(k // 2)

    def order(self, a: int) -> int:
        n = self.size - 1
        for r, e in factorint(n).items():
            for _ in range(e):
                if self.pow(a, n // r) == 1:
                    n //= r
                else:
                    break
        return n


_FIELDS: dict[tuple[int, int], Field] = {}


def make_field(p: int, m: int = 1) -> Field:
    key = (p, m)
    if key not in _FIELDS:
        _FIELDS[key] = Field(p, m)
    return _FIELDS[key]


# ------------------------------------------------------------ component codes


@dataclass(frozen=True)
class Correction:
    corrected: tuple[int, ...]
    errors: tuple[tuple[int, int], ...]  # (0-based position, additive error value)


@dataclass(frozen=True)
class ComponentCode:
    """Coset of a narrow-sense BCH code with roots ``alpha**0 .. alpha**(n_roots-1)``.

    Symbols are in GF(p) (``field.p``); syndromes are in ``field``. Vectors
    shorter than ``length`` are implicitly zero-padded on the right.
    """

    field: Field
    length: int
    n_roots: int
    target: tuple[int, ...] | None = None
    _powers: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.n_roots not in (2, 4):
            raise ValueError("component codes have 2 or 4 consecutive roots")
        if not 1 <= self.length <= self.field.size - 1:
            raise ValueError(f"length must be in 1..{self.field.size - 1}")
        if self.target is not None and len(self.target) != self.n_roots:
            raise ValueError("target needs one syndrome per root")

    @property
    def designed_distance(self) -> int:
        return self.n_roots + 1

    @property
    def redundancy(self) -> int:
        """Check symbols over GF(p): one for the root 1, ``m`` for every other root."""
        return 1 + (self.n_roots - 1) * self.field.m

    @property
    def zero_target(self) -> tuple[int, ...]:
        return (0,) * self.n_roots

    def with_target(self, target: Sequence[int]) -> "ComponentCode":
        return replace(self, target=tuple(int(a) for a in target), _powers=self._powers)

    def power_row(self, j: int, upto: int) -> list[int]:
        row = self._powers.get(j)
        if row is None or len(row) < upto:
            f = self.field
            row = [f.alpha_pow(j * i) for i in range(max(upto, 32))]
            self._powers[j] = row
        return row

    def contains(self, seq: Sequence[int]) -> bool:
        return syndromes(seq, self) == (self.target or self.zero_target)


def make_code(p: int, m: int, n_roots: int, length: int | None = None) -> ComponentCode:
    f = make_field(p, m)
    return ComponentCode(f, length if length is not None else f.size - 1, n_roots)


def syndromes(seq: Sequence[int], code: ComponentCode) -> tuple[int, ...]:
    """``S_j = sum_i seq[i] * alpha**(j*i)`` for ``j = 0 .. n_roots-1``."""
    if len(seq) > code.length:
        raise ValueError(f"sequence of length {len(seq)} exceeds code length {code.length}")
    f = code.field
    p = f.p
    out = []
    for j in range(code.n_roots):
        row = code.power_row(j, len(seq))
        if f.m == 1:
            out.append(sum(c * r for c, r in zip(seq, row)) % p)
        else:
            acc = 0
            for c, r in zip(seq, row):
                if c % p:
                    acc = f.add(acc, f.mul(c % p, r))
            out.append(acc)
    return tuple(out)


def _deviations(seq, code):
    f = code.field
    target = code.target or code.zero_target
    return [f.sub(s, a) for s, a in zip(syndromes(seq, code), target)]


def _apply(seq, code, errors) -> Correction:
    p = code.field.p
    top = max([len(seq)] + [pos + 1 for pos, _ in errors])
    out = list(seq) + [0] * (top - len(seq))
    for pos, e in errors:
        out[pos] = (out[pos] - e) % p
    fixed = tuple(out)
    if not code.contains(fixed):
        raise DecodeFailure("re-syndrome check failed after correction")
    return Correction(fixed, tuple(sorted(errors)))


def _locator_position(code: ComponentCode, x: int) -> int:
    pos = code.field.log(x)
    if pos >= code.length:
        raise DecodeFailure(f"error locator points past the code length ({pos} >= {code.length})")
    return pos


def _single(code, d) -> list[tuple[int, int]] | None:
    f = code.field
    if d[0] == 0:
        return None
    x = f.div(d[1], d[0])
    if x == 0:
        return None
    for j in range(2, len(d)):
        if d[j] != f.mul(d[j - 1], x):
            return None
    if d[0] >= f.p:
        return None
    return [(_locator_position(code, x), d[0])]


def correct_up_to_1(seq: Sequence[int], code: ComponentCode) -> Correction:
    if code.n_roots != 2:
        raise ValueError("correct_up_to_1 needs a distance-3 code")
    d = _deviations(seq, code)
    if not any(d):
        return Correction(tuple(seq), ())
    errors = _single(code, d)
    if errors is None:
        raise DecodeFailure("syndromes are not consistent with a single substitution")
    return _apply(seq, code, errors)


def _quadratic_roots(f: Field, b: int, c: int, length: int) -> list[int]:
    """Roots of ``X^2 + bX + c`` among the first ``length`` powers of alpha."""
    if f.p != 2 and f.has_tables:
        disc = f.sub(f.mul(b, b), f.mul(4 % f.p, c))
        r = f.sqrt(disc)
        if r is None or r == 0:
            return []
        half = f.inv(2 % f.p)
        nb = f.neg(b)
        return [f.mul(f.add(nb, r), half), f.mul(f.sub(nb, r), half)]
    roots = []
    for i in range(length):
        x = f.alpha_pow(i)
        if f.add(f.add(f.mul(x, x), f.mul(b, x)), c) == 0:
            roots.append(x)
    return roots


def correct_up_to_2(seq: Sequence[int], code: ComponentCode) -> Correction:
    """Peterson-Gorenstein-Zierler decoding for up to two substitutions."""
    if code.n_roots != 4:
        raise ValueError("correct_up_to_2 needs a distance-5 code")
    f = code.field
    d = _deviations(seq, code)
    if not any(d):
        return Correction(tuple(seq), ())
    single = _single(code, d)
    if single is not None:
        return _apply(seq, code, single)
    det = f.sub(f.mul(d[1], d[1]), f.mul(d[0], d[2]))
    if det == 0:
        raise DecodeFailure("syndromes are not consistent with two substitutions")
    lam1 = f.div(f.sub(f.mul(d[0], d[3]), f.mul(d[2], d[1])), det)
    lam2 = f.div(f.sub(f.mul(d[2], d[2]), f.mul(d[1], d[3])), det)
    roots = _quadratic_roots(f, lam1, lam2, code.length)
    if len(roots) != 2 or roots[0] == roots[1] or 0 in roots:
        raise DecodeFailure("error locator does not split into two distinct positions")
    x1, x2 = roots
    e1 = f.div(f.sub(d[1], f.mul(d[0], x2)), f.sub(x1, x2))
    e2 = f.sub(d[0], e1)
    if not (0 < e1 < f.p and 0 < e2 < f.p):
        raise DecodeFailure("error values fall outside the symbol field")
    return _apply(seq, code, [(_locator_position(code, x1), e1), (_locator_position(code, x2), e2)])
