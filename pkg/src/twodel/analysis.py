"""Redundancy curves and constraint-probability bounds.

The redundancy side evaluates the closed-form bounds under the asymptotic
parameter choice ``s = 1065 log2 n`` and, alongside, the redundancy the
implemented parameter derivation would spend at the same ``(n, s)``. The
probability side evaluates the Chernoff-style lower bound on the fraction of
strings meeting the gap constraints and checks it against Monte Carlo
estimates.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

import numpy as np

from twodel import kernels
from twodel.construction import derive_params

LOG2_7 = math.log2(7)
S_CONSTANT = 1065
#: lengths of the six patterns whose presence in every window the bound tracks
PATTERN_LENGTHS = (4, 4, 5, 6, 1, 1)


def asymptotic_s(n: int) -> int:
    """The asymptotic gap bound ``s = 1065 log2 n``, rounded up."""
    return math.ceil(S_CONSTANT * math.log2(n))


def q1_check_bits(n: float) -> float:
    """Upper bound on ``log2 q1^r1``: 7/3 log2(n+1) + 28/3 log2(1065 log2 n)."""
    return 7 / 3 * math.log2(n + 1) + 28 / 3 * math.log2(S_CONSTANT * math.log2(n))


def q2_check_bits(n: float) -> float:
    """Upper bound on ``log2 q2^r2``: log2(n+2) + log2(2130 log2 n + 2)."""
    return math.log2(n + 2) + math.log2(2 * S_CONSTANT * math.log2(n) + 2)


def q1_bits_from_assumptions(n: float) -> float:
    """``r1 log2 q1`` with q1 = (1065 log2 n)^4, q1^(N1-1) = n+1 and r1 = 7/3 N1."""
    log_q1 = 4 * math.log2(S_CONSTANT * math.log2(n))
    N1 = math.log2(n + 1) / log_q1 + 1
    return 7 / 3 * N1 * log_q1


@dataclass(frozen=True)
class RedundancyReport:
    n: int
    s: int
    bits_counters: float
    bits_q1: float
    bits_q2: float
    bits_balance: float
    total: float
    implemented_total: float
    bgz_total: float

    @property
    def rate(self) -> float:
        return (self.n - self.total) / self.n

    @property
    def bgz_rate(self) -> float:
        return (self.n - self.bgz_total) / self.n

    @property
    def ratio_to_bgz(self) -> float:
        return self.total / self.bgz_total


def implemented_redundancy(n: int, s: int, image_size: int) -> float:
    """log2 of the averaging denominator the implemented parameters produce."""
    p = derive_params(n, s, 2, image_size=image_size)
    return (
        6 * LOG2_7
        + 3 * p.r1_impl * math.log2(p.q1)
        + p.r2_impl * math.log2(p.q2)
        + math.log2(s + 1)
    )


def redundancy_report(n: int, s_rule: Callable[[int], int] = asymptotic_s) -> RedundancyReport:
    s = s_rule(n)
    q1_part = 3 * q1_check_bits(n)
    q2_part = q2_check_bits(n)
    balance = math.log2(s + 1)
    total = 6 * LOG2_7 + q1_part + q2_part + balance
    # image of the segment hash taken as s^4, as in the asymptotic estimate
    implemented = implemented_redundancy(n, s, s**4)
    return RedundancyReport(
        n, s, 6 * LOG2_7, q1_part, q2_part, balance, total, implemented, 128 * math.log2(n)
    )


def redundancy_curves(n_range: Iterable[int], s_rule: Callable[[int], int] = asymptotic_s) -> list[RedundancyReport]:
    return [redundancy_report(n, s_rule) for n in n_range]


CSV_COLUMNS = (
    "n",
    "redundancy_ours_paperformula",
    "redundancy_ours_implemented",
    "redundancy_bgz",
    "rate_ours",
    "rate_bgz",
)


def write_curves_csv(reports: Iterable[RedundancyReport], fh: TextIO) -> None:
    out = csv.writer(fh, lineterminator="\n")
    out.writerow(CSV_COLUMNS)
    for r in reports:
        out.writerow([
            r.n,
            f"{r.total:.6f}",
            f"{r.implemented_total:.6f}",
            f"{r.bgz_total:.6f}",
            f"{r.rate:.9f}",
            f"{r.bgz_rate:.9f}",
        ])


# ------------------------------------------------------ probability bounds


@dataclass(frozen=True)
class BoundSpec:
    ell: int
    N: float
    value: float


def gap_probability_bound(N: float, ell: int) -> float:
    """Lower bound on the chance a fixed length-``ell`` pattern occurs in ``N`` random bits."""
    if ell < 1 or N < 0:
        raise ValueError("need ell >= 1 and N >= 0")
    return -math.expm1(-(N / ell) * 2.0 ** (-ell - 1))


def whole_string_bound(n: int, s: int, lengths: tuple[int, ...] = PATTERN_LENGTHS) -> float:
    """Union-bound floor on the probability that every pattern occurs in each of the
    ``2n/s`` windows of length ``s/2``."""
    if s % 2 or s > 2 * n or s < 2:
        raise ValueError("need an even s with 2 <= s <= 2n")
    slack = 0.0
    for ell in lengths:
        per = gap_probability_bound(s / 2, ell) ** (2 * n / s)
        slack += 1 - per
    return max(0.0, 1 - slack)


def bound_specs(n: int, s: int, lengths: tuple[int, ...] = PATTERN_LENGTHS) -> list[BoundSpec]:
    return [BoundSpec(ell, s / 2, gap_probability_bound(s / 2, ell)) for ell in lengths]


def min_constant(ell: int = 6) -> int:
    """Smallest integer ``c`` with ``c > ell * 2**(ell + 2) * ln 2``."""
    return math.floor(ell * 2 ** (ell + 2) * math.log(2)) + 1


# ------------------------------------------------------------ Monte Carlo


@dataclass(frozen=True)
class Estimate:
    n: int
    s: int
    trials: int
    hits: int
    low: float
    high: float

    @property
    def value(self) -> float:
        return self.hits / self.trials


def wilson_interval(hits: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    phat = hits / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


CHUNK = 1 << 14


def _chunk_hits(args: tuple[int, int, int, int, int]) -> int:
    seed, chunk, size, n, s = args
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))
    words = rng.integers(0, 1 << n, size=size, dtype=np.uint64, endpoint=False)
    return int(kernels.ct2_batch(words, n, s, True))


def monte_carlo_membership(n: int, s: int, trials: int, seed: int, workers: int = 1) -> Estimate:
    """Fraction of uniform length-``n`` strings in the gap- and run-constrained space.

    Trials are split into fixed chunks, each seeded from ``(seed, chunk)``, so
    the sample set does not depend on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 1 <= n <= 63:
        raise ValueError("Monte Carlo membership supports 1 <= n <= 63")
    jobs = []
    for chunk, start in enumerate(range(0, trials, CHUNK)):
        jobs.append((seed, chunk, min(CHUNK, trials - start), n, s))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            hits = sum(pool.map(_chunk_hits, jobs))
    else:
        hits = sum(map(_chunk_hits, jobs))
    return Estimate(n, s, trials, hits, *wilson_interval(hits, trials))


def exact_density(n: int, s: int) -> float:
    return kernels.ct2_count(n, s, True) / (1 << n)
