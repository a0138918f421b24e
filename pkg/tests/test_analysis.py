import io
import math

import mpmath
import pytest

from twodel import analysis as an

mpmath.mp.dps = 50
NS = [2**10, 2**20, 2**30]


def _q1_bits_hp(n):
    n = mpmath.mpf(n)
    return mpmath.mpf(7) / 3 * mpmath.log(n + 1, 2) + mpmath.mpf(28) / 3 * mpmath.log(1065 * mpmath.log(n, 2), 2)


def _q2_bits_hp(n):
    n = mpmath.mpf(n)
    return mpmath.log(n + 2, 2) + mpmath.log(2130 * mpmath.log(n, 2) + 2, 2)


@pytest.mark.parametrize("n", NS)
def test_check_bits_high_precision(n):
    assert abs(an.q1_check_bits(n) - float(_q1_bits_hp(n))) <= 1e-6 * float(_q1_bits_hp(n))
    assert abs(an.q2_check_bits(n) - float(_q2_bits_hp(n))) <= 1e-6 * float(_q2_bits_hp(n))


def test_q1_check_bits_at_2_20():
    assert an.q1_check_bits(2**20) == pytest.approx(180.8666, abs=1e-4)


@pytest.mark.parametrize("n", NS)
def test_q1_check_bits_from_parameter_assumptions(n):
    # the closed form is exactly r1 log2 q1 under q1 = s^4, q1^(N1-1) = n+1, r1 = 7/3 N1
    assert an.q1_bits_from_assumptions(n) == pytest.approx(an.q1_check_bits(n), rel=1e-12)


def test_ratio_to_bgz_decreasing():
    ratios = [an.redundancy_report(n).ratio_to_bgz for n in [2**k for k in range(10, 31)]]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] < 0.2
    assert ratios[0] == pytest.approx(0.39, abs=0.01)


def test_report_fields():
    r = an.redundancy_report(2**20)
    assert r.s == math.ceil(1065 * 20)
    assert r.total == pytest.approx(r.bits_counters + r.bits_q1 + r.bits_q2 + r.bits_balance)
    assert r.bits_counters == pytest.approx(6 * math.log2(7))
    assert r.bgz_total == pytest.approx(128 * 20)
    assert 0 < r.rate < 1 and r.rate > r.bgz_rate


def test_implemented_redundancy_values():
    vals = [an.redundancy_report(n).implemented_total for n in NS]
    assert vals == pytest.approx([725.9, 778.9, 839.8], abs=0.1)
    assert vals[0] < vals[1] < vals[2]


def test_csv_output():
    buf = io.StringIO()
    an.write_curves_csv(an.redundancy_curves([2**10, 2**11]), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].split(",") == list(an.CSV_COLUMNS)
    assert len(lines) == 3 and lines[1].startswith("1024,")


def test_min_constant_and_single_bound():
    assert an.min_constant(6) == 1065
    assert 6 * 2**8 * math.log(2) < 1065 and 1064 < 6 * 2**8 * math.log(2)
    assert an.gap_probability_bound(128, 4) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert an.gap_probability_bound(0, 4) == 0
    with pytest.raises(ValueError):
        an.gap_probability_bound(10, 0)


def test_whole_string_bound_shape():
    # vacuous at small scale: the six-symbol pattern needs windows of thousands of bits
    assert an.whole_string_bound(60, 60) == 0.0
    vals = [an.whole_string_bound(2**20, s) for s in (20000, 21300, 30000, 60000)]
    assert vals == sorted(vals) and vals[-1] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        an.whole_string_bound(10, 9)
    with pytest.raises(ValueError):
        an.whole_string_bound(10, 22)
    assert [b.ell for b in an.bound_specs(10, 10)] == list(an.PATTERN_LENGTHS)


def test_whole_string_bound_single_window():
    per = [an.gap_probability_bound(500, ell) for ell in an.PATTERN_LENGTHS]
    assert an.whole_string_bound(500, 1000) == pytest.approx(max(0.0, 1 - sum(1 - v for v in per)))


def test_whole_string_bound_along_asymptotic_rule():
    vals = []
    for k in range(14, 31, 2):
        s = 2 * math.ceil(an.S_CONSTANT * k / 2)
        vals.append(an.whole_string_bound(2**k, s))
    assert all(0.999 < v < 1 for v in vals)
    assert vals == sorted(vals)


def test_wilson_interval():
    lo, hi = an.wilson_interval(50, 100)
    assert lo < 0.5 < hi and hi - lo == pytest.approx(0.192, abs=0.002)
    assert an.wilson_interval(0, 10)[0] == 0.0
    assert an.wilson_interval(10, 10)[1] == pytest.approx(1.0)


@pytest.mark.parametrize("s", [4, 6, 8])
def test_monte_carlo_matches_exact_n10(s):
    est = an.monte_carlo_membership(10, s, 40_000, seed=s)
    exact = an.exact_density(10, s)
    assert est.low <= exact <= est.high


def test_monte_carlo_reproducible_across_workers():
    a = an.monte_carlo_membership(24, 14, 40_000, seed=3, workers=1)
    b = an.monte_carlo_membership(24, 14, 40_000, seed=3, workers=2)
    assert a.hits == b.hits
    assert an.monte_carlo_membership(24, 14, 40_000, seed=4).hits != a.hits


def test_monte_carlo_dominates_bound():
    for n, s in [(20, 10), (40, 14), (60, 20), (60, 80)]:
        est = an.monte_carlo_membership(n, s, 20_000, seed=1)
        assert est.value >= an.whole_string_bound(n, s)


def test_monte_carlo_errors():
    with pytest.raises(ValueError):
        an.monte_carlo_membership(64, 10, 10, 0)
    with pytest.raises(ValueError):
        an.monte_carlo_membership(10, 10, 0, 0)


def test_monte_carlo_seeds_agree():
    a = an.monte_carlo_membership(40, 36, 30_000, seed=10)
    b = an.monte_carlo_membership(40, 36, 30_000, seed=11)
    assert 0 < a.value < 1
    assert a.low <= b.high and b.low <= a.high
