import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from furstenberg.diophantine import log_ratio
from furstenberg.equidistribution import (
    as_fraction,
    default_lambda,
    del_integral_quadrature,
    del_integrals,
    del_series,
    event_frequencies,
    fractional_parts,
    hartman_profile,
    halton_offset_grid,
    shrinking_target_sim,
    star_discrepancy,
    weyl_sum,
)


def sqrt2_minus_1(bits=400):
    with mpmath.workprec(bits):
        return mpmath.sqrt(2) - 1


def test_weyl_at_zero_is_one():
    assert weyl_sum([3, 17, 10**30], 0).value == 1


def test_weyl_integer_phases():
    assert weyl_sum([2, 4, 6], Fraction(1, 2)).value == pytest.approx(1)


def test_weyl_alternating_sum():
    for N in (10, 11, 100, 101):
        assert abs(weyl_sum(list(range(1, N + 1)), Fraction(1, 2)).value) <= 1 / N + 1e-15


def test_weyl_semigroup_at_irrational(s23_terms):
    assert abs(weyl_sum(s23_terms[:1000], sqrt2_minus_1()).value) < 0.2


def test_weyl_h_scaling():
    freqs = [1, 5, 12, 99, 1000]
    x = Fraction(3, 17)
    a = weyl_sum(freqs, x, 7).value
    b = weyl_sum([7 * f for f in freqs], x, 1).value
    assert a == pytest.approx(b, abs=1e-15)


def test_weyl_rejects_bad_input():
    with pytest.raises(ValueError):
        weyl_sum([], 0.3)
    with pytest.raises(ValueError):
        weyl_sum([1], 0.3, h=0)


def test_exact_reduction_survives_huge_frequencies():
    # 3^200 * x mod 1 with x = 1/7 depends only on 3^200 mod 7
    x = Fraction(1, 7)
    big = 3**200
    assert fractional_parts([big], x)[0] == pytest.approx((big % 7) / 7)


def test_as_fraction_is_exact_for_mpf():
    with mpmath.workprec(300):
        v = mpmath.mpf(1) / 3
        fr = as_fraction(v)
        assert abs(mpmath.mpf(fr.numerator) / fr.denominator - v) == 0
    assert as_fraction(log_ratio(4, 2)) == 2


def test_star_discrepancy_examples():
    assert star_discrepancy([0.0]) == 1
    N = 50
    assert star_discrepancy([i / N for i in range(N)]) == pytest.approx(1 / N)
    with pytest.raises(ValueError):
        star_discrepancy([0.5, 1.0])
    with pytest.raises(ValueError):
        star_discrepancy([])


def test_star_discrepancy_semigroup_orbit(s23_terms):
    pts = fractional_parts(s23_terms, sqrt2_minus_1())
    assert star_discrepancy(pts) < 0.05


def brute_discrepancy(u):
    # sup over anchored intervals [0, t), checked at t just past and at each point
    u = np.sort(u)
    N = len(u)
    best = 0.0
    for t in np.concatenate([u, np.nextafter(u, 2)]):
        frac = np.count_nonzero(u < t) / N
        best = max(best, abs(frac - min(t, 1.0)))
    return best


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(min_value=0, max_value=0.999999, allow_nan=False), min_size=1, max_size=40))
def test_star_discrepancy_properties(pts):
    d = star_discrepancy(pts)
    # the sharp lower bound is 1/(2N), attained by the midpoints (2i-1)/(2N)
    assert 1 / (2 * len(pts)) - 1e-12 <= d <= 1
    assert d == pytest.approx(star_discrepancy(list(reversed(pts))))
    assert d == pytest.approx(brute_discrepancy(np.array(pts)), abs=1e-9)


def test_halton_grid_avoids_small_rationals():
    g = halton_offset_grid(512)
    assert len(g) == 512 and g.min() > 0
    for d in range(1, 7):
        assert np.min(np.abs(g * d - np.round(g * d))) > 1e-6


def test_hartman_profile_rational_parity(s23_terms):
    prof = hartman_profile(s23_terms, 1000)
    odd = sum(1 for v in s23_terms[:1000] if v % 2)
    assert prof.rational_values[Fraction(1, 2)] == pytest.approx(abs(1000 - 2 * odd) / 1000)
    assert prof.sup_grid < 1
    assert Fraction(0) not in prof.rational_values


def test_del_integrals_exact():
    ints = del_integrals(list(range(100, 200)), 10)
    assert ints[-1] == Fraction(1, 10)
    assert del_integrals([5, 5], 2)[-1] == 1
    assert del_integrals([5, 6, 5], 3)[-1] == Fraction(5, 9)


def test_del_series_bounded(s23_terms):
    sums = del_series(s23_terms, 100)
    assert all(a < b for a, b in zip(sums, sums[1:]))
    assert sums[-1] == sum(Fraction(1, n * n) for n in range(1, 101))
    assert float(sums[-1]) < math.pi**2 / 6


def test_del_quadrature_matches(s23_terms):
    for n in (1, 7, 50):
        assert del_integral_quadrature(s23_terms, n) == pytest.approx(1 / n, abs=1e-12)


def test_default_lambda():
    assert default_lambda(1) == default_lambda(2) == 1
    assert default_lambda(10) == 4
    assert default_lambda(1000) == math.floor(math.log2(1000 * math.log(1000)))
    seq = [default_lambda(n) for n in range(1, 5000)]
    assert all(a <= b for a, b in zip(seq, seq[1:]))


def test_shrinking_target_all_zero_path():
    path = shrinking_target_sim(N_max=100, bits=np.zeros(300, dtype=np.int8))
    assert path.hits == list(range(1, 101))
    assert all(path.window_averages[N] >= 0.5 for N in path.hits)


def test_shrinking_target_all_one_path():
    path = shrinking_target_sim(N_max=50, bits=np.ones(200, dtype=np.int8))
    assert path.hits == []
    assert all(v == 0 for v in path.window_averages.values())


def test_shrinking_target_window_bound_and_determinism():
    a = shrinking_target_sim(N_max=2000, seed=11)
    b = shrinking_target_sim(N_max=2000, seed=11)
    assert a.hits == b.hits and a.window_averages == b.window_averages
    assert all(a.window_averages[N] >= 0.5 for N in a.hits)
    assert set(a.hits) <= set(range(1, 2001))


def test_window_average_brute_force():
    rng = np.random.default_rng(5)
    bits = rng.integers(0, 2, 400).astype(np.int8)
    bits[:60] = rng.integers(0, 2, 60) * (rng.random(60) < 0.2)
    path = shrinking_target_sim(N_max=60, bits=bits)
    for N in (1, 5, 17, 60):
        total = 0
        for n in range(1, 2 * N):
            start = 2 * N - n  # T^(2N-n) x starts at 1-based bit 2N-n+1
            lam = default_lambda(n)
            if all(bits[start + i] == 0 for i in range(lam)):
                total += n
        assert path.window_averages[N] == pytest.approx(total / (2 * N))
    for N in range(1, 61):
        lam = default_lambda(N)
        assert (N in path.hits) == all(bits[N + i] == 0 for i in range(lam))


def test_lambda_validation():
    with pytest.raises(ValueError):
        shrinking_target_sim(lambda n: 5 - min(n, 4), N_max=10)
    with pytest.raises(ValueError):
        shrinking_target_sim(lambda n: 0, N_max=10)


def test_event_frequencies_small_run():
    res = event_frequencies([10], 2000, seed=3)
    p = res["exact"][10]
    sd = math.sqrt(p * (1 - p) / 2000)
    assert abs(res["counts"][10] / 2000 - p) <= 4 * sd
    assert res["windows_below_half"] == 0


def test_star_discrepancy_midpoints_attain_lower_bound():
    N = 8
    assert star_discrepancy([(2 * i - 1) / (2 * N) for i in range(1, N + 1)]) == pytest.approx(1 / (2 * N))


def test_hartman_profile_thin_random_set():
    # arrivals of a Poisson process with intensity u du in u = log t mimic the
    # log k / k selector far beyond any horizon that can be sampled index by index
    rng = np.random.default_rng(0)
    arrivals = np.cumsum(rng.exponential(size=1000))
    terms = sorted({int(round(math.exp(math.sqrt(2 * g)))) for g in arrivals})
    prof = hartman_profile(terms, len(terms), grid_size=512)
    assert prof.sup_grid < 0.15
