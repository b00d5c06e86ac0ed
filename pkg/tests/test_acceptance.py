"""Replication checks, one test per criterion, each printing a PASS/FAIL line."""

import math
import random
import statistics
import time
from fractions import Fraction

import numpy as np
import pytest

from furstenberg import diophantine as dio
from furstenberg import equidistribution as eq
from furstenberg import exp_sums as es
from furstenberg import quasi_independence as qi
from furstenberg import random_sets as rs
from furstenberg import semigroup as sg

S23 = sg.SemigroupBasis.of(2, 3)

# (a, b) for 2^a 3^b, in the order printed in the reference listing
LISTING = [
    (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (0, 2), (2, 1), (4, 0), (1, 2), (3, 1),
    (0, 3), (5, 0), (2, 2), (4, 1), (1, 3), (6, 0), (3, 2), (0, 4), (5, 1), (2, 3),
    (7, 0), (4, 2), (1, 4), (6, 1), (3, 3), (0, 5), (8, 0), (5, 2), (2, 4), (7, 1),
    (4, 3), (9, 0), (1, 5), (6, 2), (3, 4), (0, 6), (8, 1), (5, 3), (2, 5), (10, 0),
    (7, 2), (4, 4), (9, 1), (1, 6), (6, 3), (3, 5), (11, 0), (0, 7),
]
# 1-based positions where the printed listing is not increasing
LISTING_SWAPS = [(32, 33), (43, 44)]


@pytest.fixture
def report(capsys):
    def emit(number, passed, detail, elapsed, budget):
        ok = passed and elapsed < budget
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[criterion {number:2d}] {status}  {detail}  ({elapsed:.2f}s, budget {budget:g}s)")
        assert passed, detail
        assert elapsed < budget, f"runtime {elapsed:.2f}s over budget {budget}s"
    return emit


def listing_values():
    return [2**a * 3**b for a, b in LISTING]


def test_criterion_01_first_terms(report):
    t0 = time.perf_counter()
    terms = sg.first_terms(S23, len(LISTING))
    elapsed = time.perf_counter() - t0
    got = [t.value for t in terms]
    printed = listing_values()
    corrected = list(printed)
    for i, j in LISTING_SWAPS:
        corrected[i - 1], corrected[j - 1] = corrected[j - 1], corrected[i - 1]
    exps = [tuple(t.exponents) for t in terms]
    fixed_exps = list(LISTING)
    for i, j in LISTING_SWAPS:
        fixed_exps[i - 1], fixed_exps[j - 1] = fixed_exps[j - 1], fixed_exps[i - 1]
    passed = got == corrected and exps == fixed_exps and sorted(printed) == got
    report(1, passed, f"{len(got)} terms match the listing up to its swapped pairs {LISTING_SWAPS}", elapsed, 0.010)


@pytest.mark.xfail(strict=True, reason="the reference listing is not increasing at positions 32/33 and 43/44")
def test_criterion_01_literal_order():
    assert [t.value for t in sg.first_terms(S23, len(LISTING))] == listing_values()


def brute_count(N):
    total = 0
    a = 0
    while 2**a <= N:
        b = 0
        while 2**a * 3**b <= N:
            total += 1
            b += 1
        a += 1
    return total - 1  # drop 2^0 3^0


def test_criterion_02_counting(report):
    Ns = [10**3, 10**4, 10**5, 10**6]
    t0 = time.perf_counter()
    counts = {N: sg.count_upto(S23, N) for N in Ns}
    approx = {N: sg.ramanujan_approx(N) for N in Ns}
    elapsed = time.perf_counter() - t0
    exact_ok = all(counts[N] == brute_count(N) for N in Ns)
    dev = max(abs(counts[N] - approx[N]) for N in Ns)
    report(2, exact_ok and dev <= 5, f"counts {list(counts.values())}, max |count - approx| = {dev:.3f}", elapsed, 1)


def test_criterion_03_growth(report):
    t0 = time.perf_counter()
    s_n = sg.nth_term(S23, 10**4).value
    elapsed = time.perf_counter() - t0
    C = math.sqrt(2 * math.log(2) * math.log(3))
    rel = abs(math.log(s_n) / math.sqrt(10**4) - C) / C
    report(3, rel <= 0.02, f"relative error {rel:.4f}", elapsed, 1)


def test_criterion_04_diophantine(report):
    t0 = time.perf_counter()
    cf = dio.continued_fraction(dio.alpha(), 6)
    pairs = [(p.first, p.second) for p in dio.pure_pairs(2200)]
    word = dio.sturmian_code(14)
    rot = dio.rotation_word(10**5) == dio.merged_power_word(10**5)
    elapsed = time.perf_counter() - t0
    conv = [Fraction(p, q) for p, q in cf.convergents[1:6]]
    checks = {
        "quotients": cf.partial_quotients[:6] == [0, 1, 1, 1, 2, 2],
        "convergents": conv == [Fraction(1), Fraction(1, 2), Fraction(2, 3), Fraction(5, 8), Fraction(12, 19)],
        # (2, 3) and (3, 4) also satisfy the definition; the criterion lists the rest
        "pairs": pairs == [(2, 3), (3, 4), (8, 9), (27, 32), (243, 256), (2048, 2187)],
        "sturmian": word == [1, 2, 1, 2, 1, 2, 2, 1, 2, 1, 2, 2, 1, 2],
        "rotation": rot,
    }
    report(4, all(checks.values()), f"checks {checks}", elapsed, 5)


def test_criterion_05_bohr(report):
    t0 = time.perf_counter()
    ms = [m for m in range(0, 101) if not S23.contains(m)]
    results = {m: dio.verify_certificate(dio.bohr_certificate(m, S23), 10**7) for m in ms}
    elapsed = time.perf_counter() - t0
    bad = [m for m, ok in results.items() if not ok]
    report(5, not bad, f"{len(ms)} values certified to 1e7, failures {bad}", elapsed, 30)


def test_criterion_06_qi_oracle(report):
    rng = random.Random(2024)
    t0 = time.perf_counter()
    agree = 0
    for _ in range(200):
        A = rng.sample(range(1, 10**6 + 1), rng.randint(1, 12))
        agree += qi.is_quasi_independent(A)[0] == qi.is_quasi_independent_naive(A)
    elapsed = time.perf_counter() - t0
    report(6, agree == 200, f"{agree}/200 agree", elapsed, 30)


def test_criterion_07_psi2_exactness(report):
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    single = es.psi2_norm(es.TrigPolynomial.indicator([1])).value
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 16))
        ks = rng.choice(np.arange(-300, 301), size=n, replace=False)
        cs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        f = es.TrigPolynomial.from_arrays(ks.tolist(), cs)
        for q in (2, 4, 6, 8):
            g = es.lq_norm(f, q, "grid").value
            e = es.lq_norm(f, q, "exact").value
            worst = max(worst, abs(g - e) / e)
    elapsed = time.perf_counter() - t0
    err = abs(single - 1 / math.sqrt(math.log(2)))
    report(7, err <= 1e-6 and worst <= 1e-8, f"single-character error {err:.2e}, worst grid/exact {worst:.2e}",
           elapsed, 60)


def test_criterion_08_block_psi(report):
    prof = rs.SelectorProfile.parse("furstenberg")
    t0 = time.perf_counter()
    ratios, good, total = [], 0, 0
    for seed in range(5):
        s = rs.sample_selector(prof, 1 << 15, seed)
        for n in range(8, 15):
            size = len(qi.dyadic_blocks(s, n))
            total += 1
            good += 0.25 <= size / n <= 4
            if size:
                ratios.append(es.psi_block_ratio(s.members, n).value)
    elapsed = time.perf_counter() - t0
    spread = max(ratios) / statistics.median(ratios)
    frac = good / total
    report(8, spread <= 3 and frac >= 0.9, f"max/median ratio {spread:.3f}, size condition in {frac:.0%} of blocks",
           elapsed, 120)


def test_criterion_09_big_subset(report):
    prof = rs.SelectorProfile.parse("furstenberg")
    t0 = time.perf_counter()
    densities, certified = [], True
    for seed in range(5):
        s = rs.sample_selector(prof, 1 << 17, seed)
        rep = qi.build_big_subset(s, 16)
        densities.append(rep.densities[1 << 16])
        certified &= all(qi.certify(r) for r in rep.reports.values())
    elapsed = time.perf_counter() - t0
    passed = all(d >= 0.05 for d in densities) and certified
    report(9, passed, f"densities at 2^16 {[round(d, 3) for d in densities]}, all certified {certified}",
           elapsed, 120)


def test_criterion_10_growth(report):
    prof = rs.SelectorProfile.parse("furstenberg")
    t0 = time.perf_counter()
    vals = [rs.growth_report(rs.sample_selector(prof, 10**6, seed), prof).normalized for seed in range(20)]
    elapsed = time.perf_counter() - t0
    mean = statistics.fmean(vals)
    passed = 0.9 <= mean <= 1.1 and all(0.65 <= v <= 1.35 for v in vals)
    report(10, passed, f"mean {mean:.3f}, range [{min(vals):.3f}, {max(vals):.3f}]", elapsed, 60)


def test_criterion_11_sidon_regime(report):
    prof = rs.SelectorProfile.parse(f"reciprocal:{1 / (48 * math.e)!r}")
    A = math.exp(4)
    t0 = time.perf_counter()
    hits = 0
    for seed in range(100):
        s = rs.sample_selector(prof, 10**5, seed)
        window = [int(k) for k in s.members if A <= k <= 10**5]
        if len(window) >= 3 and qi.find_relation_bounded(window, 4) is not None:
            hits += 1
    bound = rs.relation_bound(4, A, prof).value
    elapsed = time.perf_counter() - t0
    p = min(bound, 1.0)
    limit = p + 3 * math.sqrt(p * (1 - p) / 100)
    report(11, hits / 100 <= limit, f"frequency {hits / 100:.3f} vs bound {bound:.3e} + 3 s.e. = {limit:.3e}",
           elapsed, 180)


def test_criterion_12_shrinking_target(report):
    Ns = [10, 100, 1000]
    n_paths = 10**4
    t0 = time.perf_counter()
    res = eq.event_frequencies(Ns, n_paths, seed=0)
    elapsed = time.perf_counter() - t0
    z = {}
    for N in Ns:
        p = res["exact"][N]
        z[N] = (res["counts"][N] - n_paths * p) / math.sqrt(n_paths * p * (1 - p))
    passed = all(abs(v) <= 3 for v in z.values()) and res["windows_below_half"] == 0
    detail = ", ".join(f"z({N})={v:+.2f}" for N, v in z.items())
    report(12, passed, f"{detail}, windows below 1/2: {res['windows_below_half']}", elapsed, 120)


def test_criterion_13_del(report):
    freqs = [t.value for t in sg.first_terms(S23, 50)]
    t0 = time.perf_counter()
    exact = eq.del_integrals(freqs, 50)
    quad = [eq.del_integral_quadrature(freqs, n) for n in range(1, 51)]
    elapsed = time.perf_counter() - t0
    exact_ok = exact == [Fraction(1, n) for n in range(1, 51)]
    err = max(abs(q - 1 / n) for n, q in enumerate(quad, start=1))
    report(13, exact_ok and err <= 1e-10, f"exact path matches 1/n: {exact_ok}, quadrature error {err:.2e}",
           elapsed, 60)


def test_criterion_14_mesh(report):
    Ns = [10**3, 10**4, 10**5, 10**6]
    t0 = time.perf_counter()
    p23 = qi.mesh_p_bound([(N, sg.count_upto(S23, N)) for N in Ns]).p_min
    p235 = qi.mesh_p_bound([(N, sg.count_upto("2,3,5", N)) for N in Ns]).p_min
    elapsed = time.perf_counter() - t0
    passed = abs(p23 - 4 / 3) <= 0.1 and abs(p235 - 1.5) <= 0.1
    report(14, passed, f"p_min(2,3) = {p23:.3f}, p_min(2,3,5) = {p235:.3f}", elapsed, 60)
