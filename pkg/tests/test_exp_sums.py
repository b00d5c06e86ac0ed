import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from furstenberg.exp_sums import (
    TrigPolynomial,
    lambda_q_estimate,
    lq_norm,
    psi2_norm,
    psi_block_ratio,
    rider_diagnostic,
    rider_functional,
    supq_q_list,
)
from furstenberg.semigroup import enumerate_terms


def random_poly(rng, n_terms=8, max_freq=200):
    ks = rng.choice(np.arange(-max_freq, max_freq + 1), size=n_terms, replace=False)
    cs = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    return TrigPolynomial.from_arrays(ks.tolist(), cs)


def test_construction():
    f = TrigPolynomial.indicator([1, 4, 9])
    assert len(f) == 3 and f.degree == 9
    with pytest.raises(ValueError):
        TrigPolynomial.indicator([1, 1])
    with pytest.raises(ValueError):
        lq_norm(TrigPolynomial({}), 2)


def test_single_character():
    f = TrigPolynomial.indicator([5])
    for q in (2, 4, 6, 8):
        assert lq_norm(f, q, "exact").value == pytest.approx(1, abs=1e-15)
    assert psi2_norm(f).value == pytest.approx(1 / math.sqrt(math.log(2)), rel=1e-12)


def test_two_characters_l4():
    f = TrigPolynomial.indicator([0, 1])
    assert lq_norm(f, 4, "exact").value == pytest.approx(6 ** 0.25, rel=1e-14)
    assert lq_norm(f, 4, "grid").value == pytest.approx(6 ** 0.25, rel=1e-14)


def test_exact_requires_small_even_q():
    f = TrigPolynomial.indicator([1, 2])
    with pytest.raises(ValueError):
        lq_norm(f, 3, "exact")
    with pytest.raises(ValueError):
        lq_norm(f, 4, "grid", grid_size=4)


def test_grid_matches_exact_random():
    rng = np.random.default_rng(0)
    for _ in range(50):
        f = random_poly(rng)
        for q in (4, 6, 8):
            g = lq_norm(f, q, "grid").value
            e = lq_norm(f, q, "exact").value
            assert abs(g - e) <= 1e-8 * e


def test_parseval():
    rng = np.random.default_rng(1)
    for _ in range(20):
        f = random_poly(rng, 12, 500)
        l2 = math.sqrt(float(np.sum(np.abs(f.coefficients) ** 2)))
        assert lq_norm(f, 2, "grid").value == pytest.approx(l2, rel=1e-12)
        assert lq_norm(f, 2, "exact").value == pytest.approx(l2, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.1, max_value=50), st.sampled_from([2, 3.5, 4, 7]))
def test_homogeneity(c, q):
    f = TrigPolynomial.indicator([1, 3, 10, 27])
    a = lq_norm(f.scaled(c), q).value
    assert a == pytest.approx(c * lq_norm(f, q).value, rel=1e-10)
    assert psi2_norm(f.scaled(c)).value == pytest.approx(c * psi2_norm(f).value, rel=1e-9)


def test_lq_increasing_in_q():
    rng = np.random.default_rng(2)
    for _ in range(10):
        f = random_poly(rng)
        vals = [lq_norm(f, q).value for q in (1, 1.5, 2, 3, 4, 6, 8, 12)]
        assert all(a <= b * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


def test_orlicz_and_supq_comparable():
    f = TrigPolynomial.indicator([2**k for k in range(10)])
    orl = psi2_norm(f, "orlicz").value
    sq = psi2_norm(f, "supq").value
    assert 0.25 <= orl / sq <= 4
    assert psi2_norm(f).extra["orlicz_mean"] == pytest.approx(1, abs=1e-9)


def test_supq_q_list():
    qs = supq_q_list(TrigPolynomial.indicator(range(1, 16)))
    assert qs[0] == 2 and all(q % 2 == 0 for q in qs)
    with pytest.raises(ValueError):
        psi2_norm(TrigPolynomial.indicator([1]), "nope")


def test_psi_block_ratio():
    S = [t.value for t in enumerate_terms("2,3", 2**12)]
    est = psi_block_ratio(S, 10)
    assert est.extra["block_size"] == sum(1 for k in S if 1024 <= k < 2048)
    assert est.value == pytest.approx(est.extra["psi2"] / math.sqrt(est.extra["block_size"]))
    with pytest.raises(ValueError):
        psi_block_ratio([1, 2], 10)


def test_rider_of_two_characters():
    f = TrigPolynomial.indicator([1, 2])
    est = rider_functional(f, 50, 0)
    assert est.value == pytest.approx(2, abs=1e-12)
    assert est.extra["stderr"] == pytest.approx(0, abs=1e-12)


def test_rider_bounds():
    f = TrigPolynomial.indicator([1, 2, 3, 4, 5, 6, 7, 8])
    est = rider_functional(f, 200, 1)
    l2 = math.sqrt(8)
    assert l2 <= est.value <= 8 + 1e-12
    diag = rider_diagnostic(f, 1.0, 100, 1)
    assert diag["coefficient_norm"] == pytest.approx(8)
    assert diag["ratio"] >= 1


def test_rider_deterministic():
    f = TrigPolynomial.indicator([1, 3, 9, 27])
    assert rider_functional(f, 30, 7).value == rider_functional(f, 30, 7).value


def test_lambda_q_single_element():
    est = lambda_q_estimate([17], 4, 5, 0)
    assert est.value == pytest.approx(1, abs=1e-12)


def test_lambda_q_lacunary_vs_interval():
    S = [t.value for t in enumerate_terms("2,3", 10**5)]
    sparse = lambda_q_estimate(S, 4, 20, 0, support=32).value
    interval = lambda_q_estimate(range(1, 33), 4, 20, 0, support=32).value
    assert 1 <= sparse and 1 <= interval
    powers = lambda_q_estimate([2**k for k in range(16)], 4, 20, 0).value
    assert powers <= 2 ** 0.25 + 1e-9
    with pytest.raises(ValueError):
        lambda_q_estimate(S, 1, 5, 0)


def test_grid_limit():
    f = TrigPolynomial.indicator([1, 2**40])
    with pytest.raises(ValueError):
        lq_norm(f, 4)
    assert lq_norm(f, 4, "exact").value == pytest.approx(6 ** 0.25)
