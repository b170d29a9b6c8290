import cmath
import math

import numpy as np
import pytest

from qhflux.lognum import LogComplex, log_sum


def test_round_trip_moderate_scale():
    rng = np.random.default_rng(1)
    for _ in range(300):
        v = complex(rng.normal(), rng.normal()) * math.exp(rng.uniform(-80, 80))
        lc = LogComplex.from_complex(v)
        assert abs(lc.to_complex() - v) <= 1e-14 * abs(v)


def test_round_trip_huge_scale():
    # beyond |log_mag| ~ 90 the double storing log_mag quantizes at
    # ulp(log_mag)/2, which is the irreducible relative floor of the value
    eps = 2.220446049250313e-16
    rng = np.random.default_rng(2)
    for _ in range(300):
        v = complex(rng.normal(), rng.normal()) * math.exp(rng.uniform(-690, 690))
        lc = LogComplex.from_complex(v)
        tol = max(1e-14, eps * abs(lc.log_mag))
        assert abs(lc.to_complex() - v) <= tol * abs(v)


def test_log_representation_round_trip_is_tight():
    # LogComplex -> complex -> LogComplex moves log_mag by at most ~1e-15
    rng = np.random.default_rng(3)
    for _ in range(300):
        lc = LogComplex(rng.uniform(-690, 690), rng.uniform(-3.1, 3.1))
        back = LogComplex.from_complex(lc.to_complex())
        assert abs(back.log_mag - lc.log_mag) < 2e-15 * max(1.0, abs(lc.log_mag))
        assert abs(back.phase - lc.phase) < 1e-13


def test_multiplication_adds_log_mags_exactly():
    a = LogComplex(123.25, 0.5)
    b = LogComplex(-700.5, -2.0)
    assert (a * b).log_mag == 123.25 - 700.5


def test_phase_normalized():
    assert -math.pi < LogComplex(0.0, 7.0).phase <= math.pi
    assert LogComplex.from_real(-2.0).phase == math.pi


def test_zero_sentinel():
    z = LogComplex.zero()
    assert z.is_zero
    assert z.to_complex() == 0
    assert (z * LogComplex(5.0, 1.0)).is_zero


def test_log_sum_empty_rejected():
    with pytest.raises(ValueError):
        log_sum([])


def test_log_sum_exact_cancellation():
    x = LogComplex(250.0, 1.2)
    assert log_sum([x, -x]).is_zero


def test_log_sum_one_plus_one():
    one = LogComplex.from_real(1.0)
    s = log_sum([one, one])
    assert s.log_mag == pytest.approx(math.log(2.0), abs=1e-15)
    assert s.phase == 0.0


def test_log_sum_exponential_series():
    # 50 terms of sum 10^j / j! against exp(10)
    terms = [LogComplex(j * math.log(10.0) - math.lgamma(j + 1), 0.0) for j in range(50)]
    s = log_sum(terms)
    assert abs(s.to_complex() - math.exp(10.0)) < 1e-13 * math.exp(10.0)


def test_log_sum_permutation_invariant():
    rng = np.random.default_rng(7)
    terms = [LogComplex(rng.uniform(-5, 5), rng.uniform(-3, 3)) for _ in range(40)]
    ref = log_sum(terms).to_complex()
    for seed in range(5):
        shuffled = list(terms)
        np.random.default_rng(seed).shuffle(shuffled)
        got = log_sum(shuffled).to_complex()
        assert abs(got - ref) <= 1e-13 * abs(ref)


def test_powi_and_conjugate():
    v = 0.3 - 0.8j
    lc = LogComplex.from_complex(v)
    assert abs(lc.powi(3).to_complex() - v ** 3) < 1e-14
    assert abs(lc.conjugate().to_complex() - v.conjugate()) < 1e-15
    assert cmath.isclose((-lc).to_complex(), -v)
