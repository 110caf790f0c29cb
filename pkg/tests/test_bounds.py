from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sdengine import (DatapathProfile, Target, k_res, p_of_k, p_res, capacity,
                      compute_time, simulate_compute_cycles,
                      condition_number_2x2, ADDERS_ONLY, HAS_MULTIPLIER,
                      HAS_DIVIDER)
from sdengine.bounds import _digit_cost_sum


def test_profile_validation():
    with pytest.raises(ValueError):
        DatapathProfile(3, 2, "vector", 8)
    with pytest.raises(ValueError):
        DatapathProfile(1, 2, HAS_MULTIPLIER, 8)
    assert DatapathProfile(3, 2, ADDERS_ONLY, 8).alpha == 0
    assert DatapathProfile(3, 2, HAS_MULTIPLIER, 8).alpha == 1
    assert DatapathProfile(4, 1, HAS_DIVIDER, 8).alpha == 2


def test_target_validation():
    with pytest.raises(ValueError):
        Target(0, 10)
    t = Target(3, 12, eta=Fraction(1, 64))
    assert (t.K, t.P) == (3, 12)


# -- result shape --------------------------------------------------------------

def test_result_shape_pins():
    assert k_res(100, 2048, 5) == 509
    assert p_res(100, 2048, 5) == 2545
    assert k_res(10, 2048, 6) == 351
    assert p_res(10, 2048, 6) == 2106


@given(st.integers(min_value=1, max_value=20),
       st.integers(min_value=1, max_value=200),
       st.integers(min_value=2, max_value=8))
def test_result_shape_consistency(K, P, delta):
    kres = k_res(K, P, delta)
    assert kres >= K
    ps = [p_of_k(k, K, P, delta, kres) for k in range(1, kres + 1)]
    assert ps[K - 1] == P
    # earlier approximants are more precise, by exactly delta before K
    for k in range(1, K - 1):
        assert ps[k - 1] - ps[k] == delta
    # strictly decreasing precision across the whole tail
    assert all(a > b for a, b in zip(ps, ps[1:])) or kres == 1
    with pytest.raises(ValueError):
        p_of_k(kres + 1, K, P, delta, kres)


# -- capacity -------------------------------------------------------------------

def test_capacity_pins():
    assert capacity(8, 2 ** 17) == (4088, 512)
    # tiny store: two words hold a 2-chunk triangle of 1 approximant + guess
    assert capacity(8, 2) == (16, 2)


def test_capacity_is_actually_addressable():
    # P_max digits of K_max approximants fit: the largest address used by
    # k in [0, K_max), chunk < P_max/U stays below D for the pinned config
    from sdengine import cpf
    p_max, k_max = capacity(8, 2 ** 17)
    n = p_max // 8
    # the schedule's precision profile is triangular: approximant k gets
    # about n - k chunks, and the pairing packs exactly that triangle
    assert cpf(k_max - 1, 0) < 2 ** 17
    assert cpf(0, n - 1) < 2 ** 17
    with pytest.raises(ValueError):
        capacity(0, 4)


# -- cycle model ----------------------------------------------------------------

def test_digit_cost_sum_matches_bruteforce():
    for U in (2, 4, 8):
        for alpha in (0, 1, 2):
            for p in range(0, 70):
                brute = sum(1 + alpha * (i // U) for i in range(p))
                assert _digit_cost_sum(p, alpha, U) == brute


def test_digit_cost_sum_equals_operator_closed_forms():
    for U in (2, 4, 8, 16):
        for p in range(1, 130):
            n = -(-p // U)
            mul = n * p - U * n * (n - 1) // 2
            div = p * (2 * n - 1) - U * n * (n - 1)
            assert _digit_cost_sum(p, 1, U) == mul
            assert _digit_cost_sum(p, 2, U) == div


def test_compute_time_breakdown_adders_only():
    prof = DatapathProfile(2, 1, ADDERS_ONLY, 8)
    t, t1, t2, t3 = compute_time(prof, 1, 2)
    # one diagonal: 2 fill, 2 approximant digits, 2 of the guess's 4 digits
    # charged outside the fill, no carries beyond the final drain
    assert (t1, t2, t3) == (2, 4, 0)
    assert t == 6
    assert simulate_compute_cycles(prof, 1, 2) == 6


@pytest.mark.parametrize("kind,beta,parallel", [
    (ADDERS_ONLY, 1, False), (ADDERS_ONLY, 2, True),
    (HAS_MULTIPLIER, 2, False), (HAS_MULTIPLIER, 2, True),
    (HAS_DIVIDER, 1, False), (HAS_DIVIDER, 1, True),
])
def test_cycle_model_matches_simulator(kind, beta, parallel):
    for U in (2, 8):
        for delta in (2, 4):
            prof = DatapathProfile(delta, beta, kind, U,
                                   parallel_adders=parallel)
            for K in (1, 2, 3):
                for P in (1, 5, 12, 23):
                    assert compute_time(prof, K, P)[0] == \
                        simulate_compute_cycles(prof, K, P), \
                        (kind, beta, parallel, U, delta, K, P)


def test_parallel_adders_zero_t3():
    serial = DatapathProfile(3, 2, HAS_MULTIPLIER, 8)
    par = DatapathProfile(3, 2, HAS_MULTIPLIER, 8, parallel_adders=True)
    ts = compute_time(serial, 4, 20)
    tp = compute_time(par, 4, 20)
    assert ts[3] > 0 and tp[3] == 0
    assert ts[1] == tp[1] and ts[2] == tp[2]


# -- conditioning ----------------------------------------------------------------

def test_condition_number_near_singular_family():
    for m in (0, 1, 3, 25):
        off = 1 - Fraction(1, 2 ** m)
        kappa = condition_number_2x2([[1, off], [off, 1]])
        assert kappa == 2 ** (m + 1) - 1


def test_condition_number_general():
    assert condition_number_2x2([[2, 0], [0, 1]]) == 2
    assert condition_number_2x2([[0, 1], [1, 0]]) == 1
    # non-symmetric: exact via the Gram matrix when it is a perfect square
    got = condition_number_2x2([[1, 1], [0, 1]])
    assert abs(float(got) - 2.618033988749895) < 1e-9
    with pytest.raises(ValueError):
        condition_number_2x2([[1, 1], [1, 1]])
