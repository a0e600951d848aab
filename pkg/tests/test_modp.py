from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from steenrod_fp.modp import (
    PrimeError,
    alpha,
    binom_mod_p,
    check_prime,
    digits,
    is_prime,
    multinom_mod_p,
    no_carry,
    rep_unit,
)

PRIMES = st.sampled_from([3, 5, 7, 11])


def test_rep_unit_values():
    assert rep_unit(0, 3) == 0
    assert rep_unit(2, 3) == 4
    assert rep_unit(5, 3) == 121
    # big arguments stay exact
    assert rep_unit(80, 7) == (7**80 - 1) // 6


def test_rep_unit_rejects_negative():
    with pytest.raises(ValueError):
        rep_unit(-1, 3)


def test_alpha_values():
    assert alpha(0, 3) == 0
    assert alpha(23, 3) == 5
    assert alpha(8, 3) == 4


@given(st.integers(0, 10**6), PRIMES)
def test_alpha_congruent_mod_p_minus_one(k, p):
    assert alpha(k, p) % (p - 1) == k % (p - 1)


@given(st.integers(0, 10**6), PRIMES)
def test_digits_reassemble(k, p):
    ds = digits(k, p)
    assert sum(d * p**i for i, d in enumerate(ds)) == k
    assert all(0 <= d < p for d in ds)
    assert not ds or ds[-1] != 0


def test_check_prime():
    assert check_prime(5) == 5
    for bad in (2, 4, 9, 1, 0, -3):
        with pytest.raises(PrimeError):
            check_prime(bad)
    with pytest.raises(PrimeError):
        check_prime(True)


def test_is_prime_small():
    assert [n for n in range(40) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def test_binom_examples():
    assert binom_mod_p(8, 4, 3) == 1
    assert binom_mod_p(9, 0, 5) == 1
    assert binom_mod_p(1, 2, 3) == 0
    assert binom_mod_p(4, -1, 3) == 0


@given(st.integers(0, 400), st.integers(-3, 400), PRIMES)
def test_binom_matches_exact(n, k, p):
    exact = comb(n, k) % p if 0 <= k <= n else 0
    assert binom_mod_p(n, k, p) == exact


def test_multinom_examples():
    assert multinom_mod_p(4, [2, 2], 5) == 1
    assert multinom_mod_p(7, [7], 3) == 1
    assert multinom_mod_p(4, [1, 3], 5) == 4
    assert multinom_mod_p(3, [2, 2], 3) == 0


@given(st.lists(st.integers(0, 30), min_size=1, max_size=4), st.integers(0, 20), PRIMES)
def test_multinom_matches_exact(parts, extra, p):
    n = sum(parts) + extra
    exact = factorial(n)
    for k in parts + [extra]:
        exact //= factorial(k)
    assert multinom_mod_p(n, parts, p) == exact % p


@given(st.lists(st.integers(0, 200), max_size=4), PRIMES)
def test_no_carry_iff_multinomial_nonzero(parts, p):
    assert no_carry(parts, p) == (multinom_mod_p(sum(parts), parts, p) != 0)


def test_multinom_rejects_negative():
    with pytest.raises(ValueError):
        multinom_mod_p(3, [-1], 3)
