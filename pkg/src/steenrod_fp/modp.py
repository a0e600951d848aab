"""Exact integer and mod-p arithmetic: repunits, digit sums, Lucas-style coefficients."""

from __future__ import annotations

from functools import lru_cache
from math import isqrt
from typing import Iterable, Sequence


class PrimeError(ValueError):
    """Raised when a modulus is not an odd prime."""


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, isqrt(n) + 1, 2))


def check_prime(p: int) -> int:
    """Validate that ``p`` is an odd prime and return it."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise PrimeError(f"prime must be an int, got {type(p).__name__}")
    if p < 3 or not is_prime(p):
        raise PrimeError(f"{p} is not an odd prime")
    return p


def digits(k: int, p: int) -> list[int]:
    """Base-``p`` digits of ``k``, least significant first (empty for 0)."""
    if k < 0:
        raise ValueError("digits of a negative integer")
    out = []
    while k:
        k, d = divmod(k, p)
        out.append(d)
    return out


def rep_unit(n: int, p: int) -> int:
    """The repunit p_n = (p^n - 1)/(p - 1) = 1 + p + ... + p^(n-1).

    Python integers are unbounded, so there is no wraparound to report.
    """
    if n < 0:
        raise ValueError("rep_unit needs n >= 0")
    return (p**n - 1) // (p - 1)


def alpha(k: int, p: int) -> int:
    """Sum of the base-p digits of ``k``."""
    return sum(digits(k, p))


@lru_cache(maxsize=None)
def _small_factorials(p: int) -> tuple[int, ...]:
    f = [1]
    for i in range(1, p):
        f.append(f[-1] * i % p)
    return tuple(f)


def _inv(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem; 0 when k < 0 or k > n."""
    if n < 0:
        raise ValueError("binom_mod_p needs n >= 0")
    if k < 0 or k > n:
        return 0
    fact = _small_factorials(p)
    result = 1
    while n or k:
        n, nd = divmod(n, p)
        k, kd = divmod(k, p)
        if kd > nd:
            return 0
        result = result * fact[nd] * _inv(fact[kd] * fact[nd - kd] % p, p) % p
    return result


def multinom_mod_p(n: int, parts: Sequence[int], p: int) -> int:
    """Multinomial n! / (k_1! ... k_s! (n - sum k)!) mod p, computed digitwise.

    The remainder ``n - sum(parts)`` is an implicit extra part. The result is 0
    whenever adding the parts in base p would carry (or the parts overshoot n).
    """
    if n < 0 or any(k < 0 for k in parts):
        raise ValueError("multinomial arguments must be non-negative")
    rest = n - sum(parts)
    if rest < 0:
        return 0
    fact = _small_factorials(p)
    allparts = [k for k in parts if k] + ([rest] if rest else [])
    result = 1
    while n:
        n, nd = divmod(n, p)
        total = 0
        denom = 1
        for idx, k in enumerate(allparts):
            k, kd = divmod(k, p)
            allparts[idx] = k
            total += kd
            denom = denom * fact[kd] % p
        if total != nd:
            return 0
        result = result * fact[nd] * _inv(denom, p) % p
    return result


def no_carry(parts: Iterable[int], p: int) -> bool:
    """True iff the base-p addition of ``parts`` produces no carries."""
    parts = list(parts)
    return sum(alpha(k, p) for k in parts) == alpha(sum(parts), p)
