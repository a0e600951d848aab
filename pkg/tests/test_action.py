import random
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from steenrod_fp.action import (
    ExpressionError,
    apply_chi,
    apply_expression,
    apply_hq,
    apply_hq_cartan,
    apply_hq_milnor_sum,
    apply_hq_recursive,
    apply_milnor,
    apply_total_power,
    expression_degree,
    parse_expression,
)
from steenrod_fp.algebra import milnor_excess
from steenrod_fp.modp import alpha, digits, rep_unit
from steenrod_fp.poly import Polynomial, vandermonde, w_det

from conftest import random_poly


def x(i, p, n, e=1):
    return Polynomial.var(i, p, n, e)


@given(st.integers(0, 60), st.integers(0, 30), st.sampled_from([3, 5]))
def test_total_power_on_one_variable(a, i, p):
    expected = Polynomial.monomial((a + i * (p - 1),), p, comb(a, i) % p)
    assert apply_total_power(i, x(1, p, 1, a)) == expected


@given(st.integers(0, 40), st.lists(st.integers(0, 6), max_size=3), st.sampled_from([3, 5]))
def test_milnor_on_one_variable(a, R, p):
    e = milnor_excess(R)
    got = apply_milnor(R, x(1, p, 1, a))
    if e > a:
        assert not got
        return
    coeff = factorial(a) // factorial(a - e)
    for r in R:
        coeff //= factorial(r)
    rise = sum(r * (p**j - 1) for j, r in enumerate(R, start=1))
    assert got == Polynomial.monomial((a + rise,), p, coeff % p)


def test_power_examples():
    p = 3
    for b in range(3):
        assert apply_total_power(p**b, x(1, p, 1, p**b)) == x(1, p, 1, p ** (b + 1))
    assert not apply_total_power(2, x(1, p, 1))


@pytest.mark.parametrize("p", [3, 5])
def test_hq_on_linear_forms(p):
    n = 3
    rng = random.Random(p)
    for _ in range(10):
        v = Polynomial.linear_form([rng.randrange(p) for _ in range(n)], p, n)
        units = {rep_unit(b, p): b for b in range(5)}
        for r in range(0, 45):
            expected = v ** (p ** units[r]) if r in units else Polynomial.zero(p, n)
            assert apply_hq(r, v) == expected


@pytest.mark.parametrize("p", [3, 5])
def test_hq_on_frobenius_powers_of_a_variable(p):
    for k in range(3):
        f = x(1, p, 1, p**k)
        targets = {rep_unit(b, p) - rep_unit(k, p): b for b in range(k, k + 8)}
        for r in range(60):
            expected = x(1, p, 1, p ** targets[r]) if r in targets else Polynomial.zero(p, 1)
            assert apply_hq(r, f) == expected


def hq_cartan_rhs(r, f, g):
    acc = Polynomial.zero(f.p, f.nvars)
    for s in range(r + 1):
        acc = acc + apply_hq(s, f) * apply_hq(r - s, g)
    return acc


@pytest.mark.parametrize("p", [3, 5])
def test_cartan_formula(p, rng):
    for _ in range(15):
        f, g = random_poly(rng, p, 2, rng.randint(1, 4)), random_poly(rng, p, 2, rng.randint(1, 4))
        r = rng.randint(0, 8)
        assert apply_hq(r, f * g) == hq_cartan_rhs(r, f, g)


@pytest.mark.parametrize("p", [3, 5])
def test_frobenius_cartan_variants(p, rng):
    for _ in range(10):
        f, g = random_poly(rng, p, 2, rng.randint(1, 2)), random_poly(rng, p, 2, rng.randint(0, 3))
        r = rng.randint(0, 2 * p + 2)
        rhs = Polynomial.zero(p, 2)
        for s in range(r // p + 1):
            rhs = rhs + apply_hq(s, f).frobenius(1) * apply_hq(r - p * s, g)
        assert apply_hq(r, f.frobenius(1) * g) == rhs


def test_alpha_vanishing(rng):
    p = 3
    hits = 0
    for _ in range(40):
        d = rng.randint(1, 5)
        f = random_poly(rng, p, 3, d)
        r = rng.randint(1, 30)
        if alpha(r * (p - 1) + d, p) > d:
            hits += 1
            assert not apply_hq(r, f)
    assert hits > 5


@pytest.mark.parametrize("p", [3, 5])
def test_hq_on_power_p_minus_one_of_linear_form(p):
    n = 2
    v = Polynomial.linear_form([1, 2], p, n)
    for r in range(0, 40):
        t = (r + 1) * (p - 1)
        got = apply_hq(r, v ** (p - 1))
        if alpha(t, p) != p - 1:
            assert not got
            continue
        c = factorial(p - 1)
        for d in digits(t, p):
            c //= factorial(d)
        assert got == (v ** t).scale(c)


@pytest.mark.parametrize("p", [3, 5])
def test_three_hq_routes_agree(p, rng):
    for _ in range(12):
        f = random_poly(rng, p, rng.randint(1, 3), rng.randint(1, 5))
        r = rng.randint(0, 6)
        a = apply_hq_cartan(r, f)
        assert a == apply_hq_recursive(r, f)
        assert a == apply_hq_milnor_sum(r, f)


def test_unknown_hq_method():
    with pytest.raises(ValueError):
        apply_hq(1, x(1, 3, 1), method="nope")


def test_chi_sign():
    f = x(1, 3, 1)
    assert apply_chi(1, f) == -apply_hq(1, f)
    assert apply_chi(4, f) == apply_hq(4, f)


def test_milnor_examples():
    p = 3
    f = Polynomial.monomial((2, 2, 2), p)
    assert apply_milnor((2, 2), f) == w_det(3, p) ** 2
    assert apply_milnor((2, 0, 2), f) == vandermonde([1, 2, 3], [1, 3, 27], p, 3) ** 2
    assert not apply_milnor((8, 5, 1), x(1, p, 1, 2))


@pytest.mark.parametrize("p", [3, 5])
def test_milnor_cartan_frobenius(p, rng):
    for _ in range(8):
        f, g = random_poly(rng, p, 2, 1, 2), random_poly(rng, p, 2, rng.randint(1, 4))
        R = (rng.randint(0, p + 1), rng.randint(0, 1))
        rhs = Polynomial.zero(p, 2)
        for s1 in range(R[0] // p + 1):
            for s2 in range(R[1] // p + 1):
                T = (R[0] - p * s1, R[1] - p * s2)
                rhs = rhs + apply_milnor((s1, s2), f).frobenius(1) * apply_milnor(T, g)
        assert apply_milnor(R, f.frobenius(1) * g) == rhs


def test_expressions():
    p = 3
    assert apply_expression("", x(1, p, 1)) == x(1, p, 1)
    assert not apply_expression("Hq{1} Hq{1}", x(1, p, 1))
    f = Polynomial.monomial((8, 5, 1), p)
    target = w_det(3, p) * w_det(2, p, 3) ** 4 * x(1, p, 3, 3)
    assert apply_expression("P^8 P^1", f) == target
    assert apply_expression("P(5,1)", f) == target
    ops = parse_expression("chi(P^5) P(2,2) Hq{3} P^4")
    assert [str(a) for a in ops] == ["chi(P^5)", "P(2,2)", "Hq{3}", "P^4"]
    assert expression_degree(ops, 3) == 10 + 20 + 6 + 8
    with pytest.raises(ExpressionError):
        parse_expression("P^")


def test_order_is_right_to_left():
    p = 3
    f = x(1, p, 2) * x(2, p, 2)
    assert apply_expression("P^3 P^1", f) == apply_total_power(3, apply_total_power(1, f))
