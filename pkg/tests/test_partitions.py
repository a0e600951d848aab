import pytest

from steenrod_fp.modp import alpha, rep_unit
from steenrod_fp.partitions import (
    Partition,
    PartitionError,
    R_of,
    antidiagonals,
    d_c,
    d_s,
    epsilon,
    gamma_of,
    is_column_p_regular,
    is_t_regular,
    kappa_of,
    lambda_minus,
    milnor_spike,
    p_prime_polynomial,
    partition_report,
    r_sequence,
    remove_last_antidiagonal,
    s_monomial,
    t_conjugate,
    t_regular_partitions,
    tab_r_sequence,
    tableau,
    v_polynomial,
    w_conjugate_polynomial,
)
from steenrod_fp.poly import Polynomial, leading_monomial, omega_vector, product, vandermonde, w_det


def P(text, p=3):
    return Partition.parse(text, p)


def br(p, n, *pairs):
    """[x_i^e, ...] from (i, e) pairs."""
    return vandermonde([i for i, _ in pairs], [e for _, e in pairs], p, n)


def box_count_gamma(lam):
    q = lam.p - 1
    g = []
    j = 0
    while True:
        cnt = sum(min(max(x - j * q, 0), q) for x in lam.parts)
        if not cnt:
            return tuple(g)
        g.append(cnt)
        j += 1


GRID3 = list(t_regular_partitions(3, 4, 200))
GRID5 = list(t_regular_partitions(5, 3, 200))


def test_parse_and_errors():
    assert P("6,5,4,3,2").parts == (6, 5, 4, 3, 2)
    assert P("3,0").parts == (3,)
    assert len(P("")) == 0
    with pytest.raises(PartitionError):
        P("2,3")
    with pytest.raises(PartitionError):
        P("a,b")
    with pytest.raises(PartitionError):
        Partition((2, -1), 3)


def test_regularity():
    assert is_column_p_regular(P("2,2,2"))
    assert not is_column_p_regular(P("5,1"))
    assert is_column_p_regular(P("9,6,3", 5))
    assert is_t_regular(P("5,3,2"))
    assert is_t_regular(P("9,6,3", 5))
    assert not is_t_regular(P("3,3,1"))
    with pytest.raises(PartitionError):
        is_t_regular(P("5,1"))
    with pytest.raises(PartitionError):
        t_conjugate(P("3,3,1"))


@pytest.mark.parametrize("kappa", [(1,), (2, 1), (3, 2, 1), (2, 2, 1, 1), (3, 3, 2, 1)])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_scaled_kappa_is_t_regular(kappa, p):
    lam = Partition(tuple((p - 1) * k for k in kappa), p)
    assert is_t_regular(lam)
    assert kappa_of(lam) == kappa


def test_t_regular_matches_block_shapes():
    for p in (3, 5):
        # brute force over all column-regular partitions with at most 3 parts
        for a in range(1, 3 * (p - 1) + 1):
            for b in range(0, a + 1):
                for c in range(0, b + 1):
                    lam = Partition(tuple(x for x in (a, b, c) if x), p)
                    if not is_column_p_regular(lam):
                        continue
                    shape_ok = all(
                        all(x == p - 1 for x in blk.parts[:-1]) for blk in lam.blocks
                    )
                    assert is_t_regular(lam) == shape_ok, lam


def test_gamma_examples():
    assert gamma_of(P("5,3,2")).parts == (6, 3, 1)
    assert gamma_of(P("6,5,4,3,2")).parts == (10, 7, 3)
    assert gamma_of(P("4,3,1")).parts == (5, 3)
    assert gamma_of(P("9,6,3", 5)).parts == (11, 6, 1)


@pytest.mark.parametrize("lam", GRID3 + GRID5, ids=str)
def test_gamma_against_box_count(lam):
    data = t_conjugate(lam)
    assert data.gamma.parts == box_count_gamma(lam)
    g = data.gamma.parts
    assert g[0] <= len(lam) * (lam.p - 1)
    assert all(g[j] - g[j + 1] >= lam.p - 1 for j in range(len(g) - 1))
    for gj, n, b in zip(g, data.n_k, data.b_k):
        assert gj == (n - 1) * (lam.p - 1) + b and 1 <= b <= lam.p - 1


def test_lambda_minus():
    assert lambda_minus(P("5,3,2")).parts == (3, 1)
    assert len(lambda_minus(P("2,2"))) == 0


@pytest.mark.parametrize("lam", GRID3 + GRID5, ids=str)
def test_degree_identities(lam):
    p = lam.p
    g = gamma_of(lam).parts
    assert d_c(lam) == g[0] + p * d_c(lambda_minus(lam))
    assert d_s(lam) - d_c(lam) == (p - 1) * sum(r_sequence(lam))
    assert v_polynomial(lam).degree() == d_c(lam)
    assert w_conjugate_polynomial(lam).degree() == d_s(lam)
    assert len(antidiagonals(lam)) == g[0]


@pytest.mark.parametrize("lam", GRID3 + GRID5, ids=str)
def test_r_sequence(lam):
    r = r_sequence(lam)
    assert r == tab_r_sequence(lam)
    assert all(r[k] >= lam.p * r[k + 1] for k in range(len(r) - 1))
    lm = lambda_minus(lam)
    if len(r) >= 2:
        assert r[1] == r_sequence(lm)[0]
    if len(r) == 1:
        data = t_conjugate(lam)
        n, b = data.n_k[0], data.b_k[0]
        assert r[0] == (b + 1) * rep_unit(n - 1, lam.p) - (n - 1)


def test_65432_tableau_and_r():
    lam = P("6,5,4,3,2")
    assert tableau(lam) == [[0] * 6, [0, 0, 0, 0, 1], [0, 0, 3, 4], [9, 12, 13], [39, 40]]
    assert r_sequence(lam) == (100, 20, 1)
    assert d_c(lam) == 58 and d_s(lam) == 300


@pytest.mark.parametrize("p,n", [(3, 1), (3, 3), (5, 2), (7, 2)])
def test_rectangular_partition(p, n):
    lam = Partition((p - 1,) * n, p)
    assert d_c(lam) == n * (p - 1)
    assert d_s(lam) == p**n - 1
    assert all(s == 1 for _, s in antidiagonals(lam))
    assert v_polynomial(lam) == Polynomial.monomial((p - 1,) * n, p)
    assert w_conjugate_polynomial(lam) == w_det(n, p) ** (p - 1)
    assert milnor_spike(lam) == (p - 1,) * n
    r = rep_unit(n, p) - n
    R = R_of(r, lam)
    assert R == p**n - 1 and alpha(R, p) == n * (p - 1)


def test_v_examples():
    p = 5
    lam = P("9,6,3", 5)
    x1 = Polynomial.var(1, p, 3)
    x3 = Polynomial.var(3, p, 3)
    expected = x1**4 * br(p, 3, (1, 1), (2, 5)) ** 4 * br(p, 3, (1, 1), (2, 5), (3, 25)) * br(p, 3, (2, 1), (3, 5)) * x3
    assert v_polynomial(lam) == expected
    assert s_monomial(lam) == ((49, 14, 3), 1)
    assert leading_monomial(v_polynomial(lam)) == ((49, 14, 3), 1)

    p = 3
    n = 5
    x = [Polynomial.var(i, p, n) for i in range(1, n + 1)]
    expected = product(
        [
            x[0] ** 2,
            br(p, n, (1, 1), (2, 3)) ** 2,
            br(p, n, (1, 1), (2, 3), (3, 9)) ** 2,
            br(p, n, (2, 1), (3, 3), (4, 9)),
            br(p, n, (3, 1), (4, 3)),
            br(p, n, (4, 1), (5, 3)),
            x[4],
        ],
        p,
        n,
    )
    assert v_polynomial(P("6,5,4,3,2")) == expected


def test_w_conjugate_example():
    p, n = 3, 5
    lam = P("6,5,4,3,2")
    assert lam.conjugate() == (5, 5, 4, 3, 2, 1)
    expected = product(
        [w_det(5, p, n) ** 2, w_det(4, p, n), w_det(3, p, n), w_det(2, p, n), w_det(1, p, n)], p, n
    )
    assert w_conjugate_polynomial(lam) == expected
    assert d_s(P("5,3,2")) == 32 and d_c(P("5,3,2")) == 24


def test_p_prime_example():
    p, n = 3, 3
    lam = P("4,3,1")
    expected = w_det(3, p, n) * w_det(2, p, n) ** 4 * Polynomial.var(1, p, n, 3)
    assert p_prime_polynomial(lam) == expected
    single = P("2,2,1")
    assert p_prime_polynomial(single) == w_conjugate_polynomial(single)


def test_spike_examples():
    assert s_monomial(P("6,6,4,4,2"))[0] == (26, 26, 8, 8, 2)
    assert milnor_spike(P("4,3,1")) == (8, 5, 1)
    assert milnor_spike(P("5,3")) == (17, 5)


@pytest.mark.parametrize("lam", GRID3 + GRID5, ids=str)
def test_spike_structure(lam):
    n = len(lam)
    exps, sign = s_monomial(lam)
    p = lam.p
    parts = product((v_polynomial(b, n).frobenius(j) for j, b in enumerate(lam.blocks)), p, n)
    (only, _), = list(parts.terms())
    assert only == exps
    assert v_polynomial(lam).coefficient(exps) == sign % p
    assert sign == (-1) ** epsilon(lam)
    g = gamma_of(lam).parts
    assert tuple(x for x in omega_vector(exps, p) if x) == g
    assert tuple(x for x in omega_vector(milnor_spike(lam), p) if x) == g


@pytest.mark.parametrize("lam", [l for l in GRID3 + GRID5 if sum(l.parts) > 1], ids=str)
def test_remove_last_antidiagonal(lam):
    try:
        mu, s = remove_last_antidiagonal(lam)
    except PartitionError:
        pytest.skip("mu not T-regular")
    p = lam.p
    assert d_c(lam) == d_c(mu) + rep_unit(s, p)
    assert d_c(lambda_minus(lam)) == d_c(lambda_minus(mu)) + rep_unit(s - 1, p)
    for k in range(4):
        for r in range(rep_unit(k, p), rep_unit(k, p) + 5):
            assert R_of(r - rep_unit(k, p) + rep_unit(s - 1, p), mu) == R_of(r, lam) - p**k


@pytest.mark.parametrize("lam", GRID3 + GRID5, ids=str)
def test_R_of_first_r(lam):
    data = t_conjugate(lam)
    n, b = data.n_k[0], data.b_k[0]
    R = R_of(r_sequence(lam)[0], lam)
    assert R == b * lam.p ** (n - 1) + lam.p ** (n - 1) - 1
    assert alpha(R, lam.p) == data.gamma.parts[0]
    assert R_of(0, lam) == d_c(lam) - d_c(lambda_minus(lam))


def test_enumeration():
    assert len(list(t_regular_partitions(3, 3))) == 20
    grid = list(t_regular_partitions(3, 3))
    assert grid == sorted(grid, key=lambda l: (len(l), l.size, l.parts))
    assert all(d_s(l) <= 50 for l in t_regular_partitions(3, 4, 50))


def test_report():
    rep = partition_report(P("5,3,2"))
    assert rep["gamma"] == [6, 3, 1] and rep["d_c"] == 24 and rep["d_s"] == 32
    assert rep["r_sequence"] == rep["r_sequence_tableau"]
    bad = partition_report(P("5,1"))
    assert bad["column_regular"] is False and bad["t_regular"] is False
    assert "gamma" not in bad
