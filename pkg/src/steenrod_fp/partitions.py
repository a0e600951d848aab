"""Partition combinatorics for the first-occurrence and submodule polynomials.

Diagrams use matrix coordinates (i, j), 1 <= i <= n, 1 <= j <= lambda_i.  Columns are
grouped in blocks of p-1; block j of lambda is written lambda_(j).
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

from .modp import check_prime, rep_unit
from .poly import Polynomial, product, vandermonde, w_det


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]
    p: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        parts = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in parts):
            raise PartitionError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise PartitionError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str, p: int) -> "Partition":
        """Read ``"6,5,4,3,2"``; zero parts are dropped, the empty string is the empty partition."""
        text = text.strip().strip("()")
        if not text:
            return cls((), p)
        try:
            vals = [int(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise PartitionError(f"cannot parse partition {text!r}") from None
        return cls(tuple(x for x in vals if x), p)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> tuple[int, ...]:
        if not self.parts:
            return ()
        return tuple(sum(1 for x in self.parts if x >= j) for j in range(1, self.parts[0] + 1))

    def part(self, i: int) -> int:
        """lambda_i, 1-based, zero past the end."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    @cached_property
    def blocks(self) -> tuple["Partition", ...]:
        """lambda_(1), lambda_(2), ...: the diagram cut into blocks of p-1 columns."""
        q = self.p - 1
        if not self.parts:
            return ()
        m = -(-self.parts[0] // q)
        out = []
        for j in range(m):
            rows = [min(max(x - j * q, 0), q) for x in self.parts]
            out.append(Partition(tuple(x for x in rows if x), self.p))
        return tuple(out)


def is_column_p_regular(lam: Partition) -> bool:
    parts = lam.parts + (0,)
    return all(0 <= parts[i] - parts[i + 1] <= lam.p - 1 for i in range(len(lam.parts)))


def is_t_regular(lam: Partition) -> bool:
    """For every a >= 1 at most one part lies strictly between (a-1)(p-1) and a(p-1)."""
    if not is_column_p_regular(lam):
        raise PartitionError(f"{lam} is not column {lam.p}-regular")
    q = lam.p - 1
    seen: set[int] = set()
    for x in lam.parts:
        if x % q:
            a = x // q + 1
            if a in seen:
                return False
            seen.add(a)
    return True


@dataclass(frozen=True)
class TRegularData:
    gamma: Partition
    blocks: tuple[Partition, ...]
    n_k: tuple[int, ...]
    b_k: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.gamma)

    @property
    def block_degrees(self) -> tuple[int, ...]:
        return self.gamma.parts


def split_degree(g: int, p: int) -> tuple[int, int]:
    """Write g = (n-1)(p-1) + b with 1 <= b <= p-1 and return (n, b)."""
    if g <= 0:
        raise PartitionError("need a positive value")
    a = (g - 1) // (p - 1)
    return a + 1, g - a * (p - 1)


def t_conjugate(lam: Partition) -> TRegularData:
    if not is_t_regular(lam):
        raise PartitionError(f"{lam} is not T-regular")
    blocks = lam.blocks
    gamma = Partition(tuple(b.size for b in blocks), lam.p)
    nb = [split_degree(g, lam.p) for g in gamma.parts]
    return TRegularData(gamma, blocks, tuple(n for n, _ in nb), tuple(b for _, b in nb))


def gamma_of(lam: Partition) -> Partition:
    return t_conjugate(lam).gamma


def lambda_minus(lam: Partition) -> Partition:
    q = lam.p - 1
    return Partition(tuple(x - q for x in lam.parts if x > q), lam.p)


def antidiagonals(lam: Partition) -> list[tuple[int, int]]:
    """(lowest row, length) of antidiagonal k = 1, 2, ...; box (i, j) lies on k = j + (i-1)(p-1)."""
    q = lam.p - 1
    n = len(lam.parts)
    kmax = max((lam.parts[i] + i * q for i in range(n)), default=0)
    out = []
    for k in range(1, kmax + 1):
        rows = [i for i in range(1, n + 1) if 1 <= k - (i - 1) * q <= lam.parts[i - 1]]
        if not rows:
            raise PartitionError(f"antidiagonal {k} of {lam} is empty")
        if rows != list(range(rows[0], rows[-1] + 1)):
            raise PartitionError(f"antidiagonal {k} of {lam} is not contiguous")
        out.append((rows[-1], len(rows)))
    return out


def _nvars(lam: Partition, nvars: int | None) -> int:
    n = nvars if nvars is not None else max(len(lam.parts), 1)
    if n < len(lam.parts):
        raise PartitionError(f"{lam} needs at least {len(lam.parts)} variables")
    return n


def v_polynomial(lam: Partition, nvars: int | None = None) -> Polynomial:
    """Product over antidiagonals of [x_{i-s+1}, x_{i-s+2}^p, ..., x_i^(p^(s-1))]."""
    n = _nvars(lam, nvars)
    p = lam.p
    factors = [
        vandermonde(list(range(i - s + 1, i + 1)), [p**e for e in range(s)], p, n)
        for i, s in antidiagonals(lam)
    ]
    return product(factors, p, n)


def epsilon(lam: Partition) -> int:
    g = gamma_of(lam).parts
    return sum((-1) ** (j - 1) * g[2 * j - 1] for j in range(1, len(g) // 2 + 1))


def spike_exponents(parts: Sequence[int], p: int) -> tuple[int, ...]:
    """(b+1) p^a - 1 for each part a(p-1) + b with 1 <= b <= p-1."""
    out = []
    for x in parts:
        n, b = split_degree(x, p)
        out.append((b + 1) * p ** (n - 1) - 1)
    return tuple(out)


def s_monomial(lam: Partition) -> tuple[tuple[int, ...], int]:
    """The leading monomial of v(lambda) and its coefficient, which is +-1."""
    if not is_t_regular(lam):
        raise PartitionError(f"{lam} is not T-regular")
    return spike_exponents(lam.parts, lam.p), (-1) ** epsilon(lam)


def w_conjugate_polynomial(lam: Partition, nvars: int | None = None) -> Polynomial:
    """w(lambda') = product over columns j of w(lambda'_j)."""
    n = _nvars(lam, nvars)
    return product((w_det(c, lam.p, n) for c in lam.conjugate()), lam.p, n)


def p_prime_polynomial(lam: Partition, nvars: int | None = None) -> Polynomial:
    """prod_j w(lambda_(j)')^(p^(j-1))."""
    n = _nvars(lam, nvars)
    acc = Polynomial.one(lam.p, n)
    for j, blk in enumerate(t_conjugate(lam).blocks):
        acc = acc * w_conjugate_polynomial(blk, n).frobenius(j)
    return acc


def d_c(lam: Partition) -> int:
    return sum(lam.p**j * g for j, g in enumerate(gamma_of(lam).parts))


def d_s(lam: Partition) -> int:
    return sum(rep_unit(c, lam.p) for c in lam.conjugate())


def tableau(lam: Partition) -> list[list[int]]:
    """Tab(lambda): the top box of each antidiagonal, in row i, gets p_{i-1}; moving down
    the antidiagonal multiplies by p."""
    p, q = lam.p, lam.p - 1
    tab = [[0] * x for x in lam.parts]
    for k, (low, s) in enumerate(antidiagonals(lam), start=1):
        top = low - s + 1
        val = rep_unit(top - 1, p)
        for i in range(top, low + 1):
            tab[i - 1][k - (i - 1) * q - 1] = val
            val *= p
    return tab


def tab_r_sequence(lam: Partition) -> tuple[int, ...]:
    """Block sums of Tab(lambda)."""
    q = lam.p - 1
    m = len(lam.blocks)
    sums = [0] * m
    for row in tableau(lam):
        for j, v in enumerate(row):
            sums[j // q] += v
    return tuple(sums)


def r_sequence(lam: Partition) -> tuple[int, ...]:
    """r_k = (b_k+1) p_{n_k-1} - (n_k-1) - sum_{j>k} p^(j-k-1) gamma_j."""
    data = t_conjugate(lam)
    p, g = lam.p, data.gamma.parts
    out = []
    for k in range(data.m):
        n, b = data.n_k[k], data.b_k[k]
        tail = sum(p ** (j - k - 1) * g[j] for j in range(k + 1, data.m))
        out.append((b + 1) * rep_unit(n - 1, p) - (n - 1) - tail)
    return tuple(out)


def milnor_spike(mu: Partition) -> tuple[int, ...]:
    """The sequence ((b_1+1)p^{a_1} - 1, ..., (b_n+1)p^{a_n} - 1)."""
    return spike_exponents(mu.parts, mu.p)


def R_of(r: int, lam: Partition) -> int:
    """R(r, lambda) = r(p-1) + d_c(lambda) - d_c(lambda^-)."""
    return r * (lam.p - 1) + d_c(lam) - d_c(lambda_minus(lam))


def remove_last_antidiagonal(lam: Partition) -> tuple[Partition, int]:
    """mu (lambda without its last antidiagonal) and that antidiagonal's length s."""
    ad = antidiagonals(lam)
    if not ad:
        raise PartitionError("the empty partition has no antidiagonal")
    low, s = ad[-1]
    parts = list(lam.parts)
    for i in range(low - s + 1, low + 1):
        parts[i - 1] -= 1
    mu = Partition(tuple(x for x in parts if x), lam.p)
    if not is_column_p_regular(mu) or not is_t_regular(mu):
        raise PartitionError(f"removing the last antidiagonal of {lam} leaves {mu}, not T-regular")
    return mu, s


def kappa_of(lam: Partition) -> tuple[int, ...] | None:
    """kappa with lambda = (p-1) kappa and kappa column 2-regular, else None."""
    q = lam.p - 1
    if any(x % q for x in lam.parts):
        return None
    kappa = tuple(x // q for x in lam.parts) + (0,)
    if all(kappa[i] - kappa[i + 1] <= 1 for i in range(len(kappa) - 1)):
        return kappa[:-1]
    return None


def t_regular_partitions(p: int, max_len: int, max_ds: int | None = None) -> Iterator[Partition]:
    """All T-regular partitions of length 1..max_len (optionally with d_s <= max_ds), in a fixed order."""
    q = p - 1

    def rec(rev: list[int], left: int) -> Iterator[tuple[int, ...]]:
        if rev:
            yield tuple(reversed(rev))
        if left == 0:
            return
        last = rev[-1] if rev else 0
        for x in range(max(last, 1), last + q + 1):
            yield from rec(rev + [x], left - 1)

    found = []
    for parts in rec([], max_len):
        lam = Partition(parts, p)
        if is_t_regular(lam) and (max_ds is None or d_s(lam) <= max_ds):
            found.append(lam)
    found.sort(key=lambda lam: (len(lam), lam.size, lam.parts))
    yield from found


def partition_report(lam: Partition) -> dict:
    """Everything defined for lambda, in a JSON-friendly dict."""
    col = is_column_p_regular(lam)
    rep: dict = {
        "p": lam.p,
        "parts": list(lam.parts),
        "conjugate": list(lam.conjugate()),
        "column_regular": col,
        "d_s": d_s(lam),
    }
    treg = col and is_t_regular(lam)
    rep["t_regular"] = treg
    if not treg:
        return rep
    data = t_conjugate(lam)
    exps, sign = s_monomial(lam)
    rep.update(
        gamma=list(data.gamma.parts),
        blocks=[list(b.parts) for b in data.blocks],
        n_k=list(data.n_k),
        b_k=list(data.b_k),
        lambda_minus=list(lambda_minus(lam).parts),
        d_c=d_c(lam),
        r_sequence=list(r_sequence(lam)),
        r_sequence_tableau=list(tab_r_sequence(lam)),
        tableau=tableau(lam),
        antidiagonals=[[i, s] for i, s in antidiagonals(lam)],
        spike_exponents=list(exps),
        epsilon=epsilon(lam),
        spike_sign=sign,
        milnor_spike_lambda=list(milnor_spike(lam)),
        milnor_spike_gamma=list(milnor_spike(data.gamma)),
    )
    return rep
