"""The algebra A_p of Steenrod p-th powers (no Bocksteins) in the Milnor basis.

A Milnor basis element P(R) is named by a tuple ``R = (r_1, ..., r_m)`` with trailing
zeros trimmed; ``()`` is the unit. Degrees are in polynomial-degree units, so P^r has
degree r(p-1) and P(R) has degree sum_i (p^i - 1) r_i.

Elements of the algebra are :class:`AlgebraElement` objects: F_p-linear combinations
of Milnor basis elements, not necessarily homogeneous.
"""

from __future__ import annotations

import re
import threading
from collections.abc import Iterable, Iterator, Mapping, Sequence
from functools import lru_cache

from .modp import binom_mod_p, check_prime, multinom_mod_p, rep_unit

MilnorIndex = tuple[int, ...]
AdmissibleWord = tuple[int, ...]


class AlgebraError(ValueError):
    pass


def normalize(R: Iterable[int]) -> MilnorIndex:
    R = list(R)
    if any(r < 0 for r in R):
        raise AlgebraError(f"negative entry in Milnor index {R}")
    while R and R[-1] == 0:
        R.pop()
    return tuple(R)


def milnor_degree(R: Sequence[int], p: int) -> int:
    """|R| = sum_i (p^i - 1) r_i."""
    return sum((p ** (i + 1) - 1) * r for i, r in enumerate(R))


def milnor_excess(R: Sequence[int]) -> int:
    """e(R) = sum_i r_i."""
    return sum(R)


class AlgebraElement:
    """A formal F_p-linear combination of Milnor basis elements P(R)."""

    __slots__ = ("p", "_t")

    def __init__(self, p: int, terms: Mapping[Sequence[int], int] | None = None):
        check_prime(p)
        self.p = p
        t: dict[MilnorIndex, int] = {}
        for R, c in (terms or {}).items():
            R = normalize(R)
            t[R] = (t.get(R, 0) + c) % p
        self._t = {R: c for R, c in t.items() if c}

    @classmethod
    def _raw(cls, p: int, t: dict[MilnorIndex, int]) -> "AlgebraElement":
        obj = object.__new__(cls)
        obj.p = p
        obj._t = t
        return obj

    @classmethod
    def P(cls, *R: int, p: int) -> "AlgebraElement":
        """The basis element P(R)."""
        return cls(p, {tuple(R): 1})

    @classmethod
    def unit(cls, p: int) -> "AlgebraElement":
        return cls(p, {(): 1})

    @classmethod
    def zero(cls, p: int) -> "AlgebraElement":
        return cls(p)

    def items(self) -> Iterator[tuple[MilnorIndex, int]]:
        """Terms ordered by degree, then by index."""
        p = self.p
        for R in sorted(self._t, key=lambda R: (milnor_degree(R, p), R)):
            yield R, self._t[R]

    def coefficient(self, R: Sequence[int]) -> int:
        return self._t.get(normalize(R), 0)

    def support(self) -> set[MilnorIndex]:
        return set(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def _check(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.p != self.p:
            raise AlgebraError(f"prime mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        t = dict(self._t)
        for R, c in other._t.items():
            v = (t.get(R, 0) + c) % self.p
            if v:
                t[R] = v
            else:
                t.pop(R, None)
        return AlgebraElement._raw(self.p, t)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c: int) -> "AlgebraElement":
        c %= self.p
        return AlgebraElement._raw(self.p, {R: v * c % self.p for R, v in self._t.items()} if c else {})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.p
        acc: dict[MilnorIndex, int] = {}
        for R, a in self._t.items():
            for S, b in other._t.items():
                for T, c in _milnor_product_terms(R, S, p):
                    acc[T] = acc.get(T, 0) + a * b * c
        return AlgebraElement._raw(p, {T: c % p for T, c in acc.items() if c % p})

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.p == other.p and self._t == other._t

    def __hash__(self) -> int:
        return hash((self.p, frozenset(self._t.items())))

    def degrees(self) -> set[int]:
        return {milnor_degree(R, self.p) for R in self._t}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous element; the zero element has no degree."""
        degs = self.degrees()
        if len(degs) != 1:
            raise AlgebraError("degree is only defined for nonzero homogeneous elements")
        return degs.pop()

    def excess(self) -> int:
        """Smallest excess among the terms."""
        if not self._t:
            raise AlgebraError("the zero element has no excess")
        return min(milnor_excess(R) for R in self._t)

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"AlgebraElement(p={self.p}, {format_element(self)!r})"


def format_milnor(R: Sequence[int]) -> str:
    return "P(" + ",".join(str(r) for r in R) + ")"


def format_element(e: AlgebraElement) -> str:
    if not e:
        return "0"
    return " + ".join(format_milnor(R) if c == 1 else f"{c}*{format_milnor(R)}" for R, c in e.items())


# Milnor product

@lru_cache(maxsize=65536)
def _milnor_product_terms(R: MilnorIndex, S: MilnorIndex, p: int) -> tuple[tuple[MilnorIndex, int], ...]:
    """P(R) P(S) as a tuple of (T, coefficient) pairs.

    Sum over matrices x_ij (i, j >= 0, x_00 unused) with
    r_i = sum_j p^j x_ij, s_j = sum_i x_ij, and coefficient
    prod_k multinomial(t_k; x_ij with i + j = k), t_k = sum_{i+j=k} x_ij.
    """
    m, k = len(R), len(S)
    if m == 0:
        return ((S, 1),)
    if k == 0:
        return ((R, 1),)
    rows: list[list[int]] = [[0] * (k + 1) for _ in range(m + 1)]
    col_used = [0] * (k + 1)
    acc: dict[MilnorIndex, int] = {}

    def finish() -> None:
        for j in range(1, k + 1):
            rows[0][j] = S[j - 1] - col_used[j]
        coeff = 1
        T = []
        for diag in range(1, m + k + 1):
            entries = [rows[i][diag - i] for i in range(max(0, diag - k), min(m, diag) + 1)]
            tk = sum(entries)
            if tk:
                c = multinom_mod_p(tk, entries[:-1], p)
                if not c:
                    return
                coeff = coeff * c % p
            T.append(tk)
        T = normalize(T)
        acc[T] = (acc.get(T, 0) + coeff) % p

    def fill(i: int, j: int, remaining: int) -> None:
        # choose x_ij for row i (1-based), columns j..k; remaining = r_i - sum so far
        if j > k:
            rows[i][0] = remaining
            if i == m:
                finish()
            else:
                fill(i + 1, 1, R[i])
            return
        pj = p**j
        cap = min(remaining // pj, S[j - 1] - col_used[j])
        for x in range(cap, -1, -1):
            rows[i][j] = x
            col_used[j] += x
            fill(i, j + 1, remaining - x * pj)
            col_used[j] -= x
        rows[i][j] = 0

    fill(1, 1, R[0])
    return tuple(sorted((T, c) for T, c in acc.items() if c))


def milnor_product(a: Sequence[int], b: Sequence[int], p: int) -> AlgebraElement:
    """The product P(a) P(b) expanded in the Milnor basis."""
    check_prime(p)
    return AlgebraElement._raw(p, dict(_milnor_product_terms(normalize(a), normalize(b), p)))


# bases in a fixed degree

_basis_lock = threading.Lock()


@lru_cache(maxsize=None)
def _milnor_basis(D: int, p: int) -> tuple[MilnorIndex, ...]:
    weights = []
    i = 1
    while p**i - 1 <= D:
        weights.append(p**i - 1)
        i += 1
    out: list[MilnorIndex] = []

    def rec(idx: int, rem: int, acc: list[int]) -> None:
        if idx < 0:
            if rem == 0:
                out.append(normalize(acc))
            return
        w = weights[idx]
        for c in range(rem // w, -1, -1):
            acc[idx] = c
            rec(idx - 1, rem - c * w, acc)
        acc[idx] = 0

    if D == 0:
        return ((),)
    rec(len(weights) - 1, D, [0] * len(weights))
    return tuple(sorted(out))


def milnor_basis(D: int, p: int) -> tuple[MilnorIndex, ...]:
    """All R with |R| = D, in ascending tuple order."""
    if D < 0:
        return ()
    with _basis_lock:
        return _milnor_basis(D, p)


def is_admissible(T: Sequence[int], p: int) -> bool:
    return all(t > 0 for t in T) and all(T[i] >= p * T[i + 1] for i in range(len(T) - 1))


def milnor_to_admissible_index(R: Sequence[int], p: int) -> AdmissibleWord:
    """Index bijection P(r_1..r_m) <-> P^{t_1}...P^{t_m}: t_m = r_m, t_i = r_i + p t_{i+1}."""
    R = normalize(R)
    T = [0] * len(R)
    acc = 0
    for i in range(len(R) - 1, -1, -1):
        acc = R[i] + p * acc
        T[i] = acc
    return tuple(T)


def admissible_to_milnor_index(T: Sequence[int], p: int) -> MilnorIndex:
    """Inverse of :func:`milnor_to_admissible_index`."""
    T = tuple(T)
    if not is_admissible(T, p):
        raise AlgebraError(f"{T} is not admissible at p={p}")
    return normalize(T[i] - (p * T[i + 1] if i + 1 < len(T) else 0) for i in range(len(T)))


def admissible_degree(T: Sequence[int], p: int) -> int:
    return (p - 1) * sum(T)


def admissible_excess(T: Sequence[int], p: int) -> int:
    """p t_1 - (p-1) sum t_i; the empty word has excess 0."""
    if not T:
        return 0
    return p * T[0] - (p - 1) * sum(T)


def admissible_to_milnor(T: Sequence[int], p: int) -> AlgebraElement:
    """Expand the composite P^{t_1} ... P^{t_m} in the Milnor basis."""
    T = tuple(T)
    if not is_admissible(T, p):
        raise AlgebraError(f"{T} is not admissible at p={p}")
    out = AlgebraElement.unit(p)
    for t in T:
        out = out * AlgebraElement.P(t, p=p)
    return out


def admissible_basis(D: int, p: int) -> tuple[AdmissibleWord, ...]:
    return tuple(milnor_to_admissible_index(R, p) for R in milnor_basis(D, p))


def _solve_mod_p(cols: list[dict], rows: list, target: dict, p: int) -> list[int]:
    """Solve sum_c x_c cols[c] = target over F_p (columns given as sparse dicts)."""
    n = len(cols)
    index = {r: i for i, r in enumerate(rows)}
    mat = [[0] * (n + 1) for _ in rows]
    for c, col in enumerate(cols):
        for r, v in col.items():
            mat[index[r]][c] = v % p
    for r, v in target.items():
        mat[index[r]][n] = v % p
    piv_row = 0
    pivots = []
    for c in range(n):
        sel = next((i for i in range(piv_row, len(rows)) if mat[i][c]), None)
        if sel is None:
            continue
        mat[piv_row], mat[sel] = mat[sel], mat[piv_row]
        inv = pow(mat[piv_row][c], p - 2, p)
        mat[piv_row] = [v * inv % p for v in mat[piv_row]]
        for i in range(len(rows)):
            if i != piv_row and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[piv_row])]
        pivots.append(c)
        piv_row += 1
    if any(mat[i][n] for i in range(piv_row, len(rows))) or len(pivots) != n:
        raise AlgebraError("change of basis matrix is singular")
    x = [0] * n
    for i, c in enumerate(pivots):
        x[c] = mat[i][n]
    return x


@lru_cache(maxsize=4096)
def _milnor_to_admissible(R: MilnorIndex, p: int) -> tuple[tuple[AdmissibleWord, int], ...]:
    D = milnor_degree(R, p)
    words = admissible_basis(D, p)
    cols = [admissible_to_milnor(T, p)._t for T in words]
    x = _solve_mod_p(cols, list(milnor_basis(D, p)), {R: 1}, p)
    return tuple((T, c) for T, c in zip(words, x) if c)


def milnor_to_admissible(R: Sequence[int], p: int) -> dict[AdmissibleWord, int]:
    """Write P(R) as a combination of admissible composites, by solving the
    change of basis in degree |R| over F_p."""
    return dict(_milnor_to_admissible(normalize(R), p))


# antipode and Davis' formula

def chi_expansion(d: int, p: int) -> AlgebraElement:
    """Hq{d} = (-1)^d chi(P^d): the sum of all P(R) with |R| = d(p-1)."""
    if d < 0:
        raise AlgebraError("chi_expansion needs d >= 0")
    return AlgebraElement._raw(p, {R: 1 for R in milnor_basis(d * (p - 1), p)})


def chi_of_power(d: int, p: int) -> AlgebraElement:
    """chi(P^d) itself, i.e. (-1)^d Hq{d}."""
    return chi_expansion(d, p).scale((-1) ** d)


def davis_expansion(u: int, v: int, p: int) -> AlgebraElement:
    """P^u Hq{v} = sum_{|R| = (p-1)(u+v)} C(|R| + e(R), p u) P(R)."""
    terms = {}
    for R in milnor_basis((p - 1) * (u + v), p):
        c = binom_mod_p(milnor_degree(R, p) + milnor_excess(R), p * u, p)
        if c:
            terms[R] = c
    return AlgebraElement._raw(p, terms)


def minimal_excess_spike(n: int, b: int, p: int) -> MilnorIndex:
    """(p-1, ..., p-1, b) of length n."""
    return normalize([p - 1] * (n - 1) + [b])


def hatrel_degree(n: int, b: int, p: int) -> int:
    """d = (b+1) p_n - n."""
    return (b + 1) * rep_unit(n, p) - n


_ELEM_TERM = re.compile(r"^(?:(\d+)\s*\*\s*)?P\(\s*([\d\s,]*)\)$")


def parse_element(text: str, p: int) -> AlgebraElement:
    """Inverse of ``format_element``: ``"P(0,1) + 2*P(4)"``, ``"P()"`` or ``"0"``."""
    text = text.strip()
    if text == "0":
        return AlgebraElement.zero(p)
    terms: dict[MilnorIndex, int] = {}
    for chunk in text.split("+"):
        m = _ELEM_TERM.match(chunk.strip())
        if not m:
            raise AlgebraError(f"cannot parse Milnor term {chunk.strip()!r}")
        c = int(m.group(1)) if m.group(1) else 1
        body = m.group(2).strip()
        R = normalize(int(x) for x in body.split(",")) if body else ()
        terms[R] = (terms.get(R, 0) + c) % p
    return AlgebraElement(p, terms)
