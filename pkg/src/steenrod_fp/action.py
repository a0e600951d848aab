"""Left action of A_p on F_p[x1..xn].

Everything reduces to single-variable rules glued by the Cartan formula:

* P^i(x^a) = C(a, i) x^(a + i(p-1))
* Hq{r}(x^a) is the x^(a + r(p-1)) part of (x + x^p + x^(p^2) + ...)^a, because the
  total operation sum_r Hq{r} is a ring map sending x to sum_b x^(p^b)
* P(R)(x^a) = multinomial(a; a - e(R), r_1, ..., r_m) x^(a + |R|)

Three independent routes to Hq{r} are provided: the product rule above (the default,
fastest), the recursion Hq{r} = -sum_{i>=1} (-1)^i P^i Hq{r-i}, and the sum of all
Milnor basis elements of degree r(p-1).
"""

from __future__ import annotations

import re
import threading
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .algebra import AlgebraElement, milnor_basis, milnor_degree, milnor_excess, normalize
from .modp import binom_mod_p, digits, rep_unit
from .poly import _MASK, EXP_BITS, Polynomial

Series = tuple[tuple[int, int], ...]  # ((r, coefficient), ...) with nonzero coefficients


# single-variable series

@lru_cache(maxsize=200_000)
def hq_series(a: int, p: int, rmax: int) -> Series:
    """Coefficients c_r with Hq{r}(x^a) = c_r x^(a + r(p-1)), for r <= rmax.

    Uses x^a = prod_j (x^(p^j))^(a_j) and Hq(x^(p^j)) = sum_{b>=j} x^(p^b),
    where that term raises r by p_b - p_j.
    """
    ser = {0: 1}
    for j, d in enumerate(digits(a, p)):
        if not d:
            continue
        pj = rep_unit(j, p)
        steps = []
        b = j
        while rep_unit(b, p) - pj <= rmax:
            steps.append(rep_unit(b, p) - pj)
            b += 1
        factor = {0: 1}
        for _ in range(d):
            nxt: dict[int, int] = {}
            for r, c in factor.items():
                for e in steps:
                    if r + e <= rmax:
                        nxt[r + e] = nxt.get(r + e, 0) + c
            factor = nxt
        combined: dict[int, int] = {}
        for r1, c1 in ser.items():
            for r2, c2 in factor.items():
                if r1 + r2 <= rmax:
                    combined[r1 + r2] = combined.get(r1 + r2, 0) + c1 * c2
        ser = {r: c % p for r, c in combined.items() if c % p}
    return tuple(sorted(ser.items()))


@lru_cache(maxsize=200_000)
def power_series(a: int, p: int, imax: int) -> Series:
    """Coefficients C(a, i) mod p for i <= imax (only the nonzero ones)."""
    ds = digits(a, p)
    choices = [(0,)]
    for j, d in enumerate(ds):
        q = p**j
        choices = [c + (e * q,) for c in choices for e in range(d + 1)]
    out = []
    for c in choices:
        i = sum(c)
        if i <= imax:
            v = binom_mod_p(a, i, p)
            if v:
                out.append((i, v))
    return tuple(sorted(out))


def _apply_graded(f: Polynomial, r: int, series: Callable[[int, int, int], Series]) -> Polynomial:
    """Apply the degree-r part of a ring map given on each x^a by ``series``.

    For each monomial the r_i are distributed over the variables; a bitmask of sums
    reachable by the remaining variables prunes dead branches.
    """
    p, n = f.p, f.nvars
    if r == 0:
        return f
    shifts = [EXP_BITS * (n - 1 - i) for i in range(n)]
    step = p - 1
    full = (1 << (r + 1)) - 1
    out: dict[int, int] = {}
    get = out.get
    for key, c in f._t.items():
        opts = []
        for i in range(n):
            a = (key >> shifts[i]) & _MASK
            sh = shifts[i]
            opts.append([(ri, ci, (ri * step) << sh) for ri, ci in series(a, p, r)])
        reach = [0] * (n + 1)
        reach[n] = 1
        for i in range(n - 1, -1, -1):
            m = 0
            nxt = reach[i + 1]
            for ri, _, _ in opts[i]:
                m |= nxt << ri
            reach[i] = m & full
        if not (reach[0] >> r) & 1:
            continue
        stack = [(0, r, key, c)]
        last = n - 1
        while stack:
            i, rem, k, cc = stack.pop()
            nxt = reach[i + 1]
            for ri, ci, inc in opts[i]:
                if ri > rem:
                    break
                if (nxt >> (rem - ri)) & 1:
                    if i == last:
                        kk = k + inc
                        out[kk] = get(kk, 0) + cc * ci
                    else:
                        stack.append((i + 1, rem - ri, k + inc, cc * ci))
    res = {}
    for k, v in out.items():
        v %= p
        if v:
            res[k] = v
    if res and max(res) >> (EXP_BITS * n):
        raise OverflowError("exponent exceeds supported width")
    return Polynomial._raw(p, n, res)


def apply_total_power(i: int, f: Polynomial) -> Polynomial:
    """P^i f, by the Cartan formula and P^i(x^a) = C(a, i) x^(a + i(p-1))."""
    if i < 0:
        raise ValueError("P^i needs i >= 0")
    return _apply_graded(f, i, power_series)


def apply_hq_cartan(r: int, f: Polynomial) -> Polynomial:
    """Hq{r} f using the multiplicative extension of Hq(x) = sum_b x^(p^b)."""
    if r < 0:
        raise ValueError("Hq{r} needs r >= 0")
    return _apply_graded(f, r, hq_series)


_rec_lock = threading.Lock()


@lru_cache(maxsize=4096)
def _hq_rec(f: Polynomial, r: int) -> Polynomial:
    if r == 0:
        return f
    acc = Polynomial.zero(f.p, f.nvars)
    for i in range(1, r + 1):
        term = apply_total_power(i, _hq_rec(f, r - i))
        acc = acc - term if i % 2 else acc + term
    return -acc


def apply_hq_recursive(r: int, f: Polynomial) -> Polynomial:
    """Hq{r} f from Hq{r} = -sum_{i=1}^r (-1)^i P^i Hq{r-i}, memoised on (f, j)."""
    if r < 0:
        raise ValueError("Hq{r} needs r >= 0")
    with _rec_lock:
        for j in range(r + 1):  # bottom-up keeps recursion depth at one level
            _hq_rec(f, j)
        return _hq_rec(f, r)


def apply_hq_milnor_sum(r: int, f: Polynomial) -> Polynomial:
    """Hq{r} f as the sum of P(R) f over all R with |R| = r(p-1)."""
    if r < 0:
        raise ValueError("Hq{r} needs r >= 0")
    p = f.p
    top = f.degree()
    acc = Polynomial.zero(p, f.nvars)
    for R in milnor_basis(r * (p - 1), p):
        if milnor_excess(R) <= top:
            acc = acc + apply_milnor(R, f)
    return acc


HQ_METHODS = {
    "cartan": apply_hq_cartan,
    "recursive": apply_hq_recursive,
    "milnor": apply_hq_milnor_sum,
}


def apply_hq(r: int, f: Polynomial, method: str = "cartan") -> Polynomial:
    try:
        fn = HQ_METHODS[method]
    except KeyError:
        raise ValueError(f"unknown Hq method {method!r}; choose from {sorted(HQ_METHODS)}") from None
    return fn(r, f)


def apply_chi(r: int, f: Polynomial, method: str = "cartan") -> Polynomial:
    """chi(P^r) f = (-1)^r Hq{r} f."""
    return apply_hq(r, f, method).scale((-1) ** r)


# Milnor basis elements

@lru_cache(maxsize=200_000)
def _milnor_splits(a: int, R: tuple[int, ...], p: int) -> tuple[tuple[tuple[int, ...], int, int], ...]:
    """All S <= R (componentwise) with P(S)(x^a) != 0, as (S, coefficient, degree rise).

    The multinomial a!/((a-e(S))! s_1! ... s_m!) is nonzero mod p exactly when the
    s_j fit digitwise into a without carries; enumerate s_j as digit-subsets of what
    is left of a.
    """
    m = len(R)
    out = []

    def subs(rem: int, cap: int):
        ds = digits(rem, p)
        vals = [0]
        for j, d in enumerate(ds):
            q = p**j
            vals = [v + e * q for v in vals for e in range(d + 1)]
        return sorted(v for v in vals if v <= cap)

    def rec(j: int, rem: int, S: list[int], coeff: int, rise: int) -> None:
        if j == m:
            out.append((tuple(S), coeff, rise))
            return
        w = p ** (j + 1) - 1
        for s in subs(rem, R[j]):
            c = binom_mod_p(rem, s, p)
            S.append(s)
            rec(j + 1, rem - s, S, coeff * c % p, rise + s * w)
            S.pop()

    rec(0, a, [], 1, 0)
    return tuple(out)


def apply_milnor(R: Sequence[int], f: Polynomial) -> Polynomial:
    """P(R) f via the Cartan formula P(R)(fg) = sum_{R=S+T} P(S)f P(T)g."""
    R = normalize(R)
    p, n = f.p, f.nvars
    if not R:
        return f
    shifts = [EXP_BITS * (n - 1 - i) for i in range(n)]
    e_R = milnor_excess(R)
    m = len(R)
    out: dict[int, int] = {}
    get = out.get
    for key, c in f._t.items():
        exps = [(key >> sh) & _MASK for sh in shifts]
        if sum(exps) < e_R:
            continue
        per_var = []
        for i in range(n):
            per_var.append([(S, cs, rise << shifts[i]) for S, cs, rise in _milnor_splits(exps[i], R, p)])
        last = {S: (cs, inc) for S, cs, inc in per_var[-1]}
        stack = [(0, R, key, c)]
        while stack:
            i, rem, k, cc = stack.pop()
            if i == n - 1:
                hit = last.get(rem)
                if hit:
                    kk = k + hit[1]
                    out[kk] = get(kk, 0) + cc * hit[0]
                continue
            for S, cs, inc in per_var[i]:
                if all(S[j] <= rem[j] for j in range(m)):
                    stack.append((i + 1, tuple(rem[j] - S[j] for j in range(m)), k + inc, cc * cs))
    res = {k: v % p for k, v in out.items() if v % p}
    if res and max(res) >> (EXP_BITS * n):
        raise OverflowError("exponent exceeds supported width")
    return Polynomial._raw(p, n, res)


def apply_element(e: AlgebraElement, f: Polynomial) -> Polynomial:
    """Act by a linear combination of Milnor basis elements."""
    if e.p != f.p:
        raise ValueError("prime mismatch between algebra element and polynomial")
    acc = Polynomial.zero(f.p, f.nvars)
    for R, c in e.items():
        acc = acc + apply_milnor(R, f).scale(c)
    return acc


def apply_admissible(T: Sequence[int], f: Polynomial) -> Polynomial:
    """The composite P^{t_1} ... P^{t_m} applied right to left."""
    for t in reversed(tuple(T)):
        f = apply_total_power(t, f)
    return f


# operator expressions

@dataclass(frozen=True)
class Atom:
    """One operator: kind is 'P' (total power), 'Milnor', 'Hq' or 'chi'."""

    kind: str
    value: Union[int, tuple[int, ...]]

    def __str__(self) -> str:
        if self.kind == "P":
            return f"P^{self.value}"
        if self.kind == "Milnor":
            return "P(" + ",".join(map(str, self.value)) + ")"
        if self.kind == "Hq":
            return f"Hq{{{self.value}}}"
        return f"chi(P^{self.value})"


OperatorExpression = tuple[Atom, ...]

_ATOM = re.compile(
    r"""\s*(?:
        chi\(\s*P\^\{?(?P<chi>\d+)\}?\s*\)
      | Hq\{\s*(?P<hq>\d+)\s*\}
      | P\(\s*(?P<milnor>[\d\s,]*)\)
      | P\^\{?(?P<pow>\d+)\}?
    )""",
    re.VERBOSE,
)


class ExpressionError(ValueError):
    pass


def parse_expression(text: str) -> OperatorExpression:
    """Parse e.g. ``"P^32 P^8 P^1"``, ``"Hq{2}"``, ``"chi(P^5) P(2,2)"``."""
    atoms = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _ATOM.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"cannot parse operator at {text[pos:]!r}")
        if m.group("chi") is not None:
            atoms.append(Atom("chi", int(m.group("chi"))))
        elif m.group("hq") is not None:
            atoms.append(Atom("Hq", int(m.group("hq"))))
        elif m.group("pow") is not None:
            atoms.append(Atom("P", int(m.group("pow"))))
        else:
            body = m.group("milnor").strip()
            entries = [int(x) for x in body.split(",")] if body else []
            atoms.append(Atom("Milnor", normalize(entries)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tuple(atoms)


def apply_atom(atom: Atom, f: Polynomial, method: str = "cartan") -> Polynomial:
    if atom.kind == "P":
        return apply_total_power(atom.value, f)
    if atom.kind == "Milnor":
        return apply_milnor(atom.value, f)
    if atom.kind == "Hq":
        return apply_hq(atom.value, f, method)
    if atom.kind == "chi":
        return apply_chi(atom.value, f, method)
    raise ExpressionError(f"unknown atom kind {atom.kind!r}")


def apply_expression(ops: Union[str, OperatorExpression], f: Polynomial, method: str = "cartan") -> Polynomial:
    """Apply a composite of operators right to left."""
    if isinstance(ops, str):
        ops = parse_expression(ops)
    for atom in reversed(ops):
        f = apply_atom(atom, f, method)
    return f


def expression_degree(ops: OperatorExpression, p: int) -> int:
    total = 0
    for atom in ops:
        if atom.kind == "Milnor":
            total += milnor_degree(atom.value, p)
        else:
            total += atom.value * (p - 1)
    return total
