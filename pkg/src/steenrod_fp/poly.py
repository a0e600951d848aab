"""Sparse polynomials over F_p in x1..xn, plus omega-vectors, spikes and Vandermonde determinants.

Monomials are exponent tuples ``(s_1, ..., s_n)`` at the API boundary. Internally a
monomial is packed into one integer with x1 in the most significant field, so that
multiplying monomials is integer addition and left-lex order is integer order.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from typing import Union

from .modp import check_prime, digits

Monomial = tuple[int, ...]

EXP_BITS = 32
_MASK = (1 << EXP_BITS) - 1


class PolynomialError(ValueError):
    """Usage error: mismatched rings, bad indices, unparsable text."""


def pack(exps: Sequence[int]) -> int:
    key = 0
    for e in exps:
        if e < 0 or e > _MASK:
            raise OverflowError(f"exponent {e} outside supported range")
        key = (key << EXP_BITS) | e
    return key


def unpack(key: int, nvars: int) -> Monomial:
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = key & _MASK
        key >>= EXP_BITS
    return tuple(out)


def _shift(i: int, nvars: int) -> int:
    """Bit offset of variable index ``i`` (0-based)."""
    return EXP_BITS * (nvars - 1 - i)


class Polynomial:
    """An immutable element of F_p[x1..xn].

    ``terms`` maps exponent tuples to coefficients; coefficients are reduced mod p and
    zero terms dropped on construction.
    """

    __slots__ = ("p", "nvars", "_t", "_hash", "_deg")

    def __init__(self, p: int, nvars: int, terms: Mapping[Monomial, int] | None = None):
        check_prime(p)
        if nvars < 1:
            raise PolynomialError("need at least one variable")
        self.p = p
        self.nvars = nvars
        t: dict[int, int] = {}
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise PolynomialError(f"monomial {exps} has wrong length for {nvars} variables")
            c %= p
            if c:
                k = pack(exps)
                t[k] = (t.get(k, 0) + c) % p
                if not t[k]:
                    del t[k]
        self._t = t
        self._hash = None
        self._deg = None

    @classmethod
    def _raw(cls, p: int, nvars: int, t: dict[int, int]) -> "Polynomial":
        """Wrap an already-normalised packed dict (no zero coefficients)."""
        obj = object.__new__(cls)
        obj.p = p
        obj.nvars = nvars
        obj._t = t
        obj._hash = None
        obj._deg = None
        return obj

    # constructors

    @classmethod
    def zero(cls, p: int, nvars: int) -> "Polynomial":
        return cls(p, nvars)

    @classmethod
    def one(cls, p: int, nvars: int) -> "Polynomial":
        return cls.monomial((0,) * nvars, p)

    @classmethod
    def monomial(cls, exps: Sequence[int], p: int, coeff: int = 1) -> "Polynomial":
        exps = tuple(exps)
        return cls(p, len(exps), {exps: coeff})

    @classmethod
    def var(cls, i: int, p: int, nvars: int, power: int = 1) -> "Polynomial":
        """The monomial x_i^power, with ``i`` 1-based."""
        if not 1 <= i <= nvars:
            raise PolynomialError(f"variable x{i} outside x1..x{nvars}")
        exps = [0] * nvars
        exps[i - 1] = power
        return cls.monomial(exps, p)

    @classmethod
    def linear_form(cls, coeffs: Sequence[int], p: int, nvars: int | None = None) -> "Polynomial":
        nvars = nvars or len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * nvars
            e[i] = 1
            terms[tuple(e)] = c
        return cls(p, nvars, terms)

    # inspection

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        """(exponents, coefficient) pairs in descending left-lex order."""
        n = self.nvars
        for k in sorted(self._t, reverse=True):
            yield unpack(k, n), self._t[k]

    def as_dict(self) -> dict[Monomial, int]:
        n = self.nvars
        return {unpack(k, n): c for k, c in self._t.items()}

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._t.get(pack(exps), 0)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def degree(self) -> int:
        """Largest total degree of a term (-1 for the zero polynomial)."""
        if self._deg is None:
            n = self.nvars
            self._deg = max((sum(unpack(k, n)) for k in self._t), default=-1)
        return self._deg

    def degrees(self) -> set[int]:
        n = self.nvars
        return {sum(unpack(k, n)) for k in self._t}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def leading_term(self) -> tuple[Monomial, int]:
        if not self._t:
            raise PolynomialError("the zero polynomial has no leading monomial")
        k = max(self._t)
        return unpack(k, self.nvars), self._t[k]

    # arithmetic

    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.p != self.p or other.nvars != self.nvars:
            raise PolynomialError(
                f"ring mismatch: F_{self.p}[{self.nvars} vars] vs F_{other.p}[{other.nvars} vars]"
            )

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial.one(self.p, self.nvars).scale(other)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return Polynomial._raw(self.p, self.nvars, _add(self._t, other._t, self.p, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Polynomial._raw(self.p, self.nvars, _add(self._t, other._t, self.p, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int) -> "Polynomial":
        c %= self.p
        if not c:
            return Polynomial.zero(self.p, self.nvars)
        if c == 1:
            return self
        p = self.p
        return Polynomial._raw(p, self.nvars, {k: v * c % p for k, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        if self.degree() + other.degree() > _MASK:
            raise OverflowError("product degree exceeds supported exponent width")
        return Polynomial._raw(self.p, self.nvars, _mul(self._t, other._t, self.p))

    __rmul__ = __mul__

    def frobenius(self, k: int = 1) -> "Polynomial":
        """f^(p^k), computed by scaling exponents (coefficients lie in F_p)."""
        q = self.p**k
        if self.degree() * q > _MASK:
            raise OverflowError("Frobenius power exceeds supported exponent width")
        return Polynomial._raw(self.p, self.nvars, {key * q: c for key, c in self._t.items()})

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power")
        p = self.p
        result = Polynomial.one(p, self.nvars)
        base = self
        # base-p digits: f^e = prod_j (f^(p^j))^(e_j)
        for j, d in enumerate(digits(e, p)):
            if d:
                fj = base.frobenius(j) if j else base
                for _ in range(d):
                    result = result * fj
        return result

    def substitute(self, i: int, g: "Polynomial") -> "Polynomial":
        """Replace x_i (1-based) by ``g``."""
        self._check(g)
        n = self.nvars
        sh = _shift(i - 1, n)
        groups: dict[int, dict[int, int]] = {}
        for k, c in self._t.items():
            e = (k >> sh) & _MASK
            rest = k & ~(_MASK << sh)
            groups.setdefault(e, {})[rest] = c
        out = Polynomial.zero(self.p, n)
        powers: dict[int, Polynomial] = {}
        for e in sorted(groups):
            if e not in powers:
                powers[e] = g**e
            out = out + Polynomial._raw(self.p, n, groups[e]) * powers[e]
        return out

    # comparison / hashing

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == Polynomial.one(self.p, self.nvars).scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.p == other.p and self.nvars == other.nvars and self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.nvars, frozenset(self._t.items())))
        return self._hash

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        text = format_polynomial(self)
        if len(text) > 200:
            text = text[:200] + "..."
        return f"Polynomial(p={self.p}, nvars={self.nvars}, {text!r})"


def _add(a: dict[int, int], b: dict[int, int], p: int, sign: int) -> dict[int, int]:
    out = dict(a)
    for k, c in b.items():
        v = (out.get(k, 0) + sign * c) % p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _mul(a: dict[int, int], b: dict[int, int], p: int) -> dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    out: dict[int, int] = {}
    get = out.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: v % p for k, v in out.items() if v % p}


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def poly_scale(f: Polynomial, c: int) -> Polynomial:
    return f.scale(c)


def product(factors: Iterable[Polynomial], p: int, nvars: int) -> Polynomial:
    out = Polynomial.one(p, nvars)
    for f in factors:
        out = out * f
    return out


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def vandermonde(var_indices: Sequence[int], exponents: Sequence[int], p: int, nvars: int) -> Polynomial:
    """The determinant [x_{i_1}^{s_1}, ..., x_{i_k}^{s_k}] with (r, c) entry x_{i_c}^{s_r}.

    Variable indices are 1-based. A repeated index gives the zero polynomial.
    """
    if len(var_indices) != len(exponents):
        raise PolynomialError("variable and exponent lists differ in length")
    k = len(var_indices)
    if k == 0:
        return Polynomial.one(p, nvars)
    for i in var_indices:
        if not 1 <= i <= nvars:
            raise PolynomialError(f"variable x{i} outside x1..x{nvars}")
    terms: dict[Monomial, int] = {}
    for perm in itertools.permutations(range(k)):
        exps = [0] * nvars
        for c, r in enumerate(perm):
            exps[var_indices[c] - 1] += exponents[r]
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + _perm_sign(perm)
    return Polynomial(p, nvars, terms)


def w_det(n: int, p: int, nvars: int | None = None) -> Polynomial:
    """w(n) = [x1, x2^p, ..., xn^(p^(n-1))]; w(0) = 1."""
    nvars = nvars or max(n, 1)
    return vandermonde(list(range(1, n + 1)), [p**j for j in range(n)], p, nvars)


def w_omit(n: int, a: int, p: int, nvars: int | None = None) -> Polynomial:
    """w(n, a): the n x n determinant on exponents p^0..p^n with p^a left out."""
    if not 0 <= a <= n:
        raise PolynomialError("w(n, a) needs 0 <= a <= n")
    nvars = nvars or max(n, 1)
    exps = [p**j for j in range(n + 1) if j != a]
    return vandermonde(list(range(1, n + 1)), exps, p, nvars)


def leading_monomial(f: Polynomial) -> tuple[Monomial, int]:
    return f.leading_term()


def omega_vector(exps: Sequence[int], p: int) -> tuple[int, ...]:
    """Digitwise base-p column sums of an exponent sequence (no carries), trailing zeros trimmed."""
    cols: list[int] = []
    for s in exps:
        for j, d in enumerate(digits(s, p)):
            if j == len(cols):
                cols.append(0)
            cols[j] += d
    while cols and cols[-1] == 0:
        cols.pop()
    return tuple(cols)


def omega_degree(omega: Sequence[int], p: int) -> int:
    return sum(w * p**j for j, w in enumerate(omega))


def dominates(rho: Sequence[int], sigma: Sequence[int], p: int) -> bool:
    """True iff every prefix sum  sum_{i<=k} p^(i-1) rho_i  is >= the same for sigma."""
    a = b = 0
    for j in range(max(len(rho), len(sigma))):
        q = p**j
        a += q * (rho[j] if j < len(rho) else 0)
        b += q * (sigma[j] if j < len(sigma) else 0)
        if a < b:
            return False
    return True


def is_spike(exps: Sequence[int], p: int) -> bool:
    """Every nonzero exponent has base-p form c p^k + (p-1)(p^(k-1) + ... + 1)."""
    for s in exps:
        ds = digits(s, p)
        if any(d != p - 1 for d in ds[:-1]):
            return False
    return True


# text format

def _format_monomial(exps: Monomial) -> str:
    parts = []
    for i, e in enumerate(exps, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    """Canonical text: descending left-lex terms, coefficient first, no minus signs."""
    if f.is_zero():
        return "0"
    out = []
    for exps, c in f.terms():
        mono = _format_monomial(exps)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, Union[int, str]]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolynomialError(f"cannot parse polynomial at {text[pos:]!r}")
        if m.group(1) is not None:
            out.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            out.append(("var", int(m.group(2))))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def parse_polynomial(text: str, p: int, nvars: int) -> Polynomial:
    """Parse polynomial text such as ``"2*x1^3*x2 + x1*x2^3"`` or ``"(x1*x2)^2 - x3"``.

    Accepts the canonical output format plus '-', parentheses and powers of
    subexpressions.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        if tok[0] is None:
            raise PolynomialError(f"unexpected end of input in {text!r}")
        pos += 1
        return tok

    def expr() -> Polynomial:
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        acc = term().scale(sign)
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term() -> Polynomial:
        acc = factor()
        while peek() == ("op", "*"):
            take()
            acc = acc * factor()
        return acc

    def factor() -> Polynomial:
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "int":
                raise PolynomialError(f"exponent must be an integer in {text!r}")
            return base**val
        return base

    def atom() -> Polynomial:
        kind, val = take()
        if kind == "int":
            return Polynomial.one(p, nvars).scale(val)
        if kind == "var":
            return Polynomial.var(val, p, nvars)
        if val == "(":
            inner = expr()
            if take() != ("op", ")"):
                raise PolynomialError(f"unbalanced parentheses in {text!r}")
            return inner
        raise PolynomialError(f"unexpected {val!r} in {text!r}")

    if not toks:
        raise PolynomialError("empty polynomial text")
    result = expr()
    if pos != len(toks):
        raise PolynomialError(f"trailing input in {text!r}")
    return result
