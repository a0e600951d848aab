"""Executable identity checks and the default parameter grid.

Every check reduces to a list of exact comparisons between polynomials or algebra
elements.  A check may also decline to run (``Skip``) when its hypothesis is not met
or its parameters exceed the desk-scale bounds.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .action import apply_hq, apply_hq_cartan, apply_milnor, apply_total_power
from .algebra import (
    AlgebraElement,
    admissible_to_milnor,
    admissible_to_milnor_index,
    chi_expansion,
    davis_expansion,
    format_element,
    hatrel_degree,
    milnor_excess,
    milnor_to_admissible_index,
    minimal_excess_spike,
    normalize,
    parse_element,
)
from .modp import alpha, check_prime, digits, rep_unit
from .partitions import (
    Partition,
    R_of,
    antidiagonals,
    d_c,
    d_s,
    is_t_regular,
    kappa_of,
    lambda_minus,
    milnor_spike,
    p_prime_polynomial,
    r_sequence,
    s_monomial,
    t_conjugate,
    t_regular_partitions,
    tab_r_sequence,
    v_polynomial,
    w_conjugate_polynomial,
)
from .poly import (
    Polynomial,
    dominates,
    format_polynomial,
    omega_vector,
    parse_polynomial,
    product,
    vandermonde,
    w_det,
    w_omit,
)

Value = Any  # Polynomial, AlgebraElement, or a plain tuple for combinatorial facts

SCHEMA = 1
STATUSES = ("pass", "fail", "skip", "conjecture")
TEXT_LIMIT = 2000


class Skip(Exception):
    """Raised by a check whose hypothesis is unmet or whose parameters are out of bounds."""


class UsageError(ValueError):
    pass


@dataclass
class Comparison:
    label: str
    lhs: Value
    rhs: Value
    sign_free: bool = False  # conjecture mode: equality up to a unit counts

    def holds(self) -> bool:
        if self.lhs == self.rhs:
            return True
        return self.sign_free and bool(self.rhs) and self.lhs == -self.rhs


@dataclass
class Outcome:
    comparisons: list[Comparison]
    notes: dict[str, Any] = field(default_factory=dict)
    conjecture: bool = False


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    params: tuple[tuple[str, Any], ...]
    expected: str | None = None

    @classmethod
    def make(cls, check_id: str, expected: str | None = None, **params: Any) -> "CheckSpec":
        return cls(check_id, tuple(sorted((k, _freeze(v)) for k, v in params.items())), expected)

    @property
    def param_dict(self) -> dict[str, Any]:
        return dict(self.params)


def _freeze(v: Any) -> Any:
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    return v


def _jsonable(v: Any) -> Any:
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def _serialize(v: Value) -> str:
    if isinstance(v, Polynomial):
        text = format_polynomial(v)
    elif isinstance(v, AlgebraElement):
        text = format_element(v)
    else:
        return repr(v)
    if len(text) > TEXT_LIMIT:
        text = text[:TEXT_LIMIT] + f" ... [{len(v)} terms]"
    return text


def _difference(a: Value, b: Value) -> str | None:
    if isinstance(a, (Polynomial, AlgebraElement)) and type(a) is type(b):
        return _serialize(a - b)
    return None


# parameter helpers

def _int(params: dict, key: str, default: int | None = None) -> int:
    if key not in params or params[key] is None:
        if default is None:
            raise UsageError(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except (TypeError, ValueError):
        raise UsageError(f"parameter {key!r} must be an integer") from None


def _ints(params: dict, key: str, default: Sequence[int] | None = None) -> tuple[int, ...]:
    if key not in params or params[key] is None:
        if default is None:
            raise UsageError(f"missing parameter {key!r}")
        return tuple(default)
    v = params[key]
    if isinstance(v, str):
        v = [x for x in v.replace("(", "").replace(")", "").split(",") if x.strip()]
    try:
        return tuple(int(x) for x in v)
    except (TypeError, ValueError):
        raise UsageError(f"parameter {key!r} must be a list of integers") from None


def _prime(params: dict) -> int:
    p = _int(params, "p")
    try:
        return check_prime(p)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _lambda(params: dict, p: int) -> Partition:
    v = params.get("lambda")
    if v is None:
        raise UsageError("missing parameter 'lambda'")
    try:
        lam = Partition.parse(v, p) if isinstance(v, str) else Partition(tuple(v), p)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if not lam.parts:
        raise UsageError("lambda must be nonempty")
    try:
        if not is_t_regular(lam):
            raise Skip(f"{lam} is not T-regular")
    except ValueError as e:
        raise Skip(str(e)) from None
    return lam


def _bound(params: dict, ok: bool, what: str) -> None:
    if not ok and not params.get("unbounded"):
        raise Skip(f"outside desk-scale bounds ({what}); pass unbounded to override")


def _prod_vars(p: int, n: int, e: int) -> Polynomial:
    return Polynomial.monomial([e] * n, p)


def _r_values(params: dict) -> list[int]:
    if params.get("r") is not None:
        return [_int(params, "r")]
    return list(range(_int(params, "rmax", 40) + 1))


# the checks

def check_detp1(params: dict) -> Outcome:
    p, n = _prime(params), _int(params, "n")
    if n < 1:
        raise UsageError("n must be >= 1")
    _bound(params, p**n - 1 <= 400, "target degree p^n - 1 <= 400")
    lhs = apply_hq(rep_unit(n, p) - n, _prod_vars(p, n, p - 1), params.get("method", "cartan"))
    return Outcome([Comparison("Hq{p_n-n}(x1...xn)^(p-1) = w(n)^(p-1)", lhs, w_det(n, p) ** (p - 1))])


def check_minhlemma(params: dict) -> Outcome:
    p, n = _prime(params), _int(params, "n")
    if n < 1:
        raise UsageError("n must be >= 1")
    _bound(params, rep_unit(n, p) <= 200, "p_n <= 200")
    w = w_det(n, p)
    special = {rep_unit(n, p) - rep_unit(j, p): j for j in range(n + 1)}
    comps = []
    for r in range(rep_unit(n, p) + 2):
        rhs = w_omit(n, special[r], p) if r in special else Polynomial.zero(p, n)
        comps.append(Comparison(f"P^{r} w({n})", apply_total_power(r, w), rhs))
    return Outcome(comps)


def check_hatrel(params: dict) -> Outcome:
    p, n, b = _prime(params), _int(params, "n"), _int(params, "b")
    if n < 1 or not 1 <= b <= p - 1:
        raise UsageError("hatrel needs n >= 1 and 1 <= b <= p-1")
    d = hatrel_degree(n, b, p)
    _bound(params, d * (p - 1) <= 1000, "operation degree <= 1000")
    R = minimal_excess_spike(n, b, p)
    PR = AlgebraElement.P(*R, p=p)
    word = tuple((b + 1) * p**k - 1 for k in range(n - 1, 0, -1)) + (b,)
    comps = [
        Comparison("(i) P(p-1,...,p-1,b) as admissible composite", admissible_to_milnor(word, p), PR),
        Comparison("(i) admissible word to Milnor index", admissible_to_milnor_index(word, p), R),
        Comparison("(i) Milnor index to admissible word", milnor_to_admissible_index(R, p), word),
    ]
    H = chi_expansion(d, p)
    bound = n * (p - 1) + b
    low = AlgebraElement(p, {S: c for S, c in (H - PR).items() if milnor_excess(S) <= bound})
    comps.append(Comparison("(ii) Hq - P(R) has excess > n(p-1)+b", low, AlgebraElement.zero(p)))
    nv = _int(params, "nvars", min(n, 3))
    gens = 0
    for deg in range(bound + 1):
        for exps in _compositions(deg, nv):
            g = Polynomial.monomial(exps, p)
            comps.append(Comparison(f"(ii) on {format_polynomial(g)}", apply_hq_cartan(d, g), apply_milnor(R, g)))
            gens += 1
    if n >= 2:
        u, v = (b + 1) * p ** (n - 1), (b + 1) * rep_unit(n - 1, p) - n
        comps.append(Comparison("(iii) Hq{d} = P^u Hq{v} + P(R)", H, AlgebraElement.P(u, p=p) * chi_expansion(v, p) + PR))
    return Outcome(comps, {"d": d, "generators_checked": gens})


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def check_davis(params: dict) -> Outcome:
    p, u, v = _prime(params), _int(params, "u"), _int(params, "v")
    if u < 0 or v < 0:
        raise UsageError("u and v must be non-negative")
    _bound(params, (u + v) * (p - 1) <= 1000, "(u+v)(p-1) <= 1000")
    dav = davis_expansion(u, v, p)
    comps = [Comparison("binomial sum = P^u * Hq{v}", dav, AlgebraElement.P(u, p=p) * chi_expansion(v, p))]
    notes: dict[str, Any] = {}
    n = 2
    while p ** (n - 1) <= u:
        q, rem = divmod(u, p ** (n - 1))
        b = q - 1
        if not rem and 1 <= b <= p - 1 and v == (b + 1) * rep_unit(n - 1, p) - n:
            R = minimal_excess_spike(n, b, p)
            omitted = chi_expansion(u + v, p) - dav
            comps.append(Comparison("only the minimal-excess element is omitted", omitted, AlgebraElement.P(*R, p=p)))
            notes["omitted"] = format_element(AlgebraElement.P(*R, p=p))
        n += 1
    return Outcome(comps, notes)


def check_minhtrick2(params: dict) -> Outcome:
    p, n = _prime(params), _int(params, "n")
    comp = _ints(params, "comp")
    a = _ints(params, "a")
    i = sum(comp)
    if n < 1 or not comp or len(comp) != len(a) or any(x <= 0 for x in comp) or not 1 <= i <= p - 1:
        raise UsageError("minhtrick2 needs n >= 1, a composition of i <= p-1 and matching a")
    if any(a[k] <= a[k + 1] for k in range(len(a) - 1)) or a[-1] < 0:
        raise UsageError("a must be strictly decreasing and >= 0")
    _bound(params, p**n <= 200, "p^n <= 200")
    j = sum(ik * rep_unit(ak, p) for ik, ak in zip(comp, a))
    r = rep_unit(n, p) - n - j
    f = Polynomial.monomial(([p - 1] * (n - 1)) + [p - i - 1], p)
    lhs = apply_hq_cartan(r, f) if r >= 0 else Polynomial.zero(p, n)
    if a[0] <= n - 1:
        rhs = w_det(n, p) ** (p - i - 1) * product((w_omit(n - 1, ak, p, n) ** ik for ik, ak in zip(comp, a)), p, n)
        rhs = rhs.scale((-1) ** (i * (n - 1) - j))
    else:
        # no t^(p^a) with a > n-1 occurs in the parametrised determinant, so the term vanishes
        rhs = Polynomial.zero(p, n)
    return Outcome([Comparison(f"Hq{{{r}}} identity, j={j}", lhs, rhs)], {"j": j, "i": i})


def check_minhtrick(params: dict) -> Outcome:
    p, n, b = _prime(params), _int(params, "n"), _int(params, "b")
    if n < 1 or not 1 <= b <= p - 1:
        raise UsageError("minhtrick needs n >= 1 and 1 <= b <= p-1")
    _bound(params, p**n <= 400, "p^n <= 400")
    r = (b + 1) * rep_unit(n - 1, p) - (n - 1)
    f = Polynomial.monomial([p - 1] * (n - 1) + [b], p)
    rhs = w_det(n, p) ** b * w_det(n - 1, p, n) ** (p - b - 1)
    lam = Partition(tuple([p - 1] * (n - 1) + [b]), p)
    comps = [
        Comparison(f"Hq{{{r}}}((x1...x(n-1))^(p-1) xn^b)", apply_hq_cartan(r, f), rhs),
        Comparison("same with v(lambda) and w(lambda')", apply_hq_cartan(r, v_polynomial(lam)), w_conjugate_polynomial(lam)),
    ]
    return Outcome(comps, {"r": r})


def _chir_common(params: dict) -> tuple[int, Partition, int, Polynomial]:
    p = _prime(params)
    lam = _lambda(params, p)
    _bound(params, d_s(lam) <= 400 and len(lam) <= 5, "d_s <= 400, length <= 5")
    return p, lam, t_conjugate(lam).gamma.parts[0], v_polynomial(lam)


def check_chir0(params: dict) -> Outcome:
    p, lam, g1, v = _chir_common(params)
    comps = []
    for r in _r_values(params):
        if alpha(R_of(r, lam), p) > g1:
            comps.append(Comparison(f"Hq{{{r}}} v(lambda) = 0", apply_hq_cartan(r, v), Polynomial.zero(p, len(lam))))
    if not comps:
        raise Skip("no r with alpha(R(r, lambda)) > gamma_1")
    return Outcome(comps, {"r_checked": len(comps)})


def check_chir1(params: dict) -> Outcome:
    p, lam, g1, v = _chir_common(params)
    n = len(lam)
    lam1 = t_conjugate(lam).blocks[0]
    minus = lambda_minus(lam)
    v1, vm, dm = v_polynomial(lam1, n), v_polynomial(minus, n), d_c(minus) if minus.parts else 0
    comps = []
    for r in _r_values(params):
        if alpha(R_of(r, lam), p) == g1:
            rhs = apply_hq_cartan(r + dm, v1) * vm
            comps.append(Comparison(f"Hq{{{r}}} v(lambda) splits", apply_hq_cartan(r, v), rhs))
    if not comps:
        raise Skip("no r with alpha(R(r, lambda)) = gamma_1")
    return Outcome(comps, {"r_checked": len(comps)})


def check_chim(params: dict) -> Outcome:
    p = _prime(params)
    lam = _lambda(params, p)
    _bound(params, d_s(lam) <= 400, "d_s <= 400")
    rs = r_sequence(lam)
    method = params.get("method", "cartan")
    f = v_polynomial(lam)
    for r in rs:
        f = apply_hq(r, f, method)
    admissible = all(rs[k] >= p * rs[k + 1] for k in range(len(rs) - 1))
    comps = [
        Comparison("closed-form r = tableau r", rs, tab_r_sequence(lam)),
        Comparison("r-sequence is admissible", admissible, True),
        Comparison("Hq{r_m}...Hq{r_1} v(lambda) = w(lambda')", f, w_conjugate_polynomial(lam)),
    ]
    return Outcome(comps, {"r_sequence": list(rs), "d_c": d_c(lam), "d_s": d_s(lam)})


def check_zerocase(params: dict) -> Outcome:
    p, lam, g1, _ = _chir_common(params)
    n = len(lam)
    if n < 2:
        raise Skip("needs at least two rows")
    b = t_conjugate(lam).b_k[0]
    minus = lambda_minus(lam)
    dm = d_c(minus) if minus.parts else 0
    f = Polynomial.monomial([p] + [p - 1] * (n - 2) + [b - 1], p)
    comps = []
    for r in _r_values(params):
        if alpha(R_of(r, lam), p) == g1:
            comps.append(Comparison(f"Hq{{{r + dm}}} on x1^p...", apply_hq_cartan(r + dm, f), Polynomial.zero(p, n)))
    if not comps:
        raise Skip("no r with alpha(R(r, lambda)) = gamma_1")
    return Outcome(comps, {"r_checked": len(comps)})


def check_factors(params: dict) -> Outcome:
    p = _prime(params)
    lam = _lambda(params, p)
    _bound(params, d_s(lam) <= 400, "d_s <= 400")
    n = len(lam)
    v = v_polynomial(lam)
    r1 = r_sequence(lam)[0]
    forms = []
    for low, s in antidiagonals(lam):
        for c in itertools.product(range(p), repeat=low - 1):
            if any(c[: low - s]):
                forms.append(Polynomial.linear_form(list(c) + [1], p, n))
    rhs = v * product(forms, p, n)
    return Outcome([Comparison("Hq{r_1} v(lambda) = v(lambda) * linear forms", apply_hq_cartan(r1, v), rhs)], {"r_1": r1, "linear_forms": len(forms)})


def check_sumI(params: dict) -> Outcome:
    p, s = _prime(params), _int(params, "s")
    if s < 1:
        raise UsageError("s must be >= 1")
    _bound(params, p**s <= 400, "p^s <= 400")
    total = Polynomial.zero(p, s)
    for c in itertools.product(range(p), repeat=s):
        if any(c):
            total = total + Polynomial.linear_form(c, p, s) ** (p**s - 1)
    lhs = (w_det(s, p) ** (p - 1)).scale((-1) ** s)
    return Outcome([Comparison("(-1)^s w(s)^(p-1) = sum of v^(p^s - 1)", lhs, total)])


def _spike_setup(params: dict) -> tuple[int, Partition, Polynomial, Polynomial, tuple[int, ...], int]:
    p = _prime(params)
    lam = _lambda(params, p)
    _bound(params, d_s(lam) <= 400 and len(lam) <= 4, "d_s <= 400, length <= 4")
    exps, sign = s_monomial(lam)
    return p, lam, v_polynomial(lam), p_prime_polynomial(lam), exps, sign


def check_milnor_spike_i(params: dict) -> Outcome:
    p, lam, v, pp, exps, sign = _spike_setup(params)
    R = milnor_spike(Partition(lam.parts[1:], p))
    s = Polynomial.monomial(exps, p)
    return Outcome(
        [
            Comparison("P(R) s(lambda) = p(lambda')", apply_milnor(R, s), pp),
            Comparison("(-1)^eps P(R) v(lambda) = p(lambda')", apply_milnor(R, v).scale(sign), pp),
        ],
        {"R": list(R)},
    )


def check_milnor_spike_ii(params: dict) -> Outcome:
    p = _prime(params)
    if params.get("kappa") is not None:
        kappa = _ints(params, "kappa")
        params = dict(params, **{"lambda": tuple((p - 1) * k for k in kappa)})
    _, lam, _, pp, _, _ = _spike_setup(params)
    gamma = t_conjugate(lam).gamma
    S = milnor_spike(Partition(gamma.parts[1:], p))
    lhs = apply_milnor(S, w_conjugate_polynomial(lam))
    conj = kappa_of(lam) is None
    return Outcome([Comparison("P(S) w(lambda') = p(lambda')", lhs, pp, sign_free=conj)], {"S": list(S)}, conjecture=conj)


def check_milnor_spike_iii(params: dict) -> Outcome:
    p, lam, v, pp, exps, sign = _spike_setup(params)
    R = milnor_spike(lam)
    target = pp.frobenius(1)
    s = Polynomial.monomial(exps, p)
    comps = [
        Comparison("P(R_lambda) s(lambda) = p(lambda')^p", apply_milnor(R, s), target),
        Comparison("(-1)^eps P(R_lambda) v(lambda) = p(lambda')^p", apply_milnor(R, v).scale(sign), target),
    ]
    notes: dict[str, Any] = {"R": list(R)}
    if kappa_of(lam) is not None:
        S = milnor_spike(t_conjugate(lam).gamma)
        comps.append(Comparison("P(S_gamma) w(lambda') = p(lambda')^p", apply_milnor(S, w_conjugate_polynomial(lam)), target))
        notes["S"] = list(S)
    return Outcome(comps, notes)


def check_omegai(params: dict) -> Outcome:
    p = _prime(params)
    R = normalize(_ints(params, "R"))
    rho = omega_vector(R, p)
    if params.get("mono") is not None:
        monos = [_ints(params, "mono")]
    else:
        n, emax = _int(params, "nvars", 3), _int(params, "emax", 12)
        _bound(params, (emax + 1) ** n <= 20000, "(emax+1)^nvars <= 20000")
        monos = list(itertools.product(range(emax + 1), repeat=n))
    comps = []
    for m in monos:
        if not dominates(omega_vector(m, p), rho, p):
            f = Polynomial.monomial(m, p)
            comps.append(Comparison(f"P{R} on {format_polynomial(f)}", apply_milnor(R, f), Polynomial.zero(p, len(m))))
    if not comps:
        raise Skip("every monomial dominates omega(R)")
    return Outcome(comps, {"omega_R": list(rho), "monomials_checked": len(comps)})


def basecase_rhs(p: int, n: int, bset: Sequence[int]) -> Polynomial:
    exps = [p**b for b in bset] if len(bset) == n else [1] + [p**b for b in bset]
    return vandermonde(list(range(1, n + 1)), exps, p, n) ** (p - 1)


def check_basecase(params: dict) -> Outcome:
    p, n = _prime(params), _int(params, "n")
    bset = _ints(params, "bset")
    if n < 1 or len(bset) not in (n - 1, n) or any(x < 1 for x in bset) or list(bset) != sorted(set(bset)):
        raise UsageError("bset must be strictly increasing positive integers, of size n-1 or n")
    _bound(params, max(bset, default=0) <= 4 and n <= 4, "entries <= 4, n <= 4")
    R = [0] * max(bset, default=0)
    for b in bset:
        R[b - 1] = p - 1
    lhs = apply_milnor(R, _prod_vars(p, n, p - 1))
    return Outcome([Comparison(f"P{tuple(R)} (x1...xn)^(p-1)", lhs, basecase_rhs(p, n, bset))], {"R": R})


def omegaii_rhs(p: int, R0: Sequence[int], exps: Sequence[int]) -> Polynomial:
    """prod_k Delta_k^(p^(k-1)(p-1)) with Delta_k on the variables and R_0 indices
    (0-based, r_0 first) whose k-th base-p digit is p-1."""
    n = len(exps)
    rd = [digits(r, p) for r in R0]
    sd = [digits(s, p) for s in exps]
    m = max((len(d) for d in rd + sd), default=0)
    out = Polynomial.one(p, n)
    for k in range(m):
        js = [j for j, d in enumerate(rd) if k < len(d) and d[k] == p - 1]
        vs = [i + 1 for i, d in enumerate(sd) if k < len(d) and d[k] == p - 1]
        if len(js) != len(vs):
            raise UsageError("R_0 and the monomial have different omega-vectors")
        delta = vandermonde(vs, [p**j for j in js], p, n)
        out = out * delta.frobenius(k) ** (p - 1)
    return out


def omegaii_cases(p: int, count: int, seed: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """The two tabulated cases plus random digit-{0, p-1} pairs (R_0, exponents) with equal omega-vectors."""
    q = p - 1
    cases = [((q + q * p * p, q, q), ((p * p + 1) * q, q, q)), ((q, q + q * p * p, q), ((p * p + 1) * q, q, q))]
    rng = random.Random(seed)
    while len(cases) < count + 2:
        n, t1, places = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
        R0, exps = [0] * t1, [0] * n
        for k in range(places):
            c = rng.randint(0, min(n, t1))
            for j in rng.sample(range(t1), c):
                R0[j] += q * p**k
            for i in rng.sample(range(n), c):
                exps[i] += q * p**k
        if any(R0[1:]) and any(exps):
            cases.append((tuple(R0), tuple(exps)))
    return cases


def check_omegaii(params: dict) -> Outcome:
    p = _prime(params)
    if params.get("R0") is not None:
        cases = [(_ints(params, "R0"), _ints(params, "mono"))]
    else:
        cases = omegaii_cases(p, _int(params, "count", 20), _int(params, "seed", 0))
    comps = []
    for R0, exps in cases:
        if any(d not in (0, p - 1) for x in tuple(R0) + tuple(exps) for d in digits(x, p)):
            raise UsageError("entries must have base-p digits 0 and p-1 only")
        if omega_vector(R0, p) != omega_vector(exps, p):
            raise UsageError("R_0 and the monomial must share an omega-vector")
        f = Polynomial.monomial(exps, p)
        comps.append(Comparison(f"P{tuple(R0[1:])} on {format_polynomial(f)}", apply_milnor(R0[1:], f), omegaii_rhs(p, R0, exps)))
    return Outcome(comps, {"cases": len(comps)})


def check_weylmod1(params: dict) -> Outcome:
    p = _prime(params)
    lam = _lambda(params, p)
    _bound(params, d_c(lam) <= 120, "d_c <= 120")
    gamma = t_conjugate(lam).gamma.parts
    v = v_polynomial(lam)
    exps, sign = s_monomial(lam)
    n = len(lam)
    lead = Polynomial.monomial(exps, p, sign)
    top, c = v.leading_term()
    rest_bad = Polynomial(
        p,
        n,
        {m: c for m, c in v.terms() if m != tuple(exps) and (omega_vector(m, p) == gamma or not dominates(gamma, omega_vector(m, p), p))},
    )
    return Outcome(
        [
            Comparison("omega(s(lambda)) = gamma", omega_vector(exps, p), gamma),
            Comparison("leading term of v(lambda) is (-1)^eps s(lambda)", Polynomial.monomial(top, p, c), lead),
            Comparison("all other monomials strictly below gamma", rest_bad, Polynomial.zero(p, n)),
        ],
        {"terms": len(v)},
    )


def check_hq_dualpath(params: dict) -> Outcome:
    p, r = _prime(params), _int(params, "r")
    n = _int(params, "nvars", 3)
    text = params.get("poly")
    if text is None:
        raise UsageError("missing parameter 'poly'")
    try:
        f = parse_polynomial(text, p, n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _bound(params, f.degree() + r * (p - 1) <= 200, "output degree <= 200")
    fast = apply_hq(r, f, "cartan")
    return Outcome(
        [
            Comparison("recursive = Milnor sum", apply_hq(r, f, "recursive"), apply_hq(r, f, "milnor")),
            Comparison("Cartan product = Milnor sum", fast, apply_hq(r, f, "milnor")),
        ]
    )


REGISTRY: dict[str, Callable[[dict], Outcome]] = {
    "detp1": check_detp1,
    "minhlemma": check_minhlemma,
    "hatrel": check_hatrel,
    "davis": check_davis,
    "minhtrick2": check_minhtrick2,
    "minhtrick": check_minhtrick,
    "chir0": check_chir0,
    "chir1": check_chir1,
    "chim": check_chim,
    "zerocase": check_zerocase,
    "factors": check_factors,
    "sumI": check_sumI,
    "milnor_spike_i": check_milnor_spike_i,
    "milnor_spike_ii": check_milnor_spike_ii,
    "milnor_spike_iii": check_milnor_spike_iii,
    "omegai": check_omegai,
    "basecase": check_basecase,
    "omegaii": check_omegaii,
    "weylmod1": check_weylmod1,
    "hq_dualpath": check_hq_dualpath,
}


# running

def _parse_expected(text: str, like: Value) -> Value:
    if isinstance(like, Polynomial):
        return parse_polynomial(text, like.p, like.nvars)
    return parse_element(text, like.p)


def run_check(spec: CheckSpec, timing: bool = False) -> dict:
    """Run one check and return its JSON-ready report."""
    if spec.check_id not in REGISTRY:
        raise UsageError(f"unknown check {spec.check_id!r}; known: {', '.join(REGISTRY)}")
    params = spec.param_dict
    report: dict[str, Any] = {"check_id": spec.check_id, "parameters": {k: _jsonable(v) for k, v in spec.params}}
    t0 = time.perf_counter()
    try:
        outcome = REGISTRY[spec.check_id](params)
    except Skip as e:
        report.update(status="skip", reason=str(e))
        outcome = None
    if outcome is not None:
        comps = outcome.comparisons
        if spec.expected is not None and comps:
            main = comps[-1]  # the headline identity is always listed last
            try:
                comps[-1] = Comparison(main.label + " (expected value)", main.lhs, _parse_expected(spec.expected, main.lhs))
            except ValueError as e:
                raise UsageError(f"bad expected value: {e}") from None
        failed = [c for c in comps if not c.holds()]
        report["comparisons"] = len(comps)
        if outcome.notes:
            report["notes"] = {k: _jsonable(v) for k, v in outcome.notes.items()}
        if outcome.conjecture:
            report["status"] = "conjecture"
            report["conjecture"] = "confirmed up to sign" if not failed else "conjecture unconfirmed"
        else:
            report["status"] = "fail" if failed else "pass"
        if failed:
            c = failed[0]
            report["failed"] = {
                "label": c.label,
                "lhs": _serialize(c.lhs),
                "rhs": _serialize(c.rhs),
                "difference": _difference(c.lhs, c.rhs),
                "count": len(failed),
            }
    if timing:
        report["wall_time"] = round(time.perf_counter() - t0, 3)
    return report


def _run_one(args: tuple[CheckSpec, bool]) -> dict:
    return run_check(*args)


def run_suite(specs: Sequence[CheckSpec], jobs: int = 1, timing: bool = False) -> dict:
    """Run checks (optionally in worker processes); reports keep the order of ``specs``."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_run_one, [(s, timing) for s in specs]))
    else:
        reports = [run_check(s, timing) for s in specs]
    summary = {s: sum(1 for r in reports if r["status"] == s) for s in STATUSES}
    return {"schema": SCHEMA, "summary": summary, "reports": reports}


def exit_code(result: dict) -> int:
    return 1 if result["summary"]["fail"] else 0


def dumps(result: dict) -> str:
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


# default grid

def _lambda_text(lam: Partition) -> str:
    return ",".join(map(str, lam.parts))


def default_grid(only: Iterable[str] | None = None) -> list[CheckSpec]:
    """The documented parameter grid, in registry order."""
    wanted = set(only) if only else set(REGISTRY)
    unknown = wanted - set(REGISTRY)
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(sorted(unknown))}")
    lams3 = [_lambda_text(lam) for lam in t_regular_partitions(3, 3, 200)]
    specs: list[CheckSpec] = []
    add = specs.append
    for cid in REGISTRY:
        if cid not in wanted:
            continue
        if cid == "detp1":
            for p, ns in ((3, range(1, 5)), (5, range(1, 4))):
                for n in ns:
                    add(CheckSpec.make(cid, p=p, n=n))
        elif cid == "minhlemma":
            for p in (3, 5):
                for n in range(1, 4):
                    add(CheckSpec.make(cid, p=p, n=n))
        elif cid == "hatrel":
            for p in (3, 5):
                for n in range(1, 4):
                    for b in range(1, p):
                        add(CheckSpec.make(cid, p=p, n=n, b=b))
        elif cid == "davis":
            for u in range(13):
                for v in range(13 - u):
                    add(CheckSpec.make(cid, p=3, u=u, v=v))
            for p in (3, 5):
                for n in (2, 3):
                    for b in range(1, p):
                        add(CheckSpec.make(cid, p=p, u=(b + 1) * p ** (n - 1), v=(b + 1) * rep_unit(n - 1, p) - n))
        elif cid == "minhtrick2":
            for p in (3, 5):
                for n in range(1, 4):
                    for i in range(1, p):
                        for comp in _all_compositions(i):
                            for a in itertools.combinations(range(3, -1, -1), len(comp)):
                                add(CheckSpec.make(cid, p=p, n=n, comp=comp, a=a))
        elif cid == "minhtrick":
            for p in (3, 5):
                for n in range(1, 4):
                    for b in range(1, p):
                        add(CheckSpec.make(cid, p=p, n=n, b=b))
        elif cid in ("chir0", "chir1", "zerocase"):
            for lam in lams3:
                add(CheckSpec.make(cid, p=3, **{"lambda": lam}))
        elif cid == "chim":
            for lam in lams3 + ["5,3,2", "6,5,4,3,2"]:
                add(CheckSpec.make(cid, p=3, **{"lambda": lam}))
            for lam in ("9,6,3", "4,4", "8,4", "5,1"):
                add(CheckSpec.make(cid, p=5, **{"lambda": lam}))
        elif cid == "factors":
            for lam in lams3:
                add(CheckSpec.make(cid, p=3, **{"lambda": lam}))
        elif cid == "sumI":
            for p in (3, 5):
                for s in range(1, 4):
                    add(CheckSpec.make(cid, p=p, s=s))
        elif cid in ("milnor_spike_i", "milnor_spike_ii", "milnor_spike_iii"):
            for lam in lams3:
                add(CheckSpec.make(cid, p=3, **{"lambda": lam}))
        elif cid == "omegai":
            for p, R in ((3, (2, 2)), (3, (1, 1)), (3, (8, 5, 1)), (3, (4,)), (3, (0, 3)), (5, (4, 4)), (5, (6, 1))):
                add(CheckSpec.make(cid, p=p, R=R))
        elif cid == "basecase":
            for n in range(1, 4):
                for m in (n - 1, n):
                    for bset in itertools.combinations(range(1, 4), m):
                        add(CheckSpec.make(cid, p=3, n=n, bset=bset))
        elif cid == "omegaii":
            for p in (3, 5):
                add(CheckSpec.make(cid, p=p, count=20, seed=p))
        elif cid == "weylmod1":
            for p in (3, 5):
                for lam in t_regular_partitions(p, 3):
                    if d_c(lam) <= 60:
                        add(CheckSpec.make(cid, p=p, **{"lambda": _lambda_text(lam)}))
        elif cid == "hq_dualpath":
            for p, n, poly, r in (
                (3, 2, "x1^2*x2^2", 2),
                (3, 3, "x1^2*x2^2*x3^2", 9),
                (3, 3, "x1*x2^3 + 2*x3^4", 5),
                (5, 2, "x1^4*x2^4", 4),
                (5, 2, "(x1 + x2)^3*x1", 6),
                (3, 3, "x1^5*x2 + x2^3*x3^3", 7),
            ):
                add(CheckSpec.make(cid, p=p, nvars=n, poly=poly, r=r))
    return specs


def _all_compositions(i: int) -> list[tuple[int, ...]]:
    if i == 0:
        return [()]
    return [(first,) + rest for first in range(1, i + 1) for rest in _all_compositions(i - first)]


def load_specs(path: str) -> list[CheckSpec]:
    """Read a JSON list of {"check": id, "params": {...}, "expected": text?}."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read parameter file {path}: {e}") from None
    if not isinstance(data, list):
        raise UsageError("parameter file must hold a JSON list")
    specs = []
    for item in data:
        if not isinstance(item, dict) or "check" not in item:
            raise UsageError("each entry needs a 'check' field")
        specs.append(CheckSpec.make(item["check"], item.get("expected"), **item.get("params", {})))
    return specs
