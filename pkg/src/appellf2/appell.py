"""Appell double series F1 and F2.

Direct summation, closed-form reductions, the finite-sum form of F1 for
integer parameters, analytic continuations for the F2 families
F2(c+s; a, a'; c, c-p; x, y), F2(c+s; a, a'; c, c+p; x, y) and
F2(d; a, a; c, c; x, y), and the contiguous (recurrence) relations.

Continuation routines are parametrised the way they arise from Laplace
integrals: arguments x = k/h and y = k'/h.
"""

from __future__ import annotations

import decimal
import math
from decimal import Decimal
from dataclasses import dataclass, replace
from typing import Callable, Iterable

import numpy as np

from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    HypergeometricError,
    NoStrategyError,
    ParameterError,
    SingularConfigurationError,
)
from .special_core import (
    DEFAULT_TOL,
    EPS,
    MAX_TERMS,
    EvaluationResult,
    IdentityReport,
    _check_denominator,
    hyp2f1,
    nonpositive_integer,
    pfq,
    pochhammer,
    real_power,
    terminating_order,
)

PATTERN_TOL = 1e-12
OFFSET_TOL = 1e-10
SERIES_RADIUS = 0.9


def _close(u: float, v: float, tol: float = PATTERN_TOL) -> bool:
    return abs(u - v) <= tol * max(1.0, abs(u), abs(v))


def _integer_offset(u: float, tol: float = OFFSET_TOL) -> int | None:
    n = round(u)
    if abs(u - n) <= tol:
        return int(n)
    return None


@dataclass(frozen=True)
class F2Params:
    """F2(d; a, a'; b, b'; x, y) = sum (d)_{m+n} (a)_m (a')_n / ((b)_m (b')_n m! n!) x^m y^n."""

    d: float
    a: float
    a_prime: float
    b: float
    b_prime: float
    x: float
    y: float

    def __post_init__(self):
        for name in ("d", "a", "a_prime", "b", "b_prime", "x", "y"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if nonpositive_integer(self.b) is not None and not self._b_harmless(self.b, self.a):
            raise ParameterError(f"b = {self.b!r} is a nonpositive integer")
        if nonpositive_integer(self.b_prime) is not None and not self._b_harmless(self.b_prime, self.a_prime):
            raise ParameterError(f"b' = {self.b_prime!r} is a nonpositive integer")

    @staticmethod
    def _b_harmless(b, a):
        order = terminating_order(a)
        return order is not None and order <= nonpositive_integer(b)

    @property
    def in_series_domain(self) -> bool:
        return abs(self.x) + abs(self.y) < 1.0

    @property
    def terminating(self) -> bool:
        return terminating_order(self.a) is not None and terminating_order(self.a_prime) is not None

    def swapped(self) -> "F2Params":
        return F2Params(self.d, self.a_prime, self.a, self.b_prime, self.b, self.y, self.x)

    def with_(self, **kw) -> "F2Params":
        return replace(self, **kw)

    def as_tuple(self):
        return (self.d, self.a, self.a_prime, self.b, self.b_prime, self.x, self.y)


@dataclass(frozen=True)
class F1Params:
    """F1(a; b, b'; c; x, y) = sum (a)_{m+n} (b)_m (b')_n / ((c)_{m+n} m! n!) x^m y^n."""

    a: float
    b: float
    b_prime: float
    c: float
    x: float
    y: float

    def __post_init__(self):
        for name in ("a", "b", "b_prime", "c", "x", "y"):
            object.__setattr__(self, name, float(getattr(self, name)))
        _check_denominator(self.c, terminating_order(self.a))

    @property
    def in_series_domain(self) -> bool:
        return abs(self.x) < 1.0 and abs(self.y) < 1.0


@dataclass(frozen=True)
class ContinuationParams:
    """Parameters of F2(c+s; a, a'; c, c-+p; k/h, k'/h)."""

    c: float
    s: int
    p: int
    a: float
    a_prime: float
    k: float
    k_prime: float
    h: float = 1.0

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 0 or int(self.p) != self.p or self.p < 0:
            raise ParameterError("s and p must be nonnegative integers")
        object.__setattr__(self, "s", int(self.s))
        object.__setattr__(self, "p", int(self.p))
        if not self.h > 0:
            raise DomainError("continuations need h > 0")

    @property
    def x(self) -> float:
        return self.k / self.h

    @property
    def y(self) -> float:
        return self.k_prime / self.h

    def check_singular(self) -> None:
        h, k, kp = self.h, self.k, self.k_prime
        for label, val in (("h-k", h - k), ("h-k'", h - kp), ("h-k-k'", h - k - kp)):
            if abs(val) <= 1e-12 * max(abs(h), abs(k), abs(kp)):
                raise SingularConfigurationError(f"{label} vanishes: h={h}, k={k}, k'={kp}")


# ---------------------------------------------------------------------------
# direct double sums


def _diagonal_sum(first_col, step_n, rate, tol, max_diagonals, finite=None):
    """Sum T(m, n) along diagonals m + n = t.

    ``first_col(t)`` returns T(t+1, 0) / T(t, 0); ``step_n(t, m)`` returns the
    ratio array T(m, n+1) / T(m, n) for m = 0..t with n = t - m.
    """
    cur = np.array([1.0])
    diag_sums = [1.0]
    abs_total = 1.0
    terms = 1
    running = 1.0
    small = 0
    last = max_diagonals if finite is None else finite
    for t in range(last):
        m = np.arange(t + 1)
        nxt = np.empty(t + 2)
        nxt[: t + 1] = cur * step_n(t, m)
        nxt[t + 1] = cur[t] * first_col(t)
        cur = nxt
        dsum = math.fsum(cur)
        diag_sums.append(dsum)
        abs_total += float(np.abs(cur).sum())
        terms += t + 2
        running += dsum
        if finite is not None:
            continue
        scale = abs(running)
        if abs(dsum) <= tol * scale:
            small += 1
        else:
            small = 0
        if small >= 2:
            prev = diag_sums[-2]
            ratio = rate if prev == 0.0 else max(abs(dsum / prev), rate)
            if ratio < 1.0:
                tail = abs(dsum) * ratio / (1.0 - ratio)
                # a 10x margin keeps the realised error under tol near the boundary
                if tail <= 0.1 * tol * scale:
                    value = math.fsum(diag_sums)
                    return value, tail + 8 * EPS * abs_total, terms
    if finite is not None:
        return math.fsum(diag_sums), 8 * EPS * abs_total, terms
    raise ConvergenceError(f"double series did not converge within {max_diagonals} diagonals")


def _positive_arguments(p: F2Params) -> tuple[F2Params, float]:
    """Map negative arguments to positive ones before summing.

    F2(d; a, a'; b, b'; x, y) = (1-x)^-d F2(d; b-a, a'; b, b'; x/(x-1), y/(1-x))
    and its mirror in y.  Mixed signs otherwise cancel inside each diagonal
    and cost digits; the transformed arguments also have a smaller |x|+|y|.
    A terminating numerator is left alone so finite sums stay finite.
    """
    factor = 1.0
    if p.x < 0 and terminating_order(p.a) is None:
        factor *= (1.0 - p.x) ** -p.d
        p = F2Params(p.d, p.b - p.a, p.a_prime, p.b, p.b_prime, p.x / (p.x - 1.0), p.y / (1.0 - p.x))
    if p.y < 0 and terminating_order(p.a_prime) is None:
        factor *= (1.0 - p.y) ** -p.d
        p = F2Params(p.d, p.a, p.b_prime - p.a_prime, p.b, p.b_prime, p.x / (1.0 - p.y), p.y / (p.y - 1.0))
    return p, factor


def f2_series(p: F2Params, tol: float = DEFAULT_TOL, max_diagonals: int = MAX_TERMS) -> EvaluationResult:
    """F2 double sum along diagonals m + n = const (after sign normalisation)."""
    finite = None
    if p.terminating:
        finite = terminating_order(p.a) + terminating_order(p.a_prime)
        factor = 1.0
    elif not p.in_series_domain:
        raise DivergenceError(f"F2 series needs |x|+|y| < 1, got {abs(p.x) + abs(p.y)!r}")
    else:
        p, factor = _positive_arguments(p)
    d, a, ap, b, bp, x, y = p.as_tuple()

    def first_col(t):
        return (d + t) * (a + t) / ((b + t) * (t + 1)) * x

    def step_n(t, m):
        n = t - m
        return (d + t) * (ap + n) / ((bp + n) * (n + 1)) * y

    value, err, terms = _diagonal_sum(first_col, step_n, abs(x) + abs(y), tol, max_diagonals, finite)
    if factor != 1.0:
        return EvaluationResult(value * factor, err * factor + EPS * abs(value * factor), terms, "series")
    return EvaluationResult(value, err, terms, "series")


def f1_series(p: F1Params, tol: float = DEFAULT_TOL, max_diagonals: int = MAX_TERMS) -> EvaluationResult:
    """Appell F1 by direct summation.

    A terminating b (or b') turns the double sum into the finite single sum
    sum_r (a)_r (b)_r x^r / ((c)_r r!) 2F1(a+r, b'; c+r; y).
    """
    a, b, bp, c, x, y = p.a, p.b, p.b_prime, p.c, p.x, p.y
    nb, nbp, na = terminating_order(b), terminating_order(bp), terminating_order(a)
    if na is None:
        if nb is not None and (nbp is None or nb <= nbp):
            return _f1_single_sum(a, b, bp, c, x, y, nb, tol)
        if nbp is not None:
            return _f1_single_sum(a, bp, b, c, y, x, nbp, tol)
        if not p.in_series_domain:
            raise DivergenceError(f"F1 series needs |x| < 1 and |y| < 1, got ({x!r}, {y!r})")

    def first_col(t):
        return (a + t) * (b + t) / ((c + t) * (t + 1)) * x

    def step_n(t, m):
        n = t - m
        return (a + t) * (bp + n) / ((c + t) * (n + 1)) * y

    value, err, terms = _diagonal_sum(first_col, step_n, max(abs(x), abs(y)), tol, max_diagonals, na)
    return EvaluationResult(value, err, terms, "series")


def _f1_single_sum(a, b, bp, c, x, y, order, tol):
    parts = []
    err = 0.0
    terms = 0
    coef = 1.0
    for r in range(order + 1):
        if r:
            coef *= (a + r - 1) * (b + r - 1) / ((c + r - 1) * r) * x
        if coef == 0.0:
            break
        inner = hyp2f1(a + r, bp, c + r, y, tol)
        parts.append(coef * inner.value)
        err += abs(coef) * inner.abs_error_estimate
        terms += inner.terms_used
    value = math.fsum(parts)
    err += 8 * EPS * sum(abs(v) for v in parts)
    return EvaluationResult(value, err, max(terms, 1), "series")


FINITE_SUM_DIGITS = 60


def _f1_finite_parts(a, s, t, d, x, y):
    comb = math.comb
    one = Decimal(1)
    ly, lx = (one - y).ln(), (one - x).ln()
    parts = []
    for m in range(d + 1):
        am = a + m
        s1 = Decimal(0)
        for j in range(t + 1):
            big_a = Decimal(0)
            for k in range(am + 1):
                e = k + j - t
                if e == 0:
                    continue
                big_a += comb(am, k) * (-1) ** k * (one - (one - y) ** e) / e
            if 0 <= t - j <= am:
                big_a -= comb(am, t - j) * (-1) ** (t - j) * ly
            s1 += comb(j + s, s) * (-x) ** j / (y - x) ** (s + j + 1) * big_a
        s2 = Decimal(0)
        for k in range(s + 1):
            big_c = Decimal(0)
            for j in range(am + 1):
                e = j + k - s
                if e == 0:
                    continue
                big_c += comb(am, j) * (-1) ** j * (one - (one - x) ** e) / e
            if 0 <= s - k <= am:
                big_c -= comb(am, s - k) * (-1) ** (s - k) * lx
            s2 += comb(k + t, t) * (-y) ** k / (x - y) ** (t + k + 1) * big_c
        sign = comb(d, m) * (-1) ** m
        parts.append(sign * y ** (s - a - m) * s1)
        parts.append(sign * x ** (t - a - m) * s2)
    return parts


def f1_finite_sum(a: int, s: int, t: int, d: int, x: float, y: float) -> EvaluationResult:
    """Closed finite form of Γ(a+1)Γ(d+1)/Γ(a+d+2) F1(a+1; s+1, t+1; a+d+2; x, y).

    Valid for nonnegative integers a, s, t, d and 0 < |x|, |y| < 1, x != y.
    Indices where the power 1 - (1 - y)^(k+j-t) would be divided by zero
    are replaced by the logarithmic term.
    """
    for name, v in (("a", a), ("s", s), ("t", t), ("d", d)):
        if int(v) != v or v < 0:
            raise ParameterError(f"{name} must be a nonnegative integer")
    a, s, t, d = int(a), int(s), int(t), int(d)
    x, y = float(x), float(y)
    if x == 0.0 or y == 0.0 or x == y:
        raise DomainError("finite form needs x != y and nonzero arguments; use f1_series")
    if not (abs(x) < 1.0 and abs(y) < 1.0):
        raise DivergenceError("finite form needs |x| < 1 and |y| < 1")
    # the alternating parts cancel badly for small |x|, |y|, so the finite sum
    # runs in 60-digit decimal arithmetic from the exact binary inputs
    with decimal.localcontext() as ctx:
        ctx.prec = FINITE_SUM_DIGITS
        parts = _f1_finite_parts(a, s, t, d, Decimal(x), Decimal(y))
        total = sum(parts, Decimal(0))
        mag = sum((abs(v) for v in parts), Decimal(0))
    value = float(total)
    err = float(mag) * 10.0 ** (2 - FINITE_SUM_DIGITS) + EPS * abs(value)
    return EvaluationResult(value, err, len(parts), "closed_form")


# ---------------------------------------------------------------------------
# reductions


def _f2_lemma10(p: F2Params) -> float:
    """F2(d; -n, -m; b, b'; x, 1) (or x = 1 / both) through a finite Vandermonde sum."""
    n, m = terminating_order(p.a), terminating_order(p.a_prime)
    d, b, bp = p.d, p.b, p.b_prime
    if _close(p.y, 1.0):
        return _lemma10_unit_y(d, n, m, b, bp, p.x)
    return _lemma10_unit_y(d, m, n, bp, b, p.y)


def _lemma10_unit_y(d, n, m, b, bp, x):
    # ₃F₂ form first; the prefactor/lower-parameter collision falls back to
    # sum_k (d)_k (-n)_k x^k / ((b)_k k!) * 2F1(d+k, -m; b'; 1)
    try:
        lead = pochhammer(bp - d, m) / pochhammer(bp, m)
        val = pfq((-n, d, 1 - bp + d), (b, 1 - bp + d - m), x).value
        return lead * val
    except ParameterError:
        pass
    parts = []
    for k in range(n + 1):
        coef = pochhammer(d, k) * pochhammer(-n, k) / (pochhammer(b, k) * math.factorial(k)) * x**k
        parts.append(coef * pochhammer(bp - d - k, m) / pochhammer(bp, m))
    return math.fsum(parts)


def f2_lemma10(d: float, n: int, m: int, b: float, b_prime: float, x: float = 1.0, y: float = 1.0) -> EvaluationResult:
    """F2(d; -n, -m; b, b'; x, y) with x = 1 or y = 1 as a terminating ₃F₂."""
    p = F2Params(d, -n, -m, b, b_prime, x, y)
    if not (_close(x, 1.0) or _close(y, 1.0)):
        raise DomainError("Lemma 10 needs x = 1 or y = 1")
    value = _f2_lemma10(p)
    return EvaluationResult(value, 64 * EPS * max(1.0, abs(value)), n + m + 1, "reduction")


def _pattern_list(p: F2Params):
    d, a, ap, b, bp, x, y = p.as_tuple()
    pats = []
    # Lemma 2: vanishing numerator parameter or argument
    if a == 0.0 or x == 0.0:
        pats.append(("lemma2", lambda: hyp2f1(d, ap, bp, y)))
    if ap == 0.0 or y == 0.0:
        pats.append(("lemma2", lambda: hyp2f1(d, a, b, x)))
    # Lemma 3
    if _close(a, b) and _close(ap, bp):
        pats.append(("lemma3.1", lambda: _closed(real_power(1 - x - y, -d))))
    if _close(b, d) and _close(bp, ap):
        pats.append(("lemma3.2", lambda: _closed(real_power(1 - y, a - d) * real_power(1 - x - y, -a))))
    if _close(b, a) and _close(bp, d):
        pats.append(("lemma3.3", lambda: _closed(real_power(1 - x, ap - d) * real_power(1 - x - y, -ap))))
    # d = b = b'
    if _close(b, d) and _close(bp, d):
        pats.append(("b=b'=d", lambda: _equal_d_denominators(a, ap, d, x, y)))
    # Lemma 5
    if _close(b, d):
        pats.append(("lemma5.1", lambda: _lemma5(ap, a, d - a, bp, y / _nonzero(1 - x), y, x, a)))
    if _close(bp, d):
        pats.append(("lemma5.2", lambda: _lemma5(a, d - ap, ap, b, x, x / _nonzero(1 - y), y, ap)))
    # b' = b + s = d
    s = _integer_offset(d - b)
    if s is not None and s > 0 and _close(bp, d):
        pats.append(("b'=b+s=d", lambda: _shifted_denominators(b, s, a, ap, x, y)))
    s = _integer_offset(d - bp)
    if s is not None and s > 0 and _close(b, d):
        pats.append(("b'=b+s=d", lambda: _shifted_denominators(bp, s, ap, a, y, x)))
    # Lemma 10: both numerators terminate and a unit argument
    if p.terminating and (_close(x, 1.0) or _close(y, 1.0)):
        pats.append(("lemma10", lambda: _closed(_f2_lemma10(p))))
    return pats


def _nonzero(v):
    if v == 0.0:
        raise SingularConfigurationError("vanishing denominator in reduction")
    return v


def _closed(value: float) -> EvaluationResult:
    return EvaluationResult(value, 16 * EPS * abs(value), 1, "reduction")


def _equal_d_denominators(a, ap, c, x, y):
    if _close(x, 1.0) or _close(y, 1.0):
        raise SingularConfigurationError("(1-x)(1-y) vanishes")
    z = x * y / ((1 - x) * (1 - y))
    inner = hyp2f1(a, ap, c, z)
    return inner.scaled(real_power(1 - x, -a) * real_power(1 - y, -ap))


def _lemma5(alpha, beta, beta_p, gam, u, v, w, expo):
    if _close(w, 1.0):
        raise SingularConfigurationError("1 - argument vanishes")
    inner = f1_series(F1Params(alpha, beta, beta_p, gam, u, v))
    return inner.scaled(real_power(1 - w, -expo))


def _shifted_denominators(c, s, a, ap, x, y):
    if _close(x, 1.0) or _close(y, 1.0):
        raise SingularConfigurationError("(1-x)(1-y) vanishes")
    z = x * y / ((1 - x) * (1 - y))
    w = x / (x - 1)
    parts, err, terms = [], 0.0, 0
    coef = 1.0
    for r in range(s + 1):
        if r:
            coef *= (a + r - 1) * (-s + r - 1) / ((c + r - 1) * r) * w
        if coef == 0.0:
            break
        inner = hyp2f1(a + r, ap, c + r, z)
        parts.append(coef * inner.value)
        err += abs(coef) * inner.abs_error_estimate
        terms += inner.terms_used
    pref = real_power(1 - x, -a) * real_power(1 - y, -ap)
    value = pref * math.fsum(parts)
    err = abs(pref) * (err + 8 * EPS * sum(abs(v) for v in parts))
    return EvaluationResult(value, err, max(terms, 1), "reduction")


def f2_reduce(p: F2Params) -> EvaluationResult | None:
    """Closed-form or single-variable reduction of F2, or None.

    Patterns, in priority order: vanishing numerator or argument (2F1);
    elementary closed forms for a=b/a'=b' and friends; d=b=b' (2F1);
    d equal to one denominator (F1); b' = b + s = d (finite 2F1 sum);
    terminating numerators at unit argument (3F2).  A pattern whose
    evaluation fails hands over to the next one; if every matching pattern
    fails the last error is raised.
    """
    last_error = None
    for _name, thunk in _pattern_list(p):
        try:
            res = thunk()
        except HypergeometricError as exc:
            last_error = exc
            continue
        return res.retag("reduction")
    if last_error is not None:
        raise last_error
    return None


# ---------------------------------------------------------------------------
# continuations


def _ratio_power(num: float, den: float, r: int) -> float:
    """(num/den)^r with the r = 0 case exactly 1 even for num = 0."""
    if r == 0:
        return 1.0
    return (num / den) ** r


def _continuation_core(cp: ContinuationParams, outer_order: int, outer_upper: float, outer_lower: float,
                       form: str, tol: float) -> EvaluationResult:
    cp.check_singular()
    c, s, a, ap, k, kp, h = cp.c, cp.s, cp.a, cp.a_prime, cp.k, cp.k_prime, cp.h
    _check_denominator(c)
    _check_denominator(outer_lower)
    z = k * kp / ((h - kp) * (h - k))
    pref_b = real_power(1 - kp / h, -ap)
    outer_parts, err, terms = [], 0.0, 0
    for m in range(outer_order + 1):
        coef = pochhammer(ap, m) * pochhammer(outer_upper, m) / (pochhammer(outer_lower, m) * math.factorial(m))
        coef *= _ratio_power(kp, kp - h, m)
        if coef == 0.0:
            continue
        if form == "F1":
            inner = _inner_f1(cp, m, z, tol)
        else:
            inner = _inner_2f1(cp, m, z, tol)
        outer_parts.append(coef * inner.value)
        err += abs(coef) * inner.abs_error_estimate
        terms += inner.terms_used
    total = math.fsum(outer_parts)
    err += 8 * EPS * sum(abs(v) for v in outer_parts)
    return EvaluationResult(total * pref_b, abs(pref_b) * err, max(terms, 1), "continuation")


def _inner_2f1(cp, m, z, tol):
    c, s, a, ap, k, h = cp.c, cp.s, cp.a, cp.a_prime, cp.k, cp.h
    pref_a = real_power(1 - k / h, -a)
    parts, err, terms = [], 0.0, 0
    for r in range(s + m + 1):
        coef = pochhammer(a, r) * pochhammer(-s - m, r) / (pochhammer(c, r) * math.factorial(r))
        coef *= _ratio_power(k, k - h, r)
        if coef == 0.0:
            continue
        inner = hyp2f1(a + r, ap + m, c + r, z, tol)
        parts.append(coef * inner.value)
        err += abs(coef) * inner.abs_error_estimate
        terms += inner.terms_used
    value = math.fsum(parts)
    err += 8 * EPS * sum(abs(v) for v in parts)
    return EvaluationResult(pref_a * value, abs(pref_a) * err, max(terms, 1), "series")


def _inner_f1_transformed(cp, m, z, tol):
    # F1(a; -s-m, m+a'; c; k/(k-h), z) with the (1-k/h)^(-a) prefactor
    c, s, a, ap, k, h = cp.c, cp.s, cp.a, cp.a_prime, cp.k, cp.h
    pref_a = real_power(1 - k / h, -a)
    inner = f1_series(F1Params(a, -s - m, m + ap, c, k / (k - h) if k != 0 else 0.0, z), tol)
    return inner.scaled(pref_a)


def f2_continuation_lemma6(cp: ContinuationParams, form: str = "2F1", tol: float = DEFAULT_TOL) -> EvaluationResult:
    """F2(c+s; a, a'; c, c-p; k/h, k'/h) as a finite combination of F1 or 2F1 values.

    ``form="F1"`` sums s+p+1 Appell F1 terms in (k/h, k/(h-k')); ``form="2F1"``
    is the nested finite sum of 2F1 values at kk'/((h-k)(h-k')).
    """
    if form not in ("F1", "2F1"):
        raise ValueError("form must be 'F1' or '2F1'")
    order = cp.s + cp.p
    if form == "2F1":
        return _continuation_core(cp, order, -order, cp.c - cp.p, "2F1", tol)
    cp.check_singular()
    c, s, p, a, ap, k, kp, h = cp.c, cp.s, cp.p, cp.a, cp.a_prime, cp.k, cp.k_prime, cp.h
    _check_denominator(c)
    _check_denominator(c - p)
    pref = real_power(1 - kp / h, -ap)
    parts, err, terms = [], 0.0, 0
    for m in range(order + 1):
        coef = pochhammer(ap, m) * pochhammer(-order, m) / (pochhammer(c - p, m) * math.factorial(m))
        coef *= _ratio_power(kp, kp - h, m)
        if coef == 0.0:
            continue
        inner = f1_series(F1Params(a, c + s - ap, m + ap, c, k / h, k / (h - kp)), tol)
        parts.append(coef * inner.value)
        err += abs(coef) * inner.abs_error_estimate
        terms += inner.terms_used
    value = math.fsum(parts)
    err += 8 * EPS * sum(abs(v) for v in parts)
    return EvaluationResult(pref * value, abs(pref) * err, max(terms, 1), "continuation")


def f2_continuation_lemma8(cp: ContinuationParams, form: str = "2F1", tol: float = DEFAULT_TOL) -> EvaluationResult:
    """F2(c+s; a, a'; c, c+p; k/h, k'/h) for integers s >= p >= 0.

    ``form`` is "F1" (outer sum of s-p+1 F1 values), "2F1" (nested 2F1 sum)
    or "s=p" (the single r-sum that both collapse to when s = p).
    """
    if cp.s < cp.p:
        raise ParameterError(f"Lemma 8 needs s >= p, got s={cp.s}, p={cp.p}")
    if form == "s=p":
        if cp.s != cp.p:
            raise ParameterError("the s=p form needs s == p")
        form = "2F1"
    if form not in ("F1", "2F1"):
        raise ValueError("form must be 'F1', '2F1' or 's=p'")
    order = cp.s - cp.p
    if form == "2F1":
        return _continuation_core(cp, order, -order, cp.c + cp.p, "2F1", tol)
    cp.check_singular()
    c, ap, k, kp, h = cp.c, cp.a_prime, cp.k, cp.k_prime, cp.h
    _check_denominator(c)
    _check_denominator(c + cp.p)
    z = k * kp / ((h - kp) * (h - k))
    pref = real_power(1 - kp / h, -ap)
    parts, err, terms = [], 0.0, 0
    for m in range(order + 1):
        coef = pochhammer(-order, m) * pochhammer(ap, m) / (pochhammer(c + cp.p, m) * math.factorial(m))
        coef *= _ratio_power(kp, kp - h, m)
        if coef == 0.0:
            continue
        inner = _inner_f1_transformed(cp, m, z, tol)
        parts.append(coef * inner.value)
        err += abs(coef) * inner.abs_error_estimate
        terms += inner.terms_used
    value = math.fsum(parts)
    err += 8 * EPS * sum(abs(v) for v in parts)
    return EvaluationResult(pref * value, abs(pref) * err, max(terms, 1), "continuation")


def f2_equal_params_lemma9(d: float, a: float, c: float, k: float, k_prime: float, h: float = 1.0,
                           tol: float = DEFAULT_TOL, form: str = "auto") -> EvaluationResult:
    """F2(d; a, a; c, c; k/h, k'/h) via the product formula for 1F1 pairs.

    ``form="sum"`` is the r-series of 2F1 values at (k+k')/h; ``form="4F3"``
    needs k' = -k and evaluates the single 4F3 at k^2/h^2; ``"auto"`` picks
    the 4F3 whenever k' = -k.
    """
    if not h > 0:
        raise DomainError("h must be positive")
    _check_denominator(c)
    if not abs(k) + abs(k_prime) < abs(h):
        raise DivergenceError("needs |k| + |k'| < |h|")
    antisym = _close(k_prime, -k, 1e-15)
    if form == "auto":
        form = "4F3" if antisym else "sum"
    if form == "4F3":
        if not antisym:
            raise ParameterError("the 4F3 form needs k' = -k")
        return pfq((a, c - a, d / 2, (d + 1) / 2), (c, c / 2, (c + 1) / 2), (k / h) ** 2, tol).retag("continuation")
    if form != "sum":
        raise ValueError("form must be 'auto', 'sum' or '4F3'")
    u = -k * k_prime / h**2
    v = (k + k_prime) / h
    # term ratio tends to u / (1 - v), which |k| + |k'| < |h| alone does not bound
    if abs(u) >= abs(1.0 - v):
        raise DivergenceError("the r-series needs |k k'| < h |h - k - k'|")
    coef = 1.0
    parts, err, terms = [], 0.0, 0
    running = 0.0
    small = 0
    prev_abs = None
    for r in range(MAX_TERMS):
        if r:
            j = r - 1
            coef *= (a + j) * (c - a + j) * (d + 2 * j) * (d + 2 * j + 1)
            coef /= (c + j) * (c + 2 * j) * (c + 2 * j + 1) * r
            coef *= u
        if coef == 0.0:
            break
        inner = hyp2f1(d + 2 * r, a + r, c + 2 * r, v, tol)
        term = coef * inner.value
        parts.append(term)
        err += abs(coef) * inner.abs_error_estimate
        terms += inner.terms_used
        running += term
        if abs(term) <= tol * abs(running):
            small += 1
        else:
            small = 0
        if small >= 2 and prev_abs:
            ratio = abs(term) / prev_abs
            if ratio < 1.0 and abs(term) * ratio / (1 - ratio) <= tol * abs(running):
                break
        prev_abs = abs(term)
    else:
        raise ConvergenceError("Lemma 9 series did not converge")
    value = math.fsum(parts)
    err += 8 * EPS * sum(abs(t) for t in parts)
    return EvaluationResult(value, err, max(terms, 1), "continuation")


# ---------------------------------------------------------------------------
# dispatcher


def _semi_terminating(p: F2Params, tol: float) -> EvaluationResult:
    """One numerator terminates: sum_m (d)_m (a)_m x^m/((b)_m m!) 2F1(d+m, a'; b'; y)."""
    if terminating_order(p.a) is None:
        p = p.swapped()
    d, a, ap, b, bp, x, y = p.as_tuple()
    n = terminating_order(a)
    parts, err, terms = [], 0.0, 0
    coef = 1.0
    for m in range(n + 1):
        if m:
            coef *= (d + m - 1) * (a + m - 1) / ((b + m - 1) * m) * x
        if coef == 0.0:
            break
        inner = hyp2f1(d + m, ap, bp, y, tol)
        parts.append(coef * inner.value)
        err += abs(coef) * inner.abs_error_estimate
        terms += inner.terms_used
    value = math.fsum(parts)
    err += 8 * EPS * sum(abs(v) for v in parts)
    return EvaluationResult(value, err, max(terms, 1), "series")


def _continuation_candidates(p: F2Params):
    out = []
    for q, label in ((p, ""), (p.swapped(), " (swapped)")):
        d, a, ap, b, bp, x, y = q.as_tuple()
        s = _integer_offset(d - b)
        off = _integer_offset(b - bp)
        if s is not None and s >= 0 and off is not None:
            if off >= 0:
                cp = ContinuationParams(b, s, off, a, ap, x, y, 1.0)
                out.append(("lemma6" + label, lambda cp=cp: f2_continuation_lemma6(cp, "2F1")))
            if off <= 0 and s >= -off:
                cp = ContinuationParams(b, s, -off, a, ap, x, y, 1.0)
                out.append(("lemma8" + label, lambda cp=cp: f2_continuation_lemma8(cp, "2F1")))
    if _close(p.a, p.a_prime) and _close(p.b, p.b_prime):
        out.append(("lemma9", lambda: f2_equal_params_lemma9(p.d, p.a, p.b, p.x, p.y, 1.0)))
    return out


def f2_eval(p: F2Params, tol: float = DEFAULT_TOL) -> EvaluationResult:
    """Evaluate F2 by the first applicable strategy.

    Order: reductions; direct series for |x|+|y| <= 0.9; terminating double
    sum; single-terminating sum; continuation families; direct series for
    0.9 < |x|+|y| < 1.
    """
    attempts = []
    try:
        res = f2_reduce(p)
        if res is not None:
            return res
        attempts.append("reduction: no pattern")
    except HypergeometricError as exc:
        attempts.append(f"reduction: {exc}")
    radius = abs(p.x) + abs(p.y)
    if radius <= SERIES_RADIUS:
        return f2_series(p, tol)
    attempts.append(f"series: |x|+|y| = {radius:.6g} > {SERIES_RADIUS}")
    if p.terminating:
        return f2_series(p, tol)
    if terminating_order(p.a) is not None or terminating_order(p.a_prime) is not None:
        try:
            return _semi_terminating(p, tol)
        except HypergeometricError as exc:
            attempts.append(f"single-terminating sum: {exc}")
    for name, thunk in _continuation_candidates(p):
        try:
            return thunk()
        except HypergeometricError as exc:
            attempts.append(f"{name}: {exc}")
    if radius < 1.0:
        return f2_series(p, tol)
    raise NoStrategyError(
        f"no applicable F2 strategy for {p.as_tuple()}; tried: " + "; ".join(attempts), attempts
    )


# ---------------------------------------------------------------------------
# recurrences

RECURRENCES = ("R3.17", "R3.18", "R3.19", "R3.20", "R3.21", "R3.22", "R3.23")


def _combo(pairs: Iterable[tuple[float, F2Params]], tol) -> tuple[list[float], str]:
    vals = []
    methods = set()
    for coef, q in pairs:
        if coef == 0.0:
            continue
        r = f2_eval(q, tol)
        vals.append(coef * r.value)
        methods.add(r.method)
    return vals, "+".join(sorted(methods)) or "closed_form"


def _sides_317(p, tol):
    d, a, ap, b, bp, x, y = p.as_tuple()
    lhs = x * (d - 1) * f2_eval(p, tol).value
    rhs, m = _combo(
        [
            (a - b, p.with_(d=d - 1, a=a - 1)),
            (b - 2 * a, p.with_(d=d - 1)),
            (a, p.with_(d=d - 1, a=a + 1)),
        ],
        tol,
    )
    return lhs, rhs, m


def _sides_320(p, tol):
    d, a, ap, b, bp, x, y = p.as_tuple()
    if not (_close(b, bp) and _close(d, b + 1)):
        raise ParameterError("R3.20 needs b = b' and d = b + 1")
    lhs = b * x * f2_eval(p, tol).value
    z = x * y / ((1 - x) * (1 - y))
    py = real_power(1 - y, -ap)
    rhs = [
        (a - b) * real_power(1 - x, -a + 1) * py * hyp2f1(a - 1, ap, b, z, tol).value,
        (b - 2 * a) * real_power(1 - x, -a) * py * hyp2f1(a, ap, b, z, tol).value,
        a * real_power(1 - x, -a - 1) * py * hyp2f1(a + 1, ap, b, z, tol).value,
    ]
    return lhs, rhs, "closed_form"


def _sides_321(p, tol):
    d, a, ap, b, bp, x, y = p.as_tuple()
    lhs = x * (d - 1) / b * f2_eval(p.with_(b=b + 1, b_prime=bp + 1), tol).value
    rhs, m = _combo(
        [
            (1.0, p.with_(d=d - 1, b_prime=bp + 1)),
            (-1.0, p.with_(d=d - 1, a=a - 1, b_prime=bp + 1)),
        ],
        tol,
    )
    return lhs, rhs, m


def _sides_322(p, tol):
    d, a, ap, b, bp, x, y = p.as_tuple()
    lhs = (a + 1 - b) * f2_eval(p, tol).value
    rhs, m = _combo([(a, p.with_(a=a + 1)), (-(b - 1), p.with_(b=b - 1))], tol)
    return lhs, rhs, m


def _sides_323(p, tol):
    d, a, ap, b, bp, x, y = p.as_tuple()
    if x == 0.0:
        raise DomainError("R3.23 divides by x")
    lhs = f2_eval(p, tol).value
    f = (b - 1) / (x * (d - 1))
    rhs, m = _combo(
        [
            (f, p.with_(d=d - 1, b=b - 1)),
            (-f, p.with_(d=d - 1)),
            ((b - a) / b, p.with_(b=b + 1)),
        ],
        tol,
    )
    return lhs, rhs, m


def f2_recurrence_residual(identity: str, p: F2Params, tol: float = DEFAULT_TOL) -> IdentityReport:
    """Evaluate both sides of one contiguous relation for F2 independently.

    R3.17 is the d-lowering relation in a; R3.18 and R3.19 are its d = b'+s
    and d = b'+1 specialisations; R3.20 closes R3.19 for b = b' through the
    d = b = b' reduction; R3.21-R3.23 are the b-contiguous relations.
    """
    d, bp = p.d, p.b_prime
    if identity in ("R3.17", "R3.18", "R3.19"):
        if identity == "R3.18":
            s = _integer_offset(d - bp)
            if s is None or s < 1:
                raise ParameterError("R3.18 needs d = b' + s with s a positive integer")
        if identity == "R3.19" and not _close(d, bp + 1):
            raise ParameterError("R3.19 needs d = b' + 1")
        sides = _sides_317
    else:
        sides = {
            "R3.20": _sides_320,
            "R3.21": _sides_321,
            "R3.22": _sides_322,
            "R3.23": _sides_323,
        }.get(identity)
        if sides is None:
            raise ValueError(f"unknown recurrence {identity!r}")
    lhs, rhs_terms, rhs_method = sides(p, tol)
    # put the largest term alone on the left: a vanishing coefficient (a+1 = b
    # in R3.22, say) would otherwise leave 0 = 0 and an undefined relative residual
    terms = [lhs] + [-t for t in rhs_terms]
    j = max(range(len(terms)), key=lambda i: abs(terms[i]))
    lhs = terms[j]
    rhs = -math.fsum(terms[:j] + terms[j + 1:])
    return IdentityReport.compare(identity, lhs, rhs, "f2_eval", rhs_method, dict(zip(
        ("d", "a", "a_prime", "b", "b_prime", "x", "y"), p.as_tuple())))
