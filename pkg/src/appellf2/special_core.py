"""Scalar special-function primitives.

Log-gamma with sign, Pochhammer symbols and single-variable generalized
hypergeometric series (pFq, 1F1, 2F1) restricted to real parameters and
arguments.  Every series evaluator returns an :class:`EvaluationResult`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    ConvergenceError,
    DivergenceError,
    ParameterError,
    PoleError,
)

DEFAULT_TOL = 1e-12
MAX_TERMS = 100_000
POLE_TOL = 1e-10
EPS = 2.220446049250313e-16

METHODS = ("series", "reduction", "continuation", "quadrature", "closed_form")


@dataclass(frozen=True)
class EvaluationResult:
    value: float
    abs_error_estimate: float
    terms_used: int
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not self.abs_error_estimate >= 0.0:
            raise ValueError("abs_error_estimate must be nonnegative")
        if self.terms_used < 0:
            raise ValueError("terms_used must be nonnegative")

    def retag(self, method: str) -> "EvaluationResult":
        return EvaluationResult(self.value, self.abs_error_estimate, self.terms_used, method)

    def scaled(self, factor: float, method: str | None = None) -> "EvaluationResult":
        return EvaluationResult(
            self.value * factor,
            abs(factor) * self.abs_error_estimate + EPS * abs(self.value * factor),
            self.terms_used,
            method or self.method,
        )


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of one identity instance plus residuals."""

    identity_id: str
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    lhs_method: str
    rhs_method: str
    params: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, identity_id, lhs, rhs, lhs_method, rhs_method, params=None):
        diff = abs(lhs - rhs)
        rel = diff / max(abs(lhs), abs(rhs), 1e-300)
        return cls(identity_id, float(lhs), float(rhs), diff, rel, lhs_method, rhs_method, dict(params or {}))

    def passes(self, tol: float) -> bool:
        return self.rel_residual <= tol

    def as_dict(self) -> dict:
        return {
            "identity": self.identity_id,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "lhs_method": self.lhs_method,
            "rhs_method": self.rhs_method,
        }


def nonpositive_integer(x: float, atol: float = POLE_TOL) -> int | None:
    """Return n if x lies within ``atol`` of -n (n = 0, 1, 2, ...), else None."""
    if x > atol:
        return None
    n = round(-x)
    if abs(x + n) <= atol:
        return int(n)
    return None


def terminating_order(x: float) -> int | None:
    """Order at which (x)_j vanishes for good: n when x == -n exactly (to 1e-12)."""
    return nonpositive_integer(x, atol=1e-12)


def _check_denominator(beta: float, allowed_order: int | None = None) -> None:
    n = nonpositive_integer(beta)
    if n is None:
        return
    # a lower parameter -L is harmless when the series stops at order <= L
    if allowed_order is not None and allowed_order <= n:
        return
    raise ParameterError(f"denominator parameter {beta!r} is (near) the nonpositive integer {-n}")


def ln_gamma(x: float) -> tuple[float, int]:
    """Return ``(ln|Γ(x)|, sign Γ(x))``.

    Backed by ``math.lgamma``; poles at nonpositive integers raise PoleError.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0:
        return math.lgamma(x), 1
    sign = -1 if int(math.floor(x)) % 2 else 1
    return math.lgamma(x), sign


def gamma(x: float) -> float:
    lg, sg = ln_gamma(x)
    return sg * math.exp(lg)


def rgamma(x: float) -> float:
    """Reciprocal gamma, zero at the poles."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    lg, sg = ln_gamma(x)
    return sg * math.exp(-lg)


def gamma_ratio(numer: Sequence[float], denom: Sequence[float]) -> float:
    """Π Γ(numer) / Π Γ(denom); a pole in ``denom`` gives 0."""
    log_total = 0.0
    sign = 1
    for x in denom:
        if x <= 0 and x == math.floor(x):
            return 0.0
        lg, sg = ln_gamma(x)
        log_total -= lg
        sign *= sg
    for x in numer:
        lg, sg = ln_gamma(x)
        log_total += lg
        sign *= sg
    return sign * math.exp(log_total)


def pochhammer(delta: float, m: int) -> float:
    """Rising factorial (δ)_m = δ(δ+1)...(δ+m-1), with (δ)_0 = 1."""
    if m < 0:
        raise ValueError("pochhammer order must be nonnegative")
    out = 1.0
    for j in range(m):
        out *= delta + j
        if out == 0.0:
            break
    return out


def real_power(base: float, expo: float) -> float:
    """base**expo on the real line; raises if the result would be complex."""
    if base > 0:
        return base**expo
    n = round(expo)
    if abs(expo - n) <= 1e-12:
        if base == 0 and n < 0:
            raise DivergenceError("zero base raised to a negative power")
        return base ** int(n)
    if base == 0 and expo > 0:
        return 0.0
    raise DivergenceError(f"({base!r})**{expo!r} has no real branch")


@dataclass(frozen=True)
class PfqParams:
    upper: tuple[float, ...]
    lower: tuple[float, ...]
    argument: float

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(float(b) for b in self.lower))
        order = self.termination()
        for beta in self.lower:
            _check_denominator(beta, order)

    def termination(self) -> int | None:
        orders = [n for n in map(terminating_order, self.upper) if n is not None]
        return min(orders) if orders else None


def _terms_sum(terms: list[float]) -> tuple[float, float]:
    total = math.fsum(terms)
    err = 4 * EPS * math.fsum(abs(t) for t in terms)
    return total, err


def pfq(
    upper: Sequence[float],
    lower: Sequence[float],
    x: float,
    tol: float = DEFAULT_TOL,
    max_terms: int = MAX_TERMS,
) -> EvaluationResult:
    """Generalized hypergeometric series pFq(upper; lower; x).

    Terminating series (an upper parameter equal to -n) are summed exactly
    over their n+1 terms for any x.  Otherwise the argument must lie in the
    convergence domain: any x for p <= q, |x| < 1 for p = q + 1, and x = 1
    when sum(lower) - sum(upper) > 0.
    """
    params = PfqParams(tuple(upper), tuple(lower), float(x))
    ups, lows, x = params.upper, params.lower, params.argument
    p, q = len(ups), len(lows)
    order = params.termination()

    if order is not None:
        terms = [1.0]
        term = 1.0
        for j in range(order):
            num = x
            for a in ups:
                num *= a + j
            den = float(j + 1)
            for b in lows:
                den *= b + j
            term *= num / den
            terms.append(term)
        value, err = _terms_sum(terms)
        return EvaluationResult(value, err, len(terms), "series")

    if x == 0.0:
        return EvaluationResult(1.0, 0.0, 1, "series")
    if p > q + 1:
        raise DivergenceError(f"{p}F{q} series diverges for nonzero argument {x!r}")
    if p == q + 1:
        if abs(x) > 1.0:
            raise DivergenceError(f"{p}F{q} series diverges for |x| = {abs(x)!r} > 1")
        if abs(x) == 1.0 and not sum(lows) - sum(ups) > 0:
            raise DivergenceError(
                f"{p}F{q} at x={x!r} needs sum(lower) - sum(upper) > 0"
            )
    limit_ratio = abs(x) if p == q + 1 else 0.0
    # terms can shrink and then regrow while a parameter + j is still
    # negative, so no stopping test until every factor is positive
    first_stop = max([0.0] + [-v for v in ups + lows])

    total = 1.0
    comp = 0.0
    term = 1.0
    abs_sum = 1.0
    small_run = 0
    for j in range(max_terms):
        num = x
        for a in ups:
            num *= a + j
        den = float(j + 1)
        for b in lows:
            den *= b + j
        prev = term
        term = term * num / den
        # Neumaier compensated accumulation
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        abs_sum += abs(term)
        s = abs(total + comp)
        if abs(term) <= tol * s:
            small_run += 1
        else:
            small_run = 0
        if j < first_stop:
            continue
        if small_run >= 2 and prev != 0.0:
            ratio = max(abs(term / prev), limit_ratio)
            if ratio < 1.0:
                tail = abs(term) * ratio / (1.0 - ratio)
                if tail <= tol * s:
                    err = tail + 4 * EPS * abs_sum
                    return EvaluationResult(total + comp, err, j + 2, "series")
        elif small_run >= 2 and term == 0.0:
            return EvaluationResult(total + comp, 4 * EPS * abs_sum, j + 2, "series")
    raise ConvergenceError(f"{p}F{q} did not converge within {max_terms} terms at x={x!r}")


def hyp1f1(a: float, b: float, x: float, tol: float = DEFAULT_TOL) -> EvaluationResult:
    """Kummer's confluent function 1F1(a; b; x).

    Negative arguments of non-terminating series go through Kummer's
    transformation e^x 1F1(b-a; b; -x) to avoid alternating cancellation.
    """
    _check_denominator(b, terminating_order(a))
    if terminating_order(a) is not None or x >= 0:
        return pfq((a,), (b,), x, tol)
    inner = pfq((b - a,), (b,), -x, tol)
    return inner.scaled(math.exp(x))


def _gauss_sum(a: float, b: float, c: float) -> EvaluationResult:
    if not c - a - b > 0:
        raise PoleError(f"2F1({a}, {b}; {c}; 1) diverges: c - a - b = {c - a - b} <= 0")
    value = gamma_ratio((c, c - a - b), (c - a, c - b))
    return EvaluationResult(value, 16 * EPS * abs(value), 1, "closed_form")


def hyp2f1(a: float, b: float, c: float, x: float, tol: float = DEFAULT_TOL) -> EvaluationResult:
    """Gauss hypergeometric function 2F1(a, b; c; x) for real x < 1 (and x = 1).

    Direct series on [0, 1/2); Pfaff's transformation maps x < 0 onto
    [0, 1); on [1/2, 1) the 1 - x connection formula is used unless c - a - b
    is (nearly) an integer, in which case the slower direct series is summed.
    Terminating series are summed exactly for any x.
    """
    a, b, c, x = float(a), float(b), float(c), float(x)
    order = min(
        (n for n in (terminating_order(a), terminating_order(b)) if n is not None),
        default=None,
    )
    _check_denominator(c, order)
    if order is not None:
        return pfq((a, b), (c,), x, tol)
    if x == 0.0:
        return EvaluationResult(1.0, 0.0, 1, "series")
    if x == 1.0:
        return _gauss_sum(a, b, c)
    if x > 1.0:
        raise DivergenceError(f"2F1 argument {x!r} > 1 lies on the branch cut")
    # Euler: a terminating partner makes the series finite for every x < 1
    euler_order = [n for n in (terminating_order(c - a), terminating_order(c - b)) if n is not None]
    if euler_order:
        inner = pfq((c - a, c - b), (c,), x, tol)
        return inner.scaled((1.0 - x) ** (c - a - b))
    if x < 0.0:
        z = x / (x - 1.0)
        inner = _hyp2f1_unit(a, c - b, c, z, tol)
        return inner.scaled((1.0 - x) ** (-a))
    return _hyp2f1_unit(a, b, c, x, tol)


def _hyp2f1_unit(a, b, c, x, tol):
    """2F1 for 0 <= x < 1, non-terminating."""
    if x < 0.5:
        return pfq((a, b), (c,), x, tol)
    delta = c - a - b
    if abs(delta - round(delta)) < 1e-4:
        return pfq((a, b), (c,), x, tol)
    w = 1.0 - x
    coef1 = gamma_ratio((c, delta), (c - a, c - b))
    coef2 = gamma_ratio((c, -delta), (a, b))
    parts = []
    err = 0.0
    terms = 0
    if coef1 != 0.0:
        f1 = pfq((a, b), (a + b - c + 1.0,), w, tol)
        parts.append(coef1 * f1.value)
        err += abs(coef1) * f1.abs_error_estimate
        terms += f1.terms_used
    if coef2 != 0.0:
        f2 = pfq((c - a, c - b), (delta + 1.0,), w, tol)
        scale = coef2 * w**delta
        parts.append(scale * f2.value)
        err += abs(scale) * f2.abs_error_estimate
        terms += f2.terms_used
    value = math.fsum(parts)
    err += 8 * EPS * sum(abs(v) for v in parts)
    connected = EvaluationResult(value, err, max(terms, 1), "series")
    if err <= tol * abs(value):
        return connected
    # large parameters make the two connection terms cancel; the direct
    # series still converges for x < 1, so keep whichever is more accurate
    try:
        direct = pfq((a, b), (c,), x, tol)
    except ArithmeticError:
        return connected
    return direct if direct.abs_error_estimate < err else connected
