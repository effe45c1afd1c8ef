"""Independent verification backends.

Double-exponential quadrature on (0, inf) and a slow brute-force F2 sum with
a rigorous tail bound.  Nothing here calls the fast paths in ``appell``;
only ``ln_gamma`` and the termination test are shared with ``special_core``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError
from .special_core import ln_gamma, terminating_order

EPS = np.finfo(float).eps
TANH_SINH_SPAN = 6.0
EXP_SINH_SPAN = 4.5
MAX_LEVEL = 12


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool


def _as_vector(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def g(t: np.ndarray) -> np.ndarray:
        try:
            out = np.asarray(f(t), dtype=float)
            if out.shape == t.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([float(f(float(v))) for v in t])

    return g


def _abscissae(span: float, h: float, level: int) -> np.ndarray:
    """Points j*h in [-span, span]; odd j only on refinement levels."""
    j = np.arange(-int(span / h), int(span / h) + 1)
    if level > 0:
        j = j[j % 2 != 0]
    return j * h


def _tanh_sinh_nodes(T: float, s: np.ndarray):
    u = 0.5 * np.pi * np.sinh(s)
    x = T / (1.0 + np.exp(-2.0 * u))
    w = T * 0.5 * np.pi * np.cosh(s) / (2.0 * np.cosh(u) ** 2)
    keep = (x > 0) & (x < T) & (w > 0) & np.isfinite(w)
    return x[keep], w[keep]


def _exp_sinh_nodes(T: float, s: np.ndarray):
    e = np.exp(0.5 * np.pi * np.sinh(s))
    x = T + e
    w = e * 0.5 * np.pi * np.cosh(s)
    keep = np.isfinite(x) & np.isfinite(w)
    return x[keep], w[keep]


def integrate_semiinfinite(f: Callable, tol: float = 1e-12, scale: float | None = None,
                           max_evaluations: int = 10**7) -> QuadratureResult:
    """Integrate f over (0, inf).

    The half-line is split at T = ``scale`` (default 1).  (0, T] uses the
    tanh-sinh rule, which tolerates integrable endpoint singularities such as
    t^(d-1) with d < 1; [T, inf) uses exp-sinh.  The step is halved (reusing
    earlier nodes) until two successive levels agree.
    """
    T = 1.0 if scale is None else float(scale)
    if not T > 0:
        raise DomainError("split point must be positive")
    g = _as_vector(f)
    rules = ((_tanh_sinh_nodes, TANH_SINH_SPAN), (_exp_sinh_nodes, EXP_SINH_SPAN))
    evals = 0
    sums = [0.0, 0.0]
    abs_sums = [0.0, 0.0]
    previous = None
    last_diff = None
    for level in range(MAX_LEVEL + 1):
        h = 0.5 / 2**level
        for k, (nodes, span) in enumerate(rules):
            x, w = nodes(T, _abscissae(span, h, level))
            fx = g(x)
            evals += x.size
            if not np.all(np.isfinite(fx)):
                raise ConvergenceError("integrand returned a non-finite value")
            contrib = h * w * fx
            # trapezoid refinement: halve the old sum, add the new odd nodes
            scale0 = 0.0 if level == 0 else 0.5
            sums[k] = scale0 * sums[k] + math.fsum(contrib)
            abs_sums[k] = scale0 * abs_sums[k] + float(np.abs(contrib).sum())
        value = sums[0] + sums[1]
        total_abs = abs_sums[0] + abs_sums[1]
        if previous is not None:
            diff = abs(value - previous)
            floor = 64 * EPS * total_abs
            within = diff <= tol * max(1.0, abs(value))
            # the error of a double-exponential rule squares each level; once
            # the difference stops shrinking it is rounding noise
            stalled = last_diff is not None and diff >= 0.5 * last_diff
            if diff <= tol * abs(value) or (within and (diff <= floor or stalled)):
                return QuadratureResult(value, max(diff, floor), evals, True)
            last_diff = diff
        if evals > max_evaluations:
            break
        previous = value
    raise ConvergenceError(f"quadrature did not reach tol={tol:g} (last level difference {last_diff:.3g})")


# ---------------------------------------------------------------------------
# brute-force F2


def f2_bruteforce(p, target_digits: int = 14) -> float:
    """Rectangle partial sum of F2 with a rigorous geometric tail bound.

    Rows are built by the exact term recurrences and added with math.fsum.
    The side N doubles until the bound on sum_{t>N} |(d)_t| rho^t (|x|+|y|)^t / t!
    drops below 10^-digits of the partial sum.
    """
    d, a, ap, b, bp, x, y = p.d, p.a, p.a_prime, p.b, p.b_prime, p.x, p.y
    if x == 0.0 and y == 0.0:
        return 1.0
    na, nap = terminating_order(a), terminating_order(ap)
    rate = abs(x) + abs(y)
    finite = na is not None and nap is not None
    if not finite and rate > 0.95:
        raise DomainError("brute force needs |x|+|y| <= 0.95 or a terminating series")
    N = 32
    while True:
        M1 = N if na is None else min(N, na)
        M2 = N if nap is None else min(N, nap)
        S = _rectangle(d, a, ap, b, bp, x, y, M1, M2)
        if finite and M1 == na and M2 == nap:
            return S
        bound = _tail_bound(d, a, ap, b, bp, rate, N)
        if bound <= 10.0 ** (-target_digits) * abs(S):
            return S
        if N > 20000:
            raise ConvergenceError("brute-force F2 did not reach the requested digits")
        N *= 2


def _rectangle(d, a, ap, b, bp, x, y, M1, M2) -> float:
    terms = []
    col = 1.0  # T(m, 0)
    for m in range(M1 + 1):
        if m:
            col *= (d + m - 1) * (a + m - 1) / ((b + m - 1) * m) * x
        row = np.empty(M2 + 1)
        row[0] = col
        n = np.arange(M2)
        ratios = (d + m + n) * (ap + n) / ((bp + n) * (n + 1)) * y
        row[1:] = col * np.cumprod(ratios)
        terms.append(row)
        if col == 0.0 and m > 0:
            break
    return math.fsum(np.concatenate(terms))


def _tail_bound(d, a, ap, b, bp, rate, N) -> float:
    """Bound on sum_{t>N} sum_{m+n=t} |T(m, n)|.

    With rho(t) = max_{m<=t} |(a)_m/(b)_m| (and likewise for a', b') each
    diagonal is at most rho rho' |(d)_t|/t! (|x|+|y|)^t by the binomial
    theorem.  The remainder beyond the last explicit diagonal is closed by a
    geometric series once the term ratio bound is below 1 and decreasing.
    """
    if rate == 0.0:
        return 0.0
    pa = pap = 1.0  # |(a)_t/(b)_t|, |(a')_t/(b')_t|
    ra = rap = 1.0  # running maxima
    log_dt = 0.0  # log of |(d)_t| rate^t / t!
    total = 0.0
    big = max(abs(d), abs(a), abs(ap), abs(b), abs(bp)) + 2
    for t in range(0, N + 10**6):
        if t > 0:
            log_dt += math.log(abs(d + t - 1) or 1e-300) - math.log(t) + math.log(rate)
            pa *= abs(a + t - 1) / abs(b + t - 1)
            pap *= abs(ap + t - 1) / abs(bp + t - 1)
            ra, rap = max(ra, pa), max(rap, pap)
        if t <= N:
            continue
        term = ra * rap * math.exp(log_dt)
        total += term
        if t > big:
            q = abs(d + t) / (t + 1) * rate
            q *= max(1.0, abs(a + t) / abs(b + t)) * max(1.0, abs(ap + t) / abs(bp + t))
            if q < 1.0 and term * q / (1 - q) <= 1e-3 * total:
                return total + term * q / (1 - q)
    return math.inf


# ---------------------------------------------------------------------------
# vectorised single-variable series, used to build integrands


def pfq_array(upper, lower, z: np.ndarray, max_terms: int = 20000, rtol: float = 1e-17) -> np.ndarray:
    """Elementwise pFq for array arguments (plain series, compensated sum)."""
    z = np.asarray(z, dtype=float)
    term = np.ones_like(z)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    order = None
    for a in upper:
        n = terminating_order(a)
        if n is not None:
            order = n if order is None else min(order, n)
    for j in range(max_terms):
        if order is not None and j >= order:
            break
        num = 1.0
        for a in upper:
            num *= a + j
        den = float(j + 1)
        for b in lower:
            den *= b + j
        term = term * (num / den) * z
        # Neumaier update
        t = total + term
        big = np.abs(total) >= np.abs(term)
        comp += np.where(big, (total - t) + term, (term - t) + total)
        total = t
        if order is None and np.all(np.abs(term) <= rtol * np.abs(total)) and j > 2:
            break
    else:
        if order is None:
            raise ConvergenceError("array series did not converge")
    return total + comp


def hyp1f1_array(a: float, b: float, z) -> np.ndarray:
    """1F1 on an array, Kummer-transformed for negative arguments."""
    z = np.asarray(z, dtype=float)
    if terminating_order(a) is not None:
        return pfq_array([a], [b], z)
    out = np.empty_like(z)
    neg = z < 0
    if np.any(~neg):
        out[~neg] = pfq_array([a], [b], z[~neg])
    if np.any(neg):
        zn = z[neg]
        out[neg] = np.exp(zn) * pfq_array([b - a], [b], -zn)
    return out


def gamma_integral(d: float, h: float) -> float:
    """Γ(d) h^-d, the reference value for t^(d-1) e^(-ht)."""
    lg, sign = ln_gamma(d)
    return sign * math.exp(lg - d * math.log(h))
