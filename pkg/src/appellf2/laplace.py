"""Laplace-type integrals of confluent hypergeometric functions.

    I(d, h) = int_0^inf t^(d-1) e^(-h t) 1F1(a; b; k t) 1F1(a'; b'; k' t) dt
            = h^(-d) Gamma(d) F2(d; a, a'; b, b'; k/h, k'/h)

plus the single-factor transform, the Landau-Lifshitz integrals J and a
catalog of elementary closed forms, each paired with an integrand so the
quadrature oracle can check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .appell import ContinuationParams, F2Params, f2_continuation_lemma6, f2_eval
from .errors import DivergenceError, DomainError, HypergeometricError, ParameterError
from .oracle import hyp1f1_array, integrate_semiinfinite, pfq_array
from .special_core import (
    DEFAULT_TOL,
    EPS,
    EvaluationResult,
    IdentityReport,
    _check_denominator,
    gamma,
    hyp1f1,
    hyp2f1,
    ln_gamma,
    pfq,
    pochhammer,
    real_power,
    rgamma,
    terminating_order,
)

# e^-x underflows to subnormals past ~708
EXP_CUTOFF = 700.0
QUAD_TOL = 1e-12


@dataclass(frozen=True)
class LaplaceProductSpec:
    """Weight t^(d-1) e^(-h t) and up to two 1F1 triples (a, b, k)."""

    d: float
    h: float
    a: float
    b: float
    k: float
    a_prime: float | None = None
    b_prime: float | None = None
    k_prime: float | None = None

    def __post_init__(self):
        if not self.d > 0:
            raise DomainError(f"need d > 0, got d={self.d!r}")
        if not self.h > 0:
            raise DomainError(f"need h > 0, got h={self.h!r}")
        second = [v is None for v in (self.a_prime, self.b_prime, self.k_prime)]
        if any(second) and not all(second):
            raise ParameterError("second triple must be given completely or not at all")
        terminating = self.terminating
        if not terminating and not abs(self.k) + abs(self.kp) < self.h:
            raise DomainError(
                f"integral diverges: need |k|+|k'| < h, got |k|+|k'| = {abs(self.k) + abs(self.kp):g}, h = {self.h:g}"
            )

    @property
    def single(self) -> bool:
        return self.a_prime is None

    @property
    def kp(self) -> float:
        return 0.0 if self.single else float(self.k_prime)

    @property
    def terminating(self) -> bool:
        ok = terminating_order(self.a) is not None or self.k == 0
        if not self.single:
            ok = ok and (terminating_order(self.a_prime) is not None or self.kp == 0)
        return ok

    def f2_params(self) -> F2Params:
        if self.single:
            return F2Params(self.d, self.a, 0.0, self.b, 1.0, self.k / self.h, 0.0)
        return F2Params(self.d, self.a, self.a_prime, self.b, self.b_prime, self.k / self.h, self.kp / self.h)

    def integrand(self) -> Callable[[np.ndarray], np.ndarray]:
        factors = [(self.a, self.b, self.k)]
        if not self.single:
            factors.append((self.a_prime, self.b_prime, self.kp))
        return weighted_integrand(self.d, self.h, factors)

    def quad_scale(self) -> float:
        return max(1.0, self.d) / self.h


def weighted_integrand(d: float, h: float, factors, extra: Callable | None = None):
    """t^(d-1) e^(-h t) prod 1F1(a; b; k t) as a vectorised callable.

    Terminating factors are evaluated as explicit polynomials.  Points where
    h t exceeds the exponent cutoff contribute zero.
    """

    def f(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        live = h * t < EXP_CUTOFF
        tl = t[live]
        val = np.exp((d - 1) * np.log(tl) - h * tl)
        for a, b, k in factors:
            if k == 0.0 or a == 0.0:
                continue
            val = val * hyp1f1_array(a, b, k * tl)
        if extra is not None:
            val = val * extra(tl)
        out[live] = val
        return out

    return f


def laplace_product(spec: LaplaceProductSpec, tol: float = DEFAULT_TOL) -> EvaluationResult:
    """h^(-d) Gamma(d) F2(d; a, a'; b, b'; k/h, k'/h)."""
    r = f2_eval(spec.f2_params(), tol)
    return r.scaled(_gamma_weight(spec.d, spec.h))


def laplace_single(d: float, h: float, a: float, b: float, k: float, tol: float = DEFAULT_TOL) -> EvaluationResult:
    """int t^(d-1) e^(-ht) 1F1(a; b; kt) dt = h^(-d) Gamma(d) 2F1(d, a; b; k/h)."""
    if not d > 0 or not h > 0:
        raise DomainError("need d > 0 and h > 0")
    if terminating_order(a) is None and not abs(k) < h:
        raise DomainError(f"integral diverges: need |k| < h, got k={k:g}, h={h:g}")
    r = hyp2f1(d, a, b, k / h, tol)
    return r.scaled(_gamma_weight(d, h))


def _gamma_weight(d: float, h: float) -> float:
    lg, sign = ln_gamma(d)
    return sign * math.exp(lg - d * math.log(h))


def quadrature_check(spec: LaplaceProductSpec, tol: float = QUAD_TOL):
    return integrate_semiinfinite(spec.integrand(), tol, scale=spec.quad_scale())


# ---------------------------------------------------------------------------
# Landau-Lifshitz integrals


@dataclass(frozen=True)
class JspParams:
    """J = int t^(gamma-1+s) e^(-ht) 1F1(a; gamma; kt) 1F1(a'; gamma-p; k't) dt."""

    gamma: float
    s: int
    p: int
    a: float
    a_prime: float
    k: float
    k_prime: float
    h: float

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 0 or int(self.p) != self.p or self.p < 0:
            raise ParameterError("s and p must be nonnegative integers")
        object.__setattr__(self, "s", int(self.s))
        object.__setattr__(self, "p", int(self.p))
        if not self.h > 0:
            raise DomainError(f"need h > 0, got h={self.h!r}")
        _check_denominator(self.gamma - self.p, terminating_order(self.a_prime))
        _check_denominator(self.gamma, terminating_order(self.a))
        if not self.gamma + self.s > 0:
            raise DomainError("need gamma + s > 0")
        if not self.terminating and not abs(self.k) + abs(self.k_prime) < self.h:
            raise DomainError(
                f"integral diverges: need |k|+|k'| < h, got |k|+|k'| = {abs(self.k) + abs(self.k_prime):g}, h = {self.h:g}"
            )

    @property
    def terminating(self) -> bool:
        return terminating_order(self.a) is not None and terminating_order(self.a_prime) is not None

    def as_spec(self) -> LaplaceProductSpec:
        return LaplaceProductSpec(self.gamma + self.s, self.h, self.a, self.gamma, self.k,
                                  self.a_prime, self.gamma - self.p, self.k_prime)

    def integrand(self):
        if self.terminating:
            return polynomial_integrand(self.gamma + self.s, self.h,
                                        [(self.a, self.gamma, self.k), (self.a_prime, self.gamma - self.p, self.k_prime)])
        return self.as_spec().integrand()


def polynomial_integrand(d, h, factors):
    """t^(d-1) e^(-ht) times a product of terminating 1F1 polynomials.

    The polynomial coefficients are multiplied out exactly once, so the
    oracle path contains no series truncation.
    """
    poly = np.array([1.0])
    for a, b, k in factors:
        n = terminating_order(a)
        if n is None:
            raise ParameterError("polynomial integrand needs terminating factors")
        coeffs = [pochhammer(a, j) / (pochhammer(b, j) * math.factorial(j)) * k**j for j in range(n + 1)]
        poly = np.convolve(poly, coeffs)
    coef = poly[::-1]  # highest degree first for polyval

    def f(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        live = h * t < EXP_CUTOFF
        tl = t[live]
        out[live] = np.exp((d - 1) * np.log(tl) - h * tl) * np.polyval(coef, tl)
        return out

    return f


def _gordon(p: JspParams, tol: float) -> EvaluationResult:
    if p.s or p.p:
        raise ParameterError("the gordon_1_2 closed form needs s = p = 0")
    k, kp, h, g, a, ap = p.k, p.k_prime, p.h, p.gamma, p.a, p.a_prime
    if abs(h - (k + kp) / 2) > 1e-12 * max(1.0, abs(h)):
        raise ParameterError("the gordon_1_2 closed form needs h = (k + k')/2")
    if k == kp:
        raise DomainError("gordon_1_2 is singular at k = k'")
    try:
        pref = real_power(k + kp, a + ap - g) * real_power(kp - k, -a) * real_power(k - kp, -ap)
    except DivergenceError as exc:
        raise DomainError(f"branch error: {exc}; the real branch needs integer a, a' here") from None
    inner = hyp2f1(a, ap, g, -4 * k * kp / (kp - k) ** 2, tol)
    return inner.scaled(2.0**g * gamma(g) * pref, "closed_form")


def _continuation_35(p: JspParams, tol: float) -> EvaluationResult:
    cp = ContinuationParams(p.gamma, p.s, p.p, p.a, p.a_prime, p.k, p.k_prime, p.h)
    r = f2_continuation_lemma6(cp, "2F1", tol)
    return r.scaled(_gamma_weight(p.gamma + p.s, p.h))


def landau_lifshitz_J(p: JspParams, method: str = "auto", tol: float = DEFAULT_TOL) -> EvaluationResult:
    """The J integral via the finite continuation sum or the s = p = 0 closed form.

    ``auto`` tries the continuation sum first and falls back to the general
    F2 dispatcher if one of its inner 2F1 values is not evaluable.
    """
    if method == "gordon_1_2":
        return _gordon(p, tol)
    if method == "continuation_3_5":
        return _continuation_35(p, tol)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    try:
        return _continuation_35(p, tol)
    except HypergeometricError:
        return laplace_product(p.as_spec(), tol)


# ---------------------------------------------------------------------------
# product identities


def kummer_product_sum(a: float, c: float, x: float, y: float, tol: float = DEFAULT_TOL) -> EvaluationResult:
    """1F1(a;c;x) 1F1(a;c;y) as sum_r (a)_r (c-a)_r (-xy)^r / ((c)_r (c)_2r r!) 1F1(a+r; c+2r; x+y)."""
    parts = []
    coef = 1.0
    running = 0.0
    small = 0
    for r in range(100_000):
        if r:
            j = r - 1
            coef *= (a + j) * (c - a + j) / ((c + j) * (c + 2 * j) * (c + 2 * j + 1) * r) * (-x * y)
        if coef == 0.0:
            break
        term = coef * hyp1f1(a + r, c + 2 * r, x + y, tol).value
        parts.append(term)
        running += term
        small = small + 1 if abs(term) <= tol * 1e-2 * abs(running) else 0
        if small >= 2:
            break
    value = math.fsum(parts)
    return EvaluationResult(value, 16 * EPS * sum(abs(v) for v in parts), len(parts), "series")


def kummer_product_report(a: float, c: float, x: float, y: float, tol: float = DEFAULT_TOL) -> IdentityReport:
    lhs = hyp1f1(a, c, x, tol).value * hyp1f1(a, c, y, tol).value
    rhs = kummer_product_sum(a, c, x, y, tol).value
    return IdentityReport.compare("kummer-product", lhs, rhs, "series", "series", {"a": a, "c": c, "x": x, "y": y})


def ramanujan_report(a: float, b: float, x: float, tol: float = DEFAULT_TOL) -> IdentityReport:
    """1F1(a;b;x) 1F1(a;b;-x) = 2F3(a, b-a; b, b/2, (b+1)/2; x^2/4)."""
    lhs = hyp1f1(a, b, x, tol).value * hyp1f1(a, b, -x, tol).value
    rhs = pfq((a, b - a), (b, b / 2, (b + 1) / 2), x * x / 4, tol).value
    return IdentityReport.compare("ramanujan-product", lhs, rhs, "series", "series", {"a": a, "b": b, "x": x})


def antisymmetric_product_integral(d: float, h: float, a: float, b: float, k: float,
                                   tol: float = DEFAULT_TOL) -> EvaluationResult:
    """int t^(d-1) e^(-ht) 1F1(a;b;kt) 1F1(a;b;-kt) dt as a 4F3 at k^2/h^2."""
    if not (d > 0 and h > 0 and 2 * abs(k) < h):
        raise DomainError("need d > 0, h > 0 and 2|k| < h")
    r = pfq((d / 2, (d + 1) / 2, a, b - a), (b, b / 2, (b + 1) / 2), (k / h) ** 2, tol)
    return r.scaled(_gamma_weight(d, h), "closed_form")


def antisymmetric_reports(d, h, a, b, k, tol: float = QUAD_TOL) -> list[IdentityReport]:
    """The 4F3 value against quadrature of the 1F1-product and 2F3 integrands."""
    rhs = antisymmetric_product_integral(d, h, a, b, k).value
    params = {"d": d, "h": h, "a": a, "b": b, "k": k}
    scale = max(1.0, d) / h
    prod = integrate_semiinfinite(weighted_integrand(d, h, [(a, b, k), (a, b, -k)]), tol, scale=scale)

    def two_f_three(t):
        return pfq_array((a, b - a), (b, b / 2, (b + 1) / 2), (k * t) ** 2 / 4)

    single = integrate_semiinfinite(weighted_integrand(d, h, [], extra=two_f_three), tol, scale=scale)
    return [
        IdentityReport.compare("antisym-product-integral", prod.value, rhs, "quadrature", "closed_form", params),
        IdentityReport.compare("antisym-single-integral", single.value, rhs, "quadrature", "closed_form", params),
    ]


# ---------------------------------------------------------------------------
# closed-form catalog


def _half_root(z):
    return 0.5 + 0.5 * math.sqrt(1.0 - z)


@dataclass(frozen=True)
class AppendixEntry:
    identity_id: str
    names: tuple[str, ...]
    domain: Callable[[Mapping[str, float]], str | None]
    rhs: Callable[[Mapping[str, float]], float]
    integrand: Callable[[Mapping[str, float]], Callable]
    sampler: Callable[[np.random.Generator], dict]
    scale: Callable[[Mapping[str, float]], float] = field(default=lambda q: 1.0)
    hypergeometric: Callable[[Mapping[str, float]], float] | None = None


def _cond(*checks):
    def domain(q):
        for ok, msg in checks:
            if not ok(q):
                return msg
        return None

    return domain


def _unif(rng, lo, hi):
    return float(rng.uniform(lo, hi))


def _hk_sampler(name_lo_hi, kfrac=0.8):
    def sample(rng):
        q = {name: _unif(rng, lo, hi) for name, lo, hi in name_lo_hi}
        q["h"] = _unif(rng, 0.5, 3.0)
        q["k"] = _unif(rng, -kfrac, kfrac) * q["h"]
        return q

    return sample


_K_LT_H = (lambda q: q["h"] > abs(q["k"]), "|h| > |k|")
_H_POS = (lambda q: q["h"] > 0, "h > 0")


def _one(a, b, kfn, power):
    """Integrand builder for a single 1F1 factor with exponent power(q)."""

    def build(q):
        return weighted_integrand(power(q), q["h"], [(a(q), b(q), kfn(q))])

    return build


def _w(q, d):
    return gamma(d) * q["h"] ** (-d)


def _i3_rhs(q):
    a, b = q["a"], q["b"]
    lead = 2 * _w(q, a) * math.sqrt(math.pi) * gamma((a + b) / 2 + 1) / (a - b)
    return lead * (rgamma(a / 2) * rgamma((b + 1) / 2) - rgamma(b / 2) * rgamma((a + 1) / 2))


def _i17_rhs(q):
    a, h, k = q["a"], q["h"], q["k"]
    if a == 0.0:
        return -math.log1p(-k / h) / k
    return (-1.0 / a + (h / (h - k)) ** a / a) / k


def _i19_rhs(q):
    a, s, k, kp = q["a"], q["s"], q["k"], q["k_prime"]
    den = 4 * s * s - (k - kp) ** 2
    return 2 ** (2 * a) * gamma(2 * a) * den ** (-a) * hyp2f1(a, a, 2 * a, 4 * k * kp / den).value


def _zero_f_one(c, kk):
    def g(t):
        return pfq_array((), (c,), (kk * t) ** 2 / 16)

    return g


def _i19_integrand(q):
    a, s, k, kp = q["a"], q["s"], q["k"], q["k_prime"]
    f1, f2 = _zero_f_one(a + 0.5, k), _zero_f_one(a + 0.5, kp)
    return weighted_integrand(2 * a, s, [], extra=lambda t: f1(t) * f2(t))


def _i20_integrand(q):
    a, s, k = q["a"], q["s"], q["k"]
    f1 = _zero_f_one(a + 0.5, k)
    return weighted_integrand(2 * a, s, [], extra=lambda t: f1(t) ** 2)


def _i21_integrand(q):
    s, k = q["s"], q["k"]
    f1 = _zero_f_one(1.5, k)
    return weighted_integrand(2.0, s, [], extra=lambda t: f1(t) ** 2)


def _sample_i19(rng):
    k, kp = _unif(rng, 0.05, 2.0), _unif(rng, 0.05, 2.0)
    return {"a": _unif(rng, 0.3, 3.0), "k": k, "k_prime": kp, "s": (k + kp) / 2 * _unif(rng, 1.3, 3.0)}


def _sample_i20(rng):
    k = _unif(rng, 0.05, 2.0)
    return {"a": _unif(rng, 0.3, 3.0), "k": k, "s": k * _unif(rng, 1.3, 3.0)}


def _sample_i21(rng):
    k = _unif(rng, 0.05, 2.0)
    return {"k": k, "s": k * _unif(rng, 1.3, 3.0)}


def _z(q):
    return q["k"] / q["h"]


def _build_catalog() -> dict[str, AppendixEntry]:
    A = lambda q: q["a"]  # noqa: E731
    K = lambda q: q["k"]  # noqa: E731
    cat = {}

    def add(entry):
        cat[entry.identity_id] = entry

    add(AppendixEntry(
        "I.1", ("d", "h", "k", "a"),
        _cond((lambda q: q["d"] > 0, "Re(d) > 0"), _K_LT_H),
        lambda q: _w(q, q["d"]) * (1 - _z(q)) ** (-q["a"]),
        _one(A, lambda q: q["d"], K, lambda q: q["d"]),
        _hk_sampler([("d", 0.5, 5.0), ("a", -3.0, 3.0)]),
        lambda q: max(1.0, q["d"]) / q["h"],
        lambda q: _w(q, q["d"]) * hyp2f1(q["d"], q["a"], q["d"], _z(q)).value,
    ))
    add(AppendixEntry(
        "I.2", ("d", "h", "a"),
        _cond((lambda q: q["d"] > 0, "Re(d) > 0"), _H_POS,
              (lambda q: terminating_order((q["a"] + q["d"] + 1) / 2) is None, "a+d+1 != 0,-2,-4,...")),
        lambda q: _w(q, q["d"]) * math.sqrt(math.pi) * gamma((q["a"] + q["d"] + 1) / 2)
        * rgamma((1 + q["d"]) / 2) * rgamma((1 + q["a"]) / 2),
        _one(A, lambda q: (q["a"] + q["d"] + 1) / 2, lambda q: q["h"] / 2, lambda q: q["d"]),
        lambda rng: {"d": _unif(rng, 0.5, 5.0), "a": _unif(rng, -0.5, 4.0), "h": _unif(rng, 0.5, 3.0)},
        lambda q: max(1.0, q["d"]) / q["h"],
        lambda q: _w(q, q["d"]) * hyp2f1(q["a"], q["d"], (q["a"] + q["d"] + 1) / 2, 0.5).value,
    ))
    add(AppendixEntry(
        "I.3", ("a", "b", "h"),
        _cond((lambda q: q["a"] > 0, "Re(a) > 0"), _H_POS,
              (lambda q: terminating_order((q["a"] + q["b"] + 2) / 2) is None, "a+b != -2,-4,-6,..."),
              (lambda q: abs(q["a"] - q["b"]) > 1e-8, "a != b")),
        _i3_rhs,
        _one(lambda q: q["b"], lambda q: (q["a"] + q["b"] + 2) / 2, lambda q: q["h"] / 2, A),
        lambda rng: {"a": _unif(rng, 0.5, 5.0), "b": _unif(rng, -1.5, 4.0), "h": _unif(rng, 0.5, 3.0)},
        lambda q: max(1.0, q["a"]) / q["h"],
        lambda q: _w(q, q["a"]) * hyp2f1(q["a"], q["b"], (q["a"] + q["b"] + 2) / 2, 0.5).value,
    ))
    add(AppendixEntry(
        "I.4", ("a", "h", "k"),
        _cond((lambda q: q["a"] > 0, "Re(2a) > 0"), _K_LT_H),
        lambda q: gamma(2 * q["a"]) * (q["h"] + q["k"]) * (q["h"] - q["k"]) ** (-2 * q["a"] - 1),
        _one(lambda q: q["a"] + 1, A, K, lambda q: 2 * q["a"]),
        _hk_sampler([("a", 0.3, 3.0)]),
        lambda q: max(1.0, 2 * q["a"]) / q["h"],
        lambda q: _w(q, 2 * q["a"]) * hyp2f1(2 * q["a"], q["a"] + 1, q["a"], _z(q)).value,
    ))
    add(AppendixEntry(
        "I.5", ("a", "h", "k"),
        _cond((lambda q: q["a"] > -1, "Re(a) > -1"), _K_LT_H,
              (lambda q: terminating_order(q["a"]) is None, "a != 0,-1,-2,...")),
        lambda q: _w(q, q["a"] + 1) * (1 + _z(q)) * (1 - _z(q)) ** (-2 * q["a"] - 1),
        _one(lambda q: 2 * q["a"], A, K, lambda q: q["a"] + 1),
        _hk_sampler([("a", 0.3, 3.0)]),
        lambda q: max(1.0, q["a"] + 1) / q["h"],
        lambda q: _w(q, q["a"] + 1) * hyp2f1(q["a"] + 1, 2 * q["a"], q["a"], _z(q)).value,
    ))

    def half_family(iid, lo, upper, lower, power, extra_sqrt, expo):
        # int t^(power-1) e^(-ht) 1F1(upper; lower; kt) with a [1/2 + sqrt(1-z)/2]^expo closed form
        def rhs(q):
            z = _z(q)
            val = _w(q, power(q)) * _half_root(z) ** expo(q)
            if extra_sqrt:
                val /= math.sqrt(1 - z)
            return val

        def hyper(q):
            return _w(q, power(q)) * hyp2f1(power(q), upper(q), lower(q), _z(q)).value

        add(AppendixEntry(
            iid, ("a", "h", "k"),
            _cond((lambda q: q["a"] > lo, f"Re(a) > {lo:g}"), _K_LT_H,
                  (lambda q: terminating_order(lower(q)) is None, "1F1 denominator not a nonpositive integer")),
            rhs,
            _one(upper, lower, K, power),
            _hk_sampler([("a", max(lo, 0.0) + 0.2, 3.5)]),
            lambda q: max(1.0, power(q)) / q["h"],
            hyper,
        ))

    one_m_2a = lambda q: 1 - 2 * q["a"]  # noqa: E731
    m2a = lambda q: -2 * q["a"]  # noqa: E731
    half_family("I.6", 0.0, lambda q: q["a"] + 0.5, lambda q: 2 * q["a"], A, True, one_m_2a)
    half_family("I.7", -0.5, A, lambda q: 2 * q["a"], lambda q: q["a"] + 0.5, True, one_m_2a)
    half_family("I.8", 0.0, lambda q: q["a"] - 0.5, lambda q: 2 * q["a"], A, False, one_m_2a)
    half_family("I.9", 0.5, A, lambda q: 2 * q["a"], lambda q: q["a"] - 0.5, False, one_m_2a)
    half_family("I.10", 0.0, lambda q: q["a"] + 0.5, lambda q: 2 * q["a"] + 1, A, False, m2a)
    half_family("I.11", -0.5, A, lambda q: 2 * q["a"] + 1, lambda q: q["a"] + 0.5, False, m2a)
    half_family("I.12", -1.0, lambda q: q["a"] + 0.5, lambda q: 2 * q["a"] + 1, lambda q: q["a"] + 1, True, m2a)
    half_family("I.13", -0.5, lambda q: q["a"] + 1, lambda q: 2 * q["a"] + 1, lambda q: q["a"] + 0.5, True, m2a)
    half_family("I.14", -0.5, A, lambda q: 2 * q["a"] + 1, lambda q: q["a"] + 0.5, False, m2a)
    half_family("I.15", 0.0, lambda q: q["a"] + 0.5, lambda q: 2 * q["a"] + 1, A, False, m2a)

    add(AppendixEntry(
        "I.16", ("a", "h", "k"),
        _cond((lambda q: q["a"] > -1, "Re(a) > -1"), _K_LT_H, (lambda q: q["a"] != 0, "a != 0"),
              (lambda q: q["k"] != 0, "k != 0")),
        lambda q: gamma(q["a"]) / q["k"] * (-q["h"] ** (-q["a"]) + (q["h"] - q["k"]) ** (-q["a"])),
        _one(lambda q: 1.0, lambda q: 2.0, K, lambda q: q["a"] + 1),
        _hk_sampler([("a", 0.2, 4.0)]),
        lambda q: max(1.0, q["a"] + 1) / q["h"],
        lambda q: _w(q, q["a"] + 1) * hyp2f1(q["a"] + 1, 1.0, 2.0, _z(q)).value,
    ))

    def sample_i17(rng):
        q = _hk_sampler([("a", -2.0, 3.0)])(rng)
        if rng.uniform() < 0.4:
            q["a"] = 0.0
        return q

    add(AppendixEntry(
        "I.17", ("a", "h", "k"),
        _cond(_K_LT_H, _H_POS, (lambda q: q["k"] != 0, "k != 0")),
        _i17_rhs,
        _one(lambda q: q["a"] + 1, lambda q: 2.0, K, lambda q: 1.0),
        sample_i17,
        lambda q: 1.0 / q["h"],
        lambda q: hyp2f1(1.0, q["a"] + 1, 2.0, _z(q)).value / q["h"],
    ))
    add(AppendixEntry(
        "I.18", ("h", "k"),
        _cond(_K_LT_H, _H_POS, (lambda q: q["k"] != 0, "k != 0")),
        lambda q: -2 / q["k"] * (1 + q["h"] / q["k"] * math.log1p(-_z(q))),
        _one(lambda q: 2.0, lambda q: 3.0, K, lambda q: 1.0),
        _hk_sampler([]),
        lambda q: 1.0 / q["h"],
        lambda q: hyp2f1(1.0, 2.0, 3.0, _z(q)).value / q["h"],
    ))
    add(AppendixEntry(
        "I.19", ("a", "s", "k", "k_prime"),
        _cond((lambda q: q["a"] > 0, "Re(a) > 0"),
              (lambda q: q["k"] >= 0 and q["k_prime"] >= 0, "k, k' >= 0"),
              (lambda q: q["s"] > (q["k"] + q["k_prime"]) / 2, "s > (k+k')/2")),
        _i19_rhs,
        _i19_integrand,
        _sample_i19,
        lambda q: max(1.0, 2 * q["a"]) / q["s"],
    ))
    add(AppendixEntry(
        "I.20", ("a", "s", "k"),
        _cond((lambda q: q["a"] > 0, "Re(a) > 0"), (lambda q: q["s"] > abs(q["k"]), "s > |k|")),
        lambda q: gamma(2 * q["a"]) * q["s"] ** (-2 * q["a"]) * hyp2f1(q["a"], q["a"], 2 * q["a"], (q["k"] / q["s"]) ** 2).value,
        _i20_integrand,
        _sample_i20,
        lambda q: max(1.0, 2 * q["a"]) / q["s"],
    ))
    add(AppendixEntry(
        "I.21", ("s", "k"),
        _cond((lambda q: q["s"] > abs(q["k"]) > 0, "s > |k| > 0")),
        lambda q: -math.log1p(-(q["k"] / q["s"]) ** 2) / q["k"] ** 2,
        _i21_integrand,
        _sample_i21,
        lambda q: 2.0 / q["s"],
    ))
    return cat


APPENDIX = _build_catalog()
APPENDIX_IDS = tuple(APPENDIX)


def appendix_entry(identity: str) -> AppendixEntry:
    try:
        return APPENDIX[identity]
    except KeyError:
        raise ValueError(f"unknown identity {identity!r}; known: {', '.join(APPENDIX_IDS)}") from None


def appendix_rhs(identity: str, params: Mapping[str, float]) -> float:
    entry = appendix_entry(identity)
    q = _params(entry, params)
    return entry.rhs(q)


def _params(entry: AppendixEntry, params: Mapping[str, float]) -> dict:
    missing = [n for n in entry.names if n not in params]
    if missing:
        raise ParameterError(f"{entry.identity_id} needs parameters {', '.join(missing)}")
    q = {n: float(params[n]) for n in entry.names}
    why = entry.domain(q)
    if why:
        raise DomainError(f"{entry.identity_id} outside its domain: {why}")
    return q


def appendix_identity(identity: str, params: Mapping[str, float], tol: float = QUAD_TOL) -> IdentityReport:
    """Quadrature of the integral (lhs) against the closed form (rhs)."""
    entry = appendix_entry(identity)
    q = _params(entry, params)
    lhs = integrate_semiinfinite(entry.integrand(q), tol, scale=entry.scale(q))
    rhs = entry.rhs(q)
    return IdentityReport.compare(identity, lhs.value, rhs, "quadrature", "closed_form", q)


def sample_appendix(identity: str, rng: np.random.Generator) -> dict:
    entry = appendix_entry(identity)
    while True:
        q = entry.sampler(rng)
        if entry.domain(q) is None:
            return q
