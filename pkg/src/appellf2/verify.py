"""Seeded verification suites: every identity checked against an independent route.

Each suite draws its grid from ``Generator(Philox(key=(seed << 64) | index))``
so a failing case is reproducible from the seed alone.  Cases run in a fixed
order and the report contains no timing or host data, so the JSON output is
byte-identical for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import appell, laplace, physics
from .appell import ContinuationParams, F2Params
from .errors import HypergeometricError
from .oracle import integrate_semiinfinite
from .special_core import DEFAULT_TOL, IdentityReport

SUITES = ("appendix", "recurrences", "continuations", "products", "physics")

THRESHOLDS = {
    "appendix": 1e-8,
    "recurrences": 1e-9,
    "continuations": 1e-9,
    "products": 1e-8,
    "physics": 1e-8,
}


def suite_rng(seed: int, suite: str) -> np.random.Generator:
    index = SUITES.index(suite)
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | index))


@dataclass
class Case:
    suite: str
    identity_id: str
    params: dict
    report: IdentityReport | None = None
    error: str | None = None
    threshold: float = 0.0

    @property
    def passed(self) -> bool:
        if self.report is None:
            return False
        return self.report.rel_residual <= self.threshold or self.report.abs_residual <= self.threshold * 1e-3

    def as_dict(self) -> dict:
        out = {"suite": self.suite, "identity": self.identity_id, "params": _clean(self.params),
               "threshold": self.threshold, "pass": self.passed}
        if self.report is not None:
            r = self.report
            out.update(lhs=r.lhs, rhs=r.rhs, abs_residual=r.abs_residual, rel_residual=r.rel_residual,
                       lhs_method=r.lhs_method, rhs_method=r.rhs_method)
        if self.error is not None:
            out["error"] = self.error
        return out


def _clean(d: dict) -> dict:
    return {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in d.items()}


@dataclass
class SuiteResult:
    cases: list[Case] = field(default_factory=list)

    @property
    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"cases": len(self.cases), "failures": len(self.failures), "passed": self.passed,
                "reports": [c.as_dict() for c in self.cases]}


def _run(suite: str, identity: str, params: dict, fn: Callable[[], IdentityReport]) -> Case:
    case = Case(suite, identity, params, threshold=THRESHOLDS[suite])
    try:
        case.report = fn()
    except (HypergeometricError, ArithmeticError) as exc:
        case.error = f"{type(exc).__name__}: {exc}"
    return case


# ---------------------------------------------------------------------------
# suites


def appendix_cases(seed: int, points: int = 5, tol: float = DEFAULT_TOL) -> Iterator[Case]:
    rng = suite_rng(seed, "appendix")
    for iid in laplace.APPENDIX_IDS:
        for j in range(points):
            q = laplace.sample_appendix(iid, rng)
            if iid == "I.17":
                # alternate the two branches explicitly
                q["a"] = 0.0 if j % 2 == 0 else (q["a"] if q["a"] != 0.0 else 1.5)
            yield _run("appendix", iid, q, lambda iid=iid, q=q: laplace.appendix_identity(iid, q))
    spots = [("I.18", {"h": 2.0, "k": 1.0}), ("I.21", {"s": 2.0, "k": 1.0})]
    for iid, q in spots:
        yield _run("appendix", iid, q, lambda iid=iid, q=q: laplace.appendix_identity(iid, q))


def sample_recurrence(identity: str, rng: np.random.Generator) -> F2Params:
    u = lambda lo, hi: float(rng.uniform(lo, hi))  # noqa: E731
    d, a, ap, b, bp = u(1.2, 4.0), u(0.2, 3.0), u(0.2, 3.0), u(1.3, 4.0), u(1.3, 4.0)
    lo_y = 0.05 if identity == "R3.20" else -0.4
    x, y = u(0.05, 0.45), u(lo_y, 0.4)
    while abs(x) + abs(y) > 0.8:
        x, y = u(0.05, 0.45), u(lo_y, 0.4)
    if identity == "R3.18":
        d = bp + int(rng.integers(1, 4))
    elif identity == "R3.19":
        d = bp + 1
    elif identity == "R3.20":
        bp = b
        d = b + 1
    return F2Params(d, a, ap, b, bp, x, y)


def recurrence_cases(seed: int, points: int = 100, tol: float = DEFAULT_TOL) -> Iterator[Case]:
    rng = suite_rng(seed, "recurrences")
    for rid in appell.RECURRENCES:
        for _ in range(points):
            p = sample_recurrence(rid, rng)
            yield _run("recurrences", rid, dict(zip(("d", "a", "a_prime", "b", "b_prime", "x", "y"), p.as_tuple())),
                       lambda rid=rid, p=p: appell.f2_recurrence_residual(rid, p, tol))


def sample_overlap(rng: np.random.Generator, lemma8: bool = False) -> ContinuationParams:
    """Continuation parameters inside the direct-series domain (|x|+|y| < 0.9)."""
    while True:
        s = int(rng.integers(0, 4))
        p = int(rng.integers(0, s + 1)) if lemma8 else int(rng.integers(0, 4))
        c = float(rng.uniform(0.3, 3.0)) + p
        k, kp = (float(v) for v in rng.uniform(-0.45, 0.45, 2))
        if abs(k) + abs(kp) < 0.88:
            return ContinuationParams(c, s, p, float(rng.uniform(0.2, 3.0)), float(rng.uniform(0.2, 3.0)), k, kp, 1.0)


def sample_terminating_outside(rng: np.random.Generator) -> ContinuationParams:
    """Terminating numerators with |k|+|k'| > h: only quadrature can check these."""
    while True:
        s, p = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        c = float(rng.uniform(0.5, 3.0)) + p
        a, ap = -int(rng.integers(0, 4)), -int(rng.integers(0, 4))
        h = float(rng.uniform(0.5, 2.0))
        k, kp = (float(v) * h for v in rng.uniform(-1.5, 1.5, 2))
        if abs(k) + abs(kp) <= 1.05 * h:
            continue
        if min(abs(h - k), abs(h - kp), abs(h - k - kp)) < 0.05 * h:
            continue
        return ContinuationParams(c, s, p, float(a), float(ap), k, kp, h)


def _cp_dict(cp: ContinuationParams) -> dict:
    return {"c": cp.c, "s": cp.s, "p": cp.p, "a": cp.a, "a_prime": cp.a_prime, "k": cp.k, "k_prime": cp.k_prime, "h": cp.h}


def _vs_series(label, value_fn, params: F2Params, cp_dict, method):
    def run():
        ref = appell.f2_series(params).value
        return IdentityReport.compare(label, value_fn(), ref, method, "series", cp_dict)

    return run


def lemma6_quadrature_report(cp: ContinuationParams, tol: float = DEFAULT_TOL) -> IdentityReport:
    d = cp.c + cp.s
    value = appell.f2_continuation_lemma6(cp, "2F1", tol).value * laplace._gamma_weight(d, cp.h)
    f = laplace.polynomial_integrand(d, cp.h, [(cp.a, cp.c, cp.k), (cp.a_prime, cp.c - cp.p, cp.k_prime)])
    q = integrate_semiinfinite(f, 1e-13, scale=max(1.0, d) / cp.h)
    return IdentityReport.compare("L6-quad", q.value, value, "quadrature", "continuation", _cp_dict(cp))


def continuation_cases(seed: int, points: int = 50, quad_points: int = 20, tol: float = DEFAULT_TOL) -> Iterator[Case]:
    rng = suite_rng(seed, "continuations")
    S = "continuations"
    for _ in range(points):
        cp = sample_overlap(rng)
        prm = F2Params(cp.c + cp.s, cp.a, cp.a_prime, cp.c, cp.c - cp.p, cp.k, cp.k_prime)
        for form, label in (("F1", "L6-F1"), ("2F1", "L6-2F1")):
            yield _run(S, label, _cp_dict(cp), _vs_series(
                label, lambda cp=cp, form=form: appell.f2_continuation_lemma6(cp, form, tol).value, prm, _cp_dict(cp), "continuation"))
    for _ in range(points):
        cp = sample_overlap(rng, lemma8=True)
        prm = F2Params(cp.c + cp.s, cp.a, cp.a_prime, cp.c, cp.c + cp.p, cp.k, cp.k_prime)
        for form, label in (("F1", "L8-F1"), ("2F1", "L8-2F1")):
            yield _run(S, label, _cp_dict(cp), _vs_series(
                label, lambda cp=cp, form=form: appell.f2_continuation_lemma8(cp, form, tol).value, prm, _cp_dict(cp), "continuation"))
    for _ in range(points):
        cp = sample_overlap(rng, lemma8=True)
        cp = ContinuationParams(cp.c - cp.p + cp.s, cp.s, cp.s, cp.a, cp.a_prime, cp.k, cp.k_prime, cp.h)
        prm = F2Params(cp.c + cp.s, cp.a, cp.a_prime, cp.c, cp.c + cp.s, cp.k, cp.k_prime)
        yield _run(S, "L8-s=p", _cp_dict(cp), _vs_series(
            "L8-s=p", lambda cp=cp: appell.f2_continuation_lemma8(cp, "s=p", tol).value, prm, _cp_dict(cp), "continuation"))
    for _ in range(points):
        d, a, c = float(rng.uniform(0.3, 4)), float(rng.uniform(0.2, 3)), float(rng.uniform(0.3, 3))
        k, kp = (float(v) for v in rng.uniform(-0.44, 0.44, 2))
        while abs(k * kp) > 0.9 * (1.0 - k - kp):
            k, kp = (float(v) for v in rng.uniform(-0.44, 0.44, 2))
        q = {"d": d, "a": a, "c": c, "k": k, "k_prime": kp}
        yield _run(S, "L9-sum", q, _vs_series(
            "L9-sum", lambda d=d, a=a, c=c, k=k, kp=kp: appell.f2_equal_params_lemma9(d, a, c, k, kp, 1.0, tol, "sum").value,
            F2Params(d, a, a, c, c, k, kp), q, "continuation"))
        q2 = dict(q, k_prime=-k)
        yield _run(S, "L9-4F3", q2, _vs_series(
            "L9-4F3", lambda d=d, a=a, c=c, k=k: appell.f2_equal_params_lemma9(d, a, c, k, -k, 1.0, tol, "4F3").value,
            F2Params(d, a, a, c, c, k, -k), q2, "continuation"))
    for _ in range(quad_points):
        cp = sample_terminating_outside(rng)
        yield _run(S, "L6-quad", _cp_dict(cp), lambda cp=cp: lemma6_quadrature_report(cp, tol))


def product_cases(seed: int, points: int = 100, integral_points: int = 20, tol: float = DEFAULT_TOL) -> Iterator[Case]:
    rng = suite_rng(seed, "products")
    for _ in range(points):
        a, c = (float(v) for v in rng.uniform(0.2, 4.0, 2))
        x, y = (float(v) for v in rng.uniform(-3.0, 3.0, 2))
        yield _run("products", "kummer-product", {"a": a, "c": c, "x": x, "y": y},
                   lambda a=a, c=c, x=x, y=y: laplace.kummer_product_report(a, c, x, y, tol))
        yield _run("products", "ramanujan-product", {"a": a, "b": c, "x": x},
                   lambda a=a, c=c, x=x: laplace.ramanujan_report(a, c, x, tol))
    for _ in range(integral_points):
        d, h = float(rng.uniform(0.5, 5.0)), float(rng.uniform(0.5, 3.0))
        b = float(rng.uniform(0.5, 4.0))
        a = float(rng.uniform(0.2, b))
        k = float(rng.uniform(-0.45, 0.45)) * h
        q = {"d": d, "h": h, "a": a, "b": b, "k": k}
        reports = None

        def both(q=q):
            nonlocal reports
            reports = laplace.antisymmetric_reports(**q)
            return reports[0]

        yield _run("products", "antisym-product-integral", q, both)
        if reports is not None:
            yield _run("products", "antisym-single-integral", q, lambda r=reports[1]: r)


PHYS_GAMMAS = (1.6, 2.0, 3.0)
PHYS_KRATZER = ((0.0, 2.0, 0), (1.0, 2.0, 0), (0.0, 2.0, 1))
PHYS_ALPHAS = (0.5, 1.0, 2.0, 3.0)


def _overlap_report(label, closed, f, scale, params):
    def run():
        q = integrate_semiinfinite(f, 1e-13, scale=scale)
        return IdentityReport.compare(label, q.value, closed, "quadrature", "closed_form", params)

    return run


def physics_cases(seed: int, size: int = 11, grid: int = 6, tol: float = DEFAULT_TOL) -> Iterator[Case]:
    # fixed grids: the seed is accepted for a uniform signature but unused
    S = "physics"
    for g in PHYS_GAMMAS:
        basis = physics.OscillatorBasis.from_gamma(g)
        for n in range(size):
            for m in range(n, size):
                prm = {"gamma": g, "n": n, "m": m}
                yield _run(S, "GK-overlap", prm, lambda basis=basis, n=n, m=m, prm=prm: IdentityReport.compare(
                    "GK-overlap", physics.gk_overlap(n, m, basis), float(n == m), "closed_form", "exact", prm))
        for alpha in PHYS_ALPHAS:
            if not 2 * g > alpha:
                continue
            for n in range(grid):
                for m in range(n, grid):
                    prm = {"gamma": g, "alpha": alpha, "n": n, "m": m}
                    yield _run(S, "GK-element", prm, _overlap_report(
                        "GK-element", physics.spiked_matrix_element(n, m, basis, alpha),
                        physics.spiked_element_integrand(n, m, basis, alpha), 2.0, prm))
    for A, B, l in PHYS_KRATZER:
        basis = physics.KratzerBasis(A, B, l)
        scale = 2.0 * (size + basis.s) / B
        for n in range(size):
            for m in range(n, size):
                prm = {"A": A, "B": B, "l": l, "n": n, "m": m}
                yield _run(S, "K-overlap", prm, _overlap_report(
                    "K-overlap", float(n == m), physics.kratzer_element_integrand(n, m, basis), scale, prm))
        for alpha in PHYS_ALPHAS:
            for n in range(grid):
                for m in range(n, grid):
                    prm = {"A": A, "B": B, "l": l, "alpha": alpha, "n": n, "m": m}
                    yield _run(S, "K-element", prm, _overlap_report(
                        "K-element", physics.kratzer_matrix_element(n, m, basis, alpha),
                        physics.kratzer_element_integrand(n, m, basis, alpha), scale, prm))


RUNNERS = {
    "appendix": appendix_cases,
    "recurrences": recurrence_cases,
    "continuations": continuation_cases,
    "products": product_cases,
    "physics": physics_cases,
}


def run_suite(suite: str, seed: int = 0, tol: float = DEFAULT_TOL) -> SuiteResult:
    names = SUITES if suite == "all" else (suite,)
    result = SuiteResult()
    for name in names:
        if name not in RUNNERS:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
        result.cases.extend(RUNNERS[name](seed, tol=tol))
    return result
