import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from appellf2.appell import (
    RECURRENCES,
    ContinuationParams,
    F1Params,
    F2Params,
    f1_finite_sum,
    f1_series,
    f2_continuation_lemma6,
    f2_continuation_lemma8,
    f2_equal_params_lemma9,
    f2_eval,
    f2_lemma10,
    f2_recurrence_residual,
    f2_reduce,
    f2_series,
)
from appellf2.errors import (
    DivergenceError,
    NoStrategyError,
    ParameterError,
    SingularConfigurationError,
)
from appellf2.special_core import hyp2f1, pochhammer

from conftest import rel_err

# brute-force oracle (this package) and mpmath agree on every digit
V_STAR = 2.609473465631305
# mpmath at 40 digits, see scripts/derive_reference_values.py
REF = {
    (3, 0.5, 0.7, 2, 2, 0.2, 0.3): 1.8139310437276356,
    (3, 0.4, 0.6, 2, 3, 0.2, 0.25): 1.379316885084307,
    (3.5, 0.3, 0.8, 1.5, 2.5, 0.15, 0.2): 1.4728699220790904,
    (2, 0.5, 0.5, 1.5, 1.5, 0.2, 0.3): 1.5244520463981546,
    (1.2, 0.7, 0.7, 2, 2, 0.3, -0.3): 1.0187668520645595,
    (1.7, -0.4, 2.2, 1.1, 0.6, 0.35, -0.45): -0.024066933878910853,
    (4.2, 1.3, 0.9, 2.7, 1.9, 0.05, 0.8): 95.574932160524332,
}
# Laplace quadrature at 40 digits; |x|+|y| > 1 but the integral converges
REF_CONTINUATION = 1.3139392776322705
REF_F1 = 1.8333757422001424
REF_F1_TERMINATING = 0.79417368154301032
# exact rational integrals divided by Gamma(3)
REF_L6_OUTSIDE = {0.9: -4.84 / 2, -2.0: 12.56 / 2}


def interior_params(rng, radius=0.8):
    d, a, ap = rng.uniform(0.2, 4, 3)
    b, bp = rng.uniform(0.3, 4, 2)
    while True:
        x, y = rng.uniform(-radius, radius, 2)
        if abs(x) + abs(y) <= radius:
            return F2Params(d, a, ap, b, bp, x, y)


class TestParams:
    def test_denominator_pole(self):
        with pytest.raises(ParameterError):
            F2Params(1, 0.5, 0.5, -2, 1, 0.1, 0.1)

    def test_series_domain_flag(self):
        assert F2Params(1, 1, 1, 1, 1, 0.3, -0.6).in_series_domain
        assert not F2Params(1, 1, 1, 1, 1, 0.5, -0.5).in_series_domain

    def test_f1_flag(self):
        assert F1Params(1, 1, 1, 2, 0.9, -0.9).in_series_domain
        assert not F1Params(1, 1, 1, 2, 1.0, 0.1).in_series_domain


class TestSeries:
    def test_origin(self):
        assert f2_series(F2Params(2.2, 0.3, 0.4, 1.5, 2.5, 0.0, 0.0)).value == 1.0

    def test_v_star(self):
        r = f2_series(F2Params(2.5, 0.5, 1.5, 2, 3, 0.3, 0.4))
        assert rel_err(r.value, V_STAR) <= 1e-12
        assert r.method == "series" and r.terms_used >= 1

    @pytest.mark.parametrize("args", list(REF))
    def test_reference_values(self, args):
        assert rel_err(f2_eval(F2Params(*args)).value, REF[args]) <= 1e-12

    def test_outside_domain_raises(self):
        with pytest.raises(DivergenceError):
            f2_series(F2Params(2, 0.5, 0.5, 1.5, 1.5, 0.7, 0.6))

    def test_symmetry_grid(self, rng):
        for _ in range(500):
            p = interior_params(rng, 0.85)
            assert rel_err(f2_eval(p).value, f2_eval(p.swapped()).value) <= 1e-11

    @given(st.floats(0.2, 4), st.floats(0.2, 3), st.floats(0.2, 3), st.floats(0.4, 4), st.floats(0.4, 4),
           st.floats(0, 0.8), st.floats(0, 1))
    def test_swap_symmetry(self, d, a, ap, b, bp, r, frac):
        x, y = r * frac, r * (1 - frac)
        p = F2Params(d, a, ap, b, bp, x, -y)
        assert rel_err(f2_eval(p).value, f2_eval(p.swapped()).value) <= 1e-11


class TestReductions:
    def test_lemma2(self):
        p = F2Params(2.3, 0.0, 0.7, 1.4, 1.9, 0.4, 0.35)
        r = f2_reduce(p)
        assert r.method == "reduction"
        assert rel_err(r.value, hyp2f1(2.3, 0.7, 1.9, 0.35).value) <= 1e-14

    def test_lemma3_item1(self):
        assert f2_eval(F2Params(3, 1, 2, 1, 2, 0.2, 0.3)).value == pytest.approx(8.0, rel=1e-14)
        r = f2_eval(F2Params(2, 1, 1, 1, 1, 0.25, 0.25))
        assert r.value == pytest.approx(4.0, rel=1e-14) and r.method == "reduction"

    def test_lemma3_item2(self):
        r = f2_eval(F2Params(3, 1, 2, 3, 2, 0.2, 0.3))
        assert r.value == pytest.approx(0.7**-2 * 2, rel=1e-14)

    def test_no_pattern(self):
        assert f2_reduce(F2Params(2.5, 0.5, 1.5, 2, 3, 0.3, 0.4)) is None

    @pytest.mark.parametrize("g", [1.5, 2.0, 3.7])
    def test_lemma10_orthogonality(self, g):
        for n in range(6):
            for m in range(6):
                v = f2_lemma10(g, n, m, g, g).value
                expected = math.factorial(n) / pochhammer(g, n) if n == m else 0.0
                assert abs(v - expected) <= 1e-12 * max(1.0, abs(expected))

    @given(st.floats(0.5, 5), st.integers(0, 6), st.integers(0, 6), st.floats(0.5, 5), st.floats(0.5, 5),
           st.floats(-2, 2))
    def test_lemma10_items_swap(self, d, n, m, b, bp, x):
        one = f2_lemma10(d, n, m, b, bp, x=x, y=1.0).value
        two = f2_lemma10(d, m, n, bp, b, x=1.0, y=x).value
        assert abs(one - two) <= 1e-12 * max(1.0, abs(one))

    def test_lemma10_matches_finite_double_sum(self, rng):
        for _ in range(50):
            d, b, bp = rng.uniform(0.5, 4, 3)
            n, m = (int(v) for v in rng.integers(0, 6, 2))
            x = rng.uniform(-1.5, 1.5)
            direct = f2_series(F2Params(d, -n, -m, b, bp, x, 1.0)).value
            assert abs(f2_lemma10(d, n, m, b, bp, x, 1.0).value - direct) <= 1e-11 * max(1.0, abs(direct))

    @pytest.mark.parametrize("pattern", ["lemma2", "lemma3.1", "lemma3.2", "lemma3.3", "b=b'=d",
                                         "lemma5.1", "lemma5.2", "b'=b+s=d"])
    def test_reduction_consistency(self, pattern, rng):
        for _ in range(200):
            p = interior_params(rng)
            d, a, ap, b, bp, x, y = p.as_tuple()
            if pattern == "b'=b+s=d":
                s = int(rng.integers(1, 4))
                p = F2Params(b + s, a, ap, b, b + s, x, y)
            else:
                p = p.with_(**{
                    "lemma2": {"a": 0.0},
                    "lemma3.1": {"b": a, "b_prime": ap},
                    "lemma3.2": {"b": d, "b_prime": ap},
                    "lemma3.3": {"b": a, "b_prime": d},
                    "b=b'=d": {"b": d, "b_prime": d},
                    "lemma5.1": {"b": d},
                    "lemma5.2": {"b_prime": d},
                }[pattern])
            red = f2_reduce(p)
            assert red is not None and red.method == "reduction"
            assert rel_err(red.value, f2_series(p, tol=1e-14).value) <= 1e-10


def cp_overlap(draw_s, draw_p, c, a, ap, k, kp):
    return ContinuationParams(c + draw_p, draw_s, draw_p, a, ap, k, kp)


overlap_k = st.tuples(st.floats(-0.44, 0.44), st.floats(-0.44, 0.44))


class TestContinuations:
    def test_lemma6_example(self):
        cp = ContinuationParams(2, 1, 0, 0.5, 0.7, 0.2, 0.3)
        for form in ("F1", "2F1"):
            r = f2_continuation_lemma6(cp, form)
            assert rel_err(r.value, REF[(3, 0.5, 0.7, 2, 2, 0.2, 0.3)]) <= 1e-12
            assert r.method == "continuation"

    def test_lemma6_s0_p0_is_equal_d_denominators(self):
        a, ap, c, k, kp = 0.6, 1.3, 1.7, 0.35, -0.4
        cp = ContinuationParams(c, 0, 0, a, ap, k, kp)
        closed = (1 - k) ** -a * (1 - kp) ** -ap * hyp2f1(a, ap, c, k * kp / ((1 - k) * (1 - kp))).value
        assert rel_err(f2_continuation_lemma6(cp).value, closed) <= 1e-13

    @pytest.mark.parametrize("kp", [0.9, -2.0])
    def test_lemma6_terminating_outside(self, kp):
        cp = ContinuationParams(2, 1, 1, -2, -1, 1.2, kp)
        assert abs(cp.x) + abs(cp.y) > 1
        for form in ("F1", "2F1"):
            assert rel_err(f2_continuation_lemma6(cp, form).value, REF_L6_OUTSIDE[kp]) <= 1e-12

    def test_lemma6_singular_configuration(self):
        cp = ContinuationParams(2, 1, 1, -2, -1, 1.2, 1.0)
        with pytest.raises(SingularConfigurationError):
            f2_continuation_lemma6(cp)

    def test_lemma8_examples(self):
        r = f2_continuation_lemma8(ContinuationParams(2, 1, 1, 0.4, 0.6, 0.2, 0.25), "s=p")
        assert rel_err(r.value, REF[(3, 0.4, 0.6, 2, 3, 0.2, 0.25)]) <= 1e-12
        cp = ContinuationParams(1.5, 2, 1, 0.3, 0.8, 0.15, 0.2)
        for form in ("F1", "2F1"):
            assert rel_err(f2_continuation_lemma8(cp, form).value, REF[(3.5, 0.3, 0.8, 1.5, 2.5, 0.15, 0.2)]) <= 1e-12

    def test_lemma8_needs_s_ge_p(self):
        with pytest.raises(ParameterError):
            f2_continuation_lemma8(ContinuationParams(2, 0, 1, 0.4, 0.6, 0.2, 0.25))

    def test_lemma9_examples(self):
        assert f2_equal_params_lemma9(1.7, 0.4, 1.3, 0.0, -0.0).value == pytest.approx(1.0, abs=1e-15)
        assert rel_err(f2_equal_params_lemma9(2, 0.5, 1.5, 0.2, 0.3).value, REF[(2, 0.5, 0.5, 1.5, 1.5, 0.2, 0.3)]) <= 1e-12
        with pytest.raises(DivergenceError):
            # |k|+|k'| < h yet the r-series terms grow like 1.53^r
            f2_equal_params_lemma9(1.5, 1.0, 0.5, 0.4375, 0.4375, form="sum")
        s = f2_equal_params_lemma9(1.2, 0.7, 2, 0.3, -0.3, form="sum").value
        q = f2_equal_params_lemma9(1.2, 0.7, 2, 0.3, -0.3, form="4F3").value
        assert rel_err(s, q) <= 1e-13
        assert rel_err(q, REF[(1.2, 0.7, 0.7, 2, 2, 0.3, -0.3)]) <= 1e-12

    @given(st.integers(0, 3), st.integers(0, 3), st.floats(0.3, 3), st.floats(0.2, 3), st.floats(0.2, 3), overlap_k)
    def test_lemma6_forms_agree_with_series(self, s, p, c, a, ap, ks):
        k, kp = ks
        assume(abs(k) + abs(kp) < 0.88)
        cp = cp_overlap(s, p, c, a, ap, k, kp)
        ref = f2_series(F2Params(cp.c + s, a, ap, cp.c, cp.c - p, k, kp)).value
        one = f2_continuation_lemma6(cp, "F1").value
        two = f2_continuation_lemma6(cp, "2F1").value
        assert rel_err(one, two) <= 1e-10
        assert rel_err(two, ref) <= 1e-9

    @given(st.integers(0, 3), st.integers(0, 3), st.floats(0.3, 3), st.floats(0.2, 3), st.floats(0.2, 3), overlap_k)
    def test_lemma8_agrees_with_series(self, s, p, c, a, ap, ks):
        k, kp = ks
        assume(abs(k) + abs(kp) < 0.88 and s >= p)
        cp = ContinuationParams(c, s, p, a, ap, k, kp)
        ref = f2_series(F2Params(c + s, a, ap, c, c + p, k, kp)).value
        for form in ("F1", "2F1"):
            assert rel_err(f2_continuation_lemma8(cp, form).value, ref) <= 1e-9
        if s == p:
            assert rel_err(f2_continuation_lemma8(cp, "s=p").value, ref) <= 1e-9

    @given(st.floats(0.3, 4), st.floats(0.2, 3), st.floats(0.3, 3), overlap_k)
    def test_lemma9_agrees_with_series(self, d, a, c, ks):
        k, kp = ks
        assume(abs(k * kp) < 0.9 * (1 - k - kp))
        ref = f2_series(F2Params(d, a, a, c, c, k, kp)).value
        assert rel_err(f2_equal_params_lemma9(d, a, c, k, kp, form="sum").value, ref) <= 1e-9
        ref_anti = f2_series(F2Params(d, a, a, c, c, k, -k)).value
        assert rel_err(f2_equal_params_lemma9(d, a, c, k, -k, form="4F3").value, ref_anti) <= 1e-9


class TestDispatch:
    def test_continuation_outside_series_domain(self):
        r = f2_eval(F2Params(3, 0.5, 0.7, 2, 2, -0.8, 0.5))
        assert r.method == "continuation"
        assert rel_err(r.value, REF_CONTINUATION) <= 1e-11

    def test_terminating_outside_uses_finite_sum(self):
        r = f2_eval(F2Params(3, -2, -1, 2, 1, 1.2, 0.9))
        assert rel_err(r.value, REF_L6_OUTSIDE[0.9]) <= 1e-13

    def test_no_strategy_lists_attempts(self):
        with pytest.raises(NoStrategyError) as info:
            f2_eval(F2Params(3, 0.5, 0.7, 2, 2, 0.6, 0.55))
        assert "lemma6" in str(info.value) and "series" in str(info.value)

    def test_interior_is_series_and_matches_error_estimate(self, rng):
        for _ in range(50):
            p = interior_params(rng)
            r = f2_eval(p)
            assert r.abs_error_estimate >= 0 and r.terms_used >= 1


class TestRecurrences:
    def test_examples(self):
        r = f2_recurrence_residual("R3.17", F2Params(2.5, 0.6, 0.9, 2, 3, 0.2, 0.3))
        assert r.rel_residual <= 1e-9
        r = f2_recurrence_residual("R3.22", F2Params(1.5, 1.2, 0.4, 2.2, 1.8, 0.25, 0.25))
        assert r.rel_residual <= 1e-9

    def test_r320_closed_forms(self):
        r = f2_recurrence_residual("R3.20", F2Params(2.0, 1.0, 0.6, 1.0, 1.0, 0.3, 0.2))
        assert r.rel_residual <= 1e-10

    @pytest.mark.parametrize("identity", RECURRENCES)
    @given(data=st.data())
    def test_residual_property(self, identity, data):
        from appellf2.verify import sample_recurrence

        seed = data.draw(st.integers(0, 2**32 - 1))
        p = sample_recurrence(identity, np.random.Generator(np.random.Philox(key=seed)))
        assert f2_recurrence_residual(identity, p).rel_residual <= 1e-9

    def test_unknown(self):
        with pytest.raises(ValueError):
            f2_recurrence_residual("R9.99", F2Params(1, 1, 1, 2, 2, 0.1, 0.1))


class TestF1:
    def test_origin(self):
        assert f1_series(F1Params(1.3, 0.4, 0.9, 2.2, 0.0, 0.0)).value == 1.0

    def test_reference(self):
        assert rel_err(f1_series(F1Params(1, 2, 2, 2, 0.2, 0.3)).value, REF_F1) <= 1e-12

    def test_terminating_b(self):
        assert rel_err(f1_series(F1Params(2, -1, 1, 3, 0.5, 0.25)).value, REF_F1_TERMINATING) <= 1e-12

    @pytest.mark.parametrize("args", [(0, 0, 0, 0, 0.3, 0.5), (1, 1, 0, 1, 0.2, 0.6), (0, 1, 1, 2, 0.5, 0.25)])
    def test_finite_sum_examples(self, args):
        a, s, t, d, x, y = args
        scale = math.gamma(a + 1) * math.gamma(d + 1) / math.gamma(a + d + 2)
        ref = scale * f1_series(F1Params(a + 1, s + 1, t + 1, a + d + 2, x, y), tol=1e-15).value
        assert rel_err(f1_finite_sum(a, s, t, d, x, y).value, ref) <= 1e-10

    def test_finite_sum_ill_conditioned(self):
        # the parts reach ~1e5 for a value near 6e-3; mpmath at 40 digits
        assert rel_err(f1_finite_sum(3, 0, 0, 3, -0.425, -0.076).value, 0.0056998201684073843586) <= 1e-13

    def test_finite_sum_domain(self):
        with pytest.raises(ParameterError):
            f1_finite_sum(0.5, 0, 0, 0, 0.1, 0.2)
