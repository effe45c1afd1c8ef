import json

import numpy as np
import pytest

from appellf2.special_core import IdentityReport
from appellf2.verify import (
    SUITES,
    THRESHOLDS,
    Case,
    appendix_cases,
    continuation_cases,
    product_cases,
    recurrence_cases,
    run_suite,
    sample_recurrence,
    suite_rng,
)
from appellf2.appell import RECURRENCES


def test_rng_streams_are_reproducible_and_distinct():
    a = suite_rng(7, "appendix").uniform(size=4)
    assert np.array_equal(a, suite_rng(7, "appendix").uniform(size=4))
    assert not np.array_equal(a, suite_rng(8, "appendix").uniform(size=4))
    assert not np.array_equal(a, suite_rng(7, "recurrences").uniform(size=4))


def test_case_pass_rule():
    ok = Case("appendix", "I.1", {}, IdentityReport.compare("I.1", 1.0, 1.0 + 1e-10, "q", "c"), threshold=1e-8)
    bad = Case("appendix", "I.1", {}, IdentityReport.compare("I.1", 1.0, 1.1, "q", "c"), threshold=1e-8)
    tiny = Case("appendix", "I.1", {}, IdentityReport.compare("I.1", 0.0, 1e-13, "q", "c"), threshold=1e-8)
    errored = Case("appendix", "I.1", {}, error="DomainError: x", threshold=1e-8)
    assert ok.passed and not bad.passed and tiny.passed and not errored.passed
    assert errored.as_dict()["error"] == "DomainError: x"


def test_appendix_grid_shape():
    cases = list(appendix_cases(7))
    ids = {c.identity_id for c in cases}
    assert len(ids) == 21
    assert all(sum(c.identity_id == i for c in cases) >= 5 for i in ids)
    i17 = [c.params["a"] for c in cases if c.identity_id == "I.17"]
    assert any(a == 0 for a in i17) and any(a != 0 for a in i17)
    assert all(c.passed for c in cases)


def test_recurrence_points_small():
    cases = list(recurrence_cases(3, points=10))
    assert len(cases) == 70 and all(c.passed for c in cases)


@pytest.mark.parametrize("identity", RECURRENCES)
def test_recurrence_sampler_in_domain(identity, rng):
    for _ in range(20):
        p = sample_recurrence(identity, rng)
        assert abs(p.x) + abs(p.y) <= 0.8


def test_continuation_and_product_small():
    cases = list(continuation_cases(5, points=5, quad_points=3)) + list(product_cases(5, points=5, integral_points=2))
    assert all(c.passed for c in cases), [c.as_dict() for c in cases if not c.passed]


def test_thresholds_cover_suites():
    assert set(THRESHOLDS) == set(SUITES)


def test_run_suite_deterministic():
    a = json.dumps(run_suite("recurrences", 11).as_dict())
    b = json.dumps(run_suite("recurrences", 11).as_dict())
    assert a == b
    assert a != json.dumps(run_suite("recurrences", 12).as_dict())


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
