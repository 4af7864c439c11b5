"""Acceptance criteria 1-9 at their stated tolerances, one PASS/FAIL line each."""

from __future__ import annotations

import pytest

from polylogs.numerics import PrecisionConfig
from polylogs.selftest import run_suite

PREC = PrecisionConfig(256, 1e-30)

# (criterion, suite name, runtime limit in seconds or None)
CRITERIA = [
    (1, "monodromy", 60.0),
    (2, "zeta", 120.0),
    (3, "five-term", None),
    (4, "single-valued", None),
    (5, "special-values", None),
    (6, "chen", None),
    (7, "regulator", None),
    (8, "exact", None),
    (9, "volume", None),
]


@pytest.mark.slow
@pytest.mark.parametrize("criterion,suite,limit", CRITERIA, ids=[f"criterion_{c}_{s}" for c, s, _ in CRITERIA])
def test_criterion(capsys, criterion, suite, limit):
    result = run_suite(suite, seed=2024, prec=PREC)
    within_time = limit is None or result.elapsed < limit
    passed = result.passed and within_time
    line = f"criterion {criterion}: {result.line()}"
    if limit is not None:
        line += f" limit={limit:.0f}s"
    with capsys.disabled():
        print(f"\n{'PASS' if passed else 'FAIL'} {line}")
        for detail in result.details[:5]:
            print(f"    {detail}")
    assert result.passed, "\n".join(result.details[:10])
    assert within_time, f"{suite} took {result.elapsed:.1f}s (limit {limit}s)"
