from __future__ import annotations

import mpmath
import pytest
from hypothesis import HealthCheck, settings

from polylogs.numerics import PrecisionConfig

settings.register_profile(
    "numeric",
    max_examples=15,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
    derandomize=True,
)
settings.load_profile("numeric")


@pytest.fixture(scope="session")
def prec() -> PrecisionConfig:
    return PrecisionConfig(256, 1e-30)


@pytest.fixture(autouse=True)
def _working_precision(prec):
    with prec.workprec():
        yield


def close(a, b, tol=1e-30) -> bool:
    return abs(mpmath.mpmathify(a) - mpmath.mpmathify(b)) < tol
