from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from pcabench.oracle import make_extension, succ_table
from pcabench.suites import base_model

settings.register_profile("pcabench", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pcabench")


@pytest.fixture(scope="session")
def term():
    return base_model("term")


@pytest.fixture(scope="session")
def numeric():
    return base_model("numeric")


@pytest.fixture(scope="session")
def sk():
    return base_model("term-sk")


@pytest.fixture(scope="session")
def ext(term):
    """The term model extended by the successor table on 0..15."""
    return make_extension(term, succ_table(term))
