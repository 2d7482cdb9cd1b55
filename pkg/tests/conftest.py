from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "unipotent", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("unipotent")


@pytest.fixture(scope="session")
def as_p2():
    from unipotent.catalog import build_record, get_record

    return build_record(get_record("as-p2"))


@pytest.fixture(scope="session")
def kummer_q_p2():
    from unipotent.catalog import build_record, get_record

    return build_record(get_record("kummer-q-p2"))


@pytest.fixture(scope="session")
def kummer_f7t_p3():
    from unipotent.catalog import build_record, get_record

    return build_record(get_record("kummer-f7t-p3"))


@pytest.fixture(scope="session")
def as_p3():
    from unipotent.catalog import build_record, get_record

    return build_record(get_record("as-p3"))


@pytest.fixture(scope="session")
def descent_shipped():
    from unipotent.catalog import get_record, trace_text
    from unipotent.serialize import loads, trace_from_json

    return trace_from_json(loads(trace_text(get_record("descent-f5t-p3"))))
