from __future__ import annotations

import pytest

from unipotent.catalog import (
    ARTIN_SCHREIER, DESCENT, KINDS, KUMMER, UnknownRecord, get_record, parse_elements, records,
)
from unipotent.errors import ParseError


def test_listing():
    recs = records()
    assert len(recs) >= 4
    ids = {r.id for r in recs}
    assert {"as-p2", "as-p3", "kummer-q-p2", "descent-f5t-p3"} <= ids
    assert all(r.kind in KINDS for r in recs)
    assert [r.kind for r in records(KUMMER)] == [KUMMER] * len(records(KUMMER))


@pytest.mark.parametrize("rec", records(), ids=lambda r: r.id)
def test_record_invariants(rec):
    assert rec.expected_order == rec.p ** 6
    assert rec.anchor
    el = parse_elements(rec)
    assert {"a", "b", "c"} <= set(el)
    js = rec.as_json()
    assert js["expectedOrder"] == rec.expected_order and "expected_order" not in js


def test_errors():
    with pytest.raises(UnknownRecord):
        get_record("nope")
    with pytest.raises(ParseError):
        records("heisenberg")
    assert get_record("as-p2").kind == ARTIN_SCHREIER
    assert get_record("descent-f5t-p3").kind == DESCENT
