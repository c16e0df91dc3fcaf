from __future__ import annotations

import pytest

from fixlab import errors
from fixlab.caps import Caps, current_caps, parse_caps


def test_defaults():
    assert parse_caps("") == Caps()


def test_key_value_and_json():
    assert parse_caps("chains=10, pataraia_q=4") == Caps(chains=10, pataraia_q=4)
    assert parse_caps('{"blowup_n": 8}').blowup_n == 8


@pytest.mark.parametrize("text", ["bogus=1", "chains=x", "chains=0"])
def test_rejected(text):
    with pytest.raises(errors.SchemaError):
        parse_caps(text)


def test_environment(monkeypatch):
    monkeypatch.setenv("FIXLAB_CAPS", "arrow_stage=3")
    assert current_caps().arrow_stage == 3


@pytest.mark.parametrize(
    "cls, code",
    [
        (errors.FixlabError, 5),
        (errors.NotMonotone, 5),
        (errors.SchemaError, 3),
        (errors.MalformedGraph, 3),
        (errors.NonCanonical, 3),
        (errors.InvariantViolation, 6),
    ],
)
def test_exit_codes(cls, code):
    assert cls.exit_code == code


def test_size_limits_share_exit_code():
    for cls in (errors.SizeLimit, errors.MSizeLimit, errors.ProgEnumerationLimit, errors.CarrierTooLarge):
        assert cls("thing", 5, 4).exit_code == 4
