import pytest

from ...scenario import ScenarioParseError
from ..documents import DocumentParseError, as_float, as_int, as_list, as_pair, check_keys


def test_check_keys():
    check_keys({"a": 1, "b": 2}, ["a"], "$", optional=["b"])

    with pytest.raises(DocumentParseError, match="\\$.x: expected an object, got list"):
        check_keys([], ["a"], "$.x")
    with pytest.raises(DocumentParseError, match="unknown keys \\['c'\\]"):
        check_keys({"a": 1, "c": 2}, ["a"], "$")
    with pytest.raises(DocumentParseError, match="missing keys \\['a'\\]"):
        check_keys({}, ["a"], "$")


def test_as_int():
    assert as_int(3, "x") == 3
    with pytest.raises(DocumentParseError, match="x: expected an integer"):
        as_int(True, "x")
    with pytest.raises(DocumentParseError):
        as_int(3.0, "x")


def test_as_float():
    value = as_float(3, "x")
    assert value == 3.0
    assert isinstance(value, float)
    with pytest.raises(DocumentParseError):
        as_float(False, "x")
    with pytest.raises(DocumentParseError):
        as_float("3", "x")


def test_as_pair():
    assert as_pair([1, 2], "w", as_int) == (1, 2)
    with pytest.raises(DocumentParseError, match="w: expected a list of two numbers"):
        as_pair([1, 2, 3], "w", as_int)
    with pytest.raises(DocumentParseError, match="w\\[1\\]"):
        as_pair([1, 2.5], "w", as_int)


def test_as_list():
    assert as_list([], "l") == []
    with pytest.raises(DocumentParseError, match="l: expected a list, got dict"):
        as_list({}, "l")


def test_scenario_parse_error_is_document_parse_error():
    assert ScenarioParseError is DocumentParseError
