import pytest

from harmonic_census.exceptions import InvalidParameterError
from harmonic_census.utils.parsers import parse_a_grid, parse_float_list, parse_rect


def test_parse_float_list():
    assert parse_float_list("1.1,1.37, 3.54") == [1.1, 1.37, 3.54]
    assert parse_float_list("") == []
    assert parse_float_list(None) == []
    with pytest.raises(InvalidParameterError):
        parse_float_list("1.1,abc")


def test_parse_a_grid_linear_default():
    assert parse_a_grid("1:3:5") == [1.0, 1.5, 2.0, 2.5, 3.0]
    assert parse_a_grid("1:3:5,lin") == parse_a_grid("1:3:5")


def test_parse_a_grid_log():
    values = parse_a_grid("1:100:3,log")
    assert values == pytest.approx([1.0, 10.0, 100.0])
    assert values[0] == 1.0


@pytest.mark.parametrize(
    "spec", ["1:3", "1:3:x", "1:3:0", "1:3:4,cubic", "0:3:4,log", "a:b:c"]
)
def test_parse_a_grid_rejects(spec):
    with pytest.raises(InvalidParameterError):
        parse_a_grid(spec)


def test_parse_rect():
    rect = parse_rect("0.5,1.5,-1,1")
    assert rect.as_tuple() == (0.5, 1.5, -1.0, 1.0)


@pytest.mark.parametrize("spec", ["1,2,3", "1,0,0,1", "a,1,0,1"])
def test_parse_rect_rejects(spec):
    with pytest.raises(InvalidParameterError):
        parse_rect(spec)
