import json

import pytest
from hypothesis import given

from conftest import balanced_specs
from thetafactor.errors import InvariantViolation, ParseError
from thetafactor.spec_io import load_spec, parse_spec, rational, serialize, spec_from_dict

MINIMAL = {"g1": 1, "g2": 1, "c1": 1, "c2": 1, "r": 2, "k": 2, "chi": 2, "ell_total": 2, "points": []}


def with_point(**overrides):
    p = {"id": "p", "component": "C1", "flag_type": [1, 1], "weights": [1, 2], "alpha": 1}
    p.update(overrides)
    return MINIMAL | {"k": 3, "chi": 1, "ell_total": 0, "points": [p]}


def test_load_minimal(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(MINIMAL))
    spec = load_spec(path)
    assert (spec.r, spec.k, spec.chi, spec.ell1, spec.ell2) == (2, 2, 2, 1, 1)


def test_weight_monotonicity_path():
    with pytest.raises(InvariantViolation) as info:
        spec_from_dict(with_point(weights=[2, 1]))
    assert info.value.path == "points[0].weights"


def test_balance_path():
    with pytest.raises(InvariantViolation) as info:
        spec_from_dict(MINIMAL | {"chi": 3})
    assert info.value.path == "balance"


@pytest.mark.parametrize(
    "doc, path",
    [
        (MINIMAL | {"r": 0}, "r"),
        (MINIMAL | {"g1": "1"}, "g1"),
        (MINIMAL | {"ell_total": 1, "chi": 1}, "ell_total"),
        (with_point(alpha=2), "points[0].alpha"),
        (with_point(component="Node1"), "points[0].component"),
        (with_point(flag_type=[1, 2]), "points[0].flag_type"),
        ({k: v for k, v in MINIMAL.items() if k != "k"}, "k"),
    ],
)
def test_invariant_paths(doc, path):
    with pytest.raises(InvariantViolation) as info:
        spec_from_dict(doc)
    assert info.value.path == path


def test_malformed_json():
    with pytest.raises(ParseError):
        parse_spec("{not json")


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_spec(tmp_path / "absent.json")


@given(balanced_specs)
def test_round_trip(spec):
    assert parse_spec(serialize(spec)) == spec
    assert serialize(parse_spec(serialize(spec))) == serialize(spec)


def test_rational_strings():
    from fractions import Fraction

    assert rational(Fraction(3, 6)) == "1/2"
    assert rational(Fraction(-4, 2)) == "-2"
