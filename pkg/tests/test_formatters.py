from babel import Locale

from torus_chow.formatters import (
    format_group,
    format_monomial,
    format_number,
    format_polynomial,
    format_seconds,
    format_subset,
    parse_locale,
)
from torus_chow.lattice import AbelianGroupStructure
from torus_chow.symalg import HomogeneousElement


def test_parse_locale_from_string() -> None:
    assert parse_locale("be_BY").language == "be"


def test_parse_locale_from_locale() -> None:
    assert parse_locale(Locale.parse("be_BY")).language == "be"


def test_parse_locale_from_none() -> None:
    assert parse_locale(None).language == "en"


def test_format_number() -> None:
    assert format_number(1234567) == "1,234,567"
    assert format_number(1234567, locale="de_DE") == "1.234.567"


def test_format_seconds() -> None:
    assert format_seconds(1.5) == "1.500 s"
    assert format_seconds(0.25, locale="de_DE") == "0,250 s"


def test_format_group() -> None:
    assert format_group(None) == "-"
    assert format_group(AbelianGroupStructure()) == "0"
    assert format_group(AbelianGroupStructure(free_rank=2, torsion=(2, 4))) == "Z^2 + Z/2 + Z/4"


def test_format_monomial() -> None:
    assert format_monomial((2, 0, 1), ["x", "y", "z"]) == "x^2*z"
    assert format_monomial((0, 0), ["x", "y"]) == "1"


def test_format_polynomial() -> None:
    element = HomogeneousElement.from_terms(2, 2, {(1, 1): 2, (0, 2): -1})
    assert format_polynomial(element, ["x", "y"]) == "2*x*y - y^2"
    assert format_polynomial(-element) == "-2*x1*x2 + x2^2"
    assert format_polynomial(HomogeneousElement(2, 1, (0, 0))) == "0"
    assert format_polynomial(3 * HomogeneousElement.one(2)) == "3"


def test_format_polynomial_with_primed_labels() -> None:
    labels = ["e", "e'", "x", "x'"]
    element = HomogeneousElement.from_terms(4, 2, {(0, 0, 1, 1): 1, (1, 1, 0, 0): -1})
    assert format_polynomial(element, labels) == "-e*e' + x*x'"


def test_format_subset() -> None:
    assert format_subset([1, 3]) == "{1, 3}"
    assert format_subset([2], ["a", "b"]) == "{b}"
    assert format_subset([]) == "{}"
