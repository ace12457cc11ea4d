"""
Human readable rendering of polynomials, abelian groups, subsets and timings.

Numbers go through Babel so that tables follow the requested locale.
"""

import typing

from babel import Locale, numbers

from torus_chow.lattice import AbelianGroupStructure
from torus_chow.symalg import HomogeneousElement, Monomial

DEFAULT_LOCALE = "en_US"


def parse_locale(locale: str | Locale | None) -> Locale:
    """
    Parse locale from string, Locale object, or None. If None passed then the default locale returned.

    Part of internal API.
    """
    if locale is None:
        return Locale.parse(DEFAULT_LOCALE)
    if isinstance(locale, str):
        return Locale.parse(locale)
    return locale


def format_number(number: int | float, locale: str | Locale | None = None) -> str:
    return typing.cast(str, numbers.format_decimal(number, locale=parse_locale(locale)))


def format_seconds(seconds: float, locale: str | Locale | None = None) -> str:
    value = numbers.format_decimal(seconds, format="#,##0.000", locale=parse_locale(locale))
    return f"{value} s"


def format_group(structure: AbelianGroupStructure | None) -> str:
    """`Z^2 + Z/2 + Z/4`, `0` for the trivial group and `-` when nothing was computed."""
    if structure is None:
        return "-"
    return str(structure)


def format_monomial(monomial: Monomial, labels: typing.Sequence[str]) -> str:
    factors = []
    for label, exponent in zip(labels, monomial):
        if exponent == 1:
            factors.append(label)
        elif exponent > 1:
            factors.append(f"{label}^{exponent}")
    return "*".join(factors) or "1"


def format_polynomial(element: HomogeneousElement, labels: typing.Sequence[str] | None = None) -> str:
    """
    Terms in basis order, `2*x*y - x'*y'`. Without labels the variables are called x1, x2, ...
    """
    names = labels if labels is not None else [f"x{i + 1}" for i in range(element.rank)]
    parts: list[str] = []
    for monomial, coefficient in element.terms.items():
        body = format_monomial(monomial, names)
        magnitude = abs(coefficient)
        term = body if magnitude == 1 else (str(magnitude) if body == "1" else f"{magnitude}*{body}")
        if not parts:
            parts.append(term if coefficient > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if coefficient > 0 else f"- {term}")
    return " ".join(parts) or "0"


def format_subset(points: typing.Iterable[int], labels: typing.Sequence[str] | None = None) -> str:
    """1-based points as `{1, 3}`, or by their labels when labels are given."""
    names = [labels[point - 1] if labels is not None else str(point) for point in points]
    return "{" + ", ".join(names) + "}"
