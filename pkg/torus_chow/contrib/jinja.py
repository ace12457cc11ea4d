import functools
import typing

import jinja2
from babel import Locale

from torus_chow import formatters
from torus_chow.lattice import AbelianGroupStructure


def _format_group(value: typing.Any) -> str:
    if value is None or isinstance(value, jinja2.Undefined):
        return formatters.format_group(None)
    if isinstance(value, AbelianGroupStructure):
        return formatters.format_group(value)
    return formatters.format_group(value.to_structure())


def configure_jinja_env(jinja_env: jinja2.Environment, locale: str | Locale | None = None) -> None:
    """Register report filters; numbers and timings are formatted for `locale`."""
    jinja_env.filters.update(
        {
            "number": functools.partial(formatters.format_number, locale=locale),
            "seconds": functools.partial(formatters.format_seconds, locale=locale),
            "group": _format_group,
            "subset": formatters.format_subset,
        }
    )


def create_jinja_env(locale: str | Locale | None = None) -> jinja2.Environment:
    """Environment that loads the bundled report templates."""
    jinja_env = jinja2.Environment(
        loader=jinja2.PackageLoader("torus_chow", "templates"),
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
        undefined=jinja2.StrictUndefined,
    )
    configure_jinja_env(jinja_env, locale)
    return jinja_env
