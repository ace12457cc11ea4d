import jinja2
import pytest

from torus_chow.contrib.jinja import configure_jinja_env, create_jinja_env
from torus_chow.lattice import AbelianGroupStructure
from torus_chow.reports import GroupRecord

jinja_env = jinja2.Environment()
configure_jinja_env(jinja_env, locale="de_DE")


def test_formats_number() -> None:
    template = jinja_env.from_string("{{ value|number }}")
    assert template.render(value=1234567) == "1.234.567"


def test_formats_seconds() -> None:
    template = jinja_env.from_string("{{ value|seconds }}")
    assert template.render(value=2.5) == "2,500 s"


@pytest.mark.parametrize(
    "value, expected",
    (
        (AbelianGroupStructure(torsion=(2,)), "Z/2"),
        (GroupRecord(free_rank=1, torsion=[3]), "Z + Z/3"),
        (None, "-"),
    ),
)
def test_formats_group(value: object, expected: str) -> None:
    template = jinja_env.from_string("{{ value|group }}")
    assert template.render(value=value) == expected


def test_formats_undefined_group() -> None:
    template = jinja_env.from_string("{{ missing|group }}")
    assert template.render() == "-"


def test_formats_subset() -> None:
    template = jinja_env.from_string("{{ value|subset }}")
    assert template.render(value=[1, 2]) == "{1, 2}"


def test_bundled_environment_loads_report_template() -> None:
    env = create_jinja_env()
    assert env.undefined is jinja2.StrictUndefined
    assert env.get_template("report.txt") is not None
