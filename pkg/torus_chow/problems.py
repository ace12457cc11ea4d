"""
Standard resolutions and the problem file format.

A problem file is a JSON object:

```json
{
    "name": "q8",
    "group": {"degree": 8, "generators": [{"permutation": [3, 4, 2, 1, 7, 8, 6, 5]}]},
    "phat_embedding": [[1, 0], [1, 0], ...],
    "labels": ["e", "e'", ...],
    "degrees": [1, 3],
    "tasks": ["chow", "kernel", "cokernel"],
    "options": {"max_group_order": 256, "max_degree": 6, "oracle": false}
}
```

Permutations are 1-based one-line notation, `signs` (optional) is a vector of +1/-1, and `phat_embedding` lists the
N rows of the N x r matrix whose columns span P inside Q (an empty list means r = 0). See README.md for every field.
"""

from __future__ import annotations

import dataclasses
import functools
import importlib.resources
import logging
import os
import random
import typing

import pydantic

from torus_chow.chow import TASKS, ResolutionProblem
from torus_chow.exceptions import GroupTooLargeError, InputError, ProblemParseError
from torus_chow.groups import SignedPermutation, close_group, quaternion_group
from torus_chow.lattice import IntegerMatrix

logger = logging.getLogger(__name__)

FILE_TASKS = (*TASKS, "strata")
TaskName = typing.Literal["chow", "kernel", "cokernel", "h1-check", "strata"]
BUNDLED = ("q8", "signed_s4", "signed_s5", "norm_one_s3", "split")


def _variables(rank: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(rank))


def split_problem(rank: int) -> ResolutionProblem:
    """A split torus: trivial group, P = 0."""
    return ResolutionProblem(close_group([], degree=rank), IntegerMatrix.zeros(rank, 0), _variables(rank), "split")


def permutation_problem(
    generators: typing.Sequence[SignedPermutation], name: str = "permutation"
) -> ResolutionProblem:
    """T = Q is a permutation torus, P = 0."""
    group = close_group(generators)
    return ResolutionProblem(group, IntegerMatrix.zeros(group.degree, 0), _variables(group.degree), name)


def norm_one_problem(generators: typing.Sequence[SignedPermutation], name: str = "norm_one") -> ResolutionProblem:
    """Norm one torus: Q = Z^n permuted by the group, P the line of the all-ones vector."""
    group = close_group(generators)
    embedding = IntegerMatrix.from_columns([(1,) * group.degree], group.degree)
    return ResolutionProblem(group, embedding, _variables(group.degree), name)


def _signed_symmetric_generator(one_line: typing.Sequence[int], sign: int) -> SignedPermutation:
    # a_i^+ sits at 2i, a_i^- at 2i + 1; sigma sends a_i^e to a_(sigma i)^(e sgn sigma)
    image = []
    for point in range(len(one_line)):
        target = one_line[point] - 1
        image.append(2 * target if sign == 1 else 2 * target + 1)
        image.append(2 * target + 1 if sign == 1 else 2 * target)
    return SignedPermutation(tuple(image), (1,) * len(image))


def _pair_sums(letters: int) -> IntegerMatrix:
    """Columns b_(2i) + b_(2i+1), one per letter."""
    return IntegerMatrix.from_columns(
        [[int(row // 2 == i) for row in range(2 * letters)] for i in range(letters)], 2 * letters
    )


def _doubled_labels(letters: int) -> tuple[str, ...]:
    return tuple(f"a{i + 1}{sign}" for i in range(letters) for sign in "+-")


def _parity(one_line: typing.Sequence[int]) -> int:
    seen = [False] * len(one_line)
    sign = 1
    for start in range(len(one_line)):
        length = 0
        point = start
        while not seen[point]:
            seen[point] = True
            point = one_line[point] - 1
            length += 1
        if length and length % 2 == 0:
            sign = -sign
    return sign


def signed_symmetric_problem(n: int) -> ResolutionProblem:
    """
    S_n permuting a_1^+, a_1^-, ..., a_n^+, a_n^- by sigma(a_i^e) = a_(sigma i)^(e sgn sigma), with P spanned by
    the a_i^+ + a_i^-. The quotient T is Z^n with sigma(a_i) = sgn(sigma) a_(sigma i).
    """
    if n < 2:
        raise InputError(f"The signed action of S_n needs n >= 2, got {n}.")
    permutations = [[2, 1, *range(3, n + 1)]]
    if n > 2:
        permutations.append([*range(2, n + 1), 1])
    generators = [_signed_symmetric_generator(one_line, _parity(one_line)) for one_line in permutations]
    group = close_group(generators)
    return ResolutionProblem(group, _pair_sums(n), _doubled_labels(n), f"signed_s{n}")


QUATERNION_BASIS = ("e", "e'", "x", "x'", "y", "y'", "z", "z'")


def quaternion_problem() -> ResolutionProblem:
    """
    Q_8 acting on Z^8 by left multiplication on the basis e, e', x, x', y, y', z, z' (1, -1, i, -i, j, -j, k, -k),
    with P spanned by e + e', x + x', y + y', z + z'.
    """
    return ResolutionProblem(quaternion_group(), _pair_sums(4), QUATERNION_BASIS, "q8")


def _random_permutation_group(rng: random.Random, points: int, max_order: int) -> list[SignedPermutation]:
    while True:
        generators = []
        for _ in range(rng.randint(0, 2)):
            image = list(range(points))
            rng.shuffle(image)
            generators.append(SignedPermutation(tuple(image), (1,) * points))
        try:
            close_group(generators, max_order, degree=points)
        except GroupTooLargeError:
            continue
        return generators


def random_problem(rng: random.Random, *, max_order: int = 12, max_rank: int = 6) -> ResolutionProblem:
    """
    A small random resolution. Either the group permutes Z^n and P is spanned by the sums over some of its orbits,
    or each generator moves a doubled set a_i^+, a_i^- along a permutation of the letters, swapping the signs or
    not, and P is spanned by the a_i^+ + a_i^-.
    """
    if rng.random() < 0.5 or max_rank < 2:
        points = rng.randint(1, max_rank)
        generators = _random_permutation_group(rng, points, max_order)
        group = close_group(generators, max_order, degree=points)
        orbits: list[list[int]] = []
        for point in range(points):
            if not any(point in orbit for orbit in orbits):
                orbits.append(sorted({element.act_on_point(point) for element in group.elements}))
        chosen = [orbit for orbit in orbits if rng.random() < 0.5]
        columns = [[int(i in orbit) for i in range(points)] for orbit in chosen]
        embedding = IntegerMatrix.from_columns(columns, points)
        return ResolutionProblem(group, embedding, _variables(points), "random_orbits")

    letters = rng.randint(1, max_rank // 2)
    while True:
        base = _random_permutation_group(rng, letters, max_order)
        twisted = [
            _signed_symmetric_generator(g.one_line, _parity(g.one_line) if rng.random() < 0.5 else rng.choice((1, -1)))
            for g in base
        ]
        try:
            group = close_group(twisted, max_order, degree=2 * letters)
        except GroupTooLargeError:
            continue
        break
    return ResolutionProblem(group, _pair_sums(letters), _doubled_labels(letters), "random_doubled")


class GeneratorSpec(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid", strict=True)

    permutation: list[int]
    signs: list[int] | None = None


class GroupSpec(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid", strict=True)

    degree: int = pydantic.Field(ge=1)
    generators: list[GeneratorSpec] = []

    @pydantic.model_validator(mode="after")
    def check_generators(self) -> GroupSpec:
        for index, generator in enumerate(self.generators):
            if sorted(generator.permutation) != list(range(1, self.degree + 1)):
                raise ValueError(f"generator {index}: {generator.permutation} is not a permutation of 1..{self.degree}")
            if generator.signs is not None:
                if len(generator.signs) != self.degree:
                    raise ValueError(
                        f"generator {index}: sign vector has length {len(generator.signs)}, expected {self.degree}"
                    )
                if any(sign not in (1, -1) for sign in generator.signs):
                    raise ValueError(f"generator {index}: signs must be 1 or -1")
        return self


class OptionsSpec(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid", strict=True)

    max_group_order: int | None = pydantic.Field(default=None, ge=1)
    max_degree: int | None = pydantic.Field(default=None, ge=0)
    oracle: bool = False


class ProblemSpec(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid", strict=True)

    name: str = "problem"
    group: GroupSpec
    phat_embedding: list[list[int]] = []
    labels: list[str] | None = None
    degrees: list[int] = [1, 3]
    tasks: list[TaskName] = ["chow", "kernel", "cokernel"]
    options: OptionsSpec = OptionsSpec()

    @pydantic.model_validator(mode="after")
    def check_shapes(self) -> ProblemSpec:
        rows = self.phat_embedding
        if rows and len(rows) != self.group.degree:
            raise ValueError(f"phat_embedding has {len(rows)} rows, expected {self.group.degree}")
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise ValueError(f"phat_embedding rows have different lengths {sorted(widths)}")
        if self.labels is not None and len(self.labels) != self.group.degree:
            raise ValueError(f"labels has {len(self.labels)} entries, expected {self.group.degree}")
        if len(self.degrees) != 2 or not 0 <= self.degrees[0] <= self.degrees[1]:
            raise ValueError(f"degrees must be [a, b] with 0 <= a <= b, got {self.degrees}")
        return self


@dataclasses.dataclass(frozen=True)
class ProblemFile:
    """
    A parsed problem file. The group is closed on first access of `problem`, under the limits active then.
    """

    spec: ProblemSpec
    source: str

    @functools.cached_property
    def problem(self) -> ResolutionProblem:
        return problem_from_spec(self.spec)

    @property
    def degrees(self) -> range:
        return range(self.spec.degrees[0], self.spec.degrees[1] + 1)

    @property
    def tasks(self) -> tuple[str, ...]:
        return tuple(self.spec.tasks)

    @property
    def options(self) -> OptionsSpec:
        return self.spec.options


def _format_error(error: typing.Mapping[str, typing.Any]) -> str:
    location = ".".join(str(part) for part in error.get("loc", ()))
    message = str(error.get("msg", "invalid value"))
    return f"{location}: {message}" if location else message


def problem_from_spec(spec: ProblemSpec) -> ResolutionProblem:
    degree = spec.group.degree
    generators = [SignedPermutation.from_one_line(g.permutation, g.signs) for g in spec.group.generators]
    group = close_group(generators, degree=degree)
    if spec.phat_embedding:
        embedding = IntegerMatrix.from_rows(spec.phat_embedding)
    else:
        embedding = IntegerMatrix.zeros(degree, 0)
    labels = tuple(spec.labels) if spec.labels is not None else _variables(degree)
    return ResolutionProblem(group, embedding, labels, spec.name)


def parse_problem_text(text: str, source: str = "<string>") -> ProblemFile:
    """Strictly parse a problem; unknown keys, non-integers and inconsistent shapes raise ProblemParseError."""
    try:
        spec = ProblemSpec.model_validate_json(text)
    except pydantic.ValidationError as exc:
        raise ProblemParseError(source, [_format_error(error) for error in exc.errors()]) from exc
    logger.debug("Parsed problem %s from %s", spec.name, source)
    return ProblemFile(spec, source)


def parse_problem(path: str | os.PathLike[str]) -> ProblemFile:
    try:
        with open(path, "rb") as stream:
            data = stream.read()
    except OSError as exc:
        raise ProblemParseError(str(path), [exc.strerror or str(exc)]) from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ProblemParseError(str(path), [f"not UTF-8 at byte {exc.start}: {exc.reason}"]) from exc
    return parse_problem_text(text, str(path))


def bundled_problem(name: str) -> ProblemFile:
    """One of the problem files shipped in `torus_chow/data`."""
    if name not in BUNDLED:
        raise ProblemParseError(name, [f"unknown bundled problem, choose from {', '.join(BUNDLED)}"])
    resource = importlib.resources.files("torus_chow") / "data" / f"{name}.json"
    return parse_problem_text(resource.read_text(encoding="utf-8"), f"{name}.json")
