from __future__ import annotations

import typing

if typing.TYPE_CHECKING:  # pragma: nocover
    from torus_chow.lattice import AbelianGroupStructure


class TorusChowError(Exception):
    """Base class for every error raised by this package."""

    exit_code: typing.ClassVar[int] = 1
    category: typing.ClassVar[str] = "error"


class InputError(TorusChowError, ValueError):
    """Arguments do not fit together (lengths, ambient ranks, degrees)."""

    exit_code = 3
    category = "input"


class ProblemParseError(InputError):
    """A problem file could not be read or does not follow the documented format."""

    exit_code = 2
    category = "parse"

    def __init__(self, source: str, details: typing.Sequence[str]) -> None:
        self.source = source
        self.details = tuple(details)
        super().__init__(f"{source}: " + "; ".join(self.details))


class ValidationError(InputError):
    """A resolution 0 -> P -> Q -> T -> 0 on characters is not well formed."""

    category = "validation"


class RankDeficientError(ValidationError):
    def __init__(self, rank: int, columns: int) -> None:
        self.rank = rank
        self.columns = columns
        super().__init__(f"Embedding has {columns} columns but rank {rank}; it is not injective.")


class UnstableSublatticeError(ValidationError):
    def __init__(self, element: str, element_index: int) -> None:
        self.element = element
        self.element_index = element_index
        super().__init__(f"Sublattice is not stable under group element #{element_index} ({element}).")


class TorsionQuotientError(ValidationError):
    def __init__(self, factors: typing.Sequence[int]) -> None:
        self.factors = tuple(factors)
        super().__init__(
            f"Quotient lattice has torsion (invariant factors {list(self.factors)}); not a torus quotient."
        )


class PreconditionError(InputError):
    """An operation was called on inputs that violate its documented precondition."""

    category = "precondition"


class ResourceBoundError(TorusChowError):
    exit_code = 4
    category = "resource"


class GroupTooLargeError(ResourceBoundError):
    def __init__(self, bound: int) -> None:
        self.bound = bound
        super().__init__(f"Group too large: more than {bound} elements.")


class DegreeTooLargeError(ResourceBoundError):
    def __init__(self, degree: int, cap: int) -> None:
        self.degree = degree
        self.cap = cap
        super().__init__(f"Degree {degree} exceeds the configured cap {cap}.")


class GammaSetTooLargeError(ResourceBoundError):
    def __init__(self, points: int, cap: int) -> None:
        self.points = points
        self.cap = cap
        super().__init__(f"Gamma-set with {points} points exceeds the configured cap {cap}.")


class InvariantViolationError(TorusChowError):
    """An internal consistency check failed. Results computed so far cannot be trusted."""

    exit_code = 5
    category = "invariant"


class CrossCheckMismatchError(InvariantViolationError):
    def __init__(self, degree: int, cokernel: AbelianGroupStructure, h1: AbelianGroupStructure) -> None:
        self.degree = degree
        self.cokernel = cokernel
        self.h1 = h1
        super().__init__(f"Degree {degree}: direct cokernel {cokernel} differs from H^1(J_d) {h1}.")
