import contextvars as cv
import dataclasses
import typing
from contextlib import contextmanager


@dataclasses.dataclass(frozen=True)
class Limits:
    """Resource bounds shared by all computations."""

    max_group_order: int = 256
    max_degree: int = 6
    max_points: int = 16


_current_limits: cv.ContextVar[Limits] = cv.ContextVar("current_limits", default=Limits())


def get_limits() -> Limits:
    """Return currently active limits."""
    return _current_limits.get()


def set_limits(limits: Limits | None = None, **changes: int) -> None:
    """Set active limits. Keyword arguments replace single fields of the given (or current) limits."""
    base = limits or get_limits()
    _current_limits.set(dataclasses.replace(base, **changes))


@contextmanager
def switch_limits(limits: Limits | None = None, **changes: int) -> typing.Generator[Limits, None, None]:
    """
    Temporary switch resource limits for a code block. The previous limits will be restored after exiting the
    manager. Use it as any other context manager:

    ```python
    from torus_chow import switch_limits, close_group

    with switch_limits(max_group_order=24):
        close_group(generators)  # raises GroupTooLargeError beyond 24 elements
    ```
    """
    old_limits = get_limits()
    set_limits(limits, **changes)
    try:
        yield get_limits()
    finally:
        set_limits(old_limits)
