"""
Command line front end.

    torus-chow --example q8 --degrees 1..3 --tasks chow,kernel,cokernel,h1-check
    torus-chow --input problem.json --format structured --output report.json

Exit codes: 0 success, 2 parse error, 3 validation error, 4 resource bound, 5 invariant or cross-check failure.
"""

from __future__ import annotations

import argparse
import logging
import pathlib
import sys
import typing

from torus_chow.contrib.jinja import create_jinja_env
from torus_chow.exceptions import TorusChowError
from torus_chow.limits import switch_limits
from torus_chow.problems import BUNDLED, FILE_TASKS, ProblemFile, bundled_problem, parse_problem
from torus_chow.reports import ReportFile, build_report

logger = logging.getLogger("torus_chow")


def _degree_range(value: str) -> range:
    first, separator, last = value.partition("..")
    try:
        low = int(first)
        high = int(last) if separator else low
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a degree or a range a..b, got {value!r}") from None
    if not 0 <= low <= high:
        raise argparse.ArgumentTypeError(f"expected 0 <= a <= b, got {value!r}")
    return range(low, high + 1)


def _task_list(value: str) -> list[str]:
    tasks = [task.strip() for task in value.split(",") if task.strip()]
    unknown = [task for task in tasks if task not in FILE_TASKS]
    if unknown or not tasks:
        raise argparse.ArgumentTypeError(f"unknown tasks {unknown}, choose from {', '.join(FILE_TASKS)}")
    return tasks


def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="torus-chow",
        description="Chow groups of classifying spaces of tori with a resolution by special tori.",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", dest="input_path", type=pathlib.Path, help="problem file (JSON)")
    source.add_argument("--example", choices=BUNDLED, help="bundled problem file")
    parser.add_argument("--degrees", type=_degree_range, help="degree or inclusive range a..b")
    parser.add_argument("--tasks", type=_task_list, help=f"comma separated subset of {', '.join(FILE_TASKS)}")
    parser.add_argument("--format", dest="output_format", choices=("table", "structured"), default="table")
    parser.add_argument("--oracle", action="store_true", default=None, help="re-check against exhaustive methods")
    parser.add_argument("--max-group-order", type=int)
    parser.add_argument("--max-degree", type=int)
    parser.add_argument("--jobs", type=int, default=1, help="degrees computed in parallel")
    parser.add_argument("--timings", action="store_true", help="include per degree timings")
    parser.add_argument("--locale", default="en_US", help="locale for numbers in tables")
    parser.add_argument("--output", dest="output_path", type=pathlib.Path, help="write the report here")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser.parse_args(argv)


def _configure_logging(verbose: bool) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    return handler


def _limit_overrides(args: argparse.Namespace, problem_file: ProblemFile) -> dict[str, int]:
    changes: dict[str, int] = {}
    max_group_order = (
        args.max_group_order if args.max_group_order is not None else problem_file.options.max_group_order
    )
    max_degree = args.max_degree if args.max_degree is not None else problem_file.options.max_degree
    if max_group_order is not None:
        changes["max_group_order"] = max_group_order
    if max_degree is not None:
        changes["max_degree"] = max_degree
    return changes


def render_table(report: ReportFile, locale: str = "en_US") -> str:
    template = create_jinja_env(locale).get_template("report.txt")
    return template.render(report=report)


def _emit(text: str, path: pathlib.Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def run(argv: typing.Sequence[str]) -> int:
    """Run the pipeline for one problem and return the exit status."""
    args = _parse_args(list(argv))
    handler = _configure_logging(args.verbose)
    try:
        problem_file = parse_problem(args.input_path) if args.input_path else bundled_problem(args.example)
        degrees = args.degrees if args.degrees is not None else problem_file.degrees
        tasks = args.tasks if args.tasks is not None else problem_file.tasks
        oracle = args.oracle if args.oracle is not None else problem_file.options.oracle
        with switch_limits(**_limit_overrides(args, problem_file)):
            report = build_report(
                problem_file.problem,
                degrees,
                tasks,
                oracle=oracle,
                jobs=args.jobs,
                timings=args.timings,
            )
        if args.output_format == "structured":
            text = report.to_json() + "\n"
        else:
            text = render_table(report, args.locale)
        _emit(text, args.output_path)
    except TorusChowError as exc:
        logger.error("%s error: %s", exc.category, exc)
        return exc.exit_code
    finally:
        logger.removeHandler(handler)
    return 0


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
