"""
Machine readable reports. A report is deterministic for a given problem and task list unless timings are asked for.
"""

from __future__ import annotations

import logging
import typing

import pydantic

from torus_chow.chow import (
    TASKS,
    DegreeReport,
    ResolutionProblem,
    ValidatedProblem,
    Witness,
    degree_reports,
    oracle_check,
    validate,
)
from torus_chow.formatters import format_polynomial
from torus_chow.lattice import AbelianGroupStructure
from torus_chow.weil import Block, StratumDescriptor, gamma_set_from_problem, lemma12_check, strata

logger = logging.getLogger(__name__)


class _Record(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)


class GroupRecord(_Record):
    free_rank: int = 0
    torsion: list[int] = []

    @classmethod
    def from_structure(cls, structure: AbelianGroupStructure | None) -> GroupRecord | None:
        if structure is None:
            return None
        return cls(free_rank=structure.free_rank, torsion=list(structure.torsion))

    def to_structure(self) -> AbelianGroupStructure:
        return AbelianGroupStructure(self.free_rank, tuple(self.torsion))

    def __str__(self) -> str:
        return str(self.to_structure())


class WitnessRecord(_Record):
    """A generator of a cyclic summand of the kernel; `order` 0 means infinite order."""

    order: int
    exponents: list[list[int]]
    coefficients: list[int]
    text: str

    @classmethod
    def from_witness(cls, witness: Witness, labels: typing.Sequence[str]) -> WitnessRecord:
        terms = witness.element.terms
        return cls(
            order=witness.order,
            exponents=[list(monomial) for monomial in terms],
            coefficients=list(terms.values()),
            text=format_polynomial(witness.element, labels),
        )


class DegreeRecord(_Record):
    degree: int
    chow_group: GroupRecord | None = None
    kernel: GroupRecord | None = None
    cokernel: GroupRecord | None = None
    h1: GroupRecord | None = None
    witnesses: list[WitnessRecord] = []
    seconds: float | None = None

    @classmethod
    def from_report(cls, report: DegreeReport, labels: typing.Sequence[str], timings: bool = False) -> DegreeRecord:
        return cls(
            degree=report.degree,
            chow_group=GroupRecord.from_structure(report.chow_group),
            kernel=GroupRecord.from_structure(report.kernel),
            cokernel=GroupRecord.from_structure(report.cokernel),
            h1=GroupRecord.from_structure(report.h1_check),
            witnesses=[WitnessRecord.from_witness(witness, labels) for witness in report.witnesses],
            seconds=report.elapsed if timings else None,
        )


class BlockRecord(_Record):
    """Points are 1-based; `stabilizer_order` is the order of the stabilizer of the least point."""

    points: list[int]
    stabilizer_order: int

    @classmethod
    def from_block(cls, block: Block) -> BlockRecord:
        return cls(points=[point + 1 for point in block.points], stabilizer_order=block.stabilizer.order)


class StratumRecord(_Record):
    p: int
    subset: list[int]
    orbit_size: int
    stabilizer_order: int
    field_degree: int
    torus_rank: int
    blocks: list[BlockRecord]
    complement_blocks: list[BlockRecord]
    base_change_matches: bool

    @classmethod
    def from_descriptor(cls, descriptor: StratumDescriptor, base_change_matches: bool) -> StratumRecord:
        return cls(
            p=descriptor.p,
            subset=[point + 1 for point in descriptor.subset],
            orbit_size=descriptor.orbit_size,
            stabilizer_order=descriptor.stabilizer.order,
            field_degree=descriptor.field_degree,
            torus_rank=descriptor.torus_rank,
            blocks=[BlockRecord.from_block(block) for block in descriptor.blocks],
            complement_blocks=[BlockRecord.from_block(block) for block in descriptor.complement_blocks],
            base_change_matches=base_change_matches,
        )


class ReportFile(_Record):
    name: str
    group_order: int
    qhat_rank: int
    phat_rank: int
    that_rank: int
    labels: list[str]
    tasks: list[str]
    oracle: bool = False
    degrees: list[DegreeRecord] = []
    strata: list[StratumRecord] = []

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)


def stratum_records(problem: ResolutionProblem) -> list[StratumRecord]:
    """Every stratum of the standard representation, p = 0..N, with the base change check on its subset."""
    gs = gamma_set_from_problem(problem)
    records = []
    for p in range(gs.points + 1):
        for descriptor in strata(gs, p):
            records.append(StratumRecord.from_descriptor(descriptor, bool(lemma12_check(gs, descriptor.subset))))
    return records


def build_report(
    problem: ResolutionProblem,
    degrees: typing.Iterable[int],
    tasks: typing.Iterable[str],
    *,
    oracle: bool = False,
    jobs: int = 1,
    timings: bool = False,
) -> ReportFile:
    """
    Run `tasks` over `degrees`. Chow tasks need a valid resolution; "strata" needs an action without signs.
    With `oracle` the fast ideal and invariant computations are re-checked against the exhaustive ones.
    """
    selected = list(dict.fromkeys(tasks))
    chow_tasks = [task for task in selected if task in TASKS]
    validated: ValidatedProblem | None = None
    records: list[DegreeRecord] = []
    if chow_tasks:
        validated = validate(problem)
        ordered = sorted(set(degrees))
        if oracle:
            for degree in ordered:
                if degree > 0:
                    oracle_check(validated, degree)
            logger.info("Oracle checks passed for degrees %s", ordered)
        reports = degree_reports(validated, ordered, tasks=chow_tasks, jobs=jobs)
        records = [DegreeRecord.from_report(report, validated.labels, timings) for report in reports]

    labels = validated.labels if validated is not None else tuple(problem.labels or ())
    return ReportFile(
        name=problem.name,
        group_order=problem.group.order,
        qhat_rank=problem.qhat_rank,
        phat_rank=problem.phat_rank,
        that_rank=problem.that_rank,
        labels=list(labels),
        tasks=selected,
        oracle=oracle,
        degrees=records,
        strata=stratum_records(problem) if "strata" in selected else [],
    )
