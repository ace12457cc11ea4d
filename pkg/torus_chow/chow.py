"""
Chow groups of the classifying space of a torus T with a resolution 0 -> T -> Q -> P -> 0 by special tori.

Everything is read off the character lattices 0 -> P -> Q -> T -> 0 with their Galois actions:

* A^d_T = (S(Q)_d)^G / I_d, where I_d is the sum over subgroups H of Ind_H^G((S(P)^+)^H S(Q)^H) in degree d;
* the base change map A^d_T -> (S(T)_d)^G has kernel (J_d)^G / I_d, with J = S(P)^+ S(Q);
* its cokernel is (S(T)_d)^G modulo the image of (S(Q)_d)^G, which is H^1(G, J_d) when Q is a permutation module.

The identification A^*_Q = S(Q)^G assumes an infinite base field; it is taken as given here.
"""

from __future__ import annotations

import concurrent.futures
import contextvars
import dataclasses
import functools
import logging
import time
import typing

from torus_chow.exceptions import (
    CrossCheckMismatchError,
    DegreeTooLargeError,
    GroupTooLargeError,
    InputError,
    InvariantViolationError,
    RankDeficientError,
    ValidationError,
)
from torus_chow.groups import (
    FiniteActionGroup,
    LinearAction,
    MatrixAction,
    SubgroupHandle,
    all_subgroups,
    all_subgroups_up_to_conjugacy,
    quotient_data,
    restrict_action_to_sublattice,
)
from torus_chow.lattice import (
    AbelianGroupStructure,
    IntegerMatrix,
    LatticeQuotient,
    Sublattice,
    image_lattice,
    intersect,
    kernel_basis,
    membership,
    quotient_generators,
    quotient_structure,
    sublattice_from_generators,
)
from torus_chow.limits import get_limits
from torus_chow.symalg import (
    HomogeneousElement,
    ideal_piece,
    induced_contribution,
    invariants,
    monomial_basis,
    orbit_sum,
    sym_power_map,
    symmetric_power_action,
)

logger = logging.getLogger(__name__)

TASKS = ("chow", "kernel", "cokernel", "h1-check")
DEFAULT_TASKS = ("chow", "kernel", "cokernel")


@dataclasses.dataclass(frozen=True, eq=False)
class ResolutionProblem:
    """
    The character side of 0 -> T -> Q -> P -> 0: `group` acts on Q = Z^N by signed permutations and the columns of
    `embedding` (N x r) span P inside Q. `labels` name the basis of Q for printing.
    """

    group: FiniteActionGroup
    embedding: IntegerMatrix
    labels: tuple[str, ...] | None = None
    name: str = "problem"

    @property
    def qhat_rank(self) -> int:
        return self.group.degree

    @property
    def phat_rank(self) -> int:
        return self.embedding.cols

    @property
    def that_rank(self) -> int:
        return self.qhat_rank - self.phat_rank


@dataclasses.dataclass(frozen=True, eq=False)
class ValidatedProblem:
    """A problem whose invariants were checked, with the derived actions on P and T."""

    problem: ResolutionProblem
    phat: Sublattice
    phat_action: MatrixAction
    quotient: LatticeQuotient
    that_action: MatrixAction

    @property
    def group(self) -> FiniteActionGroup:
        return self.problem.group

    @property
    def qhat_action(self) -> FiniteActionGroup:
        return self.problem.group

    @functools.cached_property
    def embedding(self) -> IntegerMatrix:
        """P -> Q over the Hermite basis of P, the basis `phat_action` is written in."""
        return self.phat.generators.transpose()

    @property
    def rank(self) -> int:
        return self.problem.qhat_rank

    @property
    def labels(self) -> tuple[str, ...]:
        if self.problem.labels is not None:
            return self.problem.labels
        return tuple(f"x{i + 1}" for i in range(self.rank))

    @functools.cached_property
    def subgroup_classes(self) -> list[SubgroupHandle]:
        return all_subgroups_up_to_conjugacy(self.group)

    @functools.cached_property
    def subgroups(self) -> list[SubgroupHandle]:
        return all_subgroups(self.group)

    def __repr__(self) -> str:
        return f"<ValidatedProblem {self.problem.name} N={self.rank} r={self.phat.rank} |G|={self.group.order}>"


def validate(problem: ResolutionProblem) -> ValidatedProblem:
    """
    Check that the embedding is injective, that its image is stable under the group and that the quotient is
    torsion-free, then derive the actions on P and T. Each failure raises its own ValidationError subclass.
    """
    group, embedding = problem.group, problem.embedding
    if embedding.rows != group.degree:
        raise ValidationError(f"Embedding has {embedding.rows} rows but the group acts on rank {group.degree}.")
    if problem.labels is not None and len(problem.labels) != group.degree:
        raise ValidationError(f"Got {len(problem.labels)} basis labels for rank {group.degree}.")
    rank = embedding.rank()
    if rank != embedding.cols:
        raise RankDeficientError(rank, embedding.cols)

    phat = sublattice_from_generators(group.degree, embedding.column_vectors())
    quotient, that_action = quotient_data(group, phat)
    phat_action = restrict_action_to_sublattice(group, phat)
    logger.debug(
        "Validated %s: |G| = %d, rank Q = %d, rank P = %d, rank T = %d",
        problem.name,
        group.order,
        group.degree,
        phat.rank,
        quotient.rank,
    )
    return ValidatedProblem(problem, phat, phat_action, quotient, that_action)


def is_special(problem: ResolutionProblem | ValidatedProblem) -> bool:
    """P = 0, so T = Q is itself a permutation torus."""
    embedding = problem.problem.embedding if isinstance(problem, ValidatedProblem) else problem.embedding
    return embedding.cols == 0


def _check_degree(degree: int, minimum: int = 1) -> None:
    if degree < minimum:
        raise InputError(f"Degree must be at least {minimum}, got {degree}.")
    cap = get_limits().max_degree
    if degree > cap:
        raise DegreeTooLargeError(degree, cap)


def q_invariants(problem: ValidatedProblem, degree: int) -> Sublattice:
    """(S(Q)_d)^G."""
    action = symmetric_power_action(problem.qhat_action, degree)
    return invariants(action.piece, action)


def t_invariants(problem: ValidatedProblem, degree: int) -> Sublattice:
    """(S(T)_d)^G."""
    action = symmetric_power_action(problem.that_action, degree)
    return invariants(action.piece, action)


def j_piece(problem: ValidatedProblem, degree: int) -> Sublattice:
    """J_d, the degree d part of the ideal generated by P in S(Q)."""
    return ideal_piece(problem.embedding, degree)


@functools.lru_cache(maxsize=256)
def _ideal(problem: ValidatedProblem, degree: int, exhaustive: bool) -> Sublattice:
    subgroups = problem.subgroups if exhaustive else problem.subgroup_classes
    dimension = monomial_basis(problem.rank, degree).dimension
    total = Sublattice.zero(dimension)
    for subgroup in subgroups:
        total = total + induced_contribution(subgroup, problem, degree)
    logger.debug("I_%d of %s has rank %d from %d subgroups", degree, problem.problem.name, total.rank, len(subgroups))
    return total


def ideal_I(problem: ValidatedProblem, degree: int, *, exhaustive: bool = False) -> Sublattice:  # noqa: N802
    """
    I_d: the sum of the induced contributions of one subgroup per conjugacy class, or of every subgroup when
    `exhaustive` is set (conjugate subgroups contribute the same lattice, so both agree).
    """
    _check_degree(degree)
    return _ideal(problem, degree, exhaustive)


def chow_group(problem: ValidatedProblem, degree: int) -> AbelianGroupStructure:
    """A^d_T = (S(Q)_d)^G / I_d; Z in degree 0."""
    if degree == 0:
        return AbelianGroupStructure(free_rank=1)
    _check_degree(degree)
    return quotient_structure(ideal_I(problem, degree), q_invariants(problem, degree))


@dataclasses.dataclass(frozen=True)
class Witness:
    """A generator of a cyclic summand, `order` 0 meaning infinite order."""

    order: int
    element: HomogeneousElement


@dataclasses.dataclass(frozen=True)
class KernelResult:
    structure: AbelianGroupStructure
    witnesses: tuple[Witness, ...] = ()


def base_change_kernel(problem: ValidatedProblem, degree: int) -> KernelResult:
    """
    ker(A^d_T -> (S(T)_d)^G) = (J_d)^G / I_d with generators of its cyclic summands as polynomials in S(Q)_d.
    Raises InvariantViolationError when I_d is not inside (J_d)^G or the kernel is not finite.
    """
    _check_degree(degree)
    ideal = ideal_I(problem, degree)
    invariant_j = intersect(j_piece(problem, degree), q_invariants(problem, degree))
    if not ideal <= invariant_j:
        raise InvariantViolationError(f"I_{degree} is not contained in the invariants of J_{degree}.")
    structure = quotient_structure(ideal, invariant_j)
    if structure.free_rank:
        raise InvariantViolationError(f"Kernel in degree {degree} has free rank {structure.free_rank}.")
    pairs = quotient_generators(ideal, invariant_j)
    if len(structure.torsion) == 1:
        canonical = _orbit_sum_generator(problem, degree, ideal, invariant_j, structure.torsion[0])
        if canonical is not None:
            pairs = [(structure.torsion[0], canonical)]
    witnesses = tuple(Witness(order, HomogeneousElement(problem.rank, degree, vector)) for order, vector in pairs)
    return KernelResult(structure, witnesses)


def _class_order(ideal: Sublattice, vector: tuple[int, ...]) -> int:
    """Order of `vector` modulo `ideal`, 0 when infinite."""
    span = sublattice_from_generators(ideal.ambient_rank, [*ideal.basis, vector])
    structure = quotient_structure(ideal, span)
    if structure.free_rank:
        return 0
    return structure.torsion[0] if structure.torsion else 1


def _orbit_sum_generator(
    problem: ValidatedProblem, degree: int, ideal: Sublattice, invariant_j: Sublattice, order: int
) -> tuple[int, ...] | None:
    """
    Generator of a cyclic kernel of the given order chosen among orbit sums of monomials, scanning the monomial basis
    from its last element. None when no orbit sum generates.
    """
    action = symmetric_power_action(problem.qhat_action, degree)
    piece = action.piece
    seen: set[int] = set()
    for index in reversed(range(piece.dimension)):
        if index in seen:
            continue
        vector = orbit_sum(action, piece.basis[index]).coefficients
        seen.update(position for position, value in enumerate(vector) if value)
        if not any(vector) or not membership(vector, invariant_j).member:
            continue
        if _class_order(ideal, vector) == order:
            logger.debug("Kernel generator in degree %d is the orbit sum of monomial %d", degree, index)
            return vector
    return None


def projection_image(problem: ValidatedProblem, degree: int) -> Sublattice:
    """The image of (S(Q)_d)^G in S(T)_d."""
    return image_lattice(sym_power_map(problem.quotient.projection, degree), q_invariants(problem, degree))


def base_change_cokernel(problem: ValidatedProblem, degree: int) -> AbelianGroupStructure:
    """(S(T)_d)^G modulo the image of (S(Q)_d)^G, computed directly. It is always finite."""
    _check_degree(degree)
    structure = quotient_structure(projection_image(problem, degree), t_invariants(problem, degree))
    if structure.free_rank:
        raise InvariantViolationError(f"Cokernel in degree {degree} has free rank {structure.free_rank}.")
    return structure


def _check_order(group: FiniteActionGroup) -> None:
    bound = get_limits().max_group_order
    if group.order > bound:
        raise GroupTooLargeError(bound)


def _h1_pairs(action: MatrixAction) -> tuple[Sublattice, Sublattice]:
    group, m = action.group, action.rank
    n = group.order
    width = n * m
    rows: list[list[int]] = []
    for g in range(n):
        image = action.images[g]
        for h in range(n):
            gh = group.table[g][h]
            # f(gh) - f(g) - g f(h) = 0
            for i in range(m):
                row = [0] * width
                row[gh * m + i] += 1
                row[g * m + i] -= 1
                for j in range(m):
                    row[h * m + j] -= image[i, j]
                if any(row):
                    rows.append(row)
    cocycles = kernel_basis(IntegerMatrix.from_rows(rows, width))
    coboundaries = sublattice_from_generators(
        width,
        [
            tuple(value for g in range(n) for value in _minus_identity(action.images[g], i))
            for i in range(m)
        ],
    )
    return coboundaries, cocycles


def _minus_identity(matrix: IntegerMatrix, column: int) -> list[int]:
    values = list(matrix.column(column))
    values[column] -= 1
    return values


def _h1_generators(action: MatrixAction) -> tuple[Sublattice, Sublattice]:
    """Cocycles are determined by their values on the generators; the Cayley graph edges give the relations."""
    group, m = action.group, action.rank
    generators = group.generator_indices
    width = len(generators) * m
    # f(g) = coefficients[g] applied to the stacked values on the generators
    coefficients: dict[int, list[list[int]]] = {group.identity_index: [[0] * width for _ in range(m)]}
    order = [group.identity_index]
    relations: list[list[int]] = []
    position = 0
    while position < len(order):
        g = order[position]
        position += 1
        image = action.images[g]
        for slot, s in enumerate(generators):
            # f(gs) = f(g) + g f(s)
            value = [row[:] for row in coefficients[g]]
            for i in range(m):
                for j in range(m):
                    if image[i, j]:
                        value[i][slot * m + j] += image[i, j]
            target = group.table[g][s]
            known = coefficients.get(target)
            if known is None:
                coefficients[target] = value
                order.append(target)
                continue
            for i in range(m):
                relation = [a - b for a, b in zip(value[i], known[i])]
                if any(relation):
                    relations.append(relation)
    cocycles = kernel_basis(IntegerMatrix.from_rows(relations, width))
    coboundaries = sublattice_from_generators(
        width,
        [
            tuple(value for s in generators for value in _minus_identity(action.images[s], i))
            for i in range(m)
        ],
    )
    return coboundaries, cocycles


def cohomology_h1(action: MatrixAction, method: str = "generators") -> AbelianGroupStructure:
    """
    H^1 of the group with coefficients in Z^rank. method="generators" solves for cocycles by their values on the
    generators; method="pairs" imposes the cocycle identity on every pair of elements.
    """
    _check_order(action.group)
    if method == "generators":
        coboundaries, cocycles = _h1_generators(action)
    elif method == "pairs":
        coboundaries, cocycles = _h1_pairs(action)
    else:
        raise InputError(f"Unknown H^1 method {method!r}; use 'generators' or 'pairs'.")
    return quotient_structure(coboundaries, cocycles)


def h1(module: Sublattice, action: LinearAction, *, method: str = "generators") -> AbelianGroupStructure:
    """H^1(G, module) for a G-stable sublattice `module` of the lattice `action` acts on."""
    _check_order(action.group)
    return cohomology_h1(restrict_action_to_sublattice(action, module), method)


def j_cohomology(problem: ValidatedProblem, degree: int, *, method: str = "generators") -> AbelianGroupStructure:
    """H^1(G, J_d)."""
    _check_degree(degree)
    return h1(j_piece(problem, degree), symmetric_power_action(problem.qhat_action, degree), method=method)


@dataclasses.dataclass(frozen=True)
class DegreeReport:
    degree: int
    chow_group: AbelianGroupStructure | None = None
    kernel: AbelianGroupStructure | None = None
    cokernel: AbelianGroupStructure | None = None
    h1_check: AbelianGroupStructure | None = None
    witnesses: tuple[Witness, ...] = ()
    elapsed: float = dataclasses.field(default=0.0, compare=False)


def degree_report(
    problem: ValidatedProblem,
    degree: int,
    with_h1: bool = False,
    *,
    tasks: typing.Iterable[str] | None = None,
) -> DegreeReport:
    """
    Run the requested tasks in one degree. With `with_h1` (or the "h1-check" task) H^1(G, J_d) is compared with
    the cokernel and CrossCheckMismatchError carries both values when they differ.
    """
    selected = set(tasks if tasks is not None else DEFAULT_TASKS)
    unknown = selected - set(TASKS)
    if unknown:
        raise InputError(f"Unknown tasks {sorted(unknown)}; choose from {list(TASKS)}.")
    if with_h1:
        selected.add("h1-check")
    if "h1-check" in selected:
        selected.add("cokernel")

    started = time.perf_counter()
    fields: dict[str, typing.Any] = {}
    if "chow" in selected:
        fields["chow_group"] = chow_group(problem, degree)
    if degree == 0:
        # J_0 = 0 and both sides are Z
        for task, name in (("kernel", "kernel"), ("cokernel", "cokernel"), ("h1-check", "h1_check")):
            if task in selected:
                fields[name] = AbelianGroupStructure()
    else:
        if "kernel" in selected:
            kernel = base_change_kernel(problem, degree)
            fields["kernel"] = kernel.structure
            fields["witnesses"] = kernel.witnesses
        if "cokernel" in selected:
            fields["cokernel"] = base_change_cokernel(problem, degree)
        if "h1-check" in selected:
            value = j_cohomology(problem, degree)
            if value != fields["cokernel"]:
                raise CrossCheckMismatchError(degree, fields["cokernel"], value)
            fields["h1_check"] = value
    elapsed = time.perf_counter() - started
    logger.debug("Degree %d of %s done in %.3fs", degree, problem.problem.name, elapsed)
    return DegreeReport(degree=degree, elapsed=elapsed, **fields)


def degree_reports(
    problem: ValidatedProblem,
    degrees: typing.Iterable[int],
    with_h1: bool = False,
    *,
    tasks: typing.Iterable[str] | None = None,
    jobs: int = 1,
) -> list[DegreeReport]:
    """Reports for several degrees, computed on up to `jobs` threads and returned in degree order."""
    ordered = sorted(set(degrees))
    task_list = tuple(tasks) if tasks is not None else None
    if jobs <= 1 or len(ordered) <= 1:
        return [degree_report(problem, degree, with_h1, tasks=task_list) for degree in ordered]

    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
        futures = {
            degree: executor.submit(
                contextvars.copy_context().run, degree_report, problem, degree, with_h1, tasks=task_list
            )
            for degree in ordered
        }
        return [futures[degree].result() for degree in ordered]


def oracle_check(problem: ValidatedProblem, degree: int) -> None:
    """
    Recompute I_d over every subgroup and the invariants of S(Q)_d with the kernel method, and raise
    InvariantViolationError if either disagrees with the fast path.
    """
    if ideal_I(problem, degree) != ideal_I(problem, degree, exhaustive=True):
        raise InvariantViolationError(f"I_{degree} depends on the choice of subgroups.")
    action = symmetric_power_action(problem.qhat_action, degree)
    if invariants(action.piece, action) != invariants(action.piece, action, method="kernel"):
        raise InvariantViolationError(f"Orbit sums and the kernel method disagree in degree {degree}.")
    t_action = symmetric_power_action(problem.that_action, degree)
    if invariants(t_action.piece, t_action) != invariants(t_action.piece, t_action, method="kernel"):
        raise InvariantViolationError(f"Invariants of S(T)_{degree} disagree between methods.")
