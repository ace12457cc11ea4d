import pytest
import random

from torus_chow import chow
from torus_chow.chow import (
    DegreeReport,
    ResolutionProblem,
    ValidatedProblem,
    base_change_cokernel,
    base_change_kernel,
    chow_group,
    cohomology_h1,
    degree_report,
    degree_reports,
    h1,
    ideal_I,
    is_special,
    j_cohomology,
    j_piece,
    oracle_check,
    projection_image,
    q_invariants,
    t_invariants,
    validate,
)
from torus_chow.exceptions import (
    CrossCheckMismatchError,
    DegreeTooLargeError,
    InputError,
    RankDeficientError,
    TorsionQuotientError,
    UnstableSublatticeError,
    ValidationError,
)
from torus_chow.groups import (
    FiniteActionGroup,
    MatrixAction,
    SignedPermutation,
    SubgroupHandle,
    all_subgroups_up_to_conjugacy,
    close_group,
    cyclic_group,
    quaternion_group,
    symmetric_group,
)
from torus_chow.lattice import (
    AbelianGroupStructure,
    IntegerMatrix,
    Sublattice,
    intersect,
    membership,
    sublattice_from_generators,
)
from torus_chow.limits import switch_limits
from torus_chow.problems import (
    BUNDLED,
    bundled_problem,
    permutation_problem,
    quaternion_problem,
    random_problem,
    signed_symmetric_problem,
    split_problem,
)
from torus_chow.symalg import HomogeneousElement, induce, induced_contribution, orbit_sum, symmetric_power_action

TRIVIAL = AbelianGroupStructure()
Z2 = AbelianGroupStructure(torsion=(2,))

# e, e', x, x', y, y', z, z'
E, E_, X, X_, Y, Y_, Z, Z_ = range(8)


def _monomial(*indices: int, rank: int = 8) -> tuple[int, ...]:
    exponents = [0] * rank
    for index in indices:
        exponents[index] += 1
    return tuple(exponents)


def test_validate_rejects_torsion_quotient() -> None:
    problem = ResolutionProblem(close_group([], degree=2), IntegerMatrix.from_rows([[2], [0]]))
    with pytest.raises(TorsionQuotientError) as info:
        validate(problem)
    assert info.value.factors == (2,)
    assert info.value.exit_code == 3


def test_validate_rejects_rank_deficient_embedding() -> None:
    problem = ResolutionProblem(close_group([], degree=2), IntegerMatrix.from_rows([[1, 2], [1, 2]]))
    with pytest.raises(RankDeficientError) as info:
        validate(problem)
    assert (info.value.rank, info.value.columns) == (1, 2)


def test_validate_rejects_unstable_sublattice() -> None:
    problem = ResolutionProblem(symmetric_group(2), IntegerMatrix.from_rows([[1], [0]]))
    with pytest.raises(UnstableSublatticeError):
        validate(problem)


def test_validate_rejects_mismatched_shapes() -> None:
    with pytest.raises(ValidationError):
        validate(ResolutionProblem(symmetric_group(3), IntegerMatrix.from_rows([[1], [1]])))
    with pytest.raises(ValidationError):
        validate(ResolutionProblem(symmetric_group(2), IntegerMatrix.from_rows([[1], [1]]), labels=("a",)))


def test_validated_problem_ranks(q8: ValidatedProblem) -> None:
    assert (q8.rank, q8.phat.rank, q8.quotient.rank) == (8, 4, 4)
    assert q8.labels == ("e", "e'", "x", "x'", "y", "y'", "z", "z'")
    assert len(q8.subgroup_classes) == 6
    assert not is_special(q8)
    assert is_special(split_problem(3))


def test_chow_group_in_degree_zero(q8: ValidatedProblem) -> None:
    assert chow_group(q8, 0) == AbelianGroupStructure(free_rank=1)
    report = degree_report(q8, 0, tasks=("chow", "kernel", "cokernel"))
    assert report.chow_group == AbelianGroupStructure(free_rank=1)
    assert report.kernel == TRIVIAL
    assert report.cokernel == TRIVIAL


def test_q8_kernel_in_degree_three(q8: ValidatedProblem) -> None:
    kernel = base_change_kernel(q8, 3)
    assert kernel.structure == Z2
    ideal = ideal_I(q8, 3)
    invariant_j = intersect(j_piece(q8, 3), q_invariants(q8, 3))
    for witness in kernel.witnesses:
        vector = witness.element.coefficients
        assert membership(vector, invariant_j).member
        assert not membership(vector, ideal).member
        assert membership(tuple(witness.order * value for value in vector), ideal).member


def test_q8_orbit_of_xyz_is_a_torsion_class(q8: ValidatedProblem) -> None:
    """w = Orb(xyz) lies in (J_3)^G, is not in I_3, and 2w is."""
    action = symmetric_power_action(q8.qhat_action, 3)
    w = orbit_sum(action, _monomial(X, Y, Z))
    assert len(w.terms) == 8
    invariant_j = intersect(j_piece(q8, 3), q_invariants(q8, 3))
    ideal = ideal_I(q8, 3)
    assert membership(w.coefficients, invariant_j).member
    assert not membership(w.coefficients, ideal).member
    assert membership((2 * w).coefficients, ideal).member


def test_q8_certificate_for_twice_the_orbit(q8: ValidatedProblem) -> None:
    """
    2w = Ind from <-1> of (x + x')(yz + y'z') - (y + y')(x'z + xz') + (z + z')(xy + x'y').
    """
    group = q8.group
    action = symmetric_power_action(group, 3)
    v = [HomogeneousElement.variable(8, index) for index in range(8)]
    element = (
        (v[X] + v[X_]) * (v[Y] * v[Z] + v[Y_] * v[Z_])
        - (v[Y] + v[Y_]) * (v[X_] * v[Z] + v[X] * v[Z_])
        + (v[Z] + v[Z_]) * (v[X] * v[Y] + v[X_] * v[Y_])
    )
    minus_one = next(g for g in range(group.order) if group.elements[g].image[0] == E_)
    center = SubgroupHandle.generated_by(group, [minus_one])
    assert center.order == 2
    w = orbit_sum(action, _monomial(X, Y, Z))
    assert induce(element.coefficients, center, action) == (2 * w).coefficients
    assert membership(induce(element.coefficients, center, action), ideal_I(q8, 3)).member


@pytest.mark.parametrize("degree", (1, 2))
def test_q8_kernel_vanishes_in_low_degrees(q8: ValidatedProblem, degree: int) -> None:
    assert base_change_kernel(q8, degree).structure == TRIVIAL


def test_q8_kernel_witness_is_the_orbit_of_xyz(q8: ValidatedProblem) -> None:
    """The generator of the degree 3 kernel is reported as the 8-term orbit sum of xyz."""
    action = symmetric_power_action(q8.qhat_action, 3)
    (witness,) = base_change_kernel(q8, 3).witnesses
    assert witness.order == 2
    assert witness.element == orbit_sum(action, _monomial(X, Y, Z))


def test_q8_ideal_is_induced_from_the_center(q8: ValidatedProblem) -> None:
    group = q8.group
    minus_one = next(g for g in range(group.order) if group.elements[g].image[0] == E_)
    center = SubgroupHandle.generated_by(group, [minus_one])
    assert induced_contribution(center, q8, 3) == ideal_I(q8, 3)


@pytest.mark.parametrize("degree", (1, 2, 3))
def test_q8_cokernel_matches_h1(q8: ValidatedProblem, degree: int) -> None:
    assert base_change_cokernel(q8, degree) == j_cohomology(q8, degree)


def test_q8_cokernel_vanishes_in_degree_three(q8: ValidatedProblem) -> None:
    assert base_change_cokernel(q8, 3) == TRIVIAL


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_problems_pass_the_h1_check(name: str) -> None:
    problem_file = bundled_problem(name)
    problem = validate(problem_file.problem)
    for degree in problem_file.degrees:
        report = degree_report(problem, degree, True)
        assert report.h1_check == report.cokernel
        assert report.kernel == TRIVIAL or (name, degree) == ("q8", 3)


def test_signed_s4_quadratic_invariants(signed_s4: ValidatedProblem) -> None:
    """
    The invariants in degree 2 are spanned by sum (a_i+)^2 + (a_i-)^2, sum a_i+ a_i-, and the two pair families
    sum_{i<j} a_i+ a_j+ + a_i- a_j- and sum_{i<j} a_i+ a_j- + a_i- a_j+.
    """
    plus, minus = range(0, 8, 2), range(1, 8, 2)
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    forms = [
        {_monomial(k, k): 1 for k in range(8)},
        {_monomial(p, m): 1 for p, m in zip(plus, minus)},
        {_monomial(plus[i], plus[j]): 1 for i, j in pairs} | {_monomial(minus[i], minus[j]): 1 for i, j in pairs},
        {_monomial(plus[i], minus[j]): 1 for i, j in pairs} | {_monomial(minus[i], plus[j]): 1 for i, j in pairs},
    ]
    vectors = [HomogeneousElement.from_terms(8, 2, form).coefficients for form in forms]
    expected = sublattice_from_generators(36, vectors)
    assert q_invariants(signed_s4, 2) == expected


@pytest.mark.parametrize("n", (4, 5))
def test_signed_symmetric_cokernel_in_degree_two(n: int) -> None:
    problem = validate(signed_symmetric_problem(n))
    assert base_change_cokernel(problem, 2) == Z2
    assert base_change_kernel(problem, 2).structure == TRIVIAL


def test_signed_s4_cokernel_is_h1(signed_s4: ValidatedProblem) -> None:
    report = degree_report(signed_s4, 2, tasks=("cokernel", "h1-check"))
    assert report.h1_check == report.cokernel == Z2


@pytest.mark.parametrize("degree", (1, 2, 3, 4))
def test_norm_one_torus_has_no_kernel_or_cokernel(norm_one_s3: ValidatedProblem, degree: int) -> None:
    report = degree_report(norm_one_s3, degree, True)
    assert report.kernel == TRIVIAL
    assert report.cokernel == TRIVIAL
    assert report.h1_check == TRIVIAL


def _monomial_orbit_count(problem: ValidatedProblem, degree: int) -> int:
    action = symmetric_power_action(problem.qhat_action, degree)
    assert action.monomial_images is not None
    seen: set[int] = set()
    count = 0
    for start in range(action.piece.dimension):
        if start in seen:
            continue
        count += 1
        seen.update(images[start][0] for images in action.monomial_images)
    return count


@pytest.mark.parametrize(
    "generators",
    (
        [SignedPermutation.from_cycles(3, (1, 2))],
        [SignedPermutation.from_cycles(4, (1, 2, 3, 4))],
        [SignedPermutation.from_cycles(4, (1, 2)), SignedPermutation.from_cycles(4, (3, 4))],
        [SignedPermutation.from_cycles(5, (1, 2, 3)), SignedPermutation.from_cycles(5, (4, 5))],
        list(symmetric_group(4).generators),
        list(cyclic_group(5).generators),
    ),
)
def test_permutation_torus(generators: list[SignedPermutation]) -> None:
    """With P = 0 the Chow group is free on the monomial orbits and base change is an isomorphism."""
    problem = validate(permutation_problem(generators))
    for degree in (1, 2, 3):
        report = degree_report(problem, degree)
        assert report.chow_group == AbelianGroupStructure(free_rank=_monomial_orbit_count(problem, degree))
        assert report.kernel == TRIVIAL
        assert report.cokernel == TRIVIAL


def test_split_torus() -> None:
    problem = validate(split_problem(3))
    assert chow_group(problem, 2) == AbelianGroupStructure(free_rank=6)
    assert ideal_I(problem, 2).is_zero


def test_h1_of_sign_representation() -> None:
    group = close_group([SignedPermutation((0,), (-1,))])
    action = MatrixAction.from_group(group)
    assert cohomology_h1(action) == Z2
    assert cohomology_h1(action, "pairs") == Z2


@pytest.mark.parametrize("group", (quaternion_group(), symmetric_group(3), cyclic_group(4)))
def test_h1_of_permutation_modules_vanishes(group: FiniteActionGroup) -> None:
    """H^1 of a permutation module is a sum of Hom(H, Z) = 0."""
    action = MatrixAction.from_group(group)
    assert cohomology_h1(action) == TRIVIAL
    assert cohomology_h1(action, "pairs") == TRIVIAL


def test_h1_of_augmentation_ideal() -> None:
    """The sum-zero vectors of the regular Z/n module have H^1 = Z/n."""
    group = cyclic_group(4)
    module = Sublattice.full(4)
    augmentation = [tuple(int(i == j) - int(j == 0) for j in range(4)) for i in range(1, 4)]
    assert h1(module, group) == TRIVIAL
    sum_zero = sublattice_from_generators(4, augmentation)
    assert h1(sum_zero, group) == AbelianGroupStructure(torsion=(4,))
    assert h1(sum_zero, group, method="pairs") == AbelianGroupStructure(torsion=(4,))


def test_h1_rejects_unknown_method() -> None:
    with pytest.raises(InputError):
        cohomology_h1(MatrixAction.from_group(cyclic_group(2)), "guess")


def test_h1_methods_agree_on_j_pieces(signed_s4: ValidatedProblem) -> None:
    for degree in (1, 2):
        assert j_cohomology(signed_s4, degree) == j_cohomology(signed_s4, degree, method="pairs")


@pytest.mark.parametrize("seed", range(50))
def test_random_problems(seed: int) -> None:
    """Cokernel equals H^1(J_d), the kernel vanishes up to degree 2 and the oracle agrees."""
    problem = validate(random_problem(random.Random(seed)))
    for degree in (1, 2, 3):
        oracle_check(problem, degree)
        report = degree_report(problem, degree, True, tasks=("chow", "kernel", "cokernel"))
        assert report.h1_check == report.cokernel
        if degree <= 2:
            assert report.kernel == TRIVIAL


def test_exhaustive_ideal_matches_conjugacy_classes(q8: ValidatedProblem, signed_s4: ValidatedProblem) -> None:
    assert ideal_I(q8, 3) == ideal_I(q8, 3, exhaustive=True)
    assert ideal_I(signed_s4, 2) == ideal_I(signed_s4, 2, exhaustive=True)


def test_ideal_lies_in_the_invariants_of_j(q8: ValidatedProblem) -> None:
    for degree in (1, 2, 3):
        assert ideal_I(q8, degree) <= intersect(j_piece(q8, degree), q_invariants(q8, degree))


def test_degree_reports_are_ordered(q8: ValidatedProblem) -> None:
    serial = degree_reports(q8, [3, 1, 2, 1])
    parallel = degree_reports(q8, [3, 1, 2], jobs=3)
    assert [report.degree for report in serial] == [1, 2, 3]
    assert serial == parallel


def test_degree_report_rejects_unknown_task(q8: ValidatedProblem) -> None:
    with pytest.raises(InputError):
        degree_report(q8, 1, tasks=("chow", "volume"))


def test_degree_report_only_runs_requested_tasks(q8: ValidatedProblem) -> None:
    report = degree_report(q8, 2, tasks=("chow",))
    assert report.kernel is None
    assert report.cokernel is None
    assert report.witnesses == ()
    assert isinstance(report, DegreeReport)


def test_cross_check_mismatch_is_reported(q8: ValidatedProblem, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(chow, "j_cohomology", lambda problem, degree: AbelianGroupStructure(torsion=(7,)))
    with pytest.raises(CrossCheckMismatchError) as info:
        degree_report(q8, 1, True)
    assert info.value.degree == 1
    assert info.value.exit_code == 5


def test_degree_cap(q8: ValidatedProblem) -> None:
    with switch_limits(max_degree=2):
        with pytest.raises(DegreeTooLargeError) as info:
            chow_group(q8, 3)
    assert (info.value.degree, info.value.cap) == (3, 2)
    assert info.value.exit_code == 4


def test_degrees_start_at_one(q8: ValidatedProblem) -> None:
    with pytest.raises(InputError):
        base_change_kernel(q8, 0)


def test_quaternion_problem_is_validated_once() -> None:
    problem = quaternion_problem()
    assert problem.qhat_rank == 8
    assert problem.phat_rank == 4
    assert problem.that_rank == 4


def test_signed_s4_cokernel_generator(signed_s4: ValidatedProblem) -> None:
    """The class of sum_(i<j) a_i a_j generates the cokernel: it is invariant, not an image, and twice it is."""
    rank = signed_s4.quotient.rank
    a = [HomogeneousElement.variable(rank, i) for i in range(rank)]
    pairs = [a[i] * a[j] for i in range(rank) for j in range(i + 1, rank)]
    total = pairs[0]
    for product in pairs[1:]:
        total = total + product
    image = projection_image(signed_s4, 2)
    assert membership(total.coefficients, t_invariants(signed_s4, 2)).member
    assert not membership(total.coefficients, image).member
    assert membership((2 * total).coefficients, image).member


@pytest.mark.parametrize("degree, free_rank", ((1, 0), (2, 1), (3, 1), (4, 1)))
def test_norm_one_chow_groups(norm_one_s3: ValidatedProblem, degree: int, free_rank: int) -> None:
    """A^d is the degree d part of Z[e_2, e_3], the symmetric functions modulo e_1."""
    assert chow_group(norm_one_s3, degree) == AbelianGroupStructure(free_rank=free_rank)


@pytest.mark.parametrize("points", (2, 3, 4, 5))
def test_every_permutation_torus(points: int) -> None:
    """Each conjugacy class of subgroups of S_N acting on N points, degrees 1 to 4."""
    full = symmetric_group(points)
    for subgroup in all_subgroups_up_to_conjugacy(full):
        generators = [full.elements[index] for index in subgroup.generators]
        problem = validate(ResolutionProblem(close_group(generators, degree=points), IntegerMatrix.zeros(points, 0)))
        for degree in (1, 2, 3, 4):
            report = degree_report(problem, degree)
            assert report.chow_group == AbelianGroupStructure(free_rank=_monomial_orbit_count(problem, degree))
            assert report.kernel == TRIVIAL
            assert report.cokernel == TRIVIAL
