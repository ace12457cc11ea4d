import itertools
import pytest
import random

from torus_chow.exceptions import GroupTooLargeError, InputError, UnstableSublatticeError
from torus_chow.groups import (
    FiniteActionGroup,
    MatrixAction,
    SignedPermutation,
    SubgroupHandle,
    all_subgroups,
    all_subgroups_up_to_conjugacy,
    alternating_group,
    close_group,
    coset_action,
    coset_representatives,
    cyclic_group,
    dihedral_group,
    direct_product,
    is_subgroup,
    power_set_subgroups,
    quaternion_group,
    quotient_action,
    restrict_action_to_sublattice,
    symmetric_group,
)
from torus_chow.lattice import IntegerMatrix, Sublattice, sublattice_from_generators
from torus_chow.limits import switch_limits
from torus_chow.problems import signed_symmetric_problem


def test_signed_permutation_composition_rule() -> None:
    """(g h)(i) = g(h(i)) with sign_gh(i) = sign_g(h(i)) sign_h(i)."""
    g = SignedPermutation((1, 2, 0), (1, -1, 1))
    h = SignedPermutation((2, 0, 1), (-1, 1, 1))
    product = g * h
    for i in range(3):
        assert product.image[i] == g.image[h.image[i]]
        assert product.signs[i] == g.signs[h.image[i]] * h.signs[i]
    vector = (1, 2, 3)
    assert product.apply(vector) == g.apply(h.apply(vector))
    assert (g * g.inverse()).is_identity


def test_signed_permutation_acts_on_vectors() -> None:
    g = SignedPermutation((1, 0), (1, -1))
    assert g.apply((1, 0)) == (0, 1)
    assert g.apply((0, 1)) == (-1, 0)
    assert g.matrix().apply((3, 5)) == g.apply((3, 5))


@pytest.mark.parametrize(
    "image, signs",
    (
        ((0, 0), (1, 1)),
        ((0, 1), (1, 2)),
        ((0, 1), (1,)),
    ),
)
def test_signed_permutation_validates(image: tuple[int, ...], signs: tuple[int, ...]) -> None:
    with pytest.raises(InputError):
        SignedPermutation(image, signs)


def test_one_line_notation_is_one_based() -> None:
    g = SignedPermutation.from_one_line([2, 3, 1])
    assert g.image == (1, 2, 0)
    assert g.one_line == (2, 3, 1)
    assert SignedPermutation.from_cycles(3, (1, 2, 3)) == g


def test_close_group_of_a_transposition() -> None:
    group = close_group([SignedPermutation.from_one_line([2, 1])])
    assert group.order == 2
    assert group.elements[0].is_identity


def test_close_group_is_breadth_first() -> None:
    group = cyclic_group(4)
    generator = group.generators[0]
    assert group.elements == (
        SignedPermutation.identity(4),
        generator,
        generator * generator,
        generator * generator * generator,
    )


def test_close_group_reports_the_bound() -> None:
    with pytest.raises(GroupTooLargeError) as info:
        close_group(symmetric_group(5).generators, 100)
    assert info.value.bound == 100


def test_close_group_uses_active_limits() -> None:
    with switch_limits(max_group_order=5):
        with pytest.raises(GroupTooLargeError):
            symmetric_group(3)


def test_close_group_rejects_mixed_degrees() -> None:
    with pytest.raises(InputError):
        close_group([SignedPermutation.identity(2), SignedPermutation.identity(3)])
    with pytest.raises(InputError):
        close_group([])


@pytest.mark.parametrize(
    "group, order",
    (
        (quaternion_group(), 8),
        (symmetric_group(4), 24),
        (alternating_group(4), 12),
        (dihedral_group(5), 10),
        (cyclic_group(6), 6),
        (direct_product(cyclic_group(2), cyclic_group(3)), 6),
        (signed_symmetric_problem(4).group, 24),
    ),
)
def test_group_orders(group: FiniteActionGroup, order: int) -> None:
    assert group.order == order


def test_quaternion_generators_in_one_line_notation() -> None:
    group = quaternion_group()
    assert [g.one_line for g in group.generators] == [(3, 4, 2, 1, 7, 8, 6, 5), (5, 6, 8, 7, 2, 1, 3, 4)]
    assert sorted(group.labels or ()) == sorted(["1", "-1", "i", "-i", "j", "-j", "k", "-k"])
    assert group.is_permutation_group


def test_signed_symmetric_generators() -> None:
    assert [g.one_line for g in signed_symmetric_problem(4).group.generators] == [
        (4, 3, 2, 1, 6, 5, 8, 7),
        (4, 3, 6, 5, 8, 7, 2, 1),
    ]
    assert [g.one_line for g in signed_symmetric_problem(5).group.generators] == [
        (4, 3, 2, 1, 6, 5, 8, 7, 10, 9),
        (3, 4, 5, 6, 7, 8, 9, 10, 1, 2),
    ]


def test_multiplication_table_is_associative_with_inverses() -> None:
    group = quaternion_group()
    rng = random.Random(7)
    table = group.table
    for _ in range(50):
        a, b, c = (rng.randrange(group.order) for _ in range(3))
        assert table[table[a][b]][c] == table[a][table[b][c]]
    for g in range(group.order):
        assert table[g][group.inverses[g]] == group.identity_index


def test_element_orders_of_q8() -> None:
    group = quaternion_group()
    orders = sorted(group.element_order(g) for g in range(group.order))
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]


def test_subgroups_of_trivial_group() -> None:
    group = close_group([], degree=2)
    assert [s.members for s in all_subgroups_up_to_conjugacy(group)] == [(0,)]


def test_subgroup_classes_of_q8() -> None:
    classes = all_subgroups_up_to_conjugacy(quaternion_group())
    assert [s.order for s in classes] == [1, 2, 4, 4, 4, 8]
    assert classes[0].is_trivial
    assert classes[-1].is_full


def test_subgroup_classes_of_s4() -> None:
    classes = all_subgroups_up_to_conjugacy(symmetric_group(4))
    assert len(classes) == 11
    assert len(all_subgroups(symmetric_group(4))) == 30


@pytest.mark.parametrize(
    "group",
    (
        quaternion_group(),
        dihedral_group(4),
        cyclic_group(6),
        symmetric_group(3),
        alternating_group(4),
        direct_product(cyclic_group(2), cyclic_group(2)),
    ),
)
def test_subgroup_enumeration_agrees_with_power_set(group: FiniteActionGroup) -> None:
    """It should find exactly the subgroups the brute-force oracle finds."""
    assert [s.members for s in all_subgroups(group)] == [s.members for s in power_set_subgroups(group)]


def test_power_set_oracle_is_bounded() -> None:
    with pytest.raises(GroupTooLargeError):
        power_set_subgroups(symmetric_group(4))


def test_subgroup_closure_and_membership() -> None:
    group = symmetric_group(3)
    subgroup = SubgroupHandle.generated_by(group, [group.generator_indices[1]])
    assert subgroup.order == 3
    assert is_subgroup(group, subgroup.members)
    assert not is_subgroup(group, [0, group.generator_indices[0], group.generator_indices[1]])
    assert subgroup.index == 2
    assert group.identity_index in subgroup


def test_coset_representatives() -> None:
    group = symmetric_group(3)
    assert coset_representatives(group, SubgroupHandle.full(group)) == [0]
    assert coset_representatives(group, SubgroupHandle.trivial(group)) == list(range(6))
    a3 = SubgroupHandle.generated_by(group, [group.generator_indices[1]])
    representatives = coset_representatives(group, a3)
    assert len(representatives) == 2
    assert representatives[0] == 0


@pytest.mark.parametrize("group", (quaternion_group(), symmetric_group(4), dihedral_group(6)))
def test_cosets_partition_the_group(group: FiniteActionGroup) -> None:
    for subgroup in all_subgroups_up_to_conjugacy(group):
        representatives = coset_representatives(group, subgroup)
        cosets = [{group.table[r][h] for h in subgroup.members} for r in representatives]
        assert len(representatives) == subgroup.index
        assert set().union(*cosets) == set(range(group.order))
        assert sum(len(coset) for coset in cosets) == group.order
        for coset, r in zip(cosets, representatives):
            assert r == min(coset)


def test_coset_action_is_transitive() -> None:
    group = symmetric_group(4)
    subgroup = SubgroupHandle.generated_by(group, [group.generator_indices[0]])
    image = close_group(coset_action(group, subgroup))
    assert image.degree == 12
    assert image.order == 24
    orbit = {element.act_on_point(0) for element in image.elements}
    assert orbit == set(range(12))


def test_restrict_to_full_lattice_is_the_same_action() -> None:
    group = symmetric_group(3)
    restricted = restrict_action_to_sublattice(group, Sublattice.full(3))
    for g in range(group.order):
        assert restricted.image(g) == group.elements[g].matrix()


def test_restrict_q8_to_pair_sums() -> None:
    """-1 acts trivially on e+e', x+x', y+y', z+z'; the action factors through Z/2 x Z/2."""
    group = quaternion_group()
    lattice = sublattice_from_generators(
        8, [[int(row // 2 == i) for row in range(8)] for i in range(4)]
    )
    restricted = restrict_action_to_sublattice(group, lattice)
    assert restricted.is_signed_permutation
    minus_one = next(g for g in range(group.order) if group.elements[g].image[0] == 1)
    assert restricted.image(minus_one) == IntegerMatrix.identity(4)
    assert len({restricted.image(g) for g in range(group.order)}) == 4


def test_restrict_rejects_unstable_lattice() -> None:
    group = symmetric_group(2)
    with pytest.raises(UnstableSublatticeError) as info:
        restrict_action_to_sublattice(group, sublattice_from_generators(2, [(1, 0)]))
    assert info.value.element_index == group.generator_indices[0]


def test_quotient_action_of_signed_symmetric_group() -> None:
    """The quotient action is sigma(a_i) = sgn(sigma) a_(sigma i)."""
    problem = signed_symmetric_problem(3)
    lattice = sublattice_from_generators(6, problem.embedding.column_vectors())
    action = quotient_action(problem.group, lattice)
    assert action.rank == 3
    assert action.is_signed_permutation
    transposition = action.image(problem.group.generator_indices[0])
    assert transposition.to_rows() == [[0, -1, 0], [-1, 0, 0], [0, 0, -1]]


def test_quotient_action_of_q8() -> None:
    """i sends [e] to [x], [x] to -[e], [y] to [z] and [z] to -[y]."""
    group = quaternion_group()
    lattice = sublattice_from_generators(8, [[int(row // 2 == i) for row in range(8)] for i in range(4)])
    action = quotient_action(group, lattice)
    i = group.generator_indices[0]
    e, x, y, z = (tuple(int(k == j) for k in range(4)) for j in range(4))
    assert action.apply(i, e) == x
    assert action.apply(i, x) == tuple(-value for value in e)
    assert action.apply(i, y) == z
    assert action.apply(i, z) == tuple(-value for value in y)


def test_quotient_by_zero_is_the_original_action() -> None:
    group = symmetric_group(3)
    action = quotient_action(group, Sublattice.zero(3))
    assert all(action.image(g) == group.elements[g].matrix() for g in range(group.order))


def test_matrix_action_round_trips_to_signed_permutations() -> None:
    group = quaternion_group()
    action = MatrixAction.from_group(group)
    action.verify()
    assert action.signed_permutations == group.elements


def test_rotation_is_not_a_signed_permutation() -> None:
    rotation = IntegerMatrix.from_rows([[0, -1], [1, -1]])
    action = MatrixAction(cyclic_group(3), 2, (IntegerMatrix.identity(2), rotation, rotation @ rotation))
    action.verify()
    assert action.signed_permutations is None
    assert not action.is_signed_permutation


def test_conjugate_subgroups_have_equal_orders() -> None:
    group = symmetric_group(4)
    for subgroup in all_subgroups_up_to_conjugacy(group):
        for g in range(group.order):
            conjugate = subgroup.conjugate(g)
            assert conjugate.order == subgroup.order
            assert is_subgroup(group, conjugate.members)


def test_all_subgroups_are_closed() -> None:
    group = dihedral_group(4)
    for subgroup in all_subgroups(group):
        members = set(subgroup.members)
        for a, b in itertools.product(members, repeat=2):
            assert group.table[a][b] in members
