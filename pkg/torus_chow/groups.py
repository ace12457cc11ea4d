"""
Finite groups given by signed permutations of a lattice basis, their subgroups and cosets, and integer matrix
actions on sublattices and quotient lattices.
"""

from __future__ import annotations

import collections
import dataclasses
import functools
import itertools
import logging
import typing

from torus_chow.exceptions import GroupTooLargeError, InputError, InvariantViolationError, UnstableSublatticeError
from torus_chow.lattice import IntegerMatrix, LatticeQuotient, Sublattice, Vector, membership, quotient_coordinates
from torus_chow.limits import get_limits

logger = logging.getLogger(__name__)

# power-set oracle is exponential in the group order
_POWER_SET_LIMIT = 16


@dataclasses.dataclass(frozen=True)
class SignedPermutation:
    """
    Sends basis vector b_i to signs[i] * b_(image[i]). Indices are 0-based; `from_one_line` and `one_line` use the
    usual 1-based notation.
    """

    image: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.image) != len(self.signs):
            raise InputError(f"Sign vector has length {len(self.signs)}, permutation has degree {len(self.image)}.")
        if sorted(self.image) != list(range(len(self.image))):
            raise InputError(f"{[i + 1 for i in self.image]} is not a permutation.")
        if any(sign not in (1, -1) for sign in self.signs):
            raise InputError(f"Signs must be +1 or -1, got {list(self.signs)}.")

    @classmethod
    def identity(cls, degree: int) -> SignedPermutation:
        return cls(tuple(range(degree)), (1,) * degree)

    @classmethod
    def from_one_line(
        cls, one_line: typing.Sequence[int], signs: typing.Sequence[int] | None = None
    ) -> SignedPermutation:
        return cls(tuple(i - 1 for i in one_line), tuple(signs) if signs is not None else (1,) * len(one_line))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: typing.Sequence[int]) -> SignedPermutation:
        """Pure permutation from 1-based cycles, `from_cycles(4, (1, 2), (3, 4))`."""
        image = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, [*cycle[1:], cycle[0]]):
                image[a - 1] = b - 1
        return cls(tuple(image), (1,) * degree)

    @property
    def degree(self) -> int:
        return len(self.image)

    @property
    def one_line(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.image)

    @property
    def is_permutation(self) -> bool:
        """No sign flips."""
        return all(sign == 1 for sign in self.signs)

    @property
    def is_identity(self) -> bool:
        return self.is_permutation and self.image == tuple(range(self.degree))

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        """Composition: apply `other` first, then `self`."""
        if self.degree != other.degree:
            raise InputError(f"Cannot compose signed permutations of degrees {self.degree} and {other.degree}.")
        return SignedPermutation(
            tuple(self.image[j] for j in other.image),
            tuple(self.signs[j] * sign for j, sign in zip(other.image, other.signs)),
        )

    def inverse(self) -> SignedPermutation:
        image = [0] * self.degree
        signs = [1] * self.degree
        for i, (j, sign) in enumerate(zip(self.image, self.signs)):
            image[j] = i
            signs[j] = sign
        return SignedPermutation(tuple(image), tuple(signs))

    def apply(self, vector: typing.Sequence[int]) -> Vector:
        if len(vector) != self.degree:
            raise InputError(f"Vector of length {len(vector)} acted on by degree {self.degree}.")
        result = [0] * self.degree
        for i, value in enumerate(vector):
            result[self.image[i]] = self.signs[i] * value
        return tuple(result)

    def act_on_point(self, point: int) -> int:
        return self.image[point]

    def matrix(self) -> IntegerMatrix:
        entries = [0] * (self.degree * self.degree)
        for i, (j, sign) in enumerate(zip(self.image, self.signs)):
            entries[j * self.degree + i] = sign
        return IntegerMatrix(self.degree, self.degree, tuple(entries))

    def __str__(self) -> str:
        if self.is_permutation:
            return str(list(self.one_line))
        return f"{list(self.one_line)} signs {list(self.signs)}"


class FiniteActionGroup:
    """
    A finite group listed element by element, acting on Z^degree by signed permutations.

    Element 0 is the identity, the rest follow in breadth-first order from it. Groups compare by identity; two
    separately closed groups are different objects even when their elements agree.
    """

    def __init__(
        self,
        degree: int,
        generators: typing.Sequence[SignedPermutation],
        elements: typing.Sequence[SignedPermutation],
        labels: typing.Sequence[str] | None = None,
    ) -> None:
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.labels = tuple(labels) if labels is not None else None
        if not self.elements or not self.elements[0].is_identity:
            raise InputError("The first element of a group must be the identity.")

    identity_index: typing.ClassVar[int] = 0

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def rank(self) -> int:
        return self.degree

    @property
    def group(self) -> FiniteActionGroup:
        """A group is its own action on Z^degree, so it can stand in for a LinearAction."""
        return self

    @functools.cached_property
    def index_of(self) -> dict[SignedPermutation, int]:
        return {element: index for index, element in enumerate(self.elements)}

    @functools.cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        """Multiplication table, `table[a][b]` is the index of elements[a] * elements[b]."""
        index_of = self.index_of
        return tuple(tuple(index_of[a * b] for b in self.elements) for a in self.elements)

    @functools.cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(row.index(self.identity_index) for row in self.table)

    @functools.cached_property
    def generator_indices(self) -> tuple[int, ...]:
        return tuple(self.index_of[generator] for generator in self.generators)

    @property
    def is_permutation_group(self) -> bool:
        return all(element.is_permutation for element in self.elements)

    def multiply(self, a: int, b: int) -> int:
        return self.table[a][b]

    def conjugate(self, g: int, h: int) -> int:
        """Index of g h g^-1."""
        return self.table[self.table[g][h]][self.inverses[g]]

    def element_order(self, index: int) -> int:
        order, current = 1, index
        while current != self.identity_index:
            current = self.table[current][index]
            order += 1
        return order

    def apply(self, index: int, vector: typing.Sequence[int]) -> Vector:
        return self.elements[index].apply(vector)

    def element_name(self, index: int) -> str:
        if self.labels is not None:
            return self.labels[index]
        return str(self.elements[index])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<FiniteActionGroup order={self.order} degree={self.degree}>"


def close_group(
    generators: typing.Sequence[SignedPermutation],
    bound: int | None = None,
    *,
    degree: int | None = None,
) -> FiniteActionGroup:
    """
    Enumerate the group generated by `generators`, breadth-first from the identity with the generators tried in
    their given order. Raises GroupTooLargeError when more than `bound` elements (default: active limits) appear.
    """
    bound = bound if bound is not None else get_limits().max_group_order
    degrees = {generator.degree for generator in generators}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) > 1:
        raise InputError(f"Generators have different degrees {sorted(degrees)}.")
    if not degrees:
        raise InputError("Cannot infer the degree of a group without generators.")
    (size,) = degrees

    identity = SignedPermutation.identity(size)
    elements = [identity]
    seen = {identity}
    queue = collections.deque([identity])
    while queue:
        current = queue.popleft()
        for generator in generators:
            product = current * generator
            if product not in seen:
                if len(elements) >= bound:
                    raise GroupTooLargeError(bound)
                seen.add(product)
                elements.append(product)
                queue.append(product)
    logger.debug("Closed %d generators of degree %d into a group of order %d", len(generators), size, len(elements))
    return FiniteActionGroup(size, generators, elements)


@dataclasses.dataclass(frozen=True)
class SubgroupHandle:
    """A subgroup of `parent` given by the sorted indices of its elements."""

    parent: FiniteActionGroup = dataclasses.field(compare=False, repr=False)
    members: tuple[int, ...]

    @classmethod
    def generated_by(cls, parent: FiniteActionGroup, indices: typing.Iterable[int]) -> SubgroupHandle:
        return subgroup_closure(parent, indices)

    @classmethod
    def trivial(cls, parent: FiniteActionGroup) -> SubgroupHandle:
        return cls(parent, (parent.identity_index,))

    @classmethod
    def full(cls, parent: FiniteActionGroup) -> SubgroupHandle:
        return cls(parent, tuple(range(parent.order)))

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_full(self) -> bool:
        return self.order == self.parent.order

    @functools.cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __contains__(self, index: int) -> bool:
        return index in self.member_set

    def elements(self) -> list[SignedPermutation]:
        return [self.parent.elements[index] for index in self.members]

    @functools.cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, picked greedily in index order."""
        chosen: list[int] = []
        span: frozenset[int] = frozenset({self.parent.identity_index})
        for index in self.members:
            if index not in span:
                chosen.append(index)
                span = frozenset(subgroup_closure(self.parent, chosen).members)
        return tuple(chosen)

    def conjugate(self, g: int) -> SubgroupHandle:
        return SubgroupHandle(self.parent, tuple(sorted(self.parent.conjugate(g, h) for h in self.members)))

    def __str__(self) -> str:
        names = ", ".join(self.parent.element_name(index) for index in self.generators)
        return f"<{names}>" if names else "1"


def subgroup_closure(parent: FiniteActionGroup, indices: typing.Iterable[int]) -> SubgroupHandle:
    table = parent.table
    generators = list(dict.fromkeys(indices))
    members = {parent.identity_index}
    queue = collections.deque([parent.identity_index])
    while queue:
        current = queue.popleft()
        for generator in generators:
            product = table[current][generator]
            if product not in members:
                members.add(product)
                queue.append(product)
    return SubgroupHandle(parent, tuple(sorted(members)))


def is_subgroup(parent: FiniteActionGroup, indices: typing.Iterable[int]) -> bool:
    members = set(indices)
    if parent.identity_index not in members:
        return False
    table = parent.table
    return all(table[a][b] in members for a in members for b in members)


def _subgroup_key(subgroup: SubgroupHandle) -> tuple[int, tuple[int, ...]]:
    return subgroup.order, subgroup.members


def all_subgroups(group: FiniteActionGroup) -> list[SubgroupHandle]:
    """
    Every subgroup: the cyclic subgroups, then joins with cyclic subgroups until nothing new appears.
    Ordered by size, then by member indices.
    """
    cyclic: dict[tuple[int, ...], int] = {}
    for index in range(group.order):
        cyclic.setdefault(subgroup_closure(group, [index]).members, index)
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        fresh: set[tuple[int, ...]] = set()
        for members in frontier:
            member_set = set(members)
            base = SubgroupHandle(group, members).generators
            for other, generator in cyclic.items():
                if member_set.issuperset(other):
                    continue
                joined = subgroup_closure(group, [*base, generator]).members
                if joined not in found:
                    fresh.add(joined)
        found |= fresh
        frontier = fresh
    subgroups = sorted((SubgroupHandle(group, members) for members in found), key=_subgroup_key)
    logger.debug("Group of order %d has %d subgroups", group.order, len(subgroups))
    return subgroups


def power_set_subgroups(group: FiniteActionGroup) -> list[SubgroupHandle]:
    """Brute-force oracle: test every subset containing the identity. Only for groups of order at most 16."""
    if group.order > _POWER_SET_LIMIT:
        raise GroupTooLargeError(_POWER_SET_LIMIT)
    others = [index for index in range(group.order) if index != group.identity_index]
    subgroups = []
    for size in range(len(others) + 1):
        for subset in itertools.combinations(others, size):
            members = (group.identity_index, *subset)
            if is_subgroup(group, members):
                subgroups.append(SubgroupHandle(group, tuple(sorted(members))))
    return sorted(subgroups, key=_subgroup_key)


def conjugacy_classes_of_subgroups(subgroups: typing.Iterable[SubgroupHandle]) -> list[list[SubgroupHandle]]:
    """Partition subgroups into conjugacy classes; classes and members keep (size, members) order."""
    ordered = sorted(subgroups, key=_subgroup_key)
    classes: dict[tuple[int, ...], list[SubgroupHandle]] = {}
    for subgroup in ordered:
        group = subgroup.parent
        key = min(subgroup.conjugate(g).members for g in range(group.order))
        classes.setdefault(key, []).append(subgroup)
    return sorted(classes.values(), key=lambda members: _subgroup_key(members[0]))


def all_subgroups_up_to_conjugacy(group: FiniteActionGroup) -> list[SubgroupHandle]:
    """One subgroup per conjugacy class (the first in size, then member, order), trivial and full included."""
    representatives = [members[0] for members in conjugacy_classes_of_subgroups(all_subgroups(group))]
    logger.debug("Group of order %d has %d subgroup classes", group.order, len(representatives))
    return representatives


def coset_representatives(group: FiniteActionGroup, subgroup: SubgroupHandle) -> list[int]:
    """Least element index of every left coset gH, in increasing order."""
    table = group.table
    covered: set[int] = set()
    representatives = []
    for g in range(group.order):
        if g in covered:
            continue
        representatives.append(g)
        covered.update(table[g][h] for h in subgroup.members)
    return representatives


def coset_action(group: FiniteActionGroup, subgroup: SubgroupHandle) -> list[SignedPermutation]:
    """The permutation action of each generator of `group` on the left cosets of `subgroup`."""
    representatives = coset_representatives(group, subgroup)
    coset_of: dict[int, int] = {}
    for position, r in enumerate(representatives):
        for h in subgroup.members:
            coset_of[group.table[r][h]] = position
    return [
        SignedPermutation(tuple(coset_of[group.table[g][r]] for r in representatives), (1,) * len(representatives))
        for g in group.generator_indices
    ]


def symmetric_group(n: int) -> FiniteActionGroup:
    """S_n on n points, generated by (1 2) and (1 2 ... n)."""
    if n <= 1:
        return close_group([], degree=max(n, 1))
    generators = [SignedPermutation.from_cycles(n, (1, 2))]
    if n > 2:
        generators.append(SignedPermutation.from_cycles(n, tuple(range(1, n + 1))))
    return close_group(generators)


def alternating_group(n: int) -> FiniteActionGroup:
    """A_n on n points, generated by the 3-cycles (1 2 k)."""
    if n < 3:
        return close_group([], degree=max(n, 1))
    return close_group([SignedPermutation.from_cycles(n, (1, 2, k)) for k in range(3, n + 1)])


def cyclic_group(n: int) -> FiniteActionGroup:
    """Z/n acting regularly on n points."""
    if n == 1:
        return close_group([], degree=1)
    return close_group([SignedPermutation.from_cycles(n, tuple(range(1, n + 1)))])


def dihedral_group(n: int) -> FiniteActionGroup:
    """Symmetries of the n-gon, order 2n, on n points."""
    if n < 3:
        raise InputError(f"Dihedral group of the {n}-gon is not defined here; use n >= 3.")
    rotation = SignedPermutation.from_cycles(n, tuple(range(1, n + 1)))
    reflection = SignedPermutation(tuple((-i) % n for i in range(n)), (1,) * n)
    return close_group([rotation, reflection])


def direct_product(first: FiniteActionGroup, second: FiniteActionGroup) -> FiniteActionGroup:
    """The product acting on the disjoint union of both point sets."""
    degree = first.degree + second.degree
    generators = [
        SignedPermutation(
            generator.image + tuple(range(first.degree, degree)), generator.signs + (1,) * second.degree
        )
        for generator in first.generators
    ] + [
        SignedPermutation(
            tuple(range(first.degree)) + tuple(i + first.degree for i in generator.image),
            (1,) * first.degree + generator.signs,
        )
        for generator in second.generators
    ]
    return close_group(generators, degree=degree)


QUATERNION_LABELS = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")

# products of the units 1, i, j, k as (sign, unit)
_QUATERNION_UNITS = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}  # fmt: skip


def _quaternion_index(sign: int, unit: int) -> int:
    return 2 * unit + (0 if sign == 1 else 1)


def _quaternion_left_multiplication(index: int) -> SignedPermutation:
    left_sign = 1 if index % 2 == 0 else -1
    image = []
    for target in range(8):
        right_sign = 1 if target % 2 == 0 else -1
        sign, unit = _QUATERNION_UNITS[(index // 2, target // 2)]
        image.append(_quaternion_index(left_sign * right_sign * sign, unit))
    return SignedPermutation(tuple(image), (1,) * 8)


def quaternion_group() -> FiniteActionGroup:
    """
    Q_8 acting on Z^8 by left multiplication on the basis 1, -1, i, -i, j, -j, k, -k (written e, e', x, x', y, y',
    z, z' elsewhere), generated by i and j. Elements carry their quaternion names as labels.
    """
    group = close_group([_quaternion_left_multiplication(2), _quaternion_left_multiplication(4)])
    labels = []
    for element in group.elements:
        labels.append(QUATERNION_LABELS[element.image[0]])
    return FiniteActionGroup(group.degree, group.generators, group.elements, labels)


class LinearAction(typing.Protocol):  # pragma: nocover
    """Anything that lets the elements of a finite group act on Z^rank."""

    @property
    def group(self) -> FiniteActionGroup: ...

    @property
    def rank(self) -> int: ...

    def apply(self, index: int, vector: typing.Sequence[int]) -> Vector: ...


@dataclasses.dataclass(frozen=True, eq=False)
class MatrixAction:
    """An action of `group` on Z^rank by integer matrices, one per element, indexed like `group.elements`."""

    group: FiniteActionGroup
    rank: int
    images: tuple[IntegerMatrix, ...]

    @classmethod
    def from_group(cls, group: FiniteActionGroup) -> MatrixAction:
        return cls(group, group.degree, tuple(element.matrix() for element in group.elements))

    def image(self, index: int) -> IntegerMatrix:
        return self.images[index]

    def apply(self, index: int, vector: typing.Sequence[int]) -> Vector:
        return self.images[index].apply(vector)

    @functools.cached_property
    def signed_permutations(self) -> tuple[SignedPermutation, ...] | None:
        """The images as signed permutations of the rank coordinates, or None when some matrix is not monomial."""
        elements = [_as_signed_permutation(matrix) for matrix in self.images]
        if any(element is None for element in elements):
            return None
        return tuple(typing.cast(list[SignedPermutation], elements))

    @property
    def is_signed_permutation(self) -> bool:
        return self.signed_permutations is not None

    def verify(self) -> None:
        """Check the composition law on (element, generator) pairs, the identity, and invertibility over Z."""
        group = self.group
        if len(self.images) != group.order:
            raise InvariantViolationError(f"Action lists {len(self.images)} matrices for {group.order} elements.")
        if self.images[group.identity_index] != IntegerMatrix.identity(self.rank):
            raise InvariantViolationError("The identity does not act trivially.")
        for generator in group.generator_indices:
            if abs(self.images[generator].determinant()) != 1:
                raise InvariantViolationError(f"Element {group.element_name(generator)} is not invertible over Z.")
            for g in range(group.order):
                product = group.table[g][generator]
                if self.images[product] != self.images[g] @ self.images[generator]:
                    raise InvariantViolationError(
                        f"Composition fails for {group.element_name(g)} * {group.element_name(generator)}."
                    )


def _as_signed_permutation(matrix: IntegerMatrix) -> SignedPermutation | None:
    image = [0] * matrix.cols
    signs = [1] * matrix.cols
    for j, column in enumerate(matrix.column_vectors()):
        support = [i for i, value in enumerate(column) if value]
        if len(support) != 1 or column[support[0]] not in (1, -1):
            return None
        image[j] = support[0]
        signs[j] = column[support[0]]
    if sorted(image) != list(range(matrix.cols)):
        return None
    return SignedPermutation(tuple(image), tuple(signs))


def _action_matrices(action: LinearAction) -> list[IntegerMatrix]:
    if isinstance(action, MatrixAction):
        return list(action.images)
    identity = IntegerMatrix.identity(action.rank)
    return [
        IntegerMatrix.from_columns([action.apply(g, column) for column in identity.column_vectors()], action.rank)
        for g in range(action.group.order)
    ]


def _unstable(action: LinearAction, index: int) -> UnstableSublatticeError:
    return UnstableSublatticeError(action.group.element_name(index), index)


def check_stable(action: LinearAction, lattice: Sublattice) -> None:
    """Raise UnstableSublatticeError naming the first generator (then element) that moves `lattice` out of itself."""
    group = action.group
    order = [*group.generator_indices, *range(group.order)]
    for g in dict.fromkeys(order):
        for vector in lattice.basis:
            if not membership(action.apply(g, vector), lattice).member:
                raise _unstable(action, g)


def restrict_action_to_sublattice(action: LinearAction, lattice: Sublattice) -> MatrixAction:
    """The action on a stable sublattice, in coordinates over its Hermite basis."""
    if lattice.ambient_rank != action.rank:
        raise InputError(f"Sublattice of ambient rank {lattice.ambient_rank} for an action of rank {action.rank}.")
    check_stable(action, lattice)
    images = []
    for g in range(action.group.order):
        columns = []
        for vector in lattice.basis:
            result = membership(action.apply(g, vector), lattice)
            assert result.coefficients is not None
            columns.append(result.coefficients)
        images.append(IntegerMatrix.from_columns(columns, lattice.rank))
    restricted = MatrixAction(action.group, lattice.rank, tuple(images))
    restricted.verify()
    return restricted


def quotient_data(action: LinearAction, lattice: Sublattice) -> tuple[LatticeQuotient, MatrixAction]:
    """
    Coordinates on Z^n / lattice together with the induced action. Raises UnstableSublatticeError or
    TorsionQuotientError when the quotient is not a lattice with a group action.
    """
    if lattice.ambient_rank != action.rank:
        raise InputError(f"Sublattice of ambient rank {lattice.ambient_rank} for an action of rank {action.rank}.")
    check_stable(action, lattice)
    quotient = quotient_coordinates(lattice)
    images = tuple(quotient.projection @ matrix @ quotient.lift for matrix in _action_matrices(action))
    induced = MatrixAction(action.group, quotient.rank, images)
    induced.verify()
    return quotient, induced


def quotient_action(action: LinearAction, lattice: Sublattice) -> MatrixAction:
    return quotient_data(action, lattice)[1]
