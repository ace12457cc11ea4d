"""
Strata of the standard representation of a permutation torus.

A permutation torus is given by a Galois group acting on the points {1..N}. Subfields are never built: a field
between k and k' is the subgroup of the Galois group fixing it, so every statement here is about group actions on
finite sets.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import typing

from torus_chow.exceptions import GammaSetTooLargeError, InputError, ValidationError
from torus_chow.groups import (
    FiniteActionGroup,
    SignedPermutation,
    SubgroupHandle,
    all_subgroups_up_to_conjugacy,
    alternating_group,
    close_group,
    coset_action,
    cyclic_group,
    dihedral_group,
    direct_product,
    quaternion_group,
    symmetric_group,
)
from torus_chow.limits import get_limits

if typing.TYPE_CHECKING:  # pragma: nocover
    from torus_chow.chow import ResolutionProblem

logger = logging.getLogger(__name__)

Subset = tuple[int, ...]


@dataclasses.dataclass(frozen=True, eq=False)
class GammaSet:
    """A group acting on the points 0..N-1 by plain permutations."""

    group: FiniteActionGroup
    name: str = ""

    def __post_init__(self) -> None:
        if not self.group.is_permutation_group:
            raise ValidationError("A Gamma-set needs an action by permutations without signs.")
        cap = get_limits().max_points
        if self.points > cap:
            raise GammaSetTooLargeError(self.points, cap)

    @property
    def points(self) -> int:
        return self.group.degree

    def image(self, element: int, subset: typing.Iterable[int]) -> Subset:
        permutation = self.group.elements[element]
        return tuple(sorted(permutation.act_on_point(point) for point in subset))

    def setwise_stabilizer(self, subset: typing.Iterable[int]) -> SubgroupHandle:
        target = tuple(sorted(subset))
        members = tuple(g for g in range(self.group.order) if self.image(g, target) == target)
        return SubgroupHandle(self.group, members)

    def point_stabilizer(self, point: int, within: SubgroupHandle) -> SubgroupHandle:
        elements = self.group.elements
        members = tuple(g for g in within.members if elements[g].act_on_point(point) == point)
        return SubgroupHandle(self.group, members)

    def orbits(self, within: SubgroupHandle, points: typing.Iterable[int]) -> list[Subset]:
        """Orbits of `within` on `points` (a union of orbits), each sorted, ordered by least point."""
        remaining = sorted(set(points))
        elements = self.group.elements
        result = []
        while remaining:
            start = remaining[0]
            orbit = tuple(sorted({elements[g].act_on_point(start) for g in within.members}))
            result.append(orbit)
            remaining = [point for point in remaining if point not in orbit]
        return result


@dataclasses.dataclass(frozen=True)
class Block:
    """An orbit of the stratum's stabilizer, with the stabilizer of its least point (the field it is defined over)."""

    points: Subset
    stabilizer: SubgroupHandle

    @property
    def size(self) -> int:
        return len(self.points)


@dataclasses.dataclass(frozen=True)
class StratumDescriptor:
    """
    One Galois orbit of p-subsets J. The stratum is a torus over the field of `stabilizer` (the subgroup fixing J
    setwise); `blocks` split J and `complement_blocks` split the remaining points into orbits of that subgroup.
    """

    subset: Subset
    orbit_size: int
    stabilizer: SubgroupHandle
    blocks: tuple[Block, ...]
    complement_blocks: tuple[Block, ...]
    points: int

    @property
    def p(self) -> int:
        return len(self.subset)

    @property
    def field_degree(self) -> int:
        """[K : k] = [Gamma : S_J]."""
        return self.orbit_size

    @property
    def torus_rank(self) -> int:
        return self.points - self.p


def _blocks(gs: GammaSet, stabilizer: SubgroupHandle, points: typing.Iterable[int]) -> tuple[Block, ...]:
    return tuple(Block(orbit, gs.point_stabilizer(orbit[0], stabilizer)) for orbit in gs.orbits(stabilizer, points))


def strata(gs: GammaSet, p: int) -> list[StratumDescriptor]:
    """One descriptor per orbit of p-subsets, represented by the lexicographically least subset of the orbit."""
    if not 0 <= p <= gs.points:
        raise InputError(f"Subset size {p} is outside 0..{gs.points}.")
    seen: set[Subset] = set()
    descriptors = []
    for subset in itertools.combinations(range(gs.points), p):
        if subset in seen:
            continue
        orbit = {gs.image(g, subset) for g in range(gs.group.order)}
        seen |= orbit
        stabilizer = gs.setwise_stabilizer(subset)
        assert len(orbit) * stabilizer.order == gs.group.order
        complement = [point for point in range(gs.points) if point not in subset]
        descriptors.append(
            StratumDescriptor(
                subset=subset,
                orbit_size=len(orbit),
                stabilizer=stabilizer,
                blocks=_blocks(gs, stabilizer, subset),
                complement_blocks=_blocks(gs, stabilizer, complement),
                points=gs.points,
            )
        )
    logger.debug("%d-subsets of %d points form %d orbits", p, gs.points, len(descriptors))
    return descriptors


@dataclasses.dataclass(frozen=True)
class Lemma12Result:
    """
    Comparison of the blocks of J and J^c under their common stabilizer with the orbits of that stabilizer on all
    points. `matching` pairs every block with the orbit it is isomorphic to.
    """

    passed: bool
    subset: Subset
    stabilizer: SubgroupHandle
    matching: tuple[tuple[Subset, Subset], ...]
    unmatched: tuple[Subset, ...] = ()

    def __bool__(self) -> bool:
        return self.passed


def _conjugate_in(a: SubgroupHandle, b: SubgroupHandle, within: SubgroupHandle) -> bool:
    if a.order != b.order:
        return False
    return any(a.conjugate(s).members == b.members for s in within.members)


def lemma12_check(gs: GammaSet, subset: typing.Iterable[int]) -> Lemma12Result:
    """
    Check that the torus of J times the torus of J^c, over the field fixed by the stabilizer S of J, is the base
    change of the whole torus: as S-sets, the blocks of J and J^c together are isomorphic to all points. Transitive
    S-sets are matched when their point stabilizers are conjugate in S.
    """
    chosen = tuple(sorted(set(subset)))
    if any(not 0 <= point < gs.points for point in chosen):
        raise InputError(f"Subset {list(chosen)} is not inside 0..{gs.points - 1}.")
    stabilizer = gs.setwise_stabilizer(chosen)
    complement = [point for point in range(gs.points) if point not in chosen]
    left = [*_blocks(gs, stabilizer, chosen), *_blocks(gs, stabilizer, complement)]
    right = list(_blocks(gs, stabilizer, range(gs.points)))

    matching = []
    unmatched = []
    for block in left:
        partner = next(
            (
                orbit
                for orbit in right
                if orbit.size == block.size and _conjugate_in(block.stabilizer, orbit.stabilizer, stabilizer)
            ),
            None,
        )
        if partner is None:
            unmatched.append(block.points)
            continue
        right.remove(partner)
        matching.append((block.points, partner.points))
    unmatched.extend(orbit.points for orbit in right)
    return Lemma12Result(not unmatched, chosen, stabilizer, tuple(matching), tuple(unmatched))


def gamma_set_from_problem(problem: ResolutionProblem) -> GammaSet:
    """The points permuted by the group of a problem whose action has no signs."""
    return GammaSet(problem.group, problem.name)


def _group_from_maps(points: int, maps: typing.Iterable[typing.Callable[[int], int]]) -> FiniteActionGroup:
    return close_group(
        [SignedPermutation(tuple(move(i) for i in range(points)), (1,) * points) for move in maps], degree=points
    )


def _affine_group(modulus: int, multiplier: int) -> FiniteActionGroup:
    """x -> x + 1 and x -> multiplier * x on Z/modulus."""

    def shift(x: int) -> int:
        return (x + 1) % modulus

    def scale(x: int) -> int:
        return multiplier * x % modulus

    return _group_from_maps(modulus, [shift, scale])


def _special_linear_group() -> FiniteActionGroup:
    """SL(2, 3) on the eight nonzero vectors of F_3^2."""
    vectors = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]

    def elementary(row: int) -> typing.Callable[[int], int]:
        def move(i: int) -> int:
            a, b = vectors[i]
            return vectors.index(((a + b) % 3, b) if row == 0 else (a, (a + b) % 3))

        return move

    return _group_from_maps(8, [elementary(0), elementary(1)])


def _pauli_group() -> FiniteActionGroup:
    """The central product C_4 o D_4, acting on phased basis vectors i^k |b> numbered 2k + b."""

    def point(k: int, b: int) -> int:
        return 2 * (k % 4) + b

    def flip(i: int) -> int:
        return point(i // 2, 1 - i % 2)

    def phase_flip(i: int) -> int:
        return point(i // 2 + 2 * (i % 2), i % 2)

    def phase(i: int) -> int:
        return point(i // 2 + 1, i % 2)

    return _group_from_maps(8, [flip, phase_flip, phase])


def _seed_groups(max_order: int) -> list[FiniteActionGroup]:
    c2 = cyclic_group(2)
    # C_4 acting on C_2 x C_2 by swapping the factors
    swap = close_group(
        [
            SignedPermutation.from_cycles(8, (1, 2)),
            SignedPermutation.from_cycles(8, (3, 4)),
            SignedPermutation.from_cycles(8, (1, 3, 2, 4), (5, 6, 7, 8)),
        ]
    )
    candidates = [
        *(cyclic_group(n) for n in range(1, 9)),
        *(dihedral_group(n) for n in range(3, 13)),
        symmetric_group(4),
        alternating_group(4),
        quaternion_group(),
        _affine_group(5, 2),
        _affine_group(7, 2),
        _affine_group(8, 5),
        _affine_group(8, 3),
        _special_linear_group(),
        _pauli_group(),
        swap,
        direct_product(c2, c2),
        direct_product(direct_product(c2, c2), c2),
        direct_product(c2, cyclic_group(4)),
        direct_product(c2, cyclic_group(6)),
        direct_product(cyclic_group(3), cyclic_group(3)),
        direct_product(cyclic_group(4), cyclic_group(4)),
        direct_product(c2, dihedral_group(4)),
        direct_product(c2, quaternion_group()),
        direct_product(cyclic_group(3), symmetric_group(3)),
        direct_product(c2, alternating_group(4)),
        direct_product(c2, dihedral_group(6)),
    ]
    return [group for group in candidates if group.order <= max_order]


def _relabelling_exists(first: FiniteActionGroup, second: FiniteActionGroup) -> bool:
    """Whether a bijection of the points carries the transitive group `first` onto `second`."""
    if (first.degree, first.order) != (second.degree, second.order):
        return False
    generators = first.generators
    # second is transitive, so the bijection can be chosen to fix point 0
    for images in itertools.product(second.elements, repeat=len(generators)):
        relabel = {0: 0}
        queue = [0]
        consistent = True
        while queue and consistent:
            point = queue.pop()
            for g, h in zip(generators, images):
                source, target = g.image[point], h.image[relabel[point]]
                if source not in relabel:
                    relabel[source] = target
                    queue.append(source)
                elif relabel[source] != target:
                    consistent = False
                    break
        if consistent and len(set(relabel.values())) == first.degree:
            return True
    return False


def transitive_gamma_sets(max_points: int = 8, max_order: int = 24) -> list[GammaSet]:
    """
    Transitive Gamma-sets Gamma/H with at most `max_points` points and |Gamma| at most `max_order`, one per
    permutation group up to relabelling the points, ordered by degree and order. Gamma runs over a fixed family of
    seed groups that contains every transitive group on at most 8 points of order at most 24.
    """
    found: list[FiniteActionGroup] = []
    for seed in _seed_groups(max_order):
        for subgroup in all_subgroups_up_to_conjugacy(seed):
            degree = subgroup.index
            if degree > max_points:
                continue
            image = close_group(coset_action(seed, subgroup), degree=degree)
            if not any(_relabelling_exists(image, known) for known in found):
                found.append(image)
    found.sort(key=lambda group: (group.degree, group.order, sorted(element.image for element in group.elements)))
    result = [GammaSet(group, f"order {group.order} on {group.degree} points") for group in found]
    logger.debug("Built %d transitive Gamma-sets with at most %d points", len(result), max_points)
    return result
