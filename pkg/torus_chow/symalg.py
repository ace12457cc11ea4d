"""
Degree pieces S(L)_d of the symmetric algebra on a lattice L = Z^n.

Elements of a piece are integer coordinate vectors over its monomial basis. Within a degree monomials are listed
in descending lexicographic order of their exponent vectors, so for n = 2, d = 2 the basis is x^2, xy, y^2.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import typing

from torus_chow.exceptions import DegreeTooLargeError, InputError, PreconditionError
from torus_chow.groups import FiniteActionGroup, MatrixAction, SubgroupHandle, coset_representatives
from torus_chow.lattice import (
    IntegerMatrix,
    Sublattice,
    Vector,
    kernel_basis,
    sublattice_from_generators,
)
from torus_chow.limits import get_limits

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]


def _compositions(rank: int, degree: int) -> list[Monomial]:
    if rank == 0:
        return [()] if degree == 0 else []
    if rank == 1:
        return [(degree,)]
    return [(head, *tail) for head in range(degree, -1, -1) for tail in _compositions(rank - 1, degree - head)]


@dataclasses.dataclass(frozen=True, eq=False)
class GradedPiece:
    """The degree `degree` piece of S(Z^rank) with its ordered monomial basis."""

    rank: int
    degree: int
    basis: tuple[Monomial, ...]

    @functools.cached_property
    def index_of(self) -> dict[Monomial, int]:
        return {monomial: index for index, monomial in enumerate(self.basis)}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def zero(self) -> Vector:
        return (0,) * self.dimension

    def unit_vector(self, monomial: Monomial) -> Vector:
        vector = [0] * self.dimension
        vector[self.index_of[monomial]] = 1
        return tuple(vector)

    def full(self) -> Sublattice:
        return Sublattice.full(self.dimension)

    def __repr__(self) -> str:
        return f"<GradedPiece rank={self.rank} degree={self.degree} dimension={self.dimension}>"


@functools.lru_cache(maxsize=256)
def _piece(rank: int, degree: int) -> GradedPiece:
    return GradedPiece(rank, degree, tuple(_compositions(rank, degree)))


def monomial_basis(rank: int, degree: int) -> GradedPiece:
    """
    All monomials of `degree` in `rank` variables, C(rank + degree - 1, degree) of them.
    Raises DegreeTooLargeError beyond the active degree cap.
    """
    if degree < 0 or rank < 0:
        raise InputError(f"Degree and rank must be nonnegative, got degree {degree} and rank {rank}.")
    cap = get_limits().max_degree
    if degree > cap:
        raise DegreeTooLargeError(degree, cap)
    return _piece(rank, degree)


@dataclasses.dataclass(frozen=True)
class HomogeneousElement:
    """A homogeneous polynomial: coefficients over the monomial basis of S(Z^rank)_degree."""

    rank: int
    degree: int
    coefficients: Vector

    def __post_init__(self) -> None:
        if len(self.coefficients) != self.piece.dimension:
            raise InputError(
                f"Degree {self.degree} piece in {self.rank} variables has dimension {self.piece.dimension}, "
                f"got {len(self.coefficients)} coefficients."
            )

    @classmethod
    def from_terms(cls, rank: int, degree: int, terms: typing.Mapping[Monomial, int]) -> HomogeneousElement:
        piece = monomial_basis(rank, degree)
        coefficients = [0] * piece.dimension
        for monomial, value in terms.items():
            if len(monomial) != rank or sum(monomial) != degree:
                raise InputError(f"Monomial {monomial} does not have degree {degree} in {rank} variables.")
            coefficients[piece.index_of[monomial]] += value
        return cls(rank, degree, tuple(coefficients))

    @classmethod
    def variable(cls, rank: int, index: int) -> HomogeneousElement:
        exponents = [0] * rank
        exponents[index] = 1
        return cls.from_terms(rank, 1, {tuple(exponents): 1})

    @classmethod
    def one(cls, rank: int) -> HomogeneousElement:
        return cls(rank, 0, (1,))

    @property
    def piece(self) -> GradedPiece:
        return _piece(self.rank, self.degree)

    @property
    def terms(self) -> dict[Monomial, int]:
        return {monomial: value for monomial, value in zip(self.piece.basis, self.coefficients) if value}

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def _check(self, other: HomogeneousElement) -> None:
        if (self.rank, self.degree) != (other.rank, other.degree):
            raise InputError(
                f"Cannot add degree {other.degree} in {other.rank} variables to degree {self.degree} in {self.rank}."
            )

    def __add__(self, other: HomogeneousElement) -> HomogeneousElement:
        self._check(other)
        coefficients = tuple(a + b for a, b in zip(self.coefficients, other.coefficients))
        return HomogeneousElement(self.rank, self.degree, coefficients)

    def __sub__(self, other: HomogeneousElement) -> HomogeneousElement:
        self._check(other)
        coefficients = tuple(a - b for a, b in zip(self.coefficients, other.coefficients))
        return HomogeneousElement(self.rank, self.degree, coefficients)

    def __neg__(self) -> HomogeneousElement:
        return HomogeneousElement(self.rank, self.degree, tuple(-a for a in self.coefficients))

    def __rmul__(self, scalar: int) -> HomogeneousElement:
        return HomogeneousElement(self.rank, self.degree, tuple(scalar * a for a in self.coefficients))

    def __mul__(self, other: HomogeneousElement) -> HomogeneousElement:
        return multiply(self, other)


def _multiply_vectors(rank: int, left: GradedPiece, u: Vector, right: GradedPiece, v: Vector) -> Vector:
    target = monomial_basis(rank, left.degree + right.degree)
    result = [0] * target.dimension
    index_of = target.index_of
    right_terms = [(monomial, value) for monomial, value in zip(right.basis, v) if value]
    for a, x in zip(left.basis, u):
        if not x:
            continue
        for b, y in right_terms:
            result[index_of[tuple(i + j for i, j in zip(a, b))]] += x * y
    return tuple(result)


def multiply(u: HomogeneousElement, v: HomogeneousElement) -> HomogeneousElement:
    """Product in the symmetric algebra, of degree u.degree + v.degree."""
    if u.rank != v.rank:
        raise InputError(f"Cannot multiply polynomials in {u.rank} and {v.rank} variables.")
    coefficients = _multiply_vectors(u.rank, u.piece, u.coefficients, v.piece, v.coefficients)
    return HomogeneousElement(u.rank, u.degree + v.degree, coefficients)


def sym_power_map(matrix: IntegerMatrix, degree: int) -> IntegerMatrix:
    """
    The map S(Z^cols)_degree -> S(Z^rows)_degree induced by `matrix`. Column k is the image of the k-th source
    monomial, a product of the images of the variables.
    """
    monomial_basis(max(matrix.rows, matrix.cols), degree)
    return _sym_power_map(matrix, degree)


@functools.lru_cache(maxsize=256)
def _sym_power_map(matrix: IntegerMatrix, degree: int) -> IntegerMatrix:
    source = _piece(matrix.cols, degree)
    target = _piece(matrix.rows, degree)
    # degree one monomials are the variables in their own order
    linear = [HomogeneousElement(matrix.rows, 1, matrix.column(j)) for j in range(matrix.cols)]

    @functools.lru_cache(maxsize=None)
    def image(monomial: Monomial) -> HomogeneousElement:
        if not any(monomial):
            return HomogeneousElement.one(matrix.rows)
        j = next(index for index, exponent in enumerate(monomial) if exponent)
        rest = list(monomial)
        rest[j] -= 1
        return multiply(linear[j], image(tuple(rest)))

    columns = [image(monomial).coefficients for monomial in source.basis]
    return IntegerMatrix.from_columns(columns, target.dimension)


class SymmetricAction:
    """
    The action of a finite group on S(Z^n)_d induced from its action on Z^n.

    Signed-permutation base actions move monomials to signed monomials and are stored that way; other actions are
    stored as one matrix per element.
    """

    def __init__(
        self,
        group: FiniteActionGroup,
        piece: GradedPiece,
        monomial_images: tuple[tuple[tuple[int, int], ...], ...] | None = None,
        matrices: tuple[IntegerMatrix, ...] | None = None,
    ) -> None:
        if (monomial_images is None) == (matrices is None):
            raise InputError("Give either monomial images or matrices.")
        self.group = group
        self.piece = piece
        self.monomial_images = monomial_images
        self.matrices = matrices

    @property
    def rank(self) -> int:
        return self.piece.dimension

    @property
    def degree(self) -> int:
        return self.piece.degree

    @property
    def is_monomial(self) -> bool:
        return self.monomial_images is not None

    def apply(self, index: int, vector: typing.Sequence[int]) -> Vector:
        if self.monomial_images is not None:
            result = [0] * self.piece.dimension
            for (target, sign), value in zip(self.monomial_images[index], vector):
                if value:
                    result[target] += sign * value
            return tuple(result)
        assert self.matrices is not None
        return self.matrices[index].apply(vector)

    def matrix(self, index: int) -> IntegerMatrix:
        if self.matrices is not None:
            return self.matrices[index]
        assert self.monomial_images is not None
        size = self.piece.dimension
        entries = [0] * (size * size)
        for source, (target, sign) in enumerate(self.monomial_images[index]):
            entries[target * size + source] = sign
        return IntegerMatrix(size, size, tuple(entries))


def _monomial_images(
    piece: GradedPiece, image: tuple[int, ...], signs: tuple[int, ...]
) -> tuple[tuple[int, int], ...]:
    result = []
    for monomial in piece.basis:
        moved = [0] * piece.rank
        sign = 1
        for i, exponent in enumerate(monomial):
            if exponent:
                moved[image[i]] = exponent
                if signs[i] < 0 and exponent % 2:
                    sign = -sign
        result.append((piece.index_of[tuple(moved)], sign))
    return tuple(result)


def symmetric_power_action(base: FiniteActionGroup | MatrixAction, degree: int) -> SymmetricAction:
    """Induced action on the degree `degree` piece. The sign of a moved monomial is prod_i sign(i)^exponent(i)."""
    monomial_basis(base.rank, degree)
    return _symmetric_power_action(base, degree)


@functools.lru_cache(maxsize=256)
def _symmetric_power_action(base: FiniteActionGroup | MatrixAction, degree: int) -> SymmetricAction:
    group = base if isinstance(base, FiniteActionGroup) else base.group
    piece = _piece(base.rank, degree)
    if isinstance(base, FiniteActionGroup):
        signed = [(element.image, element.signs) for element in base.elements]
    elif base.is_signed_permutation:
        signed = [(element.image, element.signs) for element in base.signed_permutations or ()]
    else:
        return SymmetricAction(group, piece, matrices=tuple(sym_power_map(m, degree) for m in base.images))
    return SymmetricAction(group, piece, monomial_images=tuple(_monomial_images(piece, *pair) for pair in signed))


def _subgroup_generators(action: SymmetricAction, over: SubgroupHandle | None) -> tuple[int, ...]:
    if over is None:
        return action.group.generator_indices
    return over.generators


def _subgroup_members(action: SymmetricAction, over: SubgroupHandle | None) -> typing.Sequence[int]:
    return range(action.group.order) if over is None else over.members


def _signed_orbit(action: SymmetricAction, over: SubgroupHandle | None, start: int) -> dict[int, int] | None:
    """Monomial index -> sign over the orbit of `start`; None when some element sends the monomial to its negative."""
    assert action.monomial_images is not None
    orbit: dict[int, int] = {}
    for g in _subgroup_members(action, over):
        target, sign = action.monomial_images[g][start]
        known = orbit.setdefault(target, sign)
        if known != sign:
            return None
    return orbit


@functools.lru_cache(maxsize=256)
def _invariants(action: SymmetricAction, over: SubgroupHandle | None, method: str) -> Sublattice:
    piece = action.piece
    if method == "orbits" and action.is_monomial:
        visited: set[int] = set()
        generators = []
        for start in range(piece.dimension):
            if start in visited:
                continue
            orbit = _signed_orbit(action, over, start)
            if orbit is None:
                assert action.monomial_images is not None
                visited.update(action.monomial_images[g][start][0] for g in _subgroup_members(action, over))
                continue
            visited.update(orbit)
            vector = [0] * piece.dimension
            for index, sign in orbit.items():
                vector[index] = sign
            generators.append(vector)
        return sublattice_from_generators(piece.dimension, generators)
    if method not in ("orbits", "kernel"):
        raise InputError(f"Unknown invariants method {method!r}; use 'orbits' or 'kernel'.")
    generators = _subgroup_generators(action, over)
    if not generators:
        return piece.full()
    identity = IntegerMatrix.identity(piece.dimension)
    stacked = IntegerMatrix.stack([action.matrix(g) - identity for g in generators], piece.dimension)
    return kernel_basis(stacked)


def invariants(
    piece: GradedPiece,
    action: SymmetricAction,
    over: SubgroupHandle | None = None,
    method: str = "orbits",
) -> Sublattice:
    """
    The elements of `piece` fixed by `over` (default: the whole group).

    With method="orbits" a signed-monomial action contributes one signed orbit sum per orbit that does not cancel
    itself; method="kernel" solves (g - 1) x = 0 for the generators of `over`. Both give the same lattice.
    """
    if piece is not action.piece and (piece.rank, piece.degree) != (action.piece.rank, action.piece.degree):
        raise InputError(f"Action is on degree {action.degree}, piece has degree {piece.degree}.")
    return _invariants(action, over, method)


def orbit_sum(
    action: SymmetricAction, monomial: Monomial, over: SubgroupHandle | None = None
) -> HomogeneousElement:
    """Signed sum of the distinct monomials in the orbit of `monomial`; zero when the orbit cancels."""
    if action.monomial_images is None:
        raise PreconditionError("Orbit sums need an action by signed permutations of monomials.")
    piece = action.piece
    orbit = _signed_orbit(action, over, piece.index_of[monomial]) or {}
    coefficients = [0] * piece.dimension
    for index, sign in orbit.items():
        coefficients[index] = sign
    return HomogeneousElement(piece.rank, piece.degree, tuple(coefficients))


def ideal_piece(embedding: IntegerMatrix, degree: int) -> Sublattice:
    """
    J_d: the degree `degree` part of the ideal generated by the columns of `embedding`, spanned by the products of
    each column with every monomial of degree `degree` - 1.
    """
    if degree < 1:
        raise InputError(f"The ideal is generated in degree 1, got degree {degree}.")
    rank = embedding.rows
    target = monomial_basis(rank, degree)
    lower = monomial_basis(rank, degree - 1)
    linear = monomial_basis(rank, 1)
    generators = []
    for column in embedding.column_vectors():
        for monomial in lower.basis:
            generators.append(_multiply_vectors(rank, linear, column, lower, lower.unit_vector(monomial)))
    return sublattice_from_generators(target.dimension, generators)


def induce(
    vector: typing.Sequence[int],
    subgroup: SubgroupHandle,
    action: SymmetricAction,
    representatives: typing.Sequence[int] | None = None,
) -> Vector:
    """
    Ind from `subgroup` to the whole group: the sum of g * vector over left coset representatives g.
    `vector` must be fixed by `subgroup`, which makes the result independent of the representatives chosen.
    """
    vector = tuple(vector)
    for h in subgroup.generators:
        if action.apply(h, vector) != vector:
            raise PreconditionError(
                f"Element is not fixed by {action.group.element_name(h)}, so its induction is not defined."
            )
    if representatives is None:
        representatives = coset_representatives(action.group, subgroup)
    elif len(representatives) != subgroup.index:
        raise PreconditionError(f"Expected {subgroup.index} coset representatives, got {len(representatives)}.")
    if subgroup.is_full:
        return vector
    total = [0] * len(vector)
    for g in representatives:
        for index, value in enumerate(action.apply(g, vector)):
            total[index] += value
    return tuple(total)


class ResolutionData(typing.Protocol):  # pragma: nocover
    """What induced contributions need to know about 0 -> P -> Q -> T -> 0 on characters."""

    @property
    def group(self) -> FiniteActionGroup: ...

    @property
    def embedding(self) -> IntegerMatrix: ...

    @property
    def phat_action(self) -> MatrixAction: ...

    @property
    def qhat_action(self) -> FiniteActionGroup | MatrixAction: ...


def induced_contribution(subgroup: SubgroupHandle, resolution: ResolutionData, degree: int) -> Sublattice:
    """
    Span of Ind(x * y) over e = 1..degree, x among generators of the `subgroup`-invariants of S(P)_e pushed into
    S(Q)_e and y among generators of the `subgroup`-invariants of S(Q)_(degree - e).
    """
    if degree < 1:
        raise InputError(f"Induced contributions start in degree 1, got {degree}.")
    embedding = resolution.embedding
    rank = embedding.rows
    target = monomial_basis(rank, degree)
    q_action = symmetric_power_action(resolution.qhat_action, degree)
    if embedding.cols == 0:
        return Sublattice.zero(target.dimension)

    generators = []
    for e in range(1, degree + 1):
        p_action = symmetric_power_action(resolution.phat_action, e)
        p_invariants = invariants(p_action.piece, p_action, subgroup)
        if p_invariants.is_zero:
            continue
        push = sym_power_map(embedding, e)
        left_piece = monomial_basis(rank, e)
        pushed = [push.apply(x) for x in p_invariants.basis]
        right_action = symmetric_power_action(resolution.qhat_action, degree - e)
        right = invariants(right_action.piece, right_action, subgroup)
        for x in pushed:
            for y in right.basis:
                product = _multiply_vectors(rank, left_piece, x, right_action.piece, y)
                generators.append(induce(product, subgroup, q_action))
    result = sublattice_from_generators(target.dimension, generators)
    logger.debug(
        "Subgroup of order %d contributes rank %d in degree %d (%d generators)",
        subgroup.order,
        result.rank,
        degree,
        len(generators),
    )
    return result
