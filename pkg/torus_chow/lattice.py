"""
Exact integer linear algebra: Smith and Hermite normal forms, kernels, intersections and quotients.

All arithmetic uses Python integers, so intermediate coefficient growth never overflows. A sublattice is always
stored in row-style Hermite normal form; two sublattices are equal exactly when their generator matrices are.
"""

from __future__ import annotations

import bisect
import dataclasses
import functools
import itertools
import logging
import typing

from torus_chow.exceptions import InputError, PreconditionError, TorsionQuotientError

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]

# coordinate complements tried before falling back to the Smith basis of a quotient
_MAX_COMPLEMENT_CANDIDATES = 20000


@dataclasses.dataclass(frozen=True)
class IntegerMatrix:
    """Dense integer matrix, row-major. Maps column vectors of length `cols` to length `rows`."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InputError(f"Matrix dimensions must be nonnegative, got {self.rows}x{self.cols}.")
        if len(self.entries) != self.rows * self.cols:
            raise InputError(f"A {self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries.")

    @classmethod
    def from_rows(cls, rows: typing.Sequence[typing.Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries: list[int] = []
        for index, row in enumerate(rows):
            if len(row) != width:
                raise InputError(f"Row {index} has length {len(row)}, expected {width}.")
            entries.extend(int(value) for value in row)
        return cls(len(rows), width, tuple(entries))

    @classmethod
    def from_columns(cls, columns: typing.Sequence[typing.Sequence[int]], rows: int) -> IntegerMatrix:
        for index, column in enumerate(columns):
            if len(column) != rows:
                raise InputError(f"Column {index} has length {len(column)}, expected {rows}.")
        entries = tuple(int(column[i]) for i in range(rows) for column in columns)
        return cls(rows, len(columns), entries)

    @classmethod
    def identity(cls, size: int) -> IntegerMatrix:
        return cls(size, size, tuple(int(i == j) for i in range(size) for j in range(size)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def stack(cls, blocks: typing.Sequence[IntegerMatrix], cols: int) -> IntegerMatrix:
        """Stack matrices vertically."""
        entries: list[int] = []
        rows = 0
        for block in blocks:
            if block.cols != cols:
                raise InputError(f"Cannot stack a block with {block.cols} columns onto {cols} columns.")
            entries.extend(block.entries)
            rows += block.rows
        return cls(rows, cols, tuple(entries))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, index: int) -> Vector:
        return self.entries[index * self.cols : (index + 1) * self.cols]

    def column(self, index: int) -> Vector:
        return tuple(self.entries[i * self.cols + index] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def row_vectors(self) -> tuple[Vector, ...]:
        return tuple(self.row(i) for i in range(self.rows))

    def column_vectors(self) -> tuple[Vector, ...]:
        return tuple(self.column(j) for j in range(self.cols))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    def transpose(self) -> IntegerMatrix:
        entries = tuple(self[i, j] for j in range(self.cols) for i in range(self.rows))
        return IntegerMatrix(self.cols, self.rows, entries)

    def apply(self, vector: typing.Sequence[int]) -> Vector:
        """Return the product of this matrix with a column vector."""
        if len(vector) != self.cols:
            raise InputError(f"Vector of length {len(vector)} does not fit a matrix with {self.cols} columns.")
        support = [(j, value) for j, value in enumerate(vector) if value]
        cols = self.cols
        entries = self.entries
        return tuple(sum(entries[i * cols + j] * value for j, value in support) for i in range(self.rows))

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise InputError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}.")
        columns = other.column_vectors()
        entries = tuple(
            sum(a * b for a, b in zip(self.row(i), column) if a) for i in range(self.rows) for column in columns
        )
        return IntegerMatrix(self.rows, other.cols, entries)

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise InputError(f"Cannot add matrices of shapes {self.shape} and {other.shape}.")
        return IntegerMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise InputError(f"Cannot subtract matrices of shapes {self.shape} and {other.shape}.")
        return IntegerMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def select_rows(self, indices: typing.Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix.from_rows([self.row(i) for i in indices], self.cols)

    def select_columns(self, indices: typing.Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix.from_columns([self.column(j) for j in indices], self.rows)

    @property
    def is_identity(self) -> bool:
        return self == IntegerMatrix.identity(self.rows) if self.is_square else False

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def determinant(self) -> int:
        if not self.is_square:
            raise InputError(f"Determinant of a non-square {self.rows}x{self.cols} matrix.")
        return _bareiss_determinant(self.to_rows())

    def rank(self) -> int:
        return len(_echelon_rows(self.row_vectors(), self.cols))

    def __str__(self) -> str:
        return "[" + ", ".join(str(list(self.row(i))) for i in range(self.rows)) + "]"


@dataclasses.dataclass(frozen=True)
class SmithDecomposition:
    """`u @ source @ v == d` with `u`, `v` unimodular and the diagonal of `d` a divisibility chain."""

    u: IntegerMatrix
    d: IntegerMatrix
    v: IntegerMatrix
    u_inverse: IntegerMatrix
    v_inverse: IntegerMatrix

    @property
    def diagonal(self) -> Vector:
        return tuple(self.d[i, i] for i in range(min(self.d.rows, self.d.cols)))

    @property
    def invariant_factors(self) -> Vector:
        """Nonzero diagonal entries, including the units."""
        return tuple(value for value in self.diagonal if value)


@dataclasses.dataclass(frozen=True)
class AbelianGroupStructure:
    """A finitely generated abelian group Z^free_rank + Z/t_1 + ... + Z/t_k with t_i | t_(i+1)."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise InputError(f"Free rank must be nonnegative, got {self.free_rank}.")
        for index, factor in enumerate(self.torsion):
            if factor < 2:
                raise InputError(f"Torsion factor {factor} must be at least 2.")
            if index and factor % self.torsion[index - 1]:
                raise InputError(f"Torsion factors {list(self.torsion)} do not form a divisibility chain.")

    @classmethod
    def from_factors(cls, factors: typing.Iterable[int]) -> AbelianGroupStructure:
        """Build from cyclic orders where 0 stands for Z and 1 for the trivial group."""
        values = list(factors)
        return cls(free_rank=values.count(0), torsion=tuple(sorted(f for f in values if f > 1)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def torsion_order(self) -> int:
        return functools.reduce(lambda a, b: a * b, self.torsion, 1)

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{factor}" for factor in self.torsion)
        return " + ".join(parts)


@dataclasses.dataclass(frozen=True)
class MembershipResult:
    """
    Outcome of `membership`. For members `coefficients` express the vector over the Hermite rows. For non-members
    `failure_column` is the first coordinate the Hermite reduction cannot clear and `failure_reason` says why:
    "no pivot" (no generator starts there) or "not divisible" (the pivot does not divide the entry).
    """

    member: bool
    coefficients: Vector | None = None
    failure_column: int | None = None
    failure_reason: str | None = None
    residue: Vector | None = None

    def __bool__(self) -> bool:
        return self.member


@dataclasses.dataclass(frozen=True)
class Sublattice:
    """A subgroup of Z^ambient_rank, stored by its row-style Hermite normal form."""

    ambient_rank: int
    generators: IntegerMatrix

    def __post_init__(self) -> None:
        if self.generators.cols != self.ambient_rank:
            raise InputError(
                f"Generators have {self.generators.cols} columns, ambient rank is {self.ambient_rank}."
            )
        if not _is_hermite(self.generators):
            raise InputError("Sublattice generators must be in Hermite normal form; use sublattice_from_generators.")

    @classmethod
    def zero(cls, ambient_rank: int) -> Sublattice:
        return cls(ambient_rank, IntegerMatrix.zeros(0, ambient_rank))

    @classmethod
    def full(cls, ambient_rank: int) -> Sublattice:
        return cls(ambient_rank, IntegerMatrix.identity(ambient_rank))

    @property
    def rank(self) -> int:
        return self.generators.rows

    @property
    def basis(self) -> tuple[Vector, ...]:
        return self.generators.row_vectors()

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    @functools.cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, value in enumerate(row) if value) for row in self.basis)

    def __contains__(self, vector: typing.Sequence[int]) -> bool:
        return membership(vector, self).member

    def __add__(self, other: Sublattice) -> Sublattice:
        _check_ambient(self, other)
        return sublattice_from_generators(self.ambient_rank, self.basis + other.basis)

    def __le__(self, other: Sublattice) -> bool:
        _check_ambient(self, other)
        return all(vector in other for vector in self.basis)

    def __str__(self) -> str:
        return f"Sublattice(rank {self.rank} in Z^{self.ambient_rank}: {self.generators})"


@dataclasses.dataclass(frozen=True)
class LatticeQuotient:
    """
    Coordinates on Z^n / L for a saturated sublattice L: `projection` maps Z^n onto Z^(n - rank L) with kernel L and
    `lift` is a section, so `projection @ lift` is the identity.
    """

    sublattice: Sublattice
    projection: IntegerMatrix
    lift: IntegerMatrix

    @property
    def rank(self) -> int:
        return self.projection.rows


def _check_ambient(a: Sublattice, b: Sublattice) -> None:
    if a.ambient_rank != b.ambient_rank:
        raise InputError(f"Ambient ranks differ: {a.ambient_rank} and {b.ambient_rank}.")


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # keeps x * a + y * b == g along the Euclidean algorithm
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def _bareiss_determinant(a: list[list[int]]) -> int:
    size = len(a)
    if size == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    previous = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
        previous = a[k][k]
    return sign * a[size - 1][size - 1]


class _Echelon:
    """
    Row echelon basis grown one vector at a time with unimodular row operations.

    Pivots are only taken among the first `pivot_limit` coordinates. A vector whose leading part reduces to zero is
    moved to `overflow` untouched from then on; with an identity block appended this yields integral kernels.
    """

    def __init__(self, width: int, pivot_limit: int | None = None) -> None:
        self.width = width
        self.limit = width if pivot_limit is None else pivot_limit
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []
        self.row_at: dict[int, int] = {}
        self.overflow: list[list[int]] = []

    def _leading(self, vector: list[int], start: int) -> int | None:
        for j in range(start, self.limit):
            if vector[j]:
                return j
        return None

    def add(self, vector: typing.Sequence[int]) -> None:
        vec = list(vector)
        j = self._leading(vec, 0)
        while j is not None:
            position = self.row_at.get(j)
            if position is None:
                where = bisect.bisect_left(self.pivots, j)
                self.rows.insert(where, vec)
                self.pivots.insert(where, j)
                self.row_at = {pivot: index for index, pivot in enumerate(self.pivots)}
                return
            row = self.rows[position]
            a = row[j]
            b = vec[j]
            if b % a == 0:
                q = b // a
                vec[j:] = [x - q * y for x, y in zip(vec[j:], row[j:])]
            elif a % b == 0:
                self.rows[position], vec = vec, row
                q = a // b
                row = self.rows[position]
                vec[j:] = [x - q * y for x, y in zip(vec[j:], row[j:])]
            else:
                x, y, g = _xgcd(a, b)
                ag, bg = a // g, b // g
                tail_row, tail_vec = row[j:], vec[j:]
                row[j:] = [x * r + y * v for r, v in zip(tail_row, tail_vec)]
                vec[j:] = [ag * v - bg * r for r, v in zip(tail_row, tail_vec)]
            j = self._leading(vec, j + 1)
        if any(vec):
            self.overflow.append(vec)

    def hermite_rows(self) -> list[list[int]]:
        """Canonical form: positive pivots, entries above each pivot reduced into [0, pivot)."""
        rows = [row[:] for row in self.rows]
        for k, pivot in enumerate(self.pivots):
            if rows[k][pivot] < 0:
                rows[k] = [-value for value in rows[k]]
        for k, pivot in enumerate(self.pivots):
            row = rows[k]
            head = row[pivot]
            for i in range(k):
                q = rows[i][pivot] // head
                if q:
                    rows[i][pivot:] = [x - q * y for x, y in zip(rows[i][pivot:], row[pivot:])]
        return rows


def _echelon_rows(vectors: typing.Iterable[typing.Sequence[int]], width: int) -> list[list[int]]:
    echelon = _Echelon(width)
    for vector in vectors:
        echelon.add(vector)
    return echelon.rows


def _is_hermite(matrix: IntegerMatrix) -> bool:
    previous = -1
    pivots = []
    for row in matrix.row_vectors():
        pivot = next((j for j, value in enumerate(row) if value), None)
        if pivot is None or pivot <= previous or row[pivot] < 0:
            return False
        pivots.append(pivot)
        previous = pivot
    for k, pivot in enumerate(pivots):
        head = matrix[k, pivot]
        if any(not 0 <= matrix[i, pivot] < head for i in range(k)):
            return False
    return True


class _SmithWorkspace:
    """Smith elimination with smallest-entry pivoting; transforms are tracked only when asked for."""

    def __init__(self, matrix: IntegerMatrix, track: bool) -> None:
        self.m, self.n = matrix.rows, matrix.cols
        self.a = matrix.to_rows()
        self.track = track
        if track:
            self.u = IntegerMatrix.identity(self.m).to_rows()
            self.u_inv = IntegerMatrix.identity(self.m).to_rows()
            self.v = IntegerMatrix.identity(self.n).to_rows()
            self.v_inv = IntegerMatrix.identity(self.n).to_rows()

    def add_row(self, target: int, source: int, factor: int) -> None:
        a = self.a
        a[target] = [x + factor * y for x, y in zip(a[target], a[source])]
        if self.track:
            self.u[target] = [x + factor * y for x, y in zip(self.u[target], self.u[source])]
            for row in self.u_inv:
                row[source] -= factor * row[target]

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        if self.track:
            self.u[i], self.u[j] = self.u[j], self.u[i]
            for row in self.u_inv:
                row[i], row[j] = row[j], row[i]

    def negate_row(self, i: int) -> None:
        self.a[i] = [-x for x in self.a[i]]
        if self.track:
            self.u[i] = [-x for x in self.u[i]]
            for row in self.u_inv:
                row[i] = -row[i]

    def add_column(self, target: int, source: int, factor: int) -> None:
        for row in self.a:
            row[target] += factor * row[source]
        if self.track:
            for row in self.v:
                row[target] += factor * row[source]
            self.v_inv[source] = [x - factor * y for x, y in zip(self.v_inv[source], self.v_inv[target])]

    def swap_columns(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        if self.track:
            for row in self.v:
                row[i], row[j] = row[j], row[i]
            self.v_inv[i], self.v_inv[j] = self.v_inv[j], self.v_inv[i]

    def smallest(self, t: int) -> tuple[int, int] | None:
        best: tuple[int, int] | None = None
        best_value = 0
        for i in range(t, self.m):
            row = self.a[i]
            for j in range(t, self.n):
                value = abs(row[j])
                if value and (best is None or value < best_value):
                    best, best_value = (i, j), value
                    if value == 1:
                        return best
        return best

    def run(self) -> None:
        a = self.a
        for t in range(min(self.m, self.n)):
            position = self.smallest(t)
            if position is None:
                return
            while True:
                assert position is not None
                self.swap_rows(t, position[0])
                self.swap_columns(t, position[1])
                pivot = a[t][t]
                remainder = False
                for i in range(t + 1, self.m):
                    if a[i][t]:
                        self.add_row(i, t, -(a[i][t] // pivot))
                        remainder = remainder or bool(a[i][t])
                for j in range(t + 1, self.n):
                    if a[t][j]:
                        self.add_column(j, t, -(a[t][j] // pivot))
                        remainder = remainder or bool(a[t][j])
                if remainder:
                    position = self.smallest(t)
                    continue
                offender = next(
                    (i for i in range(t + 1, self.m) if any(a[i][j] % pivot for j in range(t + 1, self.n))), None
                )
                if offender is None:
                    break
                self.add_row(t, offender, 1)
                position = (t, t)
            if a[t][t] < 0:
                self.negate_row(t)


def smith_normal_form(matrix: IntegerMatrix) -> SmithDecomposition:
    """Return U, D, V with U @ matrix @ V == D, D diagonal with d_1 | d_2 | ... and zeros last."""
    workspace = _SmithWorkspace(matrix, track=True)
    workspace.run()
    return SmithDecomposition(
        u=IntegerMatrix.from_rows(workspace.u, matrix.rows),
        d=IntegerMatrix.from_rows(workspace.a, matrix.cols),
        v=IntegerMatrix.from_rows(workspace.v, matrix.cols),
        u_inverse=IntegerMatrix.from_rows(workspace.u_inv, matrix.rows),
        v_inverse=IntegerMatrix.from_rows(workspace.v_inv, matrix.cols),
    )


def invariant_factors(matrix: IntegerMatrix) -> Vector:
    """Nonzero Smith diagonal entries (units included), without building transforms."""
    workspace = _SmithWorkspace(matrix, track=False)
    workspace.run()
    return tuple(workspace.a[i][i] for i in range(min(matrix.rows, matrix.cols)) if workspace.a[i][i])


def sublattice_from_generators(ambient_rank: int, vectors: typing.Iterable[typing.Sequence[int]]) -> Sublattice:
    """Integer span of `vectors` in canonical Hermite form."""
    echelon = _Echelon(ambient_rank)
    for index, vector in enumerate(vectors):
        if len(vector) != ambient_rank:
            raise InputError(f"Generator {index} has length {len(vector)}, ambient rank is {ambient_rank}.")
        if any(vector):
            echelon.add(vector)
    return Sublattice(ambient_rank, IntegerMatrix.from_rows(echelon.hermite_rows(), ambient_rank))


def kernel_basis(matrix: IntegerMatrix) -> Sublattice:
    """Integral kernel {x : matrix @ x == 0}, a saturated sublattice of Z^cols."""
    n = matrix.cols
    if matrix.rows > n:
        # same row space, at most n rows
        reduced = _echelon_rows((row for row in matrix.row_vectors() if any(row)), n)
        matrix = IntegerMatrix.from_rows(reduced, n)
    m = matrix.rows
    echelon = _Echelon(m + n, pivot_limit=m)
    for j in range(n):
        augmented = list(matrix.column(j)) + [0] * n
        augmented[m + j] = 1
        echelon.add(augmented)
    return sublattice_from_generators(n, [vector[m:] for vector in echelon.overflow])


def membership(vector: typing.Sequence[int], lattice: Sublattice) -> MembershipResult:
    """Decide whether `vector` lies in `lattice`, with coefficients over the Hermite rows or a failure tag."""
    if len(vector) != lattice.ambient_rank:
        raise InputError(f"Vector of length {len(vector)} in a lattice of ambient rank {lattice.ambient_rank}.")
    residue = list(vector)
    coefficients = [0] * lattice.rank
    pivots = lattice.pivots
    basis = lattice.basis
    k = 0
    for j in range(lattice.ambient_rank):
        if not residue[j]:
            continue
        while k < len(pivots) and pivots[k] < j:
            k += 1
        if k == len(pivots) or pivots[k] != j:
            return MembershipResult(False, failure_column=j, failure_reason="no pivot", residue=tuple(residue))
        head = basis[k][j]
        if residue[j] % head:
            return MembershipResult(False, failure_column=j, failure_reason="not divisible", residue=tuple(residue))
        q = residue[j] // head
        coefficients[k] = q
        row = basis[k]
        residue[j:] = [x - q * y for x, y in zip(residue[j:], row[j:])]
    return MembershipResult(True, coefficients=tuple(coefficients))


def intersect(a: Sublattice, b: Sublattice) -> Sublattice:
    """Exact intersection of two subgroups, via the kernel of the stacked generator matrices."""
    _check_ambient(a, b)
    if a.is_zero or b.is_zero:
        return Sublattice.zero(a.ambient_rank)
    columns = list(a.basis) + [tuple(-value for value in row) for row in b.basis]
    relations = kernel_basis(IntegerMatrix.from_columns(columns, a.ambient_rank))
    generators = [
        tuple(sum(c * row[j] for c, row in zip(relation[: a.rank], a.basis) if c) for j in range(a.ambient_rank))
        for relation in relations.basis
    ]
    return sublattice_from_generators(a.ambient_rank, generators)


def coordinates(sub: Sublattice, sup: Sublattice) -> IntegerMatrix:
    """Rows are the generators of `sub` written over the Hermite basis of `sup`."""
    _check_ambient(sub, sup)
    rows = []
    for index, vector in enumerate(sub.basis):
        result = membership(vector, sup)
        if not result.member:
            raise PreconditionError(
                f"Generator {index} {list(vector)} of the subgroup does not lie in the larger lattice "
                f"(column {result.failure_column}: {result.failure_reason})."
            )
        assert result.coefficients is not None
        rows.append(result.coefficients)
    return IntegerMatrix.from_rows(rows, sup.rank)


def quotient_structure(sub: Sublattice, sup: Sublattice) -> AbelianGroupStructure:
    """Invariant factors of sup / sub; `sub` must be contained in `sup`."""
    factors = invariant_factors(coordinates(sub, sup))
    return AbelianGroupStructure(
        free_rank=sup.rank - len(factors),
        torsion=tuple(factor for factor in factors if factor > 1),
    )


def quotient_generators(sub: Sublattice, sup: Sublattice) -> list[tuple[int, Vector]]:
    """
    Cyclic decomposition of sup / sub as (order, lifted generator) pairs; order 0 marks a free summand.
    Trivial summands are dropped. Generators are vectors of the ambient lattice lying in `sup`.
    """
    relations = coordinates(sub, sup)
    decomposition = smith_normal_form(relations)
    diagonal = decomposition.diagonal
    result = []
    for i in range(sup.rank):
        order = diagonal[i] if i < len(diagonal) else 0
        if order == 1:
            continue
        combination = decomposition.v_inverse.row(i)
        vector = tuple(
            sum(c * row[j] for c, row in zip(combination, sup.basis) if c) for j in range(sup.ambient_rank)
        )
        result.append((order, vector))
    return sorted(result, key=lambda item: (item[0] == 0, item[0]))


def image_lattice(matrix: IntegerMatrix, lattice: Sublattice) -> Sublattice:
    """The image of `lattice` under `matrix` (acting on column vectors)."""
    if matrix.cols != lattice.ambient_rank:
        raise InputError(f"Matrix with {matrix.cols} columns applied to ambient rank {lattice.ambient_rank}.")
    return sublattice_from_generators(matrix.rows, [matrix.apply(vector) for vector in lattice.basis])


def unimodular_inverse(matrix: IntegerMatrix) -> IntegerMatrix:
    decomposition = smith_normal_form(matrix)
    if not matrix.is_square or decomposition.diagonal != (1,) * matrix.rows:
        raise InputError("Matrix is not invertible over the integers.")
    return decomposition.v @ decomposition.u


def saturation_factors(lattice: Sublattice) -> Vector:
    """Invariant factors of the embedding; all ones exactly when Z^n / lattice is torsion-free."""
    return invariant_factors(lattice.generators)


def quotient_coordinates(lattice: Sublattice) -> LatticeQuotient:
    """
    Choose coordinates on Z^n / lattice. When some set of standard basis vectors completes the lattice to Z^n their
    classes are used (the lexicographically first such set), otherwise the Smith basis is used.

    Raises TorsionQuotientError when the quotient has torsion.
    """
    n, r = lattice.ambient_rank, lattice.rank
    if r == 0:
        identity = IntegerMatrix.identity(n)
        return LatticeQuotient(lattice, identity, identity)
    factors = saturation_factors(lattice)
    if any(factor != 1 for factor in factors):
        raise TorsionQuotientError([factor for factor in factors if factor != 1])

    embedding = lattice.generators.transpose()
    candidates = itertools.islice(itertools.combinations(range(n), n - r), _MAX_COMPLEMENT_CANDIDATES)
    for kept in candidates:
        rest = [i for i in range(n) if i not in kept]
        square = embedding.select_rows(rest)
        if abs(square.determinant()) != 1:
            continue
        # x = sum_{j in kept} t_j e_j + embedding @ y, so y = square^-1 x_rest and t = x_kept - embedding_kept y
        solve = unimodular_inverse(square) @ IntegerMatrix.identity(n).select_rows(rest)
        projection = IntegerMatrix.identity(n).select_rows(kept) - embedding.select_rows(kept) @ solve
        lift = IntegerMatrix.identity(n).select_columns(kept)
        logger.debug("Quotient of rank %d uses coordinate classes %s", n - r, kept)
        return LatticeQuotient(lattice, projection, lift)

    decomposition = smith_normal_form(embedding)
    projection = decomposition.u.select_rows(range(r, n))
    lift = decomposition.u_inverse.select_columns(range(r, n))
    logger.debug("Quotient of rank %d uses the Smith basis", n - r)
    return LatticeQuotient(lattice, projection, lift)
