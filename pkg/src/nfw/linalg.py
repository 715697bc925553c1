"""Exact rational linear algebra on sparse rows."""

import bisect
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction

logger = logging.getLogger(__name__)

Vector = dict[int, Fraction]


def sparse(values: Sequence[int | Fraction]) -> Vector:
    """Sparse vector from a dense sequence."""
    return {i: Fraction(v) for i, v in enumerate(values) if v != 0}


def dense(vector: Mapping[int, Fraction], ncols: int) -> list[Fraction]:
    return [vector.get(i, Fraction(0)) for i in range(ncols)]


def dot(a: Sequence[int | Fraction], b: Sequence[int | Fraction]) -> int | Fraction:
    return sum((x * y for x, y in zip(a, b)), 0)


def primitive(values: Sequence[int | Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector with the same direction."""
    fractions = [Fraction(v) for v in values]
    if not any(fractions):
        raise ValueError("zero vector has no primitive representative")
    denominator = math.lcm(*(f.denominator for f in fractions))
    integers = [int(f * denominator) for f in fractions]
    divisor = math.gcd(*integers)
    return tuple(v // divisor for v in integers)


class EchelonBasis:
    """
    Incrementally maintained echelon basis of a subspace of Q^ncols.

    Each stored row has pivot coefficient 1 and no entries left of its pivot.
    """

    def __init__(self, ncols: int, vectors: Iterable[Mapping[int, Fraction]] = ()):
        self.ncols = ncols
        self._rows: dict[int, Vector] = {}
        self._pivots: list[int] = []
        self.extend(vectors)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivots(self) -> list[int]:
        return list(self._pivots)

    def reduce(self, vector: Mapping[int, Fraction]) -> Vector:
        """Remainder of vector after eliminating every pivot column."""
        v: Vector = {k: Fraction(x) for k, x in vector.items() if x != 0}
        for c in self._pivots:
            coeff = v.get(c)
            if coeff is None:
                continue
            for k, x in self._rows[c].items():
                updated = v.get(k, Fraction(0)) - coeff * x
                if updated == 0:
                    v.pop(k, None)
                else:
                    v[k] = updated
        return v

    def add(self, vector: Mapping[int, Fraction]) -> bool:
        """Insert vector; returns False if it was already in the span."""
        v = self.reduce(vector)
        if not v:
            return False
        pivot = min(v)
        scale = v[pivot]
        self._rows[pivot] = {k: x / scale for k, x in v.items()}
        bisect.insort(self._pivots, pivot)
        return True

    def extend(self, vectors: Iterable[Mapping[int, Fraction]]) -> int:
        return sum(1 for v in vectors if self.add(v))

    def contains(self, vector: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vector)

    def copy(self) -> "EchelonBasis":
        clone = EchelonBasis(self.ncols)
        clone._rows = {c: dict(row) for c, row in self._rows.items()}
        clone._pivots = list(self._pivots)
        return clone

    def reduced_rows(self) -> list[Vector]:
        """Rows of the reduced row echelon form, ordered by pivot."""
        done: dict[int, Vector] = {}
        for c in reversed(self._pivots):
            row = dict(self._rows[c])
            for later in [k for k in row if k != c and k in done]:
                coeff = row[later]
                for k, x in done[later].items():
                    updated = row.get(k, Fraction(0)) - coeff * x
                    if updated == 0:
                        row.pop(k, None)
                    else:
                        row[k] = updated
            done[c] = row
        return [done[c] for c in self._pivots]


def row_space(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> EchelonBasis:
    return EchelonBasis(ncols, rows)


def rank(rows: Iterable[Sequence[int | Fraction]]) -> int:
    """Rank of a dense matrix given by rows."""
    rows = list(rows)
    if not rows:
        return 0
    return EchelonBasis(len(rows[0]), (sparse(r) for r in rows)).rank


def nullspace(basis: EchelonBasis) -> list[Vector]:
    """Basis of {x : r.x = 0 for every row r of the basis}."""
    reduced = basis.reduced_rows()
    pivots = basis.pivots
    pivot_set = set(pivots)
    kernel = []
    for free in range(basis.ncols):
        if free in pivot_set:
            continue
        x: Vector = {free: Fraction(1)}
        for c, row in zip(pivots, reduced):
            coeff = row.get(free)
            if coeff:
                x[c] = -coeff
        kernel.append(x)
    return kernel


def dense_nullspace(rows: Sequence[Sequence[int | Fraction]], ncols: int) -> list[list[Fraction]]:
    basis = EchelonBasis(ncols, (sparse(r) for r in rows))
    return [dense(v, ncols) for v in nullspace(basis)]


def solve(matrix: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]) -> list[Fraction] | None:
    """
    Unique solution of a square system, or None when the matrix is singular.

    Gauss-Jordan elimination over the rationals.
    """
    n = len(matrix)
    augmented = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if augmented[r][col] != 0), None)
        if pivot_row is None:
            return None
        augmented[col], augmented[pivot_row] = augmented[pivot_row], augmented[col]
        pivot = augmented[col][col]
        augmented[col] = [x / pivot for x in augmented[col]]
        for r in range(n):
            if r != col and augmented[r][col] != 0:
                factor = augmented[r][col]
                augmented[r] = [x - factor * y for x, y in zip(augmented[r], augmented[col])]
    return [augmented[r][n] for r in range(n)]


def inverse(matrix: Sequence[Sequence[int | Fraction]]) -> list[list[Fraction]] | None:
    """Inverse of a square matrix, or None when singular."""
    n = len(matrix)
    columns = []
    for j in range(n):
        unit = [1 if i == j else 0 for i in range(n)]
        column = solve(matrix, unit)
        if column is None:
            return None
        columns.append(column)
    return [[columns[j][i] for j in range(n)] for i in range(n)]


def determinant(matrix: Sequence[Sequence[int | Fraction]]) -> Fraction:
    """Determinant by fraction-preserving elimination."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            det = -det
        pivot = rows[col][col]
        det *= pivot
        for r in range(col + 1, n):
            factor = rows[r][col] / pivot
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det


def affine_dimension(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine hull; -1 for no points."""
    if not points:
        return -1
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0
