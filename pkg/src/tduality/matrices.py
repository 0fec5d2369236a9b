"""Exact integer matrices, Smith and Hermite normal forms, lattice utilities.

Everything here runs on Python's arbitrary-precision integers; no floating
point is used anywhere.  Intermediate entries of a Smith reduction can exceed
machine words even for small inputs, so fixed-width integer types are not an
option.

Conventions:

* Matrices act on column vectors; ``m @ v`` is matrix-vector application.
* ``smith_normal_form`` returns ``U, D, V`` with ``U @ M @ V == D``, both
  transforms unimodular, ``D`` diagonal with a divisibility chain
  ``d1 | d2 | ...`` and nonnegative entries.  The pivot rule (smallest nonzero
  absolute value, ties broken by lowest row then lowest column index) is fixed
  so decompositions are deterministic.
* Lattices are handled through a unique row-style Hermite normal form:
  positive pivots, entries in the pivot column of earlier rows reduced into
  ``[0, pivot)``, rows ordered by pivot column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import PreconditionError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError(f"expected {self.cols} columns, got {len(row)}")
            for x in row:
                if not isinstance(x, int):
                    raise TypeError(f"matrix entries must be integers, got {type(x).__name__}")

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]], cols: Optional[int] = None) -> "IntMatrix":
        data = tuple(tuple(row) for row in rows)
        if data:
            width = len(data[0])
        elif cols is not None:
            width = cols
        else:
            width = 0
        return IntMatrix(len(data), width, data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @staticmethod
    def column(vec: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(vec), 1, tuple((int(x),) for x in vec))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
            ot = other.transpose().entries
            return IntMatrix(
                self.rows,
                other.cols,
                tuple(
                    tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
                    for row in self.entries
                ),
            )
        return self.apply(other)

    def apply(self, vec: Sequence[int]) -> Vector:
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} against {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} + {other.shape}")
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(
            self.rows, self.cols, tuple(tuple(c * x for x in row) for row in self.entries)
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def col(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError(f"row mismatch: {self.shape} | {other.shape}")
        return IntMatrix(
            self.rows, self.cols + other.cols,
            tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)),
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @staticmethod
    def from_blocks(blocks: Sequence[Sequence["IntMatrix"]]) -> "IntMatrix":
        """Assemble a block matrix; each block row must have uniform height."""
        rows: list[tuple[int, ...]] = []
        for block_row in blocks:
            height = block_row[0].rows
            for b in block_row:
                if b.rows != height:
                    raise ValueError("ragged block row")
            for i in range(height):
                rows.append(tuple(x for b in block_row for x in b.entries[i]))
        width = sum(b.cols for b in blocks[0]) if blocks else 0
        return IntMatrix.from_rows(rows, cols=width)


@dataclass(frozen=True)
class SNFDecomposition:
    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def rank(self) -> int:
        return sum(
            1 for i in range(min(self.d.rows, self.d.cols)) if self.d.entries[i][i] != 0
        )

    def invariant_factors(self) -> Vector:
        return tuple(
            self.d.entries[i][i]
            for i in range(min(self.d.rows, self.d.cols))
            if self.d.entries[i][i] != 0
        )


def smith_normal_form(m: IntMatrix) -> SNFDecomposition:
    """Smith normal form ``U @ M @ V == D`` with unimodular transforms.

    Deterministic: the pivot is always the submatrix entry of smallest nonzero
    absolute value, ties broken by lowest row index then lowest column index.
    """
    nr, nc = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def row_sub(i, j, q):
        # row_i -= q * row_j
        ai, aj = a[i], a[j]
        for k in range(nc):
            ai[k] -= q * aj[k]
        ui, uj = u[i], u[j]
        for k in range(nr):
            ui[k] -= q * uj[k]

    def col_sub(i, j, q):
        # col_i -= q * col_j
        for r in a:
            r[i] -= q * r[j]
        for r in v:
            r[i] -= q * r[j]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def pivot(t):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        return best

    t = 0
    while t < min(nr, nc):
        if pivot(t) is None:
            break
        while True:
            _, pi, pj = pivot(t)
            if pi != t:
                row_swap(t, pi)
            if pj != t:
                col_swap(t, pj)
            if a[t][t] < 0:
                row_neg(t)
            p = a[t][t]
            for i in range(t + 1, nr):
                q = a[i][t] // p
                if q:
                    row_sub(i, t, q)
            for j in range(t + 1, nc):
                q = a[t][j] // p
                if q:
                    col_sub(j, t, q)
            if any(a[i][t] for i in range(t + 1, nr)) or any(
                a[t][j] for j in range(t + 1, nc)
            ):
                continue  # remainders force a strictly smaller pivot
            bad_row = None
            for i in range(t + 1, nr):
                if any(a[i][j] % p for j in range(t + 1, nc)):
                    bad_row = i
                    break
            if bad_row is None:
                break
            row_sub(t, bad_row, -1)  # drag a non-divisible entry into row t
        t += 1

    return SNFDecomposition(
        IntMatrix.from_rows(u, cols=nr),
        IntMatrix.from_rows(a, cols=nc),
        IntMatrix.from_rows(v, cols=nc),
    )


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular square matrix (via U m V = I, so m^-1 = V U)."""
    if m.rows != m.cols:
        raise PreconditionError("only square matrices can be unimodular")
    snf = smith_normal_form(m)
    if snf.d != IntMatrix.identity(m.rows):
        raise PreconditionError("matrix is not unimodular")
    return snf.v @ snf.u


def kernel_basis(m: IntMatrix) -> tuple[Vector, ...]:
    """Basis of the lattice ``{x : m @ x == 0}`` (columns of V past the rank)."""
    snf = smith_normal_form(m)
    return tuple(snf.v.col(j) for j in range(snf.rank, m.cols))


@dataclass(frozen=True)
class IntegerSolution:
    """Particular solution plus a basis of the homogeneous solution lattice."""

    particular: Vector
    kernel: tuple[Vector, ...]


def solve_integer_system(m: IntMatrix, b: Sequence[int]) -> Optional[IntegerSolution]:
    """Solve ``m @ x == b`` over the integers.

    Returns ``None`` when no integer solution exists; otherwise a particular
    solution together with a generating set of the solution lattice of the
    homogeneous system.  Deterministic for fixed input.
    """
    if len(b) != m.rows:
        raise PreconditionError(f"right-hand side length {len(b)} against {m.shape} matrix")
    snf = smith_normal_form(m)
    c = snf.u.apply(b)
    rank = snf.rank
    y = [0] * m.cols
    for i in range(min(m.rows, m.cols)):
        d = snf.d.entries[i][i]
        if d != 0:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    for i in range(rank, m.rows):
        if c[i] != 0:
            return None
    x = snf.v.apply(y)
    kern = tuple(snf.v.col(j) for j in range(rank, m.cols))
    return IntegerSolution(x, kern)


def hermite_normal_form(vectors: Iterable[Sequence[int]], width: int) -> tuple[Vector, ...]:
    """Unique row-style Hermite normal form of the lattice the rows span.

    Zero rows are dropped; pivots are positive; for every pivot, the entries
    of earlier rows in that column lie in ``[0, pivot)``.  Two row sets span
    the same lattice iff their forms are identical.
    """
    rest = [list(v) for v in vectors if any(v)]
    for v in rest:
        if len(v) != width:
            raise ValueError("row width mismatch")
    result: list[list[int]] = []
    for col in range(width):
        carrier = None
        remaining = []
        for r in rest:
            if r[col] == 0:
                remaining.append(r)
                continue
            if carrier is None:
                carrier = r
                continue
            while r[col]:
                q = carrier[col] // r[col]
                if q:
                    for k in range(width):
                        carrier[k] -= q * r[k]
                carrier, r = r, carrier
            if any(r):
                remaining.append(r)
        rest = remaining
        if carrier is None:
            continue
        if carrier[col] < 0:
            carrier = [-x for x in carrier]
        for fixed in result:
            q = fixed[col] // carrier[col]
            if q:
                for k in range(width):
                    fixed[k] -= q * carrier[k]
        result.append(carrier)
    return tuple(tuple(r) for r in result)


def reduce_mod_lattice(vec: Sequence[int], hnf_rows: Sequence[Sequence[int]]) -> Vector:
    """Canonical coset representative of ``vec`` modulo an HNF lattice.

    Scanning rows in pivot order, each pivot coordinate is floored into
    ``[0, pivot)``; the result is the unique such representative, so it is
    invariant under adding lattice elements to ``vec``.
    """
    out = list(vec)
    for row in hnf_rows:
        j = next(i for i, x in enumerate(row) if x)
        q = out[j] // row[j]
        if q:
            for k in range(len(out)):
                out[k] -= q * row[k]
    return tuple(out)


def lattice_member(vec: Sequence[int], hnf_rows: Sequence[Sequence[int]]) -> bool:
    return all(x == 0 for x in reduce_mod_lattice(vec, hnf_rows))
