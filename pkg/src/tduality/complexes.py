"""Graded integer cochain complexes and their cohomology.

A ``GradedComplex`` is a finite sequence of free abelian groups ``C^0..C^D``
with coboundaries ``delta[n] : C^n -> C^{n+1}``.  Degrees outside ``0..D``
are treated as zero groups; ``rank_at``/``delta_at`` clamp accordingly, which
keeps constructions at the truncation edge uniform.

``cohomology`` presents ``H^n = ker(delta[n]) / im(delta[n-1])`` with explicit
generator cocycles and an exact coordinate map.  Generator ordering is fixed:
torsion generators first (ascending invariant factor, then pivot position),
then free generators, so coordinates are canonical and reports diff cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .errors import PreconditionError
from .matrices import (
    IntMatrix,
    Vector,
    smith_normal_form,
    unimodular_inverse,
)


@dataclass(frozen=True)
class GradedComplex:
    """Integer cochain complex, truncated at degree ``len(ranks) - 1``.

    Shape compatibility is enforced at construction; the cochain condition
    ``delta[n+1] @ delta[n] == 0`` is checked by ``validate_complex`` so that
    broken complexes can still be built and reported on.
    """

    ranks: tuple[int, ...]
    deltas: tuple[IntMatrix, ...]

    def __post_init__(self):
        if any(r < 0 for r in self.ranks):
            raise ValueError("negative rank")
        expected = max(len(self.ranks) - 1, 0)
        if len(self.deltas) != expected:
            raise ValueError(f"expected {expected} coboundaries, got {len(self.deltas)}")
        for n, d in enumerate(self.deltas):
            if d.shape != (self.ranks[n + 1], self.ranks[n]):
                raise ValueError(
                    f"delta[{n}] has shape {d.shape}, expected "
                    f"({self.ranks[n + 1]}, {self.ranks[n]})"
                )

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def rank_at(self, n: int) -> int:
        if 0 <= n < len(self.ranks):
            return self.ranks[n]
        return 0

    def delta_at(self, n: int) -> IntMatrix:
        if 0 <= n < len(self.deltas):
            return self.deltas[n]
        return IntMatrix.zeros(self.rank_at(n + 1), self.rank_at(n))

    @staticmethod
    def with_zero_deltas(ranks: Sequence[int]) -> "GradedComplex":
        ranks = tuple(int(r) for r in ranks)
        deltas = tuple(
            IntMatrix.zeros(ranks[n + 1], ranks[n]) for n in range(max(len(ranks) - 1, 0))
        )
        return GradedComplex(ranks, deltas)

    @staticmethod
    def empty() -> "GradedComplex":
        return GradedComplex((), ())


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    detail: Optional[str] = None
    degree: Optional[int] = None


@lru_cache(maxsize=None)
def validate_complex(c: GradedComplex) -> ValidationReport:
    """Check ``delta[n+1] @ delta[n] == 0`` for all degrees; never raises."""
    for n in range(len(c.deltas) - 1):
        comp = c.deltas[n + 1] @ c.deltas[n]
        if not comp.is_zero():
            return ValidationReport(
                False,
                f"delta[{n + 1}] @ delta[{n}] != 0",
                degree=n,
            )
    return ValidationReport(True)


@dataclass(frozen=True)
class CohomologyGroup:
    """Invariant-factor presentation of ``H^n`` with explicit generators.

    ``generators`` are cocycle vectors in ``C^n``; ``coordinates`` expresses
    any cocycle in the generator basis, torsion coordinates reduced into
    ``[0, factor)``.  Coboundaries map to zero coordinates.
    """

    degree: int
    torsion: tuple[int, ...]
    free_rank: int
    generators: tuple[Vector, ...]
    _coord_rows: IntMatrix
    _selection: tuple[tuple[int, int], ...]  # (presentation index, factor or 0)
    _delta: IntMatrix

    @property
    def coord_dim(self) -> int:
        return len(self.torsion) + self.free_rank

    def is_trivial(self) -> bool:
        return self.coord_dim == 0

    @property
    def shape(self) -> tuple[tuple[int, ...], int]:
        return (self.torsion, self.free_rank)

    def coordinates(self, cocycle: Sequence[int]) -> Vector:
        w = self._coord_rows.apply(cocycle)
        return tuple(
            w[i] % f if f else w[i] for (i, f) in self._selection
        )

    def rep_from_coords(self, coords: Sequence[int]) -> Vector:
        if len(coords) != self.coord_dim:
            raise PreconditionError(
                f"expected {self.coord_dim} coordinates, got {len(coords)}"
            )
        n = self._delta.cols
        out = [0] * n
        for c, gen in zip(coords, self.generators):
            for k in range(n):
                out[k] += c * gen[k]
        return tuple(out)

    def relation_rows(self) -> tuple[Vector, ...]:
        """Rows spanning the relation lattice of the coordinate group."""
        dim = self.coord_dim
        rows = []
        for i, f in enumerate(self.torsion):
            row = [0] * dim
            row[i] = f
            rows.append(tuple(row))
        return tuple(rows)

    def describe(self) -> str:
        parts = [f"Z/{f}" for f in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@lru_cache(maxsize=None)
def cohomology(c: GradedComplex, n: int) -> CohomologyGroup:
    """Present ``H^n(c)`` per the conventions above.

    Requires a valid complex.  Degrees outside ``0..D`` yield the zero group.
    """
    report = validate_complex(c)
    if not report.valid:
        raise PreconditionError(f"invalid complex: {report.detail}")
    rank_n = c.rank_at(n)
    a = c.delta_at(n)        # C^n -> C^{n+1}
    b = c.delta_at(n - 1)    # C^{n-1} -> C^n

    snf_a = smith_normal_form(a)
    r_a = snf_a.rank
    v_inv = unimodular_inverse(snf_a.v)
    k = rank_n - r_a
    # kernel basis = last k columns of V; kernel coordinates = last k rows of V^-1
    reduce_rows = IntMatrix.from_rows(v_inv.entries[r_a:], cols=rank_n)

    # image of b in kernel coordinates (top coordinates vanish since a @ b == 0)
    p = reduce_rows @ b
    snf_p = smith_normal_form(p)
    u_p_inv = unimodular_inverse(snf_p.u)
    kernel_cols = IntMatrix.from_rows(
        [row[r_a:] for row in snf_a.v.entries], cols=k
    )
    gens_all = kernel_cols @ u_p_inv

    factors = []
    for i in range(k):
        if i < min(snf_p.d.rows, snf_p.d.cols):
            factors.append(snf_p.d.entries[i][i])
        else:
            factors.append(0)

    selection = [(i, f) for i, f in enumerate(factors) if f >= 2]
    selection += [(i, 0) for i, f in enumerate(factors) if f == 0]
    torsion = tuple(f for _, f in selection if f)
    free_rank = sum(1 for _, f in selection if f == 0)

    # normalize: first nonzero entry of each generator positive, coordinate
    # row flipped along with it, so coordinates(generator_i) stays e_i
    coord_list = [list(row) for row in (snf_p.u @ reduce_rows).entries]
    gen_list = []
    for i, _ in selection:
        gen = list(gens_all.col(i))
        lead = next((x for x in gen if x), 1)
        if lead < 0:
            gen = [-x for x in gen]
            coord_list[i] = [-x for x in coord_list[i]]
        gen_list.append(tuple(gen))
    generators = tuple(gen_list)
    coord_rows = IntMatrix.from_rows(coord_list, cols=rank_n)

    return CohomologyGroup(
        degree=n,
        torsion=torsion,
        free_rank=free_rank,
        generators=generators,
        _coord_rows=coord_rows,
        _selection=tuple(selection),
        _delta=a,
    )


def class_coordinates(c: GradedComplex, n: int, z: Sequence[int]) -> Vector:
    """Coordinates of the class ``[z]`` in the generator basis of ``H^n``.

    Raises naming the first failing entry when ``z`` is not a cocycle.
    """
    if len(z) != c.rank_at(n):
        raise PreconditionError(
            f"cochain of length {len(z)} in degree {n} of rank {c.rank_at(n)}"
        )
    dz = c.delta_at(n).apply(z)
    for i, x in enumerate(dz):
        if x != 0:
            raise PreconditionError(
                f"not a cocycle: (delta z)[{i}] = {x} in degree {n + 1}"
            )
    return cohomology(c, n).coordinates(z)


@dataclass(frozen=True)
class CochainMap:
    """Degree-``degree`` map of graded complexes, one matrix per source degree.

    Strict commuting ``delta_T @ f_n == f_{n+1} @ delta_S`` is enforced at
    construction (signs belonging to cones and twisted totals live in those
    differentials, not in the maps).
    """

    source: GradedComplex
    target: GradedComplex
    degree: int
    mats: tuple[IntMatrix, ...]

    def __post_init__(self):
        n_mats = len(self.source.ranks)
        if len(self.mats) != n_mats:
            raise ValueError(f"expected {n_mats} matrices, got {len(self.mats)}")
        for n, m in enumerate(self.mats):
            want = (self.target.rank_at(n + self.degree), self.source.rank_at(n))
            if m.shape != want:
                raise ValueError(f"map matrix at degree {n} has shape {m.shape}, expected {want}")
        for n in range(n_mats):
            lhs = self.target.delta_at(n + self.degree) @ self.mat_at(n)
            rhs = self.mat_at(n + 1) @ self.source.delta_at(n)
            if lhs != rhs:
                raise PreconditionError(
                    f"not a cochain map: commuting fails at source degree {n}"
                )

    def mat_at(self, n: int) -> IntMatrix:
        if 0 <= n < len(self.mats):
            return self.mats[n]
        return IntMatrix.zeros(
            self.target.rank_at(n + self.degree), self.source.rank_at(n)
        )

    def apply(self, n: int, vec: Sequence[int]) -> Vector:
        return self.mat_at(n).apply(vec)

    @staticmethod
    def zero(source: GradedComplex, target: GradedComplex, degree: int) -> "CochainMap":
        mats = tuple(
            IntMatrix.zeros(target.rank_at(n + degree), source.rank_at(n))
            for n in range(len(source.ranks))
        )
        return CochainMap(source, target, degree, mats)


def cochain_map_sum(terms: Sequence[tuple[int, CochainMap]]) -> CochainMap:
    """Integer combination of cochain maps sharing source, target and degree."""
    if not terms:
        raise PreconditionError("empty combination")
    base = terms[0][1]
    for _, f in terms[1:]:
        if (f.source, f.target, f.degree) != (base.source, base.target, base.degree):
            raise PreconditionError("combination of incompatible maps")
    mats = []
    for n in range(len(base.mats)):
        acc = IntMatrix.zeros(*base.mats[n].shape)
        for c, f in terms:
            acc = acc + f.mats[n].scale(c)
        mats.append(acc)
    return CochainMap(base.source, base.target, base.degree, tuple(mats))


@dataclass(frozen=True)
class MappingCone:
    """Cone of ``f : A -> B`` with ``Cone^n = A^n (+) B^{n+d-1}``.

    Differential ``D(a, b) = (-delta a, f(a) + delta b)``; any consistent
    convention with the same long exact sequence would do, this one is fixed.
    The projection carries a per-degree sign so it commutes strictly.
    """

    complex: GradedComplex
    inclusion: CochainMap   # B -> Cone, degree 1 - d
    projection: CochainMap  # Cone -> A, degree 0, sign (-1)^n
    f: CochainMap

    def a_rank(self, n: int) -> int:
        return self.f.source.rank_at(n)

    def b_rank(self, n: int) -> int:
        return self.f.target.rank_at(n + self.f.degree - 1)

    def split(self, n: int, vec: Sequence[int]) -> tuple[Vector, Vector]:
        ra = self.a_rank(n)
        return tuple(vec[:ra]), tuple(vec[ra:])

    def join(self, n: int, a_part: Sequence[int], b_part: Sequence[int]) -> Vector:
        if len(a_part) != self.a_rank(n) or len(b_part) != self.b_rank(n):
            raise PreconditionError("cone component length mismatch")
        return tuple(a_part) + tuple(b_part)


def mapping_cone(f: CochainMap) -> MappingCone:
    """Mapping cone of a cochain map, with its two structural maps.

    Target degrees below ``f.degree - 1`` fall outside the cone's degree
    range and are truncated away; every use in this package has degree 0,
    where nothing is lost.
    """
    a_cx, b_cx, d = f.source, f.target, f.degree
    top = max(a_cx.top_degree, b_cx.top_degree - d + 1, -1)
    ranks = tuple(
        a_cx.rank_at(n) + b_cx.rank_at(n + d - 1) for n in range(top + 1)
    )
    deltas = []
    for n in range(top):
        blocks = [
            [a_cx.delta_at(n).scale(-1),
             IntMatrix.zeros(a_cx.rank_at(n + 1), b_cx.rank_at(n + d - 1))],
            [f.mat_at(n), b_cx.delta_at(n + d - 1)],
        ]
        deltas.append(IntMatrix.from_blocks(blocks))
    cone = GradedComplex(ranks, tuple(deltas))

    incl_mats = []
    for m in range(len(b_cx.ranks)):
        n = m + 1 - d  # cone degree receiving B^m
        rows = cone.rank_at(n)
        cols = b_cx.rank_at(m)
        if rows == 0 or cols == 0:
            incl_mats.append(IntMatrix.zeros(rows, cols))
            continue
        ra = a_cx.rank_at(n)
        mat = [[0] * cols for _ in range(rows)]
        for j in range(cols):
            mat[ra + j][j] = 1
        incl_mats.append(IntMatrix.from_rows(mat, cols=cols))
    inclusion = CochainMap(b_cx, cone, 1 - d, tuple(incl_mats))

    proj_mats = []
    sign = 1
    for n in range(len(cone.ranks)):
        ra = a_cx.rank_at(n)
        rows = a_cx.rank_at(n)
        cols = cone.rank_at(n)
        mat = [[0] * cols for _ in range(rows)]
        for i in range(ra):
            mat[i][i] = sign
        proj_mats.append(IntMatrix.from_rows(mat, cols=cols))
        sign = -sign
    projection = CochainMap(cone, a_cx, 0, tuple(proj_mats))

    return MappingCone(cone, inclusion, projection, f)


def direct_sum(a: GradedComplex, b: GradedComplex) -> GradedComplex:
    top = max(a.top_degree, b.top_degree)
    ranks = tuple(a.rank_at(n) + b.rank_at(n) for n in range(top + 1))
    deltas = tuple(
        IntMatrix.from_blocks(
            [
                [a.delta_at(n), IntMatrix.zeros(a.rank_at(n + 1), b.rank_at(n))],
                [IntMatrix.zeros(b.rank_at(n + 1), a.rank_at(n)), b.delta_at(n)],
            ]
        )
        for n in range(top)
    )
    return GradedComplex(ranks, deltas)


def tensor_basis(a: GradedComplex, b: GradedComplex, n: int) -> tuple[tuple[int, int, int], ...]:
    """Ordered basis of ``(A (x) B)^n`` as triples ``(p, i, j)``."""
    out = []
    for p in range(n + 1):
        q = n - p
        for i in range(a.rank_at(p)):
            for j in range(b.rank_at(q)):
                out.append((p, i, j))
    return tuple(out)


def tensor_product(a: GradedComplex, b: GradedComplex) -> GradedComplex:
    """Graded tensor product with Koszul signs.

    ``delta(x (x) y) = delta x (x) y + (-1)^{|x|} x (x) delta y``.
    """
    if a.top_degree < 0 or b.top_degree < 0:
        return GradedComplex.empty()
    top = a.top_degree + b.top_degree
    bases = [tensor_basis(a, b, n) for n in range(top + 1)]
    index = [
        {key: pos for pos, key in enumerate(basis)} for basis in bases
    ]
    ranks = tuple(len(basis) for basis in bases)
    deltas = []
    for n in range(top):
        rows = [[0] * ranks[n] for _ in range(ranks[n + 1])]
        for col, (p, i, j) in enumerate(bases[n]):
            q = n - p
            da = a.delta_at(p)
            for i2 in range(a.rank_at(p + 1)):
                coeff = da.entries[i2][i]
                if coeff:
                    rows[index[n + 1][(p + 1, i2, j)]][col] += coeff
            db = b.delta_at(q)
            sign = -1 if p % 2 else 1
            for j2 in range(b.rank_at(q + 1)):
                coeff = db.entries[j2][j]
                if coeff:
                    rows[index[n + 1][(p, i, j2)]][col] += sign * coeff
        deltas.append(IntMatrix.from_rows(rows, cols=ranks[n]))
    return GradedComplex(ranks, tuple(deltas))
