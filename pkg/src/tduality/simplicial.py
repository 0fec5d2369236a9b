"""Finite simplicial complexes with ordered vertices and cup structure.

These are the geometric oracles for the algebraic models: integral cochain
complexes come from the standard alternating-sign coboundary, and products
use the Alexander-Whitney front-face/back-face formula

    (f ~ g)(v_0 .. v_{p+q}) = f(v_0 .. v_p) * g(v_p .. v_{p+q}),

which satisfies the Leibniz rule exactly at the cochain level.  Cochain-level
representatives depend on the vertex order; only cohomology-level outputs are
contractual.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .complexes import CochainMap, GradedComplex
from .errors import PreconditionError
from .matrices import IntMatrix, Vector

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed complex; ``faces[d]`` lists the d-simplices lexicographically."""

    vertex_count: int
    facets: tuple[Simplex, ...]
    faces: tuple[tuple[Simplex, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    def n_faces(self, d: int) -> int:
        if 0 <= d < len(self.faces):
            return len(self.faces[d])
        return 0


def from_facets(facets: Sequence[Sequence[int]]) -> SimplicialComplex:
    """Build the closure of a facet list.

    Vertices within each facet must be strictly increasing; violations are
    parse-level errors so the DSL can surface them with positions.
    """
    if not facets:
        raise PreconditionError("empty facet list")
    norm: list[Simplex] = []
    for f in facets:
        t = tuple(int(v) for v in f)
        if not t:
            raise PreconditionError("empty facet")
        if any(v < 0 for v in t):
            raise PreconditionError(f"negative vertex in facet {t}")
        if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
            raise PreconditionError(
                f"facet {t} must list strictly increasing vertices"
            )
        norm.append(t)
    dim = max(len(f) for f in norm) - 1
    levels: list[set[Simplex]] = [set() for _ in range(dim + 1)]
    for f in norm:
        for d in range(len(f)):
            for face in combinations(f, d + 1):
                levels[d].add(face)
    faces = tuple(tuple(sorted(level)) for level in levels)
    vertex_count = max(v for f in norm for v in f) + 1
    return SimplicialComplex(vertex_count, tuple(sorted(set(norm))), faces)


@lru_cache(maxsize=None)
def _face_index(k: SimplicialComplex, d: int) -> dict[Simplex, int]:
    return {s: i for i, s in enumerate(k.faces[d])} if 0 <= d < len(k.faces) else {}


@lru_cache(maxsize=None)
def cochain_complex_of(k: SimplicialComplex, max_degree: int = -1) -> GradedComplex:
    """Simplicial cochain complex with standard alternating signs.

    ``max_degree`` below 0 means the full dimension of the complex; higher
    requests are clamped to it (no simplices exist above).
    """
    top = k.dim if max_degree < 0 else min(max_degree, k.dim)
    ranks = tuple(k.n_faces(d) for d in range(top + 1))
    deltas = []
    for n in range(top):
        rows = [[0] * ranks[n] for _ in range(ranks[n + 1])]
        idx = _face_index(k, n)
        for r, sigma in enumerate(k.faces[n + 1]):
            for i in range(len(sigma)):
                tau = sigma[:i] + sigma[i + 1:]
                rows[r][idx[tau]] += -1 if i % 2 else 1
        deltas.append(IntMatrix.from_rows(rows, cols=ranks[n]))
    return GradedComplex(ranks, tuple(deltas))


@dataclass(frozen=True)
class Cochain:
    complex: SimplicialComplex
    degree: int
    values: Vector

    def __post_init__(self):
        if len(self.values) != self.complex.n_faces(self.degree):
            raise PreconditionError(
                f"cochain of length {len(self.values)} in degree {self.degree} "
                f"with {self.complex.n_faces(self.degree)} simplices"
            )

    def __add__(self, other: "Cochain") -> "Cochain":
        _same_complex(self, other)
        if self.degree != other.degree:
            raise PreconditionError("cochain degree mismatch")
        return Cochain(
            self.complex, self.degree,
            tuple(a + b for a, b in zip(self.values, other.values)),
        )

    def scale(self, c: int) -> "Cochain":
        return Cochain(self.complex, self.degree, tuple(c * v for v in self.values))


def unit_cochain(k: SimplicialComplex) -> Cochain:
    return Cochain(k, 0, (1,) * k.n_faces(0))


def coboundary(c: Cochain) -> Cochain:
    cx = cochain_complex_of(c.complex)
    return Cochain(c.complex, c.degree + 1, cx.delta_at(c.degree).apply(c.values))


def _same_complex(a: Cochain, b: Cochain):
    if a.complex != b.complex:
        raise PreconditionError("cochains live on different complexes")


def cup_product(f: Cochain, g: Cochain) -> Cochain:
    """Alexander-Whitney product of cochains on one complex."""
    _same_complex(f, g)
    k = f.complex
    p, q = f.degree, g.degree
    n = p + q
    fi = _face_index(k, p)
    gi = _face_index(k, q)
    values = []
    for sigma in (k.faces[n] if n <= k.dim else ()):
        front = sigma[: p + 1]
        back = sigma[p:]
        values.append(f.values[fi[front]] * g.values[gi[back]])
    return Cochain(k, n, tuple(values))


def cup_operator(e: Cochain) -> CochainMap:
    """The degree +2 cochain map ``f -> e ~ f`` for a 2-cocycle ``e``.

    Commutes with the coboundary because ``delta e = 0`` and ``e`` has even
    degree, by the Leibniz rule.
    """
    if e.degree != 2:
        raise PreconditionError(f"cup operator needs a 2-cochain, got degree {e.degree}")
    if any(v != 0 for v in coboundary(e).values):
        raise PreconditionError("cup operator needs a cocycle: delta e != 0")
    k = e.complex
    cx = cochain_complex_of(k)
    ei = _face_index(k, 2)
    mats = []
    for n in range(len(cx.ranks)):
        rows_n = cx.rank_at(n + 2)
        cols_n = cx.rank_at(n)
        rows = [[0] * cols_n for _ in range(rows_n)]
        if rows_n and cols_n:
            src_idx = _face_index(k, n)
            for r, sigma in enumerate(k.faces[n + 2]):
                front = sigma[:3]
                back = sigma[2:]
                rows[r][src_idx[back]] += e.values[ei[front]]
        mats.append(IntMatrix.from_rows(rows, cols=cols_n))
    return CochainMap(cx, cx, 2, tuple(mats))
