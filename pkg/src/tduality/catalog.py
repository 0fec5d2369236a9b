"""Byte-exact shipped models.

Algebraic models:

* ``cp(N)`` - truncated complex projective space: ranks 1,0,1,...,1 through
  degree 2N, zero coboundaries, cup operator of the degree-2 generator ``u``
  acting as the identity degree shift.  The cup table is declared data,
  justified by uniqueness of the truncated polynomial ring on one degree-2
  generator; the lens cross-check validates it indirectly.
* ``lens(k, N)`` - explicit model with rank 1 in each degree 0..2N+1 and
  alternating (0, k) coboundaries.  Used as the independent oracle for
  twisted-cone totals; it carries no cup table.
* ``circle``, ``point`` - the obvious zero-coboundary models.

Simplicial models (fixed facet lists, so goldens are stable):

* ``sphere2`` - boundary of the tetrahedron.
* ``torus2`` - the 7-vertex triangulation with facets {i, i+1, i+3} and
  {i, i+2, i+3} mod 7.
* ``rp2`` - the minimal 6-vertex triangulation.

Simplicial models declare a degree-2 basis taken from the computed generator
cocycle and derive the cup operator through the Alexander-Whitney product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .complexes import CochainMap, GradedComplex, cohomology
from .errors import PreconditionError
from .gysin import (
    PROVENANCE_ALGEBRAIC,
    PROVENANCE_AW,
    CupStructure,
    EulerModel,
    realize_euler_class,
)
from .matrices import IntMatrix, Vector
from .simplicial import (
    Cochain,
    SimplicialComplex,
    cochain_complex_of,
    cup_operator,
    from_facets,
)

SPHERE2_FACETS = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))

CIRCLE3_FACETS = ((0, 1), (0, 2), (1, 2))

TORUS7_FACETS = tuple(
    sorted(
        {tuple(sorted(((i % 7), ((i + 1) % 7), ((i + 3) % 7)))) for i in range(7)}
        | {tuple(sorted(((i % 7), ((i + 2) % 7), ((i + 3) % 7)))) for i in range(7)}
    )
)

RP2_FACETS = (
    (0, 1, 4), (0, 1, 5), (0, 2, 3), (0, 2, 5), (0, 3, 4),
    (1, 2, 3), (1, 2, 4), (1, 3, 5), (2, 4, 5), (3, 4, 5),
)

CATALOG_NAMES = ("cp", "lens", "circle", "point", "sphere2", "torus2", "rp2")

SHIPPED_LENS_PARAMETERS = tuple((k, n) for k in (1, 2, 3, 5, 7) for n in (1, 2, 3))


@dataclass(frozen=True)
class CatalogModel:
    name: str
    params: tuple[int, ...]
    complex: GradedComplex
    cup: CupStructure
    simplicial: Optional[SimplicialComplex] = None

    @property
    def display_name(self) -> str:
        if self.params:
            return f"{self.name}({', '.join(map(str, self.params))})"
        return self.name


def _cp_complex(n: int) -> GradedComplex:
    ranks = tuple(1 if d % 2 == 0 else 0 for d in range(2 * n + 1))
    return GradedComplex.with_zero_deltas(ranks)


def _cp_mu(cx: GradedComplex) -> CochainMap:
    mats = []
    for d in range(len(cx.ranks)):
        rows, cols = cx.rank_at(d + 2), cx.rank_at(d)
        if rows == 1 and cols == 1:
            mats.append(IntMatrix.from_rows([[1]]))
        else:
            mats.append(IntMatrix.zeros(rows, cols))
    return CochainMap(cx, cx, 2, tuple(mats))


def _lens_complex(k: int, n: int) -> GradedComplex:
    ranks = (1,) * (2 * n + 2)
    deltas = tuple(
        IntMatrix.from_rows([[k if d % 2 == 1 else 0]]) for d in range(2 * n + 1)
    )
    return GradedComplex(ranks, deltas)


def _simplicial_model(name: str, facets) -> CatalogModel:
    k = from_facets(facets)
    cx = cochain_complex_of(k)
    h2 = cohomology(cx, 2)
    label = "w" if name == "rp2" else "vol"
    if h2.coord_dim == 0:
        cup = CupStructure((), (), (), simplicial=k)
    else:
        rep = h2.generators[0]
        cup = CupStructure((label,), (rep,), (cup_operator(Cochain(k, 2, rep)),), simplicial=k)
    return CatalogModel(name, (), cx, cup, simplicial=k)


@lru_cache(maxsize=None)
def catalog_build(name: str, params: tuple[int, ...] = ()) -> CatalogModel:
    """Build a shipped model by name; deterministic for fixed arguments."""
    params = tuple(int(p) for p in params)
    if name == "cp":
        if len(params) != 1 or params[0] < 1:
            raise PreconditionError("cp requires one parameter N >= 1")
        (n,) = params
        cx = _cp_complex(n)
        cup = CupStructure(("u",), ((1,),), (_cp_mu(cx),))
        return CatalogModel(name, params, cx, cup)
    if name == "lens":
        if len(params) != 2 or params[0] < 1 or params[1] < 1:
            raise PreconditionError("lens requires parameters k >= 1, N >= 1")
        k, n = params
        return CatalogModel(name, params, _lens_complex(k, n), CupStructure((), (), ()))
    if name == "circle":
        if params:
            raise PreconditionError("circle takes no parameters")
        cx = GradedComplex.with_zero_deltas((1, 1))
        return CatalogModel(name, (), cx, CupStructure((), (), ()))
    if name == "point":
        if params:
            raise PreconditionError("point takes no parameters")
        return CatalogModel(name, (), GradedComplex.with_zero_deltas((1,)), CupStructure((), (), ()))
    if name == "sphere2":
        if params:
            raise PreconditionError("sphere2 takes no parameters")
        return _simplicial_model("sphere2", SPHERE2_FACETS)
    if name == "torus2":
        if params:
            raise PreconditionError("torus2 takes no parameters")
        return _simplicial_model("torus2", TORUS7_FACETS)
    if name == "rp2":
        if params:
            raise PreconditionError("rp2 takes no parameters")
        return _simplicial_model("rp2", RP2_FACETS)
    raise PreconditionError(f"unknown catalog model {name!r}")


def euler_model_from_label_coeffs(
    model: CatalogModel, coeffs: dict[str, int]
) -> EulerModel:
    """Euler model for an integer combination of the declared basis labels."""
    unknown = sorted(set(coeffs) - set(model.cup.labels))
    if unknown:
        raise PreconditionError(
            f"unknown degree-2 labels {unknown} on {model.display_name}; "
            f"declared: {list(model.cup.labels) or 'none'}"
        )
    group = cohomology(model.complex, 2)
    acc = [0] * group.coord_dim
    for label, c in coeffs.items():
        idx = model.cup.labels.index(label)
        rep_coords = group.coordinates(model.cup.reps[idx])
        for i in range(group.coord_dim):
            acc[i] += c * rep_coords[i]
    coords = tuple(
        acc[i] % f if (f := (group.torsion[i] if i < len(group.torsion) else 0)) else acc[i]
        for i in range(group.coord_dim)
    )
    provenance = PROVENANCE_AW if model.simplicial is not None else PROVENANCE_ALGEBRAIC
    return realize_euler_class(model.complex, model.cup, coords, provenance)


def euler_model_from_cocycle(model: CatalogModel, rep: Vector) -> EulerModel:
    """Euler model for an explicit 2-cocycle representative.

    Simplicial models accept any cocycle (Alexander-Whitney operator);
    algebraic models require the class to reduce to the declared basis.
    """
    if model.simplicial is not None:
        mu = cup_operator(Cochain(model.simplicial, 2, tuple(rep)))
        return EulerModel(model.complex, tuple(rep), mu, PROVENANCE_AW, model.cup)
    from .complexes import class_coordinates

    coords = class_coordinates(model.complex, 2, rep)
    return realize_euler_class(model.complex, model.cup, coords, PROVENANCE_ALGEBRAIC)


def cp_restriction(n_from: int, n_to: int) -> CochainMap:
    """Chain-level truncation cp(N) -> cp(M) for M <= N, identity through
    degree 2M.  Shipped for Mayer-Vietoris gluing; the chain-map identity is
    checked at construction."""
    if n_to > n_from:
        raise PreconditionError("restriction goes to a smaller truncation")
    src = catalog_build("cp", (n_from,)).complex
    dst = catalog_build("cp", (n_to,)).complex
    mats = []
    for d in range(len(src.ranks)):
        rows, cols = dst.rank_at(d), src.rank_at(d)
        if rows == 1 and cols == 1:
            mats.append(IntMatrix.from_rows([[1]]))
        else:
            mats.append(IntMatrix.zeros(rows, cols))
    return CochainMap(src, dst, 0, tuple(mats))
