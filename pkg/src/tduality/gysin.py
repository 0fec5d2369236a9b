"""Twisted total-space models of circle bundles and their Gysin sequence.

Given a base complex ``B``, a degree-2 cocycle ``e`` and a chain-level cup
operator ``mu = (e ~ .)``, the total space of the corresponding circle bundle
is modelled by the twisted cone

    T^n = B^n (+) B^{n-1},    D(phi, psi) = (delta phi + (-1)^n mu(psi), delta psi).

Its cohomology is computed from this complex directly, never assembled from
the exact sequence, so exactness of the induced long exact sequence

    ... -> H^n(B) -> H^n(T) -> H^{n-1}(B) -> H^{n+1}(B) -> ...

is a machine-checked statement rather than an assumption.  The connecting map
is ``(-1)^{m+1} (e ~ .)`` on ``H^m(B)``; the transfer orientation is the
``+`` convention, projecting ``(phi, psi)`` to ``psi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .complexes import (
    CochainMap,
    CohomologyGroup,
    GradedComplex,
    MappingCone,
    class_coordinates,
    cochain_map_sum,
    cohomology,
    validate_complex,
)
from .errors import InternalCheckError, PreconditionError
from .matrices import IntMatrix, Vector, hermite_normal_form
from .simplicial import Cochain, SimplicialComplex, cup_operator

PROVENANCE_AW = "simplicial-AW"
PROVENANCE_ALGEBRAIC = "catalog-algebraic"

SIGN_CONVENTION = (
    "twisted differential D(phi, psi) = (delta phi + (-1)^n e~psi, delta psi); "
    "transfer orientation +, (phi, psi) -> psi; "
    "connecting map (-1)^(m+1) e~ on degree m of the base"
)


@dataclass(frozen=True)
class CupStructure:
    """Declared degree-2 classes of a base together with their cup operators.

    Algebraic models only carry cup structure on these declared generators;
    simplicial models additionally allow arbitrary representatives through
    the Alexander-Whitney product (``simplicial`` is then set).
    """

    labels: tuple[str, ...]
    reps: tuple[Vector, ...]
    mus: tuple[CochainMap, ...]
    simplicial: Optional[SimplicialComplex] = None

    def __post_init__(self):
        if not (len(self.labels) == len(self.reps) == len(self.mus)):
            raise ValueError("cup structure arity mismatch")


@dataclass(frozen=True)
class EulerModel:
    """Base complex plus a 2-cocycle and the cup operator it induces."""

    base: GradedComplex
    euler_rep: Vector
    mu: CochainMap
    provenance: str
    cup: Optional[CupStructure] = None

    def __post_init__(self):
        if self.provenance not in (PROVENANCE_AW, PROVENANCE_ALGEBRAIC):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if len(self.euler_rep) != self.base.rank_at(2):
            raise PreconditionError(
                f"Euler representative of length {len(self.euler_rep)} on a base "
                f"of rank {self.base.rank_at(2)} in degree 2"
            )
        dz = self.base.delta_at(2).apply(self.euler_rep)
        if any(dz):
            raise PreconditionError("Euler representative is not a cocycle")
        if self.mu.source != self.base or self.mu.target != self.base:
            raise PreconditionError("mu must be an endomap of the base")
        if self.mu.degree != 2:
            raise PreconditionError("mu must have degree +2")
        # chain-map identity is enforced by CochainMap itself


def zero_euler_model(base: GradedComplex, cup: Optional[CupStructure] = None,
                     provenance: str = PROVENANCE_ALGEBRAIC) -> EulerModel:
    zeros = (0,) * base.rank_at(2)
    return EulerModel(base, zeros, CochainMap.zero(base, base, 2), provenance, cup)


def realize_euler_class(
    base: GradedComplex,
    cup: Optional[CupStructure],
    coords: Vector,
    provenance: str,
) -> EulerModel:
    """Euler model for the class with the given coordinates in H^2(base).

    Coordinates are first expressed in the declared cup basis; simplicial
    bases fall back to the Alexander-Whitney operator on the reduced
    representative.  Fails when the class admits no cup realization.
    """
    group = cohomology(base, 2)
    if len(coords) != group.coord_dim:
        raise PreconditionError(
            f"expected {group.coord_dim} coordinates in H^2, got {len(coords)}"
        )
    if all(c == 0 for c in coords):
        return zero_euler_model(base, cup, provenance)
    if cup is None or not cup.labels:
        if cup is not None and cup.simplicial is not None:
            rep = group.rep_from_coords(coords)
            mu = cup_operator(Cochain(cup.simplicial, 2, rep))
            return EulerModel(base, rep, mu, PROVENANCE_AW, cup)
        raise PreconditionError(
            "base carries no cup structure; only the zero Euler class is realizable"
        )
    combo = express_in_basis(group, coords, cup.reps)
    if combo is None:
        if cup.simplicial is not None:
            rep = group.rep_from_coords(coords)
            mu = cup_operator(Cochain(cup.simplicial, 2, rep))
            return EulerModel(base, rep, mu, PROVENANCE_AW, cup)
        raise PreconditionError(
            "class is not an integer combination of the declared degree-2 basis"
        )
    rep = [0] * base.rank_at(2)
    for c, basis_rep in zip(combo, cup.reps):
        for k in range(len(rep)):
            rep[k] += c * basis_rep[k]
    mu = cochain_map_sum(list(zip(combo, cup.mus)))
    return EulerModel(base, tuple(rep), mu, provenance, cup)


def express_in_basis(
    group: CohomologyGroup, target: Vector, basis_reps: Sequence[Vector]
) -> Optional[Vector]:
    """Integer combination of basis classes hitting ``target`` coordinates.

    Solves ``T x = target`` in the coordinate group (torsion relations
    included); returns None when no combination exists.
    """
    from .matrices import solve_integer_system

    dim = group.coord_dim
    cols = [group.coordinates(rep) for rep in basis_reps]
    t = IntMatrix.from_rows(
        [[col[i] for col in cols] for i in range(dim)], cols=len(cols)
    )
    relations = group.relation_rows()
    rel_cols = IntMatrix.from_rows(
        [[row[i] for row in relations] for i in range(dim)], cols=len(relations)
    )
    sol = solve_integer_system(t.hstack(rel_cols), target)
    if sol is None:
        return None
    return sol.particular[: len(basis_reps)]


@dataclass(frozen=True)
class TotalSpaceModel:
    """Twisted cone complex of an Euler model with its structural maps."""

    model: EulerModel
    total: GradedComplex
    pullback_incl: CochainMap   # B -> T, phi -> (phi, 0)
    fiber_proj: CochainMap      # T -> B, degree -1, (phi, psi) -> psi

    def split(self, n: int, vec: Sequence[int]) -> tuple[Vector, Vector]:
        r_phi = self.model.base.rank_at(n)
        return tuple(vec[:r_phi]), tuple(vec[r_phi:])

    def join(self, n: int, phi: Sequence[int], psi: Sequence[int]) -> Vector:
        base = self.model.base
        if len(phi) != base.rank_at(n) or len(psi) != base.rank_at(n - 1):
            raise PreconditionError("total-space component length mismatch")
        return tuple(phi) + tuple(psi)


@lru_cache(maxsize=None)
def total_space(model: EulerModel) -> TotalSpaceModel:
    """Build the twisted cone; the result satisfies ``validate_complex``."""
    base = model.base
    top = base.top_degree + 1
    ranks = tuple(base.rank_at(n) + base.rank_at(n - 1) for n in range(top + 1))
    deltas = []
    for n in range(top):
        sign = -1 if n % 2 else 1
        blocks = [
            [base.delta_at(n), model.mu.mat_at(n - 1).scale(sign)],
            [IntMatrix.zeros(base.rank_at(n), base.rank_at(n)), base.delta_at(n - 1)],
        ]
        deltas.append(IntMatrix.from_blocks(blocks))
    total = GradedComplex(ranks, tuple(deltas))
    report = validate_complex(total)
    if not report.valid:
        raise InternalCheckError(f"twisted total complex broken: {report.detail}")

    incl_mats = []
    for n in range(len(base.ranks)):
        rows = total.rank_at(n)
        cols = base.rank_at(n)
        mat = [[0] * cols for _ in range(rows)]
        for i in range(cols):
            mat[i][i] = 1
        incl_mats.append(IntMatrix.from_rows(mat, cols=cols))
    pullback_incl = CochainMap(base, total, 0, tuple(incl_mats))

    proj_mats = []
    for n in range(len(total.ranks)):
        rows = base.rank_at(n - 1)
        cols = total.rank_at(n)
        r_phi = base.rank_at(n)
        mat = [[0] * cols for _ in range(rows)]
        for j in range(rows):
            mat[j][r_phi + j] = 1
        proj_mats.append(IntMatrix.from_rows(mat, cols=cols))
    fiber_proj = CochainMap(total, base, -1, tuple(proj_mats))

    return TotalSpaceModel(model, total, pullback_incl, fiber_proj)


def pullback(model: EulerModel, n: int, coords: Vector) -> Vector:
    """Induced map H^n(B) -> H^n(E) of the bundle projection."""
    tsm = total_space(model)
    if n < 0 or n > tsm.total.top_degree:
        raise PreconditionError(f"degree {n} out of range for the total space")
    group = cohomology(model.base, n)
    if len(coords) != group.coord_dim:
        raise PreconditionError(
            f"expected {group.coord_dim} coordinates in H^{n}(B), got {len(coords)}"
        )
    rep = group.rep_from_coords(coords)
    return class_coordinates(tsm.total, n, tsm.pullback_incl.apply(n, rep))


def fiber_integration(model: EulerModel, n: int, coords: Vector) -> Vector:
    """Transfer H^n(E) -> H^{n-1}(B), the projection to the psi component."""
    tsm = total_space(model)
    if n < 0 or n > tsm.total.top_degree:
        raise PreconditionError(f"degree {n} out of range for the total space")
    group = cohomology(tsm.total, n)
    if len(coords) != group.coord_dim:
        raise PreconditionError(
            f"expected {group.coord_dim} coordinates in H^{n}(E), got {len(coords)}"
        )
    rep = group.rep_from_coords(coords)
    return class_coordinates(model.base, n - 1, tsm.fiber_proj.apply(n, rep))


# ---------------------------------------------------------------------------
# Exactness machinery for long exact sequences of finitely generated groups.
# Groups are presented by CohomologyGroup coordinates; a homomorphism is the
# integer matrix of generator images.  im == ker is decided by comparing the
# Hermite forms of the corresponding lattices in coordinate space.
# ---------------------------------------------------------------------------


def induced_matrix(
    src: CohomologyGroup,
    image_of_rep: Callable[[Vector], Vector],
    dst_complex: GradedComplex,
    dst_degree: int,
) -> IntMatrix:
    """Matrix of the map sending each generator's representative through
    ``image_of_rep`` and reading coordinates in the target group."""
    dst = cohomology(dst_complex, dst_degree)
    cols = [
        class_coordinates(dst_complex, dst_degree, image_of_rep(gen))
        for gen in src.generators
    ]
    return IntMatrix.from_rows(
        [[col[i] for col in cols] for i in range(dst.coord_dim)], cols=len(cols)
    )


def exact_at(
    incoming: IntMatrix,
    node: CohomologyGroup,
    outgoing: IntMatrix,
    nxt: CohomologyGroup,
) -> bool:
    """Check ``im(incoming) == ker(outgoing)`` inside ``node``."""
    from .matrices import kernel_basis

    dim = node.coord_dim
    relations = list(node.relation_rows())

    image_rows = [incoming.col(j) for j in range(incoming.cols)] + relations
    im_hnf = hermite_normal_form(image_rows, dim)

    next_rel = nxt.relation_rows()
    rel_cols = IntMatrix.from_rows(
        [[row[i] for row in next_rel] for i in range(nxt.coord_dim)], cols=len(next_rel)
    )
    augmented = outgoing.hstack(rel_cols)
    ker_rows = [vec[:dim] for vec in kernel_basis(augmented)] + relations
    ker_hnf = hermite_normal_form(ker_rows, dim)

    return im_hnf == ker_hnf


@dataclass(frozen=True)
class SequenceNode:
    label: str
    exact: bool


@dataclass(frozen=True)
class GysinSequenceReport:
    """Groups, maps and nodewise exactness of the Gysin sequence in a window.

    ``cup_matrices[m]`` is the unsigned matrix of ``(e ~ .)`` on H^m(B); the
    connecting map of the long exact sequence is that matrix times
    ``(-1)^(m+1)``, per the recorded sign convention.
    """

    degree_range: tuple[int, int]
    base_groups: dict[int, CohomologyGroup]
    total_groups: dict[int, CohomologyGroup]
    cup_matrices: dict[int, IntMatrix]
    pullback_matrices: dict[int, IntMatrix]
    transfer_matrices: dict[int, IntMatrix]
    nodes: tuple[SequenceNode, ...]
    sign_convention: str = SIGN_CONVENTION

    @property
    def exact(self) -> bool:
        return all(node.exact for node in self.nodes)


def gysin_sequence(model: EulerModel, lo: int, hi: int) -> GysinSequenceReport:
    """Assemble the sequence and verify exactness at every node in degrees
    ``lo..hi`` of the total space."""
    if lo < 0 or hi < lo:
        raise PreconditionError(f"bad degree range {lo}..{hi}")
    tsm = total_space(model)
    base, total = model.base, tsm.total

    def bgroup(m: int) -> CohomologyGroup:
        return cohomology(base, m)

    def tgroup(n: int) -> CohomologyGroup:
        return cohomology(total, n)

    base_groups = {m: bgroup(m) for m in range(max(lo - 2, 0), hi + 2)}
    total_groups = {n: tgroup(n) for n in range(lo, hi + 1)}

    cup_matrices: dict[int, IntMatrix] = {}
    pullback_matrices: dict[int, IntMatrix] = {}
    transfer_matrices: dict[int, IntMatrix] = {}

    def cup_mat(m: int) -> IntMatrix:
        if m not in cup_matrices:
            cup_matrices[m] = induced_matrix(
                bgroup(m), lambda g, m=m: model.mu.apply(m, g), base, m + 2
            )
        return cup_matrices[m]

    def pull_mat(n: int) -> IntMatrix:
        if n not in pullback_matrices:
            pullback_matrices[n] = induced_matrix(
                bgroup(n), lambda g, n=n: tsm.pullback_incl.apply(n, g), total, n
            )
        return pullback_matrices[n]

    def transfer_mat(n: int) -> IntMatrix:
        if n not in transfer_matrices:
            transfer_matrices[n] = induced_matrix(
                tgroup(n), lambda g, n=n: tsm.fiber_proj.apply(n, g), base, n - 1
            )
        return transfer_matrices[n]

    def connecting(m: int) -> IntMatrix:
        sign = -1 if (m + 1) % 2 else 1
        return cup_mat(m).scale(sign)

    nodes = []
    for n in range(lo, hi + 1):
        nodes.append(
            SequenceNode(
                f"H^{n}(B)",
                exact_at(connecting(n - 2), bgroup(n), pull_mat(n), tgroup(n)),
            )
        )
        nodes.append(
            SequenceNode(
                f"H^{n}(E)",
                exact_at(pull_mat(n), tgroup(n), transfer_mat(n), bgroup(n - 1)),
            )
        )
        nodes.append(
            SequenceNode(
                f"H^{n - 1}(B) [transfer target]",
                exact_at(transfer_mat(n), bgroup(n - 1), connecting(n - 1), bgroup(n + 1)),
            )
        )
    return GysinSequenceReport(
        degree_range=(lo, hi),
        base_groups=base_groups,
        total_groups=total_groups,
        cup_matrices=dict(cup_matrices),
        pullback_matrices=dict(pullback_matrices),
        transfer_matrices=dict(transfer_matrices),
        nodes=tuple(nodes),
    )


@dataclass(frozen=True)
class ConeSequenceReport:
    nodes: tuple[SequenceNode, ...]

    @property
    def exact(self) -> bool:
        return all(node.exact for node in self.nodes)


def cone_exactness(cone: MappingCone, lo: int, hi: int) -> ConeSequenceReport:
    """Exactness of the long exact sequence of a degree-0 mapping cone.

    The sequence is ``-> H^{n-1}(B) -> H^n(Cone) -> H^n(A) -> H^n(B) ->``
    with connecting map induced by ``f`` itself.
    """
    if cone.f.degree != 0:
        raise PreconditionError("cone exactness is implemented for degree-0 maps")
    a_cx, b_cx = cone.f.source, cone.f.target
    cone_cx = cone.complex

    def agroup(n):
        return cohomology(a_cx, n)

    def bgroup(n):
        return cohomology(b_cx, n)

    def cgroup(n):
        return cohomology(cone_cx, n)

    incl = {}
    proj = {}
    fmat = {}

    def incl_mat(m):  # H^m(B) -> H^{m+1}(Cone)
        if m not in incl:
            incl[m] = induced_matrix(
                bgroup(m), lambda g, m=m: cone.inclusion.apply(m, g), cone_cx, m + 1
            )
        return incl[m]

    def proj_mat(n):  # H^n(Cone) -> H^n(A)
        if n not in proj:
            proj[n] = induced_matrix(
                cgroup(n), lambda g, n=n: cone.projection.apply(n, g), a_cx, n
            )
        return proj[n]

    def f_mat(n):  # H^n(A) -> H^n(B)
        if n not in fmat:
            fmat[n] = induced_matrix(
                agroup(n), lambda g, n=n: cone.f.apply(n, g), b_cx, n
            )
        return fmat[n]

    nodes = []
    for n in range(lo, hi + 1):
        nodes.append(
            SequenceNode(
                f"H^{n}(Cone)",
                exact_at(incl_mat(n - 1), cgroup(n), proj_mat(n), agroup(n)),
            )
        )
        nodes.append(
            SequenceNode(
                f"H^{n}(A)",
                exact_at(proj_mat(n), agroup(n), f_mat(n), bgroup(n)),
            )
        )
        nodes.append(
            SequenceNode(
                f"H^{n}(B)",
                exact_at(f_mat(n), bgroup(n), incl_mat(n), cgroup(n + 1)),
            )
        )
    return ConeSequenceReport(tuple(nodes))
