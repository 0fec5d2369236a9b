import random

import pytest

from generators import random_complex, random_sparse_candidate
from oracles import canonical_shape, cohom_shape, group_direct_sum
from tduality.complexes import (
    CochainMap,
    GradedComplex,
    class_coordinates,
    cochain_map_sum,
    cohomology,
    direct_sum,
    mapping_cone,
    tensor_product,
    validate_complex,
)
from tduality.errors import PreconditionError
from tduality.matrices import IntMatrix


def circle_model():
    return GradedComplex.with_zero_deltas((1, 1))


def point_model():
    return GradedComplex.with_zero_deltas((1,))


def lens_model(k, n=1):
    ranks = (1,) * (2 * n + 2)
    deltas = tuple(
        IntMatrix.from_rows([[k if d % 2 else 0]]) for d in range(2 * n + 1)
    )
    return GradedComplex(ranks, deltas)


def shapes_of(cx):
    return [cohomology(cx, n).shape for n in range(len(cx.ranks))]


def oracle_shapes(cx):
    return cohom_shape(list(cx.ranks), [list(map(list, d.entries)) for d in cx.deltas])


def test_validate_circle_and_lens():
    assert validate_complex(circle_model()).valid
    assert validate_complex(lens_model(5)).valid


def test_validate_flags_first_violation():
    bad = GradedComplex(
        (1, 1, 1), (IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]]))
    )
    report = validate_complex(bad)
    assert not report.valid
    assert report.degree == 0


def test_construction_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        GradedComplex((1, 2), (IntMatrix.from_rows([[1]]),))


def test_empty_complex_is_valid_and_trivial():
    empty = GradedComplex.empty()
    assert validate_complex(empty).valid
    assert cohomology(empty, 0).is_trivial()
    assert cohomology(empty, 5).is_trivial()


def test_cohomology_circle():
    c = circle_model()
    assert cohomology(c, 0).shape == ((), 1)
    assert cohomology(c, 1).shape == ((), 1)


@pytest.mark.parametrize("k", [2, 3, 5, 7])
def test_cohomology_lens_full_profile(k):
    # oracle: alternating (0, k) coboundaries give Z, 0, Z/k, Z
    cx = lens_model(k)
    assert shapes_of(cx) == [((), 1), ((), 0), ((k,), 0), ((), 1)]
    assert shapes_of(cx) == oracle_shapes(cx)


def test_cohomology_rejects_invalid_complex():
    bad = GradedComplex(
        (1, 1, 1), (IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]]))
    )
    with pytest.raises(PreconditionError):
        cohomology(bad, 1)


def test_generators_are_cocycles_with_unit_coordinates():
    rng = random.Random(11)
    for _ in range(25):
        cx = random_complex(rng)
        for n in range(len(cx.ranks)):
            g = cohomology(cx, n)
            assert all(f >= 2 for f in g.torsion)
            for a, b in zip(g.torsion, g.torsion[1:]):
                assert b % a == 0
            for i, gen in enumerate(g.generators):
                assert not any(cx.delta_at(n).apply(gen))
                unit = tuple(int(j == i) for j in range(g.coord_dim))
                assert g.coordinates(gen) == unit


def test_class_coordinates_of_coboundary_vanish():
    cx = lens_model(5)
    w = (3,)
    z = cx.delta_at(1).apply(w)
    assert class_coordinates(cx, 2, z) == (0,)


def test_class_coordinates_torsion_reduction():
    cx = lens_model(5)
    g = cohomology(cx, 2).generators[0]
    assert class_coordinates(cx, 2, tuple(3 * x for x in g)) == (3,)
    assert class_coordinates(cx, 2, tuple(7 * x for x in g)) == (2,)


def test_class_coordinates_rejects_non_cocycle():
    cx = lens_model(5)
    with pytest.raises(PreconditionError, match=r"\(delta z\)\[0\]"):
        class_coordinates(cx, 1, (1,))


def test_class_coordinates_additive_mod_torsion():
    rng = random.Random(23)
    for _ in range(20):
        cx = random_complex(rng)
        n = rng.randrange(len(cx.ranks))
        g = cohomology(cx, n)
        if not g.generators:
            continue
        z1 = g.rep_from_coords(tuple(rng.randint(-3, 3) for _ in range(g.coord_dim)))
        z2 = g.rep_from_coords(tuple(rng.randint(-3, 3) for _ in range(g.coord_dim)))
        both = g.coordinates(tuple(a + b for a, b in zip(z1, z2)))
        summed = tuple(a + b for a, b in zip(g.coordinates(z1), g.coordinates(z2)))
        for i, f in enumerate(list(g.torsion) + [0] * g.free_rank):
            if f:
                assert (both[i] - summed[i]) % f == 0
            else:
                assert both[i] == summed[i]


def test_euler_characteristic_on_filtered_random_complexes():
    # entries in [-3, 3]; candidates filtered to valid complexes
    rng = random.Random(5)
    valid = 0
    attempts = 0
    while valid < 30 and attempts < 4000:
        attempts += 1
        cx = random_sparse_candidate(rng)
        if not validate_complex(cx).valid:
            continue
        valid += 1
        euler_ranks = sum(
            (-1) ** n * r for n, r in enumerate(cx.ranks)
        )
        euler_h = 0
        for n in range(len(cx.ranks)):
            g = cohomology(cx, n)
            euler_h += (-1) ** n * g.free_rank
        assert euler_h == euler_ranks
        # rank-nullity per degree
        from oracles import matrix_rank

        for n in range(len(cx.ranks)):
            rk = matrix_rank([list(r) for r in cx.delta_at(n).entries])
            nullity = cx.rank_at(n) - rk
            rk_below = matrix_rank([list(r) for r in cx.delta_at(n - 1).entries])
            assert cohomology(cx, n).free_rank == nullity - rk_below
    assert valid == 30


def test_random_cohomology_matches_oracle():
    rng = random.Random(31)
    for _ in range(30):
        cx = random_complex(rng)
        got = [canonical_shape(s) for s in shapes_of(cx)]
        want = [canonical_shape(s) for s in oracle_shapes(cx)]
        assert got == want


# --- mapping cones -------------------------------------------------------


def test_cone_of_zero_map_is_sum_with_shift():
    rng = random.Random(41)
    a = random_complex(rng, max_rank=3, max_deg=4)
    b = random_complex(rng, max_rank=3, max_deg=4)
    f = CochainMap.zero(a, b, 0)
    cone = mapping_cone(f)
    for n in range(len(cone.complex.ranks) + 1):
        got = canonical_shape(cohomology(cone.complex, n).shape)
        want = group_direct_sum(
            cohomology(a, n).shape, cohomology(b, n - 1).shape
        )
        assert got == canonical_shape(want)


def test_cone_of_identity_is_acyclic():
    cx = lens_model(3, n=2)
    f = CochainMap(cx, cx, 0, tuple(IntMatrix.identity(1) for _ in cx.ranks))
    cone = mapping_cone(f)
    for n in range(len(cone.complex.ranks) + 1):
        assert cohomology(cone.complex, n).is_trivial()


def test_cone_of_multiplication_by_k_on_point():
    pt = point_model()
    f = CochainMap(pt, pt, 0, (IntMatrix.from_rows([[6]]),))
    cone = mapping_cone(f)
    assert cohomology(cone.complex, 0).is_trivial()
    assert cohomology(cone.complex, 1).shape == ((6,), 0)


def test_cone_rejects_non_chain_map():
    cx = lens_model(2)
    mats = list(IntMatrix.identity(1) for _ in cx.ranks)
    mats[1] = IntMatrix.from_rows([[3]])  # breaks commuting across delta1 = [2]
    with pytest.raises(PreconditionError):
        CochainMap(cx, cx, 0, tuple(mats))


def test_cone_structural_maps_commute():
    rng = random.Random(43)
    a = random_complex(rng, max_rank=2, max_deg=4)
    b = random_complex(rng, max_rank=2, max_deg=4)
    cone = mapping_cone(CochainMap.zero(a, b, 0))
    # CochainMap construction validates strict commuting; reaching here is the test
    assert cone.inclusion.degree == 1
    assert cone.projection.degree == 0


# --- tensor products -----------------------------------------------------


def test_tensor_unit():
    rng = random.Random(47)
    a = random_complex(rng, max_rank=3, max_deg=4)
    t = tensor_product(a, point_model())
    assert t.ranks == a.ranks
    assert shapes_of(t) == shapes_of(a)


def test_tensor_circle_circle_torus_profile():
    t = tensor_product(circle_model(), circle_model())
    assert shapes_of(t) == [((), 1), ((), 2), ((), 1)]
    assert shapes_of(t) == oracle_shapes(t)


def test_tensor_cp1_circle():
    cp1 = GradedComplex.with_zero_deltas((1, 0, 1))
    t = tensor_product(cp1, circle_model())
    assert shapes_of(t) == [((), 1), ((), 1), ((), 1), ((), 1)]


def test_tensor_kuenneth_against_direct_sum():
    # circle factor is free with free cohomology, so no Tor terms appear
    for base in (lens_model(3), lens_model(5, n=2), tensor_product(circle_model(), circle_model())):
        t = tensor_product(base, circle_model())
        assert validate_complex(t).valid
        for n in range(len(t.ranks)):
            got = canonical_shape(cohomology(t, n).shape)
            want = group_direct_sum(
                cohomology(base, n).shape, cohomology(base, n - 1).shape
            )
            assert got == canonical_shape(want)


def test_tensor_koszul_signs_square_to_zero():
    rng = random.Random(53)
    for _ in range(10):
        a = random_complex(rng, max_rank=2, max_deg=3)
        b = random_complex(rng, max_rank=2, max_deg=3)
        assert validate_complex(tensor_product(a, b)).valid


def test_direct_sum_shapes():
    a = lens_model(2)
    b = circle_model()
    s = direct_sum(a, b)
    for n in range(len(s.ranks)):
        assert canonical_shape(cohomology(s, n).shape) == group_direct_sum(
            cohomology(a, n).shape, cohomology(b, n).shape
        )


def test_cochain_map_sum_requires_compatibility():
    cx = circle_model()
    f = CochainMap.zero(cx, cx, 2)
    g = CochainMap.zero(cx, cx, 1)
    with pytest.raises(PreconditionError):
        cochain_map_sum([(1, f), (1, g)])
