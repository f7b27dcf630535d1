"""
Unit tests for app/toric/lattice.py

Covers:
- det / primitive and checked 64-bit overflow
- cone_hull, cone_contains, dual_cone
- hilbert_basis against a box-enumeration oracle
- hj_fractions reconstruction
- gl2z_classify invariance and lattice_isomorphism
"""

from fractions import Fraction
from math import gcd

import pytest

from app.errors import (
    DegenerateConeError,
    InputError,
    InvalidQuotientTypeError,
    LatticeOverflowError,
    NotPointedError,
    ZeroVectorError,
)
from app.toric.lattice import (
    Cone2,
    DegenerateCone,
    LatticeVec,
    QuotientType,
    Unimodular,
    cone_contains,
    cone_hull,
    det,
    dual_cone,
    gl2z_classify,
    hilbert_basis,
    hj_fractions,
    lattice_isomorphism,
    primitive,
    sort_ccw,
)

V = LatticeVec


def _brute_hilbert(cone: Cone2) -> list[LatticeVec]:
    """Indecomposable lattice points of the fundamental parallelogram, plain ints."""
    (a1, b1), (a2, b2) = cone.r1.as_pair(), cone.r2.as_pair()
    d = a1 * b2 - b1 * a2
    xs, ys = (0, a1, a2, a1 + a2), (0, b1, b2, b1 + b2)
    points = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            lam, mu = x * b2 - y * a2, a1 * y - b1 * x
            if (x, y) != (0, 0) and 0 <= lam <= d and 0 <= mu <= d:
                points.append((x, y))

    def in_cone(x, y):
        return a1 * y - b1 * x >= 0 and x * b2 - y * a2 >= 0

    basis = [
        v for v in points
        if not any(p != v and in_cone(v[0] - p[0], v[1] - p[1]) for p in points)
    ]
    return sort_ccw(V(x, y) for x, y in basis)


def _primitive_vectors(lo: int, hi: int) -> list[LatticeVec]:
    return [
        V(a, b) for a in range(lo, hi + 1) for b in range(lo, hi + 1)
        if (a, b) != (0, 0) and gcd(a, b) == 1
    ]


def _cones(lo: int, hi: int, max_det: int):
    rays = _primitive_vectors(lo, hi)
    for r1 in rays:
        for r2 in rays:
            if 0 < det(r1, r2) <= max_det:
                yield Cone2(r1, r2)


# ---------------------------------------------------------------------------
# det / primitive
# ---------------------------------------------------------------------------

class TestDet:

    def test_a_n_chart_rays_have_determinant_one(self):
        n = 5
        assert det(V(-n + 1, -n), V(n, n + 1)) == 1

    def test_identity_basis(self):
        assert det(V(1, 0), V(0, 1)) == 1

    def test_parallel_vectors(self):
        assert det(V(2, 3), V(4, 6)) == 0

    def test_antisymmetric(self, rng):
        for _ in range(100):
            v = V(rng.randint(-50, 50), rng.randint(-50, 50))
            w = V(rng.randint(-50, 50), rng.randint(-50, 50))
            assert det(v, w) == -det(w, v)

    def test_overflowing_determinant_raises(self):
        with pytest.raises(LatticeOverflowError):
            det(V(2**62, 0), V(0, 4))

    def test_overflowing_coordinate_raises(self):
        with pytest.raises(LatticeOverflowError):
            V(2**63, 0)

    def test_int64_min_is_representable(self):
        assert V(-(2**63), 0).a == -(2**63)

    def test_overflow_is_also_an_input_error(self):
        with pytest.raises(InputError):
            V(0, 1) + V(0, 2**63 - 1)


class TestPrimitive:

    @pytest.mark.parametrize("v, expected", [((4, 6), (2, 3)), ((1, 0), (1, 0)), ((0, -3), (0, -1)), ((-6, 9), (-2, 3))])
    def test_divides_by_gcd(self, v, expected):
        assert primitive(V(*v)) == V(*expected)

    def test_zero_vector_raises(self):
        with pytest.raises(ZeroVectorError):
            primitive(V(0, 0))


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

class TestConeHull:

    def test_gamma_3_cone(self):
        assert cone_hull([V(1, 0), V(1, 1), V(3, 4)]) == Cone2(V(1, 0), V(3, 4))

    def test_quadrant(self):
        assert cone_hull([V(1, 0), V(0, 1)]) == Cone2(V(1, 0), V(0, 1))

    def test_opposite_rays_are_not_pointed(self):
        with pytest.raises(NotPointedError):
            cone_hull([V(1, 0), V(-1, 0)])

    def test_half_plane_is_not_pointed(self):
        with pytest.raises(NotPointedError):
            cone_hull([V(1, 0), V(0, 1), V(-1, 0)])

    def test_collinear_vectors_give_degenerate_marker(self):
        assert cone_hull([V(2, 0), V(1, 0)]) == DegenerateCone(V(1, 0))

    def test_zero_generator_raises(self):
        with pytest.raises(ZeroVectorError):
            cone_hull([V(1, 0), V(0, 0)])

    def test_rays_are_primitive_and_counterclockwise(self):
        cone = cone_hull([V(0, 6), V(4, 2), V(3, 3)])
        assert cone == Cone2(V(2, 1), V(0, 1))
        assert det(cone.r1, cone.r2) > 0


class TestCone2:

    def test_constructor_normalizes_orientation(self):
        assert Cone2(V(0, 1), V(1, 0)) == Cone2(V(1, 0), V(0, 1))

    def test_constructor_rejects_collinear_rays(self):
        with pytest.raises(DegenerateConeError):
            Cone2(V(1, 1), V(2, 2))

    def test_contains(self):
        assert cone_contains(Cone2(V(1, 0), V(2, 3)), V(1, 1))
        assert not cone_contains(Cone2(V(1, 0), V(0, 1)), V(-1, 5))

    def test_contains_its_rays(self):
        cone = Cone2(V(3, -1), V(1, 4))
        assert cone_contains(cone, cone.r1)
        assert cone_contains(cone, cone.r2)

    def test_dual_cone_is_an_involution(self):
        for cone in _cones(-4, 4, 9):
            assert dual_cone(dual_cone(cone)) == cone

    def test_dual_cone_pairs_nonnegatively(self):
        cone = Cone2(V(1, 0), V(3, 4))
        dual = dual_cone(cone)
        for u in (dual.r1, dual.r2):
            assert u.dot(cone.r1) >= 0 and u.dot(cone.r2) >= 0


# ---------------------------------------------------------------------------
# Hilbert bases
# ---------------------------------------------------------------------------

class TestHilbertBasis:

    def test_a2_cone(self):
        assert list(hilbert_basis(Cone2(V(1, 0), V(2, 3)))) == [V(1, 0), V(1, 1), V(2, 3)]

    def test_smooth_cone(self):
        assert list(hilbert_basis(Cone2(V(1, 0), V(0, 1)))) == [V(1, 0), V(0, 1)]

    def test_a1_cone(self):
        assert list(hilbert_basis(Cone2(V(1, 0), V(1, 2)))) == [V(1, 0), V(1, 1), V(1, 2)]

    def test_matches_oracle_on_first_quadrant_cones(self):
        checked = 0
        for cone in _cones(0, 12, 12):
            assert list(hilbert_basis(cone)) == _brute_hilbert(cone), str(cone)
            checked += 1
        assert checked > 100

    def test_matches_oracle_on_signed_cones(self):
        for cone in _cones(-5, 5, 12):
            assert list(hilbert_basis(cone)) == _brute_hilbert(cone), str(cone)

    def test_basis_is_minimal(self):
        for cone in _cones(-4, 6, 12):
            basis = hilbert_basis(cone)
            sums = {u + w for u in basis for w in basis}
            assert not sums & set(basis)


# ---------------------------------------------------------------------------
# Continued fractions and classification
# ---------------------------------------------------------------------------

class TestHJFractions:

    @pytest.mark.parametrize("n, q, expected", [(5, 4, [2, 2, 2, 2]), (2, 1, [2]), (5, 2, [3, 2]), (7, 3, [3, 2, 2])])
    def test_known_expansions(self, n, q, expected):
        assert hj_fractions(n, q) == expected

    def test_folding_back_reconstructs_n_over_q(self):
        for n in range(2, 40):
            for q in range(1, n):
                if gcd(n, q) != 1:
                    continue
                bs = hj_fractions(n, q)
                assert all(b >= 2 for b in bs)
                value = Fraction(bs[-1])
                for b in reversed(bs[:-1]):
                    value = b - 1 / value
                assert value == Fraction(n, q)

    @pytest.mark.parametrize("n, q", [(4, 2), (3, 0), (3, 3), (1, 0)])
    def test_invalid_pairs_raise(self, n, q):
        with pytest.raises(InvalidQuotientTypeError):
            hj_fractions(n, q)


class TestQuotientType:

    def test_smooth(self):
        assert QuotientType(1, 0).is_smooth

    def test_rejects_non_coprime(self):
        with pytest.raises(InvalidQuotientTypeError):
            QuotientType(6, 3)


class TestGl2zClassify:

    def test_smooth_quadrant(self):
        assert gl2z_classify(Cone2(V(1, 0), V(0, 1))) == QuotientType(1, 0)

    def test_gamma_3(self):
        assert gl2z_classify(cone_hull([V(1, 0), V(1, 1), V(3, 4)])) == QuotientType(4, 3)

    def test_middle_chart_of_a5_is_a3(self):
        assert gl2z_classify(cone_hull([V(0, -1), V(4, 5)])) == QuotientType(4, 3)

    def test_a_n_family(self):
        for n in range(1, 13):
            cone = cone_hull([V(1, 0), V(1, 1), V(n, n + 1)])
            assert gl2z_classify(cone) == QuotientType(n + 1, n)
            assert hj_fractions(n + 1, n) == [2] * n

    def test_invariant_under_random_unimodular_maps(self, rng, random_unimodular):
        cones = list(_cones(-4, 6, 12))
        for _ in range(300):
            cone = rng.choice(cones)
            transform = random_unimodular(rng)
            assert gl2z_classify(transform.apply_cone(cone)) == gl2z_classify(cone)

    def test_q_is_reduced_by_its_inverse(self, rng, random_unimodular):
        cases = [
            ((2, 5), QuotientType(5, 2)),
            ((3, 5), QuotientType(5, 2)),
            ((2, 7), QuotientType(7, 2)),
            ((5, 7), QuotientType(7, 3)),
        ]
        for (a, b), expected in cases:
            cone = Cone2(V(1, 0), V(a, b))
            assert gl2z_classify(cone) == expected
            for _ in range(20):
                assert gl2z_classify(random_unimodular(rng).apply_cone(cone)) == expected

    def test_a3_cone_has_three_generators(self):
        cone = Cone2(V(1, 0), V(3, 4))
        qtype = gl2z_classify(cone)
        assert len(hilbert_basis(cone)) == 3
        assert hj_fractions(qtype.n, qtype.q) == [2, 2, 2]


# ---------------------------------------------------------------------------
# Unimodular transforms
# ---------------------------------------------------------------------------

class TestUnimodular:

    def test_rejects_non_unimodular(self):
        with pytest.raises(InputError):
            Unimodular(2, 0, 0, 1)

    def test_inverse(self, rng, random_unimodular):
        for _ in range(50):
            m = random_unimodular(rng)
            assert m @ m.inverse() == Unimodular(1, 0, 0, 1)

    def test_compose_matches_sequential_apply(self, rng, random_unimodular):
        for _ in range(50):
            m, k = random_unimodular(rng), random_unimodular(rng)
            v = V(rng.randint(-9, 9), rng.randint(-9, 9))
            assert (m @ k).apply(v) == m.apply(k.apply(v))


class TestLatticeIsomorphism:

    def test_maps_gamma_3_onto_a3_chart(self):
        source, target = Cone2(V(1, 0), V(3, 4)), Cone2(V(0, -1), V(4, 5))
        transform = lattice_isomorphism(source, target)
        assert transform.apply_cone(source) == target
        assert transform.apply(V(1, 0)) == V(0, -1)
        assert transform.apply(V(1, 1)) == V(1, 1)

    def test_random_images_are_found(self, rng, random_unimodular):
        cones = list(_cones(-3, 5, 10))
        for _ in range(200):
            cone = rng.choice(cones)
            target = random_unimodular(rng).apply_cone(cone)
            transform = lattice_isomorphism(cone, target)
            assert transform is not None
            assert transform.apply_cone(cone) == target

    def test_reflected_types_are_isomorphic(self):
        # 2 * 3 = 1 mod 5
        source, target = Cone2(V(5, -2), V(0, 1)), Cone2(V(5, -3), V(0, 1))
        transform = lattice_isomorphism(source, target)
        assert transform.apply_cone(source) == target
        assert transform.determinant == -1

    def test_different_types_have_no_isomorphism(self):
        assert lattice_isomorphism(Cone2(V(7, -2), V(0, 1)), Cone2(V(7, -3), V(0, 1))) is None
        assert lattice_isomorphism(Cone2(V(1, 0), V(1, 2)), Cone2(V(1, 0), V(1, 3))) is None
