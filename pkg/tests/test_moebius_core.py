import math

import numpy as np
import pytest

from semicert import (
    BoundaryPoint,
    MoebiusMap,
    apply_boundary,
    apply_interior,
    axis,
    cayley_from_disc,
    cayley_to_disc,
    classify,
    compose,
    conjugate,
    from_axis_and_length,
    hyperbolic_distance,
    inverse,
    normalize,
    translation_length_iterate_check,
)
from semicert.errors import CoincidentEndpoints, NonPositiveDeterminant, NotHyperbolic
from semicert.moebius_core import from_boundary_triple, power

from helpers import random_hyperbolic, random_moebius, section_one_pair

INF = BoundaryPoint.infinity()


def real(v):
    return BoundaryPoint.from_real(v)


class TestNormalize:
    def test_scaling(self):
        m = normalize([[2.0, 0.0], [0.0, 1.0]])
        assert m.a == pytest.approx(math.sqrt(2.0))
        assert m.d == pytest.approx(1.0 / math.sqrt(2.0))
        assert m.trace == pytest.approx(3.0 / math.sqrt(2.0))

    def test_sign_quotient(self):
        m = normalize([[-1.0, 0.0], [0.0, -1.0]])
        assert (m.a, m.b, m.c, m.d) == (1.0, 0.0, 0.0, 1.0)

    def test_flat_input(self):
        m = normalize([0.5, 1.0, 0.0, 1.0])
        assert m.a == pytest.approx(1.0 / math.sqrt(2.0))
        assert m.b == pytest.approx(math.sqrt(2.0))
        assert m.d == pytest.approx(math.sqrt(2.0))

    def test_projective_consistency(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            a, b, c, d = rng.standard_normal(4)
            if a * d - b * c <= 0.01:
                continue
            s = rng.uniform(0.1, 5.0) * rng.choice([-1.0, 1.0])
            m1 = normalize([a, b, c, d])
            m2 = normalize([s * a, s * b, s * c, s * d])
            for e1, e2 in zip((m1.a, m1.b, m1.c, m1.d), (m2.a, m2.b, m2.c, m2.d)):
                assert e1 == pytest.approx(e2, abs=1e-12)

    def test_rejects_nonpositive_determinant(self):
        with pytest.raises(NonPositiveDeterminant):
            normalize([[1.0, 0.0], [0.0, -1.0]])
        with pytest.raises(NonPositiveDeterminant):
            normalize([[1.0, 1.0], [1.0, 1.0]])


class TestGroupOperations:
    def test_compose_with_inverse(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            f = random_moebius(rng)
            m = compose(f, inverse(f))
            assert classify(m).kind == "identity"

    def test_iterated_composition_matches_formula(self):
        # g^n f^n for f(z) = 2z, g(z) = z/2 + 1 is z + 2 - 2^(1-n).
        f, g = section_one_pair()
        for n in range(1, 21):
            w = compose(power(g, n), power(f, n))
            shift = 2.0 - 2.0 ** (1 - n)
            assert w.a == pytest.approx(1.0, abs=1e-12)
            assert w.d == pytest.approx(1.0, abs=1e-12)
            assert w.c == pytest.approx(0.0, abs=1e-12)
            assert w.b == pytest.approx(shift, abs=1e-12)

    def test_conjugation_preserves_class_and_tau(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            f = random_hyperbolic(rng)
            m = random_moebius(rng)
            base, conj = classify(f), classify(conjugate(f, m))
            assert conj.kind == base.kind
            assert conj.tau == pytest.approx(base.tau, abs=1e-8)


class TestClassify:
    def test_dilation(self):
        cls = classify(normalize([[2.0, 0.0], [0.0, 1.0]]))
        assert cls.kind == "hyperbolic"
        assert cls.alpha.is_infinity
        assert cls.beta.value == pytest.approx(0.0)
        assert cls.tau == pytest.approx(math.log(2.0))

    def test_translation_is_parabolic(self):
        cls = classify(normalize([[1.0, 1.0], [0.0, 1.0]]))
        assert cls.kind == "parabolic"
        assert cls.fixed.is_infinity

    def test_contraction_with_shift(self):
        cls = classify(normalize([[1.0, 2.0], [0.0, 2.0]]))
        assert cls.kind == "hyperbolic"
        assert cls.alpha.value == pytest.approx(2.0)
        assert cls.beta.is_infinity
        assert cls.tau == pytest.approx(math.log(2.0))

    def test_rotation_is_elliptic(self):
        t = 0.7
        cls = classify(normalize([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]]))
        assert cls.kind == "elliptic"
        assert cls.rotation_angle == pytest.approx(t)

    def test_trace_tolerance_boundary(self):
        # within 1e-9 of trace 2 counts as parabolic, beyond it does not
        near = MoebiusMap(1.0 + 2.5e-10, 1.0, 0.0, 1.0 / (1.0 + 2.5e-10))
        assert classify(near).kind == "parabolic"
        past = MoebiusMap(1.0 + 1e-4, 1.0, 0.0, 1.0 / (1.0 + 1e-4))
        assert classify(past).kind == "hyperbolic"

    def test_extreme_scale_assignment(self):
        # Entries near 1e24 pollute the smaller image norm with rounding noise;
        # the attracting point must still win the comparison.
        lam = math.exp(2e-7)
        f = from_axis_and_length(
            BoundaryPoint.from_real(lam), BoundaryPoint.from_real(-lam), 80.0
        )
        cls = classify(f)
        assert cls.alpha.value == pytest.approx(-lam, abs=1e-9)
        assert cls.beta.value == pytest.approx(lam, abs=1e-9)

    def test_conjugation_preserves_other_kinds(self):
        rng = np.random.default_rng(12)
        parabolic = normalize([[1.0, 1.0], [0.0, 1.0]])
        t = 0.9
        elliptic = normalize([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
        for _ in range(100):
            m = random_moebius(rng)
            assert classify(conjugate(parabolic, m)).kind == "parabolic"
            moved = classify(conjugate(elliptic, m))
            assert moved.kind == "elliptic"
            assert moved.rotation_angle == pytest.approx(t, abs=1e-9)

    def test_fixed_points_are_fixed(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            f = random_hyperbolic(rng)
            cls = classify(f)
            assert apply_boundary(f, cls.alpha).angular_distance(cls.alpha) < 1e-9
            assert apply_boundary(f, cls.beta).angular_distance(cls.beta) < 1e-9

    def test_attraction(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            f = random_hyperbolic(rng, tau_range=(0.5, 2.0))
            cls = classify(f)
            p = BoundaryPoint.from_angle(cls.beta.angle + 0.3)
            last = p.angular_distance(cls.alpha)
            for _ in range(200):
                p = apply_boundary(f, p)
            assert p.angular_distance(cls.alpha) < min(last, 1e-6)


class TestTranslationLength:
    def test_iterate_of_dilation(self):
        f = normalize([[2.0, 0.0], [0.0, 1.0]])
        assert translation_length_iterate_check(f, 3) == pytest.approx(3.0 * math.log(2.0))

    def test_iterate_matches_multiple(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            f = random_hyperbolic(rng, tau_range=(0.2, 2.0))
            tau = classify(f).tau
            for k in (2, 5, 20):
                assert translation_length_iterate_check(f, k) == pytest.approx(
                    k * tau, abs=1e-8
                )

    def test_small_translation_power(self):
        f = from_axis_and_length(real(0.0), INF, 0.1)
        assert translation_length_iterate_check(f, 10) == pytest.approx(1.0, abs=1e-9)

    def test_rejects_non_hyperbolic(self):
        with pytest.raises(NotHyperbolic):
            translation_length_iterate_check(normalize([[1.0, 1.0], [0.0, 1.0]]), 2)


class TestBoundaryAction:
    def test_dilation_fixes_infinity(self):
        f = normalize([[2.0, 0.0], [0.0, 1.0]])
        assert apply_boundary(f, INF).is_infinity

    def test_affine_action(self):
        g = normalize([[1.0, 2.0], [0.0, 2.0]])
        assert apply_boundary(g, real(1.0)).value == pytest.approx(1.5)

    def test_pole_goes_to_infinity(self):
        f = normalize([[0.0, -1.0], [1.0, 0.0]])
        assert apply_boundary(f, real(0.0)).is_infinity


class TestDistance:
    def test_vertical_segment(self):
        assert hyperbolic_distance(1j, 2j) == pytest.approx(math.log(2.0))

    def test_zero(self):
        assert hyperbolic_distance(1 + 1j, 1 + 1j) == 0.0

    def test_isometry(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            f = random_moebius(rng)
            z = complex(rng.normal(), rng.uniform(0.1, 3.0))
            w = complex(rng.normal(), rng.uniform(0.1, 3.0))
            assert hyperbolic_distance(
                apply_interior(f, z), apply_interior(f, w)
            ) == pytest.approx(hyperbolic_distance(z, w), abs=1e-9)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(8)
        for _ in range(300):
            z, w, u = (complex(rng.normal(), rng.uniform(0.05, 4.0)) for _ in range(3))
            assert hyperbolic_distance(z, u) <= (
                hyperbolic_distance(z, w) + hyperbolic_distance(w, u) + 1e-12
            )


class TestAxis:
    def test_from_axis_and_length_dilation(self):
        f = from_axis_and_length(real(0.0), INF, math.log(2.0))
        assert f.a == pytest.approx(math.sqrt(2.0))
        assert f.b == pytest.approx(0.0, abs=1e-15)
        assert f.c == pytest.approx(0.0, abs=1e-15)

    def test_roundtrip(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            f = random_hyperbolic(rng)
            cls = classify(f)
            geo = axis(f)
            assert geo.start.approx(cls.beta)
            assert geo.end.approx(cls.alpha)
            again = from_axis_and_length(geo.start, geo.end, cls.tau)
            back = classify(again)
            assert back.alpha.angular_distance(cls.alpha) < 1e-9
            assert back.beta.angular_distance(cls.beta) < 1e-9
            assert back.tau == pytest.approx(cls.tau, abs=1e-9)

    def test_symmetric_interval_axis(self):
        # Axis (-1, 1): trace must be 2 cosh(tau/2) and the endpoints fixed.
        tau = 1.7
        f = from_axis_and_length(real(-1.0), real(1.0), tau)
        assert f.trace == pytest.approx(2.0 * math.cosh(tau / 2.0), abs=1e-12)
        for v in (-1.0, 1.0):
            assert apply_boundary(f, real(v)).value == pytest.approx(v, abs=1e-12)

    def test_rejects_coincident_endpoints(self):
        with pytest.raises(CoincidentEndpoints):
            from_axis_and_length(real(1.0), real(1.0), 1.0)
        with pytest.raises(ValueError):
            from_axis_and_length(real(0.0), INF, -1.0)


class TestCayley:
    def test_center(self):
        assert cayley_to_disc(1j) == pytest.approx(0.0)

    def test_boundary_landmarks(self):
        assert cayley_to_disc(INF) == pytest.approx(1.0 + 0.0j)
        assert cayley_to_disc(real(0.0)) == pytest.approx(-1.0 + 0.0j)

    def test_roundtrip(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            z = complex(rng.normal(), rng.uniform(0.05, 4.0))
            assert cayley_from_disc(cayley_to_disc(z)) == pytest.approx(z, abs=1e-12)
            p = BoundaryPoint.from_angle(rng.uniform(0.0, 2.0 * math.pi))
            q = cayley_from_disc(cayley_to_disc(p))
            assert isinstance(q, BoundaryPoint)
            assert q.angular_distance(p) < 1e-12


class TestBoundaryTriple:
    def test_sends_triples(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=6))
            src = tuple(BoundaryPoint.from_angle(a) for a in angles[:3])
            dst = tuple(BoundaryPoint.from_angle(a) for a in angles[3:])
            m = from_boundary_triple(src, dst)
            for s, t in zip(src, dst):
                assert apply_boundary(m, s).angular_distance(t) < 1e-9

    def test_rejects_orientation_mismatch(self):
        pts = [BoundaryPoint.from_angle(a) for a in (0.5, 1.5, 2.5)]
        with pytest.raises(ValueError):
            from_boundary_triple((pts[0], pts[1], pts[2]), (pts[0], pts[2], pts[1]))
