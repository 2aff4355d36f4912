import math

import numpy as np
import pytest

from semicert import (
    chaos_game,
    compose,
    contains,
    crossing_limit_interval,
    enumerate_words,
    find_elliptic,
    inverse,
    inverse_free_probe,
    normalize,
)
from semicert.errors import BudgetExceeded

from helpers import crossing_pair, disjoint_pair, figure_two, section_one_pair


class TestEnumerate:
    def test_section_one_semigroup(self):
        f, g = section_one_pair()
        report = enumerate_words([f, g], 12)
        assert report.elliptic_count == 0
        assert report.min_identity_distance > 0.1

    def test_nearest_element_is_the_dilation(self):
        f, g = section_one_pair()
        report = enumerate_words([f, g], 8)
        assert report.min_identity_distance == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-12)
        assert report.nearest_word.letters in ((0,), (1,))

    def test_word_matrices_match_letters(self):
        f, g = section_one_pair()
        report = enumerate_words([f, g], 6)
        gens = [f, g]
        for word in (report.nearest_word, *report.elliptic_words):
            if word is None:
                continue
            out = normalize([[1.0, 0.0], [0.0, 1.0]])
            for letter in reversed(word.letters):
                out = compose(gens[letter], out)
            assert out.a == pytest.approx(word.matrix.a, abs=1e-12)
            assert out.b == pytest.approx(word.matrix.b, abs=1e-12)

    def test_budget(self):
        rng = np.random.default_rng(90)
        f, g = disjoint_pair(rng, 1.0, 2.0, 2.3)
        with pytest.raises(BudgetExceeded):
            enumerate_words([f, g], 30, budget=1000)

    def test_determinism(self):
        rng = np.random.default_rng(91)
        f, g = disjoint_pair(rng, 1.0, 2.0, 2.3)
        r1 = enumerate_words([f, g], 9)
        r2 = enumerate_words([f, g], 9)
        assert r1 == r2

    def test_min_distance_nonincreasing_in_length(self):
        f, g = section_one_pair()
        dists = [enumerate_words([f, g], n).min_identity_distance for n in (2, 4, 8, 12)]
        assert all(a >= b - 1e-15 for a, b in zip(dists, dists[1:]))


class TestFindElliptic:
    def test_small_disjoint_pair(self):
        rng = np.random.default_rng(92)
        f, g = disjoint_pair(rng, math.log(2.0), 0.1, 0.1)
        word = find_elliptic([f, g], 40)
        assert word is not None
        assert abs(word.matrix.trace) < 2.0
        assert len(word.letters) == 2

    def test_matches_witness_prediction(self):
        from semicert import elliptic_witness_disjoint

        rng = np.random.default_rng(93)
        f, g = disjoint_pair(rng, math.log(2.0), 0.1, 0.1)
        m, n, trace = elliptic_witness_disjoint(f, g)
        word = find_elliptic([f, g], 40)
        assert sorted(word.letters) == sorted([0] * m + [1] * n)
        assert abs(word.matrix.trace) == pytest.approx(abs(trace), abs=1e-9)

    def test_schottky_regime_has_none(self):
        rng = np.random.default_rng(94)
        tau = math.log(9.0) + 1.6
        f, g = disjoint_pair(rng, math.log(2.0), tau, tau)
        assert find_elliptic([f, g], 14) is None

    def test_single_hyperbolic_has_none(self):
        f = normalize([[2.0, 0.0], [0.0, 1.0]])
        assert find_elliptic([f], 14) is None


class TestInverseFreeProbe:
    def test_detects_inverse_pair(self):
        f = normalize([[2.0, 0.0], [0.0, 1.0]])
        assert not inverse_free_probe([f, inverse(f)], 4)

    def test_section_one_pair(self):
        f, g = section_one_pair()
        assert inverse_free_probe([f, g], 10)

    def test_certified_system(self):
        rng = np.random.default_rng(95)
        tau = math.log(9.0) + 1.6
        f, g = disjoint_pair(rng, math.log(2.0), tau, tau)
        assert inverse_free_probe([f, g], 10)
        report = enumerate_words([f, g], 12)
        assert report.elliptic_count == 0
        assert report.min_identity_distance > 10.0 * report.dedup_tol


class TestChaosGame:
    def test_single_attractor(self):
        f = normalize([[2.0, 0.0], [0.0, 1.0]])
        pts = chaos_game([f], 100, seed=3)
        assert all(p.is_infinity for p in pts)

    def test_deterministic(self):
        rng = np.random.default_rng(96)
        f, g = crossing_pair(rng, math.pi / 2.0, 0.15, 0.15)
        a = chaos_game([f, g], 1000, seed=11)
        b = chaos_game([f, g], 1000, seed=11)
        assert a == b

    def test_samples_fill_the_limit_interval(self):
        # The endpoint tails carry measure ~ delta^(log2 / tau), so only the
        # interior fill is quantitative at this sample count; the acceptance
        # suite records the endpoint behaviour.
        rng = np.random.default_rng(97)
        f, g = crossing_pair(rng, math.pi / 2.0, 0.15, 0.15)
        arc = crossing_limit_interval(f, g)
        pts = chaos_game([f, g], 50_000, seed=5)
        for p in pts:
            assert contains(arc, p) or min(
                p.angular_distance(arc.start), p.angular_distance(arc.end)
            ) < 1e-9
        offsets = sorted(((p.angle - arc.start.angle) % (2 * math.pi)) for p in pts)
        interior = [t for t in offsets if 0.1 * arc.span <= t <= 0.9 * arc.span]
        gaps = [b - a for a, b in zip(interior, interior[1:])]
        assert max(gaps) < 0.02
        assert offsets[0] < 0.05 * arc.span and offsets[-1] > 0.85 * arc.span

    def test_samples_stay_in_certified_union(self):
        from semicert import assemble_global

        F = figure_two(41.0)
        system = assemble_global(F)
        pts = chaos_game(F, 20_000, seed=9)
        for p in pts:
            assert any(
                contains(arc, p)
                or min(p.angular_distance(arc.start), p.angular_distance(arc.end)) < 1e-9
                for arc in system.union
            )
