"""Shared constructions for the test suite."""

import math

import numpy as np

from semicert import (
    BoundaryPoint,
    MoebiusMap,
    conjugate,
    from_axis_and_length,
    normalize,
)
from semicert.boundary_arcs import can_partition_rank_one
from semicert.pair_geometry import cross_ratio_of_points

TWO_PI = 2.0 * math.pi


def section_one_pair():
    """f(z) = 2z and g(z) = z/2 + 1."""
    return normalize([[2.0, 0.0], [0.0, 1.0]]), normalize([[1.0, 2.0], [0.0, 2.0]])


def corner_point(x, y):
    return BoundaryPoint.from_angle(math.atan2(y, x))


def figure_two(tau):
    """Five generators with the square-plus-diameter axis layout.

    Orientations are fixed so the diameter pair cross ratios come out as
    -1, 1/9 and 9 and the four corner pairs share fixed points.
    """
    ne, nw = corner_point(0.8, 0.6), corner_point(-0.8, 0.6)
    sw, se = corner_point(-0.8, -0.6), corner_point(0.8, -0.6)
    disc_m1 = BoundaryPoint.from_angle(math.pi)
    disc_p1 = BoundaryPoint.from_angle(0.0)
    return [
        from_axis_and_length(sw, nw, tau),
        from_axis_and_length(ne, nw, tau),
        from_axis_and_length(ne, se, tau),
        from_axis_and_length(sw, se, tau),
        from_axis_and_length(disc_p1, disc_m1, tau),
    ]


def random_moebius(rng):
    """Random normalized map with positive determinant (used as a conjugator)."""
    while True:
        a, b, c, d = rng.standard_normal(4)
        if a * d - b * c > 0.1:
            return MoebiusMap.from_matrix(a, b, c, d)


def random_hyperbolic(rng, tau_range=(0.3, 3.0)):
    while True:
        t1, t2 = rng.uniform(0.0, TWO_PI, size=2)
        if abs(t1 - t2) % TWO_PI > 0.2 and abs(t2 - t1) % TWO_PI < TWO_PI - 0.2:
            break
    tau = rng.uniform(*tau_range)
    return from_axis_and_length(
        BoundaryPoint.from_angle(t1), BoundaryPoint.from_angle(t2), tau
    )


def disjoint_pair(rng, d, tau_f, tau_g, conjugate_by=None):
    """Pair with disjoint axes a distance d apart and cross ratio above 1."""
    lam = math.exp(d)
    f = from_axis_and_length(BoundaryPoint.from_real(-1.0), BoundaryPoint.from_real(1.0), tau_f)
    g = from_axis_and_length(BoundaryPoint.from_real(lam), BoundaryPoint.from_real(-lam), tau_g)
    m = conjugate_by if conjugate_by is not None else random_moebius(rng)
    return conjugate(f, m), conjugate(g, m)


def crossing_pair(rng, theta, tau_f, tau_g, conjugate_by=None):
    """Pair whose axes cross at angle theta, in the interleaved ordering."""
    pa_f = BoundaryPoint.from_angle(1.5 * math.pi - 0.5 * theta)
    pb_f = BoundaryPoint.from_angle(0.5 * math.pi - 0.5 * theta)
    pa_g = BoundaryPoint.from_angle(1.5 * math.pi + 0.5 * theta)
    pb_g = BoundaryPoint.from_angle(0.5 * math.pi + 0.5 * theta)
    f = from_axis_and_length(pb_f, pa_f, tau_f)
    g = from_axis_and_length(pb_g, pa_g, tau_g)
    m = conjugate_by if conjugate_by is not None else random_moebius(rng)
    return conjugate(f, m), conjugate(g, m)


def random_admissible_family(rng, n, tau_slack=(0.5, 3.0), min_gap=0.08):
    """Family passing the assembly preconditions, with every tau above the
    upper threshold of its own cross-ratio table."""
    from semicert import Thresholds

    while True:
        angles = rng.uniform(0.0, TWO_PI, size=2 * n)
        angles.sort()
        gaps = np.diff(np.concatenate([angles, [angles[0] + TWO_PI]]))
        if gaps.min() < min_gap:
            continue
        order = rng.permutation(2 * n)
        pts = [BoundaryPoint.from_angle(a) for a in angles[order]]
        alphas, betas = pts[:n], pts[n:]
        if can_partition_rank_one(alphas, betas):
            continue
        table = {}
        degenerate = False
        for i in range(n):
            for j in range(i + 1, n):
                c = cross_ratio_of_points(alphas[i], betas[i], alphas[j], betas[j])
                if not math.isfinite(c) or abs(c) < 1e-6 or abs(c - 1.0) < 1e-6:
                    degenerate = True
                table[(i, j)] = c
        if degenerate:
            continue
        if not all(
            any(
                (table[tuple(sorted((i, j)))] < 0 or table[tuple(sorted((i, j)))] > 1)
                for j in range(n)
                if j != i
            )
            for i in range(n)
        ):
            continue
        upper = Thresholds.from_cross_ratios(list(table.values())).upper
        taus = upper + rng.uniform(*tau_slack, size=n)
        return [
            from_axis_and_length(betas[i], alphas[i], float(taus[i])) for i in range(n)
        ]


def brute_force_line_distance(chart1, chart2, lo=-8.0, hi=8.0):
    """Minimum distance between two lines by nested ternary search."""
    from semicert import apply_interior, hyperbolic_distance

    def point(chart, t):
        return apply_interior(chart, 1j * math.exp(t))

    def inner(s):
        a, b = lo, hi
        for _ in range(120):
            m1 = a + (b - a) / 3.0
            m2 = b - (b - a) / 3.0
            if hyperbolic_distance(point(chart1, s), point(chart2, m1)) < hyperbolic_distance(
                point(chart1, s), point(chart2, m2)
            ):
                b = m2
            else:
                a = m1
        return hyperbolic_distance(point(chart1, s), point(chart2, 0.5 * (a + b)))

    a, b = lo, hi
    for _ in range(120):
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        if inner(m1) < inner(m2):
            b = m2
        else:
            a = m1
    return inner(0.5 * (a + b))
