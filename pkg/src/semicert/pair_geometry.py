"""Cross ratio of two hyperbolic maps and the geometry of their axes.

The cross ratio is evaluated in homogeneous coordinates (2x2 determinants of
endpoint pairs), so infinite fixed points need no branching.  Its value
decodes the axis configuration: crossing angle for negative values, distance
apart for positive ones, shared endpoints at 0 and infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AxesCross, DegenerateCrossRatio, NotHyperbolic, SharedEndpoint
from .moebius_core import (
    BoundaryPoint,
    Classification,
    Geodesic,
    MoebiusMap,
    classify,
    hyperbolic_distance,
    inverse,
)

# |C| or |C - 1| below this counts as a degenerate configuration.
DEGENERATE_TOL = 1e-9


def _wedge(p: BoundaryPoint, q: BoundaryPoint) -> float:
    return p.x * q.y - p.y * q.x


def _hyperbolic_or_raise(f: MoebiusMap) -> Classification:
    cls = classify(f)
    if not cls.is_hyperbolic:
        raise NotHyperbolic(f"map is {cls.kind}")
    return cls


def cross_ratio(f: MoebiusMap, g: MoebiusMap) -> float:
    """Cross ratio of the fixed-point quadruple; math.inf when alpha meets beta."""
    cf, cg = _hyperbolic_or_raise(f), _hyperbolic_or_raise(g)
    return cross_ratio_of_points(cf.alpha, cf.beta, cg.alpha, cg.beta)


def cross_ratio_of_points(
    alpha_f: BoundaryPoint, beta_f: BoundaryPoint, alpha_g: BoundaryPoint, beta_g: BoundaryPoint
) -> float:
    num = _wedge(alpha_f, alpha_g) * _wedge(beta_f, beta_g)
    den = _wedge(alpha_f, beta_g) * _wedge(beta_f, alpha_g)
    if den == 0.0:
        return math.inf
    value = num / den
    # Homogeneous coordinates are unit vectors, so num/den are O(1); treat a
    # ratio beyond any representable configuration as the projective infinity.
    if not math.isfinite(value):
        return math.inf
    return value


@dataclass(frozen=True)
class PairGeometry:
    """Cross ratio plus the decoded axis configuration.

    `kind` is one of "crossing", "disjoint", "shared_alpha", "shared_beta",
    "alpha_meets_beta", "parabolic_degenerate".  Angle and distance are
    available through :attr:`theta` and :attr:`distance` only for the kinds
    that define them.
    """

    cross_ratio: float
    kind: str
    _theta: float | None = None
    _distance: float | None = None
    nested_attractors: bool | None = None

    @property
    def theta(self) -> float:
        if self._theta is None:
            raise DegenerateCrossRatio(f"{self.kind} configuration has no crossing angle")
        return self._theta

    @property
    def distance(self) -> float:
        if self._distance is None:
            raise DegenerateCrossRatio(f"{self.kind} configuration has no axis distance")
        return self._distance


def configuration(f: MoebiusMap, g: MoebiusMap) -> PairGeometry:
    """Decode the axis configuration of a hyperbolic pair from its cross ratio.

    Crossing axes: C = -tan^2(theta/2) with theta in (0, pi) measured at the
    crossing point on the attracting side.  Disjoint axes: C = tanh^2(d/2)
    below 1 and coth^2(d/2) above 1, d the distance between the axes.
    """
    cf, cg = _hyperbolic_or_raise(f), _hyperbolic_or_raise(g)
    c = cross_ratio_of_points(cf.alpha, cf.beta, cg.alpha, cg.beta)
    if math.isinf(c):
        return PairGeometry(cross_ratio=c, kind="alpha_meets_beta")
    if abs(c) <= DEGENERATE_TOL:
        kind = "shared_alpha" if cf.alpha.approx(cg.alpha) else "shared_beta"
        return PairGeometry(cross_ratio=c, kind=kind)
    if abs(c - 1.0) <= DEGENERATE_TOL:
        return PairGeometry(cross_ratio=c, kind="parabolic_degenerate")
    if c < 0.0:
        theta = 2.0 * math.atan(math.sqrt(-c))
        return PairGeometry(cross_ratio=c, kind="crossing", _theta=theta)
    if c < 1.0:
        d = 2.0 * math.atanh(math.sqrt(c))
        return PairGeometry(cross_ratio=c, kind="disjoint", _distance=d, nested_attractors=False)
    d = 2.0 * math.atanh(1.0 / math.sqrt(c))
    return PairGeometry(cross_ratio=c, kind="disjoint", _distance=d, nested_attractors=True)


def inverse_flip_identity_check(f: MoebiusMap, g: MoebiusMap) -> tuple[float, float]:
    """(C(f, g), C(f^-1, g)); the product of the two values is 1."""
    return cross_ratio(f, g), cross_ratio(inverse(f), g)


def axes_distance_from_cr(f: MoebiusMap, g: MoebiusMap) -> float:
    """Distance between disjoint axes, from cosh(rho) = (C + 1)/|C - 1|."""
    c = cross_ratio(f, g)
    if not math.isfinite(c) or c <= DEGENERATE_TOL or abs(c - 1.0) <= DEGENERATE_TOL:
        raise DegenerateCrossRatio(f"cross ratio {c!r} admits no distance")
    s = math.sqrt(c)
    return math.log((s + 1.0) / abs(s - 1.0))


# --- half-plane circle geometry -------------------------------------------

# A geodesic is either a vertical euclidean ray ("line", x0) or a euclidean
# half-circle ("circle", center, radius) orthogonal to the real axis.


def geodesic_shape(geo: Geodesic):
    u, v = geo.start, geo.end
    if u.is_infinity or v.is_infinity:
        finite = v if u.is_infinity else u
        return ("line", finite.value, 0.0)
    a, b = u.value, v.value
    return ("circle", 0.5 * (a + b), 0.5 * abs(a - b))


def _quadratic_coeffs(geo: Geodesic) -> tuple[float, float, float]:
    # Endpoints are the projective roots of A z^2 + B z + C.
    p, q = geo.start, geo.end
    return p.y * q.y, -(p.x * q.y + q.x * p.y), p.x * q.x


def geodesics_cross(g1: Geodesic, g2: Geodesic) -> bool:
    """Whether the lines cross in the open half-plane (endpoints interleave)."""
    a = g1.start.angle
    span = (g1.end.angle - a) % (2.0 * math.pi)
    in1 = 0.0 < (g2.start.angle - a) % (2.0 * math.pi) < span
    in2 = 0.0 < (g2.end.angle - a) % (2.0 * math.pi) < span
    return in1 != in2


def _shared_endpoint(g1: Geodesic, g2: Geodesic, tol: float) -> bool:
    return any(
        p.angular_distance(q) <= tol
        for p in (g1.start, g1.end)
        for q in (g2.start, g2.end)
    )


def _intersect(shape1, shape2) -> complex:
    kind1, a1, b1 = shape1
    kind2, a2, b2 = shape2
    if kind1 == "line" and kind2 == "line":
        raise ValueError("parallel vertical lines do not intersect")
    if kind1 == "line":
        return _intersect(shape2, shape1)
    if kind2 == "line":
        c, r, x0 = a1, b1, a2
        y2 = r * r - (x0 - c) * (x0 - c)
        return complex(x0, math.sqrt(max(y2, 0.0)))
    c1, r1, c2, r2 = a1, b1, a2, b2
    x = (r2 * r2 - r1 * r1 + c1 * c1 - c2 * c2) / (2.0 * (c1 - c2))
    y2 = r1 * r1 - (x - c1) * (x - c1)
    return complex(x, math.sqrt(max(y2, 0.0)))


def tangent_at(geo: Geodesic, z: complex) -> complex:
    """Unit tangent direction of the geodesic at a point on it."""
    kind, a, _ = geodesic_shape(geo)
    if kind == "line":
        return 1j
    radial = complex(z.real - a, z.imag)
    t = 1j * radial
    return t / abs(t)


def common_perpendicular(
    l1: Geodesic, l2: Geodesic, tol: float = 1e-12
) -> tuple[Geodesic, complex, complex, float]:
    """Unique line orthogonal to both disjoint lines, its feet, and their distance.

    Orthogonality of half-plane geodesics is a bilinear condition on the
    quadratic forms vanishing on their endpoints; intersecting the two linear
    constraints yields the perpendicular in closed form.
    """
    if _shared_endpoint(l1, l2, tol):
        raise SharedEndpoint("lines share a boundary endpoint")
    if geodesics_cross(l1, l2):
        raise AxesCross("lines cross; no common perpendicular exists")
    a1, b1, c1 = _quadratic_coeffs(l1)
    a2, b2, c2 = _quadratic_coeffs(l2)
    # (A, B, C) of the perpendicular solves B*Bi = 2*(C*Ai + A*Ci) for i = 1, 2.
    u1 = (-2.0 * c1, b1, -2.0 * a1)
    u2 = (-2.0 * c2, b2, -2.0 * a2)
    A = u1[1] * u2[2] - u1[2] * u2[1]
    B = u1[2] * u2[0] - u1[0] * u2[2]
    C = u1[0] * u2[1] - u1[1] * u2[0]
    perp = _geodesic_from_quadratic(A, B, C)
    foot1 = _intersect(geodesic_shape(perp), geodesic_shape(l1))
    foot2 = _intersect(geodesic_shape(perp), geodesic_shape(l2))
    d = hyperbolic_distance(foot1, foot2)
    perp = _orient_through(perp, foot1, foot2)
    return perp, foot1, foot2, d


def _geodesic_from_quadratic(A: float, B: float, C: float) -> Geodesic:
    scale = max(abs(A), abs(B), abs(C))
    if scale == 0.0:
        raise ValueError("degenerate perpendicular")
    A, B, C = A / scale, B / scale, C / scale
    if abs(A) < 1e-14:
        if B == 0.0:
            raise ValueError("degenerate perpendicular")
        return Geodesic(BoundaryPoint.infinity(), BoundaryPoint.of(-C, B))
    disc = B * B - 4.0 * A * C
    if disc <= 0.0:
        raise ValueError("perpendicular has no real endpoints")
    sq = math.sqrt(disc)
    q = -0.5 * (B + math.copysign(sq, B)) if B != 0.0 else -0.5 * sq
    return Geodesic(BoundaryPoint.of(q, A), BoundaryPoint.of(C, q) if q != 0.0 else BoundaryPoint.of(-B, A))


def _orient_through(geo: Geodesic, first: complex, second: complex) -> Geodesic:
    """Direct the line so that it passes `first` before `second`."""
    kind, a, _ = geodesic_shape(geo)
    if kind == "line":
        forward = second.imag > first.imag
        upward = geo.end.is_infinity
        return geo if forward == upward else geo.reversed()
    # On a half-circle the euclidean angle decreases toward the endpoint with
    # the larger coordinate; compare polar angles around the center.
    th1 = math.atan2(first.imag, first.real - a)
    th2 = math.atan2(second.imag, second.real - a)
    toward_end = geo.end.value > geo.start.value
    return geo if (th2 < th1) == toward_end else geo.reversed()
