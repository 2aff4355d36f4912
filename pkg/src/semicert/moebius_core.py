"""Mobius transformations of the upper half-plane and its boundary circle.

Boundary points are homogeneous pairs so that infinity is an ordinary value;
all boundary comparisons are angular in the disc model, reached through a
fixed Cayley transfer.  Interior points are plain complex numbers with
positive imaginary part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CoincidentEndpoints, NonPositiveDeterminant, NotHyperbolic

TWO_PI = 2.0 * math.pi

# |trace| vs 2 tolerance separating parabolic from elliptic/hyperbolic.
TRACE_TOL = 1e-9
# max-entry tolerance for identifying +/-I.
IDENTITY_TOL = 1e-9
# angular tolerance for boundary-point identity checks.
ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of R u {inf} as a homogeneous pair (x : y), meaning x/y.

    Canonical form: x^2 + y^2 = 1 and y > 0, or y == 0 and x > 0, so that
    infinity is exactly (1, 0).  Use :meth:`of` to build canonical values.
    """

    x: float
    y: float

    @staticmethod
    def of(x: float, y: float) -> "BoundaryPoint":
        n = math.hypot(x, y)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError(f"invalid homogeneous pair ({x!r}, {y!r})")
        x, y = x / n, y / n
        if y < 0.0 or (y == 0.0 and x < 0.0):
            x, y = -x, -y
        return BoundaryPoint(x, y)

    @staticmethod
    def from_real(v: float) -> "BoundaryPoint":
        if math.isnan(v):
            raise ValueError("boundary value is NaN")
        if math.isinf(v):
            return BoundaryPoint(1.0, 0.0)
        return BoundaryPoint.of(v, 1.0)

    @staticmethod
    def infinity() -> "BoundaryPoint":
        return BoundaryPoint(1.0, 0.0)

    @staticmethod
    def from_angle(theta: float) -> "BoundaryPoint":
        # Inverse of the `angle` property: theta = -2*atan2(y, x) mod 2*pi.
        return BoundaryPoint.of(math.cos(0.5 * theta), -math.sin(0.5 * theta))

    @property
    def angle(self) -> float:
        """Disc-model angle in [0, 2*pi); infinity sits at angle 0."""
        return (-2.0 * math.atan2(self.y, self.x)) % TWO_PI

    @property
    def is_infinity(self) -> bool:
        return self.y == 0.0

    @property
    def value(self) -> float:
        """Half-plane coordinate; infinity maps to math.inf."""
        if abs(self.y) < 1e-300:
            return math.inf
        return self.x / self.y

    def angular_distance(self, other: "BoundaryPoint") -> float:
        d = abs(self.angle - other.angle) % TWO_PI
        return min(d, TWO_PI - d)

    def approx(self, other: "BoundaryPoint", tol: float = ANGLE_TOL) -> bool:
        return self.angular_distance(other) <= tol


@dataclass(frozen=True)
class Geodesic:
    """Directed hyperbolic line given by its boundary endpoints.

    For the axis of a hyperbolic map the direction is repelling -> attracting.
    """

    start: BoundaryPoint
    end: BoundaryPoint

    def __post_init__(self):
        if self.start.approx(self.end, tol=0.0):
            raise CoincidentEndpoints("geodesic endpoints coincide")

    def reversed(self) -> "Geodesic":
        return Geodesic(self.end, self.start)


@dataclass(frozen=True)
class MoebiusMap:
    """Orientation-preserving isometry of H, stored as a normalized matrix.

    Invariants: a*d - b*c == 1 and the canonical sign a + d > 0, or a + d == 0
    and the first nonzero of (a, b, c) positive.  Build values with
    :meth:`from_matrix`, which normalizes arbitrary positive-determinant input.
    """

    a: float
    b: float
    c: float
    d: float

    @staticmethod
    def from_matrix(a: float, b: float, c: float, d: float) -> "MoebiusMap":
        det = a * d - b * c
        if not math.isfinite(det) or det <= 0.0:
            raise NonPositiveDeterminant(f"determinant {det!r} must be positive")
        s = 1.0 / math.sqrt(det)
        return _canonical_sign(a * s, b * s, c * s, d * s)

    @staticmethod
    def identity() -> "MoebiusMap":
        return MoebiusMap(1.0, 0.0, 0.0, 1.0)

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def __call__(self, p):
        if isinstance(p, BoundaryPoint):
            return apply_boundary(self, p)
        return apply_interior(self, p)


def _canonical_sign(a: float, b: float, c: float, d: float) -> MoebiusMap:
    t = a + d
    flip = t < 0.0
    if t == 0.0:
        for entry in (a, b, c):
            if entry != 0.0:
                flip = entry < 0.0
                break
    if flip:
        a, b, c, d = -a, -b, -c, -d
    return MoebiusMap(a, b, c, d)


def normalize(raw) -> MoebiusMap:
    """Canonical representative of a raw 2x2 matrix (nested pairs or flat 4)."""
    entries = [float(v) for row in raw for v in row] if _is_nested(raw) else [float(v) for v in raw]
    if len(entries) != 4:
        raise ValueError("expected four matrix entries")
    return MoebiusMap.from_matrix(*entries)


def _is_nested(raw) -> bool:
    try:
        iter(raw[0])
        return True
    except TypeError:
        return False


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """Matrix product f*g, i.e. the map applying g first."""
    return _canonical_sign(
        f.a * g.a + f.b * g.c,
        f.a * g.b + f.b * g.d,
        f.c * g.a + f.d * g.c,
        f.c * g.b + f.d * g.d,
    )


def inverse(f: MoebiusMap) -> MoebiusMap:
    return _canonical_sign(f.d, -f.b, -f.c, f.a)


def conjugate(f: MoebiusMap, m: MoebiusMap) -> MoebiusMap:
    """m o f o m^-1."""
    return compose(compose(m, f), inverse(m))


def power(f: MoebiusMap, k: int) -> MoebiusMap:
    if k < 0:
        return power(inverse(f), -k)
    out = MoebiusMap.identity()
    base = f
    while k:
        if k & 1:
            out = compose(out, base)
        base = compose(base, base)
        k >>= 1
    return out


def apply_boundary(f: MoebiusMap, p: BoundaryPoint) -> BoundaryPoint:
    return BoundaryPoint.of(f.a * p.x + f.b * p.y, f.c * p.x + f.d * p.y)


def apply_interior(f: MoebiusMap, z: complex) -> complex:
    return (f.a * z + f.b) / (f.c * z + f.d)


@dataclass(frozen=True)
class Classification:
    """Conjugacy data of a map: kind plus the fields that kind carries."""

    kind: str  # "identity" | "elliptic" | "parabolic" | "hyperbolic"
    rotation_angle: float | None = None
    fixed: BoundaryPoint | None = None
    alpha: BoundaryPoint | None = None
    beta: BoundaryPoint | None = None
    tau: float | None = None

    @property
    def is_hyperbolic(self) -> bool:
        return self.kind == "hyperbolic"


def classify(f: MoebiusMap) -> Classification:
    """Decide identity/elliptic/parabolic/hyperbolic from the normalized trace.

    Hyperbolic fixed points are the projective roots of c z^2 + (d-a) z - b;
    the attracting one is picked by the angular derivative (image norm of the
    unit homogeneous vector), which stays well conditioned for c near 0.
    """
    if _identity_distance(f) <= IDENTITY_TOL:
        return Classification(kind="identity")
    t = f.trace  # >= 0 in canonical form
    if abs(t - 2.0) <= TRACE_TOL:
        return Classification(kind="parabolic", fixed=_parabolic_fixed_point(f))
    if t < 2.0:
        return Classification(kind="elliptic", rotation_angle=math.acos(max(-1.0, min(1.0, t / 2.0))))
    p1, p2 = _hyperbolic_fixed_points(f)
    # The image norms are e^(tau/2) and e^(-tau/2); comparing them against
    # each other (not against 1) keeps the assignment right even when huge
    # entries pollute the smaller norm with rounding noise.
    alpha, beta = (p1, p2) if _image_norm(f, p1) > _image_norm(f, p2) else (p2, p1)
    return Classification(
        kind="hyperbolic", alpha=alpha, beta=beta, tau=2.0 * math.acosh(t / 2.0)
    )


def _identity_distance(f: MoebiusMap) -> float:
    return max(abs(f.a - 1.0), abs(f.b), abs(f.c), abs(f.d - 1.0))


def _parabolic_fixed_point(f: MoebiusMap) -> BoundaryPoint:
    x, y = f.a - f.d, 2.0 * f.c
    if math.hypot(x, y) < 1e-14:
        return BoundaryPoint.infinity()
    return BoundaryPoint.of(x, y)


def _hyperbolic_fixed_points(f: MoebiusMap) -> tuple[BoundaryPoint, BoundaryPoint]:
    # Roots of A z^2 + B z + C with A = c, B = d - a, C = -b; disc = tr^2 - 4.
    A, B, C = f.c, f.d - f.a, -f.b
    sq = math.sqrt(max(f.trace * f.trace - 4.0, 0.0))
    if A == 0.0:
        return BoundaryPoint.infinity(), BoundaryPoint.of(-C, B)
    q = -0.5 * (B + math.copysign(sq, B)) if B != 0.0 else -0.5 * sq
    # q/A is the large root, C/q the small one; no cancellation either way.
    first = BoundaryPoint.of(q, A)
    second = BoundaryPoint.of(C, q) if q != 0.0 else BoundaryPoint.of(-B, A)
    return first, second


def _image_norm(f: MoebiusMap, p: BoundaryPoint) -> float:
    # For a unit fixed vector this is the eigenvalue magnitude; the angular
    # derivative there is 1/norm^2, so norm > 1 means attracting.
    return math.hypot(f.a * p.x + f.b * p.y, f.c * p.x + f.d * p.y)


def translation_length(f: MoebiusMap) -> float:
    cls = classify(f)
    if not cls.is_hyperbolic:
        raise NotHyperbolic(f"map is {cls.kind}")
    return cls.tau


def translation_length_iterate_check(f: MoebiusMap, k: int) -> float:
    """Translation length of f^k, computed from the matrix power."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    cls = classify(f)
    if not cls.is_hyperbolic:
        raise NotHyperbolic(f"map is {cls.kind}")
    return translation_length(power(f, k))


def hyperbolic_distance(z: complex, w: complex) -> float:
    if z.imag <= 0.0 or w.imag <= 0.0:
        raise ValueError("points must lie in the open upper half-plane")
    return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


def axis(f: MoebiusMap) -> Geodesic:
    cls = classify(f)
    if not cls.is_hyperbolic:
        raise NotHyperbolic(f"map is {cls.kind}")
    return Geodesic(cls.beta, cls.alpha)


def from_axis_and_length(beta: BoundaryPoint, alpha: BoundaryPoint, tau: float) -> MoebiusMap:
    """Hyperbolic map with the given repelling/attracting points and length.

    Right inverse of (axis, translation length): conjugates the dilation
    diag(e^{tau/2}, e^{-tau/2}) by the map sending (0, inf) to (beta, alpha).
    """
    if tau <= 0.0:
        raise ValueError("translation length must be positive")
    if alpha.approx(beta, tol=0.0):
        raise CoincidentEndpoints("axis endpoints coincide")
    chart = axis_chart(Geodesic(beta, alpha))
    e = math.exp(tau / 2.0)
    return conjugate(MoebiusMap.from_matrix(e, 0.0, 0.0, 1.0 / e), chart)


def axis_chart(geo: Geodesic) -> MoebiusMap:
    """Map sending the directed line (0 -> inf) onto `geo`."""
    cross = geo.end.x * geo.start.y - geo.end.y * geo.start.x
    if cross == 0.0:
        raise CoincidentEndpoints("geodesic endpoints coincide")
    s = 1.0 if cross > 0.0 else -1.0
    return MoebiusMap.from_matrix(s * geo.end.x, geo.start.x, s * geo.end.y, geo.start.y)


def axis_chart_at(geo: Geodesic, foot: complex) -> MoebiusMap:
    """Like :func:`axis_chart`, additionally sending i to `foot` on the line."""
    chart = axis_chart(geo)
    w = apply_interior(inverse(chart), foot)
    r = abs(w)  # w sits on the imaginary axis up to rounding
    sr = math.sqrt(r)
    return compose(chart, MoebiusMap.from_matrix(sr, 0.0, 0.0, 1.0 / sr))


def from_boundary_triple(
    src: tuple[BoundaryPoint, BoundaryPoint, BoundaryPoint],
    dst: tuple[BoundaryPoint, BoundaryPoint, BoundaryPoint],
) -> MoebiusMap:
    """The map sending one ordered boundary triple to another.

    The triples must have the same cyclic orientation, since only
    orientation-preserving maps are representable here.
    """
    s = _chart_to_zero_one_inf(*src)
    t = _chart_to_zero_one_inf(*dst)
    ti = (t[3], -t[1], -t[2], t[0])
    raw = (
        ti[0] * s[0] + ti[1] * s[2],
        ti[0] * s[1] + ti[1] * s[3],
        ti[2] * s[0] + ti[3] * s[2],
        ti[2] * s[1] + ti[3] * s[3],
    )
    try:
        return MoebiusMap.from_matrix(*raw)
    except NonPositiveDeterminant as exc:
        raise ValueError("boundary triples have opposite cyclic orientations") from exc


def _chart_to_zero_one_inf(p: BoundaryPoint, q: BoundaryPoint, r: BoundaryPoint):
    # z -> (z ^ p)(q ^ r) / ((z ^ r)(q ^ p)) with ^ the homogeneous wedge.
    qr = q.x * r.y - q.y * r.x
    qp = q.x * p.y - q.y * p.x
    if qr == 0.0 or qp == 0.0:
        raise CoincidentEndpoints("triple contains coincident points")
    return (qr * p.y, -qr * p.x, qp * r.y, -qp * r.x)


def cayley_to_disc(p):
    """Fixed transfer z -> (z - i)/(z + i); boundary points land on the circle."""
    if isinstance(p, BoundaryPoint):
        return complex(math.cos(p.angle), math.sin(p.angle))
    z = complex(p)
    return (z - 1j) / (z + 1j)


def cayley_from_disc(w):
    """Inverse transfer; unit-circle input returns a BoundaryPoint."""
    w = complex(w)
    if abs(abs(w) - 1.0) < 1e-12:
        return BoundaryPoint.from_angle(math.atan2(w.imag, w.real))
    return 1j * (1.0 + w) / (1.0 - w)
