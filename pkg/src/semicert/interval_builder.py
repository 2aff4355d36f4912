"""Constructions of the boundary interval systems behind the certificates.

Each builder returns arcs that are symmetric with respect to their owner:
the hyperbolic line through the arc endpoints meets the owner's axis at a
right angle.  Such arcs are cut out by a perpendicular erected at a signed
position along the axis, and the owner translates cut positions by its
translation length, which turns every mapping claim into arithmetic on cut
positions plus an endpoint-image verification.  The geometry here is
advisory; the verifier in :mod:`semicert.boundary_arcs` is the certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .boundary_arcs import (
    DEFAULT_MARGIN,
    ArcUnion,
    BoundaryArc,
    arc_between,
    arc_image,
    can_partition_rank_one,
    ccw_gap,
    complement,
    contains,
    image_clearances,
    schottky_margin,
)
from .errors import (
    AxesDoNotCross,
    AxesNotDisjointOutside,
    NoCommonAlpha,
    NotHyperbolic,
    OverlappingArcs,
    PreconditionViolated,
    ThresholdNotMet,
    VerificationFailed,
)
from .moebius_core import (
    TWO_PI,
    BoundaryPoint,
    Classification,
    Geodesic,
    MoebiusMap,
    apply_boundary,
    axis_chart_at,
    classify,
    compose,
    from_boundary_triple,
    inverse,
)
from .pair_geometry import common_perpendicular, configuration, cross_ratio_of_points

# Additive slack on translation lengths required by the pair constructions.
PAIR_GATE_SLACK = 1.5
# Shared-fixed-point construction needs every translation length above log 5.
SHARED_ALPHA_GATE = math.log(5.0)


@dataclass(frozen=True)
class SymmetricIntervalPair:
    """Arcs (a around the attractor, b around the repeller) of one generator.

    Both arcs are symmetric with respect to the owner, their closures are
    disjoint, and the owner maps the complement of b strictly inside a.
    """

    a: BoundaryArc
    b: BoundaryArc
    owner: int


@dataclass(frozen=True)
class SharedFixedPointGroup:
    """Common interval data for generators sharing one fixed point.

    For kind "beta" the construction ran on the inverses, so `a_union`
    surrounds the shared repelling point and `b_arc` covers the attractors.
    """

    kind: str  # "alpha" or "beta"
    members: tuple[int, ...]
    a_union: ArcUnion
    b_arc: BoundaryArc
    conjugator: MoebiusMap


@dataclass(frozen=True)
class GlobalIntervalSystem:
    """Assembled per-generator intervals plus the verified forward union."""

    pairs: tuple[SymmetricIntervalPair, ...]
    groups: tuple[SharedFixedPointGroup, ...]
    union: ArcUnion
    constant_m: float
    margin: float
    notes: tuple[str, ...] = ()


def disjoint_pair_gate(c: float) -> float:
    return math.log(c) + PAIR_GATE_SLACK


def crossing_pair_gate(c: float) -> float:
    return abs(math.log(abs(c))) + PAIR_GATE_SLACK


def crossing_cut_floor(theta: float) -> float:
    """Smallest cut position keeping the four crossing-pair arcs separated."""
    m = min(theta, math.pi - theta)
    return math.atanh(math.cos(0.5 * m))


def crossing_quarter_condition(tau: float, theta: float) -> bool:
    """Whether the normalized quarter-arc mapping bound sinh(tau) > M holds."""
    half = 0.5 * theta
    m = (math.sin(half) + math.cos(half)) / (math.sin(half) * math.cos(half))
    return math.sinh(tau) > m


# Beyond this cut depth, tanh rounds to 1 and arc endpoints lose angular
# resolution; deeper cuts could not be verified anyway.
MAX_CUT_DEPTH = 18.0


def _cut_position(tau: float, floor: float, extra: float) -> float:
    """Cut strictly between `floor` (separation) and tau/2 (mapping margin).

    When tau/2 does not clear the floor the cut keeps only the per-owner
    mapping property; separation against the partner is then unattainable.
    """
    gap = 0.5 * tau - floor
    if gap <= 0.0:
        return min(0.375 * tau + extra, 0.45 * tau, MAX_CUT_DEPTH)
    s = floor + min(1.0 + extra, 0.5 * gap + extra)
    return min(s, 0.5 * tau - 0.125 * gap, max(floor + 1e-6, MAX_CUT_DEPTH))


def _hyperbolic(f: MoebiusMap) -> Classification:
    cls = classify(f)
    if not cls.is_hyperbolic:
        raise NotHyperbolic(f"map is {cls.kind}")
    return cls


def _axis_cut_pair(
    cls: Classification, foot: complex, s: float, owner: int
) -> SymmetricIntervalPair:
    """Arcs cut by perpendiculars at +s (attracting side) and -s along the axis."""
    chart = axis_chart_at(Geodesic(cls.beta, cls.alpha), foot)
    es = math.exp(s)

    def at(v: float) -> BoundaryPoint:
        return apply_boundary(chart, BoundaryPoint.from_real(v))

    try:
        a = arc_between(at(-es), at(es), cls.alpha)
        b = arc_between(at(-1.0 / es), at(1.0 / es), cls.beta)
    except ValueError as exc:
        raise VerificationFailed(f"cut arcs fell below float angular resolution: {exc}")
    return SymmetricIntervalPair(a=a, b=b, owner=owner)


def mapping_margin(owner: MoebiusMap, pair: SymmetricIntervalPair) -> float:
    """Clearance of image(complement of b) inside a; -inf if not contained."""
    found = image_clearances(owner, complement(pair.b), pair.a)
    if found is None:
        return -math.inf
    return min(found)


def _require_valid_pair(f: MoebiusMap, pair: SymmetricIntervalPair, label: str) -> None:
    try:
        ArcUnion([pair.a, pair.b])
    except OverlappingArcs as exc:
        raise VerificationFailed(f"{label}: owner arcs overlap") from exc
    if mapping_margin(f, pair) <= 0.0:
        raise VerificationFailed(f"{label}: mapping property failed verification")


def build_disjoint_pair_intervals(
    f: MoebiusMap,
    g: MoebiusMap,
    owners: tuple[int, int] = (0, 1),
    cut_offset: float = 0.0,
) -> tuple[SymmetricIntervalPair, SymmetricIntervalPair]:
    """Interval pairs for two maps with disjoint axes and cross ratio above 1.

    Construction: erect perpendiculars to each axis on both sides of the foot
    of the common perpendicular.  Cut positions stay beyond the separation
    floor arsinh(1/sinh(d/2)) (so the four closures are pairwise disjoint)
    and below tau/2 (so each owner maps the complement of its b-arc strictly
    inside its a-arc), bounded so that margins stay macroscopic at any tau.
    """
    cf, cg = _hyperbolic(f), _hyperbolic(g)
    pg = configuration(f, g)
    c = pg.cross_ratio
    if pg.kind != "disjoint" or not pg.nested_attractors:
        raise AxesNotDisjointOutside(f"cross ratio {c!r} is not above 1")
    gate = disjoint_pair_gate(c)
    taus = (cf.tau, cg.tau)
    for tau in taus:
        if tau <= gate:
            raise ThresholdNotMet(
                f"translation length {tau:.6f} not above log C + 3/2 = {gate:.6f}"
            )
    d = pg.distance
    _, foot_f, foot_g, d_perp = common_perpendicular(
        Geodesic(cf.beta, cf.alpha), Geodesic(cg.beta, cg.alpha)
    )
    if abs(d - d_perp) > 1e-6 * (1.0 + d):
        raise VerificationFailed(
            f"axis distance mismatch: cross ratio gives {d:.9f}, feet give {d_perp:.9f}"
        )
    floor = math.asinh(1.0 / math.sinh(0.5 * d))
    pair_f = _axis_cut_pair(cf, foot_f, _cut_position(taus[0], floor, cut_offset), owners[0])
    pair_g = _axis_cut_pair(cg, foot_g, _cut_position(taus[1], floor, cut_offset), owners[1])
    try:
        ArcUnion([pair_f.a, pair_f.b, pair_g.a, pair_g.b])
    except OverlappingArcs as exc:
        raise VerificationFailed("disjoint-pair arcs are not pairwise disjoint") from exc
    _require_valid_pair(f, pair_f, "disjoint pair, first owner")
    _require_valid_pair(g, pair_g, "disjoint pair, second owner")
    return pair_f, pair_g


def build_crossing_pair_intervals(
    f: MoebiusMap,
    g: MoebiusMap,
    owners: tuple[int, int] = (0, 1),
    cut_offset: float = 0.0,
) -> tuple[SymmetricIntervalPair, SymmetricIntervalPair]:
    """Interval pairs for two maps whose axes cross.

    The pair is conjugated to the normalized disc position: axes through the
    origin with the coordinate diameters bisecting the two crossing angles
    and the attractor-free arc on top.  Arc endpoints are computed there as
    explicit circle points and pulled back through the one conjugating map.

    Near the threshold the four arcs of the two owners cannot always be made
    pairwise disjoint (that needs roughly 2*artanh(cos(min(theta, pi-theta)/2))
    of translation length); each owner's own pair is still valid and verified.
    """
    cf, cg = _hyperbolic(f), _hyperbolic(g)
    pg = configuration(f, g)
    if pg.kind != "crossing":
        raise AxesDoNotCross(f"cross ratio {pg.cross_ratio!r} is not negative")
    c, theta = pg.cross_ratio, pg.theta
    gate = crossing_pair_gate(c)
    tau_f, tau_g = cf.tau, cg.tau
    for tau in (tau_f, tau_g):
        if tau <= gate:
            raise ThresholdNotMet(
                f"translation length {tau:.6f} not above |log|C|| + 3/2 = {gate:.6f}"
            )
    # Normalize with the attractor-to-attractor arc free of repelling points.
    if _beta_free(cf, cg):
        first, second = (cf, tau_f, owners[0]), (cg, tau_g, owners[1])
        swap = False
    elif _beta_free(cg, cf):
        first, second = (cg, tau_g, owners[1]), (cf, tau_f, owners[0])
        swap = True
    else:
        raise AxesDoNotCross("fixed points do not interleave")
    psi1 = 1.5 * math.pi - 0.5 * theta
    psi2 = 1.5 * math.pi + 0.5 * theta
    m = from_boundary_triple(
        (first[0].alpha, first[0].beta, second[0].alpha),
        (
            BoundaryPoint.from_angle(psi1),
            BoundaryPoint.from_angle(psi1 + math.pi),
            BoundaryPoint.from_angle(psi2),
        ),
    )
    placed = apply_boundary(m, second[0].beta)
    if placed.angular_distance(BoundaryPoint.from_angle(psi2 + math.pi)) > 1e-6:
        raise VerificationFailed("normalization did not place the fourth fixed point")
    floor = crossing_cut_floor(theta)
    pair1 = _normalized_cut_pair(m, psi1, _cut_position(first[1], floor, cut_offset), first[0], first[2])
    pair2 = _normalized_cut_pair(m, psi2, _cut_position(second[1], floor, cut_offset), second[0], second[2])
    f1, f2 = (g, f) if swap else (f, g)
    _require_valid_pair(f1, pair1, "crossing pair, first owner")
    _require_valid_pair(f2, pair2, "crossing pair, second owner")
    return (pair2, pair1) if swap else (pair1, pair2)


def _beta_free(cf: Classification, cg: Classification) -> bool:
    arc = BoundaryArc(cf.alpha, cg.alpha)
    return not contains(arc, cf.beta) and not contains(arc, cg.beta)


def _normalized_cut_pair(
    m: MoebiusMap, psi: float, s: float, cls: Classification, owner: int
) -> SymmetricIntervalPair:
    # In normalized coordinates the perpendicular at +s along the diameter
    # toward angle psi has endpoints psi -/+ acos(tanh s).
    phi = math.acos(math.tanh(s))
    minv = inverse(m)
    try:
        a = arc_image(minv, BoundaryArc.from_angles(psi - phi, psi + phi))
        b = arc_image(minv, BoundaryArc.from_angles(psi + math.pi - phi, psi + math.pi + phi))
    except ValueError as exc:
        raise VerificationFailed(f"cut arcs fell below float angular resolution: {exc}")
    if not contains(a, cls.alpha) or not contains(b, cls.beta):
        raise VerificationFailed("pulled-back arcs missed their fixed points")
    return SymmetricIntervalPair(a=a, b=b, owner=owner)


def build_shared_alpha_intervals(
    fs: list[MoebiusMap],
) -> tuple[ArcUnion, BoundaryArc, MoebiusMap]:
    """Common intervals for maps sharing one attracting fixed point.

    Conjugates the family so the common attractor is infinity and every
    repelling point lies in [0, 1]; then the fixed half-plane intervals
    (5/2, -3/2) through infinity and (-1/2, 3/2) work for every member as
    soon as each translation length exceeds log 5, and are pulled back.
    """
    if not fs:
        raise ValueError("need at least one map")
    cls = [_hyperbolic(f) for f in fs]
    alpha = cls[0].alpha
    for k in cls[1:]:
        if not alpha.approx(k.alpha):
            raise NoCommonAlpha("attracting fixed points differ")
    for k in cls:
        # The comparison is conservative by a few ulps so that multiplier 5
        # exactly is rejected even after classification round-trips.
        if k.tau <= SHARED_ALPHA_GATE + 1e-12:
            raise ThresholdNotMet(
                f"translation length {k.tau:.6f} not above log 5 = {SHARED_ALPHA_GATE:.6f}"
            )
    # Send the common attractor to infinity, then squeeze the repelling
    # points into [0, 1] with a boundary-affine map.
    to_infinity = from_boundary_triple(
        (cls[0].beta, _between(cls[0].beta, alpha), alpha),
        (
            BoundaryPoint.from_real(0.0),
            BoundaryPoint.from_real(1.0),
            BoundaryPoint.infinity(),
        ),
    )
    xs = [apply_boundary(to_infinity, k.beta).value for k in cls]
    lo, hi = min(xs), max(xs)
    scale = hi - lo if hi - lo > 1e-12 else 1.0
    affine = MoebiusMap.from_matrix(1.0, -lo, 0.0, scale)
    conjugator = compose(affine, to_infinity)
    minv = inverse(conjugator)
    a_union = ArcUnion([arc_image(minv, BoundaryArc.from_reals(2.5, -1.5))])
    b_arc = arc_image(minv, BoundaryArc.from_reals(-0.5, 1.5))
    for f in fs:
        found = image_clearances(f, complement(b_arc), a_union.arcs[0])
        if found is None or min(found) <= 0.0:
            raise VerificationFailed("shared-attractor intervals failed verification")
    return a_union, b_arc, conjugator


def _between(p: BoundaryPoint, q: BoundaryPoint) -> BoundaryPoint:
    """Midpoint of the counterclockwise arc from p to q (fixes orientation)."""
    return BoundaryPoint.from_angle(p.angle + 0.5 * ccw_gap(p.angle, q.angle))


# --- global assembly --------------------------------------------------------


def assemble_global(F: list[MoebiusMap], margin: float = DEFAULT_MARGIN) -> GlobalIntervalSystem:
    """Assemble a verified forward-invariant union for the whole family.

    Per generator, interval pairs are built against every admissible partner
    (crossing axes, or disjoint with cross ratio above 1) and the innermost
    pair is kept; generators sharing a fixed point are additionally
    constrained by the shared-fixed-point intervals.  If the resulting union
    fails verification the cuts are pushed deeper and the assembly retried.
    """
    maps = list(F)
    if not maps:
        raise ValueError("need at least one generator")
    cls = []
    for idx, f in enumerate(maps):
        k = classify(f)
        if not k.is_hyperbolic:
            raise PreconditionViolated(f"generator {idx} is {k.kind}, not hyperbolic")
        cls.append(k)
    for i, ki in enumerate(cls):
        for j, kj in enumerate(cls):
            if ki.alpha.approx(kj.beta):
                raise PreconditionViolated(
                    f"attracting point of generator {i} meets repelling point of {j}"
                )
    if can_partition_rank_one([k.alpha for k in cls], [k.beta for k in cls]):
        raise PreconditionViolated(
            "fixed points are separable by two intervals (rank-one configuration)"
        )
    last_error: Exception | None = None
    for extra in (0.0, 2.0, 4.0, 7.0, 10.0):
        try:
            return _assemble_once(maps, cls, margin, extra)
        except (VerificationFailed, OverlappingArcs) as exc:
            last_error = exc
    raise VerificationFailed(f"no cut schedule produced a verifiable union: {last_error}")


def _assemble_once(
    maps: list[MoebiusMap], cls: list[Classification], margin: float, extra: float
) -> GlobalIntervalSystem:
    n = len(maps)
    notes: list[str] = []
    candidates: dict[int, list[SymmetricIntervalPair]] = {i: [] for i in range(n)}
    table: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = cross_ratio_of_points(cls[i].alpha, cls[i].beta, cls[j].alpha, cls[j].beta)
            table[(i, j)] = c
            builder = None
            if math.isfinite(c) and c < -1e-9:
                builder = build_crossing_pair_intervals
            elif math.isfinite(c) and c > 1.0 + 1e-9:
                builder = build_disjoint_pair_intervals
            if builder is None:
                continue
            try:
                pi, pj = builder(maps[i], maps[j], owners=(i, j), cut_offset=extra)
            except ThresholdNotMet as exc:
                notes.append(f"pair ({i}, {j}) skipped: {exc}")
                continue
            candidates[i].append(pi)
            candidates[j].append(pj)
    pairs = []
    for i in range(n):
        if not candidates[i]:
            raise PreconditionViolated(
                f"generator {i} has no admissible partner with sufficient translation length"
            )
        pairs.append(
            SymmetricIntervalPair(
                a=_innermost([p.a for p in candidates[i]], cls[i].alpha),
                b=_innermost([p.b for p in candidates[i]], cls[i].beta),
                owner=i,
            )
        )
    alpha_classes = _point_classes([k.alpha for k in cls])
    beta_classes = _point_classes([k.beta for k in cls])
    groups: list[SharedFixedPointGroup] = []
    alpha_extra: dict[int, list[BoundaryArc]] = {i: [] for i in range(n)}
    for members in alpha_classes:
        if len(members) < 2:
            continue
        try:
            a_union, b_arc, conj = build_shared_alpha_intervals([maps[i] for i in members])
        except ThresholdNotMet as exc:
            raise PreconditionViolated(f"shared attracting point at {members}: {exc}") from exc
        groups.append(
            SharedFixedPointGroup("alpha", tuple(members), a_union, b_arc, conj)
        )
        for i in members:
            alpha_extra[i].append(a_union.arcs[0])
    for members in beta_classes:
        if len(members) < 2:
            continue
        try:
            a_union, b_arc, conj = build_shared_alpha_intervals(
                [inverse(maps[i]) for i in members]
            )
        except ThresholdNotMet as exc:
            raise PreconditionViolated(f"shared repelling point at {members}: {exc}") from exc
        groups.append(SharedFixedPointGroup("beta", tuple(members), a_union, b_arc, conj))
        for i in members:
            # Roles swap under inversion: the pulled-back b-side covers the
            # attracting points of the original maps.
            alpha_extra[i].append(b_arc)
    final_a: list[BoundaryArc] = []
    for i in range(n):
        final_a.append(_intersect_around(cls[i].alpha, [pairs[i].a, *alpha_extra[i]]))
    components: list[BoundaryArc] = []
    for members in alpha_classes:
        point = cls[members[0]].alpha
        components.append(_hull_around(point, [final_a[i] for i in members]))
    union = ArcUnion(components)
    achieved = schottky_margin(maps, union)
    if achieved < margin:
        raise VerificationFailed(
            f"assembled union has margin {achieved:.3e}, below required {margin:.3e}"
        )
    return GlobalIntervalSystem(
        pairs=tuple(pairs),
        groups=tuple(groups),
        union=union,
        constant_m=eq_constant(list(table.values())),
        margin=achieved,
        notes=tuple(notes),
    )


def eq_constant(cross_ratios: list[float]) -> float:
    """The assembly constant 2*max(|log|C|| + 3/2) + max axis distance."""
    logs = [
        abs(math.log(abs(c))) + PAIR_GATE_SLACK
        for c in cross_ratios
        if math.isfinite(c) and abs(c) > 1e-9
    ]
    if not logs:
        return 0.0
    dists = [0.0]
    for c in cross_ratios:
        if math.isfinite(c) and c > 1e-9 and abs(c - 1.0) > 1e-9:
            s = math.sqrt(c)
            dists.append(math.log((s + 1.0) / abs(s - 1.0)))
    return 2.0 * max(logs) + max(dists)


def _point_classes(points: list[BoundaryPoint], tol: float = 1e-9) -> list[list[int]]:
    classes: list[list[int]] = []
    for idx, p in enumerate(points):
        for members in classes:
            if points[members[0]].angular_distance(p) <= tol:
                members.append(idx)
                break
        else:
            classes.append([idx])
    return classes


def _innermost(arcs: list[BoundaryArc], center: BoundaryPoint) -> BoundaryArc:
    """Smallest of a family of nested arcs around one point; rejects non-nesting."""
    ordered = sorted(arcs, key=lambda a: a.span)
    for inner, outer in zip(ordered, ordered[1:]):
        if not _arc_contained(inner, outer):
            raise VerificationFailed("candidate arcs around one fixed point do not nest")
    if not contains(ordered[0], center):
        raise VerificationFailed("innermost arc lost its fixed point")
    return ordered[0]


def _arc_contained(inner: BoundaryArc, outer: BoundaryArc, slack: float = 1e-9) -> bool:
    lead = ccw_gap(outer.start.angle, inner.start.angle)
    return lead <= outer.span + slack and lead + inner.span <= outer.span + slack


def _intersect_around(point: BoundaryPoint, arcs: list[BoundaryArc]) -> BoundaryArc:
    lead = min(ccw_gap(a.start.angle, point.angle) for a in arcs)
    tail = min(ccw_gap(point.angle, a.end.angle) for a in arcs)
    if lead <= 0.0 or tail <= 0.0:
        raise VerificationFailed("intersection around fixed point is empty")
    return BoundaryArc.from_angles(point.angle - lead, point.angle + tail)


def _hull_around(point: BoundaryPoint, arcs: list[BoundaryArc]) -> BoundaryArc:
    lead = max(ccw_gap(a.start.angle, point.angle) for a in arcs)
    tail = max(ccw_gap(point.angle, a.end.angle) for a in arcs)
    if lead + tail >= TWO_PI:
        raise VerificationFailed("hull around fixed point covers the whole circle")
    return BoundaryArc.from_angles(point.angle - lead, point.angle + tail)
