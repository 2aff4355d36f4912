"""Arcs on the circle at infinity, their images, and strict containment.

All arc arithmetic happens in disc-model angle coordinates so that infinity
needs no special casing.  An arc is the open set swept counterclockwise from
its start point to its end point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import OverlappingArcs
from .moebius_core import TWO_PI, BoundaryPoint, MoebiusMap, apply_boundary

# Verification margin below which a certificate is not trusted.
DEFAULT_MARGIN = 1e-7


@dataclass(frozen=True)
class BoundaryArc:
    """Open arc from `start` counterclockwise to `end` (never the full circle)."""

    start: BoundaryPoint
    end: BoundaryPoint

    def __post_init__(self):
        if self.start.angular_distance(self.end) == 0.0:
            raise ValueError("arc endpoints coincide")

    @staticmethod
    def from_reals(start: float, end: float) -> "BoundaryArc":
        return BoundaryArc(BoundaryPoint.from_real(start), BoundaryPoint.from_real(end))

    @staticmethod
    def from_angles(start: float, end: float) -> "BoundaryArc":
        return BoundaryArc(BoundaryPoint.from_angle(start), BoundaryPoint.from_angle(end))

    @property
    def span(self) -> float:
        return (self.end.angle - self.start.angle) % TWO_PI

    @property
    def midpoint(self) -> BoundaryPoint:
        return BoundaryPoint.from_angle(self.start.angle + 0.5 * self.span)

    def approx(self, other: "BoundaryArc", tol: float = 0.0) -> bool:
        return self.start.approx(other.start, tol) and self.end.approx(other.end, tol)


def ccw_gap(from_angle: float, to_angle: float) -> float:
    """Counterclockwise angular distance in [0, 2*pi)."""
    return (to_angle - from_angle) % TWO_PI


def contains(arc: BoundaryArc, p: BoundaryPoint) -> bool:
    """Strict membership in the open arc."""
    offset = ccw_gap(arc.start.angle, p.angle)
    return 0.0 < offset < arc.span


def arc_image(f: MoebiusMap, arc: BoundaryArc) -> BoundaryArc:
    # Orientation-preserving maps of the circle send the ccw arc between the
    # endpoint images to the image of the arc.
    return BoundaryArc(apply_boundary(f, arc.start), apply_boundary(f, arc.end))


def complement(arc: BoundaryArc) -> BoundaryArc:
    """Open arc from end to start; together they miss only the two endpoints."""
    return BoundaryArc(arc.end, arc.start)


def arc_between(p: BoundaryPoint, q: BoundaryPoint, containing: BoundaryPoint) -> BoundaryArc:
    """The one of the two arcs with endpoints {p, q} that contains `containing`."""
    arc = BoundaryArc(p, q)
    if contains(arc, containing):
        return arc
    arc = BoundaryArc(q, p)
    if not contains(arc, containing):
        raise ValueError("reference point lies on the arc boundary")
    return arc


class ArcUnion:
    """Finite union of open arcs with pairwise disjoint closures.

    Arcs are kept sorted by start angle; overlapping input is rejected rather
    than merged, since overlap always signals an upstream construction bug.
    """

    __slots__ = ("arcs",)

    def __init__(self, arcs: Iterable[BoundaryArc]):
        ordered = sorted(arcs, key=lambda a: a.start.angle)
        if not ordered:
            raise ValueError("arc union must contain at least one arc")
        if len(ordered) > 1:
            for cur, nxt in zip(ordered, ordered[1:] + ordered[:1]):
                # The closure of `cur` must end strictly before `nxt` begins.
                if ccw_gap(cur.start.angle, nxt.start.angle) <= cur.span:
                    raise OverlappingArcs(
                        f"arc closures intersect near angle {cur.end.angle:.6f}"
                    )
        self.arcs = tuple(ordered)

    def __iter__(self):
        return iter(self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    def approx(self, other: "ArcUnion", tol: float = 0.0) -> bool:
        return len(self) == len(other) and all(
            a.approx(b, tol) for a, b in zip(self.arcs, other.arcs)
        )

    def locate(self, arc: BoundaryArc) -> tuple[BoundaryArc, float, float] | None:
        """Component containing `arc` plus the two endpoint clearances, if any."""
        for outer in self.arcs:
            lead = ccw_gap(outer.start.angle, arc.start.angle)
            if lead <= outer.span:
                tail = outer.span - lead - arc.span
                if arc.span <= outer.span and tail >= 0.0:
                    return outer, lead, tail
        return None


def strictly_inside(inner: ArcUnion, outer: ArcUnion, margin: float = 0.0) -> bool:
    """closure(inner) inside outer with angular clearance >= margin per endpoint.

    At margin 0 one endpoint of an inner arc may coincide with the enclosing
    endpoint, as long as the containment stays proper: that is exactly the
    situation of an invariant interval whose endpoint is a fixed point.  An
    arc equal to a whole component is never strictly inside.
    """
    for arc in inner:
        found = outer.locate(arc)
        if found is None:
            return False
        _, lead, tail = found
        if lead < margin or tail < margin or lead + tail == 0.0:
            return False
    return True


def image_clearances(
    f: MoebiusMap, arc: BoundaryArc, outer: BoundaryArc
) -> tuple[float, float] | None:
    """Endpoint clearances of the image of `arc` under f inside `outer`.

    Works on endpoint angles directly, so images contracted below float
    angular resolution (endpoints rounding to one point) are still checked;
    a midpoint image guards against mistaking a wrapped arc for a tiny one.
    Returns None when the image is not contained in `outer`.
    """
    p = apply_boundary(f, arc.start).angle
    q = apply_boundary(f, arc.end).angle
    mid = apply_boundary(f, arc.midpoint).angle
    img = ccw_gap(p, q)
    if img >= TWO_PI - 1e-9:
        img = 0.0  # endpoints collapsed by rounding
    off = ccw_gap(p, mid)
    if off >= TWO_PI - 1e-9:
        off = 0.0  # midpoint rounded just behind the start
    if off > img + 1e-9:
        return None
    span = outer.span
    lead = ccw_gap(outer.start.angle, p)
    tail = ccw_gap(q, outer.end.angle)
    if lead > span or tail > span or abs(lead + img + tail - span) > 1e-9:
        return None
    return lead, tail


def verify_schottky(
    generators: Sequence[MoebiusMap], union: ArcUnion, margin: float = DEFAULT_MARGIN
) -> bool:
    """Check that every generator maps every arc of the union strictly inside it.

    This is the final, construction-independent certificate check: it looks
    only at endpoint images and angular clearances.
    """
    return schottky_margin(generators, union) >= margin


def schottky_margin(generators: Sequence[MoebiusMap], union: ArcUnion) -> float:
    """Smallest endpoint clearance over all generator images, -inf on failure."""
    worst = math.inf
    for f in generators:
        for arc in union:
            best = -math.inf
            for outer in union:
                found = image_clearances(f, arc, outer)
                if found is not None and found[0] + found[1] > 0.0:
                    best = min(found)
                    break
            if best == -math.inf:
                return -math.inf
            worst = min(worst, best)
    return worst


def can_partition_rank_one(
    alphas: Sequence[BoundaryPoint], betas: Sequence[BoundaryPoint], tol: float = 1e-12
) -> bool:
    """Whether two complementary arcs separate the alphas from the betas.

    Points are deduplicated per side; a point appearing on both sides makes
    separation impossible by convention and yields False.
    """
    if not alphas or not betas:
        raise ValueError("both point lists must be nonempty")
    a_pts = _dedupe(alphas, tol)
    b_pts = _dedupe(betas, tol)
    for p in a_pts:
        for q in b_pts:
            if p.angular_distance(q) <= tol:
                return False
    labeled = sorted(
        [(p.angle, 0) for p in a_pts] + [(q.angle, 1) for q in b_pts], key=lambda t: t[0]
    )
    changes = sum(1 for cur, nxt in zip(labeled, labeled[1:] + labeled[:1]) if cur[1] != nxt[1])
    return changes == 2


def _dedupe(points: Sequence[BoundaryPoint], tol: float) -> list[BoundaryPoint]:
    out: list[BoundaryPoint] = []
    for p in points:
        if not any(p.angular_distance(q) <= tol for q in out):
            out.append(p)
    return out
