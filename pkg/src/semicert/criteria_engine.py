"""Threshold decision procedures and the certificates they produce.

Everything here is one-sided: a certificate is only emitted when a sufficient
condition verifiably holds, and anything between the bounds is reported as
inconclusive rather than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .boundary_arcs import (
    DEFAULT_MARGIN,
    ArcUnion,
    BoundaryArc,
    can_partition_rank_one,
    ccw_gap,
    contains,
    schottky_margin,
)
from .errors import (
    AxesDoNotCross,
    AxesNotDisjoint,
    CrossRatioOutOfRange,
    InvalidMatrix,
    NotHyperbolic,
    PreconditionViolated,
    SearchExhausted,
    ThresholdNotMet,
    VerificationFailed,
)
from .interval_builder import GlobalIntervalSystem, assemble_global
from .moebius_core import (
    BoundaryPoint,
    Classification,
    MoebiusMap,
    _canonical_sign,
    classify,
    compose,
    power,
)
from .pair_geometry import configuration, cross_ratio_of_points

# Discreteness bound for crossing pairs: cos(3*pi/7), about 0.2225.
JORGENSEN_BOUND = math.cos(3.0 * math.pi / 7.0)
# Crossing-pair translation-length gate for the limit-interval argument.
CROSSING_TAU_LIMIT = 0.2


def h_function(x: float, y: float, d: float) -> float:
    """cosh(d) sinh(x) sinh(y) - cosh(x) cosh(y).

    Half the composed trace of two hyperbolic maps with axes a distance d
    apart (in the cross-ratio-above-1 configuration) evaluated at half the
    translation lengths; negative values near -1 signal elliptic products.
    """
    if d < 0.0 or x < 0.0 or y < 0.0:
        raise ValueError("arguments must be nonnegative")
    return math.cosh(d) * math.sinh(x) * math.sinh(y) - math.cosh(x) * math.cosh(y)


@dataclass(frozen=True)
class HRegion:
    """The distinguished diagonal levels of h at axis distance d.

    a, b, b_prime solve h(t, t, d) = -7/9, -1/2, +1; products landing with
    both half-length multiples in (a, b) are elliptic with trace magnitude
    strictly between 1 and 2.
    """

    d: float

    def __post_init__(self):
        if self.d <= 0.0:
            raise ValueError("axis distance must be positive")

    @property
    def a(self) -> float:
        return math.asinh(1.0 / (3.0 * math.sinh(0.5 * self.d)))

    @property
    def b(self) -> float:
        return math.asinh(1.0 / (2.0 * math.sinh(0.5 * self.d)))

    @property
    def b_prime(self) -> float:
        return math.asinh(1.0 / math.sinh(0.5 * self.d))


def pair_trace_identity_check(f: MoebiusMap, g: MoebiusMap) -> tuple[float, float]:
    """(|tr(f o g)|/2 from matrices, |h(tau_f/2, tau_g/2, d)|); they agree."""
    cfg = configuration(f, g)
    if cfg.kind != "disjoint" or not cfg.nested_attractors:
        raise AxesNotDisjoint(f"configuration is {cfg.kind!r} with C = {cfg.cross_ratio!r}")
    cf, cg = classify(f), classify(g)
    lhs = 0.5 * abs(compose(f, g).trace)
    rhs = abs(h_function(0.5 * cf.tau, 0.5 * cg.tau, cfg.distance))
    return lhs, rhs


# --- thresholds --------------------------------------------------------------


@dataclass(frozen=True)
class PairEntry:
    i: int
    j: int
    cross_ratio: float

    @property
    def in_lower(self) -> bool:
        return math.isfinite(self.cross_ratio) and self.cross_ratio > 1.0

    @property
    def in_upper(self) -> bool:
        return math.isfinite(self.cross_ratio) and abs(self.cross_ratio) > 1e-9


@dataclass(frozen=True)
class Thresholds:
    """Lower and upper translation-length bounds for a generator family."""

    lower: float
    upper: float
    pairs: tuple[PairEntry, ...]

    @staticmethod
    def from_cross_ratios(values: Sequence[float]) -> "Thresholds":
        entries = tuple(PairEntry(-1, -1, float(c)) for c in values)
        return Thresholds(_lower(entries), _upper(entries), entries)

    @staticmethod
    def from_generators(F: Sequence[MoebiusMap]) -> "Thresholds":
        cls = [classify(f) for f in F]
        for idx, k in enumerate(cls):
            if not k.is_hyperbolic:
                raise NotHyperbolic(f"generator {idx} is {k.kind}")
        entries = tuple(
            PairEntry(i, j, cross_ratio_of_points(cls[i].alpha, cls[i].beta, cls[j].alpha, cls[j].beta))
            for i in range(len(cls))
            for j in range(i + 1, len(cls))
        )
        return Thresholds(_lower(entries), _upper(entries), entries)


def _lower(entries: tuple[PairEntry, ...]) -> float:
    terms = [1.0]
    for e in entries:
        if e.in_lower:
            c = e.cross_ratio
            terms.append((c - 1.0) / (c + 3.0))
    return 0.2 * min(terms)


def _upper(entries: tuple[PairEntry, ...]) -> float:
    terms = [0.0]
    for e in entries:
        if e.in_upper:
            c = e.cross_ratio
            terms.append(abs(math.log(abs(c * (c - 1.0)))))
    return 4.0 * max(terms) + 23.0


# --- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class NotSemidiscrete:
    """Witness that the generated semigroup is not semidiscrete."""

    criterion: dict
    witness_word: tuple[tuple[int, int], ...] | None = None  # (generator, exponent)
    trace: float | None = None
    kind: str = field(default="not_semidiscrete", init=False)


@dataclass(frozen=True)
class SemidiscreteInverseFree:
    """Verified interval system: the semigroup is semidiscrete and inverse-free."""

    system: GlobalIntervalSystem
    thresholds: Thresholds | None = None
    kind: str = field(default="semidiscrete_inverse_free", init=False)


@dataclass(frozen=True)
class RankOneSchottky:
    """Single verified interval mapped strictly inside itself by every generator."""

    interval: BoundaryArc
    margin: float
    kind: str = field(default="rank_one_schottky", init=False)


@dataclass(frozen=True)
class Inconclusive:
    """Neither sufficient condition fired; the report says how far off each is."""

    report: dict
    kind: str = field(default="inconclusive", init=False)


Certificate = NotSemidiscrete | SemidiscreteInverseFree | RankOneSchottky | Inconclusive


# --- two-generator tests ------------------------------------------------------


def elliptic_witness_disjoint(f: MoebiusMap, g: MoebiusMap) -> tuple[int, int, float]:
    """Smallest (m + n) with f^m o g^n elliptic, located through the h levels.

    Scans exponent pairs in increasing m + n until h at the half-length
    multiples lands in (-1, -1/2); the returned trace comes from the actual
    matrix product and satisfies 1 < |tr| < 2.
    """
    cfg = configuration(f, g)
    if cfg.kind != "disjoint" or not cfg.nested_attractors:
        raise AxesNotDisjoint(f"configuration is {cfg.kind!r} with C = {cfg.cross_ratio!r}")
    d = cfg.distance
    tau_f, tau_g = classify(f).tau, classify(g).tau
    region = HRegion(d)
    bound = max(64, math.ceil(4.0 * region.b / min(tau_f, tau_g)))
    for total in range(2, 2 * bound + 1):
        for m in range(max(1, total - bound), min(bound, total - 1) + 1):
            n = total - m
            value = h_function(0.5 * m * tau_f, 0.5 * n * tau_g, d)
            if -1.0 < value < -0.5:
                trace = compose(power(f, m), power(g, n)).trace
                if abs(abs(trace) - 2.0 * abs(value)) > 1e-8 * (1.0 + abs(trace)):
                    raise VerificationFailed(
                        "matrix trace disagrees with the h prediction"
                    )
                return m, n, trace
    raise SearchExhausted(
        f"no elliptic power combination up to exponent {bound}; "
        "the pair is outside the small-translation regime"
    )


def two_gen_disjoint_test(f: MoebiusMap, g: MoebiusMap, margin: float = DEFAULT_MARGIN) -> Certificate:
    """Decision for a pair with cross ratio above 1: witness, intervals, or neither."""
    cfg = configuration(f, g)
    if cfg.kind != "disjoint" or not cfg.nested_attractors:
        raise CrossRatioOutOfRange(f"cross ratio {cfg.cross_ratio!r} is not above 1")
    c = cfg.cross_ratio
    tau_f, tau_g = classify(f).tau, classify(g).tau
    t_low = 0.2 * (c - 1.0) / (c + 3.0)
    t_high = math.log(c) + 1.5
    if tau_f < t_low and tau_g < t_low:
        m, n, trace = elliptic_witness_disjoint(f, g)
        return NotSemidiscrete(
            criterion={
                "rule": "disjoint_pair_elliptic_power",
                "cross_ratio": c,
                "pair_bound": t_low,
            },
            witness_word=((0, m), (1, n)),
            trace=trace,
        )
    if tau_f > t_high and tau_g > t_high:
        system = assemble_global([f, g], margin=margin)
        return SemidiscreteInverseFree(system=system, thresholds=Thresholds.from_generators([f, g]))
    return Inconclusive(
        report={
            "reason": "translation lengths between the pair bounds",
            "cross_ratio": c,
            "lower": t_low,
            "upper": t_high,
            "taus": [tau_f, tau_g],
        }
    )


def cos_phi(tau: float, theta: float) -> float:
    """Cosine of the angle between the image of one crossing endpoint and the axis."""
    return (math.sinh(tau) + math.cosh(tau) * math.cos(theta)) / (
        math.cosh(tau) + math.sinh(tau) * math.cos(theta)
    )


def crossing_limit_interval(f: MoebiusMap, g: MoebiusMap) -> BoundaryArc:
    """The attractor-to-attractor arc filled by forward orbits of a crossing pair.

    Requires both translation lengths below 1/5; the covering condition is
    certified through the angle inequality cos(phi) < cos(theta/2) for both
    generators.
    """
    cfg = configuration(f, g)
    if cfg.kind != "crossing":
        raise AxesDoNotCross(f"cross ratio {cfg.cross_ratio!r} is not negative")
    cf, cg = classify(f), classify(g)
    for tau in (cf.tau, cg.tau):
        if tau >= CROSSING_TAU_LIMIT:
            raise ThresholdNotMet(
                f"translation length {tau:.6f} not below {CROSSING_TAU_LIMIT}"
            )
    theta = cfg.theta
    bound = math.cos(0.5 * theta)
    if cos_phi(cf.tau, theta) >= bound or cos_phi(cg.tau, theta) >= bound:
        raise VerificationFailed("angle condition failed below the stated gate")
    arc = BoundaryArc(cf.alpha, cg.alpha)
    if contains(arc, cf.beta) or contains(arc, cg.beta):
        arc = BoundaryArc(cg.alpha, cf.alpha)
        if contains(arc, cf.beta) or contains(arc, cg.beta):
            raise AxesDoNotCross("fixed points do not interleave")
    return arc


def triple_crossing_test(
    f: MoebiusMap, g: MoebiusMap, hgen: MoebiusMap, owners: tuple[int, int, int] = (0, 1, 2)
) -> Certificate:
    """Nondiscreteness from a crossing pair plus a repelling point in its limit arc."""
    try:
        arc = crossing_limit_interval(f, g)
    except (ThresholdNotMet, AxesDoNotCross) as exc:
        raise PreconditionViolated(str(exc)) from exc
    ch = classify(hgen)
    if not ch.is_hyperbolic:
        raise PreconditionViolated(f"third generator is {ch.kind}")
    if not contains(arc, ch.beta):
        raise PreconditionViolated(
            "repelling point of the third generator lies outside the limit interval"
        )
    cfg = configuration(f, g)
    cf, cg = classify(f), classify(g)
    product = math.sinh(0.5 * cf.tau) * math.sinh(0.5 * cg.tau) * math.sin(cfg.theta)
    if product >= JORGENSEN_BOUND:
        raise PreconditionViolated("discreteness product is not below cos(3*pi/7)")
    return NotSemidiscrete(
        criterion={
            "rule": "crossing_pair_with_interleaved_repeller",
            "pair": [owners[0], owners[1]],
            "interleaved": owners[2],
            "angle": cfg.theta,
            "limit_interval": arc_to_dict(arc),
            "discreteness_product": product,
            "discreteness_bound": JORGENSEN_BOUND,
        }
    )


# --- the main decision procedure ---------------------------------------------


def certify(F: Sequence[MoebiusMap], margin: float = DEFAULT_MARGIN) -> Certificate:
    """Decide semidiscreteness of the generated semigroup where the criteria apply.

    Order of business: verified single-interval (rank-one) certificates
    first, then the preconditions, then the interval system when every
    translation length clears the upper threshold, then the nondiscreteness
    witness scan, and otherwise a full inconclusive report.
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
    rank_one = find_rank_one_interval(maps, cls)
    if rank_one is not None:
        arc, achieved = rank_one
        return RankOneSchottky(interval=arc, margin=achieved)
    for i, ki in enumerate(cls):
        for j, kj in enumerate(cls):
            if ki.alpha.approx(kj.beta):
                raise PreconditionViolated(
                    f"attracting point of generator {i} meets repelling point of {j}"
                )
    thresholds = Thresholds.from_generators(maps)
    taus = [k.tau for k in cls]
    notes: list[str] = []
    if all(tau > thresholds.upper for tau in taus):
        try:
            system = assemble_global(maps, margin=margin)
            return SemidiscreteInverseFree(system=system, thresholds=thresholds)
        except (PreconditionViolated, VerificationFailed) as exc:
            notes.append(f"interval assembly failed: {exc}")
    witness = _witness_scan(maps, cls)
    if witness is not None:
        return witness
    return Inconclusive(report=_report(cls, thresholds, notes))


def _witness_scan(maps: list[MoebiusMap], cls: list[Classification]) -> Certificate | None:
    n = len(maps)
    table = {
        (i, j): cross_ratio_of_points(cls[i].alpha, cls[i].beta, cls[j].alpha, cls[j].beta)
        for i in range(n)
        for j in range(i + 1, n)
    }
    for (i, j), c in sorted(table.items()):
        if not (math.isfinite(c) and c > 1.0):
            continue
        t_low = 0.2 * (c - 1.0) / (c + 3.0)
        if cls[i].tau < t_low and cls[j].tau < t_low:
            m, e_n, trace = elliptic_witness_disjoint(maps[i], maps[j])
            return NotSemidiscrete(
                criterion={
                    "rule": "disjoint_pair_elliptic_power",
                    "pair": [i, j],
                    "cross_ratio": c,
                    "pair_bound": t_low,
                },
                witness_word=((i, m), (j, e_n)),
                trace=trace,
            )
    for (i, j), c in sorted(table.items()):
        if not (math.isfinite(c) and c < 0.0):
            continue
        if cls[i].tau >= CROSSING_TAU_LIMIT or cls[j].tau >= CROSSING_TAU_LIMIT:
            continue
        arc = crossing_limit_interval(maps[i], maps[j])
        for k in range(n):
            if k in (i, j):
                continue
            if contains(arc, cls[k].beta):
                return triple_crossing_test(maps[i], maps[j], maps[k], owners=(i, j, k))
    return None


def _report(cls: list[Classification], thresholds: Thresholds, notes: list[str]) -> dict:
    return {
        "reason": "no sufficient condition fired",
        "lower": thresholds.lower,
        "upper": thresholds.upper,
        "generators": [
            {
                "index": idx,
                "tau": k.tau,
                "below_lower": k.tau < thresholds.lower,
                "above_upper": k.tau > thresholds.upper,
            }
            for idx, k in enumerate(cls)
        ],
        "pairs": [
            {
                "i": e.i,
                "j": e.j,
                "cross_ratio": e.cross_ratio,
                "in_lower": e.in_lower,
                "in_upper": e.in_upper,
            }
            for e in thresholds.pairs
        ],
        "notes": notes,
    }


# --- rank-one detection --------------------------------------------------------


def find_rank_one_interval(
    maps: list[MoebiusMap], cls: list[Classification], tol: float = 1e-9
) -> tuple[BoundaryArc, float] | None:
    """A single interval every generator maps strictly inside itself, if one exists.

    Candidate endpoints are points where an attracting and a repelling fixed
    point coincide (the interval may end there) and midpoints of the gaps
    between consecutive distinct fixed points; every candidate interval that
    covers the attractors and avoids the repellers is then verified.
    """
    merged: list[tuple[BoundaryPoint, bool, bool]] = []
    for k in cls:
        merged = _tag(merged, k.alpha, is_alpha=True, tol=tol)
        merged = _tag(merged, k.beta, is_alpha=False, tol=tol)
    shared = [p for p, a, b in merged if a and b]
    alphas = [p for p, a, _ in merged if a]
    betas = [p for p, _, b in merged if b]
    if not shared and not can_partition_rank_one(alphas, betas, tol=tol):
        return None
    ordered = sorted((p for p, _, _ in merged), key=lambda p: p.angle)
    candidates = list(shared)
    for cur, nxt in zip(ordered, ordered[1:] + ordered[:1]):
        gap = ccw_gap(cur.angle, nxt.angle)
        if gap > tol:
            candidates.append(BoundaryPoint.from_angle(cur.angle + 0.5 * gap))
    candidates.sort(key=lambda p: p.angle)
    for u in candidates:
        for v in candidates:
            if u is v:
                continue
            arc = BoundaryArc(u, v)
            if not all(contains(arc, p) or p.approx(u, tol) or p.approx(v, tol) for p in alphas):
                continue
            if any(contains(arc, p) for p in betas):
                continue
            achieved = schottky_margin(maps, ArcUnion([arc]))
            if achieved >= 0.0:
                return arc, achieved
    return None


def _tag(
    merged: list[tuple[BoundaryPoint, bool, bool]], p: BoundaryPoint, is_alpha: bool, tol: float
) -> list[tuple[BoundaryPoint, bool, bool]]:
    for idx, (q, a, b) in enumerate(merged):
        if q.angular_distance(p) <= tol:
            merged[idx] = (q, a or is_alpha, b or not is_alpha)
            return merged
    merged.append((p, is_alpha, not is_alpha))
    return merged


# --- cocycle bridge -------------------------------------------------------------


def uniform_hyperbolicity(
    matrices: Sequence[Sequence[float]], margin: float = DEFAULT_MARGIN
) -> ArcUnion | None:
    """Multicone certificate for a matrix tuple, when the sufficient test applies.

    Accepts raw 2x2 matrices (flat or nested, any positive determinant scale).
    Returns a union every matrix maps with closure into the interior, or None
    when this test is silent; None is never a disproof.
    """
    maps = []
    for idx, raw in enumerate(matrices):
        entries = _flatten_matrix(raw, idx)
        f = map_from_unit_matrix(entries, idx)
        if f is None:
            return None  # orientation-reversing member: outside this test
        maps.append(f)
    if not maps:
        raise InvalidMatrix("empty tuple")
    if any(not classify(f).is_hyperbolic for f in maps):
        return None
    try:
        cert = certify(maps, margin=margin)
    except PreconditionViolated:
        return None
    if isinstance(cert, SemidiscreteInverseFree):
        return cert.system.union
    if isinstance(cert, RankOneSchottky) and cert.margin >= margin:
        return ArcUnion([cert.interval])
    return None


def map_from_unit_matrix(entries: list[float], idx: int = 0) -> MoebiusMap | None:
    """Map for a matrix promised to have |det| = 1; None when det is negative.

    For entries so large that the determinant drowns in rounding (a det-1
    matrix with translation length 40 already does), the promise is trusted
    and the entries are used as given.
    """
    a, b, c, d = entries
    if not all(math.isfinite(v) for v in entries):
        raise InvalidMatrix(f"matrix {idx} has non-finite entries")
    det = float(Fraction(a) * Fraction(d) - Fraction(b) * Fraction(c))
    scale2 = max(a * a, b * b, c * c, d * d)
    if abs(det) > 1e-9 * scale2:
        if det < 0.0:
            return None
        return MoebiusMap.from_matrix(a, b, c, d)
    if scale2 > 1e12:
        return _canonical_sign(a, b, c, d)
    raise InvalidMatrix(f"matrix {idx} is singular (determinant {det!r})")


def _flatten_matrix(raw, idx: int) -> list[float]:
    try:
        seq = list(raw)
        if len(seq) == 2:
            seq = [*seq[0], *seq[1]]
        out = [float(v) for v in seq]
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"matrix {idx} is malformed: {raw!r}") from exc
    if len(out) != 4:
        raise InvalidMatrix(f"matrix {idx} must have four entries")
    return out


# --- serialization ---------------------------------------------------------------


def point_to_dict(p: BoundaryPoint) -> dict:
    value = p.value
    return {"angle": p.angle, "value": "inf" if math.isinf(value) else value}


def arc_to_dict(arc: BoundaryArc) -> dict:
    return {"start": point_to_dict(arc.start), "end": point_to_dict(arc.end)}


def union_to_dict(union: ArcUnion) -> list[dict]:
    return [arc_to_dict(a) for a in union]


def certificate_to_dict(cert: Certificate, version: str = "") -> dict:
    out: dict = {"schema": 1, "kind": cert.kind}
    if version:
        out["tool_version"] = version
    if isinstance(cert, NotSemidiscrete):
        out["criterion"] = cert.criterion
        if cert.witness_word is not None:
            out["witness_word"] = [list(t) for t in cert.witness_word]
        if cert.trace is not None:
            out["trace"] = cert.trace
    elif isinstance(cert, SemidiscreteInverseFree):
        out["union"] = union_to_dict(cert.system.union)
        out["margin"] = cert.system.margin
        out["assembly_constant"] = cert.system.constant_m
        out["pairs"] = [
            {"owner": p.owner, "a": arc_to_dict(p.a), "b": arc_to_dict(p.b)}
            for p in cert.system.pairs
        ]
        out["notes"] = list(cert.system.notes)
        if cert.thresholds is not None:
            out["lower"] = cert.thresholds.lower
            out["upper"] = cert.thresholds.upper
    elif isinstance(cert, RankOneSchottky):
        out["interval"] = arc_to_dict(cert.interval)
        out["margin"] = cert.margin
    elif isinstance(cert, Inconclusive):
        out["report"] = cert.report
    return out
