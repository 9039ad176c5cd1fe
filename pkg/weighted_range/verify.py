"""
Numerical checks of the boundary-coincidence theorems and their corollaries.

Each check returns a TheoremReport. A report's verdict is INCONSISTENT only
when the hypothesis was observed to hold and the promised common c-value (or
other conclusion) was not found; that outcome marks a numerical
counterexample candidate, never an expected result.
"""

import logging
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import core
from .cvalues import (
    CommonValue,
    check_guards,
    common_cvalue,
    common_root_residual,
    common_values_to_json,
    cvalue_set,
    degree,
    min_separation,
    multiplicity,
)
from .errors import DegenerateConfiguration, DegenerateRegion, NoSignChange
from .region import (
    TWO_PI,
    ArcFit,
    RegionKind,
    boundary_distance,
    boundary_intersections,
    build_region,
    common_supporting_angle,
    curved_runs,
    detect_sharp_points,
    fit_circle,
    fit_ellipse,
    hausdorff_distance,
    sharp_threshold,
)
from .support import (
    DEFAULT_GRID,
    WeightsLike,
    as_weights,
    c_numerical_weights,
    check_dimensions,
    find_equal_support_angles,
    weighted_support,
)

logger = logging.getLogger(__name__)

DEFAULT_SEED = 0x5EED

CIRCLE_CENTER_TOL = 1e-5
ELLIPSE_FOCUS_TOL = 1e-4
SHARP_MATCH_TOL = 1e-6
NILPOTENT_CENTER_TOL = 1e-5
NILPOTENT_EIGEN_TOL = 1e-6
EQUAL_RANGE_TOL = 1e-6
OVERLAP_TOL = 1e-7
OVERLAP_MIN_RUN = 32
SEPARATION_TOL = 1e-3
TOUCH_TOL = 1e-6
PROJECTIVE_TOL = 1e-7


class Verdict(str, Enum):
    HYPOTHESIS_MET = "ConsistentHypothesisMet"
    HYPOTHESIS_NOT_MET = "ConsistentHypothesisNotMet"
    INCONSISTENT = "INCONSISTENT"


class HypothesisStatus(str, Enum):
    VERIFIED = "verified"
    SAMPLED = "sampled"
    ASSUMED = "assumed"


@dataclass
class TheoremReport:
    theorem: str
    bound: int = 0
    crossing: int = 0
    tangential: int = 0
    identically_zero: bool = False
    hypothesis_met: bool = False
    common_values: List[CommonValue] = field(default_factory=list)
    verdict: Verdict = Verdict.HYPOTHESIS_NOT_MET
    seed: int = DEFAULT_SEED
    grid_n: int = DEFAULT_GRID
    hypothesis_status: HypothesisStatus = HypothesisStatus.VERIFIED
    notes: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def inconsistent(self) -> bool:
        return self.verdict is Verdict.INCONSISTENT

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "bound": self.bound,
            "angles": {
                "crossing": self.crossing,
                "tangential": self.tangential,
                "identically_zero": self.identically_zero,
            },
            "hypothesis_met": self.hypothesis_met,
            "common_values": common_values_to_json(self.common_values),
            "verdict": self.verdict.value,
            "seed": self.seed,
            "gridN": self.grid_n,
            "hypothesis_status": self.hypothesis_status.value,
            "notes": list(self.notes),
            "details": self.details,
        }


def decide(hypothesis_met: bool, conclusion_holds: bool) -> Verdict:
    if not hypothesis_met:
        return Verdict.HYPOTHESIS_NOT_MET
    return Verdict.HYPOTHESIS_MET if conclusion_holds else Verdict.INCONSISTENT


def distinct_angles(angles: Sequence[float], grid_n: int) -> List[float]:
    """Angles on the circle with neighbours closer than 2pi/grid_n merged."""
    if len(angles) == 0:
        return []
    tol = TWO_PI / grid_n
    ordered = np.sort(np.mod(np.asarray(angles, dtype=float), TWO_PI))
    kept = [float(ordered[0])]
    for t in ordered[1:]:
        if t - kept[-1] >= tol:
            kept.append(float(t))
    if len(kept) > 1 and kept[0] + TWO_PI - kept[-1] < tol:
        kept.pop()
    return kept


def _same_projective_root(a, c, s: float, t: float, grid_n: int) -> bool:
    """(e^{it}, e^{-it}, 2h(t)) is a nonzero multiple of (e^{is}, e^{-is}, 2h(s))."""
    if abs(np.angle(np.exp(1j * (t - s - np.pi)))) >= TWO_PI / grid_n:
        return False
    scale = 1.0 + float(np.sum(np.abs(c.c))) * core.matrix_scale(a)
    return abs(weighted_support(a, c, t) + weighted_support(a, c, s)) <= PROJECTIVE_TOL * scale


def projective_angles(a, c, angles: Sequence[float], grid_n: int, keep: Sequence[float] = ()) -> List[float]:
    """Drop angles whose antipode already stands for the same projective root.

    At an equal-support angle the two supports agree, so checking A alone
    decides the common root of both r-polynomials. Angles in ``keep`` are
    taken as already counted.
    """
    counted = list(keep)
    kept = []
    for t in angles:
        if any(_same_projective_root(a, c, s, t, grid_n) for s in counted):
            continue
        counted.append(t)
        kept.append(t)
    return kept


def _pair(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _fit_json(fit: ArcFit) -> dict:
    return {
        "kind": fit.kind.value,
        "center": _pair(fit.center),
        "semi_axes": [fit.semi_major, fit.semi_minor],
        "foci": [_pair(f) for f in fit.foci],
        "residual": fit.residual,
    }


def _prepare(a, c: WeightsLike):
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    check_guards(a.shape[0], c)
    return a, c


def _bezout_bound(a, c, b, d) -> int:
    return degree(c, a.shape[0]).degree * degree(d, b.shape[0]).degree


# ---------------------------------------------------------------------------
# Main theorem and its supporting-line and boundary-point forms
# ---------------------------------------------------------------------------

def verify_theorem_main(a, c: WeightsLike, b, d: WeightsLike, grid_n: int = DEFAULT_GRID,
                        seed: int = DEFAULT_SEED) -> TheoremReport:
    """Equal weighted supports at more than deg(A;c) deg(B;d) angles force a common value."""
    a, c = _prepare(a, c)
    b, d = _prepare(b, d)
    bound = _bezout_bound(a, c, b, d)
    roots = find_equal_support_angles(a, c, b, d, grid_n)
    crossing = projective_angles(a, c, distinct_angles(roots.crossing, grid_n), grid_n)
    tangential = [
        t for t in distinct_angles(roots.tangential, grid_n)
        if all(abs(np.angle(np.exp(1j * (t - s)))) >= TWO_PI / grid_n for s in crossing)
    ]
    tangential = projective_angles(a, c, tangential, grid_n, keep=crossing)
    count = len(crossing) + len(tangential)
    hypothesis = roots.identically_zero or bool(roots.zero_arcs) or count >= bound + 1
    common = common_cvalue(a, c, b, d)

    angles = sorted(crossing + tangential)
    residuals = []
    for theta in angles[:16]:
        value = weighted_support(a, c, theta)
        residuals.append(max(common_root_residual(a, c, theta, value), common_root_residual(b, d, theta, value)))

    report = TheoremReport(
        theorem="main",
        bound=bound,
        crossing=len(crossing),
        tangential=len(tangential),
        identically_zero=roots.identically_zero,
        hypothesis_met=hypothesis,
        common_values=common,
        verdict=decide(hypothesis, bool(common)),
        seed=seed,
        grid_n=grid_n,
        hypothesis_status=HypothesisStatus.ASSUMED,
        notes=["irreducibility of r(A;c) and r(B;d) is assumed, not checked"],
        details={
            "equal_support_angles": angles,
            "zero_arcs": [list(arc) for arc in roots.zero_arcs],
            "common_root_residual": max(residuals, default=0.0),
        },
    )
    if roots.zero_arcs:
        report.notes.append("supports agree on whole arcs")
    logger.info("main theorem: %d angles against bound %d -> %s", count, bound, report.verdict.value)
    return report


def _region_support(region, theta: float) -> float:
    return float(np.max(np.real(np.exp(1j * theta) * region.vertices)))


def _touching_vertex(region, theta: float, h: float) -> Optional[int]:
    """Index of a vertex on the line Re(e^{i theta} v) = h, if the line supports the region."""
    if region.empty:
        return None
    tol = TOUCH_TOL * region.scale
    if region.grid_n:
        tol += region.diameter * TWO_PI / region.grid_n
    values = np.real(np.exp(1j * theta) * region.vertices)
    k = int(np.argmax(values))
    return k if abs(values[k] - h) <= tol else None


def verify_supporting_lines(a, c: WeightsLike, b, d: WeightsLike, grid_n: int = DEFAULT_GRID,
                            seed: int = DEFAULT_SEED) -> TheoremReport:
    """Common supporting lines of W(A;c) and W(B;d) against the Bezout bound.

    A line Re(e^{i theta} v) = h is taken as a supporting line of both
    regions only when it actually touches both. With unsorted weights the
    check applies only if every such line touches away from sharp points.
    """
    a, c = _prepare(a, c)
    b, d = _prepare(b, d)
    bound = _bezout_bound(a, c, b, d)
    region_a = build_region(a, c, grid_n)
    region_b = build_region(b, d, grid_n)
    roots = find_equal_support_angles(a, c, b, d, grid_n)
    sorted_weights = c.is_sorted_desc and d.is_sorted_desc

    if roots.identically_zero or roots.zero_arcs:
        candidates = list(np.linspace(0.0, TWO_PI, grid_n, endpoint=False))
    else:
        candidates = projective_angles(a, c, distinct_angles(roots.angles, grid_n), grid_n)

    lines = []
    applicable = True
    for theta in candidates:
        h = weighted_support(a, c, theta)
        ka = _touching_vertex(region_a, theta, h)
        kb = _touching_vertex(region_b, theta, h)
        if ka is None or kb is None:
            continue
        lines.append(theta)
        if not sorted_weights:
            for region, k in ((region_a, ka), (region_b, kb)):
                _, width = region.normal_cones()
                if region.kind is not RegionKind.FULL_2D or width[k] > sharp_threshold(region.grid_n):
                    applicable = False

    common = common_cvalue(a, c, b, d)
    notes = ["irreducibility of r(A;c) and r(B;d) is assumed, not checked"]
    if not applicable:
        notes.append("not applicable: a common supporting line meets a sharp point with unsorted weights")
    whole = roots.identically_zero or bool(roots.zero_arcs)
    hypothesis = applicable and (len(lines) >= bound + 1 or (whole and len(lines) > 0))
    return TheoremReport(
        theorem="lines",
        bound=bound,
        crossing=len(lines) if not whole else 0,
        identically_zero=roots.identically_zero,
        hypothesis_met=hypothesis,
        common_values=common,
        verdict=decide(hypothesis, bool(common)),
        seed=seed,
        grid_n=grid_n,
        hypothesis_status=HypothesisStatus.ASSUMED,
        notes=notes,
        details={
            "applicable": applicable,
            "sorted_weights": sorted_weights,
            "supporting_lines": len(lines),
        },
    )


def verify_boundary_points(a, c: WeightsLike, b, d: WeightsLike, grid_n: int = DEFAULT_GRID,
                           seed: int = DEFAULT_SEED) -> TheoremReport:
    """Common boundary points, turned into equal-support angles three at a time."""
    a, c = _prepare(a, c)
    b, d = _prepare(b, d)
    region_a = build_region(a, c, grid_n)
    region_b = build_region(b, d, grid_n)
    if not (region_a.is_2d and region_b.is_2d):
        raise DegenerateRegion(
            f"boundary points need 2-D regions, got {region_a.kind.value} and {region_b.kind.value}"
        )
    inter = boundary_intersections(region_a, region_b)
    if inter.full_overlap:
        report = check_equal_ranges(a, c, b, d, grid_n, seed=seed, sort_weights=False)
        report.theorem = "boundary"
        report.notes.append("boundaries coincide; checked as equal ranges")
        return report

    bound = _bezout_bound(a, c, b, d)
    points = list(inter.points)
    phis = []
    skipped = 0
    if len(points) >= 3:
        for k in range(len(points)):
            z1, z2, z3 = points[k], points[(k + 1) % len(points)], points[(k + 2) % len(points)]
            try:
                phis.append(common_supporting_angle(a, c, b, d, z1, z2, z3).phi)
            except (NoSignChange, ValueError) as e:
                skipped += 1
                logger.warning("boundary points: skipped triple %d: %s", k, e)

    angles = distinct_angles(phis, grid_n)
    hypothesis = len(angles) >= bound + 1
    common = common_cvalue(a, c, b, d)
    report = TheoremReport(
        theorem="boundary",
        bound=bound,
        crossing=len(angles),
        hypothesis_met=hypothesis,
        common_values=common,
        verdict=decide(hypothesis, bool(common)),
        seed=seed,
        grid_n=grid_n,
        hypothesis_status=HypothesisStatus.ASSUMED,
        notes=["irreducibility of r(A;c) and r(B;d) is assumed, not checked"],
        details={
            "boundary_points": [_pair(z) for z in points],
            "overlap_segments": len(inter.overlaps),
            "supporting_angles": angles,
            "skipped_triples": skipped,
        },
    )
    if inter.overlaps:
        report.notes.append("shared boundary segments were excluded from the count")
    return report


# ---------------------------------------------------------------------------
# Corollaries
# ---------------------------------------------------------------------------

def _arc_candidates(region, need: int) -> List[np.ndarray]:
    runs = [run for run in curved_runs(region) if run.size >= need]
    if region.is_2d and len(region) >= need and not any(run.size == len(region) for run in runs):
        runs.append(region.vertices)
    return runs


def check_circle_corollary(a, c: WeightsLike, grid_n: int = DEFAULT_GRID, seed: int = DEFAULT_SEED) -> TheoremReport:
    """A circular boundary arc with 2 deg(A;c) + 1 points is centred at a repeated c-value."""
    a, c = _prepare(a, c)
    need = 2 * degree(c, a.shape[0]).degree + 1
    region = build_region(a, c, grid_n)
    fit = None
    for points in _arc_candidates(region, need):
        try:
            candidate = fit_circle(points)
        except DegenerateConfiguration:
            continue
        if candidate.accepts(region.diameter) and candidate.radius > 0:
            fit = candidate
            break

    details: Dict[str, Any] = {"points_needed": need}
    conclusion = False
    if fit is not None:
        cset = cvalue_set(a, c)
        mult = multiplicity(cset, fit.center, tol=CIRCLE_CENTER_TOL * region.scale / cset.scale)
        conclusion = mult >= 2
        details.update(fit=_fit_json(fit), center_multiplicity=mult)
    return TheoremReport(
        theorem="circle",
        bound=need,
        hypothesis_met=fit is not None,
        verdict=decide(fit is not None, conclusion),
        seed=seed,
        grid_n=grid_n,
        details=details,
    )


def check_ellipse_corollary(a, c: WeightsLike, grid_n: int = DEFAULT_GRID, seed: int = DEFAULT_SEED) -> TheoremReport:
    """Both foci of an elliptic boundary arc are c-values."""
    a, c = _prepare(a, c)
    need = max(5, 2 * degree(c, a.shape[0]).degree + 1)
    region = build_region(a, c, grid_n)
    fit = None
    for points in _arc_candidates(region, need):
        try:
            candidate = fit_ellipse(points)
        except DegenerateConfiguration:
            continue
        if candidate.accepts(region.diameter):
            fit = candidate
            break

    details: Dict[str, Any] = {"points_needed": need}
    conclusion = False
    if fit is not None:
        cset = cvalue_set(a, c)
        tol = ELLIPSE_FOCUS_TOL * region.scale
        distances = [float(np.min(np.abs(cset.values - f))) for f in fit.foci]
        conclusion = all(dist <= tol for dist in distances)
        details.update(fit=_fit_json(fit), focus_distances=distances)
    return TheoremReport(
        theorem="ellipse",
        bound=need,
        hypothesis_met=fit is not None,
        verdict=decide(fit is not None, conclusion),
        seed=seed,
        grid_n=grid_n,
        details=details,
    )


def check_sharp_point_corollary(a, c: WeightsLike, grid_n: int = DEFAULT_GRID, seed: int = DEFAULT_SEED) -> TheoremReport:
    """Every sharp point of W_c(A) is a c-value."""
    a, c = _prepare(a, c)
    notes = []
    if not c.is_sorted_desc:
        c = c_numerical_weights(c)
        notes.append("weights sorted descending to form W_c(A)")
    region = build_region(a, c, grid_n)
    sharp = detect_sharp_points(region, a, c) if region.kind in (RegionKind.FULL_2D, RegionKind.SEGMENT) else []
    cset = cvalue_set(a, c)
    tol = SHARP_MATCH_TOL * region.scale
    distances = [float(np.min(np.abs(cset.values - p.location))) for p in sharp]
    return TheoremReport(
        theorem="sharp",
        bound=len(sharp),
        hypothesis_met=bool(sharp),
        verdict=decide(bool(sharp), all(dist <= tol for dist in distances)),
        seed=seed,
        grid_n=grid_n,
        notes=notes,
        details={
            "sharp_points": [_pair(p.location) for p in sharp],
            "cone_widths": [p.width for p in sharp],
            "cvalue_distances": distances,
        },
    )


def _is_centered_disc(region) -> bool:
    tol = NILPOTENT_CENTER_TOL * region.scale
    if region.kind is RegionKind.POINT:
        return abs(region.vertices[0]) <= tol
    if not region.is_2d or len(region) < 8:
        return False
    # concyclic polygon corners are not a disc
    _, width = region.normal_cones()
    if np.any(width > sharp_threshold(region.grid_n)):
        return False
    try:
        fit = fit_circle(region.vertices)
    except DegenerateConfiguration:
        return False
    return fit.accepts(region.diameter) and abs(fit.center) <= tol


def check_nilpotent_corollary(a, trials: int = 20, grid_n: int = DEFAULT_GRID, seed: int = DEFAULT_SEED) -> TheoremReport:
    """If every sampled W_c(A) is a disc centred at 0, A should be nilpotent."""
    if trials < 20:
        raise ValueError(f"need at least 20 weight samples, got {trials}")
    a = core.as_matrix(a)
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    witness = None
    for _ in range(trials):
        c = np.sort(rng.standard_normal(n))[::-1]
        if not _is_centered_disc(build_region(a, c, grid_n)):
            witness = [float(x) for x in c]
            break

    hypothesis = witness is None
    eigenvalues = core.spectrum(a).eigenvalues
    radius = float(np.max(np.abs(eigenvalues)))
    conclusion = radius <= NILPOTENT_EIGEN_TOL * core.matrix_scale(a)
    details: Dict[str, Any] = {"trials": trials, "spectral_radius": radius}
    if witness is not None:
        details["witness_c"] = witness
    return TheoremReport(
        theorem="nilpotent",
        bound=trials,
        hypothesis_met=hypothesis,
        verdict=decide(hypothesis, conclusion),
        seed=seed,
        grid_n=grid_n,
        hypothesis_status=HypothesisStatus.SAMPLED,
        notes=[f"disc shape checked for {trials} random sorted weight vectors only, not for every c"],
        details=details,
    )


def _shared_stretches(run: np.ndarray, other, tol: float) -> List[np.ndarray]:
    close = boundary_distance(run, other) <= tol
    stretches = []
    start = None
    for k, flag in enumerate(list(close) + [False]):
        if flag and start is None:
            start = k
        elif not flag and start is not None:
            if k - start >= OVERLAP_MIN_RUN:
                stretches.append(run[start:k])
            start = None
    return stretches


def _is_straight(points: np.ndarray, tol: float) -> bool:
    chord = points[-1] - points[0]
    if abs(chord) == 0:
        return True
    offsets = np.abs(np.imag(np.conj(chord) * (points - points[0]))) / abs(chord)
    return float(np.max(offsets)) <= tol


def check_curve_overlap(a, c: WeightsLike, b, d: WeightsLike, grid_n: int = DEFAULT_GRID,
                        seed: int = DEFAULT_SEED) -> TheoremReport:
    """A shared curved boundary stretch forces a common value."""
    a, c = _prepare(a, c)
    b, d = _prepare(b, d)
    region_a = build_region(a, c, grid_n)
    region_b = build_region(b, d, grid_n)
    scale = max(region_a.scale, region_b.scale)
    shared = []
    if region_a.is_2d and region_b.is_2d:
        for run in curved_runs(region_a):
            for stretch in _shared_stretches(run, region_b, OVERLAP_TOL * scale):
                if not _is_straight(stretch, 1e-6 * scale):
                    shared.append(stretch)

    hypothesis = bool(shared)
    common = common_cvalue(a, c, b, d) if hypothesis else []
    return TheoremReport(
        theorem="curve",
        bound=OVERLAP_MIN_RUN,
        hypothesis_met=hypothesis,
        common_values=common,
        verdict=decide(hypothesis, bool(common)),
        seed=seed,
        grid_n=grid_n,
        details={"shared_stretches": [int(s.size) for s in shared]},
    )


def check_equal_ranges(a, c: WeightsLike, b, d: WeightsLike, grid_n: int = DEFAULT_GRID,
                       seed: int = DEFAULT_SEED, sort_weights: bool = True) -> TheoremReport:
    """W_c(A) = W_d(B) forces a common value."""
    a, c = _prepare(a, c)
    b, d = _prepare(b, d)
    notes = []
    if sort_weights and not (c.is_sorted_desc and d.is_sorted_desc):
        c, d = c_numerical_weights(c), c_numerical_weights(d)
        notes.append("weights sorted descending to form W_c(A) and W_d(B)")
    region_a = build_region(a, c, grid_n)
    region_b = build_region(b, d, grid_n)
    scale = max(region_a.scale, region_b.scale)
    distance = hausdorff_distance(region_a, region_b)
    hypothesis = not region_a.empty and not region_b.empty and distance <= EQUAL_RANGE_TOL * scale
    common = common_cvalue(a, c, b, d)
    return TheoremReport(
        theorem="equal",
        bound=_bezout_bound(a, c, b, d),
        hypothesis_met=hypothesis,
        common_values=common,
        verdict=decide(hypothesis, bool(common)),
        seed=seed,
        grid_n=grid_n,
        notes=notes,
        details={"hausdorff": distance if np.isfinite(distance) else None},
    )


# ---------------------------------------------------------------------------
# Ensembles and fixtures
# ---------------------------------------------------------------------------

@dataclass
class EnsembleReport:
    trials: int
    evaluated: int
    skipped: int
    max_ratio: float
    violations: List[Dict[str, Any]] = field(default_factory=list)
    seed: int = DEFAULT_SEED
    grid_n: int = 512

    @property
    def verdict(self) -> Verdict:
        return Verdict.INCONSISTENT if self.violations else Verdict.HYPOTHESIS_NOT_MET

    def to_json(self) -> dict:
        data = asdict(self)
        data["gridN"] = data.pop("grid_n")
        data["theorem"] = "soundness"
        data["verdict"] = self.verdict.value
        return data


def run_soundness_ensemble(trials: int = 500, seed: int = DEFAULT_SEED, grid_n: int = 512,
                           max_n: int = 3) -> EnsembleReport:
    """Random pairs with well separated value sets never beat the Bezout bound."""
    rng = np.random.default_rng(seed)
    evaluated = skipped = 0
    max_ratio = 0.0
    violations = []
    for trial in range(trials):
        n_a, n_b = (int(x) for x in rng.integers(1, max_n + 1, size=2))
        a = core.random_complex_matrix(n_a, rng)
        b = core.random_complex_matrix(n_b, rng)
        c = rng.standard_normal(n_a)
        d = rng.standard_normal(n_b)
        if rng.random() < 0.5:
            c, d = np.sort(c)[::-1], np.sort(d)[::-1]
        c, d = as_weights(c), as_weights(d)
        first, second = cvalue_set(a, c), cvalue_set(b, d)
        if min_separation(first, second) <= SEPARATION_TOL * max(first.scale, second.scale):
            skipped += 1
            continue
        evaluated += 1
        bound = first.degree * second.degree
        roots = find_equal_support_angles(a, c, b, d, grid_n)
        count = len(projective_angles(a, c, distinct_angles(roots.angles, grid_n), grid_n))
        max_ratio = max(max_ratio, count / bound)
        if roots.identically_zero or roots.zero_arcs or count > bound:
            violations.append({"trial": trial, "count": count, "bound": bound})
            logger.warning("soundness trial %d: %d angles exceed bound %d", trial, count, bound)
    return EnsembleReport(trials, evaluated, skipped, max_ratio, violations, seed, grid_n)


def remark_fixture(n: int = 4, radius: float = 0.95) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """n-th roots of unity against the disc of the given radius.

    The boundaries cross at exactly 2n points, the Bezout bound is 2n and
    the two matrices share no eigenvalue.
    """
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    a = core.as_matrix(np.diag(roots))
    b = core.as_matrix([[0.0, 2.0 * radius], [0.0, 0.0]])
    c = np.zeros(n)
    c[0] = 1.0
    return a, c, b, np.array([1.0, 0.0])
