"""
Convex regions W(A;c) as intersections of supporting half-planes.

A half-plane is stored as ``(theta, offset)`` and means
``{v : Re(e^{i theta} v) <= offset}``; its outward normal is ``e^{-i theta}``.
Regions are outer polygons built from a uniform grid of such half-planes,
exact polygons for normal matrices, and segments for Hermitian matrices.
All tolerances are relative to the region's ``scale``.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import core
from .errors import (
    DegenerateConfiguration,
    DimensionTooLarge,
    NoSignChange,
    NotNormal,
)
from .support import (
    DEFAULT_GRID,
    WeightsLike,
    as_weights,
    check_dimensions,
    cyclic_runs,
    support_gap,
    uniform_grid,
    weighted_support,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

MIN_REGION_GRID = 64
NORMAL_MAX_N = 8

# Every offset is relaxed outward by SLACK * scale so that segments and
# points survive the clipping as thin polygons.
SLACK = 1e-10
OUTSIDE_TOL = 1e-12
VALIDATE_TOL = 1e-10
MERGE_TOL = 1e-9
AREA_TOL = 1e-12
WIDTH_TOL = 1e-9
CROSSING_TOL = 1e-9
DEDUP_TOL = 1e-8
SHARP_MIN_CONE = 1e-3
SMOOTH_STEPS = 1.5
GAP_SOLVE_TOL = 1e-9
FIT_ACCEPT = 1e-5

_CHUNK = 256


class RegionKind(str, Enum):
    FULL_2D = "full2D"
    SEGMENT = "segment"
    POINT = "point"
    EMPTY = "empty"


@dataclass(frozen=True)
class HalfPlane:
    """{v : Re(e^{i theta} v) <= offset}."""

    theta: float
    offset: float

    def value(self, v) -> np.ndarray:
        return np.real(np.exp(1j * self.theta) * np.asarray(v))

    def contains(self, v, slack: float = 0.0) -> np.ndarray:
        return self.value(v) <= self.offset + slack


def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.imag(np.conj(u) * v)


def edge_angles(vertices: np.ndarray) -> np.ndarray:
    """theta of the supporting half-plane of each edge v_k -> v_{k+1}."""
    edges = np.roll(vertices, -1) - vertices
    return np.mod(np.angle(1j * np.conj(edges)), TWO_PI)


@dataclass(frozen=True)
class ConvexRegion:
    """Compact convex set given by its counterclockwise vertices.

    ``kind`` tells how to read ``vertices``: a polygon for FULL_2D, the two
    endpoints for SEGMENT, a single point for POINT and nothing for EMPTY.
    ``grid_n`` is the number of sampled directions the region was built
    from, 0 for exact constructions.
    """

    vertices: np.ndarray
    kind: RegionKind
    scale: float = 1.0
    grid_n: int = 0

    def __post_init__(self):
        arr = np.array(self.vertices, dtype=np.complex128).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", arr)

    def __len__(self) -> int:
        return self.vertices.size

    @property
    def empty(self) -> bool:
        return self.kind is RegionKind.EMPTY

    @property
    def is_2d(self) -> bool:
        return self.kind is RegionKind.FULL_2D

    @property
    def area(self) -> float:
        if not self.is_2d:
            return 0.0
        v = self.vertices
        return 0.5 * float(np.sum(_cross(v, np.roll(v, -1))))

    @property
    def diameter(self) -> float:
        v = self.vertices
        best = 0.0
        for start in range(0, v.size, _CHUNK):
            block = v[start:start + _CHUNK]
            best = max(best, float(np.max(np.abs(block[:, None] - v[None, :]), initial=0.0)))
        return best

    @property
    def centroid(self) -> complex:
        v = self.vertices
        if self.empty:
            raise ValueError("empty region has no centroid")
        if not self.is_2d:
            return complex(np.mean(v))
        w = np.roll(v, -1)
        cross = _cross(v, w)
        return complex(np.sum((v + w) * cross) / (3.0 * np.sum(cross)))

    def edge_halfplanes(self) -> List[HalfPlane]:
        """Supporting half-plane of each edge of a 2-D region."""
        if not self.is_2d:
            raise ValueError(f"edge half-planes need a 2-D region, got {self.kind.value}")
        thetas = edge_angles(self.vertices)
        offsets = np.real(np.exp(1j * thetas) * self.vertices)
        return [HalfPlane(float(t), float(h)) for t, h in zip(thetas, offsets)]

    def normal_cones(self) -> Tuple[np.ndarray, np.ndarray]:
        """(theta_lo, width) of the normal cone at each vertex.

        The cone at v_k is the set of theta whose supporting line touches
        the region at v_k, i.e. [theta_lo, theta_lo + width] mod 2pi.
        """
        v = self.vertices
        if self.kind is RegionKind.POINT:
            return np.zeros(1), np.full(1, TWO_PI)
        if self.kind is RegionKind.SEGMENT:
            outward = np.array([v[0] - v[1], v[1] - v[0]])
            lo = np.mod(-np.angle(outward) - 0.5 * np.pi, TWO_PI)
            return lo, np.full(2, np.pi)
        if not self.is_2d:
            return np.zeros(0), np.zeros(0)
        theta = edge_angles(v)
        width = np.mod(np.roll(theta, 1) - theta, TWO_PI)
        return theta, width

    def contains(self, points, slack: Optional[float] = None) -> np.ndarray:
        """Membership test; ``slack`` defaults to MERGE_TOL * scale."""
        slack = MERGE_TOL * self.scale if slack is None else slack
        return distance_to_region(points, self) <= slack

    def transformed(self, gamma: complex, shift: complex) -> "ConvexRegion":
        """Image under v -> gamma*v + shift."""
        if self.empty:
            return self
        scale = max(self.scale, 1.0 + abs(gamma) * (self.scale - 1.0) + abs(shift))
        return ConvexRegion(gamma * self.vertices + shift, self.kind, scale, self.grid_n)


def is_empty(region: ConvexRegion) -> bool:
    return region.empty


# ---------------------------------------------------------------------------
# Half-plane intersection
# ---------------------------------------------------------------------------

def _meet(first: Tuple[float, float], second: Tuple[float, float]) -> complex:
    (ti, hi), (tj, hj) = first, second
    det = np.sin(ti - tj)
    x = (hj * np.sin(ti) - hi * np.sin(tj)) / det
    y = (np.cos(ti) * hj - np.cos(tj) * hi) / det
    return complex(x, y)


def _outside(line: Tuple[float, float], v: complex, tol: float) -> bool:
    t, h = line
    return np.cos(t) * v.real - np.sin(t) * v.imag > h + tol


def _clip(thetas: np.ndarray, offsets: np.ndarray, tol: float) -> Optional[np.ndarray]:
    """Vertices of the intersection by the sorted-deque method, None when empty."""
    directions = np.mod(0.5 * np.pi - thetas, TWO_PI)
    order = np.argsort(directions, kind="stable")
    dq: deque = deque()
    for k in order:
        line = (float(thetas[k]), float(offsets[k]))
        while len(dq) >= 2 and _outside(line, _meet(dq[-1], dq[-2]), tol):
            dq.pop()
        while len(dq) >= 2 and _outside(line, _meet(dq[0], dq[1]), tol):
            dq.popleft()
        if dq:
            turn = np.mod(dq[-1][0] - line[0], TWO_PI)
            if abs(np.sin(turn)) <= 1e-15:
                if np.cos(turn) < 0:
                    return None
                if line[1] < dq[-1][1]:
                    dq.pop()
                else:
                    continue
        dq.append(line)
    while len(dq) >= 3 and _outside(dq[0], _meet(dq[-1], dq[-2]), tol):
        dq.pop()
    while len(dq) >= 3 and _outside(dq[-1], _meet(dq[0], dq[1]), tol):
        dq.popleft()
    if len(dq) < 3:
        return None
    lines = list(dq)
    return np.array([_meet(lines[k], lines[(k + 1) % len(lines)]) for k in range(len(lines))])


def _max_violation(vertices: np.ndarray, thetas: np.ndarray, offsets: np.ndarray) -> float:
    worst = -np.inf
    rot = np.exp(1j * thetas)
    for start in range(0, vertices.size, _CHUNK):
        block = vertices[start:start + _CHUNK]
        values = np.real(block[:, None] * rot[None, :]) - offsets[None, :]
        worst = max(worst, float(np.max(values)))
    return worst


def _merge_close(v: np.ndarray, tol: float) -> np.ndarray:
    kept = [v[0]]
    for p in v[1:]:
        if abs(p - kept[-1]) > tol:
            kept.append(p)
    while len(kept) > 1 and abs(kept[-1] - kept[0]) <= tol:
        kept.pop()
    return np.array(kept)


def _drop_collinear(v: np.ndarray, tol: float) -> np.ndarray:
    def flat(a, b, c):
        chord = c - a
        length = abs(chord)
        if length <= tol:
            return True
        return abs(_cross(chord, b - a)) / length <= tol

    out: List[complex] = []
    for p in v:
        out.append(p)
        while len(out) >= 3 and flat(out[-3], out[-2], out[-1]):
            del out[-2]
    changed = True
    while changed and len(out) >= 3:
        changed = False
        if flat(out[-2], out[-1], out[0]):
            del out[-1]
            changed = True
        elif flat(out[-1], out[0], out[1]):
            del out[0]
            changed = True
    return np.array(out)


def _exact_width(v: np.ndarray) -> float:
    edges = np.roll(v, -1) - v
    lengths = np.abs(edges)
    best = np.inf
    for start in range(0, v.size, _CHUNK):
        e = edges[start:start + _CHUNK]
        base = v[start:start + _CHUNK]
        ok = lengths[start:start + _CHUNK] > 0
        dist = np.abs(_cross(e[:, None], v[None, :] - base[:, None])) / np.where(ok, lengths[start:start + _CHUNK], 1.0)[:, None]
        extent = np.where(ok, np.max(dist, axis=1), np.inf)
        best = min(best, float(np.min(extent)))
    return best


def _classify(v: np.ndarray, scale: float, grid_n: int) -> ConvexRegion:
    if v.size >= 3:
        area = 0.5 * float(np.sum(_cross(v, np.roll(v, -1))))
        if area >= AREA_TOL * scale * scale:
            perimeter = float(np.sum(np.abs(np.roll(v, -1) - v)))
            # width >= area / diameter >= 2 * area / perimeter
            if 2.0 * area / perimeter >= WIDTH_TOL * scale or _exact_width(v) >= WIDTH_TOL * scale:
                return ConvexRegion(v, RegionKind.FULL_2D, scale, grid_n)

    center = complex(np.mean(v))
    if v.size == 1:
        return ConvexRegion(v, RegionKind.POINT, scale, grid_n)
    rel = v - center
    _, _, vt = np.linalg.svd(np.column_stack([rel.real, rel.imag]), full_matrices=False)
    u = complex(vt[0, 0], vt[0, 1])
    t = np.real(rel * np.conj(u))
    if t.max() - t.min() < WIDTH_TOL * scale:
        return ConvexRegion([center], RegionKind.POINT, scale, grid_n)
    ends = sorted([center + t.min() * u, center + t.max() * u], key=lambda z: (z.real, z.imag))
    return ConvexRegion(ends, RegionKind.SEGMENT, scale, grid_n)


def intersect_halfplanes(thetas, offsets, scale: float = 1.0, grid_n: int = 0) -> ConvexRegion:
    """Intersection of the half-planes Re(e^{i theta_k} v) <= offset_k.

    The directions must leave no angular gap of pi or more, which holds for
    any uniform grid of at least three angles and for polygon edge sets.
    """
    thetas = np.mod(np.asarray(thetas, dtype=float), TWO_PI)
    offsets = np.asarray(offsets, dtype=float) + SLACK * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = _clip(thetas, offsets, OUTSIDE_TOL * scale)
    if raw is None or not np.all(np.isfinite(raw)):
        return ConvexRegion([], RegionKind.EMPTY, scale, grid_n)
    if _max_violation(raw, thetas, offsets) > VALIDATE_TOL * scale:
        return ConvexRegion([], RegionKind.EMPTY, scale, grid_n)
    if 0.5 * float(np.sum(_cross(raw, np.roll(raw, -1)))) < -AREA_TOL * scale * scale:
        return ConvexRegion([], RegionKind.EMPTY, scale, grid_n)
    vertices = _merge_close(raw, MERGE_TOL * scale)
    if vertices.size >= 3:
        vertices = _drop_collinear(vertices, MERGE_TOL * scale)
    return _classify(vertices, scale, grid_n)


def _region_scale(a: np.ndarray, offsets: np.ndarray) -> float:
    return 1.0 + max(float(np.max(np.abs(a))), float(np.max(np.abs(offsets), initial=0.0)))


def build_region(a, c: WeightsLike, grid_n: int = DEFAULT_GRID) -> ConvexRegion:
    """Outer polygon of W(A;c) from ``grid_n`` equally spaced supporting half-planes."""
    if grid_n < MIN_REGION_GRID:
        raise ValueError(f"grid must have at least {MIN_REGION_GRID} directions, got {grid_n}")
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    thetas = uniform_grid(grid_n)
    offsets = weighted_support(a, c, thetas)
    region = intersect_halfplanes(thetas, offsets, _region_scale(a, offsets), grid_n)
    logger.debug("build_region: n=%d grid=%d -> %s with %d vertices", a.shape[0], grid_n, region.kind.value, len(region))
    return region


# ---------------------------------------------------------------------------
# Exact constructions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Closed real interval [lower, upper]; empty when lower > upper."""

    lower: float
    upper: float

    @property
    def empty(self) -> bool:
        return self.lower > self.upper

    @property
    def length(self) -> float:
        return max(self.upper - self.lower, 0.0)


def hermitian_segment(a, c: WeightsLike) -> Interval:
    h = core.as_hermitian(a)
    c = as_weights(c)
    check_dimensions(h, c)
    values = core.eig_hermitian(h).values
    return Interval(lower=float(c.c[::-1] @ values), upper=float(c.c @ values))


def switching_angles(eigenvalues, scale: float = 1.0) -> np.ndarray:
    """Sorted angles in [0, 2pi) where two of Re(e^{i theta} lambda_j) coincide."""
    lam = np.asarray(eigenvalues, dtype=np.complex128).ravel()
    j, k = np.triu_indices(lam.size, 1)
    diffs = lam[j] - lam[k]
    diffs = diffs[np.abs(diffs) > 1e-12 * scale]
    switch = np.mod(0.5 * np.pi - np.angle(diffs), np.pi)
    angles = np.concatenate([switch, switch + np.pi])
    return np.unique(np.round(np.mod(angles, TWO_PI), 15))


def polygon_for_normal(a, c: WeightsLike) -> ConvexRegion:
    """Exact W(A;c) for a normal matrix.

    Between consecutive angles where the order of Re(e^{i theta} lambda_j)
    switches, the support is Re(e^{i theta} w) for a fixed c-value w, so the
    half-planes at the switching angles (plus the four axis directions) cut
    out the whole region.
    """
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    n = a.shape[0]
    if n > NORMAL_MAX_N:
        raise DimensionTooLarge(f"exact polygons need n <= {NORMAL_MAX_N}, got {n}")
    if not core.is_normal(a):
        raise NotNormal("matrix is not normal")
    lam = core.spectrum(a).eigenvalues
    axes = np.round(0.5 * np.pi * np.arange(4), 15)
    angles = np.union1d(switching_angles(lam, core.matrix_scale(a)), axes)
    projected = np.real(np.exp(1j * angles)[:, None] * lam[None, :])
    offsets = -np.sort(-projected, axis=1) @ c.c
    region = intersect_halfplanes(angles, offsets, _region_scale(a, offsets))
    logger.debug("polygon_for_normal: %d switching directions -> %d vertices", angles.size, len(region))
    return region


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------

def _segment_distances(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(m, k) distances from each point to each segment [a_k, b_k]."""
    ab = b - a
    denom = np.where(np.abs(ab) > 0, np.abs(ab) ** 2, 1.0)
    t = np.real(np.conj(ab)[None, :] * (points[:, None] - a[None, :])) / denom[None, :]
    t = np.clip(t, 0.0, 1.0)
    return np.abs(points[:, None] - (a[None, :] + t * ab[None, :]))


def distance_to_region(points, region: ConvexRegion) -> np.ndarray:
    """Euclidean distance from each point to the region (0 inside)."""
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128)).ravel()
    v = region.vertices
    if region.empty:
        return np.full(pts.size, np.inf)
    if region.kind is RegionKind.POINT:
        return np.abs(pts - v[0])
    if region.kind is RegionKind.SEGMENT:
        return _segment_distances(pts, v[:1], v[1:])[:, 0]
    a = v
    b = np.roll(v, -1)
    out = np.empty(pts.size)
    for start in range(0, pts.size, _CHUNK):
        block = pts[start:start + _CHUNK]
        inside = np.all(_cross(b - a, block[:, None] - a[None, :]) >= 0.0, axis=1)
        dist = np.min(_segment_distances(block, a, b), axis=1)
        out[start:start + _CHUNK] = np.where(inside, 0.0, dist)
    return out


def boundary_distance(points, region: ConvexRegion) -> np.ndarray:
    """Euclidean distance from each point to the boundary of the region."""
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128)).ravel()
    if not region.is_2d:
        return distance_to_region(pts, region)
    a = region.vertices
    b = np.roll(a, -1)
    out = np.empty(pts.size)
    for start in range(0, pts.size, _CHUNK):
        out[start:start + _CHUNK] = np.min(_segment_distances(pts[start:start + _CHUNK], a, b), axis=1)
    return out


def hausdorff_distance(first: ConvexRegion, second: ConvexRegion) -> float:
    """Hausdorff distance between two convex regions.

    The distance to a convex set is convex, so its maximum over a polygon
    is attained at a vertex.
    """
    if first.empty or second.empty:
        return 0.0 if first.empty and second.empty else float("inf")
    return max(
        float(np.max(distance_to_region(first.vertices, second))),
        float(np.max(distance_to_region(second.vertices, first))),
    )


# ---------------------------------------------------------------------------
# Boundary intersections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryIntersections:
    """Common boundary points of two 2-D regions, counterclockwise.

    ``points`` are transversal crossings, ``overlaps`` shared boundary
    stretches as (start, end) pairs, ``touching`` isolated contacts without
    a crossing. ``full_overlap`` means the boundaries coincide.
    """

    points: Tuple[complex, ...] = ()
    overlaps: Tuple[Tuple[complex, complex], ...] = ()
    touching: Tuple[complex, ...] = ()
    full_overlap: bool = False
    center: Optional[complex] = None

    def __len__(self) -> int:
        return len(self.points)


def _radial(vertices: np.ndarray, center: complex, phi: np.ndarray) -> np.ndarray:
    """Distance from ``center`` to the boundary along each direction e^{i phi}."""
    rel = vertices - center
    ang = np.mod(np.angle(rel), TWO_PI)
    start = int(np.argmin(ang))
    rel = np.roll(rel, -start)
    ang = np.roll(ang, -start)
    idx = np.mod(np.searchsorted(ang, phi, side="right") - 1, rel.size)
    a = rel[idx]
    edge = rel[(idx + 1) % rel.size] - a
    return _cross(a, edge) / _cross(np.exp(1j * phi), edge)


def _segment_meet(p: complex, q: complex, r: complex, s: complex) -> complex:
    d1 = q - p
    d2 = s - r
    denom = _cross(d1, d2)
    if abs(denom) <= 1e-300:
        return 0.5 * (p + r)
    t = _cross(r - p, d2) / denom
    return complex(p + t * d1)


def _dedup_points(points: Sequence[complex], tol: float) -> List[complex]:
    out: List[complex] = []
    for p in points:
        if all(abs(p - q) > tol for q in out):
            out.append(p)
    return out


def boundary_intersections(first: ConvexRegion, second: ConvexRegion) -> BoundaryIntersections:
    """Crossings of the two boundary polylines.

    Both boundaries are read as radial functions around a point interior to
    both regions; between consecutive vertex directions of either polygon
    both boundaries are straight, so every sign change of the radial
    difference gives one exact segment-segment intersection.
    """
    if not (first.is_2d and second.is_2d):
        logger.info("boundary_intersections: both regions must be 2-D (%s, %s)", first.kind.value, second.kind.value)
        return BoundaryIntersections()
    scale = max(first.scale, second.scale)
    planes = first.edge_halfplanes() + second.edge_halfplanes()
    common = intersect_halfplanes([p.theta for p in planes], [p.offset for p in planes], scale)
    if not common.is_2d:
        return BoundaryIntersections()
    center = common.centroid

    phi = np.unique(np.concatenate([
        np.mod(np.angle(first.vertices - center), TWO_PI),
        np.mod(np.angle(second.vertices - center), TWO_PI),
    ]))
    u = np.exp(1j * phi)
    on_first = center + _radial(first.vertices, center, phi) * u
    on_second = center + _radial(second.vertices, center, phi) * u
    diff = np.abs(on_first - center) - np.abs(on_second - center)
    zero = np.abs(diff) <= CROSSING_TOL * scale
    if np.all(zero):
        return BoundaryIntersections(full_overlap=True, center=center)

    sign = np.sign(diff)
    m = phi.size
    found: List[Tuple[int, complex]] = []
    touching: List[complex] = []
    overlaps: List[Tuple[complex, complex]] = []
    for k in range(m):
        nxt = (k + 1) % m
        if not zero[k] and not zero[nxt] and sign[k] != sign[nxt]:
            found.append((k, _segment_meet(on_first[k], on_first[nxt], on_second[k], on_second[nxt])))
    for start, length in cyclic_runs(zero):
        end = (start + length - 1) % m
        before = sign[(start - 1) % m]
        after = sign[(end + 1) % m]
        if length == 1:
            point = complex(0.5 * (on_first[start] + on_second[start]))
            if before * after < 0:
                found.append((start, point))
            else:
                touching.append(point)
        else:
            overlaps.append((complex(on_first[start]), complex(on_first[end])))

    found.sort(key=lambda item: item[0])
    points = _dedup_points([p for _, p in found], DEDUP_TOL * scale)
    logger.debug("boundary_intersections: %d crossings, %d overlaps", len(points), len(overlaps))
    return BoundaryIntersections(
        points=tuple(points),
        overlaps=tuple(overlaps),
        touching=tuple(_dedup_points(touching, DEDUP_TOL * scale)),
        center=center,
    )


# ---------------------------------------------------------------------------
# Common supporting angle between three boundary points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportingAngle:
    phi: float
    gap: float
    omega_lo: float
    omega_hi: float
    at_endpoint: bool = False
    identically_zero: bool = False


def chord_angle(z1: complex, z2: complex) -> float:
    """theta of the half-plane whose boundary line runs from z1 to z2 (region on the left)."""
    return float(np.mod(np.angle(1j * np.conj(z2 - z1)), TWO_PI))


def common_supporting_angle(a, c: WeightsLike, b, d: WeightsLike, z1: complex, z2: complex, z3: complex,
                            samples: int = 257) -> SupportingAngle:
    """phi in [omega_2, omega_1] where the two weighted supports agree.

    omega_1 and omega_2 are the chord directions of z1z2 and z2z3; the
    interval is taken counterclockwise from omega_2 and may wrap past 2pi.
    """
    z1, z2, z3 = complex(z1), complex(z2), complex(z3)
    if _cross(z2 - z1, z3 - z2) < 0:
        raise ValueError("boundary points must be given counterclockwise")
    lo = chord_angle(z2, z3)
    hi = chord_angle(z1, z2)
    if hi < lo:
        hi += TWO_PI

    def gap(theta):
        return support_gap(a, c, b, d, theta)

    ts = np.linspace(lo, hi, samples)
    g = np.asarray(gap(ts))
    absg = np.abs(g)
    if np.all(absg < 1e-12):
        mid = 0.5 * (lo + hi)
        return SupportingAngle(float(np.mod(mid, TWO_PI)), float(gap(mid)), lo, hi, identically_zero=True)

    exact = np.flatnonzero(absg <= GAP_SOLVE_TOL)
    brackets = np.flatnonzero(g[:-1] * g[1:] < 0)
    if brackets.size:
        k = int(brackets[0])
        left, right, g_left = ts[k], ts[k + 1], g[k]
        phi = 0.5 * (left + right)
        for _ in range(200):
            phi = 0.5 * (left + right)
            g_mid = gap(phi)
            if abs(g_mid) <= 1e-12 or right - left <= 4e-16 * (1.0 + abs(phi)):
                break
            if np.sign(g_mid) == np.sign(g_left):
                left, g_left = phi, g_mid
            else:
                right = phi
    elif exact.size:
        phi = float(ts[exact[np.argmin(absg[exact])]])
    else:
        k = int(np.argmin(absg))
        raise NoSignChange("weighted supports never meet between the chords",
                           nearest_angle=float(np.mod(ts[k], TWO_PI)), nearest_gap=float(g[k]))

    value = float(gap(phi))
    at_endpoint = min(abs(phi - lo), abs(hi - phi)) <= GAP_SOLVE_TOL
    return SupportingAngle(float(np.mod(phi, TWO_PI)), value, lo, hi, at_endpoint=at_endpoint)


# ---------------------------------------------------------------------------
# Sharp points and smooth arcs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SharpPoint:
    """Boundary point with a normal cone [theta_lo, theta_hi] of positive width."""

    location: complex
    theta_lo: float
    theta_hi: float
    touches_support: Optional[bool] = None

    @property
    def width(self) -> float:
        return self.theta_hi - self.theta_lo


def sharp_threshold(grid_n: int) -> float:
    if grid_n <= 0:
        return SHARP_MIN_CONE
    return max(SHARP_MIN_CONE, 4.0 * TWO_PI / grid_n)


def detect_sharp_points(region: ConvexRegion, a=None, c: Optional[WeightsLike] = None) -> List[SharpPoint]:
    """Vertices whose normal cone is wider than the sampling can explain.

    When ``a`` and ``c`` are given, each point records whether the weighted
    support at the middle of its cone actually passes through it.
    """
    if region.empty:
        return []
    lo, width = region.normal_cones()
    keep = width > sharp_threshold(region.grid_n)
    points = []
    for v, t, w in zip(region.vertices[keep], lo[keep], width[keep]):
        touches = None
        if a is not None and c is not None:
            mid = t + 0.5 * w
            h = weighted_support(a, c, mid)
            touches = bool(abs(np.real(np.exp(1j * mid) * v) - h) <= 1e-7 * region.scale)
        points.append(SharpPoint(complex(v), float(t), float(t + w), touches))
    return points


def curved_runs(region: ConvexRegion) -> List[np.ndarray]:
    """Maximal runs of consecutive vertices on smooth stretches of the boundary.

    A vertex is smooth when its exterior angle is at most 1.5 grid steps
    and so are both of its neighbours; the last vertex before a straight
    edge is sampled off the curve and is left out this way. A boundary
    that is smooth everywhere is returned as one run.
    """
    if not region.is_2d or region.grid_n <= 0:
        return []
    _, width = region.normal_cones()
    smooth = width <= SMOOTH_STEPS * TWO_PI / region.grid_n
    if np.all(smooth):
        return [region.vertices.copy()]
    smooth = smooth & np.roll(smooth, 1) & np.roll(smooth, -1)
    v = region.vertices
    return [v[np.arange(start, start + length) % v.size] for start, length in cyclic_runs(smooth)]


def boundary_rows(region: ConvexRegion) -> List[Tuple[float, float, float]]:
    """(theta, x, y) per vertex, theta being the middle of the normal cone."""
    lo, width = region.normal_cones()
    mids = np.mod(lo + 0.5 * width, TWO_PI)
    return [(float(t), float(v.real), float(v.imag)) for t, v in zip(mids, region.vertices)]


# ---------------------------------------------------------------------------
# Circle and ellipse fits
# ---------------------------------------------------------------------------

class ArcKind(str, Enum):
    CIRCLE = "circle"
    ELLIPSE = "ellipse"


@dataclass(frozen=True)
class ArcFit:
    kind: ArcKind
    center: complex
    semi_major: float
    semi_minor: float
    foci: Tuple[complex, complex]
    residual: float

    @property
    def radius(self) -> float:
        return self.semi_major

    def accepts(self, diameter: float) -> bool:
        """Whether the fitted points lie on the curve at the grid noise floor."""
        return self.residual <= FIT_ACCEPT * diameter


def _fit_points(points, minimum: int) -> np.ndarray:
    pts = np.asarray(points, dtype=np.complex128).ravel()
    if pts.size < minimum:
        raise DegenerateConfiguration(f"need at least {minimum} points, got {pts.size}")
    rel = pts - pts.mean()
    s = np.linalg.svd(np.column_stack([rel.real, rel.imag]), compute_uv=False)
    if s[1] <= 1e-12 * max(s[0], 1e-300):
        raise DegenerateConfiguration("points are collinear")
    return pts


def fit_circle(points) -> ArcFit:
    """Coope's linear least-squares circle: 2 x xc + 2 y yc + k = x^2 + y^2."""
    pts = _fit_points(points, 3)
    shift = pts.mean()
    rel = pts - shift
    design = np.column_stack([2.0 * rel.real, 2.0 * rel.imag, np.ones(rel.size)])
    rhs = np.abs(rel) ** 2
    (cx, cy, k), *_ = np.linalg.lstsq(design, rhs, rcond=None)
    radius = float(np.sqrt(max(k + cx * cx + cy * cy, 0.0)))
    center = complex(cx, cy) + shift
    residual = float(np.sqrt(np.mean((np.abs(pts - center) - radius) ** 2)))
    return ArcFit(ArcKind.CIRCLE, center, radius, radius, (center, center), residual)


def _ellipse_distances(points: np.ndarray, center: complex, axis: complex, major: float, minor: float) -> np.ndarray:
    rel = (points - center) * np.conj(axis)
    x = np.abs(rel.real)
    y = np.abs(rel.imag)
    if major - minor <= 1e-12 * major:
        return np.abs(np.abs(rel) - major)
    # bisection on the parameter of the nearest point in the first quadrant
    lo = np.zeros_like(x)
    hi = np.full_like(x, 0.5 * np.pi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        f = (major * major - minor * minor) * np.sin(mid) * np.cos(mid) - x * major * np.sin(mid) + y * minor * np.cos(mid)
        lo = np.where(f > 0, mid, lo)
        hi = np.where(f > 0, hi, mid)
    t = 0.5 * (lo + hi)
    return np.hypot(x - major * np.cos(t), y - minor * np.sin(t))


def fit_ellipse(points) -> ArcFit:
    """Direct least-squares ellipse (Halir-Flusser) on normalized points."""
    pts = _fit_points(points, 5)
    shift = pts.mean()
    size = float(np.max(np.abs(pts - shift)))
    q = (pts - shift) / size
    x, y = q.real, q.imag
    d1 = np.column_stack([x * x, x * y, y * y])
    d2 = np.column_stack([x, y, np.ones_like(x)])
    s1 = d1.T @ d1
    s2 = d1.T @ d2
    s3 = d2.T @ d2
    try:
        t = -np.linalg.solve(s3, s2.T)
    except np.linalg.LinAlgError as e:
        raise DegenerateConfiguration("singular ellipse design matrix") from e
    m = s1 + s2 @ t
    m = np.array([m[2] / 2.0, -m[1], m[0] / 2.0])
    _, vecs = np.linalg.eig(m)
    vecs = vecs.real
    cond = 4.0 * vecs[0] * vecs[2] - vecs[1] ** 2
    if not np.any(cond > 0):
        raise DegenerateConfiguration("no elliptic solution for these points")
    a1 = vecs[:, int(np.argmax(cond))]
    qa, qb, qc = a1
    qd, qe, qf = t @ a1

    form = np.array([[qa, qb / 2.0], [qb / 2.0, qc]])
    try:
        x0, y0 = np.linalg.solve(2.0 * form, [-qd, -qe])
    except np.linalg.LinAlgError as e:
        raise DegenerateConfiguration("conic has no center") from e
    f0 = qf + 0.5 * (qd * x0 + qe * y0)
    mu, axes_vec = np.linalg.eigh(form)
    if np.all(mu < 0):
        mu, f0 = -mu, -f0
    if not (np.all(mu > 0) and f0 < 0):
        raise DegenerateConfiguration("fitted conic is not an ellipse")

    # the major axis belongs to the smaller eigenvalue of the quadratic form
    order = np.argsort(mu)
    mu, axes_vec = mu[order], axes_vec[:, order]
    semi = np.sqrt(-f0 / mu) * size
    major, minor = float(semi[0]), float(semi[1])
    axis = complex(axes_vec[0, 0], axes_vec[1, 0])
    center = complex(x0, y0) * size + shift
    focal = np.sqrt(max(major * major - minor * minor, 0.0))
    foci = sorted([center + focal * axis, center - focal * axis], key=lambda z: (z.real, z.imag))
    residual = float(np.sqrt(np.mean(_ellipse_distances(pts, center, axis, major, minor) ** 2)))
    return ArcFit(ArcKind.ELLIPSE, center, major, minor, (foci[0], foci[1]), residual)
