"""
Weighted support function h_{A,c}(theta) = sum_j c_j lambda_j(H_theta(A)).

Weights are applied to the descending eigenvalues exactly as given; the
c-numerical range W_c(A) is reached by sorting the weights first with
``sort_weights_desc``.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import core
from .errors import DegenerateEigenvalue, DimensionMismatch

logger = logging.getLogger(__name__)

DEFAULT_GRID = 4096
MIN_ROOT_GRID = 256
FD_STEP = 1e-5
ROOT_XTOL = 1e-10
ZERO_GAP = 1e-12
TANGENT_GAP = 1e-8
GAP_TOL = 1e-8


@dataclass(frozen=True)
class WeightVector:
    """Real weights c with the signature of their nonzero entries."""

    c: np.ndarray

    def __post_init__(self):
        arr = np.array(self.c, dtype=float).ravel()
        if arr.size == 0 or not np.all(np.isfinite(arr)):
            raise ValueError("weights must be a non-empty vector of finite reals")
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)

    def __len__(self) -> int:
        return self.c.size

    @property
    def n(self) -> int:
        return self.c.size

    @property
    def nonzero_positions(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.c))

    @property
    def r(self) -> int:
        return len(self.nonzero_positions)

    @property
    def signature(self) -> List[Tuple[float, int]]:
        """(weight value, multiplicity) over nonzero entries, largest value first."""
        values, counts = np.unique(self.c[self.c != 0.0], return_counts=True)
        return [(float(v), int(m)) for v, m in zip(values[::-1], counts[::-1])]

    @property
    def total(self) -> float:
        return float(np.sum(self.c))

    @property
    def is_sorted_desc(self) -> bool:
        return bool(np.all(np.diff(self.c) <= 0.0))

    def reversed(self) -> "WeightVector":
        return WeightVector(self.c[::-1])


WeightsLike = Union[WeightVector, Sequence[float], np.ndarray]


def as_weights(c: WeightsLike) -> WeightVector:
    return c if isinstance(c, WeightVector) else WeightVector(c)


def sort_weights_desc(c: WeightsLike) -> Tuple[WeightVector, np.ndarray]:
    """Descending rearrangement and the permutation sigma with c[sigma] sorted.

    The permutation is 0-based; ties keep their original order.
    """
    c = as_weights(c)
    sigma = np.argsort(-c.c, kind="stable")
    return WeightVector(c.c[sigma]), sigma


def c_numerical_weights(c: WeightsLike) -> WeightVector:
    """Weights realizing W_c(A) = W(A; sorted c)."""
    return sort_weights_desc(c)[0]


def rank_k_weights(k: int, n: int) -> WeightVector:
    """e_k, so that W(A; e_k) is the rank-k numerical range."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    c = np.zeros(n)
    c[k - 1] = 1.0
    return WeightVector(c)


def k_numerical_weights(k: int, n: int) -> WeightVector:
    """(1/k, ..., 1/k, 0, ..., 0), the k-numerical range."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    c = np.zeros(n)
    c[:k] = 1.0 / k
    return WeightVector(c)


def check_dimensions(a: np.ndarray, c: WeightVector) -> None:
    if c.n != a.shape[0]:
        raise DimensionMismatch(f"weight vector has length {c.n}, matrix is {a.shape[0]}x{a.shape[0]}")


def weighted_support(a, c: WeightsLike, theta) -> Union[float, np.ndarray]:
    """sum_j c_j lambda_j(H_theta(A)), vectorized over ``theta``."""
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    eig = core.eig_hermitian(core.herm_part(a, theta))
    h = eig.values @ c.c
    return float(h) if np.ndim(h) == 0 else h


def _derivative_matrix(a: np.ndarray, theta) -> np.ndarray:
    """dH_theta/dtheta = (i e^{i theta} A - i e^{-i theta} A*)/2."""
    theta = np.asarray(theta, dtype=float)
    re_part = 0.5 * (a + core.adjoint(a))
    im_part = 0.5j * (a - core.adjoint(a))
    return -np.sin(theta)[..., None, None] * re_part + np.cos(theta)[..., None, None] * im_part


def _gap_violations(values: np.ndarray, c: np.ndarray, tol: float) -> np.ndarray:
    """True where adjacent eigenvalues with different weights are not separated."""
    gaps = values[..., :-1] - values[..., 1:]
    weighted = c[:-1] != c[1:]
    return np.any((gaps <= tol) & weighted, axis=-1)


def _hellmann_feynman(a: np.ndarray, c: WeightVector, theta) -> Tuple[np.ndarray, np.ndarray]:
    eig = core.eig_hermitian(core.herm_part(a, theta))
    dh = _derivative_matrix(a, theta)
    vecs = eig.vectors
    # x_j* H' x_j for every column j
    diag = np.einsum("...ij,...ik,...kj->...j", np.conj(vecs), dh, vecs).real
    tol = GAP_TOL * core.matrix_scale(a)
    return diag @ c.c, _gap_violations(eig.values, c.c, tol)


def support_derivative(a, c: WeightsLike, theta: float) -> float:
    """d/dtheta of the weighted support, by Hellmann-Feynman."""
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    value, degenerate = _hellmann_feynman(a, c, float(theta))
    if bool(degenerate):
        raise DegenerateEigenvalue(
            f"eigenvalues with different weights coalesce at theta={float(theta):.12g}"
        )
    return float(value)


def support_gap(a, c: WeightsLike, b, d: WeightsLike, theta) -> Union[float, np.ndarray]:
    return weighted_support(a, c, theta) - weighted_support(b, d, theta)


def uniform_grid(grid_n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(grid_n) / grid_n


@dataclass(frozen=True)
class SupportProfile:
    grid: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    fallback: np.ndarray = field(repr=False)

    def rows(self) -> List[Tuple[float, float, float]]:
        return [(float(t), float(h), float(dh)) for t, h, dh in zip(self.grid, self.values, self.derivatives)]


def support_profile(a, c: WeightsLike, grid_n: int = DEFAULT_GRID) -> SupportProfile:
    """Values and derivative estimates on the uniform grid of ``grid_n`` angles.

    Samples where the Hellmann-Feynman gap condition fails use a one-sided
    finite difference instead; they are flagged in ``fallback``.
    """
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    grid = uniform_grid(grid_n)
    values = weighted_support(a, c, grid)
    derivs, degenerate = _hellmann_feynman(a, c, grid)
    if np.any(degenerate):
        ahead = weighted_support(a, c, grid[degenerate] + FD_STEP)
        derivs = np.where(degenerate, 0.0, derivs)
        derivs[degenerate] = (ahead - values[degenerate]) / FD_STEP
        logger.info("support profile: %d samples used finite differences", int(np.sum(degenerate)))
    return SupportProfile(grid=grid, values=values, derivatives=derivs, fallback=degenerate)


# ---------------------------------------------------------------------------
# Equal-support angles
# ---------------------------------------------------------------------------

class RootKind(str, Enum):
    CROSSING = "crossing"
    TANGENTIAL = "tangential"


@dataclass(frozen=True)
class RootAngle:
    theta: float
    kind: RootKind


@dataclass(frozen=True)
class EqualSupportAngles:
    """Zeros of the support gap on [0, 2pi).

    ``identically_zero`` is the sentinel for a gap vanishing on the whole
    grid; ``zero_arcs`` lists (start, end) angles of grid arcs on which the
    gap vanishes. Isolated roots are in ``roots``, sorted ascending.
    """

    roots: Tuple[RootAngle, ...] = ()
    identically_zero: bool = False
    zero_arcs: Tuple[Tuple[float, float], ...] = ()
    grid_n: int = DEFAULT_GRID

    @property
    def crossing(self) -> List[float]:
        return [r.theta for r in self.roots if r.kind is RootKind.CROSSING]

    @property
    def tangential(self) -> List[float]:
        return [r.theta for r in self.roots if r.kind is RootKind.TANGENTIAL]

    @property
    def angles(self) -> List[float]:
        return [r.theta for r in self.roots]


def _bisect(func, lo: np.ndarray, hi: np.ndarray, glo: np.ndarray) -> np.ndarray:
    """Simultaneous bisection of bracketed sign changes."""
    lo = lo.copy()
    hi = hi.copy()
    glo = glo.copy()
    for _ in range(80):
        if np.all(hi - lo <= ROOT_XTOL):
            break
        mid = 0.5 * (lo + hi)
        gmid = func(mid)
        left = np.sign(gmid) == np.sign(glo)
        lo = np.where(left, mid, lo)
        glo = np.where(left, gmid, glo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


_GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)


def _golden_min(func, lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Simultaneous golden-section minimization of |func| on [lo, hi]."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = np.abs(func(x1))
    f2 = np.abs(func(x2))
    for _ in range(60):
        if np.all(hi - lo <= ROOT_XTOL):
            break
        left = f1 < f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        new_x1 = hi - _GOLDEN * (hi - lo)
        new_x2 = lo + _GOLDEN * (hi - lo)
        x2_next = np.where(left, x1, new_x2)
        x1_next = np.where(left, new_x1, x2)
        f_new = np.abs(func(np.where(left, new_x1, new_x2)))
        f1, f2 = np.where(left, f_new, f2), np.where(left, f1, f_new)
        x1, x2 = x1_next, x2_next
    best = np.where(f1 < f2, x1, x2)
    return best, np.minimum(f1, f2)


def cyclic_runs(zero: np.ndarray) -> List[Tuple[int, int]]:
    """Maximal cyclic runs of True as (start index, length)."""
    n = zero.size
    if not np.any(zero) or np.all(zero):
        return []
    start = int(np.flatnonzero(~zero)[0]) + 1
    runs = []
    run_start = None
    for k in range(n):
        i = (start + k) % n
        if zero[i] and run_start is None:
            run_start, length = i, 0
        if zero[i]:
            length += 1
        elif run_start is not None:
            runs.append((run_start, length))
            run_start = None
    if run_start is not None:
        runs.append((run_start, length))
    return runs


def find_equal_support_angles(a, c: WeightsLike, b, d: WeightsLike, grid_n: int = DEFAULT_GRID) -> EqualSupportAngles:
    """All theta in [0, 2pi) where the weighted supports of (A, c) and (B, d) agree."""
    if grid_n < MIN_ROOT_GRID:
        raise ValueError(f"grid must have at least {MIN_ROOT_GRID} samples, got {grid_n}")
    a = core.as_matrix(a)
    b = core.as_matrix(b)
    c = as_weights(c)
    d = as_weights(d)
    check_dimensions(a, c)
    check_dimensions(b, d)

    def gap(theta):
        return weighted_support(a, c, theta) - weighted_support(b, d, theta)

    step = 2.0 * np.pi / grid_n
    grid = uniform_grid(grid_n)
    g = gap(grid)
    zero = np.abs(g) < ZERO_GAP
    if np.all(zero):
        return EqualSupportAngles(identically_zero=True, grid_n=grid_n)

    roots: List[RootAngle] = []
    arcs: List[Tuple[float, float]] = []
    for start, length in cyclic_runs(zero):
        if length >= 2:
            end = (start + length - 1) % grid_n
            arcs.append((float(grid[start]), float(grid[end])))
            continue
        before = g[(start - 1) % grid_n]
        after = g[(start + 1) % grid_n]
        kind = RootKind.CROSSING if before * after < 0 else RootKind.TANGENTIAL
        roots.append(RootAngle(float(grid[start]), kind))

    nxt = np.roll(g, -1)
    bracket = (g * nxt < 0) & ~zero & ~np.roll(zero, -1)
    idx = np.flatnonzero(bracket)
    if idx.size:
        found = _bisect(gap, grid[idx], grid[idx] + step, g[idx])
        roots.extend(RootAngle(float(t % (2.0 * np.pi)), RootKind.CROSSING) for t in found)

    prev = np.roll(g, 1)
    absg = np.abs(g)
    local_min = (
        ~zero
        & (absg <= np.abs(prev))
        & (absg <= np.abs(nxt))
        & (g * prev > 0)
        & (g * nxt > 0)
        & (absg < 1e3 * TANGENT_GAP + 1e-3 * step * step * core.matrix_scale(a))
    )
    idx = np.flatnonzero(local_min)
    if idx.size:
        best, fmin = _golden_min(gap, grid[idx] - step, grid[idx] + step)
        for t, f in zip(best, fmin):
            if f <= TANGENT_GAP:
                roots.append(RootAngle(float(t % (2.0 * np.pi)), RootKind.TANGENTIAL))

    roots.sort(key=lambda r: r.theta)
    logger.debug(
        "equal-support angles: %d crossing, %d tangential, %d zero arcs",
        sum(r.kind is RootKind.CROSSING for r in roots),
        sum(r.kind is RootKind.TANGENTIAL for r in roots),
        len(arcs),
    )
    return EqualSupportAngles(roots=tuple(roots), zero_arcs=tuple(arcs), grid_n=grid_n)
