"""
c-values, the c-polynomial p(A;c) and the homogeneous form r(A;c)(x, y, t).

A c-value of A is c_{i_1} lambda_{j_1} + ... + c_{i_r} lambda_{j_r} over the
nonzero weights c_{i_1}, ..., c_{i_r} and distinct eigenvalue indices.
Assignments that only permute equal weights give the same c-value and are
enumerated once; coincident values are kept with multiplicity so that
deg(A;c) does not depend on A.
"""

import contextlib
import contextvars
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import core
from .errors import DegreeTooLarge, DimensionTooLarge, WeightCountExceedsDimension
from .support import WeightVector, WeightsLike, as_weights, check_dimensions

logger = logging.getLogger(__name__)

MAX_DEGREE = 5000
MAX_ENUMERATION = 200_000
POLY_MAX_N = 8
MATCH_TOL = 1e-7
POLY_SEED = 0x5EED

_match_tol: contextvars.ContextVar = contextvars.ContextVar("match_tol", default=MATCH_TOL)


@contextlib.contextmanager
def match_tolerance(tol: float) -> Iterator[None]:
    """Override the relative c-value matching tolerance inside a ``with`` block."""
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    token = _match_tol.set(tol)
    try:
        yield
    finally:
        _match_tol.reset(token)


def current_match_tolerance() -> float:
    return _match_tol.get()


@dataclass(frozen=True)
class DegreeInfo:
    r: int
    multiplicities: Tuple[int, ...]
    degree: int


def degree(c: WeightsLike, n: Optional[int] = None) -> DegreeInfo:
    """deg(A;c) = n! / ((n - r)! * prod_g m_g!)."""
    c = as_weights(c)
    n = c.n if n is None else int(n)
    mults = tuple(m for _, m in c.signature)
    r = sum(mults)
    if r > n:
        raise WeightCountExceedsDimension(f"{r} nonzero weights but only {n} eigenvalues")
    count = math.factorial(n) // math.factorial(n - r)
    for m in mults:
        count //= math.factorial(m)
    return DegreeInfo(r=r, multiplicities=mults, degree=count)


@dataclass(frozen=True)
class CValueSet:
    """Enumerated c-values with one witness per value.

    ``witnesses[k, t]`` is the (0-based) index into ``spectrum`` assigned to
    the weight at ``positions[t]``.
    """

    values: np.ndarray
    witnesses: np.ndarray
    positions: Tuple[int, ...]
    spectrum: np.ndarray
    scale: float

    def __len__(self) -> int:
        return self.values.size

    @property
    def degree(self) -> int:
        return self.values.size


SpectrumLike = Union[core.Spectrum, Sequence[complex], np.ndarray]


def _assignments(n: int, groups: List[List[int]]) -> Iterator[List[Tuple[int, ...]]]:
    """Disjoint index subsets, one per equal-weight group, in lexicographic order."""
    if not groups:
        yield []
        return

    def walk(g: int, free: Tuple[int, ...], chosen: List[Tuple[int, ...]]):
        if g == len(groups):
            yield list(chosen)
            return
        for subset in itertools.combinations(free, len(groups[g])):
            rest = tuple(j for j in free if j not in subset)
            chosen.append(subset)
            yield from walk(g + 1, rest, chosen)
            chosen.pop()

    yield from walk(0, tuple(range(n)), [])


def enumerate_cvalues(spectrum: SpectrumLike, c: WeightsLike) -> CValueSet:
    """All deg(A;c) c-values, coincident ones included."""
    lam = np.asarray(spectrum.eigenvalues if isinstance(spectrum, core.Spectrum) else spectrum,
                     dtype=np.complex128).ravel()
    c = as_weights(c)
    n = lam.size
    info = degree(c, n)
    if info.degree > MAX_ENUMERATION:
        raise DegreeTooLarge(f"deg(A;c) = {info.degree} exceeds the enumeration limit {MAX_ENUMERATION}")

    positions = c.nonzero_positions
    groups = [[p for p in positions if c.c[p] == value] for value, _ in c.signature]
    slot = {p: t for t, p in enumerate(positions)}
    witnesses = np.zeros((info.degree, len(positions)), dtype=int)
    for k, subsets in enumerate(_assignments(n, groups)):
        for group, subset in zip(groups, subsets):
            for p, j in zip(group, subset):
                witnesses[k, slot[p]] = j

    weights = c.c[list(positions)]
    values = lam[witnesses] @ weights if positions else np.zeros(1, dtype=np.complex128)
    scale = 1.0 + float(np.sum(np.abs(c.c))) * float(np.max(np.abs(lam), initial=0.0))
    return CValueSet(values=values, witnesses=witnesses, positions=positions, spectrum=lam, scale=scale)


def cvalue_set(a, c: WeightsLike) -> CValueSet:
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    return enumerate_cvalues(core.spectrum(a), c)


def multiplicity(cset: CValueSet, value: complex, tol: Optional[float] = None) -> int:
    """Number of enumerated c-values within ``tol * scale`` of ``value``."""
    tol = current_match_tolerance() if tol is None else tol
    return int(np.sum(np.abs(cset.values - value) <= tol * cset.scale))


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def _two_sum(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    s = x + y
    bp = s - x
    return s, (x - (s - bp)) + (y - bp)


def _two_sum_complex(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    sr, er = _two_sum(x.real, y.real)
    si, ei = _two_sum(x.imag, y.imag)
    return sr + 1j * si, er + 1j * ei


def product_coefficients(roots: np.ndarray, seed: int = POLY_SEED) -> np.ndarray:
    """Coefficients (low to high) of prod (t - root), accumulated with compensation.

    Factors are multiplied in a shuffled order fixed by ``seed``.
    """
    roots = np.asarray(roots, dtype=np.complex128).ravel()
    order = np.random.default_rng(seed).permutation(roots.size)
    hi = np.zeros(roots.size + 1, dtype=np.complex128)
    lo = np.zeros_like(hi)
    hi[0] = 1.0
    for root in roots[order]:
        shifted_hi = np.concatenate([[0.0], hi[:-1]])
        shifted_lo = np.concatenate([[0.0], lo[:-1]])
        hi, err = _two_sum_complex(shifted_hi, -root * hi)
        lo = shifted_lo - root * lo + err
    return hi + lo


@dataclass(frozen=True)
class CPolynomial:
    """Monic p(A;c); ``coefficients`` are low to high."""

    coefficients: np.ndarray
    roots: np.ndarray

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, t):
        t = np.asarray(t, dtype=np.complex128)
        value = np.prod(t[..., None] - self.roots, axis=-1)
        return complex(value) if value.ndim == 0 else value


def check_guards(n: int, c: WeightVector) -> None:
    if n > POLY_MAX_N:
        raise DimensionTooLarge(f"c-polynomials need n <= {POLY_MAX_N}, got {n}")
    info = degree(c, n)
    if info.degree > MAX_DEGREE:
        raise DegreeTooLarge(f"deg(A;c) = {info.degree} exceeds {MAX_DEGREE}")


def cpolynomial(a, c: WeightsLike) -> CPolynomial:
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    check_guards(a.shape[0], c)
    cset = cvalue_set(a, c)
    coeffs = product_coefficients(cset.values)
    logger.debug("cpolynomial: degree %d", coeffs.size - 1)
    return CPolynomial(coefficients=coeffs, roots=cset.values)


def eval_r(a, c: WeightsLike, x: complex, y: complex, t: complex) -> complex:
    """r(A;c)(x, y, t) = p(xA + yA*; c)(t), evaluated in product form."""
    a = core.as_matrix(a)
    c = as_weights(c)
    check_dimensions(a, c)
    check_guards(a.shape[0], c)
    m = x * a + y * core.adjoint(a)
    cset = cvalue_set(m, c)
    return complex(np.prod(complex(t) - cset.values))


def common_root_residual(a, c: WeightsLike, theta: float, value: float) -> float:
    """Relative size of r(A;c)(e^{i theta}, e^{-i theta}, 2 value).

    xA + yA* at (e^{i theta}, e^{-i theta}) is 2 H_theta(A), so a weighted
    support value ``value`` corresponds to the root t = 2 value.
    """
    x = np.exp(1j * theta)
    a = core.as_matrix(a)
    cset = cvalue_set(x * a + np.conj(x) * core.adjoint(a), c)
    t = 2.0 * value
    num = np.abs(t - cset.values)
    den = np.abs(t) + np.abs(cset.values) + 1e-300
    return float(np.prod(num / den))


# ---------------------------------------------------------------------------
# Common values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommonValue:
    value: complex
    witness_a: Tuple[int, ...]
    witness_b: Tuple[int, ...]
    distance: float = 0.0


def _match_pairs(first: CValueSet, second: CValueSet, tol: float) -> List[Tuple[int, int, float]]:
    pairs = []
    for start in range(0, first.values.size, 512):
        block = first.values[start:start + 512]
        dist = np.abs(block[:, None] - second.values[None, :])
        for i, j in zip(*np.nonzero(dist <= tol)):
            pairs.append((start + int(i), int(j), float(dist[i, j])))
    return pairs


def common_cvalue(a, c: WeightsLike, b, d: WeightsLike, tol: Optional[float] = None) -> List[CommonValue]:
    """Every c-value of A lying within ``tol * scale`` of a d-value of B."""
    first = cvalue_set(a, c)
    second = cvalue_set(b, d)
    tol = (current_match_tolerance() if tol is None else tol) * max(first.scale, second.scale)
    return [
        CommonValue(
            value=complex(first.values[i]),
            witness_a=tuple(int(x) for x in first.witnesses[i]),
            witness_b=tuple(int(x) for x in second.witnesses[j]),
            distance=dist,
        )
        for i, j, dist in _match_pairs(first, second, tol)
    ]


def all_cvalues_subset(a, c: WeightsLike, b, d: WeightsLike, tol: Optional[float] = None) -> bool:
    first = cvalue_set(a, c)
    second = cvalue_set(b, d)
    tol = (current_match_tolerance() if tol is None else tol) * max(first.scale, second.scale)
    matched = {i for i, _, _ in _match_pairs(first, second, tol)}
    return len(matched) == first.values.size


def min_separation(first: CValueSet, second: CValueSet) -> float:
    """Smallest distance between a value of ``first`` and one of ``second``."""
    best = np.inf
    for start in range(0, first.values.size, 512):
        block = first.values[start:start + 512]
        best = min(best, float(np.min(np.abs(block[:, None] - second.values[None, :]))))
    return best


# ---------------------------------------------------------------------------
# JSON export
# ---------------------------------------------------------------------------

def _pair(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


def cvalue_set_to_json(cset: CValueSet) -> dict:
    return {
        "degree": cset.degree,
        "spectrum": [_pair(z) for z in cset.spectrum],
        "positions": list(cset.positions),
        "values": [
            {"value": _pair(v), "witness": [int(j) for j in w]}
            for v, w in zip(cset.values, cset.witnesses)
        ],
    }


def cpolynomial_to_json(poly: CPolynomial) -> dict:
    return {
        "degree": poly.degree,
        "coefficients": [_pair(z) for z in poly.coefficients],
    }


def common_values_to_json(values: Sequence[CommonValue]) -> List[dict]:
    return [
        {"value": _pair(v.value), "witnessA": list(v.witness_a), "witnessB": list(v.witness_b)}
        for v in values
    ]
