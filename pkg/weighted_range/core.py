"""
Dense complex matrices, Hermitian parts H_theta(A) and the two eigensolvers.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128. ``as_matrix``
validates and freezes them; every other function treats its inputs as
immutable values.
"""

import contextlib
import contextvars
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    DimensionTooLarge,
    InputFormatError,
    InvalidMatrix,
    NonConvergence,
    NotHermitian,
)

logger = logging.getLogger(__name__)

# Entries larger than this make the fixed absolute tolerances meaningless
MAX_ENTRY = 1e12

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 64

ABERTH_TOL = 1e-12
ABERTH_MAX_ITER = 200
GENERAL_MAX_N = 12

HERMITIAN_TOL = 1e-10

_eigen_tol: contextvars.ContextVar = contextvars.ContextVar("eigen_tol", default=JACOBI_TOL)

MatrixLike = Union[np.ndarray, Sequence[Sequence[complex]]]
Angle = Union[float, np.ndarray]


@contextlib.contextmanager
def eigen_tolerance(tol: float) -> Iterator[None]:
    """Override the Jacobi off-diagonal tolerance inside a ``with`` block."""
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    token = _eigen_tol.set(tol)
    try:
        yield
    finally:
        _eigen_tol.reset(token)


def as_matrix(a: MatrixLike) -> np.ndarray:
    """Validate ``a`` as a square, finite, scale-guarded complex matrix."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise InvalidMatrix(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix("matrix has non-finite entries")
    if np.max(np.abs(arr)) > MAX_ENTRY:
        raise InvalidMatrix(f"matrix entries exceed {MAX_ENTRY:g} in magnitude")
    arr.setflags(write=False)
    return arr


def matrix_scale(a: np.ndarray) -> float:
    """1 + max |a_jk|, the reference size for relative tolerances."""
    return 1.0 + float(np.max(np.abs(a)))


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def symmetrize(h: np.ndarray) -> np.ndarray:
    """Return (H + H*)/2 with an exactly real diagonal."""
    h = 0.5 * (h + adjoint(h))
    idx = np.arange(h.shape[-1])
    h[..., idx, idx] = h[..., idx, idx].real
    return h


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return float(np.max(np.abs(a - adjoint(a)))) <= tol * matrix_scale(a)


def is_normal(a: np.ndarray, tol: float = 1e-10) -> bool:
    comm = a @ adjoint(a) - adjoint(a) @ a
    norm = np.linalg.norm(a)
    return float(np.linalg.norm(comm)) <= tol * max(norm * norm, 1e-300)


def herm_part(a: MatrixLike, theta: Angle) -> np.ndarray:
    """H_theta(A) = (e^{i theta} A + e^{-i theta} A*)/2.

    ``theta`` may be an array, in which case a stack of shape
    ``theta.shape + (n, n)`` is returned.
    """
    a = as_matrix(a)
    theta = np.asarray(theta, dtype=float)
    re_part = 0.5 * (a + adjoint(a))
    im_part = 0.5j * (a - adjoint(a))
    cos = np.cos(theta)[..., None, None]
    sin = np.sin(theta)[..., None, None]
    return symmetrize(cos * re_part + sin * im_part)


def as_hermitian(h: MatrixLike) -> np.ndarray:
    arr = np.array(h, dtype=np.complex128)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise InvalidMatrix(f"expected square matrices, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix("matrix has non-finite entries")
    scale = 1.0 + np.max(np.abs(arr))
    if np.max(np.abs(arr - adjoint(arr))) > HERMITIAN_TOL * scale:
        raise NotHermitian("matrix is not Hermitian")
    return symmetrize(arr)


@dataclass(frozen=True)
class HermitianEigen:
    """Descending eigenvalues with orthonormal eigenvectors (as columns).

    Batched inputs give ``values`` of shape (..., n) and ``vectors`` of
    shape (..., n, n).
    """

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


@dataclass(frozen=True)
class Spectrum:
    """Multiset of eigenvalues of a general matrix, with multiplicity."""

    eigenvalues: np.ndarray

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def _off_norm_sq(a: np.ndarray) -> np.ndarray:
    off = ~np.eye(a.shape[-1], dtype=bool)
    return np.sum(np.abs(a[..., off]) ** 2, axis=-1)


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero a[..., p, q] in place with a complex Jacobi rotation."""
    apq = a[:, p, q]
    mag = np.abs(apq)
    active = mag > 0.0
    if not np.any(active):
        return
    phase = np.where(active, apq / np.where(active, mag, 1.0), 1.0)
    d = a[:, q, q].real - a[:, p, p].real
    two_t = np.arctan2(2.0 * mag, d)
    two_t = np.where(d < 0.0, two_t - np.pi, two_t)
    c = np.where(active, np.cos(0.5 * two_t), 1.0)
    s = np.where(active, np.sin(0.5 * two_t), 0.0)
    e_minus = np.conj(phase)

    c_col = c[:, None]
    s_col = s[:, None]
    # columns: A <- A U with U = diag(1, e^{-i phi}) R
    col_p = a[:, :, p].copy()
    col_q = a[:, :, q].copy()
    a[:, :, p] = c_col * col_p - s_col * e_minus[:, None] * col_q
    a[:, :, q] = s_col * col_p + c_col * e_minus[:, None] * col_q
    # rows: A <- U* A
    row_p = a[:, p, :].copy()
    row_q = a[:, q, :].copy()
    a[:, p, :] = c_col * row_p - s_col * phase[:, None] * row_q
    a[:, q, :] = s_col * row_p + c_col * phase[:, None] * row_q
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    a[:, p, p] = a[:, p, p].real
    a[:, q, q] = a[:, q, q].real

    vec_p = v[:, :, p].copy()
    vec_q = v[:, :, q].copy()
    v[:, :, p] = c_col * vec_p - s_col * e_minus[:, None] * vec_q
    v[:, :, q] = s_col * vec_p + c_col * e_minus[:, None] * vec_q


def eig_hermitian(h: MatrixLike, tol: Optional[float] = None) -> HermitianEigen:
    """Cyclic complex Jacobi eigensolver for one Hermitian matrix or a stack.

    Sweeps stop once the off-diagonal Frobenius norm of every matrix in the
    stack is at most ``tol * ||H||_F``.
    """
    tol = _eigen_tol.get() if tol is None else tol
    arr = as_hermitian(h)
    batch_shape = arr.shape[:-2]
    n = arr.shape[-1]
    a = arr.reshape((-1, n, n)).copy()
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), a.shape).copy()

    limit = (tol * np.linalg.norm(a, axis=(-2, -1))) ** 2
    sweeps = 0
    while True:
        off = _off_norm_sq(a)
        if np.all(off <= limit):
            break
        if sweeps >= JACOBI_MAX_SWEEPS:
            worst = float(np.sqrt(np.max(off)))
            raise NonConvergence(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps", residual=worst
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
        sweeps += 1

    values = np.diagonal(a, axis1=-2, axis2=-1).real
    order = np.argsort(-values, axis=-1, kind="stable")
    values = np.take_along_axis(values, order, axis=-1)
    vectors = np.take_along_axis(v, order[:, None, :], axis=-1)
    logger.debug("Jacobi: %d matrices of size %d in %d sweeps", a.shape[0], n, sweeps)
    return HermitianEigen(
        values=values.reshape(batch_shape + (n,)),
        vectors=vectors.reshape(batch_shape + (n, n)),
        sweeps=sweeps,
    )


def charpoly(a: MatrixLike) -> np.ndarray:
    """Monic characteristic polynomial via Faddeev-LeVerrier, low-to-high."""
    a = as_matrix(a)
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    eye = np.eye(n, dtype=np.complex128)
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(a @ m) / k
    return coeffs


def _backward_error(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    absz = np.abs(z)
    denom = P.polyval(absz, np.abs(coeffs))
    return np.abs(P.polyval(z, coeffs)) / np.maximum(denom, 1e-300)


def aberth_roots(coeffs: Sequence[complex], radius: Optional[float] = None) -> np.ndarray:
    """All roots of a polynomial (coefficients low-to-high) by Aberth-Ehrlich."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    coeffs = np.trim_zeros(coeffs, "b")
    degree = len(coeffs) - 1
    if degree < 1:
        return np.zeros(0, dtype=np.complex128)
    coeffs = coeffs / coeffs[-1]
    if degree == 1:
        return np.array([-coeffs[0]])

    if radius is None:
        # Cauchy bound
        radius = 1.0 + float(np.max(np.abs(coeffs[:-1])))
    deriv = P.polyder(coeffs)
    angles = 2.0 * np.pi * np.arange(degree) / degree + 0.4
    z = radius * np.exp(1j * angles)

    for iteration in range(ABERTH_MAX_ITER):
        pz = P.polyval(z, coeffs)
        dpz = P.polyval(z, deriv)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(pz == 0, 0.0, pz / dpz)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            step = w / (1.0 - w * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= ABERTH_TOL * (1.0 + np.abs(z))):
            logger.debug("Aberth converged after %d iterations (degree %d)", iteration + 1, degree)
            return z

    residual = float(np.max(_backward_error(coeffs, z)))
    if residual <= 1e-10:
        logger.debug("Aberth stalled but backward error %.2e is acceptable", residual)
        return z
    raise NonConvergence(f"Aberth iteration stalled after {ABERTH_MAX_ITER} iterations", residual)


def sort_complex(values: np.ndarray) -> np.ndarray:
    """Deterministic (real, imag) ordering of a complex array."""
    values = np.asarray(values, dtype=np.complex128)
    return values[np.lexsort((values.imag, values.real))]


def eig_general(a: MatrixLike) -> Spectrum:
    """Eigenvalues of a general matrix with n <= 12."""
    a = as_matrix(a)
    n = a.shape[0]
    if n > GENERAL_MAX_N:
        raise DimensionTooLarge(f"general eigenvalues need n <= {GENERAL_MAX_N}, got {n}")
    coeffs = charpoly(a)
    radius = 1.0 + float(np.max(np.sum(np.abs(a), axis=1)))
    roots = aberth_roots(coeffs, radius=radius)
    return Spectrum(eigenvalues=sort_complex(roots))


def eig_normal(a: MatrixLike) -> Optional[np.ndarray]:
    """Eigenvalues of a normal matrix from the eigenvectors of one Hermitian part.

    Returns None when no tried direction diagonalizes ``a``.
    """
    a = as_matrix(a)
    tol = 1e-10 * matrix_scale(a)
    for theta in (0.5773, 1.2345, 2.2361):
        vecs = eig_hermitian(herm_part(a, theta)).vectors
        d = adjoint(vecs) @ a @ vecs
        if np.linalg.norm(d - np.diag(np.diag(d))) <= tol:
            return np.diag(d).copy()
    return None


def spectrum(a: MatrixLike) -> Spectrum:
    """Eigenvalues by the most accurate solver that applies to ``a``."""
    a = as_matrix(a)
    if is_hermitian(a):
        values = eig_hermitian(a).values.astype(np.complex128)
        return Spectrum(eigenvalues=sort_complex(values))
    if is_normal(a):
        values = eig_normal(a)
        if values is not None:
            return Spectrum(eigenvalues=sort_complex(values))
    return eig_general(a)


# ---------------------------------------------------------------------------
# Random ensembles and sampling
# ---------------------------------------------------------------------------

def random_complex_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Entries i.i.d. complex standard normal."""
    return as_matrix(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return as_matrix(symmetrize(g))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvector matrix of a random Hermitian matrix."""
    return as_matrix(eig_hermitian(random_hermitian(n, rng)).vectors)


def random_normal_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    u = random_unitary(n, rng)
    eigs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return as_matrix(u @ np.diag(eigs) @ adjoint(u))


def rayleigh_samples(a: MatrixLike, count: int, rng: np.random.Generator) -> np.ndarray:
    """x*Ax for ``count`` random unit vectors x (points of W(A))."""
    a = as_matrix(a)
    n = a.shape[0]
    x = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    x /= np.linalg.norm(x, axis=1)[:, None]
    return np.einsum("ki,ij,kj->k", np.conj(x), a, x)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def _read_json(path: Union[str, Path]) -> object:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: {e.msg}", e.lineno, e.colno) from e
    except OSError as e:
        raise InputFormatError(f"{path}: {e.strerror}") from e


def _parse_entry(value: object, where: str) -> complex:
    if isinstance(value, bool):
        raise InputFormatError(f"{where}: expected a number or [re, im]")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        return complex(value[0], value[1])
    raise InputFormatError(f"{where}: expected a number or [re, im], got {value!r}")


def parse_matrix(data: object, source: str = "<matrix>") -> np.ndarray:
    if not isinstance(data, dict) or "entries" not in data:
        raise InputFormatError(f"{source}: expected an object with 'n' and 'entries'")
    rows = data["entries"]
    if not isinstance(rows, list) or not rows:
        raise InputFormatError(f"{source}: 'entries' must be a non-empty list of rows")
    n = data.get("n", len(rows))
    if not isinstance(n, int) or isinstance(n, bool) or n != len(rows):
        raise InputFormatError(f"{source}: 'n' is {n!r} but there are {len(rows)} rows")
    parsed = []
    for j, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InputFormatError(f"{source}: row {j} does not have {n} entries (matrix must be square)")
        parsed.append([_parse_entry(x, f"{source}: entry ({j}, {k})") for k, x in enumerate(row)])
    try:
        return as_matrix(parsed)
    except InvalidMatrix as e:
        raise InputFormatError(f"{source}: {e}") from e


def parse_weights(data: object, source: str = "<weights>") -> np.ndarray:
    if not isinstance(data, dict) or not isinstance(data.get("c"), list) or not data["c"]:
        raise InputFormatError(f"{source}: expected an object with a non-empty list 'c'")
    values = data["c"]
    for j, x in enumerate(values):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not np.isfinite(x):
            raise InputFormatError(f"{source}: weight {j} is not a finite real number")
    return np.array(values, dtype=float)


def load_matrix(path: Union[str, Path]) -> np.ndarray:
    return parse_matrix(_read_json(path), str(path))


def load_weights(path: Union[str, Path]) -> np.ndarray:
    return parse_weights(_read_json(path), str(path))


def matrix_to_json(a: MatrixLike) -> dict:
    a = as_matrix(a)
    return {
        "n": int(a.shape[0]),
        "entries": [[[float(x.real), float(x.imag)] for x in row] for row in a],
    }


def weights_to_json(c: Sequence[float]) -> dict:
    return {"c": [float(x) for x in np.asarray(c, dtype=float)]}
