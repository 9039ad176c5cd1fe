"""
Shared pytest fixtures and configuration for weighted-range tests.
"""
import json
from pathlib import Path

import numpy as np
import pytest


# ============================================================================
# Path Fixtures
# ============================================================================

@pytest.fixture
def fixtures_dir():
    """Return the path to the fixtures directory."""
    return Path(__file__).parent / "fixtures"


@pytest.fixture
def temp_home(tmp_path, monkeypatch):
    """Create a temporary home directory and patch Path.home()."""
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setattr(Path, "home", lambda: home)
    return home


@pytest.fixture
def temp_cwd(tmp_path, monkeypatch):
    """Create a temporary working directory and change to it."""
    cwd = tmp_path / "project"
    cwd.mkdir()
    monkeypatch.chdir(cwd)
    return cwd


# ============================================================================
# Environment Fixtures
# ============================================================================

@pytest.fixture
def clean_env(monkeypatch):
    """Remove all WNR_* environment variables."""
    for key in ("GRID_N", "SEED", "TOL_EIG", "TOL_MATCH", "OUTPUT_DIR", "FORMATS", "LOG_LEVEL"):
        monkeypatch.delenv(f"WNR_{key}", raising=False)


# ============================================================================
# Matrix Fixtures
# ============================================================================

@pytest.fixture
def jordan2():
    """2x2 nilpotent Jordan block; W(J_2) is the disc of radius 1/2."""
    return np.array([[0, 1], [0, 0]], dtype=complex)


@pytest.fixture
def jordan3():
    """3x3 nilpotent Jordan block; W(J_3) is the disc of radius cos(pi/4)."""
    return np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)


@pytest.fixture
def square_matrix():
    """diag(1, i, -1, -i); W(A) is the square with those vertices."""
    return np.diag([1, 1j, -1, -1j])


@pytest.fixture
def ellipse_matrix():
    """W([[0, 1], [0, 2]]) is the ellipse with foci 0 and 2."""
    return np.array([[0, 1], [0, 2]], dtype=complex)


# ============================================================================
# Weight Fixtures
# ============================================================================

@pytest.fixture
def e1():
    """Return a factory for the first standard basis vector of length n."""
    def _make(n):
        c = np.zeros(n)
        c[0] = 1.0
        return c
    return _make


# ============================================================================
# Random Fixtures
# ============================================================================

@pytest.fixture
def rng():
    """Seeded generator so that every test run draws the same matrices."""
    return np.random.default_rng(20240601)


# ============================================================================
# Helper Functions
# ============================================================================

def create_config_file(path: Path, **kwargs):
    """Helper to create a config file with specified options."""
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w") as f:
        for key, value in kwargs.items():
            f.write(f"{key}={value}\n")

    return path


def create_matrix_file(path: Path, matrix) -> Path:
    """Write ``matrix`` in the {"n", "entries"} format with [re, im] pairs."""
    matrix = np.asarray(matrix, dtype=complex)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {
        "n": int(matrix.shape[0]),
        "entries": [[[float(x.real), float(x.imag)] for x in row] for row in matrix],
    }
    path.write_text(json.dumps(data))
    return path


def create_weights_file(path: Path, weights) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"c": [float(x) for x in weights]}))
    return path


# Expose helper functions for import
__all__ = [
    "create_config_file",
    "create_matrix_file",
    "create_weights_file",
]
