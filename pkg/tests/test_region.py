"""
Tests for region construction, geometry helpers and arc fits.
"""
import numpy as np
import pytest

from weighted_range import core
from weighted_range.errors import DegenerateConfiguration, DimensionTooLarge, NotNormal
from weighted_range.region import (
    ArcKind,
    HalfPlane,
    RegionKind,
    boundary_distance,
    boundary_intersections,
    boundary_rows,
    build_region,
    chord_angle,
    common_supporting_angle,
    curved_runs,
    detect_sharp_points,
    distance_to_region,
    fit_circle,
    fit_ellipse,
    hausdorff_distance,
    hermitian_segment,
    intersect_halfplanes,
    is_empty,
    polygon_for_normal,
    sharp_threshold,
    switching_angles,
)
from weighted_range.support import uniform_grid, weighted_support
from weighted_range.verify import remark_fixture


def disc_points(center, radius, count=200):
    return center + radius * np.exp(2j * np.pi * np.arange(count) / count)


class TestHalfPlaneIntersection:
    """Test the half-plane clipper directly."""

    def test_unit_square(self):
        """Test |x| <= 1, |y| <= 1 from four axis half-planes."""
        thetas = 0.5 * np.pi * np.arange(4)
        region = intersect_halfplanes(thetas, np.ones(4))
        assert region.kind is RegionKind.FULL_2D
        assert len(region) == 4
        assert region.area == pytest.approx(4.0, rel=1e-8)

    def test_empty(self):
        """Test x <= -1 together with x >= 1."""
        thetas = 0.5 * np.pi * np.arange(4)
        region = intersect_halfplanes(thetas, np.array([-1.0, 1.0, -1.0, 1.0]))
        assert region.empty

    def test_point(self):
        """Test half-planes all passing through the origin."""
        thetas = 2 * np.pi * np.arange(16) / 16
        region = intersect_halfplanes(thetas, np.zeros(16))
        assert region.kind is RegionKind.POINT
        assert abs(region.vertices[0]) < 1e-8


class TestBuildRegion:
    """Test outer polygons of W(A;c)."""

    def test_classical_disc(self, jordan2, rng):
        """Test that W(J_2) is the disc of radius 1/2."""
        region = build_region(jordan2, [1, 0], 4096)
        assert region.is_2d
        radii = np.abs(region.vertices)
        assert radii.min() >= 0.5 - 1e-9
        assert radii.max() <= 0.5 / np.cos(np.pi / 4096) + 1e-9
        assert region.area == pytest.approx(np.pi / 4, rel=1e-5)
        samples = core.rayleigh_samples(jordan2, 10000, rng)
        assert np.all(region.contains(samples))

    def test_square_collapses_to_four_vertices(self, square_matrix):
        """Test diag(1, i, -1, -i) with c = e_1."""
        region = build_region(square_matrix, [1, 0, 0, 0], 4096)
        assert region.is_2d
        assert len(region) == 4
        assert np.allclose(core.sort_complex(region.vertices), [-1, -1j, 1j, 1], atol=1e-8)

    def test_hermitian_segments(self, rng):
        """Test that Hermitian matrices give the segment between the extreme weighted sums."""
        for _ in range(100):
            n = int(rng.integers(1, 7))
            h = core.random_hermitian(n, rng)
            c = rng.standard_normal(n)
            interval = hermitian_segment(h, c)
            region = build_region(h, c, 1024)
            tol = 1e-8 * region.scale
            if interval.empty:
                assert region.empty
                continue
            if interval.length <= tol:
                assert region.kind is RegionKind.POINT
                assert abs(region.vertices[0] - interval.lower) <= tol
                continue
            assert region.kind is RegionKind.SEGMENT
            assert abs(region.vertices[0] - interval.lower) <= tol
            assert abs(region.vertices[1] - interval.upper) <= tol

    def test_empty_rank_two_range(self, fixtures_dir):
        """Test that diag(1, -1) with c = e_2 is empty."""
        a = core.load_matrix(fixtures_dir / "diag_pm1.json")
        assert build_region(a, [0, 1], 4096).empty

    def test_rank_two_range_segment(self):
        """Test that Lambda_2(diag(1, 1, -1, -1)) is [-1, 1]."""
        region = build_region(np.diag([1.0, 1.0, -1.0, -1.0]), [0, 1, 0, 0], 4096)
        assert region.kind is RegionKind.SEGMENT
        assert region.vertices[0] == pytest.approx(-1.0, abs=1e-6)
        assert region.vertices[1] == pytest.approx(1.0, abs=1e-6)

    def test_affine_covariance(self, rng):
        """Test W(gamma A + mu I; c) = gamma W(A;c) + total(c) mu."""
        for _ in range(5):
            a = core.random_complex_matrix(3, rng)
            c = rng.standard_normal(3)
            gamma = complex(rng.standard_normal(), rng.standard_normal())
            mu = complex(rng.standard_normal(), rng.standard_normal())
            moved = build_region(gamma * a + mu * np.eye(3), c, 4096)
            expected = build_region(a, c, 4096).transformed(gamma, np.sum(c) * mu)
            assert hausdorff_distance(moved, expected) <= 2e-3 * max(moved.scale, expected.scale)

    def test_grid_too_small(self, jordan2):
        """Test the minimum number of directions."""
        with pytest.raises(ValueError):
            build_region(jordan2, [1, 0], 32)

    def test_refinement_is_monotone(self, rng):
        """Test that doubling the grid only shrinks the outer polygon."""
        for _ in range(10):
            a = core.random_complex_matrix(3, rng)
            c = rng.standard_normal(3)
            coarse = build_region(a, c, 512)
            fine = build_region(a, c, 1024)
            if fine.empty:
                continue
            assert not coarse.empty
            assert np.all(coarse.contains(fine.vertices, slack=1e-9 * coarse.scale))

    def test_vertices_inside_sampled_halfplanes(self, rng):
        """Test that every vertex satisfies every sampled supporting half-plane."""
        a = core.random_complex_matrix(4, rng)
        c = np.array([2.0, 1.0, 0.5, 0.0])
        region = build_region(a, c, 1024)
        thetas = uniform_grid(1024)
        offsets = weighted_support(a, c, thetas)
        tol = 1e-9 * region.scale
        for theta, offset in zip(thetas, offsets):
            assert np.all(HalfPlane(theta, offset).contains(region.vertices, slack=tol))

    def test_rank_k_ranges_are_nested(self, rng):
        """Test Lambda_{k+1}(A) inside Lambda_k(A)."""
        n = 5
        a = core.random_complex_matrix(n, rng)
        regions = [build_region(a, np.eye(n)[k], 1024) for k in range(3)]
        for outer, inner in zip(regions, regions[1:]):
            if inner.empty:
                continue
            assert not outer.empty
            assert np.all(outer.contains(inner.vertices, slack=1e-9 * outer.scale))

    def test_is_empty(self, jordan2):
        """Test emptiness of diag(1, -1) with e_2 against J_2 with e_1."""
        assert is_empty(build_region(np.diag([1.0, -1.0]), [0, 1], 1024))
        assert not is_empty(build_region(jordan2, [1, 0], 1024))

    def test_edge_halfplanes_support_the_square(self, square_matrix):
        """Test that each edge half-plane contains the square and touches two corners."""
        region = build_region(square_matrix, [1, 0, 0, 0], 4096)
        planes = region.edge_halfplanes()
        assert len(planes) == 4
        for plane in planes:
            assert np.all(plane.contains(region.vertices, slack=1e-12))
            on_line = np.abs(plane.value(region.vertices) - plane.offset) <= 1e-9
            assert np.count_nonzero(on_line) == 2


class TestPolygonForNormal:
    """Test exact polygons of normal matrices."""

    def test_square(self, square_matrix):
        """Test that the exact square matches the sampled one."""
        exact = polygon_for_normal(square_matrix, [1, 0, 0, 0])
        sampled = build_region(square_matrix, [1, 0, 0, 0], 4096)
        assert len(exact) == 4
        assert hausdorff_distance(exact, sampled) <= 1e-5 * exact.scale

    def test_random_normal_matrices(self, rng):
        """Test against half-planes at the grid plus the switching angles."""
        for _ in range(50):
            n = int(rng.integers(1, 6))
            a = core.random_normal_matrix(n, rng)
            c = rng.standard_normal(n)
            exact = polygon_for_normal(a, c)
            lam = core.spectrum(a).eigenvalues
            angles = np.union1d(uniform_grid(4096), switching_angles(lam, core.matrix_scale(a)))
            reference = intersect_halfplanes(angles, weighted_support(a, c, angles), exact.scale)
            if exact.empty or reference.empty:
                assert exact.empty and reference.empty
                continue
            assert hausdorff_distance(exact, reference) <= 1e-5 * exact.scale

    def test_sorted_weights_within_grid_overshoot(self, rng):
        """Test that descending weights keep the sampled polygon within diam*pi/N."""
        grid = 4096
        for _ in range(30):
            n = int(rng.integers(1, 6))
            a = core.random_normal_matrix(n, rng)
            c = -np.sort(-rng.standard_normal(n))
            exact = polygon_for_normal(a, c)
            sampled = build_region(a, c, grid)
            assert not exact.empty and not sampled.empty
            tol = exact.diameter * np.pi / grid + 1e-9 * exact.scale
            assert hausdorff_distance(exact, sampled) <= tol

    def test_switching_angles(self):
        """Test the angles where Re(e^{i theta} lambda) ties for 1 and i."""
        angles = switching_angles([1.0, 1j])
        assert np.allclose(angles, [3 * np.pi / 4, 7 * np.pi / 4])
        assert switching_angles([2.0, 2.0]).size == 0

    def test_requires_normal(self, jordan2):
        """Test that a non-normal matrix is refused."""
        with pytest.raises(NotNormal):
            polygon_for_normal(jordan2, [1, 0])

    def test_dimension_guard(self):
        """Test the n <= 8 guard."""
        with pytest.raises(DimensionTooLarge):
            polygon_for_normal(np.eye(9), np.eye(9)[0])


class TestDistances:
    """Test distances to regions and between regions."""

    def test_inside_and_outside(self, square_matrix):
        """Test zero distance inside and Euclidean distance outside."""
        region = polygon_for_normal(square_matrix, [1, 0, 0, 0])
        d = distance_to_region([0, 2], region)
        assert d[0] == 0.0
        assert d[1] == pytest.approx(1.0)

    def test_boundary_distance(self, square_matrix):
        """Test the distance from the center to the edges of the square."""
        region = polygon_for_normal(square_matrix, [1, 0, 0, 0])
        assert boundary_distance(0, region)[0] == pytest.approx(np.sqrt(0.5))

    def test_hausdorff_with_empty(self, square_matrix):
        """Test the empty-region conventions."""
        square = polygon_for_normal(square_matrix, [1, 0, 0, 0])
        empty = build_region(np.diag([1.0, -1.0]), [0, 1], 256)
        assert hausdorff_distance(square, empty) == np.inf
        assert hausdorff_distance(empty, empty) == 0.0


class TestBoundaryIntersections:
    """Test common boundary points."""

    @pytest.mark.parametrize("n", [4, 6])
    def test_polygon_against_disc(self, n):
        """Test 2n crossings of the n-gon with the disc of radius 0.95."""
        a, c, b, d = remark_fixture(n, 0.95)
        inter = boundary_intersections(build_region(a, c, 4096), build_region(b, d, 4096))
        assert len(inter.points) == 2 * n
        assert inter.overlaps == ()
        assert np.allclose(np.abs(inter.points), 0.95, atol=1e-4)

    def test_disjoint_regions(self, jordan2):
        """Test that disjoint discs share no boundary points."""
        first = build_region(jordan2, [1, 0], 512)
        second = build_region(jordan2 + 3 * np.eye(2), [1, 0], 512)
        assert len(boundary_intersections(first, second)) == 0

    def test_same_region(self, jordan2):
        """Test that identical boundaries are reported as a full overlap."""
        region = build_region(jordan2, [1, 0], 512)
        assert boundary_intersections(region, region).full_overlap


class TestCommonSupportingAngle:
    """Test the angle between three consecutive boundary points."""

    def test_square_against_disc(self):
        """Test that the supports agree at an angle between the two chords."""
        a, c, b, d = remark_fixture(4, 0.95)
        inter = boundary_intersections(build_region(a, c, 4096), build_region(b, d, 4096))
        z1, z2, z3 = inter.points[:3]
        result = common_supporting_angle(a, c, b, d, z1, z2, z3)
        assert abs(result.gap) <= 1e-9
        phi = result.phi if result.phi >= result.omega_lo else result.phi + 2 * np.pi
        assert result.omega_lo <= phi <= result.omega_hi

    def test_clockwise_points_rejected(self, jordan2):
        """Test that clockwise triples are refused."""
        with pytest.raises(ValueError):
            common_supporting_angle(jordan2, [1, 0], jordan2, [1, 0], 1j, 1, -1j)

    def test_chord_angle_of_bottom_edge(self):
        """Test that the chord from -1 to 1 gives the half-plane -y <= h."""
        assert chord_angle(-1, 1) == pytest.approx(0.5 * np.pi)


class TestSharpPointsAndArcs:
    """Test sharp points, curved runs and conic fits."""

    def test_square_has_four_sharp_points(self, square_matrix):
        """Test that the eigenvalues are the sharp points of the square."""
        region = build_region(square_matrix, [1, 0, 0, 0], 4096)
        sharp = detect_sharp_points(region, square_matrix, [1, 0, 0, 0])
        assert len(sharp) == 4
        assert all(p.touches_support for p in sharp)
        assert all(p.width == pytest.approx(0.5 * np.pi, abs=1e-6) for p in sharp)

    def test_disc_is_smooth(self, jordan2):
        """Test that the disc has no sharp point and one curved run."""
        region = build_region(jordan2, [1, 0], 4096)
        assert detect_sharp_points(region) == []
        runs = curved_runs(region)
        assert len(runs) == 1 and runs[0].size == len(region)

    def test_sharp_threshold(self):
        """Test the threshold floor and its grid dependence."""
        assert sharp_threshold(0) == pytest.approx(1e-3)
        assert sharp_threshold(256) == pytest.approx(4 * 2 * np.pi / 256)

    def test_circle_fit_on_jordan3(self, jordan3):
        """Test the disc of radius cos(pi/4) around 0."""
        region = build_region(jordan3, [1, 0, 0], 4096)
        fit = fit_circle(region.vertices)
        assert fit.kind is ArcKind.CIRCLE
        assert abs(fit.center) <= 1e-4
        assert fit.radius == pytest.approx(np.cos(np.pi / 4), abs=1e-4)
        assert fit.accepts(region.diameter)

    def test_ellipse_fit_foci(self, ellipse_matrix):
        """Test that the foci of W([[0, 1], [0, 2]]) are its eigenvalues."""
        region = build_region(ellipse_matrix, [1, 0], 4096)
        fit = fit_ellipse(region.vertices)
        assert fit.kind is ArcKind.ELLIPSE
        assert fit.foci[0] == pytest.approx(0.0, abs=1e-4)
        assert fit.foci[1] == pytest.approx(2.0, abs=1e-4)
        assert fit.semi_minor == pytest.approx(0.5, abs=1e-4)
        assert fit.semi_major == pytest.approx(np.sqrt(5) / 2, abs=1e-4)

    def test_ellipse_fit_rotated(self, rng):
        """Test semi-axes and foci of exact ellipses in every orientation."""
        t = 2 * np.pi * np.arange(120) / 120
        for _ in range(20):
            center = complex(rng.standard_normal(), rng.standard_normal())
            major = float(rng.uniform(1.0, 3.0))
            minor = float(rng.uniform(0.2, 0.9)) * major
            tilt = np.exp(1j * rng.uniform(0, np.pi))
            fit = fit_ellipse(center + tilt * (major * np.cos(t) + 1j * minor * np.sin(t)))
            assert fit.semi_major >= fit.semi_minor
            assert fit.semi_major == pytest.approx(major, rel=1e-8)
            assert fit.semi_minor == pytest.approx(minor, rel=1e-8)
            focal = np.sqrt(major ** 2 - minor ** 2) * tilt
            expected = sorted([center + focal, center - focal], key=lambda z: (z.real, z.imag))
            assert np.allclose(fit.foci, expected, atol=1e-7)

    def test_ellipse_fit_vertical_major_axis(self):
        """Test an ellipse whose major axis is vertical."""
        t = 2 * np.pi * np.arange(60) / 60
        fit = fit_ellipse(0.5 * np.cos(t) + 2j * np.sin(t))
        assert fit.semi_major == pytest.approx(2.0)
        assert fit.semi_minor == pytest.approx(0.5)
        focal = np.sqrt(4.0 - 0.25)
        assert np.allclose(sorted(fit.foci, key=lambda z: z.imag), [-1j * focal, 1j * focal], atol=1e-8)

    def test_exact_circle(self):
        """Test the circle fit on exact points."""
        fit = fit_circle(disc_points(1 + 2j, 3.0))
        assert fit.center == pytest.approx(1 + 2j)
        assert fit.radius == pytest.approx(3.0)
        assert fit.residual < 1e-12

    def test_collinear_points(self):
        """Test that collinear points cannot be fitted."""
        with pytest.raises(DegenerateConfiguration):
            fit_circle([0, 1, 2, 3])
        with pytest.raises(DegenerateConfiguration):
            fit_ellipse([0, 1, 2])

    def test_boundary_rows(self, square_matrix):
        """Test one (theta, x, y) row per vertex."""
        region = build_region(square_matrix, [1, 0, 0, 0], 4096)
        rows = boundary_rows(region)
        assert len(rows) == 4
        for theta, x, y in rows:
            assert 0.0 <= theta < 2 * np.pi
            assert abs(complex(x, y)) == pytest.approx(1.0, abs=1e-8)
