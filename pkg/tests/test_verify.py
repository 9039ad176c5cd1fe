"""
Tests for the theorem checks and their reports.
"""
import json

import numpy as np
import pytest

from weighted_range import core
from weighted_range.errors import DegenerateRegion, DegreeTooLarge
from weighted_range.support import as_weights
from weighted_range.verify import (
    HypothesisStatus,
    Verdict,
    check_circle_corollary,
    check_curve_overlap,
    check_ellipse_corollary,
    check_equal_ranges,
    check_nilpotent_corollary,
    check_sharp_point_corollary,
    decide,
    distinct_angles,
    projective_angles,
    remark_fixture,
    run_soundness_ensemble,
    verify_boundary_points,
    verify_supporting_lines,
    verify_theorem_main,
)


class TestHelpers:
    """Test verdict logic and angle merging."""

    def test_decide(self):
        """Test that only a met hypothesis without conclusion is inconsistent."""
        assert decide(False, False) is Verdict.HYPOTHESIS_NOT_MET
        assert decide(False, True) is Verdict.HYPOTHESIS_NOT_MET
        assert decide(True, True) is Verdict.HYPOTHESIS_MET
        assert decide(True, False) is Verdict.INCONSISTENT

    def test_distinct_angles_merges_across_wrap(self):
        """Test that angles near 0 and 2pi count once."""
        angles = [0.0, 1e-6, 1.0, 2 * np.pi - 1e-6]
        assert len(distinct_angles(angles, 1024)) == 2

    def test_distinct_angles_empty(self):
        """Test the empty list."""
        assert distinct_angles([], 1024) == []

    def test_projective_angles_merge_antipodes_of_a_point(self):
        """Test that theta and theta + pi with h(theta) + h(theta + pi) = 0 count once."""
        kept = projective_angles(np.array([[1.0]]), as_weights([1.0]), [np.pi / 2, 3 * np.pi / 2], 512)
        assert kept == [np.pi / 2]

    def test_projective_angles_keep_antipodes_of_a_disc(self, jordan2):
        """Test that a region with width keeps both antipodal angles."""
        kept = projective_angles(jordan2, as_weights([1, 0]), [0.3, 0.3 + np.pi], 512)
        assert len(kept) == 2

    def test_projective_angles_respect_counted(self):
        """Test that angles already counted elsewhere absorb their antipodes."""
        a = np.diag([1.0, -1.0])
        kept = projective_angles(a, as_weights([1, 0]), [3 * np.pi / 2], 512, keep=[np.pi / 2])
        assert kept == []


class TestMainTheorem:
    """Test the equal-support-angle form of the main theorem."""

    @pytest.mark.parametrize("n", [4, 6])
    def test_roots_of_unity_against_disc(self, n):
        """Test that 2n angles meet but do not beat the bound 2n."""
        a, c, b, d = remark_fixture(n, 0.95)
        report = verify_theorem_main(a, c, b, d, grid_n=4096)
        assert report.bound == 2 * n
        assert report.crossing == 2 * n
        assert report.tangential == 0
        assert not report.hypothesis_met
        assert report.common_values == []
        assert report.verdict is Verdict.HYPOTHESIS_NOT_MET
        assert report.hypothesis_status is HypothesisStatus.ASSUMED

    def test_equal_matrices(self, square_matrix):
        """Test that identical inputs meet the hypothesis and share values."""
        c = [1, 0, 0, 0]
        report = verify_theorem_main(square_matrix, c, square_matrix, c, grid_n=1024)
        assert report.identically_zero
        assert report.hypothesis_met
        assert report.common_values
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_unitarily_similar(self, rng, jordan2):
        """Test that a unitary conjugate has the same supports and values."""
        u = core.random_unitary(2, rng)
        b = u @ jordan2 @ core.adjoint(u)
        report = verify_theorem_main(jordan2, [1, 0], b, [1, 0], grid_n=1024)
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_guard(self):
        """Test that oversized degrees are refused before any work."""
        with pytest.raises(DegreeTooLarge):
            verify_theorem_main(np.eye(8), np.arange(8.0), np.eye(2), [1, 0])

    def test_points_count_antipodal_angles_once(self):
        """Test the points 1 and 2, whose supports agree at pi/2 and 3pi/2 on one projective root."""
        report = verify_theorem_main([[1.0]], [1.0], [[2.0]], [1.0], grid_n=512)
        assert report.bound == 1
        assert report.crossing == 1
        assert not report.hypothesis_met
        assert report.verdict is Verdict.HYPOTHESIS_NOT_MET

    def test_segments_are_never_inconsistent(self):
        """Test two Hermitian segments touching only at a projective point."""
        report = verify_theorem_main(np.diag([1.0, -1.0]), [1, 0], np.diag([2.0, -3.0]), [1, 0], grid_n=512)
        assert report.crossing + report.tangential <= report.bound
        assert report.verdict is not Verdict.INCONSISTENT

    def test_report_json(self):
        """Test the report layout."""
        a, c, b, d = remark_fixture(4, 0.95)
        data = verify_theorem_main(a, c, b, d, grid_n=1024).to_json()
        assert set(data) >= {"theorem", "bound", "angles", "hypothesis_met", "common_values",
                             "verdict", "seed", "gridN", "hypothesis_status", "notes", "details"}
        assert data["angles"] == {"crossing": 8, "tangential": 0, "identically_zero": False}
        assert data["verdict"] == "ConsistentHypothesisNotMet"
        json.dumps(data)

    def test_deterministic_json(self):
        """Test that repeated runs give byte-identical reports."""
        a, c, b, d = remark_fixture(4, 0.95)
        first = json.dumps(verify_theorem_main(a, c, b, d, grid_n=1024).to_json())
        second = json.dumps(verify_theorem_main(a, c, b, d, grid_n=1024).to_json())
        assert first == second


class TestSupportingLinesAndBoundaryPoints:
    """Test the supporting-line and boundary-point forms."""

    def test_supporting_lines_not_met(self):
        """Test the roots of unity against the disc."""
        a, c, b, d = remark_fixture(4, 0.95)
        report = verify_supporting_lines(a, c, b, d, grid_n=4096)
        assert report.details["applicable"]
        assert report.verdict is Verdict.HYPOTHESIS_NOT_MET

    def test_unsorted_weights_at_sharp_points(self, square_matrix):
        """Test that common lines through corners with unsorted weights are not applicable."""
        c = [0, 1, 0, 0]
        report = verify_supporting_lines(square_matrix, c, square_matrix, c, grid_n=1024)
        assert report.verdict is not Verdict.INCONSISTENT

    def test_boundary_points(self):
        """Test 2n common boundary points against the bound 2n."""
        a, c, b, d = remark_fixture(4, 0.95)
        report = verify_boundary_points(a, c, b, d, grid_n=4096)
        assert len(report.details["boundary_points"]) == 8
        assert report.crossing <= report.bound
        assert report.verdict is Verdict.HYPOTHESIS_NOT_MET

    def test_boundary_points_full_overlap(self, jordan2):
        """Test that coinciding boundaries fall back to equal ranges."""
        report = verify_boundary_points(jordan2, [1, 0], jordan2, [1, 0], grid_n=1024)
        assert report.theorem == "boundary"
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_boundary_points_need_2d(self, jordan2):
        """Test that a segment region is refused."""
        with pytest.raises(DegenerateRegion):
            verify_boundary_points(np.diag([1.0, -1.0]), [1, 0], jordan2, [1, 0], grid_n=1024)


class TestCorollaries:
    """Test the circle, ellipse, sharp-point and nilpotent corollaries."""

    def test_circle_on_jordan3(self, jordan3):
        """Test that the centre 0 of W(J_3) is a repeated c-value."""
        report = check_circle_corollary(jordan3, [1, 0, 0], grid_n=4096)
        assert report.hypothesis_met
        assert report.details["center_multiplicity"] >= 2
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_circle_not_met_for_square(self, square_matrix):
        """Test that a polygon has no circular arc."""
        report = check_circle_corollary(square_matrix, [1, 0, 0, 0], grid_n=1024)
        assert not report.hypothesis_met
        assert report.verdict is Verdict.HYPOTHESIS_NOT_MET

    def test_ellipse_foci(self, ellipse_matrix):
        """Test that the foci of W([[0, 1], [0, 2]]) are c-values."""
        report = check_ellipse_corollary(ellipse_matrix, [1, 0], grid_n=4096)
        assert report.hypothesis_met
        assert max(report.details["focus_distances"]) <= 1e-4 * 3
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_circle_of_shifted_block(self):
        """Test W([[alpha, 2R], [0, alpha]]), the disc of radius R about the double eigenvalue alpha."""
        alpha, radius = 0.3 + 0.2j, 0.8
        report = check_circle_corollary([[alpha, 2 * radius], [0, alpha]], [1, 0], grid_n=4096)
        assert report.hypothesis_met
        assert report.details["fit"]["center"] == pytest.approx([0.3, 0.2], abs=1e-4)
        assert report.details["center_multiplicity"] >= 2
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_ellipse_of_triangular_block(self):
        """Test that W([[alpha, R], [0, beta]]) has its foci at alpha and beta."""
        alpha, beta, radius = 0.3 + 0.2j, 1.5 - 0.5j, 0.8
        report = check_ellipse_corollary([[alpha, radius], [0, beta]], [1, 0], grid_n=4096)
        assert report.hypothesis_met
        foci = [complex(*f) for f in report.details["fit"]["foci"]]
        assert min(abs(f - alpha) for f in foci) <= 1e-3
        assert min(abs(f - beta) for f in foci) <= 1e-3
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_sharp_points_are_cvalues(self, square_matrix):
        """Test that the corners of the square are eigenvalues."""
        report = check_sharp_point_corollary(square_matrix, [1, 0, 0, 0], grid_n=4096)
        assert len(report.details["sharp_points"]) == 4
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_sharp_points_sort_weights(self, square_matrix):
        """Test that unsorted weights are sorted first."""
        report = check_sharp_point_corollary(square_matrix, [0, 0, 0, 1], grid_n=1024)
        assert report.notes
        assert report.verdict is not Verdict.INCONSISTENT

    def test_nilpotent(self, jordan2):
        """Test that W_c(J_2) is always a centred disc and J_2 is nilpotent."""
        report = check_nilpotent_corollary(jordan2, trials=20, grid_n=1024)
        assert report.hypothesis_met
        assert report.verdict is Verdict.HYPOTHESIS_MET
        assert report.hypothesis_status is HypothesisStatus.SAMPLED

    def test_not_nilpotent(self, square_matrix):
        """Test that a square is not a disc."""
        report = check_nilpotent_corollary(square_matrix, trials=20, grid_n=1024)
        assert not report.hypothesis_met
        assert "witness_c" in report.details

    def test_nilpotent_needs_enough_trials(self, jordan2):
        """Test the minimum number of sampled weights."""
        with pytest.raises(ValueError):
            check_nilpotent_corollary(jordan2, trials=5)


class TestOverlapAndEquality:
    """Test shared curves and equal ranges."""

    def test_shared_arc(self, jordan2):
        """Test a unitary conjugate sharing the whole circle."""
        report = check_curve_overlap(jordan2, [1, 0], jordan2.T.copy(), [1, 0], grid_n=1024)
        assert report.hypothesis_met
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_no_shared_arc(self):
        """Test the square against the disc."""
        a, c, b, d = remark_fixture(4, 0.95)
        report = check_curve_overlap(a, c, b, d, grid_n=1024)
        assert not report.hypothesis_met

    def test_equal_ranges(self, jordan2):
        """Test equal discs."""
        report = check_equal_ranges(jordan2, [1, 0], 2 * jordan2 - jordan2, [1, 0], grid_n=1024)
        assert report.hypothesis_met
        assert report.verdict is Verdict.HYPOTHESIS_MET

    def test_different_ranges(self, jordan2, square_matrix):
        """Test that different ranges do not meet the hypothesis."""
        report = check_equal_ranges(jordan2, [1, 0], square_matrix, [1, 0, 0, 0], grid_n=1024)
        assert not report.hypothesis_met


class TestSoundnessEnsemble:
    """Test the randomized bound check."""

    def test_small_ensemble(self):
        """Test that no trial beats the Bezout bound."""
        report = run_soundness_ensemble(trials=25, seed=7, grid_n=512, max_n=3)
        assert report.evaluated + report.skipped == 25
        assert report.violations == []
        assert report.verdict is Verdict.HYPOTHESIS_NOT_MET
        assert report.to_json()["gridN"] == 512

    @pytest.mark.slow
    def test_full_ensemble(self):
        """Test 500 random pairs."""
        report = run_soundness_ensemble(trials=500, grid_n=512)
        assert report.violations == []
        assert report.max_ratio <= 1.0
