"""Phase optimization: baselines, improvements, table structure, curve."""

import numpy as np
import pytest

from gatelearn import (
    AqftInstance,
    average_success,
    grover_reference_curve,
    improvement_table,
    optimize_phases,
    reference_max_success,
    standard_phases,
)
from gatelearn.optimize import improvement_table_csv


class TestOptimizePhases:
    def test_untruncated_circuit_cannot_improve(self):
        result = optimize_phases(AqftInstance.standard(4, 3))
        assert abs(result.baseline_value - 1.0) < 1e-10
        assert result.improvement_percent < 1e-6

    def test_never_reports_below_baseline(self):
        for n, m in ((5, 1), (6, 2), (7, 1)):
            result = optimize_phases(AqftInstance.standard(n, m))
            assert result.best_value >= result.baseline_value - 1e-12

    def test_nearest_neighbor_optimum_beats_standard(self):
        result = optimize_phases(AqftInstance.standard(8, 1))
        assert result.improvement_percent > 1.0
        # the optimum phase moves away from the standard pi/2
        assert abs(result.best_phases[0] - np.pi / 2) > 1e-4

    def test_reported_value_is_reproducible(self):
        a = optimize_phases(AqftInstance.standard(6, 1))
        b = optimize_phases(AqftInstance.standard(6, 1))
        assert a == b  # bit-for-bit: no randomness anywhere

    def test_best_value_matches_direct_evaluation(self):
        inst = AqftInstance.standard(6, 2)
        result = optimize_phases(inst)
        check = average_success(inst.with_phases(result.best_phases))
        assert abs(check - result.best_value) < 1e-12

    def test_band_out_of_range(self):
        with pytest.raises(ValueError):
            optimize_phases(AqftInstance.standard(8, 4))


@pytest.fixture(scope="module")
def small_table():
    return improvement_table([6, 8], [1, 2, 3])


class TestImprovementTable:

    def test_row_count(self, small_table):
        assert len(small_table) == 6

    def test_positive_cells_filled(self, small_table):
        by_key = {(r["n_qubits"], r["band"]): r for r in small_table}
        for key in ((6, 1), (6, 2), (8, 1), (8, 2), (8, 3)):
            assert by_key[key]["improvement_percent"] is not None
            assert by_key[key]["improvement_percent"] > 0

    def test_negligible_gain_cell_left_blank(self, small_table):
        # six qubits with band 3 tunes almost nothing; the cell stays empty
        by_key = {(r["n_qubits"], r["band"]): r for r in small_table}
        assert by_key[(6, 3)]["improvement_percent"] is None
        assert by_key[(6, 3)]["baseline"] is not None

    def test_infeasible_band_left_blank(self):
        rows = improvement_table([3], [1, 2, 3])
        by_band = {r["band"]: r for r in rows}
        assert by_band[3]["baseline"] is None
        assert by_band[3]["improvement_percent"] is None

    def test_csv_rendering(self, small_table):
        text = improvement_table_csv(small_table)
        lines = text.strip().splitlines()
        assert lines[2].startswith("n_qubits,band,baseline,optimum,improvement_percent")
        assert len(lines) == 3 + 6
        blank = [ln for ln in lines if ln.startswith("6,3")]
        assert blank and blank[0].split(",")[3] == ""


class TestGroverReferenceCurve:
    def test_four_elements_point(self):
        rows = grover_reference_curve([4])
        assert abs(rows[0]["target_overlap"] - 0.5) < 1e-15
        assert abs(rows[0]["max_success"] - 1.0) < 1e-12

    def test_large_space_overlap(self):
        rows = grover_reference_curve([10000])
        assert abs(rows[0]["target_overlap"] - 0.01) < 1e-15

    def test_sorted_by_descending_overlap(self):
        rows = grover_reference_curve([10000, 16, 1024, 200])
        overlaps = [r["target_overlap"] for r in rows]
        assert overlaps == sorted(overlaps, reverse=True)
        assert [r["n_elements"] for r in rows] == [16, 200, 1024, 10000]

    def test_values_match_reference_function(self):
        rows = grover_reference_curve([64, 256])
        for row in rows:
            assert row["max_success"] == reference_max_success(row["n_elements"])
