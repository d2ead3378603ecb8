"""Training loop and ensembles: determinism, records, summaries, files."""

import json
import math

import numpy as np
import pytest

from gatelearn import (
    AqftInstance,
    EnsembleSummary,
    ExperimentConfig,
    FeedbackConfig,
    GroverInstance,
    quantile_analysis,
    run_ensemble,
    run_learning,
)
from gatelearn.harness import (
    target_success,
    write_histogram_csv,
    write_runs_csv,
    write_summary_json,
)


def grover_config(**kw):
    defaults = dict(
        problem=GroverInstance.standard(16),
        iterations=40,
        runs=8,
        grid_size=64,
        feedback=FeedbackConfig(initial_push_cells=2),
        master_seed=7,
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


def aqft_config(**kw):
    defaults = dict(
        problem=AqftInstance.standard(4, 1),
        iterations=30,
        runs=6,
        grid_size=32,
        feedback=FeedbackConfig(initial_push_cells=1),
        master_seed=11,
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


class TestRunLearning:
    def test_single_iteration_yields_one_record(self):
        result = run_learning(grover_config(iterations=1), run_seed=3)
        assert len(result.records) == 1
        assert result.records[0].iteration == 1

    def test_zero_iterations_rejected(self):
        with pytest.raises(ValueError):
            grover_config(iterations=0)

    def test_bit_identical_for_same_seed(self):
        config = grover_config()
        a = run_learning(config, run_seed=5)
        b = run_learning(config, run_seed=5)
        assert a.records == b.records

    def test_different_seeds_differ(self):
        config = grover_config()
        a = run_learning(config, run_seed=5)
        b = run_learning(config, run_seed=6)
        assert a.records != b.records

    def test_expected_success_in_range_and_fields_consistent(self):
        result = run_learning(grover_config(), run_seed=1)
        for rec in result.records:
            assert 0.0 <= rec.expected_success <= 1.0
            assert rec.circular_variance >= 0.0
            assert rec.outcome in ("pass", "fail")
            assert rec.measured_index is None  # search trials record pass/fail only
            if rec.outcome == "pass":
                assert rec.feedback_action == "none"
            else:
                assert rec.feedback_action != "none"

    def test_kickstart_fires_exactly_once_on_first_failure(self):
        result = run_learning(grover_config(iterations=60), run_seed=2)
        actions = [r.feedback_action for r in result.records]
        fails = [r for r in result.records if r.outcome == "fail"]
        assert actions.count("kickstart") == 1
        assert fails[0].feedback_action == "kickstart"

    def test_median_run_improves_over_start(self):
        config = grover_config(iterations=120, runs=24, grid_size=256,
                               feedback=FeedbackConfig())
        summary, _ = run_ensemble(config)
        gain = summary.median_curve[-1] - summary.median_curve[0]
        assert gain > 0

    def test_aqft_records_measured_index(self):
        result = run_learning(aqft_config(), run_seed=4)
        outcomes = {rec.measured_index for rec in result.records}
        assert all(isinstance(i, int) for i in outcomes)
        fails = [r for r in result.records if r.outcome == "fail"]
        passes = [r for r in result.records if r.outcome == "pass"]
        assert passes, "trivially passing trials expected for a 4-qubit band-1 circuit"
        assert len(fails) + len(passes) == len(result.records)

    def test_chi_snapshots_shape_and_normalization(self):
        result = run_learning(grover_config(snapshot_chi=True), run_seed=9)
        assert result.chi_snapshots.shape == (40, 64)
        np.testing.assert_allclose(result.chi_snapshots.sum(axis=1), 1.0, atol=1e-9)

    def test_two_axis_training_runs(self):
        config = aqft_config(problem=AqftInstance.standard(3, 2), grid_size=8)
        result = run_learning(config, run_seed=1)
        assert len(result.records) == 30

    def test_band_three_training_rejected(self):
        with pytest.raises(ValueError):
            aqft_config(problem=AqftInstance.standard(5, 3))

    def test_seventeen_qubit_register_smoke(self):
        # supported but long-running at production settings; smoke-test a
        # coarse grid and two iterations
        config = aqft_config(
            problem=AqftInstance.standard(17, 1), grid_size=16, iterations=2
        )
        result = run_learning(config, run_seed=0)
        assert len(result.records) == 2
        assert 0.0 <= result.records[-1].expected_success <= 1.0


class TestRunEnsemble:
    def test_single_run_summary_is_degenerate(self):
        config = grover_config(runs=1)
        summary, results = run_ensemble(config)
        assert summary.runs == 1
        expected = [rec.expected_success for rec in results[0].records]
        np.testing.assert_array_equal(summary.mean_curve, expected)
        np.testing.assert_array_equal(summary.median_curve, expected)

    def test_thread_count_does_not_change_results(self):
        config = grover_config(runs=6)
        serial, _ = run_ensemble(config, threads=1)
        threaded, _ = run_ensemble(config, threads=4)
        np.testing.assert_array_equal(serial.mean_curve, threaded.mean_curve)
        np.testing.assert_array_equal(serial.final_values, threaded.final_values)
        assert serial.iterations_to_95 == threaded.iterations_to_95

    def test_histogram_mass_sums_to_one(self):
        summary, _ = run_ensemble(grover_config())
        assert abs(summary.histogram.sum() - 1.0) < 1e-12
        assert len(summary.histogram) == 40  # 2.5%-wide bins

    def test_pass_counts_match_records(self):
        summary, results = run_ensemble(grover_config())
        for count, run in zip(summary.pass_counts, results):
            assert count == sum(r.outcome == "pass" for r in run.records)

    def test_target_is_grid_maximum(self):
        config = grover_config()
        from gatelearn import reference_max_success

        assert abs(target_success(config) - reference_max_success(16)) < 1e-12


class TestQuantileAnalysis:
    def _summary_with(self, to_95, runs):
        return EnsembleSummary(
            runs=runs,
            iterations=120,
            target_success=1.0,
            mean_curve=np.zeros(1),
            median_curve=np.zeros(1),
            variance_curve=np.zeros(1),
            final_values=np.zeros(runs),
            histogram=np.zeros(40),
            histogram_edges=np.linspace(0, 1, 41),
            quantiles={},
            iterations_to_95=to_95,
            pass_counts=np.zeros(runs, dtype=int),
            mean_final=0.0,
            mean_final_trained=0.0,
        )

    def test_all_runs_hit_at_iteration_one(self):
        rows = quantile_analysis({"case": self._summary_with([1.0] * 10, 10)})
        assert rows[0][0.10] == 1 and rows[0][0.25] == 1

    def test_no_run_reaches_threshold(self):
        rows = quantile_analysis({"case": self._summary_with([math.inf] * 10, 10)})
        assert rows[0][0.10] is None and rows[0][0.25] is None

    def test_partial_attainment(self):
        to_95 = [3.0, 5.0, math.inf, math.inf, math.inf, math.inf, math.inf, math.inf]
        rows = quantile_analysis({"case": self._summary_with(to_95, 8)})
        assert rows[0][0.10] == 3  # ceil(0.1*8)=1 run suffices
        assert rows[0][0.25] == 5  # ceil(0.25*8)=2 runs


class TestFileOutputs:
    def test_runs_csv_layout(self, tmp_path):
        config = grover_config(runs=2, iterations=5)
        _, results = run_ensemble(config)
        path = tmp_path / "runs.csv"
        write_runs_csv(results, path)
        lines = path.read_text().splitlines()
        assert lines[0] == (
            "run,iteration,outcome,expected_success,circular_variance,"
            "feedback_action,measured_index"
        )
        assert len(lines) == 1 + 2 * 5

    def test_summary_json_round_trips(self, tmp_path):
        summary, _ = run_ensemble(grover_config(runs=3, iterations=5))
        path = tmp_path / "summary.json"
        write_summary_json(summary, path, extra={"note": "test"})
        payload = json.loads(path.read_text())
        assert payload["runs"] == 3
        assert payload["note"] == "test"
        assert len(payload["mean_curve"]) == 5
        assert abs(sum(payload["histogram"]) - 1.0) < 1e-12

    def test_histogram_csv(self, tmp_path):
        summary, _ = run_ensemble(grover_config(runs=3, iterations=5))
        path = tmp_path / "hist.csv"
        write_histogram_csv(summary, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "bin_low,bin_high,fraction"
        assert len(lines) == 41
        first = lines[1].split(",")
        assert float(first[1]) - float(first[0]) == pytest.approx(0.025)

    def test_byte_identical_rerun(self, tmp_path):
        config = grover_config(runs=2, iterations=6)
        _, results_a = run_ensemble(config)
        _, results_b = run_ensemble(config)
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        write_runs_csv(results_a, pa)
        write_runs_csv(results_b, pb)
        assert pa.read_bytes() == pb.read_bytes()
