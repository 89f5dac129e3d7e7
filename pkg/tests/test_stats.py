import os
import tempfile
import unittest
from fractions import Fraction
from math import factorial

import numpy as np
import pandas as pd

from src.sampler.latin_sampler import cyclic_square
from src.stats.experiments import (
    ExperimentReport,
    constant_diagonal_square,
    diagonal_max_statistic,
    permutation_fixed_points,
    row_permutation_draw,
    run_experiment,
)
from src.stats.pmf import alternating_partial_sum, fixed_point_distribution, fixed_point_pmf
from src.utils.config import StatsConfig
from src.utils.rng import make_rng


class FixedPointPmfTests(unittest.TestCase):
    def test_known_values(self):
        self.assertEqual(fixed_point_pmf(4, 0), Fraction(3, 8))
        self.assertEqual(fixed_point_pmf(1, 1), Fraction(1))
        self.assertEqual(fixed_point_pmf(0, 0), Fraction(1))

    def test_extremes(self):
        for n in range(2, 9):
            self.assertEqual(fixed_point_pmf(n, n), Fraction(1, factorial(n)))
            self.assertEqual(fixed_point_pmf(n, n - 1), 0)

    def test_distribution_sums_to_one(self):
        for n in range(0, 12):
            self.assertEqual(sum(fixed_point_distribution(n)), 1)

    def test_derangement_counts(self):
        # derangements of 0..6 elements: 1, 0, 1, 2, 9, 44, 265
        for n, count in enumerate([1, 0, 1, 2, 9, 44, 265]):
            self.assertEqual(fixed_point_pmf(n, 0) * factorial(n), count)

    def test_alternating_sum(self):
        self.assertEqual(alternating_partial_sum(0), 1)
        self.assertEqual(alternating_partial_sum(1), 0)
        self.assertEqual(alternating_partial_sum(3), Fraction(1, 3))
        self.assertLess(abs(float(alternating_partial_sum(15)) - np.exp(-1)), 1e-12)

    def test_bad_arguments(self):
        with self.assertRaises(ValueError):
            fixed_point_pmf(3, 4)
        with self.assertRaises(ValueError):
            alternating_partial_sum(-1)


class StatisticTests(unittest.TestCase):
    def test_diagonal_max(self):
        for n in (3, 5, 7):
            self.assertEqual(diagonal_max_statistic(cyclic_square(n)), 1)
        self.assertEqual(diagonal_max_statistic(cyclic_square(2)), 2)
        self.assertEqual(diagonal_max_statistic(cyclic_square(4)), 2)

    def test_constant_diagonal_square(self):
        square = constant_diagonal_square(6)
        self.assertEqual(square.diagonal(), [1] * 6)
        self.assertEqual(diagonal_max_statistic(square), 6)

    def test_row_permutation_coupling(self):
        rng = make_rng(3)
        for _ in range(50):
            draw = row_permutation_draw(7, rng)
            self.assertEqual(draw["diagonal_multiplicity"], draw["fixed_points"])

    def test_permutation_fixed_points(self):
        values = permutation_fixed_points(5, 1000, make_rng(1))
        self.assertEqual(values.shape, (1000,))
        self.assertTrue(((values >= 0) & (values <= 5) & (values != 4)).all())


class ExperimentTests(unittest.TestCase):
    def test_fixed_points_matches_pmf(self):
        report = run_experiment(StatsConfig(kind="fixed-points", n=4, samples=50_000, tv_tolerance=0.02))
        self.assertTrue(report.passed, report.summary)
        self.assertAlmostEqual(report.table["empirical"].sum(), 1.0)
        self.assertEqual(report.table.loc[report.table["value"] == 3, "count"].item(), 0)

    def test_same_seed_same_report(self):
        cfg = StatsConfig(kind="fixed-points", n=5, samples=2_000, seed=9, workers=2)
        first, second = run_experiment(cfg), run_experiment(cfg)
        pd.testing.assert_frame_equal(first.table, second.table)

    def test_row_permutation_has_no_mismatches(self):
        report = run_experiment(StatsConfig(kind="row-permutation", n=6, samples=300, workers=2))
        self.assertEqual(report.summary["mismatches"], 0)
        self.assertTrue(report.verdicts["coupling"]["passed"])

    def test_square_experiments(self):
        diag = run_experiment(StatsConfig(kind="diag-max", n=5, samples=4))
        self.assertEqual(int(diag.table["count"].sum()), 4)
        self.assertTrue(1 <= diag.summary["max"] <= 5)

        loops = run_experiment(StatsConfig(kind="loops-per-colour", n=5, samples=3))
        self.assertEqual(int(loops.table["count"].sum()), 3)
        self.assertEqual(int(loops.table["per_colour_count"].sum()), 15)
        self.assertAlmostEqual(loops.summary["mean_loops"], 1.0)
        largest = int(loops.table.loc[loops.table["count"] > 0, "value"].max())
        self.assertEqual(largest, loops.summary["max_loops"])
        self.assertEqual(int(loops.table.loc[loops.table["value"] == 0, "count"].item()), 0)

    def test_discrepancy(self):
        report = run_experiment(StatsConfig(kind="discrepancy", n=8, samples=200))
        self.assertEqual(int(report.table["count"].sum()), 200)
        self.assertIn("normalised_bound", report.verdicts)

    def test_report_outputs(self):
        report = run_experiment(StatsConfig(kind="fixed-points", n=3, samples=500))
        payload = report.to_dict()
        self.assertEqual(payload["samples"], 500)
        self.assertEqual(len(payload["table"]), 4)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "table.csv")
            report.to_csv(path)
            self.assertEqual(list(pd.read_csv(path)["value"]), [0, 1, 2, 3])

    def test_verdict_needs_tolerance(self):
        with self.assertRaises(ValueError):
            ExperimentReport("x", "fixed-points", 3, 0, 10, pd.DataFrame(), verdicts={"v": {"passed": True}})
        with self.assertRaises(ValueError):
            ExperimentReport("x", "fixed-points", 3, 0, 0, pd.DataFrame())

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            StatsConfig(kind="coin-flips", n=3, samples=10)


if __name__ == "__main__":
    unittest.main()
