import math
import unittest

from src.census.rainbow import connected_partial_sizes, max_rainbow_path_or_cycle
from src.census.report import conjecture_report, taranenko_reference
from src.census.transversals import (
    count_full_transversals,
    count_hamilton_transversals,
    max_cycle_free_partial,
    max_partial_transversal,
    naive_count_full_transversals,
    naive_count_hamilton_transversals,
    naive_max_partial,
)
from src.core.digraph import latin_to_digraph
from src.core.errors import CapacityError
from src.core.positions import classify_position_set
from src.sampler.latin_sampler import cyclic_square, random_isotope, sample_latin_square
from src.utils.config import CensusConfig, SamplerConfig
from src.utils.rng import make_rng


class TransversalCountTests(unittest.TestCase):
    def test_cyclic_odd_counts(self):
        self.assertEqual(count_full_transversals(cyclic_square(3)), 3)
        self.assertEqual(count_full_transversals(cyclic_square(5)), 15)
        self.assertEqual(count_full_transversals(cyclic_square(7)), 133)

    def test_cyclic_even_has_none(self):
        for n in (2, 4, 6):
            self.assertEqual(count_full_transversals(cyclic_square(n)), 0, f"Z_{n}")

    def test_threaded_count_matches(self):
        Z7 = cyclic_square(7)
        self.assertEqual(count_full_transversals(Z7, workers=3), count_full_transversals(Z7))

    def test_hamilton_count_cyclic_three(self):
        self.assertEqual(count_hamilton_transversals(cyclic_square(3)), 2)

    def test_order_one(self):
        Z1 = cyclic_square(1)
        self.assertEqual(count_full_transversals(Z1), 1)
        self.assertEqual(count_hamilton_transversals(Z1), 0)
        self.assertEqual(count_hamilton_transversals(Z1, degenerate_hamilton=True), 1)

    def test_count_is_isotopy_invariant(self):
        for n, expected in ((3, 3), (5, 15), (7, 133)):
            for trial in range(3):
                isotope = random_isotope(cyclic_square(n), make_rng(n, trial))
                self.assertEqual(count_full_transversals(isotope), expected, f"Z_{n} isotope {trial}")
        square = sample_latin_square(SamplerConfig(seed=8, n=6, burn_in_moves=216))
        base = count_full_transversals(square)
        self.assertEqual(count_full_transversals(random_isotope(square, make_rng(8, 1))), base)

    def test_engine_limit(self):
        with self.assertRaises(CapacityError) as ctx:
            count_full_transversals(cyclic_square(5), limit=4)
        self.assertEqual(ctx.exception.limit, 4)

    def test_agrees_with_oracles(self):
        squares = [cyclic_square(n) for n in (3, 5, 7)]
        squares += [sample_latin_square(SamplerConfig(seed=seed, n=5, burn_in_moves=125)) for seed in range(3)]
        for square in squares:
            self.assertEqual(count_full_transversals(square), naive_count_full_transversals(square))
        for square in squares[:2] + squares[3:]:
            self.assertEqual(count_hamilton_transversals(square), naive_count_hamilton_transversals(square))


class PartialTransversalTests(unittest.TestCase):
    def test_cyclic_maxima(self):
        self.assertEqual(max_partial_transversal(cyclic_square(3))[0], 3)
        self.assertEqual(max_partial_transversal(cyclic_square(4))[0], 3)
        self.assertEqual(max_cycle_free_partial(cyclic_square(2))[0], 1)
        self.assertEqual(max_cycle_free_partial(cyclic_square(3))[0], 2)

    def test_witness_is_cycle_free(self):
        square = cyclic_square(5)
        size, witness = max_cycle_free_partial(square)
        self.assertEqual(len(witness), size)
        self.assertTrue(witness.is_partial_transversal(square))
        self.assertTrue(classify_position_set(square, witness).cycle_free)

    def test_agrees_with_oracle(self):
        for seed in range(2):
            square = sample_latin_square(SamplerConfig(seed=seed, n=4))
            self.assertEqual(max_partial_transversal(square)[0], naive_max_partial(square))
            self.assertEqual(max_cycle_free_partial(square)[0], naive_max_partial(square, cycle_free=True))


class RainbowSearchTests(unittest.TestCase):
    def test_cyclic_three_has_hamilton_cycle(self):
        walk = max_rainbow_path_or_cycle(latin_to_digraph(cyclic_square(3)))
        self.assertEqual((walk.kind, walk.length), ("cycle", 3))
        self.assertEqual(len({colour for _, _, colour in walk.arcs}), 3)

    def test_cyclic_two(self):
        sizes = connected_partial_sizes(latin_to_digraph(cyclic_square(2)))
        self.assertEqual(sizes, {"loop_permitting": 1, "loop_free": 1})

    def test_single_loop_is_degenerate(self):
        walk = max_rainbow_path_or_cycle(latin_to_digraph(cyclic_square(1)))
        self.assertTrue(walk.degenerate)
        self.assertEqual(walk.length, 1)
        walk = max_rainbow_path_or_cycle(latin_to_digraph(cyclic_square(1)), allow_loops=False)
        self.assertEqual(walk.kind, "none")


class ConjectureReportTests(unittest.TestCase):
    def test_report_cyclic_three(self):
        report = conjecture_report(cyclic_square(3)).to_dict()
        self.assertEqual(report["full_transversal_count"], 3)
        self.assertEqual(report["hamilton_transversal_count"], 2)
        self.assertTrue(all(report["conjectures"].values()))
        self.assertIsNotNone(report["witnesses"]["cycle_free_partial"])

    def test_taranenko_reference(self):
        self.assertAlmostEqual(taranenko_reference(1), math.exp(-2))
        self.assertAlmostEqual(taranenko_reference(5), (5 / math.e ** 2) ** 5)

    def test_report_respects_limits(self):
        with self.assertRaises(CapacityError):
            conjecture_report(cyclic_square(6), CensusConfig(full_limit=12, hamilton_limit=5))


if __name__ == "__main__":
    unittest.main()
