import unittest

import numpy as np

from src.core.digraph import ColouredDigraph, colour_arc_count, latin_to_digraph
from src.gadgets.bridges import equitable_partition, m_s_membership
from src.gadgets.quasirandom import (
    evaluate_triples,
    lower_quasirandom_check,
    max_pair_arc_count,
    naive_lower_min_deviation,
    naive_max_pair_arc_count,
    sample_triples,
    upper_quasirandom_check,
)
from src.sampler.latin_sampler import cyclic_square, sample_latin_square
from src.sampler.rectangle import sample_latin_rectangle
from src.utils.config import SamplerConfig
from src.utils.rng import make_rng


class UpperQuasirandomTests(unittest.TestCase):
    def test_pair_count_matches_oracle(self):
        for seed in range(3):
            H = sample_latin_rectangle(SamplerConfig(seed=seed, n=7, k=2))
            best = max_pair_arc_count(H, 2)
            self.assertEqual(best["mode"], "exhaustive")
            self.assertEqual(best["value"], naive_max_pair_arc_count(H, 2))
            self.assertEqual(colour_arc_count(H, best["A"], best["B"], H.colours), best["value"])

    def test_cyclic_square_holds(self):
        result = upper_quasirandom_check(latin_to_digraph(cyclic_square(4)))
        self.assertTrue(result["holds"])
        self.assertTrue(result["certified"])

    def test_sampled_mode_is_a_lower_bound(self):
        H = sample_latin_rectangle(SamplerConfig(seed=1, n=9, k=3))
        exact = max_pair_arc_count(H, 3)
        sampled = max_pair_arc_count(H, 3, exhaustive_limit=4, samples=20)
        self.assertEqual(sampled["mode"], "sampled")
        self.assertLessEqual(sampled["value"], exact["value"])

    def test_violation_is_certified(self):
        H = ColouredDigraph.from_colour_classes(4, {1: [2, 1, 4, 3], 2: [1, 2, 3, 4]})
        result = upper_quasirandom_check(H)
        self.assertFalse(result["holds"])
        self.assertTrue(result["certified"])
        self.assertEqual(result["max_arcs"], 4)
        self.assertEqual(result["worst_pair"], {"A": [1, 2], "B": [1, 2]})

    def test_membership_report(self):
        H = sample_latin_rectangle(SamplerConfig(seed=2, n=12, k=6))
        report = m_s_membership(H, 1, 2, equitable_partition(H.colours), s=0)
        self.assertEqual(report["member"], report["r"] == 0 and report["max_pair_arcs"] <= report["bound"])


class LowerQuasirandomTests(unittest.TestCase):
    def test_exhaustive_matches_oracle(self):
        for square in (cyclic_square(3), sample_latin_square(SamplerConfig(seed=3, n=4))):
            G = latin_to_digraph(square)
            result = lower_quasirandom_check(G)
            self.assertAlmostEqual(result["min_deviation"], naive_lower_min_deviation(G))
            self.assertTrue(result["holds"])

    def test_worst_triple_reproduces_deviation(self):
        G = latin_to_digraph(sample_latin_square(SamplerConfig(seed=5, n=5, burn_in_moves=125)))
        result = lower_quasirandom_check(G)
        triple = result["worst_triple"]
        n = G.n
        deviation = colour_arc_count(G, triple["U1"], triple["U2"], triple["D"])
        deviation -= len(triple["U1"]) * len(triple["U2"]) * len(triple["D"]) / n
        self.assertAlmostEqual(deviation, result["min_deviation"])

    def test_exhaustive_limit(self):
        G = latin_to_digraph(cyclic_square(6))
        with self.assertRaises(ValueError):
            lower_quasirandom_check(G, exhaustive_limit=5)

    def test_sampled_mode(self):
        G = latin_to_digraph(cyclic_square(6))
        result = lower_quasirandom_check(G, mode="sampled", samples=500)
        self.assertEqual(result["triples_checked"], 500)
        self.assertGreaterEqual(result["min_deviation"], lower_quasirandom_check(G)["min_deviation"] - 1e-9)

    def test_batch_evaluation_matches_counts(self):
        G = latin_to_digraph(sample_latin_square(SamplerConfig(seed=6, n=6, burn_in_moves=216)))
        t1, t2, t3 = sample_triples(G.n, 25, make_rng(8))
        counts = evaluate_triples(G, t1, t2, t3)
        for i in range(25):
            U1, U2, D = (np.flatnonzero(t[i]) + 1 for t in (t1, t2, t3))
            self.assertEqual(int(counts[i]), colour_arc_count(G, U1, U2, D))

    def test_unknown_mode(self):
        with self.assertRaises(ValueError):
            lower_quasirandom_check(latin_to_digraph(cyclic_square(3)), mode="random")


if __name__ == "__main__":
    unittest.main()
