import math
import unittest

from src.absorber.paths import count_link_paths
from src.core.digraph import latin_to_digraph
from src.core.errors import InvalidStructureError, SearchExhaustedError
from src.core.positions import classify_position_set
from src.pipeline.flexible import choose_flexible_sets, count_restricted_connectors, desk_check_threshold, check_draw
from src.pipeline.forest import (
    PathForest,
    enumerate_forest_choice_tree,
    enumerate_rainbow_path_forests,
    forest_count_report,
    grow_path_forest,
    valid_arcs,
)
from src.pipeline.instances import construct_planted_instance, maximum_order, minimum_order
from src.pipeline.linking import HamiltonCycle, hamilton_cycle_checks, validate_hamilton_cycle
from src.pipeline.runner import run_pipeline, run_planted_pipeline
from src.sampler.latin_sampler import cyclic_square, sample_latin_square
from src.utils.config import PipelineConfig, SamplerConfig
from src.utils.rng import make_rng


def _square_digraph(n: int, seed: int = 0):
    return latin_to_digraph(sample_latin_square(SamplerConfig(seed=seed, n=n, burn_in_moves=n ** 3)))


def _run_planted(n: int, cfg: PipelineConfig):
    instance, result = run_planted_pipeline(n, cfg)
    if instance is None:
        raise AssertionError(f"planting failed: {result['error']}")
    return instance, result


class PathForestTests(unittest.TestCase):
    def test_closing_arc_is_invalid(self):
        forest = PathForest(frozenset(range(1, 5)), [(1, 2, 1), (2, 3, 2)])
        self.assertEqual(forest.closing_arc(3), (3, 1))
        self.assertFalse(forest.is_valid(3, 1, 3))
        self.assertFalse(forest.is_valid(4, 4, 3))
        self.assertFalse(forest.is_valid(3, 4, 2))
        self.assertTrue(forest.is_valid(3, 4, 3))
        with self.assertRaises(InvalidStructureError):
            forest.add(3, 1, 3)

    def test_components_and_endpoints(self):
        forest = PathForest(frozenset(range(1, 6)), [(4, 5, 1), (1, 2, 2), (5, 3, 3)])
        self.assertEqual(forest.components(), [[1, 2], [4, 5, 3]])
        self.assertEqual(forest.endpoints(), [(1, 2), (4, 3)])
        self.assertEqual(forest.component_count, 2)
        self.assertEqual(forest.closing_arc(3), (3, 4))

    def test_valid_arcs_respect_exclusions(self):
        G = latin_to_digraph(cyclic_square(5))
        forest = PathForest(frozenset({1, 2, 3, 4}), [(1, 2, G.colour_of(1, 2))])
        used = G.colour_of(1, 2)
        for u, v, colour in valid_arcs(G, forest, D=[5]).tolist():
            self.assertTrue(forest.is_valid(u, v, colour))
            self.assertNotIn(colour, (5, used))
            self.assertNotIn(5, (u, v))

    def test_growth_matches_exhaustive_enumeration(self):
        for n, seed in ((5, 0), (6, 1), (7, 2)):
            G = _square_digraph(n, seed)
            sets, branches = enumerate_forest_choice_tree(G, U=[n], D=[1], arc_count=2)
            self.assertEqual(sets, enumerate_rainbow_path_forests(G, U=[n], D=[1], arc_count=2))
            self.assertEqual(branches, 2 * sets)

    def test_grow_reaches_target_or_stalls(self):
        G = _square_digraph(9, 3)
        grown = grow_path_forest(G, U=[1, 2], D=[3], rng=make_rng(0))
        grown.forest.validate(G, [1, 2], [3])
        if not grown.stalled:
            self.assertEqual(grown.forest.component_count, grown.target)
        self.assertEqual(len(grown.choice_counts), len(grown.forest.arcs) + int(grown.stalled))

    def test_lexicographic_growth_is_deterministic(self):
        G = _square_digraph(8, 4)
        first = grow_path_forest(G, selection="lexicographic")
        second = grow_path_forest(G, selection="lexicographic")
        self.assertEqual(first.forest.arcs, second.forest.arcs)
        self.assertEqual(tuple(first.forest.arcs[0][:2]), (1, 2))

    def test_count_report(self):
        report = forest_count_report([12, 6, 2], n=10)
        self.assertEqual(report["steps"], 3)
        self.assertAlmostEqual(report["log10_sequence_count"], math.log10(144))
        self.assertAlmostEqual(report["log10_forest_count"], math.log10(144 / 6))
        self.assertAlmostEqual(report["log10_reference"], 10 * math.log10(10 / math.e ** 2))


class FlexibleSetTests(unittest.TestCase):
    def test_probability_one_keeps_everything(self):
        G = _square_digraph(12)
        cfg = PipelineConfig(flexible_size=3, template_size=3, flexible_slack_exponent=1.0, check_count=4,
                             check_threshold=0)
        chosen = choose_flexible_sets(G, cfg)
        self.assertEqual(chosen.probability, 1.0)
        self.assertEqual((len(chosen.vertices), len(chosen.colours)), (3, 3))
        self.assertEqual(len(chosen.checks), 4)
        self.assertEqual(chosen.attempts, 1)
        self.assertEqual(chosen.threshold, 0)
        for check in chosen.checks:
            unrestricted = count_link_paths(G, check["u"], check["v"], check["c"]).count
            self.assertEqual(check["count"], unrestricted)

    def test_same_seed_same_sets(self):
        G = _square_digraph(12)
        cfg = PipelineConfig(seed=4, check_count=2)
        self.assertEqual(choose_flexible_sets(G, cfg).to_dict(), choose_flexible_sets(G, cfg).to_dict())

    def test_default_threshold_is_positive(self):
        self.assertIsNone(PipelineConfig().check_threshold)
        self.assertEqual(PipelineConfig().check_length, 4)
        self.assertEqual(desk_check_threshold(12, 1.0), 14)
        self.assertGreater(desk_check_threshold(20, (2 + 20 ** 0.9) / 20), 0)

    def test_thin_draw_is_rejected_by_default(self):
        G = _square_digraph(12)
        cfg = PipelineConfig()
        p = (cfg.flexible_size + 12 ** cfg.flexible_slack_exponent) / 12
        threshold = desk_check_threshold(12, p)
        # three inner vertices admit at most 3! orderings
        self.assertGreater(threshold, 6)
        passed, checks = check_draw(G, {1, 2, 3}, {1, 2, 3}, cfg, make_rng(0), threshold)
        self.assertFalse(passed)
        self.assertEqual(len(checks), cfg.check_count)
        self.assertTrue(all(check["count"] <= 6 for check in checks))
        passed, _ = check_draw(G, set(range(1, 13)), set(range(1, 13)), cfg, make_rng(0), 0)
        self.assertTrue(passed)

    def test_unreachable_threshold(self):
        G = _square_digraph(10)
        cfg = PipelineConfig(check_threshold=10 ** 6, flexible_retries=2, check_count=1)
        with self.assertRaises(SearchExhaustedError) as ctx:
            choose_flexible_sets(G, cfg)
        self.assertEqual(ctx.exception.stage, "flexible")

    def test_single_arc_connector_carries_the_colour(self):
        G = latin_to_digraph(cyclic_square(5))
        colour = G.colour_of(1, 3)
        self.assertEqual(count_restricted_connectors(G, 1, 3, colour, 1, set(), set()), 1)
        other = colour % 5 + 1
        self.assertEqual(count_restricted_connectors(G, 1, 3, other, 1, set(), set()), 0)


class HamiltonCycleCheckTests(unittest.TestCase):
    def test_cyclic_three(self):
        G = latin_to_digraph(cyclic_square(3))
        # 1 -> 2 (2), 2 -> 3 (1), 3 -> 1 (3)
        self.assertTrue(all(hamilton_cycle_checks(G, [1, 2, 3]).values()))
        validate_hamilton_cycle(G, [1, 2, 3], [2, 1, 3])

    def test_failures_are_named(self):
        G = latin_to_digraph(cyclic_square(4))
        checks = hamilton_cycle_checks(G, [1, 2, 3, 4])
        self.assertTrue(checks["degrees"] and checks["connected"])
        self.assertFalse(checks["rainbow"])
        with self.assertRaises(InvalidStructureError) as ctx:
            validate_hamilton_cycle(G, [1, 2, 3, 4])
        self.assertIn("rainbow", str(ctx.exception))
        checks = hamilton_cycle_checks(latin_to_digraph(cyclic_square(5)), [1, 2, 3])
        self.assertFalse(checks["spanning"])
        self.assertFalse(checks["connected"])


class PlantedPipelineTests(unittest.TestCase):
    def test_minimum_order(self):
        self.assertEqual(minimum_order(PipelineConfig()), 50)
        self.assertEqual(minimum_order(PipelineConfig(template_size=1, flexible_size=0)), 13)

    def test_maximum_order(self):
        self.assertEqual(maximum_order(PipelineConfig(template_size=1, flexible_size=0)), 25)
        long_paths = PipelineConfig(template_size=1, flexible_size=0, absorber_path_length=3, link_path_length=3)
        self.assertEqual(maximum_order(long_paths), 41)
        with self.assertRaises(ValueError):
            construct_planted_instance(26, PipelineConfig(template_size=1, flexible_size=0))

    def test_too_small_order(self):
        with self.assertRaises(ValueError):
            construct_planted_instance(40)

    def test_end_to_end(self):
        for n, seed in ((50, 0), (54, 1)):
            cfg = PipelineConfig(seed=seed, quasirandom_samples=200)
            instance, result = _run_planted(n, cfg)
            self.assertEqual(result["status"], "success", result.get("error"))
            cycle = result["cycle"]
            validate_hamilton_cycle(instance.digraph, cycle["vertices"], cycle["colours"])
            forest_arcs = sorted(tuple(a) for a in result["forest"]["forest"]["arcs"])
            self.assertEqual(forest_arcs, sorted(instance.path_arcs))
            self.assertEqual(result["linking"]["components"], 1 if n > 50 else 0)
            self.assertTrue(result["trace"][-1].startswith("✓"))

    def test_cycle_is_a_hamilton_transversal(self):
        cfg = PipelineConfig(seed=2, quasirandom_samples=0)
        instance, result = _run_planted(52, cfg)
        self.assertEqual(result["status"], "success", result.get("error"))
        cycle = HamiltonCycle(result["cycle"]["vertices"], result["cycle"]["colours"])
        verdict = classify_position_set(instance.square, cycle.to_positions())
        self.assertTrue(verdict.hamilton)

    def test_single_edge_template(self):
        cfg = PipelineConfig(seed=3, template_size=1, flexible_size=0, quasirandom_samples=0)
        instance, result = _run_planted(20, cfg)
        self.assertEqual(result["status"], "success", result.get("error"))
        self.assertEqual(result["linking"]["X"], [])
        self.assertEqual(len(result["cycle"]["vertices"]), 20)
        self.assertTrue(result["trace"][0].startswith("Step 0"))

    def test_length_three_paths_end_to_end(self):
        for seed in (0, 1):
            cfg = PipelineConfig(seed=seed, template_size=1, flexible_size=0, absorber_path_length=3,
                                 link_path_length=3, quasirandom_samples=0)
            instance, result = _run_planted(30, cfg)
            self.assertEqual(result["status"], "success", result.get("error"))
            cycle = result["cycle"]
            validate_hamilton_cycle(instance.digraph, cycle["vertices"], cycle["colours"])
            paths = result["t_absorber"]["absorbers"][0]["paths"]
            self.assertEqual([len(p["colours"]) for p in paths], [3, 3, 3, 3])
            self.assertEqual(result["t_absorber"]["vertex_count"], 21)
            forest_arcs = sorted(tuple(a) for a in result["forest"]["forest"]["arcs"])
            self.assertEqual(forest_arcs, sorted(instance.path_arcs))

    def test_dense_order_is_reported_not_raised(self):
        cfg = PipelineConfig(seed=0, template_size=1, flexible_size=0, absorber_path_length=3,
                             link_path_length=3, quasirandom_samples=0)
        instance, result = run_planted_pipeline(40, cfg)
        self.assertIn(result["status"], ("success", "failed"))
        if instance is None:
            self.assertEqual(result["stage"], "plant")
            self.assertEqual(result["diagnostics"]["resource"], "completion")
        else:
            self.assertEqual(result["status"], "success", result.get("error"))

    def test_planting_failure_is_a_status(self):
        def exhausted(n, cfg, seed=0, verbose=False):
            raise SearchExhaustedError("no completion", stage="complete", resource="completion")

        instance, result = run_planted_pipeline(30, PipelineConfig(quasirandom_samples=0), build=exhausted)
        self.assertIsNone(instance)
        self.assertEqual((result["status"], result["stage"]), ("failed", "plant"))
        self.assertEqual(result["diagnostics"]["stage"], "complete")
        self.assertTrue(result["trace"][-1].startswith("✗ plant"))

    def test_missing_gadgets_fail_at_embed(self):
        cfg = PipelineConfig(seed=0, quasirandom_samples=0)
        instance = construct_planted_instance(50, cfg, seed=0)
        result = run_pipeline(instance.digraph, cfg, roots=instance.roots, flexible=instance.flexible,
                              gadget_source=lambda v, c: [], bridge_source=instance.bridge_source)
        self.assertEqual((result["status"], result["stage"]), ("failed", "embed"))
        self.assertEqual(result["diagnostics"]["resource"], "gadget")
        self.assertTrue(result["trace"][-1].startswith("✗"))

    def test_small_random_square_fails_cleanly(self):
        G = _square_digraph(20, 5)
        result = run_pipeline(G, PipelineConfig(seed=1, quasirandom_samples=0, gadget_cap=5, bridge_cap=5))
        self.assertEqual(result["status"], "failed")
        self.assertEqual(result["stage"], "embed")
        self.assertIsNone(result["cycle"])


if __name__ == "__main__":
    unittest.main()
