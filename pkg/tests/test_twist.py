import unittest

from src.core.errors import InvalidStructureError
from src.gadgets.bridges import count_distinguishable_bridges, equitable_partition
from src.gadgets.twist import (
    TwistSystem,
    canonical_bridge,
    canonical_distinguishable_filter,
    find_twist_systems,
    few_loops_filter,
    twist,
    twist_effect,
    twist_walk,
    untwist,
    validate_twist_system,
)
from src.sampler.rectangle import complete_latin_rectangle, rectangle_to_digraph
from src.utils.rng import make_rng

N = 30
K = 6
PARTITION = equitable_partition(range(1, K + 1))
SYSTEM = TwistSystem(
    y=1, z=2,
    u=tuple(range(3, 9)),
    mid=tuple(range(9, 17)),
    ext=tuple(range(17, 25)),
    d=(1, 2, 3, 4, 5, 6),
)


def planted_host(system: TwistSystem = SYSTEM, seed: int = 0):
    """A 6 x 30 Latin rectangle containing the system's arcs and none of its added arcs."""
    prefilled = {(colour, tail): head for tail, head, colour in system.arcs()}
    forbidden = {}
    for tail, head, _ in system.added_arcs():
        for colour in range(1, K + 1):
            forbidden.setdefault((colour, tail), set()).add(head)
    rect = complete_latin_rectangle(N, K, prefilled=prefilled, forbidden=forbidden, rng=make_rng(seed, 42))
    return rectangle_to_digraph(rect)


class TwistSystemTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.H = planted_host()

    def test_planted_system_validates(self):
        validate_twist_system(self.H, SYSTEM, PARTITION)

    def test_twist_then_untwist_is_identity(self):
        twisted = twist(self.H, SYSTEM, PARTITION)
        self.assertNotEqual(twisted, self.H)
        self.assertEqual(untwist(twisted, SYSTEM), self.H)

    def test_twist_touches_only_switched_colours(self):
        twisted = twist(self.H, SYSTEM, PARTITION)
        for colour in (5, 6):
            self.assertEqual(twisted.colour_class(colour), self.H.colour_class(colour))
        for colour in (1, 2, 3, 4):
            self.assertNotEqual(twisted.colour_class(colour), self.H.colour_class(colour))

    def test_twist_creates_canonical_bridge(self):
        effect = twist_effect(self.H, SYSTEM, PARTITION)
        self.assertTrue(effect["canonical_present"])
        canonical = canonical_bridge(SYSTEM)
        canonical.gadget.validate(effect["twisted"])
        self.assertIn(canonical.key(), [b.key() for b in effect["created"]])
        r_after, _ = count_distinguishable_bridges(effect["twisted"], 1, 2, PARTITION)
        self.assertEqual(r_after, effect["r_after"])

    def test_untwist_rejects_untwisted_host(self):
        with self.assertRaises(InvalidStructureError):
            untwist(self.H, SYSTEM)

    def test_present_non_arc_rejected(self):
        twisted = twist(self.H, SYSTEM, PARTITION)
        with self.assertRaises(InvalidStructureError):
            validate_twist_system(twisted, SYSTEM, PARTITION)

    def test_overlapping_labels_rejected(self):
        bad = TwistSystem(1, 2, SYSTEM.u, (3,) + SYSTEM.mid[1:], SYSTEM.ext, SYSTEM.d)
        with self.assertRaises(InvalidStructureError) as ctx:
            validate_twist_system(self.H, bad, PARTITION)
        self.assertIn("middle", str(ctx.exception))

    def test_search_finds_valid_systems(self):
        systems = find_twist_systems(self.H, 1, 2, PARTITION, cap=5)
        self.assertEqual(len(systems), 5)
        for system in systems:
            validate_twist_system(self.H, system, PARTITION)
            self.assertEqual(system.u, SYSTEM.u)

    def test_loop_filter(self):
        loops = self.H.loop_counts()
        threshold = max(loops[d] for d in SYSTEM.d[:4])
        self.assertTrue(few_loops_filter(self.H, SYSTEM, threshold))
        if threshold > 0:
            self.assertFalse(few_loops_filter(self.H, SYSTEM, threshold - 1))

    def test_canonical_filter_matches_effect(self):
        effect = twist_effect(self.H, SYSTEM, PARTITION)
        self.assertEqual(canonical_distinguishable_filter(self.H, SYSTEM, PARTITION),
                         effect["canonical_distinguishable"])

    def test_walk_with_impossible_loop_threshold_stops(self):
        # every system fails a negative threshold
        trajectory = twist_walk(self.H, 1, 2, PARTITION, steps=2, rng=make_rng(7), cap=3, loop_threshold=-1)
        self.assertEqual(len(trajectory), 1)

    def test_walk_records_trajectory(self):
        trajectory = twist_walk(self.H, 1, 2, PARTITION, steps=1, rng=make_rng(7), cap=3)
        self.assertEqual(trajectory[0]["step"], 0)
        for record in trajectory[1:]:
            self.assertEqual(len(record["removed"]), 12)
            self.assertEqual(len(record["added"]), 12)


if __name__ == "__main__":
    unittest.main()
