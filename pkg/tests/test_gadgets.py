import unittest

from src.core.digraph import colour_arc_count, latin_to_digraph
from src.core.errors import InvalidStructureError
from src.gadgets.absorbing import AbsorbingGadget, find_absorbing_gadgets, iter_absorbing_gadgets
from src.gadgets.bridges import (
    Bridge,
    equitable_partition,
    mark_distinguishable,
    validate_partition,
)
from src.gadgets.bridging import BridgingGadget, bridges_gadget, find_bridging_gadgets, iter_bridging_gadgets
from src.gadgets.rotate import check_rotation, find_rotations, rotate
from src.gadgets.spread import is_well_spread
from src.sampler.latin_sampler import sample_latin_square
from src.sampler.rectangle import sample_latin_rectangle
from src.utils.config import SamplerConfig


def _host(n: int = 12, seed: int = 0):
    return latin_to_digraph(sample_latin_square(SamplerConfig(seed=seed, n=n, burn_in_moves=n ** 3)))


class AbsorbingGadgetTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.G = _host()
        cls.gadgets = find_absorbing_gadgets(cls.G, 1, 1, cap=None)

    def test_found_gadgets_validate(self):
        self.assertGreater(len(self.gadgets), 0)
        for gadget in self.gadgets:
            gadget.validate(self.G)
            self.assertEqual(len(gadget.vertices()), 7)
            self.assertEqual(len(gadget.colours()), 4)

    def test_cap_truncates(self):
        self.assertEqual(find_absorbing_gadgets(self.G, 1, 1, cap=1), self.gadgets[:1])

    def test_wrong_colour_rejected(self):
        gadget = self.gadgets[0]
        other = next(c for c in self.G.colours if c not in gadget.colours())
        broken = AbsorbingGadget(gadget.v, other, gadget.x, gadget.f)
        with self.assertRaises(InvalidStructureError):
            broken.validate(self.G)

    def test_avoid_sets(self):
        gadget = self.gadgets[0]
        banned_vertex = gadget.x[0]
        for found in iter_absorbing_gadgets(self.G, 1, 1, avoid_vertices=[banned_vertex], avoid_colours=[gadget.f[1]]):
            self.assertNotIn(banned_vertex, found.vertices())
            self.assertNotIn(gadget.f[1], found.f)

    def test_out_of_range_root(self):
        with self.assertRaises(ValueError):
            find_absorbing_gadgets(self.G, 0, 1)

    def test_dict_round_trip(self):
        gadget = self.gadgets[0]
        self.assertEqual(AbsorbingGadget.from_dict(gadget.to_dict()), gadget)


class BridgingGadgetTests(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.G = _host()

    def test_found_gadgets_validate(self):
        gadgets = find_bridging_gadgets(self.G, 1, 2, cap=50)
        self.assertGreater(len(gadgets), 0)
        for gadget in gadgets:
            gadget.validate(self.G)
            self.assertEqual(len(gadget.vertices()), 8)

    def test_equal_roots_rejected(self):
        with self.assertRaises(ValueError):
            list(iter_bridging_gadgets(self.G, 3, 3))

    def test_attaches_to_abutment(self):
        absorbing = find_absorbing_gadgets(self.G, 1, 1, cap=20)
        attached = 0
        for gadget in absorbing:
            y, z = gadget.abutment
            for bridge in iter_bridging_gadgets(self.G, y, z, avoid_vertices=gadget.vertices() - {y, z},
                                                avoid_colours=gadget.colours()):
                self.assertTrue(bridges_gadget(bridge, gadget))
                attached += 1
                break
        self.assertGreater(attached, 0)


class WellSpreadTests(unittest.TestCase):
    def test_small_collection_is_well_spread(self):
        G = _host()
        gadgets = find_absorbing_gadgets(G, 1, 1, cap=G.n)
        self.assertTrue(is_well_spread(gadgets, "absorbing", G.n).well_spread)

    def test_reports_worst_load(self):
        G = _host()
        gadgets = find_absorbing_gadgets(G, 1, 1, cap=None)
        result = is_well_spread(gadgets, "absorbing", G.n)
        self.assertEqual(result.well_spread, result.worst_load <= G.n)
        self.assertIn(result.worst_type, ("vertex", "colour"))

    def test_bridging_roots_exempt(self):
        gadget = BridgingGadget(1, 2, (3, 4, 5, 6, 7, 8), (1, 2, 3, 4))
        result = is_well_spread([gadget, gadget], "bridging", 1)
        self.assertFalse(result.well_spread)
        self.assertEqual(result.worst_load, 2)
        self.assertEqual((result.worst_type, result.worst_element), ("vertex", 3))

    def test_mixed_roots(self):
        a = BridgingGadget(1, 2, (3, 4, 5, 6, 7, 8), (1, 2, 3, 4))
        b = BridgingGadget(2, 1, (3, 4, 5, 6, 7, 8), (1, 2, 3, 4))
        with self.assertRaises(ValueError):
            is_well_spread([a, b], "bridging", 10)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            is_well_spread([], "loop", 3)


class BridgeTests(unittest.TestCase):
    def test_equitable_partition(self):
        self.assertEqual(equitable_partition(range(1, 9)), ((1, 7), (2, 8), (3,), (4,), (5,), (6,)))

    def test_partition_validation(self):
        with self.assertRaises(InvalidStructureError):
            validate_partition(range(1, 7), [(1, 2, 3), (4,), (5,), (6,), (), ()])
        with self.assertRaises(InvalidStructureError):
            validate_partition(range(1, 7), [(1,), (2,), (3,), (4,), (5,)])
        with self.assertRaises(InvalidStructureError):
            validate_partition(range(1, 7), [(1,), (1,), (3,), (4,), (5,), (6,)])

    def test_shared_middle_arc_is_not_distinguishable(self):
        first = Bridge(BridgingGadget(1, 2, (3, 4, 5, 6, 7, 8), (1, 2, 3, 4)), 5, 6)
        # shares the middle arc w2 -> w1 = 4 -> 3
        second = Bridge(BridgingGadget(1, 2, (3, 4, 9, 10, 11, 12), (1, 2, 3, 4)), 5, 6)
        lone = Bridge(BridgingGadget(13, 14, (15, 16, 17, 18, 19, 20), (1, 2, 3, 4)), 5, 6)
        marked = mark_distinguishable([first, second, lone])
        self.assertEqual([b.distinguishable for b in marked], [False, False, True])


class RotateTests(unittest.TestCase):
    def setUp(self):
        self.H = sample_latin_rectangle(SamplerConfig(seed=4, n=10, k=3))
        self.A = {1, 2, 3, 4, 5}
        self.B = {1, 2, 3, 4, 5}

    def test_rotation_removes_one_arc_between_sets(self):
        a, b, v, w = next(find_rotations(self.H, self.A, self.B))
        colours = self.H.colours
        before = colour_arc_count(self.H, self.A, self.B, colours)
        rotated = rotate(self.H, a, b, v, w, self.A, self.B)
        self.assertEqual(colour_arc_count(rotated, self.A, self.B, colours), before - 1)
        self.assertEqual(rotated.colour_of(a, w), self.H.colour_of(a, b))
        self.assertEqual(rotated.colour_of(v, b), self.H.colour_of(a, b))

    def test_rotate_back(self):
        a, b, v, w = next(find_rotations(self.H, self.A, self.B))
        rotated = rotate(self.H, a, b, v, w, self.A, self.B)
        self.assertEqual(rotate(rotated, a, w, v, b, {a}, {w}), self.H)

    def test_protected_colour(self):
        a, b, v, w = next(find_rotations(self.H, self.A, self.B))
        with self.assertRaises(InvalidStructureError):
            check_rotation(self.H, a, b, v, w, self.A, self.B, protected=self.H.colour_of(a, b))

    def test_precondition_messages(self):
        with self.assertRaises(InvalidStructureError) as ctx:
            check_rotation(self.H, 9, 1, 6, 7, self.A, self.B)
        self.assertIn("a=9", str(ctx.exception))
        with self.assertRaises(InvalidStructureError) as ctx:
            check_rotation(self.H, 1, 2, 3, 7, self.A, self.B)
        self.assertIn("outside A", str(ctx.exception))


if __name__ == "__main__":
    unittest.main()
