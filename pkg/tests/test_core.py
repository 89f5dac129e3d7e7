import unittest

import numpy as np

from src.core.digraph import (
    ColouredDigraph, colour_arc_count, digraph_to_latin, latin_to_digraph, restrict_to_colours,
)
from src.core.errors import InvalidStructureError, SearchExhaustedError
from src.core.latin import LatinSquare, is_latin_square
from src.core.matching import BipartiteGraph, HopcroftKarp, perfect_matching
from src.core.positions import PositionSet, TransversalKind, classify_position_set
from src.sampler.latin_sampler import cyclic_square


Z3 = LatinSquare([[1, 2, 3], [2, 3, 1], [3, 1, 2]])


class LatinSquareTests(unittest.TestCase):
    def test_rejects_repeated_row_symbol(self):
        with self.assertRaises(InvalidStructureError) as ctx:
            LatinSquare([[1, 1], [2, 2]])
        self.assertIn("row 1", str(ctx.exception))
        self.assertIn("symbol 1", str(ctx.exception))

    def test_rejects_repeated_column_symbol(self):
        with self.assertRaises(InvalidStructureError) as ctx:
            LatinSquare([[1, 2], [1, 2]])
        self.assertIn("column 1", str(ctx.exception))

    def test_symbol_outside_range(self):
        self.assertFalse(is_latin_square([[1, 3], [3, 1]]))

    def test_text_round_trip(self):
        self.assertEqual(LatinSquare.from_text(Z3.to_text()), Z3)

    def test_grid_is_read_only(self):
        with self.assertRaises(ValueError):
            Z3.grid[0, 0] = 2

    def test_permute_rows(self):
        permuted = Z3.permute_rows([2, 3, 1])
        self.assertEqual(permuted.to_list()[0], [2, 3, 1])


class DigraphTests(unittest.TestCase):
    def test_correspondence_round_trip(self):
        square = cyclic_square(5)
        self.assertEqual(digraph_to_latin(latin_to_digraph(square)), square)

    def test_colour_classes_are_permutations(self):
        G = latin_to_digraph(Z3)
        for colour in G.colours:
            heads = sorted(G.colour_class(colour).values())
            self.assertEqual(heads, [1, 2, 3])

    def test_out_and_in_neighbours(self):
        G = latin_to_digraph(Z3)
        self.assertEqual(G.out_neighbour(1, 2), 2)
        self.assertEqual(G.in_neighbour(2, 2), 1)

    def test_restrict_rejects_foreign_colours(self):
        G = restrict_to_colours(latin_to_digraph(Z3), [1, 2])
        with self.assertRaises(ValueError):
            restrict_to_colours(G, [3])

    def test_restrict_keeps_only_chosen_colours(self):
        G = restrict_to_colours(latin_to_digraph(cyclic_square(4)), [2])
        self.assertEqual(G.arc_count(), 4)
        self.assertEqual(G.colours, (2,))

    def test_colour_arc_count_full_sets(self):
        G = latin_to_digraph(cyclic_square(4))
        self.assertEqual(colour_arc_count(G, range(1, 5), range(1, 5), range(1, 5)), 16)
        self.assertEqual(colour_arc_count(G, [], range(1, 5), range(1, 5)), 0)

    def test_colour_arc_count_rejects_foreign_colours(self):
        G = restrict_to_colours(latin_to_digraph(cyclic_square(4)), [1, 2])
        self.assertEqual(colour_arc_count(G, range(1, 5), range(1, 5), [2]), 4)
        with self.assertRaises(InvalidStructureError):
            colour_arc_count(G, range(1, 5), range(1, 5), [2, 3])
        with self.assertRaises(InvalidStructureError):
            colour_arc_count(latin_to_digraph(cyclic_square(4)), [1], [2], [5])

    def test_with_arc_edits_validates(self):
        G = latin_to_digraph(Z3)
        with self.assertRaises(InvalidStructureError):
            G.with_arc_edits([(1, 1)], [(1, 2, 1)])

    def test_from_colour_classes_clash(self):
        with self.assertRaises(InvalidStructureError):
            ColouredDigraph.from_colour_classes(2, {1: [1, 2], 2: [1, 2]})


class MatchingTests(unittest.TestCase):
    def test_complete_graph_has_perfect_matching(self):
        graph = BipartiteGraph(3, 3, [(i, j) for i in range(3) for j in range(3)])
        matching = perfect_matching(graph)
        self.assertEqual(sorted(matching), [0, 1, 2])
        self.assertEqual(sorted(matching.values()), [0, 1, 2])

    def test_hall_violation(self):
        graph = BipartiteGraph(2, 2, [(0, 0), (1, 0)])
        self.assertIsNone(perfect_matching(graph))
        self.assertEqual(len(HopcroftKarp(graph)()), 1)


class PositionSetTests(unittest.TestCase):
    def test_hamilton_classification(self):
        cls = classify_position_set(Z3, PositionSet([(1, 2), (2, 3), (3, 1)], 3))
        self.assertEqual(cls.kind, TransversalKind.HAMILTON)
        self.assertTrue(cls.full)

    def test_loops_are_cycles(self):
        cls = classify_position_set(Z3, PositionSet([(1, 1), (2, 2)], 3))
        self.assertFalse(cls.cycle_free)

    def test_clash_is_reported(self):
        with self.assertRaises(InvalidStructureError):
            classify_position_set(Z3, PositionSet([(1, 1), (1, 2)], 3))

    def test_out_of_range_cell(self):
        with self.assertRaises(InvalidStructureError):
            PositionSet([(4, 1)], 3)


class ErrorTests(unittest.TestCase):
    def test_search_exhausted_to_dict(self):
        error = SearchExhaustedError("stuck", stage="embed", index=2, resource="bridge")
        self.assertEqual(error.to_dict()["resource"], "bridge")
        self.assertEqual(error.to_dict()["index"], 2)


if __name__ == "__main__":
    unittest.main()
