"""
Rainbow directed path forests grown one arc at a time.

At each step an arc e = uv is valid when u has no out-arc yet, v has no in-arc
yet, neither lies in the excluded set U, its colour is outside D and unused, and
it is not the arc closing one component into a cycle (end -> start of the same
path; for a singleton u that is the loop uu).
"""
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np

from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError

ColouredArc = Tuple[int, int, int]


@dataclass
class PathForest:
    """Rainbow directed linear forest on a fixed vertex set."""
    vertices: FrozenSet[int]
    arcs: List[ColouredArc] = field(default_factory=list)

    def __post_init__(self):
        self.succ: Dict[int, int] = {}
        self.pred: Dict[int, int] = {}
        self.start: Dict[int, int] = {v: v for v in self.vertices}
        self.end: Dict[int, int] = {v: v for v in self.vertices}
        self.used_colours: Set[int] = set()
        arcs, self.arcs = list(self.arcs), []
        for arc in arcs:
            self.add(*arc)

    def closing_arc(self, u: int) -> Tuple[int, int]:
        """The arc that would close u's component into a directed cycle."""
        return self.end[self.start[u]], self.start[u]

    def is_valid(self, u: int, v: int, colour: int) -> bool:
        return (
            u in self.vertices and v in self.vertices
            and u not in self.succ and v not in self.pred
            and colour not in self.used_colours
            and self.start[u] != v
        )

    def add(self, u: int, v: int, colour: int) -> None:
        if not self.is_valid(u, v, colour):
            raise InvalidStructureError(f"arc {u}->{v} ({colour}) cannot extend the path forest")
        path_start = self.start[u]
        path_end = self.end[v]
        self.succ[u] = v
        self.pred[v] = u
        self.used_colours.add(colour)
        self.arcs.append((u, v, colour))
        # start is keyed by path ends, end by path starts
        self.end[path_start] = path_end
        self.start[path_end] = path_start

    @property
    def component_count(self) -> int:
        return len(self.vertices) - len(self.arcs)

    def components(self) -> List[List[int]]:
        """Each path as its vertex sequence, ordered by starting vertex."""
        paths = []
        for v in sorted(self.vertices):
            if v in self.pred:
                continue
            path = [v]
            while path[-1] in self.succ:
                path.append(self.succ[path[-1]])
            paths.append(path)
        return paths

    def endpoints(self) -> List[Tuple[int, int]]:
        return [(path[0], path[-1]) for path in self.components()]

    def colour_of(self, u: int, v: int) -> Optional[int]:
        for a, b, colour in self.arcs:
            if (a, b) == (u, v):
                return colour
        return None

    def validate(self, G: Optional[ColouredDigraph] = None, U: Iterable[int] = (), D: Iterable[int] = ()) -> None:
        """Check degrees, acyclicity, rainbowness and the U / D exclusions."""
        tails = [u for u, _, _ in self.arcs]
        heads = [v for _, v, _ in self.arcs]
        colours = [c for _, _, c in self.arcs]
        if len(set(tails)) != len(tails) or len(set(heads)) != len(heads):
            raise InvalidStructureError("a vertex has out- or in-degree above one")
        if len(set(colours)) != len(colours):
            raise InvalidStructureError("forest is not rainbow")
        if set(U) & self.vertices:
            raise InvalidStructureError("forest meets the excluded vertex set")
        if set(D) & set(colours):
            raise InvalidStructureError("forest uses a forbidden colour")
        if sum(len(p) for p in self.components()) != len(self.vertices):
            raise InvalidStructureError("forest contains a directed cycle")
        if G is not None:
            for u, v, colour in self.arcs:
                if G.colour_of(u, v) != colour:
                    raise InvalidStructureError(f"arc {u}->{v} is not coloured {colour} in G")

    def to_dict(self) -> Dict:
        return {
            "vertices": sorted(self.vertices),
            "arcs": [list(a) for a in self.arcs],
            "components": self.components(),
        }


@dataclass
class ForestResult:
    forest: PathForest
    choice_counts: List[int]
    target: int
    stalled: bool

    def to_dict(self) -> Dict:
        return {
            "forest": self.forest.to_dict(),
            "choice_counts": list(self.choice_counts),
            "components": self.forest.component_count,
            "target": self.target,
            "stalled": self.stalled,
        }


def valid_arcs(G: ColouredDigraph, forest: PathForest, D: Iterable[int] = ()) -> np.ndarray:
    """(k, 3) array of currently valid arcs (tail, head, colour) in lexicographic order."""
    n = G.n
    members = np.zeros(n, dtype=bool)
    members[[v - 1 for v in forest.vertices]] = True
    free_tail = members.copy()
    free_head = members.copy()
    if forest.succ:
        free_tail[[u - 1 for u in forest.succ]] = False
    if forest.pred:
        free_head[[v - 1 for v in forest.pred]] = False
    banned = np.zeros(n + 1, dtype=bool)
    banned[[c for c in set(D) | forest.used_colours if 0 < c <= n]] = True
    banned[0] = True
    matrix = G.matrix
    mask = free_tail[:, None] & free_head[None, :] & ~banned[matrix]
    for u in np.flatnonzero(free_tail):
        a, b = forest.closing_arc(int(u) + 1)
        mask[a - 1, b - 1] = False
    tails, heads = np.nonzero(mask)
    return np.stack([tails + 1, heads + 1, matrix[tails, heads]], axis=1) if tails.size else np.empty((0, 3), dtype=np.int64)


def grow_path_forest(G: ColouredDigraph, U: Iterable[int] = (), D: Iterable[int] = (),
                     component_exponent: float = 0.0, selection: str = "random",
                     rng: Optional[np.random.Generator] = None, verbose: bool = False) -> ForestResult:
    """
    Greedily grow a rainbow path forest on V minus U avoiding the colours D.

    Args:
        G: Coloured digraph
        U: Excluded vertices
        D: Forbidden colours
        component_exponent: Stop at max(1, floor(n^e)) components
        selection: "random" (uniform among valid arcs) or "lexicographic"
        rng: Random generator for random selection
        verbose: Print progress

    Returns:
        ForestResult with the number of valid arcs seen at every step; `stalled`
        is set when no valid arc remained above the component target.
    """
    U, D = set(U), set(D)
    forest = PathForest(frozenset(v for v in G.vertices() if v not in U))
    target = max(1, int(math.floor(G.n ** component_exponent)))
    rng = rng if rng is not None else np.random.default_rng(0)
    counts: List[int] = []
    stalled = False
    while forest.component_count > target:
        options = valid_arcs(G, forest, D)
        counts.append(len(options))
        if not len(options):
            stalled = True
            break
        pick = 0 if selection == "lexicographic" else int(rng.integers(len(options)))
        u, v, colour = (int(x) for x in options[pick])
        forest.add(u, v, colour)
        if verbose:
            print(f"[Forest] step {len(counts)}: {len(options)} choices, added {u}->{v} ({colour})")
    if stalled and verbose:
        print(f"[Forest] stalled at {forest.component_count} components (target {target})")
    forest.validate(G, U, D)
    return ForestResult(forest, counts, target, stalled)


def forest_count_report(choice_counts: List[int], n: int, excluded: int = 0) -> Dict:
    """
    Finite-n view of the forest counting argument.

    Reports log10 of the product of per-step choice counts, the same divided by
    steps! (distinct arc sets), the lower-bound product of
    (n'' - (j - 1))^3 / n - n^(5/3) over the steps where it is positive, and
    log10((n / e^2)^n) for reference.
    """
    steps = len(choice_counts)
    positive = [c for c in choice_counts if c > 0]
    log_product = sum(math.log10(c) for c in positive) if len(positive) == steps else float("-inf")
    log_sets = log_product - math.log10(math.factorial(steps)) if steps else 0.0
    remaining = n - excluded
    bound_terms = [(remaining - j) ** 3 / n - n ** (5 / 3) for j in range(steps)]
    log_bound = sum(math.log10(t) for t in bound_terms if t > 0)
    return {
        "steps": steps,
        "choice_counts": list(choice_counts),
        "log10_sequence_count": log_product,
        "log10_forest_count": log_sets,
        "log10_lower_bound": log_bound,
        "lower_bound_terms_positive": sum(1 for t in bound_terms if t > 0),
        "log10_reference": n * math.log10(n / math.e ** 2),
    }


def enumerate_rainbow_path_forests(G: ColouredDigraph, U: Iterable[int] = (), D: Iterable[int] = (),
                                   arc_count: int = 1) -> int:
    """Number of rainbow path forests on V minus U with exactly `arc_count` arcs, avoiding D."""
    U, D = set(U), set(D)
    candidates = [(u, v, c) for u, v, c in G.arcs() if u not in U and v not in U and c not in D]
    vertices = frozenset(v for v in G.vertices() if v not in U)

    def count(start: int, forest: PathForest, remaining: int) -> int:
        if remaining == 0:
            return 1
        total = 0
        for i in range(start, len(candidates)):
            u, v, c = candidates[i]
            if forest.is_valid(u, v, c):
                total += count(i + 1, PathForest(vertices, forest.arcs + [(u, v, c)]), remaining - 1)
        return total

    return count(0, PathForest(vertices), arc_count)


def enumerate_forest_choice_tree(G: ColouredDigraph, U: Iterable[int] = (), D: Iterable[int] = (),
                                 arc_count: int = 1) -> Tuple[int, int]:
    """
    Walk every branch of the greedy growth choice tree for `arc_count` steps.

    Returns:
        (distinct arc sets reached, number of branches)
    """
    U, D = set(U), set(D)
    vertices = frozenset(v for v in G.vertices() if v not in U)
    reached: Set[FrozenSet[ColouredArc]] = set()
    branches = [0]

    def walk(forest: PathForest, remaining: int) -> None:
        if remaining == 0:
            reached.add(frozenset(forest.arcs))
            branches[0] += 1
            return
        for u, v, c in valid_arcs(G, forest, D).tolist():
            walk(PathForest(vertices, forest.arcs + [(u, v, c)]), remaining - 1)

    walk(PathForest(vertices), arc_count)
    return len(reached), branches[0]
