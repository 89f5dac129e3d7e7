"""
Splicing a path forest into a T-absorber to close a rainbow Hamilton cycle.

The forest components Q_1..Q_k (ordered by start vertex) and the absorber path
are joined by k + 1 connectors: terminal(H) -> start(Q_1), end(Q_1) -> start(Q_2),
..., end(Q_k) -> initial(H). Connector j carries leftover colour c_j on its second
arc (on its only arc when it is a single arc); longer connectors borrow flexible
vertices and colours, which the absorber then gives up.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.absorber.paths import DirectedPath, iter_rainbow_paths
from src.absorber.t_absorber import TAbsorber, robust_hamilton_path
from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError, SearchExhaustedError
from src.core.positions import PositionSet
from src.pipeline.forest import PathForest
from src.utils.config import PipelineConfig


@dataclass
class HamiltonCycle:
    vertices: List[int]
    colours: List[int]

    def arcs(self) -> List[Tuple[int, int, int]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n], self.colours[i]) for i in range(n)]

    def to_positions(self) -> PositionSet:
        """The Hamilton transversal of the Latin square: cell (u, v) per arc u -> v."""
        return PositionSet(((u, v) for u, v, _ in self.arcs()), len(self.vertices))

    def to_dict(self) -> Dict:
        return {"vertices": list(self.vertices), "colours": list(self.colours), "length": len(self.vertices)}


def hamilton_cycle_checks(G: ColouredDigraph, vertices: Sequence[int], colours: Optional[Sequence[int]] = None) -> Dict[str, bool]:
    """
    Four independent checks of a claimed rainbow Hamilton cycle.

    Returns:
        {"degrees": one in- and one out-arc per vertex,
         "connected": following arcs from the first vertex visits all n,
         "rainbow": n distinct colours, each matching G,
         "spanning": every vertex of G appears}
    """
    n = G.n
    m = len(vertices)
    arcs = [(vertices[i], vertices[(i + 1) % m]) for i in range(m)] if m else []
    out_deg: Dict[int, int] = {}
    in_deg: Dict[int, int] = {}
    succ: Dict[int, int] = {}
    for u, v in arcs:
        out_deg[u] = out_deg.get(u, 0) + 1
        in_deg[v] = in_deg.get(v, 0) + 1
        succ[u] = v
    degrees = all(out_deg.get(v, 0) == 1 and in_deg.get(v, 0) == 1 for v in set(vertices)) and all(
        G.has_arc(u, v) for u, v in arcs
    )

    connected = False
    if m:
        seen, current = {vertices[0]}, succ.get(vertices[0])
        while current is not None and current not in seen:
            seen.add(current)
            current = succ.get(current)
        connected = current == vertices[0] and len(seen) == n

    found = [G.colour_of(u, v) for u, v in arcs]
    rainbow = 0 not in found and len(set(found)) == n and (colours is None or list(colours) == found)
    spanning = set(vertices) == set(G.vertices()) and m == n
    return {"degrees": degrees, "connected": connected, "rainbow": rainbow, "spanning": spanning}


def validate_hamilton_cycle(G: ColouredDigraph, vertices: Sequence[int], colours: Optional[Sequence[int]] = None) -> None:
    """Raise InvalidStructureError naming the first failed check."""
    for name, ok in hamilton_cycle_checks(G, vertices, colours).items():
        if not ok:
            raise InvalidStructureError(f"not a rainbow Hamilton cycle: {name} check failed")


def _connectors(G: ColouredDigraph, source: int, target: int, colour: int, length: int,
                inner: Set[int], colours: Set[int], absorber_vertices: Set[int]):
    if length == 1:
        # a bare arc is only allowed when it touches the absorber
        if (source in absorber_vertices or target in absorber_vertices) and G.colour_of(source, target) == colour:
            yield DirectedPath((source, target), (colour,))
        return
    yield from iter_rainbow_paths(G, source, target, length, inner=inner, colours=colours, fixed_colours={1: colour})


def link_and_absorb(G: ColouredDigraph, tabs: TAbsorber, forest: PathForest, cfg: PipelineConfig,
                    verbose: bool = False) -> Dict:
    """
    Close the forest and the T-absorber into a rainbow Hamilton cycle of G.

    Connectors are chosen by backtracking over leftover-colour assignments and
    lengths (shortest first), keeping the borrowed flexible vertices within the
    template's deletion bound.

    Returns:
        {"cycle": HamiltonCycle, "connectors": [...], "X": [...], "Y": [...],
         "leftover_colours": [...], "components": k}

    Raises:
        InvalidStructureError: the forest does not complement the absorber, or
            the leftover colour count is not k + 1
        SearchExhaustedError: stage "link", index = first connector that could not
            be placed
    """
    all_vertices = set(G.vertices())
    h_vertices, h_colours = tabs.vertices(), tabs.colours()
    if h_vertices & forest.vertices or h_vertices | forest.vertices != all_vertices:
        raise InvalidStructureError("forest must span exactly the vertices outside the absorber")
    if forest.used_colours & h_colours:
        raise InvalidStructureError("forest shares a colour with the absorber")
    components = forest.components() if forest.vertices else []
    k = len(components)
    leftover = sorted(set(G.colours) - h_colours - forest.used_colours)
    if len(leftover) != k + 1:
        raise InvalidStructureError(f"{len(leftover)} leftover colours for {k} components; expected {k + 1}")

    sources = [tabs.terminal] + [path[-1] for path in components]
    targets = [path[0] for path in components] + [tabs.initial]
    budget = tabs.template.deletion_bound
    flex_v, flex_c = tabs.flexible_vertices, tabs.flexible_colours
    chosen: List[DirectedPath] = []
    X: Set[int] = set()
    Y: Set[int] = set()
    free = set(leftover)
    deepest = [0]

    def place(j: int) -> bool:
        if j == len(sources):
            return True
        deepest[0] = max(deepest[0], j)
        for colour in sorted(free):
            for length in range(cfg.connector_min_length, cfg.connector_max_length + 1):
                if len(X) + length - 1 > budget:
                    break
                for path in _connectors(G, sources[j], targets[j], colour, length, flex_v - X, flex_c - Y, h_vertices):
                    inner = set(path.internal())
                    borrowed = set(path.colours) - {colour}
                    chosen.append(path)
                    X.update(inner)
                    Y.update(borrowed)
                    free.discard(colour)
                    if place(j + 1):
                        return True
                    free.add(colour)
                    Y.difference_update(borrowed)
                    X.difference_update(inner)
                    chosen.pop()
        return False

    if not place(0):
        j = deepest[0]
        raise SearchExhaustedError(
            f"no connector from {sources[j]} to {targets[j]} (component {j}) within the flexible budget {budget}",
            stage="link", index=j, resource="connector",
        )
    if verbose:
        print(f"[Link] {len(chosen)} connectors, borrowed X={sorted(X)}, Y={sorted(Y)}")

    path = robust_hamilton_path(tabs, X, Y)
    vertices = list(path.vertices)
    colours = list(path.colours)
    for j, connector in enumerate(chosen):
        vertices.extend(connector.vertices[1:])
        colours.extend(connector.colours)
        if j < k:
            component = components[j]
            for u, v in zip(component, component[1:]):
                vertices.append(v)
                colours.append(forest.colour_of(u, v))
    vertices.pop()
    validate_hamilton_cycle(G, vertices, colours)

    cycle = HamiltonCycle(vertices, colours)
    outside = {(u, v, c) for u, v, c in cycle.arcs() if u not in h_vertices and v not in h_vertices}
    if outside != set(forest.arcs):
        raise InvalidStructureError("cycle restricted to the non-absorber vertices differs from the forest")
    return {
        "cycle": cycle,
        "connectors": [c.to_dict() for c in chosen],
        "X": sorted(X),
        "Y": sorted(Y),
        "leftover_colours": leftover,
        "components": k,
    }
