"""
(v, c)-absorbers: an absorbing gadget, a bridging gadget on its abutment pair,
and four rainbow paths that complete them.

With gadget x1..x6 (abutment y = x4, z = x5) and bridge w1..w6 the paths run
    P1: x2 -> x3, P2: w1 -> w4, P3: w5 -> w2, P4: w3 -> w6
and the absorber carries two x1 -> x6 paths:
    absorbing: x1 v x2 ~P1~ x3 y w1 ~P2~ w4 w5 ~P3~ w2 w3 ~P4~ w6 z x6
    avoiding:  x1 x2 ~P1~ x3 z w3 ~P4~ w6 w5 ~P3~ w2 w1 ~P2~ w4 y x6
The first uses every vertex and colour, the second everything except v and c.
"""
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from src.absorber.paths import DirectedPath, iter_candidate_paths
from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError, SearchExhaustedError
from src.gadgets.absorbing import AbsorbingGadget
from src.gadgets.bridging import BridgingGadget, bridges_gadget

SLOT_ENDS = ("x2->x3", "w1->w4", "w5->w2", "w3->w6")

PathSource = Callable[[int, int], Iterable[DirectedPath]]


def slot_endpoints(gadget: AbsorbingGadget, bridge: BridgingGadget) -> List[Tuple[int, int]]:
    x1, x2, x3, x4, x5, x6 = gadget.x
    w1, w2, w3, w4, w5, w6 = bridge.w
    return [(x2, x3), (w1, w4), (w5, w2), (w3, w6)]


@dataclass(frozen=True)
class Absorber:
    gadget: AbsorbingGadget
    bridge: BridgingGadget
    paths: Tuple[DirectedPath, DirectedPath, DirectedPath, DirectedPath]

    @property
    def v(self) -> int:
        return self.gadget.v

    @property
    def c(self) -> int:
        return self.gadget.c

    @property
    def initial(self) -> int:
        return self.gadget.x[0]

    @property
    def terminal(self) -> int:
        return self.gadget.x[5]

    def vertices(self) -> Set[int]:
        found = self.gadget.vertices() | self.bridge.vertices()
        for path in self.paths:
            found.update(path.vertices)
        return found

    def colours(self) -> Set[int]:
        found = self.gadget.colours() | self.bridge.colours()
        for path in self.paths:
            found.update(path.colours)
        return found

    def arcs(self) -> List[Tuple[int, int, int]]:
        arcs = self.gadget.arcs() + self.bridge.arcs()
        for path in self.paths:
            arcs.extend(path.arcs())
        return arcs

    def absorbing_path(self) -> DirectedPath:
        g, b = self.gadget, self.bridge
        x1, x2, x3, x4, x5, x6 = g.x
        f1, f2, f3 = g.f
        d1, d2, d3, d4 = b.d
        p1, p2, p3, p4 = self.paths
        return (
            DirectedPath((x1, g.v, x2), (f1, f2)) + p1
            + DirectedPath((x3, x4, b.w[0]), (f3, d1)) + p2
            + DirectedPath((b.w[3], b.w[4]), (d4,)) + p3
            + DirectedPath((b.w[1], b.w[2]), (d3,)) + p4
            + DirectedPath((b.w[5], x5, x6), (d2, g.c))
        )

    def avoiding_path(self) -> DirectedPath:
        g, b = self.gadget, self.bridge
        x1, x2, x3, x4, x5, x6 = g.x
        f1, f2, f3 = g.f
        d1, d2, d3, d4 = b.d
        p1, p2, p3, p4 = self.paths
        return (
            DirectedPath((x1, x2), (f3,)) + p1
            + DirectedPath((x3, x5, b.w[2]), (f2, d4)) + p4
            + DirectedPath((b.w[5], b.w[4]), (d1,)) + p3
            + DirectedPath((b.w[1], b.w[0]), (d2,)) + p2
            + DirectedPath((b.w[3], x4, x6), (d3, f1))
        )

    def to_dict(self) -> Dict:
        return {
            "gadget": self.gadget.to_dict(),
            "bridge": self.bridge.to_dict(),
            "paths": [p.to_dict() for p in self.paths],
        }

    @classmethod
    def from_dict(cls, payload: Dict) -> "Absorber":
        return cls(
            AbsorbingGadget.from_dict(payload["gadget"]),
            BridgingGadget.from_dict(payload["bridge"]),
            tuple(DirectedPath.from_dict(p) for p in payload["paths"]),
        )


def check_walk(path: DirectedPath, arc_colour) -> None:
    """
    Raise InvalidStructureError unless `path` is a rainbow directed path whose
    arcs carry the colours `arc_colour(u, v)` reports.
    """
    if len(set(path.vertices)) != len(path.vertices):
        raise InvalidStructureError(f"walk repeats a vertex: {list(path.vertices)}")
    if not path.is_rainbow():
        raise InvalidStructureError(f"walk repeats a colour: {list(path.colours)}")
    for u, v, colour in path.arcs():
        found = arc_colour(u, v)
        if found != colour:
            raise InvalidStructureError(f"arc {u}->{v} should have colour {colour}, found {found}")


def validate_absorber(absorber: Absorber, G: Optional[ColouredDigraph] = None) -> None:
    """
    Check path disjointness and the absorbing / avoiding dichotomy.

    With G given, every arc is also checked against G's colouring.
    """
    gadget, bridge = absorber.gadget, absorber.bridge
    if not bridges_gadget(bridge, gadget):
        raise InvalidStructureError("bridge does not attach to the gadget's abutment pair")
    core_vertices = gadget.vertices() | bridge.vertices()
    core_colours = gadget.colours() | bridge.colours()
    seen_inner: Set[int] = set()
    seen_colours: Set[int] = set()
    for slot, (path, ends) in enumerate(zip(absorber.paths, slot_endpoints(gadget, bridge))):
        if (path.tail, path.head) != ends:
            raise InvalidStructureError(f"path P{slot + 1} should run {SLOT_ENDS[slot]}")
        inner = set(path.internal())
        if inner & (core_vertices | seen_inner):
            raise InvalidStructureError(f"path P{slot + 1} reuses a vertex")
        if set(path.colours) & (core_colours | seen_colours):
            raise InvalidStructureError(f"path P{slot + 1} reuses a colour")
        seen_inner |= inner
        seen_colours |= set(path.colours)

    if G is not None:
        gadget.validate(G)
        bridge.validate(G)
        arc_colour = G.colour_of
    else:
        lookup = {(u, v): colour for u, v, colour in absorber.arcs()}

        def arc_colour(u: int, v: int) -> int:
            return lookup.get((u, v), 0)

    absorbing, avoiding = absorber.absorbing_path(), absorber.avoiding_path()
    for path in (absorbing, avoiding):
        check_walk(path, arc_colour)
        if (path.tail, path.head) != (absorber.initial, absorber.terminal):
            raise InvalidStructureError("absorber paths must run from x1 to x6")
    if set(absorbing.vertices) != absorber.vertices():
        raise InvalidStructureError("absorbing path misses a vertex")
    if set(absorbing.colours) != absorber.colours():
        raise InvalidStructureError("absorbing path misses a colour")
    if set(absorbing.vertices) - set(avoiding.vertices) != {absorber.v} or len(avoiding.vertices) != len(absorbing.vertices) - 1:
        raise InvalidStructureError("avoiding path must use every vertex except v")
    if set(absorbing.colours) - set(avoiding.colours) != {absorber.c} or len(avoiding.colours) != len(absorbing.colours) - 1:
        raise InvalidStructureError("avoiding path must use every colour except c")


def assemble_absorber(G: ColouredDigraph, gadget: AbsorbingGadget, bridge: BridgingGadget,
                      forbidden_vertices: Iterable[int] = (), forbidden_colours: Iterable[int] = (),
                      path_length: int = 3, candidate_cap: Optional[int] = 200,
                      path_source: Optional[PathSource] = None) -> Absorber:
    """
    Complete a gadget and bridge into a (v, c)-absorber.

    The four paths are chosen in slot order by backtracking; each slot scans
    lexicographically ordered candidates, at most `candidate_cap` of them.
    Paths offered by `path_source` for a slot are tried before the search.

    Args:
        G: Coloured digraph containing gadget and bridge
        gadget: (v, c)-absorbing gadget
        bridge: Bridging gadget on the gadget's abutment pair
        forbidden_vertices: Vertices no path may pass through
        forbidden_colours: Colours no path may use
        path_length: Arcs per completing path
        candidate_cap: Candidates tried per slot (None for all)
        path_source: Optional (tail, head) -> paths to try first

    Returns:
        A validated Absorber

    Raises:
        InvalidStructureError: the bridge does not bridge the gadget
        SearchExhaustedError: no completion; `index` is the deepest slot that ran dry
    """
    if not bridges_gadget(bridge, gadget):
        raise InvalidStructureError("bridge does not attach to the gadget's abutment pair")
    used_vertices = set(forbidden_vertices) | gadget.vertices() | bridge.vertices()
    used_colours = set(forbidden_colours) | gadget.colours() | bridge.colours()
    ends = slot_endpoints(gadget, bridge)
    chosen: List[DirectedPath] = []
    deepest = [0]

    def fill(slot: int) -> bool:
        if slot == len(ends):
            return True
        deepest[0] = max(deepest[0], slot)
        source, target = ends[slot]
        tried = 0
        preferred = path_source(source, target) if path_source is not None else ()
        for path in iter_candidate_paths(G, source, target, path_length, preferred,
                                         forbidden_vertices=used_vertices,
                                         forbidden_colours=used_colours):
            if candidate_cap is not None and tried >= candidate_cap:
                break
            tried += 1
            inner, colours = set(path.internal()), set(path.colours)
            chosen.append(path)
            used_vertices.update(inner)
            used_colours.update(colours)
            if fill(slot + 1):
                return True
            used_vertices.difference_update(inner)
            used_colours.difference_update(colours)
            chosen.pop()
        return False

    if not fill(0):
        slot = deepest[0]
        raise SearchExhaustedError(
            f"no completing path for slot P{slot + 1} ({SLOT_ENDS[slot]})",
            stage="assemble", index=slot + 1, resource="path",
        )
    absorber = Absorber(gadget, bridge, tuple(chosen))
    validate_absorber(absorber, G)
    return absorber
