"""
(y, z)-bridging gadgets.

A gadget has distinct vertices y, z, w1..w6 and arcs
    y->w1 (d1), w2->w1 (d2), w2->w3 (d3), z->w3 (d4),
    w4->y (d3), w4->w5 (d4), w6->w5 (d1), w6->z (d2)
with d1..d4 distinct.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

import numpy as np

from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError
from src.gadgets.absorbing import _all_distinct


@dataclass(frozen=True)
class BridgingGadget:
    y: int
    z: int
    w: Tuple[int, int, int, int, int, int]
    d: Tuple[int, int, int, int]

    def vertices(self) -> Set[int]:
        return {self.y, self.z, *self.w}

    def colours(self) -> Set[int]:
        return set(self.d)

    def arcs(self) -> List[Tuple[int, int, int]]:
        w1, w2, w3, w4, w5, w6 = self.w
        d1, d2, d3, d4 = self.d
        return [
            (self.y, w1, d1), (w2, w1, d2), (w2, w3, d3), (self.z, w3, d4),
            (w4, self.y, d3), (w4, w5, d4), (w6, w5, d1), (w6, self.z, d2),
        ]

    def validate(self, G: ColouredDigraph) -> None:
        if len(self.vertices()) != 8:
            raise InvalidStructureError(f"bridging gadget vertices {[self.y, self.z, *self.w]} are not distinct")
        if len(self.colours()) != 4:
            raise InvalidStructureError(f"bridging gadget colours {self.d} are not distinct")
        for u, x, colour in self.arcs():
            if G.colour_of(u, x) != colour:
                raise InvalidStructureError(f"arc {u}->{x} should have colour {colour}, found {G.colour_of(u, x)}")

    def to_dict(self) -> Dict:
        return {"y": self.y, "z": self.z, "w": list(self.w), "d": list(self.d)}

    @classmethod
    def from_dict(cls, payload: Dict) -> "BridgingGadget":
        return cls(int(payload["y"]), int(payload["z"]), tuple(payload["w"]), tuple(payload["d"]))


def iter_bridging_gadgets(G: ColouredDigraph, y: int, z: int,
                          avoid_vertices: Iterable[int] = (),
                          avoid_colours: Iterable[int] = (),
                          colour_classes: Optional[Tuple[Iterable[int], ...]] = None) -> Iterator[BridgingGadget]:
    """
    Lazily yield (y, z)-bridging gadgets in (d1, d2, d3) order.

    Args:
        G: Coloured digraph
        y, z: Distinct root vertices
        avoid_vertices: Vertices no w_i may use
        avoid_colours: Colours no d_i may use
        colour_classes: Optional allowed sets (D1, D2, D3, D4) for d1..d4
    """
    n = G.n
    if y == z:
        raise ValueError("bridging gadget roots must be distinct")
    for root in (y, z):
        if not 1 <= root <= n:
            raise ValueError(f"vertex {root} outside 1..{n}")
    succ = G.successor_table
    pred = G.predecessor_table
    matrix = G.matrix
    bad_vertex = np.zeros(n + 1, dtype=bool)
    bad_vertex[list(set(avoid_vertices))] = True
    banned = set(avoid_colours)
    usable = [d for d in G.colours if d not in banned]
    if colour_classes is None:
        allowed = [usable] * 4
    else:
        allowed = [[d for d in usable if d in set(part)] for part in colour_classes]
    d4_ok = np.zeros(n + 1, dtype=bool)
    d4_ok[allowed[3]] = True
    d3_all = np.array(allowed[2], dtype=np.int64)
    if d3_all.size == 0:
        return

    for d1 in allowed[0]:
        w1 = int(succ[d1, y])
        if w1 in (y, z) or bad_vertex[w1]:
            continue
        for d2 in allowed[1]:
            if d2 == d1:
                continue
            w6 = int(pred[d2, z])
            if w6 in (y, z, w1) or bad_vertex[w6]:
                continue
            w2 = int(pred[d2, w1])
            w5 = int(succ[d1, w6])
            if len({y, z, w1, w2, w5, w6}) != 6 or bad_vertex[w2] or bad_vertex[w5]:
                continue
            d3 = d3_all[(d3_all != d1) & (d3_all != d2)]
            if d3.size == 0:
                continue
            w4 = pred[d3, y]
            w3 = succ[d3, w2]
            d4 = matrix[z - 1, w3 - 1]
            ok = (d4 != 0) & (d4 == matrix[w4 - 1, w5 - 1]) & d4_ok[d4]
            ok &= (d4 != d1) & (d4 != d2) & (d4 != d3)
            if not ok.any():
                continue
            m = d3.size
            stack = np.vstack([np.full(m, y), np.full(m, z), np.full(m, w1), np.full(m, w2),
                               w3, w4, np.full(m, w5), np.full(m, w6)])
            ok &= _all_distinct(stack) & ~bad_vertex[w3] & ~bad_vertex[w4]
            for i in np.flatnonzero(ok):
                yield BridgingGadget(
                    y, z,
                    (w1, w2, int(w3[i]), int(w4[i]), w5, w6),
                    (d1, d2, int(d3[i]), int(d4[i])),
                )


def find_bridging_gadgets(G: ColouredDigraph, y: int, z: int, cap: Optional[int] = 100) -> List[BridgingGadget]:
    """Up to `cap` (y, z)-bridging gadgets; exhaustive when cap is None."""
    found = []
    for gadget in iter_bridging_gadgets(G, y, z):
        if cap is not None and len(found) >= cap:
            break
        found.append(gadget)
    return found


def bridges_gadget(bridge: BridgingGadget, gadget) -> bool:
    """True if the bridging gadget attaches to the absorbing gadget's abutment pair."""
    return (
        (bridge.y, bridge.z) == gadget.abutment
        and bridge.vertices() & gadget.vertices() == {bridge.y, bridge.z}
        and not bridge.colours() & gadget.colours()
    )
