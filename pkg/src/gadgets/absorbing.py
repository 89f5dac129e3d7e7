"""
(v, c)-absorbing gadgets.

A gadget has vertices v, x1..x6 (all distinct) and arcs
    x1->v (f1), v->x2 (f2), x1->x2 (f3), x3->x4 (f3), x3->x5 (f2), x4->x6 (f1), x5->x6 (c)
with f1, f2, f3, c distinct. (x4, x5) is the abutment pair that a bridging gadget
attaches to.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

import numpy as np

from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError


@dataclass(frozen=True)
class AbsorbingGadget:
    v: int
    c: int
    x: Tuple[int, int, int, int, int, int]
    f: Tuple[int, int, int]

    @property
    def abutment(self) -> Tuple[int, int]:
        return self.x[3], self.x[4]

    def vertices(self) -> Set[int]:
        return {self.v, *self.x}

    def colours(self) -> Set[int]:
        return {self.c, *self.f}

    def arcs(self) -> List[Tuple[int, int, int]]:
        x1, x2, x3, x4, x5, x6 = self.x
        f1, f2, f3 = self.f
        return [
            (x1, self.v, f1), (self.v, x2, f2), (x1, x2, f3),
            (x3, x4, f3), (x3, x5, f2), (x4, x6, f1), (x5, x6, self.c),
        ]

    def validate(self, G: ColouredDigraph) -> None:
        """Raise InvalidStructureError naming the first violated gadget condition."""
        if len(self.vertices()) != 7:
            raise InvalidStructureError(f"absorbing gadget vertices {[self.v, *self.x]} are not distinct")
        if len(self.colours()) != 4:
            raise InvalidStructureError(f"absorbing gadget colours f={self.f}, c={self.c} are not distinct")
        for u, w, colour in self.arcs():
            if G.colour_of(u, w) != colour:
                raise InvalidStructureError(f"arc {u}->{w} should have colour {colour}, found {G.colour_of(u, w)}")

    def to_dict(self) -> Dict:
        return {"v": self.v, "c": self.c, "x": list(self.x), "f": list(self.f)}

    @classmethod
    def from_dict(cls, payload: Dict) -> "AbsorbingGadget":
        return cls(int(payload["v"]), int(payload["c"]), tuple(payload["x"]), tuple(payload["f"]))


def _all_distinct(rows: np.ndarray) -> np.ndarray:
    """Column-wise check that the entries of each column of `rows` are distinct."""
    ordered = np.sort(rows, axis=0)
    return (np.diff(ordered, axis=0) != 0).all(axis=0)


def iter_absorbing_gadgets(G: ColouredDigraph, v: int, c: int,
                           avoid_vertices: Iterable[int] = (),
                           avoid_colours: Iterable[int] = ()) -> Iterator[AbsorbingGadget]:
    """
    Lazily yield (v, c)-absorbing gadgets in (f1, f2, x3) order.

    Args:
        G: Coloured digraph
        v: Absorbed vertex
        c: Absorbed colour
        avoid_vertices: Vertices no x_i may use
        avoid_colours: Colours no f_i may use
    """
    n = G.n
    if not 1 <= v <= n:
        raise ValueError(f"vertex {v} outside 1..{n}")
    if not 1 <= c <= n:
        raise ValueError(f"colour {c} outside 1..{n}")
    if c not in G.colours:
        return
    succ = G.successor_table
    pred = G.predecessor_table
    matrix = G.matrix
    bad_vertex = np.zeros(n + 1, dtype=bool)
    bad_vertex[list(set(avoid_vertices))] = True
    bad_colours = set(avoid_colours) | {c}
    colours = [d for d in G.colours if d not in bad_colours]
    x3 = np.arange(1, n + 1)

    for f1 in colours:
        x1 = int(pred[f1, v])
        if x1 == v or bad_vertex[x1]:
            continue
        for f2 in colours:
            if f2 == f1:
                continue
            x2 = int(succ[f2, v])
            if x2 in (v, x1) or bad_vertex[x2]:
                continue
            f3 = int(matrix[x1 - 1, x2 - 1])
            if f3 == 0 or f3 in (f1, f2) or f3 in bad_colours:
                continue
            x4 = succ[f3, x3]
            x5 = succ[f2, x3]
            x6 = succ[f1, x4]
            closing = matrix[x5 - 1, x6 - 1] == c
            if not closing.any():
                continue
            stack = np.vstack([np.full(n, v), np.full(n, x1), np.full(n, x2), x3, x4, x5, x6])
            ok = closing & _all_distinct(stack)
            ok &= ~(bad_vertex[x3] | bad_vertex[x4] | bad_vertex[x5] | bad_vertex[x6])
            for i in np.flatnonzero(ok):
                yield AbsorbingGadget(
                    v, c,
                    (x1, x2, int(x3[i]), int(x4[i]), int(x5[i]), int(x6[i])),
                    (f1, f2, f3),
                )


def find_absorbing_gadgets(G: ColouredDigraph, v: int, c: int, cap: Optional[int] = 100) -> List[AbsorbingGadget]:
    """
    Up to `cap` (v, c)-absorbing gadgets; exhaustive when cap is None.

    Examples:
        >>> from src.core.digraph import latin_to_digraph
        >>> from src.sampler.latin_sampler import cyclic_square
        >>> len(find_absorbing_gadgets(latin_to_digraph(cyclic_square(7)), 1, 1, cap=5)) <= 5
        True
    """
    found = []
    for gadget in iter_absorbing_gadgets(G, v, c):
        if cap is not None and len(found) >= cap:
            break
        found.append(gadget)
    return found


if __name__ == "__main__":
    from src.core.digraph import latin_to_digraph
    from src.sampler.latin_sampler import sample_latin_square
    from src.utils.config import SamplerConfig

    print("=== Testing absorbing gadgets ===\n")
    G = latin_to_digraph(sample_latin_square(SamplerConfig(seed=0, n=9)))
    gadgets = find_absorbing_gadgets(G, 1, 1, cap=None)
    print(f"(1, 1)-absorbing gadgets: {len(gadgets)}")
    for gadget in gadgets[:3]:
        gadget.validate(G)
        print(gadget.to_dict())
