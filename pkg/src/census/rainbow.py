"""
Longest rainbow directed paths and cycles in a coloured digraph.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from src.core.digraph import ColouredDigraph
from src.core.errors import CapacityError

RAINBOW_LIMIT = 10


@dataclass
class RainbowWalk:
    """A rainbow directed path or cycle as a list of (tail, head, colour) arcs."""
    length: int
    kind: str  # "path", "cycle" or "none"
    arcs: List[Tuple[int, int, int]] = field(default_factory=list)
    degenerate: bool = False

    def to_dict(self) -> Dict:
        return {
            "length": self.length,
            "kind": self.kind,
            "arcs": [list(arc) for arc in self.arcs],
            "degenerate": self.degenerate,
        }


def max_rainbow_path_or_cycle(G: ColouredDigraph, allow_loops: bool = True,
                              limit: int = RAINBOW_LIMIT) -> RainbowWalk:
    """
    Longest rainbow directed path or cycle, measured in arcs.

    A loop is a rainbow cycle of length one when allow_loops is set. Search stops as
    soon as a rainbow Hamilton cycle (length n) is found. Ties keep the first walk
    found in (start vertex, successor) order.

    Raises:
        CapacityError: n above the engine limit
    """
    n = G.n
    if n > limit:
        raise CapacityError(f"rainbow search: n={n} exceeds the engine limit {limit}", limit=limit)
    matrix = G.matrix
    best = [RainbowWalk(0, "none")]
    if allow_loops:
        for u in range(1, n + 1):
            if matrix[u - 1, u - 1]:
                best[0] = RainbowWalk(1, "cycle", [(u, u, int(matrix[u - 1, u - 1]))], degenerate=(n == 1))
                break

    path: List[Tuple[int, int, int]] = []

    def extend(start: int, u: int, visited: int, colours: int) -> bool:
        length = len(path)
        if length > best[0].length:
            best[0] = RainbowWalk(length, "path", list(path))
        back = int(matrix[u - 1, start - 1])
        if length >= 1 and back and not colours & (1 << back) and u != start:
            if length + 1 > best[0].length:
                best[0] = RainbowWalk(length + 1, "cycle", path + [(u, start, back)])
                if length + 1 == n:
                    return True
        for v in range(1, n + 1):
            if visited & (1 << v):
                continue
            colour = int(matrix[u - 1, v - 1])
            if not colour or colours & (1 << colour):
                continue
            path.append((u, v, colour))
            done = extend(start, v, visited | (1 << v), colours | (1 << colour))
            path.pop()
            if done:
                return True
        return False

    for start in range(1, n + 1):
        if extend(start, start, 1 << start, 0):
            break
    return best[0]


def connected_partial_sizes(G: ColouredDigraph, limit: int = RAINBOW_LIMIT) -> Dict[str, int]:
    """
    Largest weakly connected partial transversal, with and without loops.

    A connected image of a partial transversal is a rainbow path or a rainbow cycle
    (a loop is its own component), so both values come from the rainbow search.
    """
    with_loops = max_rainbow_path_or_cycle(G, allow_loops=True, limit=limit)
    loop_free = max_rainbow_path_or_cycle(G, allow_loops=False, limit=limit)
    return {"loop_permitting": with_loops.length, "loop_free": loop_free.length}


if __name__ == "__main__":
    from src.core.digraph import latin_to_digraph
    from src.sampler.latin_sampler import cyclic_square

    print("=== Testing rainbow search ===\n")
    for n in range(1, 7):
        walk = max_rainbow_path_or_cycle(latin_to_digraph(cyclic_square(n)))
        print(f"Z_{n}: {walk.kind} of length {walk.length}")
