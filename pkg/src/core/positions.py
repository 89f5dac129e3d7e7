"""
Position sets of a Latin square and the structural classification of partial
transversals through their digraph images (cell (i, j) becomes arc i->j).
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from src.core.errors import InvalidStructureError
from src.core.latin import LatinSquare

Cell = Tuple[int, int]


class DisjointSet:
    """Union-find over hashable items with path halving and union by size."""

    def __init__(self, items: Iterable = ()):
        self.parent: Dict = {}
        self.size: Dict = {}
        for item in items:
            self.add(item)

    def add(self, item) -> None:
        if item not in self.parent:
            self.parent[item] = item
            self.size[item] = 1

    def find(self, item):
        self.add(item)
        while self.parent[item] != item:
            self.parent[item] = self.parent[self.parent[item]]
            item = self.parent[item]
        return item

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def components(self) -> int:
        return sum(1 for item in self.parent if self.parent[item] == item)


class PositionSet:
    """A set of 1-based (row, column) cells of a square of order n."""

    def __init__(self, cells: Iterable[Cell], n: int):
        self.n = int(n)
        normalised = frozenset((int(r), int(c)) for r, c in cells)
        for r, c in normalised:
            if not (1 <= r <= self.n and 1 <= c <= self.n):
                raise InvalidStructureError(f"cell ({r}, {c}) outside a square of order {self.n}")
        self.cells: FrozenSet[Cell] = normalised

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(sorted(self.cells))

    def __eq__(self, other) -> bool:
        return isinstance(other, PositionSet) and self.n == other.n and self.cells == other.cells

    def __hash__(self) -> int:
        return hash((self.n, self.cells))

    def __repr__(self) -> str:
        return f"PositionSet({sorted(self.cells)}, n={self.n})"

    def image_arcs(self) -> List[Tuple[int, int]]:
        return sorted(self.cells)

    def first_clash(self, square: Optional[LatinSquare] = None) -> Optional[Tuple[Cell, Cell, str]]:
        """
        First pair of cells sharing a row, column or (given a square) symbol.

        Returns:
            (cell_a, cell_b, reason) or None when the set is a partial transversal
        """
        seen_rows: Dict[int, Cell] = {}
        seen_cols: Dict[int, Cell] = {}
        seen_symbols: Dict[int, Cell] = {}
        for cell in sorted(self.cells):
            r, c = cell
            if r in seen_rows:
                return seen_rows[r], cell, "row"
            if c in seen_cols:
                return seen_cols[c], cell, "column"
            seen_rows[r] = cell
            seen_cols[c] = cell
            if square is not None:
                s = square.symbol(r, c)
                if s in seen_symbols:
                    return seen_symbols[s], cell, "symbol"
                seen_symbols[s] = cell
        return None

    def is_partial_transversal(self, square: LatinSquare) -> bool:
        return self.first_clash(square) is None

    def to_dict(self) -> Dict:
        return {"cells": [list(cell) for cell in sorted(self.cells)]}

    @classmethod
    def from_dict(cls, payload: Dict, n: int) -> "PositionSet":
        return cls((tuple(cell) for cell in payload["cells"]), n)


class TransversalKind(str, Enum):
    HAMILTON = "hamilton"
    CYCLE_FREE = "cycle-free"
    CONNECTED = "connected"
    GENERAL = "general"


@dataclass(frozen=True)
class TransversalClass:
    """Classification of a partial transversal through its image digraph."""
    kind: TransversalKind
    size: int
    full: bool
    cycle_free: bool
    connected: bool
    hamilton: bool
    components: int
    cycles: Tuple[Tuple[int, ...], ...] = field(default_factory=tuple)
    degenerate: bool = False

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind.value,
            "size": self.size,
            "full": self.full,
            "cycle_free": self.cycle_free,
            "connected": self.connected,
            "hamilton": self.hamilton,
            "components": self.components,
            "cycles": [list(cycle) for cycle in self.cycles],
            "degenerate": self.degenerate,
        }


def image_cycles(arcs: Iterable[Tuple[int, int]]) -> List[Tuple[int, ...]]:
    """
    Directed cycles of a digraph with in- and out-degree at most one.

    Each cycle is listed from its smallest vertex; loops are cycles of length one.
    """
    succ = dict(arcs)
    cycles = []
    done = set()
    for start in sorted(succ):
        if start in done:
            continue
        path = []
        position = {}
        v = start
        while v in succ and v not in done and v not in position:
            position[v] = len(path)
            path.append(v)
            v = succ[v]
        if v in position:
            cycle = path[position[v]:]
            k = cycle.index(min(cycle))
            cycles.append(tuple(cycle[k:] + cycle[:k]))
        done.update(path)
    return sorted(cycles)


def classify_position_set(square: LatinSquare, positions: PositionSet,
                          degenerate_hamilton: bool = False) -> TransversalClass:
    """
    Classify a partial transversal: cycles, weak connectivity and Hamiltonicity.

    Args:
        square: The ambient Latin square
        positions: A partial transversal of the square
        degenerate_hamilton: Count the single loop of an order-1 square as Hamilton

    Returns:
        TransversalClass with the cycle inventory and component count

    Examples:
        >>> Z3 = LatinSquare([[1, 2, 3], [2, 3, 1], [3, 1, 2]])
        >>> classify_position_set(Z3, PositionSet([(1, 2), (2, 3), (3, 1)], 3)).hamilton
        True
    """
    if positions.n != square.n:
        raise InvalidStructureError(f"position set is for order {positions.n}, square has order {square.n}")
    clash = positions.first_clash(square)
    if clash is not None:
        a, b, reason = clash
        raise InvalidStructureError(f"cells {a} and {b} share a {reason}; not a partial transversal")

    arcs = positions.image_arcs()
    cycles = image_cycles(arcs)
    dsu = DisjointSet()
    for u, v in arcs:
        dsu.union(u, v)
    components = dsu.components()
    size = len(arcs)
    full = size == square.n
    connected = components == 1
    cycle_free = not cycles
    degenerate = square.n == 1 and full
    single_cycle = full and len(cycles) == 1 and len(cycles[0]) == square.n
    hamilton = single_cycle and (square.n > 1 or degenerate_hamilton)

    if hamilton:
        kind = TransversalKind.HAMILTON
    elif cycle_free:
        kind = TransversalKind.CYCLE_FREE
    elif connected:
        kind = TransversalKind.CONNECTED
    else:
        kind = TransversalKind.GENERAL
    return TransversalClass(
        kind=kind,
        size=size,
        full=full,
        cycle_free=cycle_free,
        connected=connected,
        hamilton=hamilton,
        components=components,
        cycles=tuple(cycles),
        degenerate=degenerate,
    )
