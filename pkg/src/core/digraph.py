"""
Properly arc-coloured looped digraphs on the vertex set 1..n.

A ColouredDigraph keeps two synchronised views of the same arcs:
- a dense n x n colour matrix (0 means "no arc"), authoritative for equality;
- per-colour successor/predecessor tables, so N+_d(u) and N-_d(u) are O(1).

Every colour class is a permutation digraph: each vertex is the tail of exactly one
arc and the head of exactly one arc of that colour. With all n colours present the
digraph is a complete looped digraph and corresponds to a Latin square.
"""
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import InvalidStructureError
from src.core.latin import LatinSquare

Arc = Tuple[int, int]
ColouredArc = Tuple[int, int, int]


class ColouredDigraph:
    """
    Immutable properly arc-coloured digraph whose colour classes are permutations.

    Args:
        n: Number of vertices (vertices are 1..n)
        colours: Colour set D, a subset of 1..n
        matrix: n x n integer array, entry [u-1, v-1] is the colour of arc u->v or 0
        validate: Check the permutation structure of every colour class
    """

    def __init__(self, n: int, colours: Iterable[int], matrix: np.ndarray, validate: bool = True):
        if n < 1:
            raise InvalidStructureError("a coloured digraph needs at least one vertex")
        self.n = int(n)
        self.colours: Tuple[int, ...] = tuple(sorted(int(c) for c in set(colours)))
        matrix = np.array(matrix, dtype=np.int64)
        if matrix.shape != (self.n, self.n):
            raise InvalidStructureError(f"colour matrix must be {n} x {n}, got {matrix.shape}")
        matrix.setflags(write=False)
        self._matrix = matrix
        if validate:
            self._check_structure()
        self._succ, self._pred = self._build_tables()

    def _check_structure(self) -> None:
        n = self.n
        for colour in self.colours:
            if not 1 <= colour <= n:
                raise InvalidStructureError(f"colour {colour} outside 1..{n}")
        allowed = np.zeros(n + 1, dtype=bool)
        allowed[0] = True
        allowed[list(self.colours)] = True
        if (self._matrix < 0).any() or (self._matrix > n).any() or not allowed[self._matrix].all():
            bad = sorted(set(int(x) for x in np.unique(self._matrix)) - set(self.colours) - {0})
            raise InvalidStructureError(f"arc colours {bad} are not in the colour set")
        for colour in self.colours:
            mask = self._matrix == colour
            out_deg = mask.sum(axis=1)
            in_deg = mask.sum(axis=0)
            if (out_deg != 1).any():
                u = int(np.flatnonzero(out_deg != 1)[0]) + 1
                raise InvalidStructureError(f"colour {colour}: vertex {u} is the tail of {int(out_deg[u - 1])} arcs")
            if (in_deg != 1).any():
                v = int(np.flatnonzero(in_deg != 1)[0]) + 1
                raise InvalidStructureError(f"colour {colour}: vertex {v} is the head of {int(in_deg[v - 1])} arcs")

    def _build_tables(self) -> Tuple[np.ndarray, np.ndarray]:
        n = self.n
        succ = np.zeros((n + 1, n + 1), dtype=np.int64)
        pred = np.zeros((n + 1, n + 1), dtype=np.int64)
        tails, heads = np.nonzero(self._matrix)
        cols = self._matrix[tails, heads]
        succ[cols, tails + 1] = heads + 1
        pred[cols, heads + 1] = tails + 1
        succ.setflags(write=False)
        pred.setflags(write=False)
        return succ, pred

    # ------------------------------------------------------------------ queries

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def successor_table(self) -> np.ndarray:
        """succ[d, u] = head of the d-arc leaving u (0 if colour d is absent)."""
        return self._succ

    @property
    def predecessor_table(self) -> np.ndarray:
        return self._pred

    def colour_of(self, u: int, v: int) -> int:
        """Colour of arc u->v, or 0 when there is no such arc."""
        return int(self._matrix[u - 1, v - 1])

    def has_arc(self, u: int, v: int) -> bool:
        return self._matrix[u - 1, v - 1] != 0

    def out_neighbour(self, u: int, colour: int) -> int:
        """N+_d(u): head of the arc of the given colour leaving u."""
        return int(self._succ[colour, u])

    def in_neighbour(self, v: int, colour: int) -> int:
        """N-_d(v): tail of the arc of the given colour entering v."""
        return int(self._pred[colour, v])

    def arcs(self) -> Iterator[ColouredArc]:
        """Iterate (tail, head, colour) in lexicographic (tail, head) order."""
        tails, heads = np.nonzero(self._matrix)
        for u, v in zip(tails.tolist(), heads.tolist()):
            yield u + 1, v + 1, int(self._matrix[u, v])

    def arc_count(self) -> int:
        return int(np.count_nonzero(self._matrix))

    def colour_class(self, colour: int) -> Dict[int, int]:
        """The colour class F_d as a tail -> head map."""
        return {u: int(self._succ[colour, u]) for u in range(1, self.n + 1)}

    def loops(self, colour: int) -> List[int]:
        """Vertices carrying a loop of the given colour."""
        diag = np.diag(self._matrix)
        return [int(u) + 1 for u in np.flatnonzero(diag == colour)]

    def loop_counts(self) -> Dict[int, int]:
        diag = np.diag(self._matrix)
        return {c: int((diag == c).sum()) for c in self.colours}

    def vertices(self) -> range:
        return range(1, self.n + 1)

    # --------------------------------------------------------------- transforms

    def with_arc_edits(self, removed: Iterable[Arc], added: Iterable[ColouredArc],
                       colours: Optional[Iterable[int]] = None) -> "ColouredDigraph":
        """
        Return a new digraph with the given arcs removed and coloured arcs added.

        Removals are applied before additions; the result is validated, so an edit
        that breaks a colour class raises InvalidStructureError.
        """
        matrix = self._matrix.copy()
        for u, v in removed:
            if matrix[u - 1, v - 1] == 0:
                raise InvalidStructureError(f"cannot remove missing arc {u}->{v}")
            matrix[u - 1, v - 1] = 0
        for u, v, colour in added:
            if matrix[u - 1, v - 1] != 0:
                raise InvalidStructureError(f"cannot add arc {u}->{v}: already present with colour {int(matrix[u - 1, v - 1])}")
            matrix[u - 1, v - 1] = colour
        return ColouredDigraph(self.n, self.colours if colours is None else colours, matrix)

    def restrict(self, colours: Iterable[int]) -> "ColouredDigraph":
        return restrict_to_colours(self, colours)

    @classmethod
    def from_colour_classes(cls, n: int, classes: Dict[int, Sequence[int]]) -> "ColouredDigraph":
        """
        Build a digraph from permutations: classes[d][u - 1] is the head of the d-arc from u.
        """
        matrix = np.zeros((n, n), dtype=np.int64)
        for colour, heads in classes.items():
            for u, v in enumerate(heads, start=1):
                if matrix[u - 1, v - 1] != 0:
                    raise InvalidStructureError(f"arc {u}->{v} carries colours {int(matrix[u - 1, v - 1])} and {colour}")
                matrix[u - 1, v - 1] = colour
        return cls(n, classes.keys(), matrix)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColouredDigraph)
            and self.n == other.n
            and self.colours == other.colours
            and np.array_equal(self._matrix, other._matrix)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.colours, self._matrix.tobytes()))

    def __repr__(self) -> str:
        return f"ColouredDigraph(n={self.n}, colours={len(self.colours)}, arcs={self.arc_count()})"


def latin_to_digraph(square: LatinSquare) -> ColouredDigraph:
    """
    Colour arc i->j with the symbol in cell (i, j).

    Examples:
        >>> G = latin_to_digraph(LatinSquare([[1, 2], [2, 1]]))
        >>> G.colour_of(1, 2), G.loops(1)
        (2, [1, 2])
    """
    return ColouredDigraph(square.n, range(1, square.n + 1), square.grid)


def digraph_to_latin(digraph: ColouredDigraph) -> LatinSquare:
    """Inverse of latin_to_digraph; needs all n colours."""
    if len(digraph.colours) != digraph.n:
        raise InvalidStructureError(
            f"only {len(digraph.colours)} of {digraph.n} colours present; not a complete colouring"
        )
    return LatinSquare(digraph.matrix)


def restrict_to_colours(digraph: ColouredDigraph, colours: Iterable[int]) -> ColouredDigraph:
    """
    G|_D: delete every arc whose colour is not in D.

    Raises:
        ValueError: if D is not a subset of the colours of G
    """
    keep = set(int(c) for c in colours)
    missing = keep - set(digraph.colours)
    if missing:
        raise ValueError(f"colours {sorted(missing)} are not colours of the digraph")
    mask = np.isin(digraph.matrix, sorted(keep)) if keep else np.zeros_like(digraph.matrix, dtype=bool)
    matrix = np.where(mask, digraph.matrix, 0)
    return ColouredDigraph(digraph.n, keep, matrix, validate=False)


def colour_arc_count(digraph: ColouredDigraph, tails: Iterable[int], heads: Iterable[int],
                     colours: Iterable[int]) -> int:
    """
    e_{G,D}(U1, U2): arcs with tail in U1, head in U2 and colour in D.

    Raises:
        InvalidStructureError: D is not a subset of the digraph's colour set
        ValueError: a vertex outside 1..n
    """
    colour_set = sorted(set(int(c) for c in colours))
    foreign = sorted(set(colour_set) - set(digraph.colours))
    if foreign:
        raise InvalidStructureError(f"colours {foreign} are not in the colour set {list(digraph.colours)}")
    tail_idx = np.array(sorted(set(int(u) for u in tails)), dtype=np.int64) - 1
    head_idx = np.array(sorted(set(int(v) for v in heads)), dtype=np.int64) - 1
    if not colour_set or tail_idx.size == 0 or head_idx.size == 0:
        return 0
    for index in np.concatenate([tail_idx, head_idx]):
        if not 0 <= index < digraph.n:
            raise ValueError(f"vertex {int(index) + 1} outside 1..{digraph.n}")
    block = digraph.matrix[np.ix_(tail_idx, head_idx)]
    return int(np.isin(block, colour_set).sum())


if __name__ == "__main__":
    print("=== Testing ColouredDigraph ===\n")
    square = LatinSquare([[1, 2, 3], [2, 3, 1], [3, 1, 2]])
    G = latin_to_digraph(square)
    print(G)
    print(f"Colour class of 2: {G.colour_class(2)}")
    print(f"Loop counts: {G.loop_counts()}")
    print(f"e(all, all, {{1}}) = {colour_arc_count(G, G.vertices(), G.vertices(), [1])}")
    assert digraph_to_latin(G) == square
