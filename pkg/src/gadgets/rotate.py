"""
The rotate switching: replace arcs a->b and v->w of one colour by a->w and v->b.

With a in A, b in B, v outside A and w outside B, a rotation removes exactly one
arc from A to B and leaves every other colour class untouched.
"""
from typing import Iterable, Iterator, Optional, Tuple

from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError

Rotation = Tuple[int, int, int, int]


def check_rotation(H: ColouredDigraph, a: int, b: int, v: int, w: int,
                   A: Iterable[int], B: Iterable[int], protected: Optional[int] = None) -> int:
    """Return the shared colour, or raise InvalidStructureError naming the failed precondition."""
    A, B = set(A), set(B)
    if a not in A:
        raise InvalidStructureError(f"a={a} is not in A")
    if b not in B:
        raise InvalidStructureError(f"b={b} is not in B")
    if v in A:
        raise InvalidStructureError(f"v={v} must lie outside A")
    if w in B:
        raise InvalidStructureError(f"w={w} must lie outside B")
    colour = H.colour_of(a, b)
    if colour == 0:
        raise InvalidStructureError(f"arc {a}->{b} is absent")
    if H.colour_of(v, w) != colour:
        raise InvalidStructureError(f"arcs {a}->{b} and {v}->{w} do not share a colour")
    if protected is not None and colour == protected:
        raise InvalidStructureError(f"colour {colour} is protected")
    if H.has_arc(a, w):
        raise InvalidStructureError(f"arc {a}->{w} is already present")
    if H.has_arc(v, b):
        raise InvalidStructureError(f"arc {v}->{b} is already present")
    return colour


def rotate(H: ColouredDigraph, a: int, b: int, v: int, w: int,
           A: Iterable[int], B: Iterable[int], protected: Optional[int] = None) -> ColouredDigraph:
    """
    Rotate a->b, v->w into a->w, v->b in the same colour.

    Rotating back is rotate(H', a, w, v, b, {a}, {w}).
    """
    colour = check_rotation(H, a, b, v, w, A, B, protected)
    return H.with_arc_edits([(a, b), (v, w)], [(a, w, colour), (v, b, colour)])


def find_rotations(H: ColouredDigraph, A: Iterable[int], B: Iterable[int],
                   protected: Optional[int] = None) -> Iterator[Rotation]:
    """Lazily yield valid (a, b, v, w) rotations in lexicographic order."""
    A, B = set(A), set(B)
    succ = H.successor_table
    for a in sorted(A):
        for colour in H.colours:
            if colour == protected:
                continue
            b = int(succ[colour, a])
            if b not in B:
                continue
            for v in range(1, H.n + 1):
                if v in A:
                    continue
                w = int(succ[colour, v])
                if w in B or H.has_arc(a, w) or H.has_arc(v, b):
                    continue
                yield a, b, v, w
