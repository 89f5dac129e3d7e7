"""
Short rainbow directed paths between two vertices.

Used for the four completing paths of an absorber, for the links between
absorbers, and for the connectors that splice a path forest into the absorber.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple

from src.core.digraph import ColouredDigraph


@dataclass(frozen=True)
class DirectedPath:
    """Vertex sequence v0 -> ... -> vL with the colour of each arc."""
    vertices: Tuple[int, ...]
    colours: Tuple[int, ...]

    def __post_init__(self):
        if len(self.colours) != max(0, len(self.vertices) - 1):
            raise ValueError("a path with L + 1 vertices needs exactly L arc colours")

    @property
    def tail(self) -> int:
        return self.vertices[0]

    @property
    def head(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.colours)

    def internal(self) -> Tuple[int, ...]:
        return self.vertices[1:-1]

    def arcs(self) -> List[Tuple[int, int, int]]:
        return [(self.vertices[i], self.vertices[i + 1], self.colours[i]) for i in range(self.length)]

    def is_rainbow(self) -> bool:
        return len(set(self.colours)) == len(self.colours)

    def __add__(self, other: "DirectedPath") -> "DirectedPath":
        if self.head != other.tail:
            raise ValueError(f"cannot join a path ending at {self.head} to one starting at {other.tail}")
        return DirectedPath(self.vertices + other.vertices[1:], self.colours + other.colours)

    def to_dict(self) -> Dict:
        return {"vertices": list(self.vertices), "colours": list(self.colours)}

    @classmethod
    def from_dict(cls, payload: Dict) -> "DirectedPath":
        return cls(tuple(payload["vertices"]), tuple(payload["colours"]))


@dataclass
class LinkPathCount:
    count: int
    length: int
    loop_precondition_ok: bool = True

    def to_dict(self) -> Dict:
        return {"count": self.count, "length": self.length, "loop_precondition_ok": self.loop_precondition_ok}


def iter_rainbow_paths(G: ColouredDigraph, source: int, target: int, length: int,
                       inner: Optional[Set[int]] = None,
                       colours: Optional[Set[int]] = None,
                       forbidden_vertices: Iterable[int] = (),
                       forbidden_colours: Iterable[int] = (),
                       fixed_colours: Optional[Dict[int, int]] = None) -> Iterator[DirectedPath]:
    """
    Lazily yield rainbow source -> target paths with exactly `length` arcs.

    Args:
        G: Coloured digraph
        source, target: Distinct end vertices
        length: Number of arcs (>= 1)
        inner: If given, internal vertices must come from this set
        colours: If given, colours of unconstrained arcs must come from this set
        forbidden_vertices: Vertices no internal vertex may use
        forbidden_colours: Colours no arc may use
        fixed_colours: {arc index (0-based): colour} arcs that must carry that colour

    Paths come out in lexicographic order of their internal vertex sequence.
    """
    if source == target or length < 1:
        return
    fixed = dict(fixed_colours or {})
    banned_v = set(forbidden_vertices) | {source, target}
    banned_c = set(forbidden_colours)
    matrix = G.matrix
    candidates = [
        v for v in range(1, G.n + 1)
        if v not in banned_v and (inner is None or v in inner)
    ]

    def colour_ok(index: int, colour: int, used: Set[int]) -> bool:
        if colour == 0 or colour in used or colour in banned_c:
            return False
        if index in fixed:
            return colour == fixed[index]
        return colours is None or colour in colours

    vertices = [source]
    arc_colours: List[int] = []
    used_colours: Set[int] = set()

    def extend(u: int) -> Iterator[DirectedPath]:
        index = len(arc_colours)
        if index == length - 1:
            colour = int(matrix[u - 1, target - 1])
            if colour_ok(index, colour, used_colours):
                yield DirectedPath(tuple(vertices) + (target,), tuple(arc_colours) + (colour,))
            return
        for v in candidates:
            if v in vertices:
                continue
            colour = int(matrix[u - 1, v - 1])
            if not colour_ok(index, colour, used_colours):
                continue
            vertices.append(v)
            arc_colours.append(colour)
            used_colours.add(colour)
            yield from extend(v)
            used_colours.discard(colour)
            arc_colours.pop()
            vertices.pop()

    yield from extend(source)


def iter_candidate_paths(G: ColouredDigraph, source: int, target: int, length: int,
                         preferred: Iterable[DirectedPath] = (),
                         forbidden_vertices: Iterable[int] = (),
                         forbidden_colours: Iterable[int] = ()) -> Iterator[DirectedPath]:
    """
    Yield the usable paths of `preferred` first, then the lexicographic search.

    A preferred path is usable when it runs source -> target with `length` arcs,
    avoids the forbidden vertices and colours, and agrees with G's colouring.
    Paths already yielded are not repeated.
    """
    banned_v = set(forbidden_vertices)
    banned_c = set(forbidden_colours)
    seen: Set[DirectedPath] = set()
    for path in preferred:
        if (path.tail, path.head) != (source, target) or path.length != length or path in seen:
            continue
        if set(path.internal()) & banned_v or set(path.colours) & banned_c or not path.is_rainbow():
            continue
        if len(set(path.vertices)) != len(path.vertices) or not all(1 <= v <= G.n for v in path.vertices):
            continue
        if any(G.colour_of(u, v) != colour for u, v, colour in path.arcs()):
            continue
        seen.add(path)
        yield path
    for path in iter_rainbow_paths(G, source, target, length,
                                   forbidden_vertices=banned_v, forbidden_colours=banned_c):
        if path not in seen:
            yield path


def enumerate_link_paths(G: ColouredDigraph, source: int, target: int, length: int = 3,
                         inner: Optional[Set[int]] = None, colours: Optional[Set[int]] = None,
                         second_colour: Optional[int] = None) -> List[DirectedPath]:
    """All rainbow source -> target paths of the given length, optionally restricted."""
    fixed = {1: second_colour} if second_colour is not None else None
    return list(iter_rainbow_paths(G, source, target, length, inner=inner, colours=colours, fixed_colours=fixed))


def count_link_paths(G: ColouredDigraph, u: int, v: int, c: Optional[int] = None) -> LinkPathCount:
    """
    Length-three rainbow u -> v paths, or (given c) length-four ones whose second
    arc is coloured c.

    The length-four count assumes at most n/2 loops of colour c; a violation is
    flagged in the result, and the count is still returned.
    """
    if u == v:
        raise ValueError("link path ends must be distinct")
    if c is None:
        return LinkPathCount(sum(1 for _ in iter_rainbow_paths(G, u, v, 3)), 3)
    loops_ok = len(G.loops(c)) <= G.n / 2
    count = sum(1 for _ in iter_rainbow_paths(G, u, v, 4, fixed_colours={1: c}))
    if not loops_ok:
        print(f"[Warning] colour {c} has {len(G.loops(c))} loops (> n/2); length-four count may be small")
    return LinkPathCount(count, 4, loops_ok)


def paths_through_vertex(G: ColouredDigraph, u: int, v: int, w: int, c: Optional[int] = None) -> int:
    """Counted link paths (as in count_link_paths) having w as an internal vertex."""
    length, fixed = (3, None) if c is None else (4, {1: c})
    return sum(1 for path in iter_rainbow_paths(G, u, v, length, fixed_colours=fixed) if w in path.internal())


def paths_using_colour(G: ColouredDigraph, u: int, v: int, d: int, c: Optional[int] = None) -> int:
    """Counted link paths (as in count_link_paths) with an arc coloured d."""
    length, fixed = (3, None) if c is None else (4, {1: c})
    return sum(1 for path in iter_rainbow_paths(G, u, v, length, fixed_colours=fixed) if d in path.colours)
