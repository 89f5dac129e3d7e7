"""
T-absorbers: one (v, c)-absorber per template edge, strung into a single path
by link paths, rooted on vertices U and colours D.

The root injections send the flexible side A' (sorted) onto V' (sorted) and
A minus A' onto U minus V'; colours likewise. Edges are absorbed in lexicographic
order and link j joins the terminal of absorber j to the initial of absorber j+1.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.absorber.assembly import Absorber, PathSource, assemble_absorber, check_walk, validate_absorber
from src.absorber.paths import DirectedPath, iter_candidate_paths
from src.absorber.template import Edge, RMBGTemplate
from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError, SearchExhaustedError
from src.gadgets.absorbing import AbsorbingGadget, iter_absorbing_gadgets
from src.gadgets.bridging import BridgingGadget, iter_bridging_gadgets
from src.gadgets.spread import is_well_spread

GadgetSource = Callable[[int, int], Iterable[AbsorbingGadget]]
BridgeSource = Callable[[int, int], Iterable[BridgingGadget]]

_RESOURCES = ("gadget", "bridge", "path", "link")


def root_maps(template: RMBGTemplate, U: Iterable[int], D: Iterable[int],
              flexible_vertices: Iterable[int], flexible_colours: Iterable[int]) -> Tuple[Dict[int, int], Dict[int, int]]:
    """
    The injections f_V : A -> U and f_C : B -> D.

    Raises:
        ValueError: sizes do not match the template or V' ⊄ U, C' ⊄ D
    """
    U, D = sorted(set(U)), sorted(set(D))
    V_flex, C_flex = sorted(set(flexible_vertices)), sorted(set(flexible_colours))
    if len(U) != template.size or len(D) != template.size:
        raise ValueError(f"need {template.size} root vertices and colours, got {len(U)} and {len(D)}")
    if len(V_flex) != len(template.flexible_a) or len(C_flex) != len(template.flexible_b):
        raise ValueError("flexible root sets must match the template's flexible sets in size")
    if not set(V_flex) <= set(U) or not set(C_flex) <= set(D):
        raise ValueError("flexible roots must be a subset of the roots")

    def injection(side: Sequence[int], flexible_side: Sequence[int], roots: List[int], flexible_roots: List[int]):
        rest_side = [a for a in side if a not in set(flexible_side)]
        rest_roots = [u for u in roots if u not in set(flexible_roots)]
        mapping = dict(zip(sorted(flexible_side), flexible_roots))
        mapping.update(zip(rest_side, rest_roots))
        return mapping

    return (
        injection(list(template.left), template.flexible_a, U, V_flex),
        injection(list(template.right), template.flexible_b, D, C_flex),
    )


def inventory_sizes(edge_count: int, root_vertices: int, root_colours: int,
                    path_length: int = 3, link_length: int = 3) -> Tuple[int, int]:
    """
    (|V(H)|, |φ(H)|) of a T-absorber.

    Examples:
        >>> inventory_sizes(1, 1, 1)
        (21, 20)
        >>> inventory_sizes(4, 2, 2, 1, 1)
        (50, 49)
    """
    vertices = (12 + 4 * (path_length - 1)) * edge_count + (link_length - 1) * (edge_count - 1) + root_vertices
    colours = (7 + 4 * path_length) * edge_count + link_length * (edge_count - 1) + root_colours
    return vertices, colours


@dataclass
class TAbsorber:
    template: RMBGTemplate
    root_v: Dict[int, int]
    root_c: Dict[int, int]
    edges: List[Edge]
    absorbers: List[Absorber]
    links: List[DirectedPath]
    warnings: List[str] = field(default_factory=list)

    @property
    def initial(self) -> int:
        return self.absorbers[0].initial

    @property
    def terminal(self) -> int:
        return self.absorbers[-1].terminal

    @property
    def flexible_vertices(self) -> Set[int]:
        return {self.root_v[a] for a in self.template.flexible_a}

    @property
    def flexible_colours(self) -> Set[int]:
        return {self.root_c[b] for b in self.template.flexible_b}

    def vertices(self) -> Set[int]:
        found = set(self.root_v.values())
        for absorber in self.absorbers:
            found |= absorber.vertices()
        for link in self.links:
            found.update(link.vertices)
        return found

    def colours(self) -> Set[int]:
        found = set(self.root_c.values())
        for absorber in self.absorbers:
            found |= absorber.colours()
        for link in self.links:
            found.update(link.colours)
        return found

    def arc_colours(self) -> Dict[Tuple[int, int], int]:
        """Every arc of H with its colour; raises if two parts disagree on an arc."""
        arcs: Dict[Tuple[int, int], int] = {}
        parts = [a.arcs() for a in self.absorbers] + [link.arcs() for link in self.links]
        for part in parts:
            for u, v, colour in part:
                if arcs.setdefault((u, v), colour) != colour:
                    raise InvalidStructureError(f"arc {u}->{v} carries two colours")
        return arcs

    def to_dict(self) -> Dict:
        return {
            "template": self.template.to_dict(),
            "root_v": {str(a): v for a, v in self.root_v.items()},
            "root_c": {str(b): c for b, c in self.root_c.items()},
            "edges": [list(e) for e in self.edges],
            "absorbers": [a.to_dict() for a in self.absorbers],
            "links": [link.to_dict() for link in self.links],
            "initial": self.initial,
            "terminal": self.terminal,
            "vertex_count": len(self.vertices()),
            "colour_count": len(self.colours()),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, payload: Dict) -> "TAbsorber":
        return cls(
            template=RMBGTemplate.from_dict(payload["template"]),
            root_v={int(a): v for a, v in payload["root_v"].items()},
            root_c={int(b): c for b, c in payload["root_c"].items()},
            edges=[tuple(e) for e in payload["edges"]],
            absorbers=[Absorber.from_dict(a) for a in payload["absorbers"]],
            links=[DirectedPath.from_dict(p) for p in payload["links"]],
            warnings=list(payload.get("warnings", [])),
        )


def validate_t_absorber(tabs: TAbsorber, G: Optional[ColouredDigraph] = None) -> None:
    """
    Re-check every T-absorber condition on the stored inventory.

    - each absorber is valid and rooted on (f_V(a), f_C(b)) for its edge ab;
    - two absorbers share vertices only in a common root vertex, and colours only
      in a common root colour, and nothing else;
    - links are rainbow, pairwise disjoint, join consecutive absorbers, and meet
      the absorbers only at their ends;
    - roots outside an edge are untouched by its absorber;
    - the arc set is exactly the inventory union with one colour per arc.
    """
    if tabs.edges != tabs.template.edge_list():
        raise InvalidStructureError("edges must follow the template's lexicographic enumeration")
    if len(tabs.absorbers) != len(tabs.edges) or len(tabs.links) != len(tabs.edges) - 1:
        raise InvalidStructureError("one absorber per edge and one link between consecutive absorbers")
    all_roots_v = set(tabs.root_v.values())
    all_roots_c = set(tabs.root_c.values())
    for (a, b), absorber in zip(tabs.edges, tabs.absorbers):
        validate_absorber(absorber, G)
        if (absorber.v, absorber.c) != (tabs.root_v[a], tabs.root_c[b]):
            raise InvalidStructureError(f"absorber for edge {(a, b)} is not rooted on f_V(a), f_C(b)")
        if absorber.vertices() & (all_roots_v - {absorber.v}):
            raise InvalidStructureError(f"absorber for edge {(a, b)} touches another root vertex")
        if absorber.colours() & (all_roots_c - {absorber.c}):
            raise InvalidStructureError(f"absorber for edge {(a, b)} uses another root colour")

    for i in range(len(tabs.absorbers)):
        for j in range(i + 1, len(tabs.absorbers)):
            first, second = tabs.absorbers[i], tabs.absorbers[j]
            allowed_v = {first.v} if first.v == second.v else set()
            allowed_c = {first.c} if first.c == second.c else set()
            if first.vertices() & second.vertices() != allowed_v:
                raise InvalidStructureError(f"absorbers {i} and {j} share vertices beyond a common root")
            if first.colours() & second.colours() != allowed_c:
                raise InvalidStructureError(f"absorbers {i} and {j} share colours beyond a common root")

    absorber_vertices: Set[int] = set().union(*(a.vertices() for a in tabs.absorbers))
    absorber_colours: Set[int] = set().union(*(a.colours() for a in tabs.absorbers))
    link_vertices: Set[int] = set()
    link_colours: Set[int] = set()
    for j, link in enumerate(tabs.links):
        if (link.tail, link.head) != (tabs.absorbers[j].terminal, tabs.absorbers[j + 1].initial):
            raise InvalidStructureError(f"link {j} does not join absorbers {j} and {j + 1}")
        inner = set(link.internal())
        if inner & (absorber_vertices | link_vertices) or all_roots_v & inner:
            raise InvalidStructureError(f"link {j} reuses a vertex")
        if set(link.colours) & (absorber_colours | link_colours | all_roots_c) or not link.is_rainbow():
            raise InvalidStructureError(f"link {j} reuses a colour")
        link_vertices |= inner
        link_colours |= set(link.colours)

    arcs = tabs.arc_colours()
    if G is not None:
        for (u, v), colour in arcs.items():
            if G.colour_of(u, v) != colour:
                raise InvalidStructureError(f"arc {u}->{v} is not coloured {colour} in G")
        for link in tabs.links:
            check_walk(link, G.colour_of)


def _link(G: ColouredDigraph, source: int, target: int, length: int,
          used_vertices: Set[int], used_colours: Set[int],
          path_source: Optional[PathSource] = None) -> Optional[DirectedPath]:
    preferred = path_source(source, target) if path_source is not None else ()
    return next(iter_candidate_paths(G, source, target, length, preferred,
                                     forbidden_vertices=used_vertices,
                                     forbidden_colours=used_colours), None)


def _capped(items: Iterable, cap: Optional[int]) -> Iterable:
    for i, item in enumerate(items):
        if cap is not None and i >= cap:
            return
        yield item


def embed_t_absorber(G: ColouredDigraph, template: RMBGTemplate, U: Iterable[int], D: Iterable[int],
                     flexible_vertices: Iterable[int], flexible_colours: Iterable[int],
                     path_length: int = 3, link_length: int = 3,
                     gadget_cap: Optional[int] = 200, bridge_cap: Optional[int] = 200,
                     gadget_source: Optional[GadgetSource] = None,
                     bridge_source: Optional[BridgeSource] = None,
                     path_source: Optional[PathSource] = None,
                     verbose: bool = False) -> TAbsorber:
    """
    Greedily embed a T-absorber edge by edge.

    For each edge ab (lexicographic order) the first gadget rooted on
    (f_V(a), f_C(b)) that is disjoint from everything used so far is tried with
    each disjoint bridge on its abutment pair, then completed into an absorber and
    linked to the previous one. Candidates are scanned lexicographically, so a
    failure is reproducible.

    Args:
        G: Coloured digraph
        template: Robustly matchable template
        U, D: Root vertices and colours (|U| = |D| = template size)
        flexible_vertices, flexible_colours: V' ⊆ U and C' ⊆ D
        path_length: Arcs per completing path of each absorber
        link_length: Arcs per link path
        gadget_cap, bridge_cap: Candidates tried per edge / per gadget
        gadget_source: Optional (v, c) -> gadgets replacing the built-in finder
        bridge_source: Optional (y, z) -> bridging gadgets replacing the finder
        path_source: Optional (tail, head) -> completing paths and links tried
            before the lexicographic search
        verbose: Print per-edge progress

    Returns:
        TAbsorber validated against G

    Raises:
        SearchExhaustedError: stage "embed", index = edge number, resource = the
            last missing ingredient ("gadget", "bridge", "path" or "link")
    """
    root_v, root_c = root_maps(template, U, D, flexible_vertices, flexible_colours)
    used_vertices: Set[int] = set(root_v.values())
    used_colours: Set[int] = set(root_c.values())
    edges = template.edge_list()
    absorbers: List[Absorber] = []
    links: List[DirectedPath] = []
    warnings: List[str] = []

    for index, (a, b) in enumerate(edges):
        v, c = root_v[a], root_c[b]
        avoid_v = used_vertices - {v}
        avoid_c = used_colours - {c}
        if gadget_source is not None:
            gadgets = (g for g in gadget_source(v, c)
                       if (g.v, g.c) == (v, c) and not (g.vertices() - {v}) & used_vertices
                       and not (g.colours() - {c}) & used_colours)
        else:
            gadgets = iter_absorbing_gadgets(G, v, c, avoid_vertices=avoid_v, avoid_colours=avoid_c)

        placed = None
        reached = 0
        tried_gadgets: List[AbsorbingGadget] = []
        for gadget in _capped(gadgets, gadget_cap):
            tried_gadgets.append(gadget)
            reached = max(reached, 1)
            y, z = gadget.abutment
            taken_v = used_vertices | gadget.vertices()
            taken_c = used_colours | gadget.colours()
            if bridge_source is not None:
                bridges = (br for br in bridge_source(y, z)
                           if (br.y, br.z) == (y, z) and not (br.vertices() - {y, z}) & taken_v
                           and not br.colours() & taken_c)
            else:
                bridges = iter_bridging_gadgets(G, y, z, avoid_vertices=taken_v - {y, z}, avoid_colours=taken_c)
            for bridge in _capped(bridges, bridge_cap):
                reached = max(reached, 2)
                try:
                    absorber = assemble_absorber(G, gadget, bridge, used_vertices - {v}, used_colours - {c}, path_length,
                                                 path_source=path_source)
                except SearchExhaustedError:
                    continue
                link = None
                if absorbers:
                    reached = max(reached, 3)
                    link = _link(G, absorbers[-1].terminal, absorber.initial, link_length,
                                 used_vertices | absorber.vertices(), used_colours | absorber.colours(), path_source)
                    if link is None:
                        continue
                placed = (absorber, link)
                break
            if placed is not None:
                break

        if placed is None:
            missing = _RESOURCES[reached]
            raise SearchExhaustedError(
                f"edge {index} ({a}, {b}) rooted on v={v}, c={c}: no {missing} available",
                stage="embed", index=index, resource=missing,
            )
        absorber, link = placed
        if gadget_source is None and tried_gadgets:
            spread = is_well_spread(tried_gadgets, "absorbing", G.n)
            if not spread.well_spread:
                message = f"gadgets tried for edge {index} are not well spread ({spread.worst_type} {spread.worst_element})"
                print(f"[Warning] {message}")
                warnings.append(message)
        absorbers.append(absorber)
        used_vertices |= absorber.vertices()
        used_colours |= absorber.colours()
        if link is not None:
            links.append(link)
            used_vertices.update(link.vertices)
            used_colours.update(link.colours)
        if verbose:
            print(f"[Embed] edge {index} ({a}, {b}): absorber x1={absorber.initial} x6={absorber.terminal}, "
                  f"{len(used_vertices)} vertices used")

    tabs = TAbsorber(template, root_v, root_c, edges, absorbers, links, warnings)
    validate_t_absorber(tabs, G)
    return tabs


def robust_hamilton_path(tabs: TAbsorber, X: Iterable[int] = (), Y: Iterable[int] = ()) -> DirectedPath:
    """
    Rainbow Hamilton path of H - X from the initial to the terminal vertex avoiding Y.

    Matched template edges use their absorbing path, all other edges their avoiding
    path; links join them in edge order.

    Raises:
        ValueError: X or Y not flexible roots, |X| != |Y|, or above the deletion bound
        SearchExhaustedError: the template minus the deleted roots has no perfect matching
        InvalidStructureError: the assembled path fails validation
    """
    X, Y = set(X), set(Y)
    if not X <= tabs.flexible_vertices or not Y <= tabs.flexible_colours:
        raise ValueError("X and Y must consist of flexible root vertices and colours")
    if len(X) != len(Y):
        raise ValueError("|X| must equal |Y|")
    if len(X) > tabs.template.deletion_bound:
        raise ValueError(f"|X| = {len(X)} exceeds the deletion bound {tabs.template.deletion_bound}")
    inverse_v = {v: a for a, v in tabs.root_v.items()}
    inverse_c = {c: b for b, c in tabs.root_c.items()}
    matching = tabs.template.perfect_matching({inverse_v[x] for x in X}, {inverse_c[y] for y in Y})
    if matching is None:
        raise SearchExhaustedError(
            f"template has no perfect matching after deleting X={sorted(X)}, Y={sorted(Y)}",
            stage="match", resource="matching",
        )
    matched = set(matching.items())

    path: Optional[DirectedPath] = None
    for j, (edge, absorber) in enumerate(zip(tabs.edges, tabs.absorbers)):
        piece = absorber.absorbing_path() if edge in matched else absorber.avoiding_path()
        path = piece if path is None else path + piece
        if j < len(tabs.links):
            path = path + tabs.links[j]

    arcs = tabs.arc_colours()
    check_walk(path, lambda u, v: arcs.get((u, v), 0))
    expected = tabs.vertices() - X
    if set(path.vertices) != expected:
        raise InvalidStructureError("path is not Hamilton on H - X")
    if set(path.colours) & Y:
        raise InvalidStructureError("path uses a deleted colour")
    return path
