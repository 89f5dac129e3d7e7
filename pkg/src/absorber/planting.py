"""
Synthetic T-absorbers on fresh labels.

Every gadget vertex, bridge vertex, path vertex and colour is drawn from label
iterators in a fixed order, so the planted inventory is proper by construction:
each colour outside the roots is used once except f1 (twice, on disjoint arcs),
and root colours appear once per absorber on vertex-disjoint arcs.
"""
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.absorber.assembly import Absorber, validate_absorber
from src.absorber.paths import DirectedPath
from src.absorber.t_absorber import TAbsorber, inventory_sizes, root_maps, validate_t_absorber
from src.absorber.template import RMBGTemplate
from src.gadgets.absorbing import AbsorbingGadget
from src.gadgets.bridging import BridgingGadget


def _path(source: int, target: int, length: int, vertices: Iterator[int], colours: Iterator[int]) -> DirectedPath:
    inner = tuple(next(vertices) for _ in range(length - 1))
    return DirectedPath((source,) + inner + (target,), tuple(next(colours) for _ in range(length)))


def plant_t_absorber(template: RMBGTemplate, path_length: int = 3, link_length: int = 3,
                     vertex_labels: Optional[Sequence[int]] = None,
                     colour_labels: Optional[Sequence[int]] = None) -> TAbsorber:
    """
    Build a T-absorber inventory on the given labels (1, 2, ... by default).

    The first |A| vertex labels are the roots U with V' their |A'| smallest; colours
    likewise. The result is validated on its own arc set.

    Raises:
        ValueError: not enough labels for the inventory
    """
    edges = template.edge_list()
    need_v, need_c = inventory_sizes(len(edges), template.size, template.size, path_length, link_length)
    vertex_labels = list(vertex_labels) if vertex_labels is not None else list(range(1, need_v + 1))
    colour_labels = list(colour_labels) if colour_labels is not None else list(range(1, need_c + 1))
    if len(vertex_labels) < need_v or len(colour_labels) < need_c:
        raise ValueError(f"planting needs {need_v} vertex and {need_c} colour labels")

    U, D = vertex_labels[:template.size], colour_labels[:template.size]
    flexible_v = sorted(U)[:len(template.flexible_a)]
    flexible_c = sorted(D)[:len(template.flexible_b)]
    root_v, root_c = root_maps(template, U, D, flexible_v, flexible_c)
    fresh_v = iter(vertex_labels[template.size:])
    fresh_c = iter(colour_labels[template.size:])

    absorbers: List[Absorber] = []
    links: List[DirectedPath] = []
    for a, b in edges:
        x = tuple(next(fresh_v) for _ in range(6))
        f = tuple(next(fresh_c) for _ in range(3))
        gadget = AbsorbingGadget(root_v[a], root_c[b], x, f)
        w = tuple(next(fresh_v) for _ in range(6))
        d = tuple(next(fresh_c) for _ in range(4))
        bridge = BridgingGadget(x[3], x[4], w, d)
        ends = [(x[1], x[2]), (w[0], w[3]), (w[4], w[1]), (w[2], w[5])]
        paths = tuple(_path(s, t, path_length, fresh_v, fresh_c) for s, t in ends)
        absorber = Absorber(gadget, bridge, paths)
        validate_absorber(absorber)
        if absorbers:
            links.append(_path(absorbers[-1].terminal, absorber.initial, link_length, fresh_v, fresh_c))
        absorbers.append(absorber)

    tabs = TAbsorber(template, root_v, root_c, edges, absorbers, links)
    validate_t_absorber(tabs)
    return tabs


def planted_sources(tabs: TAbsorber) -> Tuple[Dict, Dict]:
    """
    Lookup tables {(v, c): [gadget]} and {(y, z): [bridge]} for embed_t_absorber.
    """
    gadgets: Dict[Tuple[int, int], List[AbsorbingGadget]] = {}
    bridges: Dict[Tuple[int, int], List[BridgingGadget]] = {}
    for absorber in tabs.absorbers:
        gadgets.setdefault((absorber.v, absorber.c), []).append(absorber.gadget)
        bridges.setdefault(absorber.gadget.abutment, []).append(absorber.bridge)
    return gadgets, bridges


def planted_paths(tabs: TAbsorber) -> Dict[Tuple[int, int], List[DirectedPath]]:
    """Completing paths and links keyed by (tail, head), for embed_t_absorber's path_source."""
    paths: Dict[Tuple[int, int], List[DirectedPath]] = {}
    for absorber in tabs.absorbers:
        for path in absorber.paths:
            paths.setdefault((path.tail, path.head), []).append(path)
    for link in tabs.links:
        paths.setdefault((link.tail, link.head), []).append(link)
    return paths


if __name__ == "__main__":
    from src.absorber.template import build_template

    print("=== Planted T-absorber on K_{2,2} ===")
    tabs = plant_t_absorber(build_template(2, 2), path_length=1, link_length=1)
    print(f"vertices={len(tabs.vertices())}, colours={len(tabs.colours())}")
    print(f"initial={tabs.initial}, terminal={tabs.terminal}")
