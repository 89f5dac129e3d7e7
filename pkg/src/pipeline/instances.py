"""
Latin squares with a planted T-absorber, a planted rainbow path through the
remaining vertices, and planted connectors, for end-to-end pipeline runs.

The colours left over after the absorber are confined, inside the non-absorber
block, to the planted path's own arcs, so the only rainbow path forest the
pipeline can grow there is the planted one.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from src.absorber.paths import DirectedPath
from src.absorber.planting import plant_t_absorber, planted_paths, planted_sources
from src.absorber.t_absorber import TAbsorber, inventory_sizes, validate_t_absorber
from src.absorber.template import build_template
from src.core.digraph import ColouredDigraph, latin_to_digraph
from src.core.latin import LatinSquare
from src.gadgets.absorbing import AbsorbingGadget
from src.gadgets.bridging import BridgingGadget
from src.sampler.rectangle import complete_latin_rectangle
from src.utils.config import PipelineConfig
from src.utils.rng import make_rng


@dataclass
class PlantedInstance:
    square: LatinSquare
    digraph: ColouredDigraph
    t_absorber: TAbsorber
    path_arcs: List[Tuple[int, int, int]]
    connector_arcs: List[Tuple[int, int, int]]
    gadgets: Dict[Tuple[int, int], List[AbsorbingGadget]] = field(default_factory=dict)
    bridges: Dict[Tuple[int, int], List[BridgingGadget]] = field(default_factory=dict)
    paths: Dict[Tuple[int, int], List[DirectedPath]] = field(default_factory=dict)

    @property
    def roots(self) -> Tuple[Set[int], Set[int]]:
        return set(self.t_absorber.root_v.values()), set(self.t_absorber.root_c.values())

    @property
    def flexible(self) -> Tuple[Set[int], Set[int]]:
        return self.t_absorber.flexible_vertices, self.t_absorber.flexible_colours

    def gadget_source(self, v: int, c: int) -> List[AbsorbingGadget]:
        return self.gadgets.get((v, c), [])

    def bridge_source(self, y: int, z: int) -> List[BridgingGadget]:
        return self.bridges.get((y, z), [])

    def path_source(self, tail: int, head: int) -> List[DirectedPath]:
        return self.paths.get((tail, head), [])


def _inventory(cfg: PipelineConfig) -> Tuple[int, int]:
    template = build_template(cfg.template_size, cfg.flexible_size, "complete")
    return inventory_sizes(len(template.edges), template.size, template.size,
                           cfg.absorber_path_length, cfg.link_path_length)


def minimum_order(cfg: PipelineConfig) -> int:
    """Smallest n that fits the configured T-absorber."""
    return _inventory(cfg)[0]


def maximum_order(cfg: PipelineConfig) -> int:
    """
    Largest n a planted instance supports.

    The last path vertex has no spare-coloured arc into the path block, so each of
    its n - |V(H)| cells there needs a distinct colour of H.
    """
    need_v, need_c = _inventory(cfg)
    return need_v + need_c


def construct_planted_instance(n: int, cfg: Optional[PipelineConfig] = None, seed: int = 0,
                               attempts: int = 200, verbose: bool = False) -> PlantedInstance:
    """
    Plant absorber resources in a random Latin square of order n.

    Args:
        n: Order, between minimum_order(cfg) and maximum_order(cfg)
        cfg: Pipeline configuration (template and path lengths are read from it)
        seed: Seed for labels and completion
        attempts: Completion restarts
        verbose: Print what was planted

    Raises:
        ValueError: n outside the supported range for the configured T-absorber
        SearchExhaustedError: the partial square could not be completed
    """
    cfg = cfg or PipelineConfig(seed=seed)
    rng = make_rng(seed, 6)
    template = build_template(cfg.template_size, cfg.flexible_size, cfg.template_mode, rng)
    need_v, need_c = inventory_sizes(len(template.edges), template.size, template.size,
                                     cfg.absorber_path_length, cfg.link_path_length)
    if n < need_v:
        raise ValueError(f"n = {n} is below the {need_v} vertices of the configured T-absorber")
    if n > need_v + need_c:
        raise ValueError(f"n = {n} exceeds {need_v + need_c}: the path block would need more than "
                         f"the {need_c} absorber colours")
    vertex_labels = [int(v) for v in rng.permutation(n) + 1]
    colour_labels = [int(c) for c in rng.permutation(n) + 1]
    tabs = plant_t_absorber(template, cfg.absorber_path_length, cfg.link_path_length,
                            vertex_labels[:need_v], colour_labels[:need_c])
    rest = vertex_labels[need_v:]
    spare = colour_labels[need_c:]

    path_arcs = [(rest[i], rest[i + 1], spare[i]) for i in range(len(rest) - 1)]
    leftover = spare[max(0, len(rest) - 1):]
    first_target = rest[0] if rest else tabs.initial
    connector_arcs: List[Tuple[int, int, int]] = []
    if tabs.template.deletion_bound >= 1 and cfg.connector_max_length >= 2:
        w = min(tabs.flexible_vertices)
        y = min(tabs.flexible_colours)
        connector_arcs += [(tabs.terminal, w, y), (w, first_target, leftover[0])]
    else:
        connector_arcs.append((tabs.terminal, first_target, leftover[0]))
    if rest:
        connector_arcs.append((rest[-1], tabs.initial, leftover[1]))

    prefilled: Dict[Tuple[int, int], int] = {}
    for (u, v), colour in tabs.arc_colours().items():
        prefilled[(u, v)] = colour
    for u, v, colour in path_arcs + connector_arcs:
        prefilled[(u, v)] = colour
    spare_set = set(spare)
    forbidden = {
        (u, v): spare_set
        for u in rest for v in rest if (u, v) not in prefilled
    }
    grid = complete_latin_rectangle(n, n, prefilled=prefilled, forbidden=forbidden, rng=rng, attempts=attempts)
    square = LatinSquare(grid)
    G = latin_to_digraph(square)
    validate_t_absorber(tabs, G)
    gadgets, bridges = planted_sources(tabs)
    paths = planted_paths(tabs)
    if verbose:
        print(f"[Planted] n={n}: absorber on {need_v} vertices / {need_c} colours, "
              f"path on {len(rest)} vertices, {len(connector_arcs)} connector arcs")
    return PlantedInstance(square, G, tabs, path_arcs, connector_arcs, gadgets, bridges, paths)
