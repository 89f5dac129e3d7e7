"""
Well-spread checks for gadget collections.

A collection of (v, c)-absorbing gadgets is well-spread when every vertex other
than v and every colour other than c lies in at most n gadgets; for (y, z)-bridging
gadgets the roots y, z are exempt and every colour counts.
"""
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Optional


@dataclass
class SpreadResult:
    well_spread: bool
    kind: str
    limit: int
    worst_element: Optional[int] = None
    worst_type: Optional[str] = None  # "vertex" or "colour"
    worst_load: int = 0

    def to_dict(self) -> Dict:
        return {
            "well_spread": self.well_spread,
            "kind": self.kind,
            "limit": self.limit,
            "worst_element": self.worst_element,
            "worst_type": self.worst_type,
            "worst_load": self.worst_load,
        }


def _roots(item, kind: str):
    if kind == "absorbing":
        return item.v, item.c
    gadget = getattr(item, "gadget", item)
    return gadget.y, gadget.z


def is_well_spread(collection: Iterable, kind: str, n: int) -> SpreadResult:
    """
    Check the well-spread condition and report the most loaded vertex or colour.

    Args:
        collection: AbsorbingGadget, BridgingGadget or Bridge objects sharing roots
        kind: "absorbing" or "bridging"
        n: Order of the host digraph (the load limit)

    Raises:
        ValueError: mixed roots or unknown kind
    """
    if kind not in ("absorbing", "bridging"):
        raise ValueError(f"kind must be 'absorbing' or 'bridging', got {kind!r}")
    items = list(collection)
    if not items:
        return SpreadResult(True, kind, n)
    roots = {_roots(item, kind) for item in items}
    if len(roots) > 1:
        raise ValueError(f"collection mixes roots {sorted(roots)}")
    (r1, r2), = roots

    vertex_load: Counter = Counter()
    colour_load: Counter = Counter()
    for item in items:
        if kind == "absorbing":
            vertex_load.update(item.vertices() - {r1})
            colour_load.update(item.colours() - {r2})
        else:
            vertex_load.update(item.vertices() - {r1, r2})
            colour_load.update(item.colours())

    worst_type, worst_element, worst_load = None, None, 0
    for label, load in (("vertex", vertex_load), ("colour", colour_load)):
        for element, count in sorted(load.items()):
            if count > worst_load:
                worst_type, worst_element, worst_load = label, element, count
    return SpreadResult(worst_load <= n, kind, n, worst_element, worst_type, worst_load)
