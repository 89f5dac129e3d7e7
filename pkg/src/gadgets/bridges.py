"""
(y, z, P)-bridges and their distinguishability.

P = (D1, ..., D6) is an equitable ordered partition of the colour set D. A bridge is
a (y, z)-bridging gadget with d_i in D_i (i <= 4) plus the arcs y->w2 with colour in
D5 and z->w5 with colour in D6. A bridge is distinguishable when no other bridge
contains any of its middle arcs w2w1, w2w3, w4w5, w6w5.
"""
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError
from src.gadgets.bridging import BridgingGadget, iter_bridging_gadgets

Partition = Tuple[Tuple[int, ...], ...]


def equitable_partition(colours: Iterable[int], parts: int = 6) -> Partition:
    """
    Round-robin split of the sorted colour set into `parts` ordered classes.

    Examples:
        >>> equitable_partition(range(1, 9))
        ((1, 7), (2, 8), (3,), (4,), (5,), (6,))
    """
    ordered = sorted(set(int(c) for c in colours))
    return tuple(tuple(ordered[i::parts]) for i in range(parts))


def validate_partition(colours: Iterable[int], partition: Sequence[Iterable[int]], parts: int = 6) -> Partition:
    """Return the partition as tuples, or raise InvalidStructureError if it is not equitable."""
    classes = tuple(tuple(sorted(int(c) for c in part)) for part in partition)
    if len(classes) != parts:
        raise InvalidStructureError(f"partition has {len(classes)} classes, expected {parts}")
    flat = [c for part in classes for c in part]
    if len(flat) != len(set(flat)):
        raise InvalidStructureError("partition classes overlap")
    if set(flat) != set(int(c) for c in colours):
        raise InvalidStructureError("partition does not cover the colour set exactly")
    sizes = [len(part) for part in classes]
    if max(sizes) - min(sizes) > 1:
        raise InvalidStructureError(f"partition is not equitable: class sizes {sizes}")
    return classes


@dataclass(frozen=True)
class Bridge:
    gadget: BridgingGadget
    d5: int
    d6: int
    distinguishable: bool = field(default=False, compare=False)

    @property
    def w(self) -> Tuple[int, ...]:
        return self.gadget.w

    def vertices(self) -> Set[int]:
        return self.gadget.vertices()

    def colours(self) -> Set[int]:
        return self.gadget.colours() | {self.d5, self.d6}

    def arcs(self) -> List[Tuple[int, int, int]]:
        w1, w2, w3, w4, w5, w6 = self.gadget.w
        return self.gadget.arcs() + [(self.gadget.y, w2, self.d5), (self.gadget.z, w5, self.d6)]

    def arc_pairs(self) -> Set[Tuple[int, int]]:
        return {(u, v) for u, v, _ in self.arcs()}

    def middle_arcs(self) -> List[Tuple[int, int]]:
        w1, w2, w3, w4, w5, w6 = self.gadget.w
        return [(w2, w1), (w2, w3), (w4, w5), (w6, w5)]

    def key(self) -> Tuple:
        return (self.gadget.w, self.gadget.d, self.d5, self.d6)

    def to_dict(self) -> Dict:
        payload = self.gadget.to_dict()
        payload.update({"d5": self.d5, "d6": self.d6, "distinguishable": self.distinguishable})
        return payload


def enumerate_bridges(H: ColouredDigraph, y: int, z: int, partition: Sequence[Iterable[int]]) -> List[Bridge]:
    """All (y, z, P)-bridges of H, in (d1, d2, d3) order."""
    classes = validate_partition(H.colours, partition)
    d5_ok, d6_ok = set(classes[4]), set(classes[5])
    found = []
    for gadget in iter_bridging_gadgets(H, y, z, colour_classes=classes[:4]):
        w1, w2, w3, w4, w5, w6 = gadget.w
        d5 = H.colour_of(y, w2)
        d6 = H.colour_of(z, w5)
        if d5 in d5_ok and d6 in d6_ok:
            found.append(Bridge(gadget, d5, d6))
    return found


def mark_distinguishable(bridges: Sequence[Bridge]) -> List[Bridge]:
    """Return copies of the bridges with the distinguishable flag set."""
    load: Counter = Counter()
    for bridge in bridges:
        load.update(bridge.arc_pairs())
    marked = []
    for bridge in bridges:
        shared = any(load[arc] > 1 for arc in bridge.middle_arcs())
        marked.append(Bridge(bridge.gadget, bridge.d5, bridge.d6, distinguishable=not shared))
    return marked


def count_distinguishable_bridges(H: ColouredDigraph, y: int, z: int,
                                  partition: Sequence[Iterable[int]]) -> Tuple[int, List[Bridge]]:
    """
    r_(y,z,P)(H) and the full bridge list with distinguishability flags.

    Returns:
        (r, bridges)
    """
    bridges = mark_distinguishable(enumerate_bridges(H, y, z, partition))
    return sum(1 for b in bridges if b.distinguishable), bridges


def m_s_membership(H: ColouredDigraph, y: int, z: int, partition: Sequence[Iterable[int]], s: int,
                   exhaustive_limit: int = 14, samples: int = 200, seed: int = 0) -> Dict:
    """
    Whether H lies in M_s: r(H) = s and e_H(A, B) <= 2|D|^3/n + 12s for all |A| = |B| = |D|.
    """
    from src.gadgets.quasirandom import max_pair_arc_count

    r, _ = count_distinguishable_bridges(H, y, z, partition)
    k = len(H.colours)
    best = max_pair_arc_count(H, k, exhaustive_limit=exhaustive_limit, samples=samples, seed=seed)
    bound = 2 * k ** 3 / H.n + 12 * s
    return {
        "s": s,
        "r": r,
        "max_pair_arcs": best["value"],
        "bound": bound,
        "mode": best["mode"],
        "member": r == s and best["value"] <= bound,
    }
