"""
Twist systems and the twist switching on elements of G_D.

Vertex roles: u1..u6 (inner), u'1..u'8 (middle), u''1..u''8 (outer); colours
d1..d6 with d_i in D_i. The twist deletes twelve arcs and adds twelve arcs so that
the inner vertices form the canonical (y, z, P)-bridge with w_i = u_i.
"""
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError
from src.gadgets.bridges import Bridge, count_distinguishable_bridges, validate_partition
from src.gadgets.bridging import BridgingGadget

Arc = Tuple[int, int]


@dataclass(frozen=True)
class TwistSystem:
    y: int
    z: int
    u: Tuple[int, ...]        # u1..u6
    mid: Tuple[int, ...]      # u'1..u'8
    ext: Tuple[int, ...]      # u''1..u''8
    d: Tuple[int, ...]        # d1..d6

    def _labels(self):
        u = (None,) + tuple(self.u)
        m = (None,) + tuple(self.mid)
        e = (None,) + tuple(self.ext)
        return u, m, e

    def arcs(self) -> List[Tuple[int, int, int]]:
        """The eighteen arcs of the system with their colours in H."""
        u, m, e = self._labels()
        d1, d2, d3, d4, d5, d6 = self.d
        y, z = self.y, self.z
        return [
            (y, u[1], d1), (m[7], u[5], d1), (e[8], e[7], d1), (u[6], m[8], d1),
            (u[6], z, d2), (u[2], m[2], d2), (e[2], e[1], d2), (m[1], u[1], d2),
            (u[4], y, d3), (u[2], m[3], d3), (e[3], e[4], d3), (m[4], u[3], d3),
            (z, u[3], d4), (u[4], m[5], d4), (e[5], e[6], d4), (m[6], u[5], d4),
            (y, u[2], d5), (z, u[5], d6),
        ]

    def removed_arcs(self) -> List[Tuple[int, int, int]]:
        u, m, e = self._labels()
        d1, d2, d3, d4 = self.d[:4]
        return [
            (m[1], u[1], d2), (e[2], e[1], d2), (u[2], m[2], d2),
            (u[2], m[3], d3), (e[3], e[4], d3), (m[4], u[3], d3),
            (u[4], m[5], d4), (e[5], e[6], d4), (m[6], u[5], d4),
            (u[6], m[8], d1), (e[8], e[7], d1), (m[7], u[5], d1),
        ]

    def added_arcs(self) -> List[Tuple[int, int, int]]:
        u, m, e = self._labels()
        d1, d2, d3, d4 = self.d[:4]
        return [
            (u[6], u[5], d1), (m[7], e[7], d1), (e[8], m[8], d1),
            (u[4], u[5], d4), (m[6], e[6], d4), (e[5], m[5], d4),
            (u[2], u[3], d3), (m[4], e[4], d3), (e[3], m[3], d3),
            (u[2], u[1], d2), (m[1], e[1], d2), (e[2], m[2], d2),
        ]

    def to_dict(self) -> Dict:
        return {"y": self.y, "z": self.z, "u": list(self.u), "mid": list(self.mid),
                "ext": list(self.ext), "d": list(self.d)}

    @classmethod
    def from_dict(cls, payload: Dict) -> "TwistSystem":
        return cls(int(payload["y"]), int(payload["z"]), tuple(payload["u"]), tuple(payload["mid"]),
                   tuple(payload["ext"]), tuple(payload["d"]))


def validate_twist_system(H: ColouredDigraph, T: TwistSystem, partition: Sequence) -> None:
    """
    Raise InvalidStructureError naming the first violated twist-system condition.

    Checks, in order: label counts, distinctness, colour classes, present arcs and
    their colours, then the twelve required non-arcs.
    """
    classes = validate_partition(H.colours, partition)
    if (len(T.u), len(T.mid), len(T.ext), len(T.d)) != (6, 8, 8, 6):
        raise InvalidStructureError("twist system needs 6 inner, 8 middle, 8 outer vertices and 6 colours")
    if T.y == T.z:
        raise InvalidStructureError("twist roots y and z must be distinct")
    distinct = list(T.u) + list(T.ext)
    everything = distinct + list(T.mid)
    if any(not 1 <= x <= H.n for x in everything):
        raise InvalidStructureError("twist system vertex outside the vertex range")
    if {T.y, T.z} & set(everything):
        raise InvalidStructureError("twist system vertices must avoid y and z")
    if len(set(distinct)) != len(distinct):
        raise InvalidStructureError("inner and outer twist vertices are not distinct")
    if set(T.mid) & set(distinct):
        raise InvalidStructureError("middle twist vertices meet the inner or outer vertices")
    for i, (colour, part) in enumerate(zip(T.d, classes), start=1):
        if colour not in part:
            raise InvalidStructureError(f"colour d{i}={colour} is not in class D{i}")
    for a, b, colour in T.arcs():
        if H.colour_of(a, b) != colour:
            raise InvalidStructureError(f"arc {a}->{b} should have colour {colour}, found {H.colour_of(a, b)}")
    for a, b, _ in T.added_arcs():
        if H.has_arc(a, b):
            raise InvalidStructureError(f"required non-arc {a}->{b} is present")


def twist(H: ColouredDigraph, T: TwistSystem, partition: Sequence) -> ColouredDigraph:
    """
    Apply the twist switching; the result is validated as an element of G_D.

    Colour classes outside d1..d4 are untouched.
    """
    validate_twist_system(H, T, partition)
    removed = [(a, b) for a, b, _ in T.removed_arcs()]
    return H.with_arc_edits(removed, T.added_arcs())


def untwist(H_twisted: ColouredDigraph, T: TwistSystem) -> ColouredDigraph:
    """Undo a twist: drop the twelve added arcs and restore the twelve removed ones."""
    for a, b, colour in T.added_arcs():
        if H_twisted.colour_of(a, b) != colour:
            raise InvalidStructureError(f"arc {a}->{b} of colour {colour} missing; not a twisted digraph for this system")
    removed = [(a, b) for a, b, _ in T.added_arcs()]
    return H_twisted.with_arc_edits(removed, T.removed_arcs())


def canonical_bridge(T: TwistSystem) -> Bridge:
    """The (y, z, P)-bridge formed by the inner vertices after the twist."""
    d1, d2, d3, d4, d5, d6 = T.d
    return Bridge(BridgingGadget(T.y, T.z, tuple(T.u), (d1, d2, d3, d4)), d5, d6)


def twist_effect(H: ColouredDigraph, T: TwistSystem, partition: Sequence) -> Dict:
    """
    Bridges created and destroyed by a twist, and r before and after.
    """
    after = twist(H, T, partition)
    r_before, bridges_before = count_distinguishable_bridges(H, T.y, T.z, partition)
    r_after, bridges_after = count_distinguishable_bridges(after, T.y, T.z, partition)
    keys_before = {b.key(): b for b in bridges_before}
    keys_after = {b.key(): b for b in bridges_after}
    canonical = canonical_bridge(T).key()
    return {
        "twisted": after,
        "r_before": r_before,
        "r_after": r_after,
        "created": [keys_after[k] for k in keys_after if k not in keys_before],
        "destroyed": [keys_before[k] for k in keys_before if k not in keys_after],
        "canonical_present": canonical in keys_after,
        "canonical_distinguishable": canonical in keys_after and keys_after[canonical].distinguishable,
    }


def iter_twist_systems(H: ColouredDigraph, y: int, z: int, partition: Sequence) -> Iterator[TwistSystem]:
    """Lazily yield twist systems in (d1, ..., d6, outer arcs) order."""
    if y == z:
        raise ValueError("twist roots y and z must be distinct")
    classes = validate_partition(H.colours, partition)
    succ = H.successor_table
    pred = H.predecessor_table
    n = H.n

    def candidates(colour: int, blocked: set) -> List[Arc]:
        out = []
        for tail in range(1, n + 1):
            head = int(succ[colour, tail])
            if head != tail and tail not in blocked and head not in blocked:
                out.append((tail, head))
        return out

    for d1 in classes[0]:
        u1 = int(succ[d1, y])
        for d2 in classes[1]:
            u6 = int(pred[d2, z])
            for d3 in classes[2]:
                u4 = int(pred[d3, y])
                for d4 in classes[3]:
                    u3 = int(succ[d4, z])
                    for d5 in classes[4]:
                        u2 = int(succ[d5, y])
                        for d6 in classes[5]:
                            u5 = int(succ[d6, z])
                            inner = (u1, u2, u3, u4, u5, u6)
                            if len(set(inner)) != 6 or {y, z} & set(inner):
                                continue
                            mid = (
                                int(pred[d2, u1]), int(succ[d2, u2]), int(succ[d3, u2]), int(pred[d3, u3]),
                                int(succ[d4, u4]), int(pred[d4, u5]), int(pred[d1, u5]), int(succ[d1, u6]),
                            )
                            if {y, z} & set(mid) or set(inner) & set(mid):
                                continue
                            if (H.has_arc(u2, u1) or H.has_arc(u2, u3) or H.has_arc(u4, u5)
                                    or H.has_arc(u6, u5)):
                                continue
                            yield from _complete_outer(H, y, z, inner, mid, (d1, d2, d3, d4, d5, d6), candidates)


def _complete_outer(H, y, z, inner, mid, colours, candidates) -> Iterator[TwistSystem]:
    d1, d2, d3, d4 = colours[:4]
    m = (None,) + mid
    base_block = {y, z} | set(inner) | set(mid)
    # outer arcs: (u''2 -> u''1, d2), (u''3 -> u''4, d3), (u''5 -> u''6, d4), (u''8 -> u''7, d1)
    # with non-arcs u'1u''1, u''2u'2 | u''3u'3, u'4u''4 | u''5u'5, u'6u''6 | u'7u''7, u''8u'8
    specs = [
        (d2, lambda t, h: not H.has_arc(m[1], h) and not H.has_arc(t, m[2])),
        (d3, lambda t, h: not H.has_arc(t, m[3]) and not H.has_arc(m[4], h)),
        (d4, lambda t, h: not H.has_arc(t, m[5]) and not H.has_arc(m[6], h)),
        (d1, lambda t, h: not H.has_arc(m[7], h) and not H.has_arc(t, m[8])),
    ]
    chosen: List[Arc] = []

    def extend(index: int, blocked: set) -> Iterator[TwistSystem]:
        if index == 4:
            (e2, e1), (e3, e4), (e5, e6), (e8, e7) = chosen
            yield TwistSystem(y, z, tuple(inner), tuple(mid), (e1, e2, e3, e4, e5, e6, e7, e8), tuple(colours))
            return
        colour, ok = specs[index]
        for tail, head in candidates(colour, blocked):
            if not ok(tail, head):
                continue
            chosen.append((tail, head))
            yield from extend(index + 1, blocked | {tail, head})
            chosen.pop()

    yield from extend(0, base_block)


def find_twist_systems(H: ColouredDigraph, y: int, z: int, partition: Sequence,
                       cap: Optional[int] = 100) -> List[TwistSystem]:
    """Up to `cap` twist systems of H for roots (y, z); every result validates."""
    found = []
    for system in iter_twist_systems(H, y, z, partition):
        if cap is not None and len(found) >= cap:
            break
        found.append(system)
    return found


def few_loops_filter(H: ColouredDigraph, T: TwistSystem, threshold: int) -> bool:
    """Keep systems whose switched colours d1..d4 each carry at most `threshold` loops."""
    loops = H.loop_counts()
    return all(loops.get(d, 0) <= threshold for d in T.d[:4])


def canonical_distinguishable_filter(H: ColouredDigraph, T: TwistSystem, partition: Sequence) -> bool:
    """Keep systems whose canonical bridge is distinguishable after the twist."""
    return twist_effect(H, T, partition)["canonical_distinguishable"]


def twist_walk(H: ColouredDigraph, y: int, z: int, partition: Sequence, steps: int,
               rng: np.random.Generator, cap: int = 50, loop_threshold: Optional[int] = None,
               verbose: bool = False) -> List[Dict]:
    """
    Repeatedly apply a random twist whose canonical bridge ends up distinguishable.

    With `loop_threshold` set, only systems passing few_loops_filter are tried.

    Returns:
        Trajectory records {"step", "r", "removed", "added", "system"}; the walk
        stops early when no admissible twist system is found.
    """
    trajectory = []
    r, _ = count_distinguishable_bridges(H, y, z, partition)
    trajectory.append({"step": 0, "r": r, "removed": [], "added": [], "system": None})
    current = H
    for step in range(1, steps + 1):
        systems = find_twist_systems(current, y, z, partition, cap=cap)
        if loop_threshold is not None:
            systems = [s for s in systems if few_loops_filter(current, s, loop_threshold)]
        order = rng.permutation(len(systems))
        applied = None
        for index in order:
            effect = twist_effect(current, systems[int(index)], partition)
            if effect["canonical_distinguishable"]:
                applied = (systems[int(index)], effect)
                break
        if applied is None:
            if verbose:
                print(f"[Twist] step {step}: no admissible twist system among {len(systems)}")
            break
        system, effect = applied
        current = effect["twisted"]
        trajectory.append({
            "step": step,
            "r": effect["r_after"],
            "removed": [list(arc) for arc in system.removed_arcs()],
            "added": [list(arc) for arc in system.added_arcs()],
            "system": system.to_dict(),
        })
        if verbose:
            print(f"[Twist] step {step}: r = {effect['r_after']}")
    return trajectory
