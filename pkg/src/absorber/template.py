"""
Robustly matchable bipartite templates.

A template T on (A, B) with flexible sets A' ⊆ A, B' ⊆ B is robustly matchable
when deleting any X ⊆ A', Y ⊆ B' with |X| = |Y| <= min(|A'|, |B'|) / 2 leaves a
graph with a perfect matching. Vertices on both sides are labelled 1..size.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from src.core.errors import CapacityError, SearchExhaustedError
from src.core.matching import BipartiteGraph, perfect_matching
from src.sampler.rectangle import sample_rectangle_rows
from src.utils.config import parse_template_mode

Edge = Tuple[int, int]


@dataclass(frozen=True)
class RMBGTemplate:
    size: int
    edges: FrozenSet[Edge]
    flexible_a: Tuple[int, ...]
    flexible_b: Tuple[int, ...]
    mode: str = "complete"
    degree: Optional[int] = None
    certified: bool = False

    def __post_init__(self):
        for a, b in self.edges:
            if not (1 <= a <= self.size and 1 <= b <= self.size):
                raise ValueError(f"edge {(a, b)} outside 1..{self.size}")
        if len(self.flexible_a) != len(self.flexible_b):
            raise ValueError("flexible sets must have equal size")

    @property
    def left(self) -> range:
        return range(1, self.size + 1)

    @property
    def right(self) -> range:
        return range(1, self.size + 1)

    @property
    def deletion_bound(self) -> int:
        """Largest |X| = |Y| the template promises to tolerate."""
        return min(len(self.flexible_a), len(self.flexible_b)) // 2

    def edge_list(self) -> List[Edge]:
        """Edges in the fixed lexicographic enumeration order."""
        return sorted(self.edges)

    def is_2rmbg(self, m: int) -> bool:
        return self.size == 7 * m and len(self.flexible_a) == 2 * m and self.certified

    def perfect_matching(self, removed_a: Iterable[int] = (), removed_b: Iterable[int] = ()) -> Optional[Dict[int, int]]:
        """Perfect matching a -> b of T minus the removed vertices, or None."""
        removed_a, removed_b = set(removed_a), set(removed_b)
        left = [a for a in self.left if a not in removed_a]
        right = [b for b in self.right if b not in removed_b]
        if len(left) != len(right):
            return None
        left_index = {a: i for i, a in enumerate(left)}
        right_index = {b: i for i, b in enumerate(right)}
        graph = BipartiteGraph(len(left), len(right))
        for a, b in self.edges:
            if a in left_index and b in right_index:
                graph.add_edge(left_index[a], right_index[b])
        matching = perfect_matching(graph)
        if matching is None:
            return None
        return {left[i]: right[j] for i, j in matching.items()}

    def to_dict(self) -> Dict:
        return {
            "size": self.size,
            "edges": [list(e) for e in self.edge_list()],
            "flexible_a": list(self.flexible_a),
            "flexible_b": list(self.flexible_b),
            "mode": self.mode,
            "degree": self.degree,
            "certified": self.certified,
        }

    @classmethod
    def from_dict(cls, payload: Dict) -> "RMBGTemplate":
        return cls(
            size=payload["size"],
            edges=frozenset(tuple(e) for e in payload["edges"]),
            flexible_a=tuple(payload["flexible_a"]),
            flexible_b=tuple(payload["flexible_b"]),
            mode=payload.get("mode", "complete"),
            degree=payload.get("degree"),
            certified=payload.get("certified", False),
        )


@dataclass
class CertificationResult:
    robust: bool
    checked: int
    failing: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    bound: int = 0

    def to_dict(self) -> Dict:
        return {
            "robust": self.robust,
            "checked": self.checked,
            "failing": None if self.failing is None else [list(self.failing[0]), list(self.failing[1])],
            "bound": self.bound,
        }


def legal_deletions(template: RMBGTemplate) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Every (X, Y) with X ⊆ A', Y ⊆ B', |X| = |Y| <= the deletion bound."""
    for size in range(template.deletion_bound + 1):
        for X in combinations(template.flexible_a, size):
            for Y in combinations(template.flexible_b, size):
                yield X, Y


def certify_robust(template: RMBGTemplate, workers: int = 1, verbose: bool = False) -> CertificationResult:
    """
    Check robust matchability over all legal deletions.

    Args:
        template: Template to certify
        workers: Threads sharing the deletion list
        verbose: Print progress

    Returns:
        CertificationResult naming the first failing (X, Y), if any
    """
    deletions = list(legal_deletions(template))
    if verbose:
        print(f"[Template] certifying {len(deletions)} deletions (bound {template.deletion_bound})")

    def check(pair):
        return template.perfect_matching(pair[0], pair[1]) is not None

    if workers > 1 and len(deletions) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(check, deletions))
    else:
        verdicts = [check(pair) for pair in deletions]
    for pair, ok in zip(deletions, verdicts):
        if not ok:
            return CertificationResult(False, len(deletions), pair, template.deletion_bound)
    return CertificationResult(True, len(deletions), None, template.deletion_bound)


def _regular_edges(size: int, degree: int, rng: np.random.Generator) -> FrozenSet[Edge]:
    """Union of `degree` pairwise disjoint perfect matchings (rows of a Latin rectangle)."""
    rows = sample_rectangle_rows(size, degree, rng)
    return frozenset((a + 1, int(row[a])) for row in rows for a in range(size))


def build_template(size: int, flexible_size: int, mode: str = "complete",
                   rng: Optional[np.random.Generator] = None,
                   certification_limit: int = 8, retries: int = 20,
                   verbose: bool = False) -> RMBGTemplate:
    """
    Build a certified robustly matchable template of any balanced size.

    The flexible sets are {1..flexible_size} on both sides. Complete mode gives
    K_{size,size}; "regular:D" samples a D-regular graph as a union of D disjoint
    perfect matchings and certifies it, retrying on failure.

    Raises:
        CapacityError: regular mode with flexible_size above certification_limit
        SearchExhaustedError: no sampled regular graph certified within `retries`
    """
    if not 0 <= flexible_size <= size:
        raise ValueError(f"flexible_size must lie in 0..{size}")
    kind, degree = parse_template_mode(mode)
    flexible = tuple(range(1, flexible_size + 1))
    if kind == "complete":
        edges = frozenset((a, b) for a in range(1, size + 1) for b in range(1, size + 1))
        return RMBGTemplate(size, edges, flexible, flexible, mode, size, certified=True)

    if flexible_size > certification_limit:
        raise CapacityError(
            f"brute-force certification limited to flexible sets of size {certification_limit}",
            limit=certification_limit,
        )
    if degree > size:
        raise ValueError(f"degree {degree} exceeds template size {size}")
    rng = rng if rng is not None else np.random.default_rng(0)
    for attempt in range(retries):
        template = RMBGTemplate(size, _regular_edges(size, degree, rng), flexible, flexible, mode, degree)
        result = certify_robust(template)
        if verbose:
            print(f"[Template] attempt {attempt + 1}: robust={result.robust}")
        if result.robust:
            return RMBGTemplate(size, template.edges, flexible, flexible, mode, degree, certified=True)
    raise SearchExhaustedError(
        f"no certified {degree}-regular template in {retries} attempts",
        stage="template", resource="template",
    )


def build_rmbg(m: int, mode: str = "complete", rng: Optional[np.random.Generator] = None,
               certification_limit: int = 8, retries: int = 20) -> RMBGTemplate:
    """
    A 2RMBG(7m, 2m): |A| = |B| = 7m with flexible sets of size 2m.

    Examples:
        >>> build_rmbg(1).size
        7
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    return build_template(7 * m, 2 * m, mode, rng, certification_limit, retries)


if __name__ == "__main__":
    print("=== Complete template ===")
    t = build_rmbg(1)
    print(f"size={t.size}, edges={len(t.edges)}, bound={t.deletion_bound}")
    print(certify_robust(t).to_dict())

    print("\n=== Regular template ===")
    r = build_rmbg(1, "regular:3", rng=np.random.default_rng(1))
    print(f"degree={r.degree}, certified={r.certified}")
