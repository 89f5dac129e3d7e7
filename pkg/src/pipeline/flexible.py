"""
Flexible vertex and colour sets for the connectors.

Vertices and colours are kept independently with probability p; a draw is
accepted when both sizes fall inside pn ± n^w and the draw survives the checks:
for random (u, v, c) the number of length-four rainbow connectors u -> v whose
second arc is coloured c, with inner vertices and other colours inside the draw,
must reach the threshold (floor(p^6 n^2 / 10) unless configured). Accepted draws
are trimmed to the requested size.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from src.absorber.paths import iter_rainbow_paths
from src.core.digraph import ColouredDigraph
from src.core.errors import SearchExhaustedError
from src.utils.config import PipelineConfig
from src.utils.rng import make_rng


@dataclass
class FlexibleSets:
    vertices: Set[int]
    colours: Set[int]
    probability: float
    attempts: int
    checks: List[Dict] = field(default_factory=list)
    threshold: int = 0

    def to_dict(self) -> Dict:
        return {
            "vertices": sorted(self.vertices),
            "colours": sorted(self.colours),
            "probability": self.probability,
            "attempts": self.attempts,
            "checks": list(self.checks),
            "threshold": self.threshold,
        }


def count_restricted_connectors(G: ColouredDigraph, u: int, v: int, c: int, length: int,
                                vertices: Set[int], colours: Set[int]) -> int:
    """
    Rainbow u -> v paths of the given length with second arc coloured c, inner
    vertices in `vertices` and every other colour in `colours`.

    A single-arc connector must itself carry c.
    """
    fixed = {0: c} if length == 1 else {1: c}
    return sum(1 for _ in iter_rainbow_paths(G, u, v, length, inner=vertices, colours=colours, fixed_colours=fixed))


def desk_check_threshold(n: int, p: float) -> int:
    """Connectors a check must find inside a draw kept with probability p."""
    return math.floor(p ** 6 * n ** 2 / 10)


def check_draw(G: ColouredDigraph, vertices: Set[int], colours: Set[int], cfg: PipelineConfig,
               rng: np.random.Generator, threshold: int) -> Tuple[bool, List[Dict]]:
    """
    Count connectors inside (vertices, colours) for cfg.check_count random (u, v, c).

    Returns:
        (every check reached the threshold, check records)
    """
    everything = np.arange(1, G.n + 1)
    checks = []
    for _ in range(cfg.check_count):
        u, v = (int(x) for x in rng.choice(everything, size=2, replace=False))
        c = int(rng.integers(1, G.n + 1))
        count = count_restricted_connectors(G, u, v, c, cfg.check_length, vertices, colours)
        checks.append({"u": u, "v": v, "c": c, "count": count})
    return all(check["count"] >= threshold for check in checks), checks


def choose_flexible_sets(G: ColouredDigraph, cfg: PipelineConfig, seed: Optional[int] = None,
                         size: Optional[int] = None, verbose: bool = False) -> FlexibleSets:
    """
    Sample V' and C' of exactly `size` elements (cfg.flexible_size by default).

    Raises:
        SearchExhaustedError: no draw passed the size window and the checks within
            cfg.flexible_retries attempts; the error message carries the last check
            statistics
    """
    n = G.n
    size = cfg.flexible_size if size is None else size
    seed = cfg.seed if seed is None else seed
    rng = make_rng(seed, 5)
    p = min(1.0, (size + n ** cfg.flexible_slack_exponent) / n)
    window = n ** cfg.flexible_window_exponent
    threshold = cfg.check_threshold if cfg.check_threshold is not None else desk_check_threshold(n, p)
    everything = np.arange(1, n + 1)
    last_checks: List[Dict] = []
    for attempt in range(1, cfg.flexible_retries + 1):
        vertices = everything[rng.random(n) < p]
        colours = everything[rng.random(n) < p]
        if abs(len(vertices) - p * n) > window or abs(len(colours) - p * n) > window:
            continue
        if len(vertices) < size or len(colours) < size:
            continue
        passed, checks = check_draw(G, {int(x) for x in vertices}, {int(x) for x in colours}, cfg, rng, threshold)
        last_checks = checks
        if passed:
            V = {int(x) for x in rng.choice(vertices, size=size, replace=False)}
            C = {int(x) for x in rng.choice(colours, size=size, replace=False)}
            if verbose:
                print(f"[Flexible] accepted attempt {attempt}: p={p:.3f}, |V'|=|C'|={size}, threshold={threshold}")
            return FlexibleSets(V, C, p, attempt, checks, threshold)
        if verbose:
            print(f"[Flexible] attempt {attempt}: check below threshold {threshold}")
    worst = min((check["count"] for check in last_checks), default=None)
    raise SearchExhaustedError(
        f"no flexible sets certified in {cfg.flexible_retries} attempts "
        f"(checks={len(last_checks)}, worst count={worst}, threshold={threshold})",
        stage="flexible", resource="connector",
    )
