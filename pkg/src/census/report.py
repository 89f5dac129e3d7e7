"""
Conjecture census for a single Latin square.

Collects exact transversal counts, the largest partial / cycle-free partial
transversals and the longest rainbow path or cycle, then evaluates:
- Ryser-Brualdi-Stein: a partial transversal of size n - 1
- Gyarfas-Sarkozy: a cycle-free partial transversal of size n - 2
- rainbow path/cycle: a rainbow directed cycle or path of length n - 1
"""
import math
from dataclasses import dataclass, field
from typing import Dict, Optional

from src.census.rainbow import max_rainbow_path_or_cycle
from src.census.transversals import (
    count_full_transversals,
    count_hamilton_transversals,
    max_cycle_free_partial,
    max_partial_transversal,
)
from src.core.digraph import latin_to_digraph
from src.core.errors import CapacityError
from src.core.latin import LatinSquare
from src.utils.config import CensusConfig


def taranenko_reference(n: int) -> float:
    """(n / e^2)^n, the leading term of the transversal upper bound."""
    return math.exp(n * (math.log(n) - 2.0))


@dataclass
class CensusReport:
    n: int
    full_transversal_count: int
    hamilton_transversal_count: int
    max_partial_transversal_size: int
    max_cycle_free_partial_size: int
    max_rainbow_path_or_cycle_length: int
    connected_loop_free_size: int
    taranenko_bound_value: float
    rbs_holds: bool
    gs_holds: bool
    rainbow_path_holds: bool
    witnesses: Dict[str, Optional[Dict]] = field(default_factory=dict)
    limits: Dict[str, int] = field(default_factory=dict)

    @property
    def taranenko_ratio(self) -> float:
        return self.full_transversal_count / self.taranenko_bound_value

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "full_transversal_count": self.full_transversal_count,
            "hamilton_transversal_count": self.hamilton_transversal_count,
            "max_partial_transversal_size": self.max_partial_transversal_size,
            "max_cycle_free_partial_size": self.max_cycle_free_partial_size,
            "max_rainbow_path_or_cycle_length": self.max_rainbow_path_or_cycle_length,
            "connected_partial_sizes": {
                "loop_permitting": self.max_rainbow_path_or_cycle_length,
                "loop_free": self.connected_loop_free_size,
            },
            "taranenko_bound_value": self.taranenko_bound_value,
            "taranenko_ratio": self.taranenko_ratio,
            "conjectures": {
                "ryser_brualdi_stein": self.rbs_holds,
                "gyarfas_sarkozy": self.gs_holds,
                "rainbow_path_or_cycle": self.rainbow_path_holds,
            },
            "witnesses": self.witnesses,
            "limits": self.limits,
        }


def conjecture_report(square: LatinSquare, cfg: Optional[CensusConfig] = None,
                      verbose: bool = False) -> CensusReport:
    """
    Run every census engine on one square.

    Args:
        square: The Latin square
        cfg: Engine limits and thread count
        verbose: Print one line per engine

    Returns:
        CensusReport with counts, maxima, conjecture verdicts and witnesses

    Raises:
        CapacityError: n above the smaller engine limit
    """
    cfg = cfg or CensusConfig()
    n = square.n
    limit = min(cfg.full_limit, cfg.hamilton_limit)
    if n > limit:
        raise CapacityError(f"census: n={n} exceeds the engine limit {limit}", limit=limit)
    G = latin_to_digraph(square)

    full = count_full_transversals(square, limit=cfg.full_limit, workers=cfg.threads, verbose=verbose)
    hamilton = count_hamilton_transversals(square, limit=cfg.hamilton_limit)
    partial_size, partial_witness = max_partial_transversal(square, limit=cfg.full_limit)
    free_size, free_witness = max_cycle_free_partial(square, limit=cfg.full_limit)
    walk = max_rainbow_path_or_cycle(G, allow_loops=True, limit=cfg.hamilton_limit)
    loop_free_walk = max_rainbow_path_or_cycle(G, allow_loops=False, limit=cfg.hamilton_limit)
    if verbose:
        print(f"[Census] n={n}: full={full} hamilton={hamilton} partial={partial_size} "
              f"cycle-free={free_size} rainbow={walk.length} ({walk.kind})")

    rbs = partial_size >= n - 1
    gs = free_size >= n - 2
    rainbow_ok = walk.length >= n - 1
    return CensusReport(
        n=n,
        full_transversal_count=full,
        hamilton_transversal_count=hamilton,
        max_partial_transversal_size=partial_size,
        max_cycle_free_partial_size=free_size,
        max_rainbow_path_or_cycle_length=walk.length,
        connected_loop_free_size=loop_free_walk.length,
        taranenko_bound_value=taranenko_reference(n),
        rbs_holds=rbs,
        gs_holds=gs,
        rainbow_path_holds=rainbow_ok,
        witnesses={
            "partial_transversal": partial_witness.to_dict() if rbs else None,
            "cycle_free_partial": free_witness.to_dict() if gs else None,
            "rainbow_path_or_cycle": walk.to_dict() if rainbow_ok else None,
        },
        limits={"full_limit": cfg.full_limit, "hamilton_limit": cfg.hamilton_limit},
    )


if __name__ == "__main__":
    from src.sampler.latin_sampler import cyclic_square

    print("=== Testing conjecture report ===\n")
    print(conjecture_report(cyclic_square(3), verbose=True).to_dict())
