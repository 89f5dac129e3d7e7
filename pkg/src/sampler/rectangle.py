"""
Latin rectangles: random completion under prescribed and forbidden cells, and
seeded sampling of elements of G_D (|D| x n Latin rectangles read as digraphs).

A k x n rectangle R over symbols 1..n is read as a coloured digraph with colour set
{1..k}: R[d - 1][u - 1] is the head of the colour-d arc leaving u.
"""
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from src.core.digraph import ColouredDigraph
from src.core.errors import InvalidStructureError, SearchExhaustedError
from src.core.matching import BipartiteGraph, perfect_matching
from src.utils.config import SamplerConfig
from src.utils.rng import make_rng

Cell = Tuple[int, int]


def _check_prefilled(n: int, rows: int, prefilled: Dict[Cell, int]) -> None:
    row_seen: Dict[Tuple[int, int], Cell] = {}
    col_seen: Dict[Tuple[int, int], Cell] = {}
    for (r, c), s in sorted(prefilled.items()):
        if not (1 <= r <= rows and 1 <= c <= n and 1 <= s <= n):
            raise InvalidStructureError(f"prefilled cell ({r}, {c}) = {s} outside a {rows} x {n} rectangle")
        if (r, s) in row_seen:
            raise InvalidStructureError(f"row {r} prescribes symbol {s} twice")
        if (c, s) in col_seen:
            raise InvalidStructureError(f"column {c} prescribes symbol {s} twice")
        row_seen[(r, s)] = (r, c)
        col_seen[(c, s)] = (r, c)


def complete_latin_rectangle(n: int, rows: int,
                             prefilled: Optional[Dict[Cell, int]] = None,
                             forbidden: Optional[Dict[Cell, Iterable[int]]] = None,
                             rng: Optional[np.random.Generator] = None,
                             attempts: int = 50) -> np.ndarray:
    """
    Fill a rows x n Latin rectangle honouring prescribed and forbidden cells.

    Rows are filled one at a time by a random perfect matching between columns and
    the symbols still allowed in them; rows with constraints go first. When a row
    has no perfect matching the whole fill restarts with fresh randomness.

    Args:
        n: Number of columns and symbols
        rows: Number of rows (1 <= rows <= n)
        prefilled: {(row, col): symbol}, 1-based
        forbidden: {(row, col): symbols} that must not appear in that cell
        rng: Random generator (a fixed default stream if omitted)
        attempts: Restarts before giving up

    Returns:
        rows x n integer array

    Raises:
        SearchExhaustedError: no completion found within the attempt budget
    """
    if not 1 <= rows <= n:
        raise ValueError(f"rectangle height {rows} must satisfy 1 <= rows <= {n}")
    prefilled = dict(prefilled or {})
    forbidden = {cell: set(symbols) for cell, symbols in (forbidden or {}).items()}
    rng = rng if rng is not None else make_rng(0, 2)
    _check_prefilled(n, rows, prefilled)

    row_fixed: Dict[int, Dict[int, int]] = {r: {} for r in range(1, rows + 1)}
    col_reserved: Dict[int, Dict[int, int]] = {c: {} for c in range(1, n + 1)}
    for (r, c), s in prefilled.items():
        row_fixed[r][c] = s
        col_reserved[c][s] = r
    constrained = {r for r, _ in prefilled} | {r for r, _ in forbidden}

    for _ in range(max(1, attempts)):
        order = list(rng.permutation(sorted(constrained))) + list(
            rng.permutation([r for r in range(1, rows + 1) if r not in constrained])
        )
        result = np.zeros((rows, n), dtype=np.int64)
        col_used: List[Set[int]] = [set() for _ in range(n + 1)]
        ok = True
        for r in order:
            r = int(r)
            fixed = row_fixed[r]
            fixed_symbols = set(fixed.values())
            adjacency: List[List[int]] = []
            for c in range(1, n + 1):
                if c in fixed:
                    allowed = [fixed[c]]
                else:
                    banned = forbidden.get((r, c), ())
                    allowed = [
                        s for s in range(1, n + 1)
                        if s not in col_used[c] and s not in fixed_symbols and s not in banned
                        and col_reserved[c].get(s, r) == r
                    ]
                    allowed = [int(s) for s in rng.permutation(allowed)] if allowed else []
                adjacency.append([s - 1 for s in allowed])
            matching = perfect_matching(BipartiteGraph.from_adjacency(adjacency, n))
            if matching is None:
                ok = False
                break
            for col_index, symbol_index in matching.items():
                result[r - 1, col_index] = symbol_index + 1
                col_used[col_index + 1].add(symbol_index + 1)
        if ok:
            return result
    raise SearchExhaustedError(
        f"no {rows} x {n} Latin rectangle completion found in {attempts} attempts",
        stage="complete", resource="completion",
    )


def rectangle_to_digraph(rectangle: np.ndarray, colours: Optional[Iterable[int]] = None) -> ColouredDigraph:
    """Read row d of the rectangle as the permutation of the d-th colour."""
    rectangle = np.asarray(rectangle, dtype=np.int64)
    k, n = rectangle.shape
    labels = list(colours) if colours is not None else list(range(1, k + 1))
    if len(labels) != k:
        raise ValueError(f"{k} rows need {k} colour labels, got {len(labels)}")
    return ColouredDigraph.from_colour_classes(n, {d: rectangle[i].tolist() for i, d in enumerate(labels)})


def sample_rectangle_rows(n: int, k: int, rng: np.random.Generator, proposals_per_row: int = 64) -> np.ndarray:
    """
    k x n Latin rectangle sampled row by row.

    Each row is a random permutation proposal accepted when it clashes with no
    earlier row in any column; after proposals_per_row rejections the remaining rows
    are completed by random matchings. Accepted proposals are uniform over the
    permutations compatible with the rows above.
    """
    rows: List[np.ndarray] = []
    used = np.zeros((n, n + 1), dtype=bool)
    columns = np.arange(n)
    for r in range(k):
        accepted = None
        for _ in range(proposals_per_row):
            proposal = rng.permutation(n) + 1
            if not used[columns, proposal].any():
                accepted = proposal
                break
        if accepted is None:
            prefilled = {(i + 1, c + 1): int(row[c]) for i, row in enumerate(rows) for c in range(n)}
            return complete_latin_rectangle(n, k, prefilled=prefilled, rng=rng)
        used[columns, accepted] = True
        rows.append(accepted)
    return np.array(rows, dtype=np.int64).reshape(k, n)


def sample_latin_rectangle(cfg: SamplerConfig, task: int = 0) -> ColouredDigraph:
    """
    Seeded element of G_D with D = {1..k}.

    Examples:
        >>> H = sample_latin_rectangle(SamplerConfig(seed=3, n=5, k=2))
        >>> H.arc_count()
        10
    """
    rng = make_rng(cfg.seed, 2, task)
    return rectangle_to_digraph(sample_rectangle_rows(cfg.n, cfg.k, rng, cfg.proposals_per_row))


if __name__ == "__main__":
    print("=== Testing Latin rectangle completion ===\n")
    rect = complete_latin_rectangle(6, 4, prefilled={(1, 1): 3, (2, 2): 3}, forbidden={(3, 3): {1, 2}})
    print(rect)
    print(sample_latin_rectangle(SamplerConfig(seed=0, n=6, k=3)))
