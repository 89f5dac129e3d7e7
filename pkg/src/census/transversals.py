"""
Exact transversal engines.

Full transversals are counted by a row-by-row dynamic programme over
(used-column mask, used-symbol mask) states; Hamilton transversals by a cyclic
vertex-sequence search from vertex 1; maximum partial and cycle-free partial
transversals by branch and bound. Witnesses are lexicographically least by their
(row, column) sequence.
"""
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from itertools import permutations
from typing import Dict, List, Optional, Tuple

from src.core.errors import CapacityError
from src.core.latin import LatinSquare
from src.core.positions import PositionSet, classify_position_set

FULL_LIMIT = 12
HAMILTON_LIMIT = 10


def _check_limit(square: LatinSquare, limit: int, engine: str) -> None:
    if square.n > limit:
        raise CapacityError(f"{engine}: n={square.n} exceeds the engine limit {limit} (raise it with --limit-n)", limit=limit)


def _row_options(square: LatinSquare) -> List[List[Tuple[int, int]]]:
    n = square.n
    return [[(1 << c, 1 << (square.symbol(r, c + 1) - 1)) for c in range(n)] for r in range(1, n + 1)]


def _count_from(options: List[List[Tuple[int, int]]], start_row: int, col_mask: int, sym_mask: int) -> int:
    layer: Dict[Tuple[int, int], int] = {(col_mask, sym_mask): 1}
    for row in options[start_row:]:
        nxt: Dict[Tuple[int, int], int] = defaultdict(int)
        for (cols, syms), ways in layer.items():
            for col_bit, sym_bit in row:
                if not (cols & col_bit) and not (syms & sym_bit):
                    nxt[(cols | col_bit, syms | sym_bit)] += ways
        layer = nxt
        if not layer:
            return 0
    return sum(layer.values())


def count_full_transversals(square: LatinSquare, limit: int = FULL_LIMIT, workers: int = 1,
                            verbose: bool = False) -> int:
    """
    Exact number of full transversals.

    Args:
        square: The Latin square
        limit: Largest order accepted
        workers: Split the first-row choices over this many threads

    Returns:
        Transversal count as a Python int

    Examples:
        >>> count_full_transversals(LatinSquare([[1, 2, 3], [2, 3, 1], [3, 1, 2]]))
        3
    """
    _check_limit(square, limit, "full-transversal count")
    options = _row_options(square)
    if workers <= 1:
        return _count_from(options, 0, 0, 0)
    if verbose:
        print(f"[Census] splitting {len(options[0])} roots over {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda opt: _count_from(options, 1, opt[0], opt[1]), options[0]))
    return sum(parts)


def count_hamilton_transversals(square: LatinSquare, limit: int = HAMILTON_LIMIT,
                                degenerate_hamilton: bool = False) -> int:
    """
    Exact number of full transversals whose image is one directed n-cycle.

    Cycles are enumerated as vertex sequences starting at vertex 1, so each is seen
    once. For n = 1 the single loop counts only with degenerate_hamilton.
    """
    _check_limit(square, limit, "Hamilton-transversal count")
    n = square.n
    if n == 1:
        return 1 if degenerate_hamilton else 0
    grid = square.grid
    full = (1 << n) - 1
    count = 0
    stack = [(0, 1, 1, 0)]
    # iterative DFS: (current vertex index, path length, visited mask, symbol mask)
    while stack:
        u, length, visited, syms = stack.pop()
        if length == n:
            bit = 1 << (int(grid[u, 0]) - 1)
            if not syms & bit:
                count += 1
            continue
        free = full & ~visited
        while free:
            low = free & -free
            free ^= low
            v = low.bit_length() - 1
            bit = 1 << (int(grid[u, v]) - 1)
            if not syms & bit:
                stack.append((v, length + 1, visited | low, syms | bit))
    return count


def max_partial_transversal(square: LatinSquare, limit: int = FULL_LIMIT) -> Tuple[int, PositionSet]:
    """Largest partial transversal and its lexicographically least witness."""
    return _branch_and_bound(square, limit, cycle_free=False)


def max_cycle_free_partial(square: LatinSquare, limit: int = FULL_LIMIT) -> Tuple[int, PositionSet]:
    """
    Largest partial transversal whose image is a linear directed forest.

    Loops are cycles, so diagonal cells never appear in a witness.

    Examples:
        >>> max_cycle_free_partial(LatinSquare([[1]]))[0]
        0
    """
    return _branch_and_bound(square, limit, cycle_free=True)


def _branch_and_bound(square: LatinSquare, limit: int, cycle_free: bool) -> Tuple[int, PositionSet]:
    _check_limit(square, limit, "partial-transversal search")
    n = square.n
    grid = [[int(x) for x in row] for row in square.grid]
    ceiling = n - 1 if cycle_free else n
    best: List = [-1, []]
    chosen: List[Tuple[int, int]] = []
    # path endpoints of the image forest: start_of[end], end_of[start]
    start_of = list(range(n + 1))
    end_of = list(range(n + 1))

    def search(row: int, cols: int, syms: int) -> bool:
        size = len(chosen)
        if size > best[0]:
            best[0] = size
            best[1] = list(chosen)
            if size == ceiling:
                return True
        if row > n:
            return False
        free_cols = n - bin(cols).count("1")
        if size + min(n - row + 1, free_cols) <= best[0]:
            return False
        for col in range(1, n + 1):
            col_bit = 1 << (col - 1)
            sym_bit = 1 << (grid[row - 1][col - 1] - 1)
            if cols & col_bit or syms & sym_bit:
                continue
            if cycle_free:
                s, e = start_of[row], end_of[col]
                if s == col:
                    continue
                saved = (end_of[s], start_of[e])
                end_of[s], start_of[e] = e, s
            chosen.append((row, col))
            done = search(row + 1, cols | col_bit, syms | sym_bit)
            chosen.pop()
            if cycle_free:
                end_of[s], start_of[e] = saved
            if done:
                return True
        return search(row + 1, cols, syms)

    search(1, 0, 0)
    return best[0], PositionSet(best[1], n)


def naive_count_full_transversals(square: LatinSquare) -> int:
    """Diagonal-enumeration oracle: try every column permutation."""
    n = square.n
    return sum(
        1 for perm in permutations(range(1, n + 1))
        if len({square.symbol(r, c) for r, c in enumerate(perm, start=1)}) == n
    )


def naive_count_hamilton_transversals(square: LatinSquare) -> int:
    n = square.n
    count = 0
    for perm in permutations(range(1, n + 1)):
        cells = PositionSet(enumerate(perm, start=1), n)
        if cells.is_partial_transversal(square) and classify_position_set(square, cells).hamilton:
            count += 1
    return count


def naive_max_partial(square: LatinSquare, cycle_free: bool = False) -> int:
    """Exhaustive oracle over all partial transversals (tiny n only)."""
    n = square.n
    best = 0

    def extend(row: int, cells: List[Tuple[int, int]]) -> None:
        nonlocal best
        if row > n:
            positions = PositionSet(cells, n)
            if positions.is_partial_transversal(square):
                if not cycle_free or classify_position_set(square, positions).cycle_free:
                    best = max(best, len(cells))
            return
        extend(row + 1, cells)
        for col in range(1, n + 1):
            extend(row + 1, cells + [(row, col)])

    extend(1, [])
    return best


if __name__ == "__main__":
    from src.sampler.latin_sampler import cyclic_square

    print("=== Testing transversal engines ===\n")
    for n in range(1, 8):
        Z = cyclic_square(n)
        print(f"Z_{n}: full={count_full_transversals(Z)} hamilton={count_hamilton_transversals(Z)} "
              f"partial={max_partial_transversal(Z)[0]} cycle-free={max_cycle_free_partial(Z)[0]}")
