"""
Latin square construction and sampling.

- cyclic_square: the addition table of Z_n
- enumerate_latin_squares: exhaustive universe for tiny orders
- sample_latin_square: exact-uniform for n <= 4, otherwise a Jacobson-Matthews
  +-1 move chain run for a configured number of moves
"""
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from src.core.errors import CapacityError
from src.core.latin import LatinSquare
from src.utils.config import SamplerConfig
from src.utils.rng import make_rng

EXACT_UNIFORM_LIMIT = 4


def cyclic_square(n: int) -> LatinSquare:
    """
    Addition table of the integers modulo n, shifted to symbols 1..n.

    Examples:
        >>> cyclic_square(3).to_list()
        [[1, 2, 3], [2, 3, 1], [3, 1, 2]]
    """
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    idx = np.arange(n)
    return LatinSquare((idx[:, None] + idx[None, :]) % n + 1, validate=False)


@lru_cache(maxsize=None)
def _enumerate(n: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    full = (1 << n) - 1
    grid = [[0] * n for _ in range(n)]
    row_used = [0] * n
    col_used = [0] * n
    found: List[Tuple[Tuple[int, ...], ...]] = []

    def fill(cell: int) -> None:
        if cell == n * n:
            found.append(tuple(tuple(row) for row in grid))
            return
        r, c = divmod(cell, n)
        free = full & ~(row_used[r] | col_used[c])
        while free:
            bit = free & -free
            free ^= bit
            grid[r][c] = bit.bit_length()
            row_used[r] |= bit
            col_used[c] |= bit
            fill(cell + 1)
            row_used[r] ^= bit
            col_used[c] ^= bit
        grid[r][c] = 0

    fill(0)
    return tuple(found)


def enumerate_latin_squares(n: int, limit: int = EXACT_UNIFORM_LIMIT) -> List[LatinSquare]:
    """
    All Latin squares of order n in lexicographic order of their rows.

    Raises:
        CapacityError: n above the enumeration limit
    """
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    if n > limit:
        raise CapacityError(f"enumeration limited to n <= {limit}, got n={n}", limit=limit)
    return [LatinSquare(grid, validate=False) for grid in _enumerate(n)]


class JacobsonMatthewsChain:
    """
    +-1 move chain on the incidence cube of a Latin square.

    cube[r, c, s] is 1 when cell (r, c) holds symbol s. A move from a proper square may
    leave exactly one -1 entry (an improper square); further moves resolve it.
    """

    def __init__(self, start: LatinSquare, rng: np.random.Generator):
        n = start.n
        self.n = n
        self.rng = rng
        self.cube = np.zeros((n, n, n), dtype=np.int8)
        rows, cols = np.indices((n, n))
        self.cube[rows, cols, start.grid - 1] = 1
        self.improper: Optional[Tuple[int, int, int]] = None
        self.moves = 0

    def _pick(self, candidates: np.ndarray) -> int:
        if len(candidates) == 1:
            return int(candidates[0])
        return int(candidates[self.rng.integers(len(candidates))])

    def step(self) -> None:
        n = self.n
        cube = self.cube
        if self.improper is None:
            while True:
                r, c, s = (int(x) for x in self.rng.integers(0, n, size=3))
                if cube[r, c, s] == 0:
                    break
            r2 = self._pick(np.flatnonzero(cube[:, c, s] == 1))
            c2 = self._pick(np.flatnonzero(cube[r, :, s] == 1))
            s2 = self._pick(np.flatnonzero(cube[r, c, :] == 1))
        else:
            r, c, s = self.improper
            r2 = self._pick(np.flatnonzero(cube[:, c, s] == 1))
            c2 = self._pick(np.flatnonzero(cube[r, :, s] == 1))
            s2 = self._pick(np.flatnonzero(cube[r, c, :] == 1))

        cube[r, c, s] += 1
        cube[r, c2, s2] += 1
        cube[r2, c, s2] += 1
        cube[r2, c2, s] += 1
        cube[r, c, s2] -= 1
        cube[r, c2, s] -= 1
        cube[r2, c, s] -= 1
        cube[r2, c2, s2] -= 1
        self.improper = (r2, c2, s2) if cube[r2, c2, s2] < 0 else None
        self.moves += 1

    def run(self, moves: int) -> None:
        """Run the given number of moves, then continue until the square is proper."""
        if self.n < 2:
            return
        for _ in range(moves):
            self.step()
        while self.improper is not None:
            self.step()

    def square(self) -> LatinSquare:
        if self.improper is not None:
            raise RuntimeError("chain is at an improper square")
        return LatinSquare(self.cube.argmax(axis=2) + 1)


def random_isotope(square: LatinSquare, rng: np.random.Generator) -> LatinSquare:
    """Permute rows, columns and symbols of a square uniformly at random."""
    n = square.n
    rows = rng.permutation(n)
    cols = rng.permutation(n)
    symbols = np.concatenate([[0], rng.permutation(n) + 1])
    return LatinSquare(symbols[square.grid[np.ix_(rows, cols)]], validate=False)


def sample_latin_square(cfg: SamplerConfig, task: int = 0, verbose: bool = False) -> LatinSquare:
    """
    Seeded random Latin square of order cfg.n.

    Args:
        cfg: Sampler configuration (seed, n, burn_in_moves)
        task: Index of this draw within the run; selects an independent stream
        verbose: Print the sampling mode

    Returns:
        A validated LatinSquare
    """
    rng = make_rng(cfg.seed, 1, task)
    n = cfg.n
    if n <= EXACT_UNIFORM_LIMIT:
        universe = _enumerate(n)
        return LatinSquare(universe[int(rng.integers(len(universe)))], validate=False)
    chain = JacobsonMatthewsChain(random_isotope(cyclic_square(n), rng), rng)
    chain.run(cfg.burn_in_moves)
    if verbose:
        print(f"[Sampler] n={n}: {chain.moves} chain moves (burn-in {cfg.burn_in_moves})")
    return chain.square()


if __name__ == "__main__":
    print("=== Testing Latin square sampler ===\n")
    print(f"Latin squares of order 4: {len(enumerate_latin_squares(4))}")
    square = sample_latin_square(SamplerConfig(seed=1, n=7), verbose=True)
    print(square.to_text())
