"""
Latin square value type with validation and text/JSON conversion.

Rows, columns and symbols are 1-based throughout, so a square of order n uses the
symbols 1..n and position (1, 1) is the top-left cell.
"""
from typing import Dict, List, Sequence, Union

import numpy as np

from src.core.errors import InvalidStructureError


class LatinSquare:
    """
    Immutable n x n Latin square over the symbols 1..n.

    The grid is stored as a read-only numpy array; ``grid[i - 1, j - 1]`` is the symbol
    in row i, column j.
    """

    def __init__(self, grid: Union[Sequence[Sequence[int]], np.ndarray], validate: bool = True):
        array = np.array(grid, dtype=np.int64)
        if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
            raise InvalidStructureError(f"Latin square grid must be a non-empty n x n array, got shape {array.shape}")
        array.setflags(write=False)
        self._grid = array
        self.n = int(array.shape[0])
        if validate:
            LatinSquare.check_grid(array)

    @property
    def grid(self) -> np.ndarray:
        return self._grid

    def symbol(self, row: int, column: int) -> int:
        """Symbol at 1-based position (row, column)."""
        return int(self._grid[row - 1, column - 1])

    def diagonal(self) -> List[int]:
        return [int(s) for s in np.diag(self._grid)]

    def to_list(self) -> List[List[int]]:
        return self._grid.tolist()

    def to_dict(self) -> Dict:
        return {"n": self.n, "grid": self.to_list()}

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines.extend(" ".join(str(int(s)) for s in row) for row in self._grid)
        return "\n".join(lines) + "\n"

    def permute_rows(self, sigma: Sequence[int]) -> "LatinSquare":
        """
        Return the square whose row i is row sigma(i) of this square.

        Args:
            sigma: 1-based permutation as a sequence of length n (sigma[i - 1] = sigma(i))
        """
        order = np.asarray(sigma, dtype=np.int64) - 1
        return LatinSquare(self._grid[order, :], validate=False)

    @staticmethod
    def check_grid(array: np.ndarray) -> None:
        """
        Raise InvalidStructureError naming the first violated constraint.

        Rows are checked before columns; within a line the first repeated symbol wins.
        """
        n = array.shape[0]
        if array.min() < 1 or array.max() > n:
            bad = np.argwhere((array < 1) | (array > n))[0]
            raise InvalidStructureError(
                f"symbol {int(array[bad[0], bad[1]])} at row {bad[0] + 1}, column {bad[1] + 1} is outside 1..{n}"
            )
        for axis, label in ((1, "row"), (0, "column")):
            for index in range(n):
                line = array[index, :] if axis == 1 else array[:, index]
                seen = set()
                for value in line:
                    value = int(value)
                    if value in seen:
                        raise InvalidStructureError(f"{label} {index + 1} repeats symbol {value}")
                    seen.add(value)

    @classmethod
    def from_text(cls, text: str) -> "LatinSquare":
        """
        Parse the text format: first line "n", then n lines of n integers.

        Examples:
            >>> LatinSquare.from_text("2\\n1 2\\n2 1\\n").to_list()
            [[1, 2], [2, 1]]
        """
        lines = [line.split() for line in text.strip().splitlines() if line.strip()]
        if not lines or len(lines[0]) != 1:
            raise ValueError("first line must contain the order n")
        n = int(lines[0][0])
        rows = [[int(token) for token in line] for line in lines[1:]]
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"expected {n} rows of {n} integers")
        return cls(rows)

    @classmethod
    def from_dict(cls, payload: Dict) -> "LatinSquare":
        grid = payload["grid"]
        if int(payload.get("n", len(grid))) != len(grid):
            raise ValueError("field 'n' does not match the grid size")
        return cls(grid)

    def __eq__(self, other) -> bool:
        return isinstance(other, LatinSquare) and np.array_equal(self._grid, other._grid)

    def __hash__(self) -> int:
        return hash((self.n, self._grid.tobytes()))

    def __repr__(self) -> str:
        return f"LatinSquare(n={self.n})"


def is_latin_square(grid: Union[Sequence[Sequence[int]], np.ndarray]) -> bool:
    """True if the grid satisfies the Latin square invariants."""
    try:
        LatinSquare(grid)
    except InvalidStructureError:
        return False
    return True


if __name__ == "__main__":
    print("=== Testing LatinSquare ===\n")
    square = LatinSquare([[1, 2, 3], [2, 3, 1], [3, 1, 2]])
    print(square.to_text())
    print(f"Diagonal: {square.diagonal()}")
    try:
        LatinSquare([[1, 2], [1, 2]])
    except InvalidStructureError as exc:
        print(f"Rejected as expected: {exc}")
