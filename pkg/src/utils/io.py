"""
Reading and writing squares, JSON artifacts and JSONL streams.

Artifacts are written with sorted keys and a fixed indent so a replay with the
embedded config reproduces byte-identical files.
"""
import json
import os
from typing import Any, Dict, Iterable, Iterator, List

import numpy as np

from src import __version__
from src.core.latin import LatinSquare


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_to_jsonable(v) for v in items]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if hasattr(value, "to_dict"):
        return _to_jsonable(value.to_dict())
    return value


def dumps(payload: Any) -> str:
    return json.dumps(_to_jsonable(payload), sort_keys=True, indent=2)


def read_square(path: str) -> LatinSquare:
    """
    Load a square from the text format or, for .json files, {"n": n, "grid": [...]}.

    Raises:
        ValueError: malformed file (wrong shape, non-integers)
        InvalidStructureError: well-formed grid that is not a Latin square
    """
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    if path.endswith(".json") or text.lstrip().startswith("{"):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})")
        return LatinSquare.from_dict(payload)
    return LatinSquare.from_text(text)


def read_grid(path: str) -> List[List[int]]:
    """Parse a grid without Latin validation (used by `verify`)."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    if path.endswith(".json") or text.lstrip().startswith("{"):
        payload = json.loads(text)
        grid = payload["grid"]
    else:
        lines = [line.split() for line in text.strip().splitlines() if line.strip()]
        if not lines or len(lines[0]) != 1:
            raise ValueError("first line must contain the order n")
        n = int(lines[0][0])
        grid = [[int(token) for token in line] for line in lines[1:]]
        if len(grid) != n:
            raise ValueError(f"expected {n} rows, found {len(grid)}")
    n = len(grid)
    if n == 0 or any(len(row) != n for row in grid):
        raise ValueError("grid must be square")
    return [[int(x) for x in row] for row in grid]


def write_square(path: str, square: LatinSquare) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(square.to_text())


def read_json(path: str) -> Dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def write_artifact(path: str, payload: Dict, config: Dict) -> None:
    """Write a JSON artifact that embeds the run config and tool version."""
    document = dict(payload)
    document["config"] = config
    document["version"] = __version__
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(document) + "\n")


def write_jsonl(path: str, records: Iterable[Dict]) -> int:
    _ensure_parent(path)
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(_to_jsonable(record), sort_keys=True) + "\n")
            count += 1
    return count


def read_jsonl(path: str) -> Iterator[Dict]:
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                yield json.loads(line)


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
