"""
Upper and lower quasirandomness checks on arc counts e_{G,D}(U1, U2).

Upper (for H in G_D): e_H(A, B) <= (1 + slack)|D|^3 / n for all |A| = |B| = |D|.
Lower (for complete G): e_{G,D}(U1, U2) >= |U1||U2||D| / n - n^(5/3) for all triples.

Both checks are exact (exhaustive) at small n and report a sampled certificate,
labelled as such, above the exhaustive limit.
"""
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.digraph import ColouredDigraph, colour_arc_count
from src.utils.rng import make_rng

UPPER_EXHAUSTIVE_LIMIT = 14
LOWER_EXHAUSTIVE_LIMIT = 10


def _top_k(values: np.ndarray, k: int) -> np.ndarray:
    # stable: ties broken by smaller index
    order = np.argsort(-values, kind="stable")
    return np.sort(order[:k])


def max_pair_arc_count(H: ColouredDigraph, k: int, exhaustive_limit: int = UPPER_EXHAUSTIVE_LIMIT,
                       samples: int = 200, seed: int = 0) -> Dict:
    """
    max e_H(A, B) over vertex sets with |A| = |B| = k.

    For a fixed A the best B is the k columns with the largest counts, so the
    exhaustive mode only enumerates A. Above the limit, alternating best responses
    from random starts give a lower bound on the maximum.

    Returns:
        {"value", "A", "B", "mode"} with 1-based vertex lists
    """
    n = H.n
    adjacency = (H.matrix != 0).astype(np.int64)
    if k <= 0:
        return {"value": 0, "A": [], "B": [], "mode": "exhaustive"}
    k = min(k, n)
    best_value, best_a, best_b = -1, None, None
    if n <= exhaustive_limit:
        mode = "exhaustive"
        for rows in combinations(range(n), k):
            col_sums = adjacency[list(rows)].sum(axis=0)
            cols = _top_k(col_sums, k)
            value = int(col_sums[cols].sum())
            if value > best_value:
                best_value, best_a, best_b = value, np.array(rows), cols
    else:
        mode = "sampled"
        rng = make_rng(seed, 3)
        for _ in range(max(1, samples)):
            rows = np.sort(rng.choice(n, size=k, replace=False))
            value = -1
            while True:
                cols = _top_k(adjacency[rows].sum(axis=0), k)
                rows_next = _top_k(adjacency[:, cols].sum(axis=1), k)
                value_next = int(adjacency[np.ix_(rows_next, cols)].sum())
                if value_next <= value:
                    break
                rows, value = rows_next, value_next
            if value > best_value:
                best_value, best_a, best_b = value, rows, cols
    return {
        "value": best_value,
        "A": [int(i) + 1 for i in best_a],
        "B": [int(j) + 1 for j in best_b],
        "mode": mode,
    }


def upper_quasirandom_check(H: ColouredDigraph, slack: float = 0.0,
                            exhaustive_limit: int = UPPER_EXHAUSTIVE_LIMIT,
                            samples: int = 200, seed: int = 0) -> Dict:
    """
    Decide slack-upper-quasirandomness of H and report the ordered worst pair (A, B).

    In sampled mode the maximum found is only a lower bound, so "certified" is set
    only when a violation is found or the search was exhaustive.

    Examples:
        >>> from src.core.digraph import latin_to_digraph
        >>> from src.sampler.latin_sampler import cyclic_square
        >>> upper_quasirandom_check(latin_to_digraph(cyclic_square(4)))["holds"]
        True
    """
    n = H.n
    k = len(H.colours)
    best = max_pair_arc_count(H, k, exhaustive_limit=exhaustive_limit, samples=samples, seed=seed)
    bound = (1.0 + slack) * k ** 3 / n
    holds = best["value"] * n <= (1.0 + slack) * k ** 3
    return {
        "holds": bool(holds),
        "certified": best["mode"] == "exhaustive" or not holds,
        "mode": best["mode"],
        "max_arcs": best["value"],
        "bound": bound,
        "slack": slack,
        "worst_pair": {"A": best["A"], "B": best["B"]},
    }


def _masks(n: int) -> np.ndarray:
    """All 2^n subsets of an n-set as a (2^n, n) 0/1 array."""
    idx = np.arange(1 << n)
    return ((idx[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)


def _colour_indicator(G: ColouredDigraph) -> np.ndarray:
    """X[i, j, d - 1] = 1 when arc (i+1)->(j+1) has colour d."""
    n = G.n
    X = np.zeros((n, n, n), dtype=np.int64)
    rows, cols = np.nonzero(G.matrix)
    X[rows, cols, G.matrix[rows, cols] - 1] = 1
    return X


def lower_quasirandom_check(G: ColouredDigraph, mode: str = "exhaustive", samples: int = 100_000,
                            seed: int = 0, exhaustive_limit: int = LOWER_EXHAUSTIVE_LIMIT,
                            chunk: int = 64) -> Dict:
    """
    Check e_{G,D}(U1, U2) >= |U1||U2||D|/n - n^(5/3) over all or sampled triples.

    Exhaustive mode enumerates U1 and D; for each pair the minimising U2 takes every
    head whose contribution is negative. Returns the minimising triple and the
    slack (deviation plus n^(5/3)); the check holds when the slack is non-negative.
    """
    n = G.n
    allowance = n ** (5.0 / 3.0)
    if mode == "exhaustive":
        if n > exhaustive_limit:
            raise ValueError(f"exhaustive lower check limited to n <= {exhaustive_limit}; use mode='sampled'")
        masks = _masks(n)
        X = _colour_indicator(G).reshape(n, n * n)
        d_sizes = masks.sum(axis=1)
        best = (np.inf, 0, 0, None)
        for start in range(0, len(masks), chunk):
            U1 = masks[start:start + chunk]
            per_head = (U1 @ X).reshape(len(U1), n, n)          # [u1, head, colour]
            counts = per_head @ masks.T                          # [u1, head, dmask]
            expected = (U1.sum(axis=1)[:, None, None] * d_sizes[None, None, :]) / n
            contribution = counts - expected
            deficit = np.minimum(contribution, 0.0).sum(axis=1)  # [u1, dmask]
            flat = int(np.argmin(deficit))
            value = float(deficit.flat[flat])
            if value < best[0]:
                i, d = divmod(flat, deficit.shape[1])
                heads = np.flatnonzero(contribution[i, :, d] < 0)
                best = (value, start + i, d, heads)
        value, u1_index, d_index, heads = best
        U1 = [int(v) + 1 for v in np.flatnonzero(masks[u1_index])]
        D = [int(c) + 1 for c in np.flatnonzero(masks[d_index])]
        U2 = [int(v) + 1 for v in heads]
        evaluated = 1 << (2 * n)
    elif mode == "sampled":
        rng = make_rng(seed, 4)
        value, U1, U2, D = np.inf, [], [], []
        evaluated = 0
        while evaluated < samples:
            batch = min(1000, samples - evaluated)
            t1, t2, t3 = sample_triples(n, batch, rng)
            deviation = evaluate_triples(G, t1, t2, t3) - t1.sum(1) * t2.sum(1) * t3.sum(1) / n
            i = int(np.argmin(deviation))
            if deviation[i] < value:
                value = float(deviation[i])
                U1, U2, D = ([int(v) + 1 for v in np.flatnonzero(t[i])] for t in (t1, t2, t3))
            evaluated += batch
    else:
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    slack = value + allowance
    return {
        "holds": bool(slack >= -1e-9),
        "mode": mode,
        "triples_checked": evaluated,
        "min_deviation": value,
        "allowance": allowance,
        "slack": slack,
        "worst_triple": {"U1": U1, "U2": U2, "D": D},
    }


def sample_triples(n: int, count: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random (U1, U2, D) indicator rows; each set has an independent uniform density."""
    out = []
    for _ in range(3):
        density = rng.random((count, 1))
        out.append((rng.random((count, n)) < density).astype(np.int64))
    return out[0], out[1], out[2]


def evaluate_triples(G: ColouredDigraph, U1: np.ndarray, U2: np.ndarray, D: np.ndarray) -> np.ndarray:
    """e_{G,D}(U1, U2) for a batch of indicator rows (vectorised)."""
    padded = np.concatenate([np.zeros((len(D), 1), dtype=np.int64), D], axis=1)
    colour_hit = padded[:, G.matrix]                      # [s, tail, head]
    return np.einsum("si,sj,sij->s", U1, U2, colour_hit)


def naive_max_pair_arc_count(H: ColouredDigraph, k: int) -> int:
    """Oracle: enumerate every ordered pair (A, B)."""
    n = H.n
    colours = list(H.colours)
    best = 0
    for A in combinations(range(1, n + 1), k):
        for B in combinations(range(1, n + 1), k):
            best = max(best, colour_arc_count(H, A, B, colours))
    return best


def naive_lower_min_deviation(G: ColouredDigraph) -> float:
    """Oracle: triple loop over every (U1, U2, D)."""
    n = G.n
    subsets: List[Sequence[int]] = [
        [v for v in range(1, n + 1) if mask >> (v - 1) & 1] for mask in range(1 << n)
    ]
    best = np.inf
    for U1, U2, D in product(subsets, repeat=3):
        deviation = colour_arc_count(G, U1, U2, D) - len(U1) * len(U2) * len(D) / n
        best = min(best, deviation)
    return float(best)


if __name__ == "__main__":
    from src.core.digraph import latin_to_digraph
    from src.sampler.latin_sampler import cyclic_square

    print("=== Testing quasirandomness checks ===\n")
    G = latin_to_digraph(cyclic_square(6))
    print(upper_quasirandom_check(G.restrict([1, 2])))
    print(lower_quasirandom_check(G))
