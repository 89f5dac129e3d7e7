"""
Seeded Monte Carlo experiments.

Kinds:
    fixed-points      uniform permutations vs the exact fixed-point pmf (TV distance)
    diag-max          max symbol multiplicity on the diagonal of sampled squares
    discrepancy       normalised |e(U1, U2) - |U1||U2||D|/n| over sampled set triples
    loops-per-colour  loop counts of every colour class of sampled squares
    row-permutation   coupled draws: rows of a constant-diagonal square permuted by σ;
                      diagonal multiplicity of the constant symbol vs fixed points of σ
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
import plotly.graph_objects as go

from src.core.digraph import latin_to_digraph
from src.core.latin import LatinSquare
from src.gadgets.quasirandom import evaluate_triples, sample_triples
from src.sampler.latin_sampler import cyclic_square, sample_latin_square
from src.stats.pmf import fixed_point_distribution
from src.utils.config import SamplerConfig, StatsConfig
from src.utils.rng import make_rng, split_counts

BATCH = 10_000


@dataclass
class ExperimentReport:
    experiment_id: str
    kind: str
    n: int
    seed: int
    samples: int
    table: pd.DataFrame
    summary: Dict = field(default_factory=dict)
    verdicts: Dict[str, Dict] = field(default_factory=dict)

    def __post_init__(self):
        if self.samples <= 0:
            raise ValueError("an experiment needs at least one sample")
        for name, verdict in self.verdicts.items():
            if "tolerance" not in verdict:
                raise ValueError(f"verdict {name} does not record its tolerance")

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts.values())

    def to_dict(self) -> Dict:
        return {
            "experiment_id": self.experiment_id,
            "kind": self.kind,
            "n": self.n,
            "seed": self.seed,
            "samples": self.samples,
            "table": self.table.to_dict(orient="records"),
            "summary": dict(self.summary),
            "verdicts": dict(self.verdicts),
            "passed": self.passed,
        }

    def to_csv(self, path: str) -> None:
        self.table.to_csv(path, index=False)

    def to_html(self, path: str) -> None:
        """Histogram of the empirical distribution, with the reference when known."""
        fig = go.Figure()
        fig.add_trace(go.Bar(x=self.table["value"], y=self.table["empirical"], name="empirical",
                             marker_color="#90A4AE"))
        if "reference" in self.table and self.table["reference"].notna().any():
            fig.add_trace(go.Scatter(x=self.table["value"], y=self.table["reference"], name="reference",
                                     mode="lines+markers", line=dict(color="#00C853", width=3)))
        fig.update_layout(
            title=f"{self.kind} (n={self.n}, samples={self.samples}, seed={self.seed})",
            xaxis_title="value", yaxis_title="probability", template="plotly_white",
        )
        fig.write_html(path)


def _histogram(values: np.ndarray, support: Optional[range] = None, reference: Optional[List[float]] = None) -> pd.DataFrame:
    values = np.asarray(values)
    if support is None:
        support = range(int(values.min()), int(values.max()) + 1) if values.size else range(0)
    counts = np.array([(values == v).sum() for v in support], dtype=np.int64)
    table = pd.DataFrame({"value": list(support), "count": counts})
    table["empirical"] = table["count"] / max(1, values.size)
    if reference is not None:
        table["reference"] = [float(x) for x in reference]
    return table


def _parallel(draw: Callable[[int, int], np.ndarray], samples: int, workers: int) -> np.ndarray:
    """Split `samples` over workers; draw(worker, count) uses its own derived stream."""
    counts = [c for c in split_counts(samples, workers) if c]
    if workers > 1 and len(counts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(draw, range(len(counts)), counts))
    else:
        parts = [draw(i, c) for i, c in enumerate(counts)]
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def permutation_fixed_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Fixed-point counts of `count` uniform permutations of [n]."""
    out = []
    for size in split_counts(count, max(1, math.ceil(count / BATCH))):
        perms = rng.permuted(np.tile(np.arange(n), (size, 1)), axis=1)
        out.append((perms == np.arange(n)).sum(axis=1))
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def diagonal_max_statistic(square: LatinSquare) -> int:
    """
    Largest number of times one symbol appears on the leading diagonal.

    Examples:
        >>> diagonal_max_statistic(cyclic_square(2))
        2
    """
    return int(np.bincount(square.diagonal()).max())


def constant_diagonal_square(n: int) -> LatinSquare:
    """L(i, j) = (j - i mod n) + 1; every diagonal cell holds 1."""
    idx = np.arange(n)
    return LatinSquare((idx[None, :] - idx[:, None]) % n + 1, validate=False)


def row_permutation_draw(n: int, rng: np.random.Generator) -> Dict:
    """One coupled draw: σ, the row-permuted square, and both statistics."""
    sigma = rng.permutation(n)
    square = constant_diagonal_square(n).permute_rows(sigma + 1)
    return {
        "sigma": sigma,
        "diagonal_multiplicity": int((np.asarray(square.diagonal()) == 1).sum()),
        "fixed_points": int((sigma == np.arange(n)).sum()),
        "diagonal_max": diagonal_max_statistic(square),
    }


def _tv_distance(table: pd.DataFrame) -> float:
    return 0.5 * float((table["empirical"] - table["reference"]).abs().sum())


def _fixed_points(cfg: StatsConfig) -> ExperimentReport:
    values = _parallel(lambda i, c: permutation_fixed_points(cfg.n, c, make_rng(cfg.seed, 10, i)),
                       cfg.samples, cfg.workers)
    exact = fixed_point_distribution(cfg.n)
    table = _histogram(values, range(cfg.n + 1), exact)
    tv = _tv_distance(table)
    return ExperimentReport(
        "fixed-points", cfg.kind, cfg.n, cfg.seed, cfg.samples, table,
        summary={"tv_distance": tv, "mean": float(values.mean())},
        verdicts={"tv_distance": {"passed": tv < cfg.tv_tolerance, "value": tv, "tolerance": cfg.tv_tolerance}},
    )


def _square_draws(cfg: StatsConfig, statistic: Callable[[LatinSquare], np.ndarray]) -> List[np.ndarray]:
    sampler = SamplerConfig(seed=cfg.seed, n=cfg.n)

    def draw(task: int) -> np.ndarray:
        return statistic(sample_latin_square(sampler, task=task))

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(draw, range(cfg.samples)))
    return [draw(task) for task in range(cfg.samples)]


def _diag_max(cfg: StatsConfig) -> ExperimentReport:
    values = np.array(_square_draws(cfg, lambda sq: np.array(diagonal_max_statistic(sq))))
    table = _histogram(values, range(1, cfg.n + 1))
    heuristic = math.log(cfg.n) / math.log(math.log(cfg.n)) if cfg.n > 2 else None
    return ExperimentReport(
        "diag-max", cfg.kind, cfg.n, cfg.seed, cfg.samples, table,
        summary={"mean": float(values.mean()), "max": int(values.max()), "log_n_over_log_log_n": heuristic},
    )


def _loops_per_colour(cfg: StatsConfig) -> ExperimentReport:
    draws = _square_draws(
        cfg, lambda sq: np.array(list(latin_to_digraph(sq).loop_counts().values()), dtype=np.int64)
    )
    per_colour = np.concatenate(draws)
    maxima = np.array([d.max() for d in draws])
    table = _histogram(maxima, range(cfg.n + 1))
    table["per_colour_count"] = _histogram(per_colour, range(cfg.n + 1))["count"]
    return ExperimentReport(
        "loops-per-colour", cfg.kind, cfg.n, cfg.seed, cfg.samples, table,
        summary={
            "mean_loops": float(per_colour.mean()),
            "mean_max_loops": float(maxima.mean()),
            "max_loops": int(maxima.max()),
            "colours_over_half_n": int((per_colour > cfg.n / 2).sum()),
        },
    )


def discrepancy_denominator(n: int, u1: np.ndarray, u2: np.ndarray, d: np.ndarray) -> np.ndarray:
    log_n = math.log(n) if n > 1 else 0.0
    return np.sqrt(u1 * u2 * d) * log_n + n * log_n ** 2


def _discrepancy(cfg: StatsConfig) -> ExperimentReport:
    G = latin_to_digraph(sample_latin_square(SamplerConfig(seed=cfg.seed, n=cfg.n)))

    def draw(worker: int, count: int) -> np.ndarray:
        rng = make_rng(cfg.seed, 11, worker)
        out = []
        for size in split_counts(count, max(1, math.ceil(count / 1000))):
            U1, U2, D = sample_triples(cfg.n, size, rng)
            e = evaluate_triples(G, U1, U2, D)
            s1, s2, sd = U1.sum(axis=1), U2.sum(axis=1), D.sum(axis=1)
            deviation = np.abs(e - s1 * s2 * sd / cfg.n)
            scale = discrepancy_denominator(cfg.n, s1, s2, sd)
            out.append(np.where(scale > 0, deviation / np.where(scale > 0, scale, 1), deviation))
        return np.concatenate(out)

    values = _parallel(draw, cfg.samples, cfg.workers)
    edges = np.linspace(0.0, max(1.0, float(values.max())), 21)
    counts, _ = np.histogram(values, bins=edges)
    table = pd.DataFrame({"value": edges[:-1], "count": counts})
    table["empirical"] = table["count"] / values.size
    worst = float(values.max())
    return ExperimentReport(
        "discrepancy", cfg.kind, cfg.n, cfg.seed, cfg.samples, table,
        summary={"max_normalised": worst, "mean_normalised": float(values.mean())},
        verdicts={"normalised_bound": {"passed": worst <= 1.0, "value": worst, "tolerance": 1.0}},
    )


def _row_permutation(cfg: StatsConfig) -> ExperimentReport:
    def draw(worker: int, count: int) -> np.ndarray:
        rng = make_rng(cfg.seed, 12, worker)
        rows = []
        for _ in range(count):
            result = row_permutation_draw(cfg.n, rng)
            rows.append((result["diagonal_multiplicity"], result["fixed_points"]))
        return np.array(rows, dtype=np.int64).reshape(-1, 2)

    pairs = _parallel(draw, cfg.samples, cfg.workers)
    mismatches = int((pairs[:, 0] != pairs[:, 1]).sum())
    table = _histogram(pairs[:, 0], range(cfg.n + 1), fixed_point_distribution(cfg.n))
    tv = _tv_distance(table)
    return ExperimentReport(
        "row-permutation", cfg.kind, cfg.n, cfg.seed, cfg.samples, table,
        summary={"mismatches": mismatches, "tv_distance": tv},
        verdicts={"coupling": {"passed": mismatches == 0, "value": mismatches, "tolerance": 0}},
    )


_KINDS = {
    "fixed-points": _fixed_points,
    "diag-max": _diag_max,
    "discrepancy": _discrepancy,
    "loops-per-colour": _loops_per_colour,
    "row-permutation": _row_permutation,
}


def run_experiment(cfg: StatsConfig, verbose: bool = False) -> ExperimentReport:
    """
    Run one seeded experiment.

    Args:
        cfg: Kind, order, sample count, seed, tolerance and worker count
        verbose: Print the verdicts

    Returns:
        ExperimentReport with the per-value table and verdicts
    """
    if verbose:
        print(f"[Stats] {cfg.kind}: n={cfg.n}, samples={cfg.samples}, workers={cfg.workers}")
    report = _KINDS[cfg.kind](cfg)
    if verbose:
        for name, verdict in report.verdicts.items():
            print(f"[Stats] {name}: value={verdict['value']}, tolerance={verdict['tolerance']}, "
                  f"{'pass' if verdict['passed'] else 'FAIL'}")
    return report


if __name__ == "__main__":
    print("=== Fixed points of uniform permutations ===")
    report = run_experiment(StatsConfig(kind="fixed-points", n=6, samples=100_000), verbose=True)
    print(report.table)

    print("\n=== Row-permutation coupling ===")
    run_experiment(StatsConfig(kind="row-permutation", n=7, samples=1_000), verbose=True)
