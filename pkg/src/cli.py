"""
latinlab command line.

    python -m src.cli generate --n 7 --count 10 --out squares.jsonl
    python -m src.cli census --in square.txt --report census.json
    python -m src.cli gadgets --in square.txt --mode absorbing --roots 1,2
    python -m src.cli gadgets --in square.txt --mode quasirandom --colours 4
    python -m src.cli absorber --in square.txt --m 1 --out tabsorber.json
    python -m src.cli pipeline --planted 54 --out run.json
    python -m src.cli stats --kind fixed-points --n 6 --samples 1000000
    python -m src.cli verify --in square.txt

Exit status: 0 success, 1 domain failure, 2 usage or malformed input.
"""
import argparse
import sys
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from src.absorber.t_absorber import embed_t_absorber
from src.absorber.template import build_rmbg
from src.census.report import conjecture_report
from src.core.digraph import latin_to_digraph, restrict_to_colours
from src.core.errors import CapacityError, InvalidStructureError, SearchExhaustedError
from src.core.latin import LatinSquare
from src.gadgets.absorbing import find_absorbing_gadgets
from src.gadgets.bridges import count_distinguishable_bridges, equitable_partition
from src.gadgets.bridging import find_bridging_gadgets
from src.gadgets.quasirandom import lower_quasirandom_check, upper_quasirandom_check
from src.gadgets.spread import is_well_spread
from src.gadgets.twist import twist_walk
from src.pipeline.runner import run_pipeline, run_planted_pipeline
from src.sampler.latin_sampler import sample_latin_square
from src.sampler.rectangle import sample_rectangle_rows
from src.stats.experiments import run_experiment
from src.utils.config import (
    AbsorberConfig, CensusConfig, GadgetConfig, PipelineConfig, RunConfig, SamplerConfig, StatsConfig,
    env_seed, env_verbose,
)
from src.utils.io import dumps, read_grid, read_json, read_square, write_artifact, write_jsonl
from src.utils.rng import make_rng

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class DomainFailure(Exception):
    """A command ran but its result is a failure (pipeline stall, invalid square)."""


def _pair(text: str) -> Tuple[int, int]:
    try:
        first, second = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated integers, got {text!r}")
    return first, second


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latinlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--seed", type=int, default=None, help="global seed (LATINLAB_SEED fallback)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample Latin squares or rectangles as JSONL")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("census", help="transversal and rainbow cycle census of one square")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--limit-n", type=int, default=None)
    p.add_argument("--report", default=None)

    p = sub.add_parser("gadgets", help="find gadgets and bridges, or run a twist walk")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--mode", choices=["absorbing", "bridging", "bridges", "twist-walk", "quasirandom"], required=True)
    p.add_argument("--roots", type=_pair, default=None, help="v,c or y,z")
    p.add_argument("--cap", type=int, default=100)
    p.add_argument("--colours", type=int, default=None, help="restrict to colours 1..K")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--loop-threshold", type=int, default=None, help="twist-walk: max loops per switched colour")
    p.add_argument("--samples", type=int, default=100_000, help="quasirandom: sampled triples or pairs")
    p.add_argument("--report", default=None)

    p = sub.add_parser("absorber", help="embed a T-absorber")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--template", default="complete")
    p.add_argument("--roots-file", default=None)
    p.add_argument("--path-length", type=int, default=3)
    p.add_argument("--link-length", type=int, default=3)
    p.add_argument("--out", default=None)

    p = sub.add_parser("pipeline", help="construct a rainbow Hamilton cycle")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="input")
    source.add_argument("--planted", type=int, metavar="N", help="build a planted instance of order N")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("stats", help="Monte Carlo experiments")
    p.add_argument("--kind", required=True,
                   choices=["fixed-points", "diag-max", "discrepancy", "loops-per-colour", "row-permutation"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=0.005)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--html", default=None)

    p = sub.add_parser("verify", help="check that a grid is a Latin square")
    p.add_argument("--in", dest="input", required=True)
    return parser


def _emit(path: Optional[str], payload: Dict, run: RunConfig) -> None:
    if path:
        write_artifact(path, payload, run.dict())
        print(f"[CLI] wrote {path}")
    else:
        print(dumps(payload))


def cmd_generate(args, run: RunConfig) -> int:
    cfg = SamplerConfig(seed=run.seed, n=args.n, k=args.k, burn_in_moves=args.burn_in)

    def records():
        for task in range(args.count):
            if cfg.k == cfg.n:
                square = sample_latin_square(cfg, task=task, verbose=run.verbose)
                yield {"task": task, "n": cfg.n, "k": cfg.k, "grid": square.to_list(), "config": run.dict()}
            else:
                rows = sample_rectangle_rows(cfg.n, cfg.k, make_rng(cfg.seed, 2, task), cfg.proposals_per_row)
                yield {"task": task, "n": cfg.n, "k": cfg.k, "grid": rows.tolist(), "config": run.dict()}

    count = write_jsonl(args.out, records())
    print(f"[Generate] {count} objects -> {args.out}")
    return EXIT_OK


def cmd_census(args, run: RunConfig) -> int:
    square = read_square(args.input)
    cfg = CensusConfig(threads=run.threads)
    if args.limit_n is not None:
        cfg = CensusConfig(full_limit=args.limit_n, hamilton_limit=args.limit_n, threads=run.threads)
    report = conjecture_report(square, cfg, verbose=run.verbose)
    _emit(args.report, report.to_dict(), run)
    return EXIT_OK


def cmd_gadgets(args, run: RunConfig) -> int:
    cfg = GadgetConfig(cap=args.cap, loop_threshold=args.loop_threshold, samples=args.samples)
    G = latin_to_digraph(read_square(args.input))
    H = restrict_to_colours(G, range(1, args.colours + 1)) if args.colours else G
    if args.mode == "quasirandom":
        upper = upper_quasirandom_check(H, cfg.slack, cfg.exhaustive_upper_limit, samples=cfg.samples, seed=run.seed)
        mode = "exhaustive" if G.n <= cfg.exhaustive_lower_limit else "sampled"
        lower = lower_quasirandom_check(G, mode=mode, samples=cfg.samples, seed=run.seed,
                                        exhaustive_limit=cfg.exhaustive_lower_limit)
        _emit(args.report, {"mode": args.mode, "upper": upper, "lower": lower}, run)
        return EXIT_OK

    if args.roots is None:
        raise ValueError(f"--roots is required for --mode {args.mode}")
    first, second = args.roots
    if args.mode == "absorbing":
        found = find_absorbing_gadgets(G, first, second, cap=cfg.cap)
        spread = is_well_spread(found, "absorbing", G.n) if found else None
        payload = {"mode": args.mode, "v": first, "c": second, "count": len(found),
                   "gadgets": [g.to_dict() for g in found], "spread": spread}
        _emit(args.report, payload, run)
        return EXIT_OK
    if args.mode == "bridging":
        found = find_bridging_gadgets(G, first, second, cap=cfg.cap)
        spread = is_well_spread(found, "bridging", G.n) if found else None
        payload = {"mode": args.mode, "y": first, "z": second, "count": len(found),
                   "gadgets": [g.to_dict() for g in found], "spread": spread}
        _emit(args.report, payload, run)
        return EXIT_OK

    partition = equitable_partition(H.colours)
    if args.mode == "bridges":
        r, bridges = count_distinguishable_bridges(H, first, second, partition)
        payload = {"mode": args.mode, "y": first, "z": second, "r": r, "count": len(bridges),
                   "partition": [list(p) for p in partition], "bridges": [b.to_dict() for b in bridges]}
        _emit(args.report, payload, run)
        return EXIT_OK

    trajectory = twist_walk(H, first, second, partition, args.steps, make_rng(run.seed, 8),
                            cap=cfg.cap, loop_threshold=cfg.loop_threshold, verbose=run.verbose)
    if args.report:
        write_jsonl(args.report, trajectory)
        print(f"[CLI] wrote {len(trajectory)} steps -> {args.report}")
    else:
        for record in trajectory:
            print(dumps(record))
    return EXIT_OK


def cmd_absorber(args, run: RunConfig) -> int:
    cfg = AbsorberConfig(m=args.m, template=args.template, absorber_path_length=args.path_length,
                         link_path_length=args.link_length)
    G = latin_to_digraph(read_square(args.input))
    rng = make_rng(run.seed, 9)
    template = build_rmbg(cfg.m, cfg.template, rng, cfg.certification_limit, cfg.retries)
    if args.roots_file:
        roots = read_json(args.roots_file)
        U, D = roots["U"], roots["D"]
        V_flex, C_flex = roots["V_flex"], roots["C_flex"]
    else:
        U = sorted(int(v) for v in rng.choice(np.arange(1, G.n + 1), size=template.size, replace=False))
        D = sorted(int(c) for c in rng.choice(np.arange(1, G.n + 1), size=template.size, replace=False))
        V_flex, C_flex = U[:len(template.flexible_a)], D[:len(template.flexible_b)]
    tabs = embed_t_absorber(G, template, U, D, V_flex, C_flex,
                            path_length=cfg.absorber_path_length, link_length=cfg.link_path_length,
                            gadget_cap=cfg.gadget_cap, bridge_cap=cfg.bridge_cap, verbose=run.verbose)
    _emit(args.out, tabs.to_dict(), run)
    return EXIT_OK


def cmd_pipeline(args, run: RunConfig) -> int:
    overrides = read_json(args.config) if args.config else {}
    overrides.setdefault("seed", run.seed)
    cfg = PipelineConfig(**overrides)
    if args.planted is not None:
        _, result = run_planted_pipeline(args.planted, cfg, verbose=run.verbose)
    else:
        result = run_pipeline(latin_to_digraph(read_square(args.input)), cfg, verbose=run.verbose)
    for line in result["trace"]:
        print(f"[Pipeline] {line}")
    _emit(args.out, result, run)
    if result["status"] != "success":
        raise DomainFailure(f"pipeline failed at stage {result['stage']}: {result['error']}")
    return EXIT_OK


def cmd_stats(args, run: RunConfig) -> int:
    cfg = StatsConfig(kind=args.kind, n=args.n, samples=args.samples, seed=run.seed,
                      tv_tolerance=args.tolerance, workers=run.threads)
    report = run_experiment(cfg, verbose=run.verbose)
    if args.csv:
        report.to_csv(args.csv)
    if args.html:
        report.to_html(args.html)
    _emit(args.out, report.to_dict(), run)
    return EXIT_OK


def cmd_verify(args, run: RunConfig) -> int:
    grid = read_grid(args.input)
    try:
        LatinSquare.check_grid(np.array(grid, dtype=np.int64))
    except InvalidStructureError as error:
        raise DomainFailure(f"not a Latin square: {error}")
    print(f"[Verify] {args.input}: valid Latin square of order {len(grid)}")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "census": cmd_census,
    "gadgets": cmd_gadgets,
    "absorber": cmd_absorber,
    "pipeline": cmd_pipeline,
    "stats": cmd_stats,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        seed = args.seed if args.seed is not None else env_seed()
        params = {k: v for k, v in vars(args).items() if k not in ("seed", "threads", "verbose", "command")}
        run = RunConfig(
            command=args.command, seed=seed, threads=args.threads, verbose=args.verbose or env_verbose(),
            input_path=params.get("input"), output_path=params.get("out") or params.get("report"),
            params=params,
        )
        return COMMANDS[args.command](args, run)
    except (DomainFailure, InvalidStructureError, CapacityError, SearchExhaustedError) as error:
        print(f"[Error] {error}", file=sys.stderr)
        return EXIT_FAILURE
    except (ValueError, KeyError, OSError) as error:
        print(f"[Error] {error}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
