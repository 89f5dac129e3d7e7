"""
End-to-end rainbow Hamilton cycle construction.
Flexible sets -> T-absorber -> path forest -> connectors and absorption.
"""
from typing import Callable, Dict, Iterable, Optional, Set, Tuple

from src.absorber.t_absorber import embed_t_absorber
from src.absorber.template import build_template
from src.core.digraph import ColouredDigraph
from src.core.errors import CapacityError, InvalidStructureError, SearchExhaustedError
from src.gadgets.quasirandom import lower_quasirandom_check
from src.pipeline.flexible import FlexibleSets, choose_flexible_sets
from src.pipeline.forest import forest_count_report, grow_path_forest
from src.pipeline.instances import PlantedInstance, construct_planted_instance
from src.pipeline.linking import link_and_absorb
from src.utils.config import PipelineConfig
from src.utils.rng import make_rng


def _failure(stage: str, error: Exception, trace, result: Dict) -> Dict:
    trace.append(f"✗ {stage} failed: {error}")
    result.update({"status": "failed", "stage": stage, "error": str(error), "trace": trace})
    if isinstance(error, SearchExhaustedError):
        result["diagnostics"] = error.to_dict()
    return result


def _pick_roots(n: int, size: int, flexible: Set[int], rng) -> Set[int]:
    others = [v for v in range(1, n + 1) if v not in flexible]
    extra = size - len(flexible)
    if extra > len(others):
        raise ValueError(f"cannot pick {size} roots among {n}")
    return set(flexible) | {int(v) for v in rng.choice(others, size=extra, replace=False)}


def run_pipeline(G: ColouredDigraph, cfg: Optional[PipelineConfig] = None,
                 roots: Optional[Tuple[Iterable[int], Iterable[int]]] = None,
                 flexible: Optional[Tuple[Iterable[int], Iterable[int]]] = None,
                 gadget_source: Optional[Callable] = None,
                 bridge_source: Optional[Callable] = None,
                 path_source: Optional[Callable] = None,
                 verbose: bool = False) -> Dict:
    """
    Try to build a rainbow directed Hamilton cycle of G.

    Stage failures never raise: the result records the stage that stopped the run.

    Args:
        G: Coloured digraph of a Latin square
        cfg: Pipeline configuration
        roots: Optional (U, D) root vertices and colours
        flexible: Optional (V', C'); chosen by choose_flexible_sets when omitted
        gadget_source: Optional (v, c) -> absorbing gadgets
        bridge_source: Optional (y, z) -> bridging gadgets
        path_source: Optional (tail, head) -> completing paths and links to try first
        verbose: Print stage progress

    Returns:
        {"status": "success"|"failed", "stage", "error", "trace", "config",
         "flexible", "t_absorber", "forest", "forest_counts", "cycle", "warnings"}
    """
    cfg = cfg or PipelineConfig()
    n = G.n
    trace = []
    result: Dict = {
        "status": "running", "stage": None, "error": None, "config": cfg.dict(), "n": n,
        "flexible": None, "t_absorber": None, "forest": None, "forest_counts": None,
        "cycle": None, "warnings": [],
    }
    rng = make_rng(cfg.seed, 7)

    if cfg.quasirandom_samples:
        check = lower_quasirandom_check(G, mode="sampled", samples=cfg.quasirandom_samples, seed=cfg.seed)
        if not check["holds"]:
            message = "G failed the sampled lower-quasirandom check"
            print(f"[Warning] {message}")
            result["warnings"].append(message)

    # Step 1: flexible sets
    trace.append("Step 1: Choosing flexible vertex and colour sets")
    try:
        if flexible is None:
            chosen = choose_flexible_sets(G, cfg, verbose=verbose)
        else:
            chosen = FlexibleSets(set(flexible[0]), set(flexible[1]), 1.0, 0)
        result["flexible"] = chosen.to_dict()
        trace.append(f"✓ |V'| = |C'| = {len(chosen.vertices)}")
    except (SearchExhaustedError, ValueError) as error:
        return _failure("flexible", error, trace, result)

    # Step 2: T-absorber
    trace.append("Step 2: Embedding the T-absorber")
    try:
        template = build_template(cfg.template_size, cfg.flexible_size, cfg.template_mode, rng)
        if roots is None:
            U = _pick_roots(n, template.size, chosen.vertices, rng)
            D = _pick_roots(n, template.size, chosen.colours, rng)
        else:
            U, D = set(roots[0]), set(roots[1])
        tabs = embed_t_absorber(
            G, template, U, D, chosen.vertices, chosen.colours,
            path_length=cfg.absorber_path_length, link_length=cfg.link_path_length,
            gadget_cap=cfg.gadget_cap, bridge_cap=cfg.bridge_cap,
            gadget_source=gadget_source, bridge_source=bridge_source, path_source=path_source,
            verbose=verbose,
        )
        result["t_absorber"] = tabs.to_dict()
        result["warnings"].extend(tabs.warnings)
        trace.append(f"✓ {len(tabs.absorbers)} absorbers on {len(tabs.vertices())} vertices, "
                     f"{len(tabs.colours())} colours")
    except (SearchExhaustedError, CapacityError, InvalidStructureError, ValueError) as error:
        return _failure("embed", error, trace, result)

    # Step 3: path forest
    trace.append("Step 3: Growing a rainbow path forest outside the absorber")
    grown = grow_path_forest(G, tabs.vertices(), tabs.colours(), cfg.component_exponent,
                             cfg.selection, rng, verbose=verbose)
    result["forest"] = grown.to_dict()
    result["forest_counts"] = forest_count_report(grown.choice_counts, n, len(tabs.vertices()))
    trace.append(f"✓ {grown.forest.component_count} components after {len(grown.forest.arcs)} arcs"
                 + (" (stalled)" if grown.stalled else ""))
    if grown.stalled:
        return _failure("forest", SearchExhaustedError(
            f"forest stalled at {grown.forest.component_count} components (target {grown.target})",
            stage="forest", index=grown.forest.component_count, resource="arc",
        ), trace, result)

    # Step 4: connectors and absorption
    trace.append("Step 4: Linking components through the flexible sets")
    try:
        linked = link_and_absorb(G, tabs, grown.forest, cfg, verbose=verbose)
    except (SearchExhaustedError, InvalidStructureError, ValueError) as error:
        return _failure("link", error, trace, result)
    cycle = linked.pop("cycle")
    result["cycle"] = cycle.to_dict()
    result["linking"] = linked
    trace.append(f"✓ Rainbow Hamilton cycle through all {n} vertices")
    result.update({"status": "success", "stage": "done", "trace": trace})
    if verbose:
        print(f"[Pipeline] success: {len(linked['connectors'])} connectors, borrowed {linked['X']}")
    return result


def run_planted_pipeline(n: int, cfg: Optional[PipelineConfig] = None, verbose: bool = False,
                         build: Callable[..., PlantedInstance] = construct_planted_instance
                         ) -> Tuple[Optional[PlantedInstance], Dict]:
    """
    Build a planted instance of order n and run the pipeline on it with the
    planted roots, flexible sets and inventory.

    A square that cannot be completed is reported as a failed run at stage
    "plant" with instance None.

    Args:
        n: Order of the planted square
        cfg: Pipeline configuration
        verbose: Print stage progress
        build: (n, cfg, seed=..., verbose=...) -> PlantedInstance

    Raises:
        ValueError: n outside the planted range for cfg
    """
    cfg = cfg or PipelineConfig()
    trace = ["Step 0: Planting a T-absorber, a path and connectors"]
    try:
        instance = build(n, cfg, seed=cfg.seed, verbose=verbose)
    except SearchExhaustedError as error:
        result: Dict = {"status": "running", "stage": None, "error": None, "config": cfg.dict(), "n": n,
                        "cycle": None, "warnings": []}
        return None, _failure("plant", error, trace, result)
    result = run_pipeline(instance.digraph, cfg, roots=instance.roots, flexible=instance.flexible,
                          gadget_source=instance.gadget_source, bridge_source=instance.bridge_source,
                          path_source=instance.path_source, verbose=verbose)
    result["trace"] = trace + [f"✓ Planted square of order {n}"] + result["trace"]
    result["square"] = instance.square.to_list()
    return instance, result
