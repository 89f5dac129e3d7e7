"""
Configuration schemas for every latinlab command.

Schemas are pydantic models so a malformed config file is rejected before any work
starts. Environment fallbacks (LATINLAB_SEED, LATINLAB_VERBOSE) are read through
python-dotenv, so a local .env file works the same as exported variables.
"""
import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, root_validator, validator

from src import __version__

# Load environment variables
load_dotenv()


def env_seed(default: int = 0) -> int:
    """Seed from LATINLAB_SEED, falling back to the given default."""
    raw = os.getenv("LATINLAB_SEED")
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.strip())
    except ValueError:
        raise ValueError(f"LATINLAB_SEED must be an integer, got {raw!r}")


def env_verbose() -> bool:
    return os.getenv("LATINLAB_VERBOSE", "").strip().lower() in ("1", "true", "yes", "on")


class SamplerConfig(BaseModel):
    """Seeded sampling of Latin squares (k = n) and Latin rectangles (k < n)."""
    seed: int = 0
    n: int = Field(..., ge=1)
    k: Optional[int] = None
    burn_in_moves: Optional[int] = Field(None, ge=0, description="defaults to n^3")
    proposals_per_row: int = Field(64, ge=1)

    @root_validator(skip_on_failure=True)
    def _check_rectangle(cls, values):
        n, k = values.get("n"), values.get("k")
        if k is None:
            values["k"] = n
        elif not 1 <= k <= n:
            raise ValueError(f"rectangle height k={k} must satisfy 1 <= k <= n={n}")
        if values.get("burn_in_moves") is None:
            values["burn_in_moves"] = n ** 3
        return values


class CensusConfig(BaseModel):
    full_limit: int = Field(12, ge=1, description="largest order for full-transversal counting")
    hamilton_limit: int = Field(10, ge=1, description="largest order for Hamilton counting")
    threads: int = Field(1, ge=1)


class GadgetConfig(BaseModel):
    cap: Optional[int] = Field(100, ge=0, description="None means exhaustive")
    slack: float = Field(0.0, ge=0.0, description="upper-quasirandom slack")
    loop_threshold: Optional[int] = Field(None, ge=0, description="max loops per colour; asymptotically n/10^9")
    exhaustive_upper_limit: int = 14
    exhaustive_lower_limit: int = 10
    samples: int = Field(100_000, ge=1)


class AbsorberConfig(BaseModel):
    m: int = Field(1, ge=1)
    template: str = "complete"
    certification_limit: int = Field(8, ge=1, description="largest flexible-set size certified by brute force")
    absorber_path_length: int = Field(3, ge=1)
    link_path_length: int = Field(3, ge=1)
    gadget_cap: Optional[int] = Field(200, ge=1)
    bridge_cap: Optional[int] = Field(200, ge=1)
    retries: int = Field(20, ge=1)

    @validator("template")
    def _check_template(cls, value):
        parse_template_mode(value)
        return value


class PipelineConfig(BaseModel):
    """
    Desk-scale stand-ins for the asymptotic constants of the absorption argument.

    Each field description records the value used in the asymptotic regime.
    """
    seed: int = 0
    template_size: int = Field(2, ge=1, description="|A| of the template; 7m asymptotically")
    flexible_size: int = Field(2, ge=0, description="|A'|; 2m asymptotically")
    template_mode: str = "complete"
    absorber_path_length: int = Field(1, ge=1, description="completing path length; 3 asymptotically")
    link_path_length: int = Field(1, ge=1, description="T-absorber connector length; 3 asymptotically")
    connector_min_length: int = Field(1, ge=1)
    connector_max_length: int = Field(2, ge=1, description="flexible connector length; 4 asymptotically")
    component_exponent: float = Field(0.0, ge=0.0, le=1.0, description="forest stops at n^e components; 9/10")
    flexible_slack_exponent: float = Field(0.9, ge=0.0, le=1.0)
    flexible_window_exponent: float = Field(0.8, ge=0.0, le=1.0)
    flexible_retries: int = Field(50, ge=1)
    check_count: int = Field(20, ge=0)
    check_length: int = Field(4, ge=1, description="arcs per certified flexible connector; 4 asymptotically")
    check_threshold: Optional[int] = Field(
        None, ge=0, description="connector paths per check; None uses floor(p^6 n^2 / 10), n^(99/50) asymptotically"
    )
    gadget_cap: Optional[int] = Field(50, ge=1)
    bridge_cap: Optional[int] = Field(50, ge=1)
    quasirandom_samples: int = Field(2_000, ge=0)
    selection: str = "random"

    @validator("selection")
    def _check_selection(cls, value):
        if value not in ("random", "lexicographic"):
            raise ValueError("selection must be 'random' or 'lexicographic'")
        return value

    @validator("template_mode")
    def _check_mode(cls, value):
        parse_template_mode(value)
        return value

    @root_validator(skip_on_failure=True)
    def _check_sizes(cls, values):
        if values["flexible_size"] > values["template_size"]:
            raise ValueError("flexible_size cannot exceed template_size")
        if values["connector_min_length"] > values["connector_max_length"]:
            raise ValueError("connector_min_length cannot exceed connector_max_length")
        return values


class StatsConfig(BaseModel):
    kind: str = "fixed-points"
    n: int = Field(..., ge=1)
    samples: int = Field(..., ge=1)
    seed: int = 0
    tv_tolerance: float = 0.005
    workers: int = Field(1, ge=1)

    @validator("kind")
    def _check_kind(cls, value):
        kinds = ("fixed-points", "diag-max", "discrepancy", "loops-per-colour", "row-permutation")
        if value not in kinds:
            raise ValueError(f"kind must be one of {kinds}")
        return value


class RunConfig(BaseModel):
    """Everything needed to replay a CLI run; embedded in every artifact."""
    command: str
    seed: int = 0
    threads: int = Field(1, ge=1)
    verbose: bool = False
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    version: str = __version__

    class Config:
        extra = "forbid"


def parse_template_mode(mode: str):
    """
    Parse a template mode string.

    Examples:
        >>> parse_template_mode("complete")
        ('complete', None)
        >>> parse_template_mode("regular:3")
        ('regular', 3)
    """
    if mode == "complete":
        return "complete", None
    if mode.startswith("regular:"):
        try:
            degree = int(mode.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad template mode {mode!r}")
        if degree < 1:
            raise ValueError("template degree must be positive")
        return "regular", degree
    raise ValueError(f"template mode must be 'complete' or 'regular:D', got {mode!r}")
