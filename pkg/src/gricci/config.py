# -*- encoding: utf-8 -*-
"""
gricci Configuration - tolerances, run configuration and environment defaults.

Usage:
    from gricci.config import RunConfig, Tolerances

    cfg = RunConfig.from_file("run.json").with_overrides(seed=3, threads=4)
    cfg.config_hash()
"""

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from gricci.exceptions import ConfigError


def default_threads() -> int:
    """Worker count from GRICCI_THREADS, else the available parallelism."""
    value = os.environ.get("GRICCI_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise ConfigError(f"GRICCI_THREADS must be an integer, got {value!r}", ["GRICCI_THREADS"])
    return os.cpu_count() or 1


def default_batch_size() -> int:
    return int(os.environ.get("GRICCI_BATCH", "20000"))


def default_out_dir() -> str:
    return os.environ.get("GRICCI_OUT", "runs")


@dataclass(frozen=True)
class Tolerances:
    """
    Numerical tolerances shared by the validators and the flow integrator.

    Attributes:
        algebra: Max residual for antisymmetry and Jacobi checks
        metric: Max residual for the generalized metric checks
        flow: Max invariant drift accepted after a flow step
        singular_cond: Condition number above which a pairing is singular
    """
    algebra: float = 1e-10
    metric: float = 1e-10
    flow: float = 1e-10
    singular_cond: float = 1e12

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_TOLERANCES = Tolerances()


@dataclass
class RunConfig:
    """
    Configuration of one CLI run.

    Only keys declared here are accepted; anything else in a config file is
    rejected before any computation starts.
    """
    subcommand: str = ""
    algebra: str = "su2_double"
    level: float = 1.0
    metric: str = "canonical"
    courant: Optional[str] = None
    graph: str = "eye"
    x: list[float] = field(default_factory=list)
    epsilon: float = 1e-3
    epsilons: list[float] = field(default_factory=list)
    n: int = 1_000_000
    seed: int = 0
    ds: float = 0.01
    ds_floor: float = 1e-8
    hbar: float = 1.0
    s_span: list[float] = field(default_factory=lambda: [0.0, 1.0])
    scheme: str = "rkmk4"
    direction: str = "toward_ir"
    l1: str = "1"
    l2: str = "2"
    pair: str = "1,1"
    vertices: int = 3
    samples: int = 16
    fix_leaves: bool = True
    budget: Optional[float] = None
    threads: int = field(default_factory=default_threads)
    batch_size: int = field(default_factory=default_batch_size)
    out: str = field(default_factory=default_out_dir)
    tolerances: Tolerances = DEFAULT_TOLERANCES

    @classmethod
    def field_names(cls) -> set[str]:
        return {f.name for f in dataclasses.fields(cls)}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        """
        Build a RunConfig from a plain dictionary.

        Args:
            data: Mapping of config keys, e.g. loaded from JSON

        Returns:
            RunConfig

        Raises:
            ConfigError: On unknown keys or a malformed tolerances block
        """
        unknown = sorted(set(data) - cls.field_names())
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}", unknown)
        values = dict(data)
        if "tolerances" in values and isinstance(values["tolerances"], dict):
            tol_fields = {f.name for f in dataclasses.fields(Tolerances)}
            bad = sorted(set(values["tolerances"]) - tol_fields)
            if bad:
                raise ConfigError(f"unknown tolerance keys: {', '.join(bad)}", bad)
            values["tolerances"] = Tolerances(**values["tolerances"])
        return cls(**values)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return cls.from_dict(data)

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Return a copy with every non-None override applied."""
        unknown = sorted(set(overrides) - self.field_names())
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}", unknown)
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        """sha256 of the canonical JSON form, excluding worker count and output location."""
        d = self.to_dict()
        d.pop("threads", None)
        d.pop("out", None)
        canonical = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
