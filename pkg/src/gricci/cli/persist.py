# -*- encoding: utf-8 -*-
"""
gricci Run Persistence - run directories, manifests and result files.

Each run writes into <out>/<subcommand>-<config hash prefix>/:

    manifest.json    command, argv, config, config hash, versions, seed, wall time
    result.json      scalar and matrix results (deterministic for a config)
    trajectory.csv   flow trajectories only
    metric.json      flow only: algebra and final tau as a structure document

Usage:
    from gricci.cli.persist import RunRecorder

    recorder = RunRecorder(config, argv)
    recorder.write_result(result)
    recorder.write_manifest(wall_time=1.2)
"""

import csv
import json
import logging
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from importlib import metadata
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from gricci.config import RunConfig

logger = logging.getLogger(__name__)

LIBRARIES = ("gricci", "numpy", "scipy", "networkx", "sympy", "hio", "lark")


def to_jsonable(value: Any) -> Any:
    """Plain JSON form of results: arrays to lists, complex to [re, im], fractions to strings."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return value.real if value.imag == 0 else [value.real, value.imag]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    return value


def library_versions() -> dict[str, Optional[str]]:
    versions: dict[str, Optional[str]] = {}
    for name in LIBRARIES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None
    return versions


class RunRecorder:
    """
    Writes the files of one run.

    Attributes:
        config: Effective run configuration
        argv: Command line that produced it
        directory: Run directory
    """

    def __init__(self, config: RunConfig, argv: Sequence[str]):
        self.config = config
        self.argv = list(argv)
        self.config_hash = config.config_hash()
        self.directory = Path(config.out) / f"{config.subcommand}-{self.config_hash[:12]}"
        self.outputs: list[str] = []
        self.started = datetime.now(timezone.utc).isoformat()

    def _path(self, name: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        self.outputs.append(name)
        return self.directory / name

    def write_result(self, result: dict) -> Path:
        path = self._path("result.json")
        path.write_text(json.dumps(to_jsonable(result), indent=2, sort_keys=True) + "\n")
        return path

    def write_document(self, text: str) -> Path:
        path = self._path("metric.json")
        path.write_text(text)
        return path

    def write_trajectory(self, header: Sequence[str], rows: Sequence[Sequence[float]]) -> Path:
        path = self._path("trajectory.csv")
        with path.open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            writer.writerows([[repr(float(v)) for v in row] for row in rows])
        return path

    def write_manifest(self, wall_time: float, status: str = "ok", error: Optional[dict] = None) -> Path:
        manifest = {
            "command": self.config.subcommand,
            "argv": self.argv,
            "config": to_jsonable(self.config.to_dict()),
            "config_hash": self.config_hash,
            "versions": library_versions(),
            "seed": self.config.seed,
            "started": self.started,
            "wall_time": wall_time,
            "status": status,
            "outputs": list(self.outputs),
        }
        if error is not None:
            manifest["error"] = error
        path = self.directory / "manifest.json"
        self.directory.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        logger.info("wrote manifest %s", path)
        return path
