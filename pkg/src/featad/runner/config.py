"""Declarative experiment description, loaded from and saved to JSON."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from featad.errors import ConfigError, UnknownMethod
from featad.evaluation.records import DETECTORS, REPRESENTATIONS
from featad.normalize import canonical_method

LOADERS = ("csv", "ucr")


@dataclass(frozen=True)
class Curation:
    max_contamination: float = 0.5
    corr_threshold: float = 0.3


@dataclass(frozen=True)
class DatasetSpec:
    """A named collection of series: one file, or every matching file in a directory."""

    name: str
    path: str
    loader: str = "csv"
    curation: Curation | None = None
    value_column: str = "value"
    label_column: str = "label"


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple[DatasetSpec, ...]
    window_sizes: tuple[int, ...] = (32, 64, 128, 256)
    stride: int = 1
    representations: tuple[str, ...] = REPRESENTATIONS
    detectors: tuple[str, ...] = DETECTORS
    row_normalization: tuple[str, ...] = ("none",)
    feature_normalization: bool = False
    expensive_features: bool = False
    seed: int = 0
    parallelism: int | str = 1
    output_dir: str = "results"
    if_trees: int = 100
    lof_k: int = 20
    groups: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.datasets:
            raise ConfigError("config lists no datasets")
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate dataset names in {names}")
        for d in self.datasets:
            if d.loader not in LOADERS:
                raise ConfigError(f"dataset {d.name!r}: loader must be one of {LOADERS}")
        if not self.window_sizes or any(int(w) < 2 for w in self.window_sizes):
            raise ConfigError(f"window_sizes must be non-empty and each >= 2, got {self.window_sizes}")
        if self.stride < 1:
            raise ConfigError(f"stride must be >= 1, got {self.stride}")
        if not self.representations or set(self.representations) - set(REPRESENTATIONS):
            raise ConfigError(f"representations must be a non-empty subset of {REPRESENTATIONS}")
        if not self.detectors or set(self.detectors) - set(DETECTORS):
            raise ConfigError(f"detectors must be a non-empty subset of {DETECTORS}")
        if not self.row_normalization:
            raise ConfigError("row_normalization must name at least one method")
        try:
            norms = tuple(canonical_method(m) for m in self.row_normalization)
        except UnknownMethod as exc:
            raise ConfigError(str(exc)) from None
        object.__setattr__(self, "row_normalization", norms)
        if self.parallelism != "auto" and (not isinstance(self.parallelism, int) or self.parallelism < 1):
            raise ConfigError(f"parallelism must be a positive integer or 'auto', got {self.parallelism!r}")

    @property
    def workers(self) -> int:
        if self.parallelism == "auto":
            return os.cpu_count() or 1
        return int(self.parallelism)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["datasets"] = [
            {k: v for k, v in d.items() if not (k == "curation" and v is None)} for d in data["datasets"]
        ]
        for key in ("window_sizes", "representations", "detectors", "row_normalization"):
            data[key] = list(data[key])
        data["groups"] = {k: list(v) for k, v in self.groups.items()}
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        data = dict(data)
        try:
            datasets = tuple(_dataset_from_dict(d) for d in data.pop("datasets"))
        except KeyError as exc:
            raise ConfigError(f"missing config key {exc}") from None
        known = set(cls.__dataclass_fields__) - {"datasets"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        norms = data.get("row_normalization", ("none",))
        if isinstance(norms, str):
            norms = (norms,)
        for key in ("window_sizes", "representations", "detectors"):
            if key in data:
                data[key] = tuple(data[key])
        if "groups" in data:
            data["groups"] = {k: tuple(v) for k, v in data["groups"].items()}
        data["row_normalization"] = tuple(norms)
        try:
            return cls(datasets=datasets, **data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)


def _dataset_from_dict(d: dict[str, Any]) -> DatasetSpec:
    d = dict(d)
    cur = d.pop("curation", None)
    try:
        return DatasetSpec(curation=Curation(**cur) if cur is not None else None, **d)
    except TypeError as exc:
        raise ConfigError(f"bad dataset entry: {exc}") from None


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a JSON config; relative dataset/output paths resolve against the file's directory."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    cfg = ExperimentConfig.from_json(text)
    base = path.resolve().parent

    def resolve(p: str) -> str:
        return p if Path(p).is_absolute() else str(base / p)

    data = cfg.to_dict()
    for d in data["datasets"]:
        d["path"] = resolve(d["path"])
    data["output_dir"] = resolve(data["output_dir"])
    return ExperimentConfig.from_dict(data)


def save_config(cfg: ExperimentConfig, path: str | Path) -> None:
    Path(path).write_text(cfg.to_json() + "\n", encoding="utf-8")


def run_plan(cfg: ExperimentConfig) -> list[tuple]:
    """Every (dataset, path, loader, W, normalization, representation, detector) combination, in run order."""
    return [
        (d.name, d.path, d.loader, w, norm, rep, det)
        for d in cfg.datasets
        for w in cfg.window_sizes
        for norm in cfg.row_normalization
        for rep in cfg.representations
        for det in cfg.detectors
    ]
