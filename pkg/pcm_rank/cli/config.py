"""Run configuration of the ``pcm-rank rank`` command.

Values come from three layers: command-line flags override a JSON file given
with ``--config``, which overrides the defaults below. The default output
directory is read from ``PCM_RANK_OUTPUT_DIR`` when set.
"""

import enum
import json
import os
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from marshmallow import RAISE, Schema, ValidationError, fields, post_load, validate, validates_schema

from ..error.exceptions import ConfigError
from ..pcm.scales import BUILTIN_SCALE_NAMES
from ..solvers.settings import DEFAULT_SETTINGS, SolverSettings

OUTPUT_DIR_ENV = "PCM_RANK_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "pcm-rank-output"


class Method(enum.StrEnum):
    """Ranking methods the pipeline can run."""

    LLSM = "llsm"
    EM = "em"
    OFFICIAL = "official"
    SONNEBORN_BERGER = "sonneborn-berger"
    BUCHHOLZ = "buchholz"
    MIX = "mix"
    START = "start"


class Metric(enum.StrEnum):
    TAU = "tau"
    SPEARMAN = "spearman"


class OutputFormat(enum.StrEnum):
    CSV = "csv"
    JSON = "json"


WEIGHT_METHODS = (Method.LLSM, Method.EM)
DEFAULT_METHODS = (
    Method.LLSM,
    Method.EM,
    Method.OFFICIAL,
    Method.SONNEBORN_BERGER,
    Method.BUCHHOLZ,
    Method.MIX,
)


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR


@dataclass(frozen=True)
class RunConfig:
    """Everything one pipeline run needs."""

    input: Path
    roster: Path | None = None
    scales: tuple[str, ...] = BUILTIN_SCALE_NAMES
    custom_scales: tuple[Path, ...] = ()
    em_scales: tuple[str, ...] = ("C",)
    methods: tuple[Method, ...] = DEFAULT_METHODS
    metrics: tuple[Metric, ...] = (Metric.TAU, Metric.SPEARMAN)
    mds: bool = False
    mds_dims: int = 2
    mds_metric: Metric = Metric.TAU
    output_dir: Path = field(default_factory=lambda: Path(default_output_dir()))
    formats: tuple[OutputFormat, ...] = (OutputFormat.CSV, OutputFormat.JSON)
    settings: SolverSettings = DEFAULT_SETTINGS
    jobs: int = 1
    dump_completion: bool = False
    plot_data: bool = False

    def wants(self, method: Method) -> bool:
        return method in self.methods

    def to_dict(self) -> dict[str, Any]:
        """Manifest form; the output directory is left out so that runs compare byte for byte."""
        return {
            "input": str(self.input),
            "roster": None if self.roster is None else str(self.roster),
            "scales": list(self.scales),
            "custom_scales": [str(path) for path in self.custom_scales],
            "em_scales": list(self.em_scales),
            "methods": [str(method) for method in self.methods],
            "metrics": [str(metric) for metric in self.metrics],
            "mds": self.mds,
            "mds_dims": self.mds_dims,
            "mds_metric": str(self.mds_metric),
            "formats": [str(fmt) for fmt in self.formats],
            "settings": self.settings.to_dict(),
            "jobs": self.jobs,
            "dump_completion": self.dump_completion,
            "plot_data": self.plot_data,
        }


def _choices(values: Any) -> list[str]:
    return [str(value) for value in values]


class RunConfigSchema(Schema):
    """Validates the merged configuration and builds a RunConfig."""

    class Meta:
        unknown = RAISE

    input = fields.String(required=True, validate=validate.Length(min=1))
    roster = fields.String(allow_none=True, load_default=None)
    scales = fields.List(
        fields.String(),
        load_default=lambda: list(BUILTIN_SCALE_NAMES),
        validate=validate.ContainsOnly(BUILTIN_SCALE_NAMES),
    )
    custom_scales = fields.List(fields.String(), load_default=list)
    em_scales = fields.List(fields.String(validate=validate.Length(min=1)), load_default=lambda: ["C"])
    methods = fields.List(
        fields.String(),
        load_default=lambda: _choices(DEFAULT_METHODS),
        validate=[validate.Length(min=1, error="Select at least one method."), validate.ContainsOnly(_choices(Method))],
    )
    metrics = fields.List(
        fields.String(), load_default=lambda: _choices(Metric), validate=validate.ContainsOnly(_choices(Metric))
    )
    mds = fields.Boolean(load_default=False)
    mds_dims = fields.Integer(load_default=2, validate=validate.OneOf([1, 2]))
    mds_metric = fields.String(load_default=str(Metric.TAU), validate=validate.OneOf(_choices(Metric)))
    output_dir = fields.String(load_default=default_output_dir, validate=validate.Length(min=1))
    formats = fields.List(
        fields.String(),
        load_default=lambda: _choices(OutputFormat),
        validate=[validate.Length(min=1), validate.ContainsOnly(_choices(OutputFormat))],
    )
    em_sweep_cap = fields.Integer(load_default=DEFAULT_SETTINGS.em_sweep_cap, validate=validate.Range(min=1))
    em_tolerance = fields.Float(
        load_default=DEFAULT_SETTINGS.em_tolerance, validate=validate.Range(min=0, min_inclusive=False)
    )
    eigen_tolerance = fields.Float(
        load_default=DEFAULT_SETTINGS.eigen_tolerance, validate=validate.Range(min=0, min_inclusive=False)
    )
    jobs = fields.Integer(load_default=1, validate=validate.Range(min=1))
    dump_completion = fields.Boolean(load_default=False)
    plot_data = fields.Boolean(load_default=False)

    @validates_schema
    def check_combinations(self, data: dict[str, Any], **kwargs: Any) -> None:
        """Weight methods need scales, and MDS needs its metric to be computed."""
        methods = set(data.get("methods", []))
        if Method.EM in methods and not data.get("em_scales"):
            raise ValidationError("The em method needs at least one scale.", "em_scales")
        if Method.LLSM in methods and not (data.get("scales") or data.get("custom_scales")):
            raise ValidationError("The llsm method needs at least one scale.", "scales")
        if data.get("mds") and data.get("mds_metric") not in data.get("metrics", []):
            raise ValidationError("The MDS metric must be one of the selected metrics.", "mds_metric")

    @post_load
    def make_config(self, data: dict[str, Any], **kwargs: Any) -> RunConfig:
        settings = replace(
            DEFAULT_SETTINGS,
            em_sweep_cap=data["em_sweep_cap"],
            em_tolerance=data["em_tolerance"],
            eigen_tolerance=data["eigen_tolerance"],
        )
        return RunConfig(
            input=Path(data["input"]),
            roster=Path(data["roster"]) if data["roster"] else None,
            scales=tuple(dict.fromkeys(data["scales"])),
            custom_scales=tuple(Path(path) for path in data["custom_scales"]),
            em_scales=tuple(dict.fromkeys(data["em_scales"])),
            methods=tuple(Method(method) for method in dict.fromkeys(data["methods"])),
            metrics=tuple(Metric(metric) for metric in dict.fromkeys(data["metrics"])),
            mds=data["mds"],
            mds_dims=data["mds_dims"],
            mds_metric=Metric(data["mds_metric"]),
            output_dir=Path(data["output_dir"]),
            formats=tuple(OutputFormat(fmt) for fmt in dict.fromkeys(data["formats"])),
            settings=settings,
            jobs=data["jobs"],
            dump_completion=data["dump_completion"],
            plot_data=data["plot_data"],
        )


def read_config_file(path: Path | str) -> dict[str, Any]:
    """Load a JSON config file; keys use the option names with underscores."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"Cannot read config file: {exc}", path=str(path)) from exc
    if not isinstance(data, dict):
        raise ConfigError("Config file must hold a JSON object", path=str(path))
    return data


def load_run_config(options: Mapping[str, Any], config_file: Path | str | None = None) -> RunConfig:
    """Merge file values and explicit options, then validate.

    Options whose value is None are treated as not given.

    Raises:
        ConfigError: With the per-field messages when validation fails
    """
    merged: dict[str, Any] = read_config_file(config_file) if config_file is not None else {}
    merged.update({key: value for key, value in options.items() if value is not None})
    try:
        config: RunConfig = RunConfigSchema().load(merged)
    except ValidationError as exc:
        messages = exc.messages if isinstance(exc.messages, dict) else {"_schema": exc.messages}
        raise ConfigError(fields=messages) from exc
    return config
