"""Normalised priority vectors produced by the solvers."""

import logging
from collections.abc import Collection, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from marshmallow import Schema, fields

from ..error.exceptions import InputError
from ..utils import write_csv, write_json

logger = logging.getLogger(__name__)

SUM_TOLERANCE = 1e-12


def descending_order(
    labels: Sequence[str], values: Sequence[float] | npt.NDArray[np.float64]
) -> tuple[list[int], bool]:
    """Indices sorted by descending value, exact ties by label.

    Returns:
        The order and whether any exact tie had to be broken
    """
    order = sorted(range(len(labels)), key=lambda k: (-float(values[k]), labels[k]))
    tied = any(float(values[a]) == float(values[b]) for a, b in zip(order, order[1:]))
    return order, tied


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Strictly positive weights summing to 1.

    Attributes:
        labels: Team ids, aligned with ``values``
        values: Weights (read-only array)
        method: Solver tag, ``llsm`` or ``em``
        scale: Name of the ratio scale of the underlying matrix
        diagnostics: Solver-specific numbers (residuals, objective, lambda_max)
    """

    labels: tuple[str, ...]
    values: npt.NDArray[np.float64]
    method: str
    scale: str | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.shape != (len(self.labels),):
            raise InputError(f"Expected {len(self.labels)} weights, got shape {values.shape}")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise InputError("Weights must be finite and strictly positive", method=self.method)
        if len(values) and abs(float(values.sum()) - 1.0) > SUM_TOLERANCE:
            raise InputError(f"Weights must sum to 1, got {float(values.sum())!r}", method=self.method)

    @classmethod
    def normalized(
        cls,
        labels: Sequence[str],
        values: Sequence[float] | npt.NDArray[np.float64],
        method: str,
        scale: str | None = None,
        diagnostics: dict[str, Any] | None = None,
    ) -> "WeightVector":
        """Scale ``values`` to sum 1 and wrap them."""
        array = np.asarray(values, dtype=np.float64)
        return cls(
            labels=tuple(labels), values=array / array.sum(), method=method, scale=scale, diagnostics=diagnostics or {}
        )

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def label(self) -> str:
        """Ranking label such as ``A-LLSM`` or ``C-EM``."""
        return f"{self.scale}-{self.method.upper()}" if self.scale else self.method.upper()

    def __getitem__(self, team_id: str) -> float:
        return float(self.values[self.labels.index(team_id)])

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.values.tolist()))


class WeightRowSchema(Schema):
    class Meta:
        ordered = True

    team_id = fields.String(required=True)
    weight = fields.Float(required=True)
    position = fields.Integer(required=True)


class WeightVectorSchema(Schema):
    """JSON document of an exported weight vector."""

    label = fields.String(required=True)
    method = fields.String(required=True)
    scale = fields.String(allow_none=True, required=True)
    weights = fields.List(fields.Nested(WeightRowSchema), required=True)
    ties_broken = fields.Boolean(required=True)
    diagnostics = fields.Dict(keys=fields.String(), load_default=dict)


def weight_rows(weights: WeightVector) -> tuple[list[dict[str, Any]], bool]:
    order, tied = descending_order(weights.labels, weights.values)
    rows = [
        {"team_id": weights.labels[k], "weight": float(weights.values[k]), "position": position}
        for position, k in enumerate(order, start=1)
    ]
    return rows, tied


def export_weights(weights: WeightVector, out_dir: Path, formats: Collection[str] = ("csv", "json")) -> list[Path]:
    """Write ``weights-<method>-<scale>.csv`` and ``.json``, heaviest team first."""
    stem = f"weights-{weights.method}-{weights.scale}" if weights.scale else f"weights-{weights.method}"
    rows, tied = weight_rows(weights)
    written: list[Path] = []
    if "csv" in formats:
        written.append(
            write_csv(
                out_dir / f"{stem}.csv",
                ("team_id", "weight", "position"),
                ((row["team_id"], repr(row["weight"]), row["position"]) for row in rows),
            )
        )
    if "json" in formats:
        document = WeightVectorSchema().dump(
            {
                "label": weights.label,
                "method": weights.method,
                "scale": weights.scale,
                "weights": rows,
                "ties_broken": tied,
                "diagnostics": weights.diagnostics,
            }
        )
        written.append(write_json(out_dir / f"{stem}.json", document))
    return written
