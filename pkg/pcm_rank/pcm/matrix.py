"""Incomplete pairwise comparison matrices.

Only the upper triangle is stored: ``entries[(i, j)]`` with ``i < j`` holds
``a_ij``; ``a_ji = 1 / a_ij`` and ``a_ii = 1`` are derived. Alternatives are
indexed in roster order.
"""

import logging
from collections.abc import Collection, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np
import numpy.typing as npt
from marshmallow import Schema, fields

from ..error.exceptions import PcmConstructionError
from ..tournament.models import Tournament
from ..utils import format_fraction, write_csv, write_json
from .scales import RatioScale

logger = logging.getLogger(__name__)

Ratio = Fraction | float
Pair = tuple[int, int]


@dataclass(frozen=True, eq=False)
class IncompletePCM:
    """Reciprocal positive matrix with missing entries.

    Attributes:
        labels: Alternative (team) ids in matrix order
        entries: Known upper-triangle values keyed by ``(i, j)``, ``i < j``
        scale_name: Name of the ratio scale the entries come from, if any
    """

    labels: tuple[str, ...]
    entries: Mapping[Pair, Ratio]
    scale_name: str | None = None

    def __post_init__(self) -> None:
        n = len(self.labels)
        for (i, j), value in self.entries.items():
            if not 0 <= i < j < n:
                raise PcmConstructionError(f"Entry ({i}, {j}) is not an upper-triangle index for n={n}")
            if not value > 0:
                raise PcmConstructionError(f"Entry ({i}, {j}) must be positive, got {value}")

    @classmethod
    def from_entries(
        cls, labels: Sequence[str], entries: Mapping[Pair, Ratio], scale_name: str | None = None
    ) -> "IncompletePCM":
        """Build from entries given in either orientation.

        ``(j, i)`` keys with ``j > i`` are stored as the reciprocal of their value.

        Raises:
            PcmConstructionError: If a pair is given twice or on the diagonal
        """
        upper: dict[Pair, Ratio] = {}
        for (i, j), value in entries.items():
            if i == j:
                raise PcmConstructionError(f"Diagonal entry ({i}, {i}) cannot be set")
            key, stored = ((i, j), value) if i < j else ((j, i), 1 / value)
            if key in upper:
                raise PcmConstructionError(f"Pair {key} given twice")
            upper[key] = stored
        return cls(labels=tuple(labels), entries=upper, scale_name=scale_name)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def pairs(self) -> int:
        """Number of upper-triangle positions, n(n-1)/2."""
        return self.n * (self.n - 1) // 2

    @property
    def known(self) -> int:
        return len(self.entries)

    @property
    def d(self) -> int:
        """Number of missing upper-triangle entries."""
        return self.pairs - self.known

    @property
    def density(self) -> float:
        """Share of known upper-triangle entries; 1.0 when n < 2."""
        return self.known / self.pairs if self.pairs else 1.0

    @property
    def is_complete(self) -> bool:
        return self.d == 0

    def value(self, i: int, j: int) -> Ratio | None:
        """Return ``a_ij``, or None when the comparison is missing."""
        if i == j:
            return Fraction(1)
        if i < j:
            return self.entries.get((i, j))
        known = self.entries.get((j, i))
        return None if known is None else 1 / known

    @cached_property
    def edges(self) -> npt.NDArray[np.intp]:
        """Known pairs as an ``(m, 2)`` index array, sorted."""
        ordered = sorted(self.entries)
        return np.array(ordered, dtype=np.intp).reshape(len(ordered), 2)

    @cached_property
    def log_values(self) -> npt.NDArray[np.float64]:
        """Natural logarithms of the known entries, aligned with ``edges``."""
        return np.array([np.log(float(self.entries[pair])) for pair in sorted(self.entries)], dtype=np.float64)

    @cached_property
    def missing(self) -> tuple[Pair, ...]:
        """Missing upper-triangle pairs in row-major order."""
        return tuple((i, j) for i in range(self.n) for j in range(i + 1, self.n) if (i, j) not in self.entries)

    def to_dense(self, fill: float = np.nan) -> npt.NDArray[np.float64]:
        """Dense float matrix with ``fill`` at missing positions."""
        matrix = np.full((self.n, self.n), fill, dtype=np.float64)
        np.fill_diagonal(matrix, 1.0)
        for (i, j), value in self.entries.items():
            matrix[i, j] = float(value)
            matrix[j, i] = 1.0 / float(value)
        return matrix


def build_pcm(tournament: Tournament, scale: RatioScale) -> IncompletePCM:
    """Turn every match into one comparison entry under ``scale``.

    Args:
        tournament: Valid tournament; its roster order is the matrix order
        scale: Ratio scale, validated again before use

    Returns:
        IncompletePCM with one stored entry per match

    Raises:
        ScaleError: If the scale breaks the scale rules
        PcmConstructionError: If a pair has more than one result
    """
    scale.validate()
    index = tournament.team_index
    entries: dict[Pair, Fraction] = {}
    for match in tournament.matches:
        i, j = index[match.team_a], index[match.team_b]
        if i < j:
            key, value = (i, j), scale.ratio(match.game_points_a)
        else:
            key, value = (j, i), scale.ratio(match.game_points_b)
        if key in entries:
            raise PcmConstructionError(
                f"{match.team_a} and {match.team_b} have more than one result", teams=[match.team_a, match.team_b]
            )
        entries[key] = value

    pcm = IncompletePCM(labels=tournament.team_ids, entries=entries, scale_name=scale.name)
    logger.debug(
        "Built comparison matrix",
        extra={"scale": scale.name, "n": pcm.n, "known": pcm.known, "missing": pcm.d},
    )
    return pcm


class PcmSidecarSchema(Schema):
    """Metadata written next to a matrix export."""

    n = fields.Integer(required=True)
    d = fields.Integer(required=True)
    known = fields.Integer(required=True)
    density = fields.Float(required=True)
    scale = fields.String(allow_none=True, required=True)
    labels = fields.List(fields.String(), required=True)


def _format_ratio(value: Ratio) -> str:
    return format_fraction(value) if isinstance(value, Fraction) else repr(float(value))


def export_pcm(pcm: IncompletePCM, out_dir: Path, formats: Collection[str] = ("csv", "json")) -> list[Path]:
    """Write ``pcm-<scale>.csv`` (``i,j,a_ij`` with 1-based indices) and its JSON sidecar."""
    stem = f"pcm-{pcm.scale_name or 'custom'}"
    written: list[Path] = []
    if "csv" in formats:
        rows = ((i + 1, j + 1, _format_ratio(pcm.entries[(i, j)])) for i, j in sorted(pcm.entries))
        written.append(write_csv(out_dir / f"{stem}.csv", ("i", "j", "a_ij"), rows))
    if "json" in formats:
        sidecar = PcmSidecarSchema().dump(
            {
                "n": pcm.n,
                "d": pcm.d,
                "known": pcm.known,
                "density": pcm.density,
                "scale": pcm.scale_name,
                "labels": list(pcm.labels),
            }
        )
        written.append(write_json(out_dir / f"{stem}.json", sidecar))
    return written
