"""Ratio scales turning match results into comparison values.

A ratio scale maps the game points a team scored in a match (0, 0.5, ..., 4)
to a positive ratio. Four built-in variants are provided; custom scales are
loaded from JSON and validated against the same rules:

- a drawn match (2 game points) maps to 1
- ``r(g) * r(4 - g) == 1`` for every ``g``
- ``r`` is strictly increasing in ``g``
"""

import json
import logging
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from marshmallow import Schema, ValidationError, fields, validate

from ..error.exceptions import ScaleError
from ..tournament.models import DRAW_POINTS, GAME_POINT_GRID, MATCH_TOTAL
from ..utils import format_fraction, format_half_point, parse_fraction

logger = logging.getLogger(__name__)

BUILTIN_SCALE_NAMES = ("A", "B", "C", "D")


def _fractions(*values: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(value) for value in values)


# Indexed by game points 0, 0.5, ..., 4.
_BUILTIN_RATIOS: dict[str, tuple[Fraction, ...]] = {
    "A": _fractions("1/5", "1/4", "1/3", "1/2", "1", "2", "3", "4", "5"),
    "B": _fractions("1/8", "1/6", "1/4", "1/2", "1", "2", "4", "6", "8"),
    "C": _fractions("1/3", "2/5", "1/2", "2/3", "1", "3/2", "2", "5/2", "3"),
    "D": _fractions("1/5", "1/4", "2/7", "1/3", "1", "3", "7/2", "4", "5"),
}


@dataclass(frozen=True)
class RatioScale:
    """Exact mapping from game points to comparison ratios.

    Attributes:
        name: ``A``-``D`` for the built-in variants, any other string for a
            custom scale
        ratios: Ratio for each point of the game-point grid, in grid order
    """

    name: str
    ratios: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        self.validate()

    @property
    def is_builtin(self) -> bool:
        return self.name in BUILTIN_SCALE_NAMES and self.ratios == _BUILTIN_RATIOS[self.name]

    def validate(self) -> None:
        """Check the draw, reciprocity and monotonicity rules.

        Raises:
            ScaleError: On the first violated rule
        """
        if len(self.ratios) != len(GAME_POINT_GRID):
            raise ScaleError(
                f"Scale {self.name!r} needs {len(GAME_POINT_GRID)} ratios, got {len(self.ratios)}", scale=self.name
            )
        mapping = self.as_mapping()
        if any(ratio <= 0 for ratio in self.ratios):
            raise ScaleError(f"Scale {self.name!r} has non-positive ratios", scale=self.name)
        if mapping[DRAW_POINTS] != 1:
            raise ScaleError(f"Scale {self.name!r} must map a draw to 1", scale=self.name)
        for points, ratio in mapping.items():
            if ratio * mapping[MATCH_TOTAL - points] != 1:
                raise ScaleError(
                    f"Scale {self.name!r} is not reciprocal at {format_half_point(points)} game points",
                    scale=self.name,
                    game_points=format_half_point(points),
                )
        for lower, higher in zip(self.ratios, self.ratios[1:]):
            if not lower < higher:
                raise ScaleError(f"Scale {self.name!r} is not strictly increasing", scale=self.name)

    def as_mapping(self) -> dict[Fraction, Fraction]:
        return dict(zip(GAME_POINT_GRID, self.ratios))

    def ratio(self, game_points: Fraction) -> Fraction:
        """Ratio for a team that scored ``game_points`` in a match."""
        try:
            return self.ratios[GAME_POINT_GRID.index(game_points)]
        except ValueError:
            raise ScaleError(
                f"Game points {game_points} are not on the half-point grid", scale=self.name
            ) from None

    __getitem__ = ratio

    def to_dict(self) -> dict[str, Any]:
        """JSON form with fraction strings, readable by ``load_custom_scale``."""
        return {
            "name": self.name,
            "ratios": {
                format_half_point(points): format_fraction(ratio) for points, ratio in self.as_mapping().items()
            },
        }


def builtin_scale(name: str) -> RatioScale:
    """Return one of the built-in variants ``A``, ``B``, ``C`` or ``D``.

    Raises:
        ScaleError: For an unknown name
    """
    try:
        return RatioScale(name=name, ratios=_BUILTIN_RATIOS[name])
    except KeyError:
        raise ScaleError(
            f"Unknown scale {name!r}; expected one of {', '.join(BUILTIN_SCALE_NAMES)}", scale=name
        ) from None


class RatioValue(fields.Field):
    """Exact rational given as a decimal, an integer or a ``p/q`` string."""

    default_error_messages = {"invalid": "Not a valid rational number."}

    def _serialize(self, value: Fraction | None, attr: str | None, obj: Any, **kwargs: Any) -> str | None:
        if value is None:
            return None
        return format_fraction(value)

    def _deserialize(self, value: Any, attr: str | None, data: Any, **kwargs: Any) -> Fraction:
        try:
            return parse_fraction(value)
        except (TypeError, ValueError) as exc:
            raise self.make_error("invalid") from exc


class CustomScaleSchema(Schema):
    """``{"name": "E", "ratios": {"2.5": "3/2", "3": "2", ...}}``"""

    name = fields.String(required=True, validate=validate.Length(min=1))
    ratios = fields.Dict(keys=RatioValue(), values=RatioValue(), required=True)


def parse_custom_scale(data: Mapping[str, Any]) -> RatioScale:
    """Build a custom scale from its JSON form.

    Loser-side ratios may be omitted and are derived by reciprocity; the
    draw ratio defaults to 1.

    Raises:
        ScaleError: If the document is malformed, a grid point is missing on
            both sides or the scale breaks one of the scale rules
    """
    try:
        loaded = CustomScaleSchema().load(data)
    except ValidationError as exc:
        raise ScaleError("Malformed custom scale", errors=exc.messages) from exc

    name: str = loaded["name"]
    if name in BUILTIN_SCALE_NAMES:
        raise ScaleError(f"Custom scale cannot reuse the built-in name {name!r}", scale=name)

    given: dict[Fraction, Fraction] = loaded["ratios"]
    off_grid = sorted(points for points in given if points not in GAME_POINT_GRID)
    if off_grid:
        raise ScaleError(
            "Custom scale keys must be game points on the half-point grid",
            scale=name,
            keys=[format_fraction(points) for points in off_grid],
        )

    ratios: list[Fraction] = []
    for points in GAME_POINT_GRID:
        if points in given:
            ratios.append(given[points])
        elif given.get(MATCH_TOTAL - points, 0) != 0:
            ratios.append(1 / given[MATCH_TOTAL - points])
        elif points == DRAW_POINTS:
            ratios.append(Fraction(1))
        else:
            raise ScaleError(
                f"Custom scale has no ratio for {format_half_point(points)} game points", scale=name
            )

    scale = RatioScale(name=name, ratios=tuple(ratios))
    logger.info("Loaded custom scale", extra={"scale": name})
    return scale


def load_custom_scale(path: Path | str) -> RatioScale:
    """Read and validate a custom scale JSON file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ScaleError(f"Cannot read custom scale file: {exc}", path=str(path)) from exc
    if not isinstance(data, dict):
        raise ScaleError("Custom scale file must hold a JSON object", path=str(path))
    return parse_custom_scale(data)
