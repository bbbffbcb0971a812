"""Marshmallow schemas for the results and roster CSV rows."""

from fractions import Fraction
from typing import Any

from marshmallow import RAISE, Schema, fields, post_load, pre_load, validate

from ..utils import format_half_point, parse_fraction
from .models import MatchRecord, Team

RESULTS_HEADER = ("round", "team_a", "team_b", "game_points_a")
ROSTER_HEADER = ("id", "name", "start_rank")


class HalfPoints(fields.Field):
    """Exact game point count, serialised with one decimal digit.

    Only the number syntax is checked here; the half-point grid is a
    tournament invariant and is reported with its own error code.
    """

    default_error_messages = {"invalid": "Not a valid number."}

    def _serialize(self, value: Fraction | None, attr: str | None, obj: Any, **kwargs: Any) -> str | None:
        if value is None:
            return None
        return format_half_point(value)

    def _deserialize(self, value: Any, attr: str | None, data: Any, **kwargs: Any) -> Fraction:
        try:
            return parse_fraction(value)
        except (TypeError, ValueError) as exc:
            raise self.make_error("invalid") from exc


class MatchRowSchema(Schema):
    """One row of the results file: ``round,team_a,team_b,game_points_a``."""

    class Meta:
        unknown = RAISE
        ordered = True

    round = fields.Integer(required=True, validate=validate.Range(min=1))
    team_a = fields.String(required=True, validate=validate.Length(min=1))
    team_b = fields.String(required=True, validate=validate.Length(min=1))
    game_points_a = HalfPoints(required=True)

    @pre_load
    def strip_values(self, data: dict[str, Any], **kwargs: Any) -> dict[str, Any]:
        """Trim surrounding whitespace from every cell."""
        return {k: v.strip() if isinstance(v, str) else v for k, v in data.items()}

    @post_load
    def make_match(self, data: dict[str, Any], **kwargs: Any) -> MatchRecord:
        return MatchRecord(**data)


class TeamRowSchema(Schema):
    """One row of the roster file: ``id,name,start_rank`` (start rank may be blank)."""

    class Meta:
        unknown = RAISE
        ordered = True

    id = fields.String(required=True, validate=validate.Length(min=1))
    name = fields.String(load_default="", dump_default="")
    start_rank = fields.Integer(load_default=None, allow_none=True, validate=validate.Range(min=1))

    @pre_load
    def blank_to_none(self, data: dict[str, Any], **kwargs: Any) -> dict[str, Any]:
        """Trim cells and treat an empty start rank as missing."""
        cleaned = {k: v.strip() if isinstance(v, str) else v for k, v in data.items()}
        if cleaned.get("start_rank") == "":
            cleaned["start_rank"] = None
        return cleaned

    @post_load
    def make_team(self, data: dict[str, Any], **kwargs: Any) -> Team:
        return Team(**data)


class TeamScoreSchema(Schema):
    """JSON form of a score line; rationals are written as floats."""

    class Meta:
        ordered = True

    team_id = fields.String(required=True)
    team_name = fields.String(load_default="")
    matches = fields.Integer(required=True)
    wins = fields.Integer(required=True)
    draws = fields.Integer(required=True)
    losses = fields.Integer(required=True)
    match_points = fields.Integer(required=True)
    game_points = fields.Float(required=True)
    sonneborn_berger = fields.Float(required=True)
    buchholz = fields.Integer(required=True)
    mix_factor = fields.Float(required=True)
    sonneborn_berger_excluded = fields.String(allow_none=True, load_default=None)
    buchholz_excluded = fields.String(allow_none=True, load_default=None)


class ScoreTableSchema(Schema):
    """JSON document of the score table and its metadata."""

    scores = fields.List(fields.Nested(TeamScoreSchema), required=True)
    metadata = fields.Dict(keys=fields.String(), load_default=dict)


class ResultDistributionSchema(Schema):
    """Winner game-point histogram, keyed by ``"2.0"`` .. ``"4.0"``."""

    counts = fields.Dict(keys=fields.String(), values=fields.Integer(), required=True)
    matches = fields.Integer(required=True)
