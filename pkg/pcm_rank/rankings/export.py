"""Ranking files: one CSV per ranking, the JSON bundle and the side-by-side table."""

import json
from collections.abc import Collection, Mapping, Sequence
from pathlib import Path
from typing import Any

from marshmallow import EXCLUDE, Schema, fields, post_load

from ..utils import write_csv, write_json
from .models import Ranking

RANKING_COLUMNS = ("position", "team_id", "team_name", "primary_key_value")


class RankedTeamSchema(Schema):
    class Meta:
        ordered = True

    position = fields.Integer(required=True)
    team_id = fields.String(required=True)
    team_name = fields.String(load_default="")
    primary_key_value = fields.Float(allow_none=True, load_default=None)


class RankingSchema(Schema):
    """One ranking of the JSON bundle."""

    class Meta:
        unknown = EXCLUDE

    label = fields.String(required=True)
    method = fields.String(required=True)
    scale = fields.String(allow_none=True, load_default=None)
    ties_broken = fields.Boolean(dump_only=True)
    tie_groups = fields.List(fields.List(fields.String()), load_default=list)
    metadata = fields.Dict(keys=fields.String(), load_default=dict)
    teams = fields.List(fields.Nested(RankedTeamSchema), required=True)

    @post_load
    def make_ranking(self, data: dict[str, Any], **kwargs: Any) -> Ranking:
        teams = sorted(data["teams"], key=lambda row: row["position"])
        return Ranking(
            label=data["label"],
            order=tuple(row["team_id"] for row in teams),
            method=data["method"],
            scale=data["scale"],
            key_values={
                row["team_id"]: row["primary_key_value"] for row in teams if row["primary_key_value"] is not None
            },
            tie_groups=tuple(tuple(group) for group in data["tie_groups"]),
            metadata=data["metadata"],
        )


class RankingBundleSchema(Schema):
    """``rankings.json``: every ranking of a run."""

    rankings = fields.List(fields.Nested(RankingSchema), required=True)


def _rows(ranking: Ranking, names: Mapping[str, str]) -> list[dict[str, Any]]:
    return [
        {
            "position": position,
            "team_id": team_id,
            "team_name": names.get(team_id, team_id),
            "primary_key_value": ranking.key_values.get(team_id),
        }
        for position, team_id in enumerate(ranking.order, start=1)
    ]


def ranking_document(ranking: Ranking, names: Mapping[str, str]) -> dict[str, Any]:
    return RankingSchema().dump(
        {
            "label": ranking.label,
            "method": ranking.method,
            "scale": ranking.scale,
            "ties_broken": ranking.ties_broken,
            "tie_groups": [list(group) for group in ranking.tie_groups],
            "metadata": ranking.metadata,
            "teams": _rows(ranking, names),
        }
    )


def export_ranking(ranking: Ranking, names: Mapping[str, str], out_dir: Path) -> Path:
    """Write ``<slug>.csv`` with ``position,team_id,team_name,primary_key_value``."""
    rows = (
        (
            row["position"],
            row["team_id"],
            row["team_name"],
            "" if row["primary_key_value"] is None else repr(row["primary_key_value"]),
        )
        for row in _rows(ranking, names)
    )
    return write_csv(out_dir / f"{ranking.slug}.csv", RANKING_COLUMNS, rows)


def export_rankings(
    rankings: Sequence[Ranking], names: Mapping[str, str], out_dir: Path, formats: Collection[str] = ("csv", "json")
) -> list[Path]:
    """Write every ranking, the ``rankings.json`` bundle and ``rankings-table.csv``.

    The table has one row per team and one column per ranking; rows follow
    the first ranking.
    """
    written: list[Path] = []
    if "csv" in formats:
        written.extend(export_ranking(ranking, names, out_dir) for ranking in rankings)
        if rankings:
            header = ("team_id", "team_name", *(ranking.label for ranking in rankings))
            table = (
                (team_id, names.get(team_id, team_id), *(ranking.position(team_id) for ranking in rankings))
                for team_id in rankings[0].order
            )
            written.append(write_csv(out_dir / "rankings-table.csv", header, table))
    if "json" in formats:
        bundle = {"rankings": [ranking_document(ranking, names) for ranking in rankings]}
        written.append(write_json(out_dir / "rankings.json", bundle))
    return written


def load_rankings(path: Path | str) -> list[Ranking]:
    """Read a ``rankings.json`` bundle back into rankings."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    loaded: dict[str, list[Ranking]] = RankingBundleSchema().load(data)
    return loaded["rankings"]
