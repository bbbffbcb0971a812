"""Score table and result distribution exporters."""

from collections.abc import Collection
from fractions import Fraction
from pathlib import Path
from typing import Any

from ..utils import format_half_point, write_csv, write_json
from .models import Tournament
from .schemas import ResultDistributionSchema, ScoreTableSchema
from .scoring import ScoreTable

SCORE_TABLE_COLUMNS = (
    "team_id",
    "team_name",
    "matches",
    "wins",
    "draws",
    "losses",
    "match_points",
    "game_points",
    "sonneborn_berger",
    "buchholz",
    "mix_factor",
)


def score_table_document(table: ScoreTable, tournament: Tournament) -> dict[str, Any]:
    """Dump the score table through ScoreTableSchema."""
    names = {team.id: team.display_name for team in tournament.teams}
    payload = {
        "scores": [{**vars(score), "team_name": names[score.team_id]} for score in table],
        "metadata": table.metadata,
    }
    return ScoreTableSchema().dump(payload)


def export_score_table(
    table: ScoreTable, tournament: Tournament, out_dir: Path, formats: Collection[str]
) -> list[Path]:
    """Write ``score-table.csv`` and/or ``score-table.json``."""
    written: list[Path] = []
    document = score_table_document(table, tournament)
    if "csv" in formats:
        rows = ([line[column] for column in SCORE_TABLE_COLUMNS] for line in document["scores"])
        written.append(write_csv(out_dir / "score-table.csv", SCORE_TABLE_COLUMNS, rows))
    if "json" in formats:
        written.append(write_json(out_dir / "score-table.json", document))
    return written


def export_result_distribution(histogram: dict[Fraction, int], out_dir: Path, formats: Collection[str]) -> list[Path]:
    """Write the winner game-point histogram."""
    written: list[Path] = []
    if "csv" in formats:
        rows = ((format_half_point(points), count) for points, count in histogram.items())
        written.append(write_csv(out_dir / "result-distribution.csv", ("winner_game_points", "matches"), rows))
    if "json" in formats:
        document = ResultDistributionSchema().dump(
            {
                "counts": {format_half_point(points): count for points, count in histogram.items()},
                "matches": sum(histogram.values()),
            }
        )
        written.append(write_json(out_dir / "result-distribution.json", document))
    return written
