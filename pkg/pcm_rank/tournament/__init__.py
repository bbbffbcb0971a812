"""Tournament data model, results parsing and official scoring."""

from .export import export_result_distribution, export_score_table, score_table_document
from .models import GAME_POINT_GRID, MatchRecord, Team, Tournament, find_match_issues
from .parsing import load_tournament, parse_results, parse_roster, serialize_results, serialize_roster
from .scoring import ScoreTable, TeamScore, compute_score_table, match_points_for, result_distribution

__all__ = [
    # Data model
    "Team",
    "MatchRecord",
    "Tournament",
    "GAME_POINT_GRID",
    "find_match_issues",
    # Parsing
    "parse_results",
    "parse_roster",
    "load_tournament",
    "serialize_results",
    "serialize_roster",
    # Scoring
    "ScoreTable",
    "TeamScore",
    "compute_score_table",
    "match_points_for",
    "result_distribution",
    # Export
    "export_score_table",
    "export_result_distribution",
    "score_table_document",
]
