"""Results and roster file parsing.

Results file: UTF-8 CSV with header ``round,team_a,team_b,game_points_a``, one
row per materialised match. Roster file (optional): ``id,name,start_rank``.
Without a roster, teams are inferred from the match rows in order of first
appearance and carry no start rank.
"""

import csv
import io
import logging
from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import IO, Any

from marshmallow import Schema, ValidationError

from ..error.exceptions import ResultsParseError
from ..utils import csv_text
from .models import MatchRecord, Team, Tournament, find_match_issues
from .schemas import RESULTS_HEADER, ROSTER_HEADER, MatchRowSchema, TeamRowSchema

logger = logging.getLogger(__name__)

Source = IO[bytes] | bytes


def _text_stream(source: Source) -> io.TextIOWrapper:
    raw = io.BytesIO(source) if isinstance(source, bytes) else source
    return io.TextIOWrapper(raw, encoding="utf-8-sig", newline="")


def _flatten_messages(messages: Any) -> dict[str, str]:
    if isinstance(messages, dict):
        return {str(k): "; ".join(v) if isinstance(v, list) else str(v) for k, v in messages.items()}
    return {"_schema": str(messages)}


def _iter_rows(
    source: Source, header: Sequence[str], schema: Schema, location: str
) -> Iterator[tuple[int, Any]]:
    """Yield ``(line number, loaded object)`` for every data row."""
    stream = _text_stream(source)
    try:
        reader = csv.DictReader(stream)
        fieldnames = [name.strip() for name in (reader.fieldnames or [])]
        if fieldnames != list(header):
            raise ResultsParseError(
                f"Expected header {','.join(header)!r}, got {','.join(fieldnames)!r}",
                line=1,
                location=location,
                code="bad_header",
            )
        reader.fieldnames = fieldnames
        for row in reader:
            line = reader.line_num
            if None in row or any(value is None for value in row.values()):
                raise ResultsParseError(
                    f"Expected {len(header)} columns", line=line, location=location, code="malformed_row"
                )
            try:
                yield line, schema.load(row)
            except ValidationError as exc:
                raise ResultsParseError(
                    "Malformed row",
                    line=line,
                    fields=_flatten_messages(exc.messages),
                    location=location,
                    code="malformed_row",
                )
    except UnicodeDecodeError as exc:
        raise ResultsParseError(f"File is not valid UTF-8: {exc.reason}", location=location, code="bad_encoding")
    finally:
        stream.detach()


def parse_roster(source: Source) -> tuple[Team, ...]:
    """Parse a roster file into teams, keeping file order.

    Args:
        source: Byte stream or bytes in the roster CSV format

    Returns:
        Teams in roster order

    Raises:
        ResultsParseError: On malformed rows, duplicate ids or start ranks that
            are not a permutation of 1..n
    """
    teams: list[Team] = []
    seen: dict[str, int] = {}
    for line, team in _iter_rows(source, ROSTER_HEADER, TeamRowSchema(), "roster"):
        if team.id in seen:
            raise ResultsParseError(
                f"Duplicate team id {team.id!r} (first on line {seen[team.id]})",
                line=line,
                location="roster",
                code="duplicate_team",
            )
        seen[team.id] = line
        teams.append(team)

    ranks = [team.start_rank for team in teams if team.start_rank is not None]
    if teams and len(ranks) == len(teams) and sorted(ranks) != list(range(1, len(teams) + 1)):
        raise ResultsParseError(
            "Start ranks must form a permutation of 1..n", location="roster", code="bad_start_ranks"
        )
    return tuple(teams)


def parse_results(source: Source, teams: Sequence[Team] | None = None, rounds: int | None = None) -> Tournament:
    """Parse a results file into a validated Tournament.

    Args:
        source: Byte stream or bytes in the results CSV format
        teams: Roster; when omitted, teams are inferred from the rows
        rounds: Number of rounds; defaults to the highest round in the file

    Returns:
        Tournament whose matches mirror the input rows

    Raises:
        ResultsParseError: With the offending line number for malformed rows,
            self-pairings, off-grid game points, duplicate pairs, teams playing
            twice in a round and unknown team references
    """
    lines: list[int] = []
    matches: list[MatchRecord] = []
    for line, match in _iter_rows(source, RESULTS_HEADER, MatchRowSchema(), "results"):
        lines.append(line)
        matches.append(match)

    if teams is None:
        inferred: dict[str, Team] = {}
        for match in matches:
            for team_id in (match.team_a, match.team_b):
                inferred.setdefault(team_id, Team(id=team_id, name=team_id))
        roster = tuple(inferred.values())
    else:
        roster = tuple(teams)

    max_round = max((match.round for match in matches), default=1)
    n_rounds = rounds if rounds is not None else max_round

    issues = find_match_issues([team.id for team in roster], n_rounds, matches)
    if issues:
        first = issues[0]
        raise ResultsParseError(first.message, line=lines[first.index], location="results", code=first.code)

    tournament = Tournament(teams=roster, rounds=n_rounds, matches=tuple(matches))
    logger.info(
        "Parsed tournament",
        extra={"teams": tournament.n, "matches": len(tournament), "rounds": tournament.rounds},
    )
    return tournament


def load_tournament(results_path: Path | str, roster_path: Path | str | None = None) -> Tournament:
    """Read a results file and optional roster file from disk."""
    teams = parse_roster(Path(roster_path).read_bytes()) if roster_path is not None else None
    return parse_results(Path(results_path).read_bytes(), teams=teams)


def serialize_results(tournament: Tournament) -> str:
    """Render the tournament's matches in the results CSV format."""
    schema = MatchRowSchema()
    rows = (schema.dump(match) for match in tournament.matches)
    return csv_text(RESULTS_HEADER, ([row[column] for column in RESULTS_HEADER] for row in rows))


def serialize_roster(tournament: Tournament) -> str:
    """Render the tournament's teams in the roster CSV format."""
    rows = (
        (team.id, team.name, "" if team.start_rank is None else team.start_rank) for team in tournament.teams
    )
    return csv_text(ROSTER_HEADER, rows)
