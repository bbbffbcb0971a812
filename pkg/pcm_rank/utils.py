"""Utility functions shared across pcm-rank.

This module provides string case conversion, exact number formatting and the
deterministic CSV/JSON writers every exporter goes through.
"""

import csv
import io
import json
import re
from collections.abc import Iterable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any


def convert_camel_to_snake(word: str) -> str:
    """Convert CamelCase string to snake_case.

    Args:
        word: CamelCase string to convert

    Returns:
        snake_case version of the input string

    Example:
        >>> convert_camel_to_snake("DisconnectedGraphError")
        'disconnected_graph_error'
        >>> convert_camel_to_snake("PCMError")
        'pcm_error'
    """
    s1 = re.sub("(.)([A-Z][a-z]+)", r"\1_\2", word)
    return re.sub("([a-z0-9])([A-Z])", r"\1_\2", s1).lower()


def parse_fraction(value: str | int | float | Fraction) -> Fraction:
    """Parse an exact rational from a decimal or ``p/q`` string.

    Floats are converted through their shortest ``repr`` so ``0.5`` becomes
    exactly 1/2 rather than its binary expansion.

    Raises:
        ValueError: If the value is not a finite rational number
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"Not a rational number: {value!r}") from exc


def format_fraction(value: Fraction) -> str:
    """Format a rational as ``p`` or ``p/q``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_half_point(value: Fraction) -> str:
    """Format a half-integer game point count with one decimal digit.

    Example:
        >>> format_half_point(Fraction(5, 2))
        '2.5'
        >>> format_half_point(Fraction(2))
        '2.0'
    """
    return f"{float(value):.1f}"


def dumps_json(payload: Any) -> str:
    """Serialise to JSON deterministically (sorted keys, fixed indentation)."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(path: Path, payload: Any) -> Path:
    """Write a JSON document deterministically and return the path."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(payload), encoding="utf-8")
    return path


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render rows as CSV text with ``\\n`` line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a CSV file with a header row and return the path."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(header, rows), encoding="utf-8")
    return path
