"""Package metadata checks."""

from __future__ import annotations

import importlib
import tomllib
from pathlib import Path

import pcm_rank

PYPROJECT = Path(__file__).parent.parent.parent / "pyproject.toml"


def _poetry() -> dict[str, object]:
    with PYPROJECT.open("rb") as f:
        return tomllib.load(f)["tool"]["poetry"]  # type: ignore[no-any-return]


def test_version_matches_pyproject() -> None:
    """__version__ and the bump script's source of truth agree."""
    assert pcm_rank.__version__ == _poetry()["version"]


def test_console_script_target() -> None:
    """The pcm-rank entry point resolves to the click group."""
    from pcm_rank.cli.main import cli

    module, _, attr = _poetry()["scripts"]["pcm-rank"].partition(":")  # type: ignore[index, union-attr]
    assert getattr(importlib.import_module(module), attr) is cli


def test_public_names_exported() -> None:
    for name in pcm_rank.__all__:
        assert hasattr(pcm_rank, name), name
