"""Tie-free rankings."""

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from ..error.exceptions import InputError


@dataclass(frozen=True, eq=False)
class Ranking:
    """A permutation of teams, position 1 first.

    Attributes:
        label: Display label, e.g. ``Final``, ``A-LLSM`` or ``Mix``
        order: Team ids from position 1 to position n
        method: Producing method, used in file names (``llsm``, ``official``, ...)
        scale: Ratio scale for weight-based rankings
        key_values: Primary sort key of every team (weight, TB1, Mix score, ...)
        tie_groups: Groups of teams whose full sort key was equal, each broken
            by team id
        metadata: Method-specific extras (e.g. Mix averages)
    """

    label: str
    order: tuple[str, ...]
    method: str
    scale: str | None = None
    key_values: Mapping[str, float] = field(default_factory=dict)
    tie_groups: tuple[tuple[str, ...], ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(set(self.order)) != len(self.order):
            raise InputError(f"Ranking {self.label!r} lists a team more than once", ranking=self.label)

    @classmethod
    def from_positions(
        cls, label: str, positions: Mapping[str, int], method: str = "custom", **kwargs: Any
    ) -> "Ranking":
        """Build from a ``team id -> position`` mapping.

        Raises:
            InputError: If the positions are not a permutation of 1..n
        """
        if sorted(positions.values()) != list(range(1, len(positions) + 1)):
            raise InputError(f"Positions of ranking {label!r} must form a permutation of 1..n", ranking=label)
        order = tuple(sorted(positions, key=positions.__getitem__))
        return cls(label=label, order=order, method=method, **kwargs)

    @cached_property
    def positions(self) -> dict[str, int]:
        return {team_id: position for position, team_id in enumerate(self.order, start=1)}

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def team_ids(self) -> frozenset[str]:
        return frozenset(self.order)

    @property
    def ties_broken(self) -> bool:
        return bool(self.tie_groups)

    @property
    def slug(self) -> str:
        """File stem, ``<method>-<scale>`` or ``<method>``."""
        return f"{self.method}-{self.scale}" if self.scale else self.method

    def position(self, team_id: str) -> int:
        return self.positions[team_id]

    __getitem__ = position

    def __iter__(self) -> Iterator[str]:
        return iter(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def position_vector(self, team_ids: Sequence[str]) -> list[int]:
        """Positions of ``team_ids``, in the given order."""
        return [self.positions[team_id] for team_id in team_ids]
