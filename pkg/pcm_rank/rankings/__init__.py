"""Tie-free rankings from weights, official tie-breaks and the roster."""

from .builders import (
    buchholz_ranking,
    mix_averages,
    mix_ranking,
    official_final_ranking,
    ranking_from_weights,
    sonneborn_berger_ranking,
    start_ranking,
)
from .export import RankingSchema, export_ranking, export_rankings, load_rankings, ranking_document
from .models import Ranking

__all__ = [
    "Ranking",
    "ranking_from_weights",
    "official_final_ranking",
    "sonneborn_berger_ranking",
    "buchholz_ranking",
    "mix_ranking",
    "mix_averages",
    "start_ranking",
    # Export
    "RankingSchema",
    "ranking_document",
    "export_ranking",
    "export_rankings",
    "load_rankings",
]
