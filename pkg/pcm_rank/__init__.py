"""pcm-rank: rankings of Swiss-system team tournaments.

Match results become an incomplete pairwise comparison matrix under a ratio
scale; weights come from logarithmic least squares (LLSM) or from the
Perron eigenvector of the lambda_max-optimal completion (EM). The rankings
they induce are compared with the official tie-break rankings through
Spearman's rho, the log-Euclidean tau distance and interval MDS.

Quick Start Example:
    >>> from pcm_rank import build_pcm, builtin_scale, llsm_weights, load_tournament, ranking_from_weights
    >>>
    >>> tournament = load_tournament("results.csv", "roster.csv")
    >>> pcm = build_pcm(tournament, builtin_scale("A"))
    >>> ranking = ranking_from_weights(llsm_weights(pcm))
    >>> ranking.order[:4]

Comparison Example:
    >>> from pcm_rank import compute_score_table, official_final_ranking, tau, spearman
    >>>
    >>> final = official_final_ranking(compute_score_table(tournament))
    >>> spearman(final, ranking), tau(final, ranking)
"""

import logging

from .compare import (
    distance_table,
    regression_line,
    spearman,
    tau,
    tau_max,
    weight_stats,
)
from .error import ConvergenceError, DisconnectedGraphError, InputError, PcmRankException
from .mds import MdsEmbedding, embed
from .pcm import IncompletePCM, RatioScale, build_pcm, builtin_scale, load_custom_scale
from .rankings import (
    Ranking,
    buchholz_ranking,
    mix_ranking,
    official_final_ranking,
    ranking_from_weights,
    sonneborn_berger_ranking,
    start_ranking,
)
from .solvers import SolverSettings, WeightVector, em_weights, llsm_weights, optimal_completion, perron
from .tournament import MatchRecord, Team, Tournament, compute_score_table, load_tournament, parse_results

logger = logging.getLogger(__name__)


__version__ = "0.1.0"
__author__ = "Dave <david@qualisero.com>"
__email__ = "david@qualisero.com"
__description__ = "Rankings for Swiss-system team tournaments from incomplete pairwise comparison matrices"

__all__ = [
    # Tournament
    "Team",
    "MatchRecord",
    "Tournament",
    "parse_results",
    "load_tournament",
    "compute_score_table",
    # Matrices
    "RatioScale",
    "builtin_scale",
    "load_custom_scale",
    "IncompletePCM",
    "build_pcm",
    # Solvers
    "SolverSettings",
    "WeightVector",
    "llsm_weights",
    "perron",
    "optimal_completion",
    "em_weights",
    # Rankings
    "Ranking",
    "ranking_from_weights",
    "official_final_ranking",
    "sonneborn_berger_ranking",
    "buchholz_ranking",
    "mix_ranking",
    "start_ranking",
    # Comparison
    "spearman",
    "tau",
    "tau_max",
    "regression_line",
    "distance_table",
    "weight_stats",
    "MdsEmbedding",
    "embed",
    # Errors
    "PcmRankException",
    "InputError",
    "DisconnectedGraphError",
    "ConvergenceError",
    "__version__",
]
