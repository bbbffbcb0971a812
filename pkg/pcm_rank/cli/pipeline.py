"""The ``rank`` pipeline: results in, rankings, tables and statistics out.

Solver jobs (one per method and scale) may run on a thread pool; everything
they produce is collected in submission order and written afterwards by a
single thread, so the output files do not depend on ``jobs``.
"""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from marshmallow import Schema, fields

from ..compare.diagnostics import (
    AdjacencyStats,
    WeightStats,
    adjacency_pattern,
    adjacency_stats,
    export_adjacency_stats,
    export_weight_stats,
    relative_weights,
    weight_stats,
)
from ..compare.metrics import regression_line, tau_contributions
from ..compare.tables import DistanceMatrix, distance_document, distance_table, export_distance_table
from ..error.exceptions import ConfigError, DegenerateInputError, DisconnectedGraphError, ScaleError
from ..mds.embedding import MdsEmbedding, embed, export_embedding
from ..pcm.graph import ComparisonGraph, connected_components, is_connected
from ..pcm.matrix import IncompletePCM, build_pcm, export_pcm
from ..pcm.scales import RatioScale, builtin_scale, load_custom_scale
from ..rankings.builders import (
    buchholz_ranking,
    mix_ranking,
    official_final_ranking,
    ranking_from_weights,
    sonneborn_berger_ranking,
    start_ranking,
)
from ..rankings.export import export_rankings
from ..rankings.models import Ranking
from ..solvers.em import CompletionState, em_weights, export_completion, optimal_completion
from ..solvers.llsm import llsm_weights
from ..solvers.settings import SolverSettings
from ..solvers.weights import WeightVector, export_weights
from ..tournament.export import export_result_distribution, export_score_table
from ..tournament.models import Tournament
from ..tournament.parsing import load_tournament
from ..tournament.scoring import ScoreTable, compute_score_table, result_distribution
from ..utils import format_half_point, write_json
from .config import Method, RunConfig

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
PLOT_DATA_NAME = "plot-data.json"


@dataclass(frozen=True)
class SolverJob:
    """One weight computation: a method applied to the matrix of one scale."""

    method: Method
    pcm: IncompletePCM

    @property
    def scale(self) -> str | None:
        return self.pcm.scale_name


@dataclass(frozen=True)
class JobOutcome:
    job: SolverJob
    weights: WeightVector
    completion: CompletionState | None = None


def run_job(job: SolverJob, settings: SolverSettings) -> JobOutcome:
    """Solve one job; each job is single-threaded."""
    if job.method is Method.LLSM:
        return JobOutcome(job, llsm_weights(job.pcm))
    completion = optimal_completion(job.pcm, settings)
    return JobOutcome(job, em_weights(job.pcm, settings, completion), completion)


def run_jobs(jobs: Sequence[SolverJob], settings: SolverSettings, workers: int = 1) -> list[JobOutcome]:
    """Run ``jobs`` and return their outcomes in job order.

    When several jobs fail, the error of the first one in job order is raised.
    """
    if workers <= 1 or len(jobs) <= 1:
        return [run_job(job, settings) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_job, job, settings) for job in jobs]
        return [future.result() for future in futures]


def tournament_graph(tournament: Tournament) -> ComparisonGraph:
    """Comparison graph straight from the matches; it is the same for every scale."""
    index = tournament.team_index
    edges = sorted({tuple(sorted((index[m.team_a], index[m.team_b]))) for m in tournament.matches})
    return ComparisonGraph(n=tournament.n, edges=tuple((i, j) for i, j in edges), labels=tournament.team_ids)


def connectivity_report(tournament: Tournament) -> dict[str, Any]:
    graph = tournament_graph(tournament)
    components = [[graph.label(v) for v in members] for members in connected_components(graph)]
    return {"connected": is_connected(graph), "components": components if len(components) > 1 else []}


def check_report(tournament: Tournament) -> dict[str, Any]:
    """Counts, density, connectivity and result distribution of a parsed tournament."""
    n = tournament.n
    pairs = n * (n - 1) // 2
    known = len(tournament_graph(tournament).edges)
    scores = compute_score_table(tournament)
    return {
        "teams": n,
        "rounds": tournament.rounds,
        "matches": len(tournament.matches),
        "known_comparisons": known,
        "missing_comparisons": pairs - known,
        "density": known / pairs if pairs else 1.0,
        **connectivity_report(tournament),
        "result_distribution": {
            format_half_point(points): count for points, count in result_distribution(tournament).items()
        },
        "late_arrivals": scores.metadata["late_arrivals"],
    }


def resolve_scales(config: RunConfig) -> tuple[dict[str, RatioScale], list[str]]:
    """Scales by name, with the names the LLSM jobs run on.

    LLSM runs on the built-in scales of the config followed by the custom
    scales; built-in scales named only in ``em_scales`` are added for EM.

    Raises:
        ConfigError: If a custom scale reuses a name or an EM scale is unknown
    """
    scales = {name: builtin_scale(name) for name in config.scales}
    for path in config.custom_scales:
        scale = load_custom_scale(path)
        if scale.name in scales:
            raise ConfigError(f"Scale {scale.name!r} is defined twice", path=str(path))
        scales[scale.name] = scale
    llsm_names = list(scales)
    if config.wants(Method.EM):
        for name in config.em_scales:
            if name in scales:
                continue
            try:
                scales[name] = builtin_scale(name)
            except ScaleError as exc:
                raise ConfigError(f"Unknown EM scale {name!r}", fields={"em_scales": [name]}) from exc
    return scales, llsm_names


def _jobs(config: RunConfig, pcms: dict[str, IncompletePCM], llsm_names: Sequence[str]) -> list[SolverJob]:
    jobs: list[SolverJob] = []
    if config.wants(Method.LLSM):
        jobs.extend(SolverJob(Method.LLSM, pcms[name]) for name in llsm_names)
    if config.wants(Method.EM):
        jobs.extend(SolverJob(Method.EM, pcms[name]) for name in config.em_scales)
    return jobs


class ManifestSchema(Schema):
    """``manifest.json``: what ran, what fired, what was written."""

    status = fields.String(required=True)
    config = fields.Dict(allow_none=True)
    tournament = fields.Dict(allow_none=True)
    connectivity = fields.Dict(allow_none=True)
    scales = fields.Dict(keys=fields.String(), allow_none=True)
    tie_breaks = fields.Dict(keys=fields.String(), allow_none=True)
    score_table = fields.Dict(allow_none=True)
    diagnostics = fields.Dict(keys=fields.String(), allow_none=True)
    skipped = fields.List(fields.String(), load_default=list)
    files = fields.List(fields.String(), load_default=list)
    error = fields.Dict(allow_none=True)


@dataclass
class RunResult:
    """In-memory products of a run, alongside the files written."""

    config: RunConfig
    tournament: Tournament
    scores: ScoreTable
    weights: list[WeightVector] = field(default_factory=list)
    completions: dict[str, CompletionState] = field(default_factory=dict)
    rankings: list[Ranking] = field(default_factory=list)
    tables: dict[str, DistanceMatrix] = field(default_factory=dict)
    weight_stats: dict[str, WeightStats] = field(default_factory=dict)
    adjacency: dict[str, AdjacencyStats] = field(default_factory=dict)
    embedding: MdsEmbedding | None = None
    skipped: list[str] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)
    manifest: dict[str, Any] = field(default_factory=dict)


def build_rankings(
    config: RunConfig, tournament: Tournament, scores: ScoreTable, weights: Sequence[WeightVector]
) -> list[Ranking]:
    """Final, Start, the weight rankings in job order, then Sonneborn-Berger, Buchholz and Mix."""
    rankings: list[Ranking] = []
    if config.wants(Method.OFFICIAL):
        rankings.append(official_final_ranking(scores))
    if config.wants(Method.START):
        rankings.append(start_ranking(tournament))
    rankings.extend(ranking_from_weights(vector) for vector in weights)
    if config.wants(Method.SONNEBORN_BERGER):
        rankings.append(sonneborn_berger_ranking(scores))
    if config.wants(Method.BUCHHOLZ):
        rankings.append(buchholz_ranking(scores))
    if config.wants(Method.MIX):
        rankings.append(mix_ranking(scores))
    return rankings


def _plot_data(result: RunResult, pcms: dict[str, IncompletePCM]) -> dict[str, Any]:
    tournament = result.tournament
    reference = result.rankings[0] if result.rankings else None
    comparisons = {}
    if reference is not None:
        for ranking in result.rankings[1:]:
            line = regression_line(reference, ranking)
            comparisons[ranking.label] = {
                "regression": line._asdict(),
                "tau_contributions": [item._asdict() for item in tau_contributions(reference, ranking)],
            }
    return {
        "reference": None if reference is None else reference.label,
        "relative_weights": {vector.label: relative_weights(vector) for vector in result.weights},
        "adjacency_patterns": {
            ranking.label: [list(cell) for cell in adjacency_pattern(tournament, ranking)]
            for ranking in result.rankings
        },
        "comparisons": comparisons,
        "density": {name: pcm.density for name, pcm in pcms.items()},
    }


def _manifest(result: RunResult, scales: dict[str, RatioScale], out_dir: Path) -> dict[str, Any]:
    tournament = result.tournament
    scores = result.scores
    return ManifestSchema().dump(
        {
            "status": "ok",
            "config": result.config.to_dict(),
            "tournament": {"teams": tournament.n, "rounds": tournament.rounds, "matches": len(tournament.matches)},
            "connectivity": connectivity_report(tournament),
            "scales": {name: scale.to_dict() for name, scale in scales.items()},
            "tie_breaks": {
                ranking.label: {
                    "ties_broken": ranking.ties_broken,
                    "tie_groups": [list(group) for group in ranking.tie_groups],
                }
                for ranking in result.rankings
            },
            "score_table": {
                **scores.metadata,
                "sonneborn_berger_excluded": {s.team_id: s.sonneborn_berger_excluded for s in scores},
                "buchholz_excluded": {s.team_id: s.buchholz_excluded for s in scores},
            },
            "diagnostics": {
                vector.label: {
                    **vector.diagnostics,
                    **(
                        {"converged": result.completions[vector.label].converged}
                        if vector.label in result.completions
                        else {}
                    ),
                }
                for vector in result.weights
            },
            "skipped": result.skipped,
            "files": sorted(path.relative_to(out_dir).as_posix() for path in result.files),
        }
    )


def run(config: RunConfig) -> RunResult:
    """Execute a full ranking run and write its artifacts.

    Raises:
        InputError: For unreadable, malformed or degenerate input
        DisconnectedGraphError: When a weight method is selected and the
            comparison graph is disconnected
        ConvergenceError: When the completion or a power iteration does not settle
        ConfigError: For configuration problems found while running
    """
    try:
        tournament = load_tournament(config.input, config.roster)
    except FileNotFoundError as exc:
        raise ConfigError(f"Input file not found: {exc.filename}") from exc

    scores = compute_score_table(tournament)
    histogram = result_distribution(tournament)
    result = RunResult(config=config, tournament=tournament, scores=scores)

    scales, llsm_names = resolve_scales(config)
    needed = [*llsm_names] if config.wants(Method.LLSM) else []
    if config.wants(Method.EM):
        needed.extend(config.em_scales)
    pcms = {name: build_pcm(tournament, scales[name]) for name in dict.fromkeys(needed)}
    if pcms:
        report = connectivity_report(tournament)
        if not report["connected"]:
            raise DisconnectedGraphError(report["components"])

    outcomes = run_jobs(_jobs(config, pcms, llsm_names), config.settings, config.jobs)
    result.weights = [outcome.weights for outcome in outcomes]
    result.completions = {
        outcome.weights.label: outcome.completion for outcome in outcomes if outcome.completion is not None
    }
    result.rankings = build_rankings(config, tournament, scores, result.weights)

    if len(result.rankings) >= 2:
        for metric in config.metrics:
            result.tables[str(metric)] = distance_table(result.rankings, str(metric), jobs=config.jobs)
    elif config.metrics:
        result.skipped.append("distance tables need at least two rankings")
        logger.warning("Distance tables skipped", extra={"rankings": len(result.rankings)})

    for vector in result.weights:
        try:
            result.weight_stats[vector.label] = weight_stats(vector, histogram, scales[str(vector.scale)])
        except DegenerateInputError as exc:
            result.skipped.append(f"weight statistics of {vector.label}: {exc.message}")
    result.adjacency = {ranking.label: adjacency_stats(tournament, ranking) for ranking in result.rankings}

    if config.mds:
        table = result.tables.get(str(config.mds_metric))
        if table is None:
            raise DegenerateInputError("MDS needs a distance table of at least three rankings")
        result.embedding = embed(
            table,
            dims=config.mds_dims,
            max_iterations=config.settings.mds_iteration_cap,
            tolerance=config.settings.mds_tolerance,
        )

    result.files = write_outputs(result, scales, pcms)
    result.manifest = _manifest(result, scales, config.output_dir)
    write_json(config.output_dir / MANIFEST_NAME, result.manifest)
    logger.info(
        "Run finished",
        extra={"rankings": len(result.rankings), "files": len(result.files), "output_dir": str(config.output_dir)},
    )
    return result


def write_outputs(result: RunResult, scales: dict[str, RatioScale], pcms: dict[str, IncompletePCM]) -> list[Path]:
    """Write every artifact of ``result``; called from a single thread."""
    config = result.config
    out_dir = config.output_dir
    formats = [str(fmt) for fmt in config.formats]
    names = {team.id: team.display_name for team in result.tournament.teams}
    written: list[Path] = []

    written.extend(export_score_table(result.scores, result.tournament, out_dir, formats))
    written.extend(export_result_distribution(result_distribution(result.tournament), out_dir, formats))
    for vector in result.weights:
        written.extend(export_weights(vector, out_dir, formats))
    written.extend(export_rankings(result.rankings, names, out_dir, formats))

    for table in result.tables.values():
        written.extend(export_distance_table(table, out_dir, formats))
    if result.tables and "json" in formats:
        documents = [distance_document(table, result.tournament.n) for table in result.tables.values()]
        written.append(write_json(out_dir / "distances.json", {"tables": documents}))

    if result.weight_stats:
        written.extend(export_weight_stats(result.weight_stats, out_dir, formats))
    if result.adjacency and "json" in formats:
        written.append(export_adjacency_stats(result.adjacency, out_dir))
    if result.embedding is not None:
        written.extend(export_embedding(result.embedding, out_dir, formats))

    if config.dump_completion:
        for vector in result.weights:
            if vector.label in result.completions:
                written.extend(export_completion(result.completions[vector.label], vector.scale, out_dir, formats))
    if config.plot_data:
        for pcm in pcms.values():
            written.extend(export_pcm(pcm, out_dir, formats))
        written.append(write_json(out_dir / PLOT_DATA_NAME, _plot_data(result, pcms)))
    return written


def error_manifest(config: RunConfig | None, problem: dict[str, Any]) -> dict[str, Any]:
    """Manifest written when a run fails."""
    return ManifestSchema().dump(
        {"status": "error", "config": None if config is None else config.to_dict(), "error": problem}
    )
