"""``pcm-rank`` command line.

Commands:
    rank   Run the ranking pipeline and write its artifacts
    check  Parse and validate a results file, report its structure

Every failure ends with the problem document on stderr and the exit code of
the error class; click usage errors count as configuration errors.
"""

import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, NoReturn, TypeVar

import click

from .. import __version__
from ..error.error_handlers import ErrorHandlers
from ..error.exceptions import ExitCode
from ..tournament.parsing import load_tournament
from ..utils import dumps_json, write_json
from .config import RunConfig, load_run_config
from .pipeline import MANIFEST_NAME, check_report, error_manifest, run

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

error_handlers = ErrorHandlers()


class _ConfigUsageErrors:
    """Report click usage errors with the bad-configuration exit code."""

    def parse_args(self, ctx: click.Context, args: list[str]) -> list[str]:
        try:
            return super().parse_args(ctx, args)  # type: ignore[misc, no-any-return]
        except click.UsageError as e:
            e.exit_code = int(ExitCode.BAD_CONFIG)
            raise


class PcmRankCommand(_ConfigUsageErrors, click.Command):
    pass


class PcmRankGroup(_ConfigUsageErrors, click.Group):
    command_class = PcmRankCommand

    def resolve_command(
        self, ctx: click.Context, args: list[str]
    ) -> tuple[str | None, click.Command | None, list[str]]:
        try:
            return super().resolve_command(ctx, args)
        except click.UsageError as e:
            e.exit_code = int(ExitCode.BAD_CONFIG)
            raise


def configure_logging(verbose: int, quiet: bool) -> None:
    """Warnings by default, ``-v`` for info, ``-vv`` for debug, ``--quiet`` for errors only."""
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    logging.getLogger("pcm_rank").setLevel(level)


def logging_options(func: F) -> F:
    func = click.option("--quiet", is_flag=True, help="Only log errors.")(func)
    func = click.option("-v", "--verbose", count=True, help="Log more; repeat for debug output.")(func)
    return func


def _split(ctx: click.Context, param: click.Parameter, value: str | None) -> list[str] | None:
    """Comma-separated option value to a list; None when the option was not given."""
    if value is None:
        return None
    return [item.strip() for item in value.split(",") if item.strip()]


def fail(ctx: click.Context, exc: BaseException, config: RunConfig | None = None) -> NoReturn:
    """Print the problem document, write the error manifest when possible and exit."""
    code, problem = error_handlers.handle(exc)
    click.echo(dumps_json(problem), err=True, nl=False)
    if config is not None:
        try:
            write_json(config.output_dir / MANIFEST_NAME, error_manifest(config, problem))
        except OSError:
            logger.warning("Could not write the error manifest", extra={"output_dir": str(config.output_dir)})
    ctx.exit(code)


@click.group(cls=PcmRankGroup)
@click.version_option(__version__, prog_name="pcm-rank")
def cli() -> None:
    """Rank Swiss-system team tournaments from incomplete pairwise comparison matrices."""


@cli.command()
@click.option(
    "--input", "input_path", type=click.Path(dir_okay=False), default=None, help="Results CSV (here or in --config)."
)
@click.option("--roster", type=click.Path(dir_okay=False), default=None, help="Roster CSV (id,name,start_rank).")
@click.option("--scales", callback=_split, help="Built-in scales, comma separated (default A,B,C,D).")
@click.option(
    "--custom-scale",
    "custom_scales",
    multiple=True,
    type=click.Path(dir_okay=False),
    help="JSON scale file; repeatable.",
)
@click.option("--em-scales", callback=_split, help="Scales for the EM method (default C).")
@click.option("--methods", callback=_split, help="Methods, comma separated.")
@click.option("--metrics", callback=_split, help="Distance metrics: tau, spearman.")
@click.option("--mds/--no-mds", default=None, help="Embed the rankings with interval MDS.")
@click.option("--mds-dims", type=int, default=None, help="MDS dimensions, 1 or 2.")
@click.option("--mds-metric", default=None, help="Distance table to embed (default tau).")
@click.option("--output-dir", default=None, help="Output directory (default $PCM_RANK_OUTPUT_DIR).")
@click.option("--formats", callback=_split, help="Output formats: csv, json.")
@click.option("--em-sweep-cap", type=int, default=None, help="Maximum EM sweeps.")
@click.option("--em-tolerance", type=float, default=None, help="Stop EM when a sweep improves lambda_max less.")
@click.option("--eigen-tolerance", type=float, default=None, help="Perron residual bound.")
@click.option("--jobs", type=int, default=None, help="Solver jobs run in parallel.")
@click.option("--dump-completion", is_flag=True, default=None, help="Write the optimal completions.")
@click.option("--plot-data", is_flag=True, default=None, help="Write matrices and plot-ready data.")
@click.option("--config", "config_file", type=click.Path(dir_okay=False), default=None, help="JSON config file.")
@logging_options
@click.pass_context
def rank(
    ctx: click.Context,
    input_path: str | None,
    custom_scales: tuple[str, ...],
    config_file: str | None,
    verbose: int,
    quiet: bool,
    **options: Any,
) -> None:
    """Run the ranking pipeline."""
    configure_logging(verbose, quiet)
    options["input"] = input_path
    options["custom_scales"] = list(custom_scales) or None
    config: RunConfig | None = None
    try:
        config = load_run_config(options, config_file)
        result = run(config)
    except Exception as exc:
        fail(ctx, exc, config)
    click.echo(
        f"{len(result.rankings)} rankings, {len(result.files) + 1} files written to {result.config.output_dir}",
        err=True,
    )


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True, help="Results.")
@click.option("--roster", type=click.Path(exists=True, dir_okay=False), default=None, help="Roster CSV.")
@logging_options
@click.pass_context
def check(ctx: click.Context, input_path: str, roster: str | None, verbose: int, quiet: bool) -> None:
    """Validate a results file and print its structure as JSON.

    Exits with the disconnected-graph code when the comparison graph is not connected.
    """
    configure_logging(verbose, quiet)
    try:
        report = check_report(load_tournament(Path(input_path), roster))
    except Exception as exc:
        fail(ctx, exc)
    click.echo(dumps_json(report), nl=False)
    if not report["connected"]:
        ctx.exit(int(ExitCode.DISCONNECTED_GRAPH))


if __name__ == "__main__":
    cli()
