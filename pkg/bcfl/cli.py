"""Command line entry point: ``bcfl``.

Exit statuses: 0 ok, 1 invalid chain, 2 format or configuration error,
3 runtime failure.
"""

import functools
import logging
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click

from bcfl.config import BASELINE_DIR, MAX_SEED, ScenarioConfig, load_scenario, with_seed
from bcfl.errors import BCFLError, ConfigurationError, LedgerFormatError
from bcfl.harness import (
    BaselineSuite,
    compare_baselines,
    read_qtable,
    run_scenario,
    verify_ledger_file,
    write_run_artifacts,
)
from bcfl.scheduler import Action

EXIT_OK = 0
EXIT_INVALID_CHAIN = 1
EXIT_FORMAT = 2
EXIT_RUNTIME = 3


@dataclass(frozen=True)
class CliOptions:
    seed_override: int | None = None
    quiet: bool = False

    def apply(self, config: ScenarioConfig) -> ScenarioConfig:
        return config if self.seed_override is None else with_seed(config, self.seed_override)


def _exit_codes(func: Callable[..., Any]) -> Callable[..., Any]:
    """Map simulator errors onto the documented exit statuses."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (ConfigurationError, LedgerFormatError) as exc:
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(EXIT_FORMAT) from exc
        except BCFLError as exc:
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(EXIT_RUNTIME) from exc

    return wrapper


@click.group()
@click.option(
    "--seed-override",
    type=click.IntRange(0, MAX_SEED),
    default=None,
    help="Replace the scenario seed (unsigned 64-bit).",
)
@click.option("--quiet", is_flag=True, help="Only log warnings and errors.")
@click.pass_context
def cli(ctx: click.Context, seed_override: int | None, quiet: bool):
    """Deterministic blockchain-enabled federated learning simulator."""
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = CliOptions(seed_override=seed_override, quiet=quiet)


@cli.command()
@click.argument("scenario", type=click.Path(dir_okay=False, path_type=Path))
@click.option(
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Run directory (default: runs/<scenario name>).",
)
@click.pass_obj
@_exit_codes
def run(options: CliOptions, scenario: Path, out: Path | None):
    """Run one scenario and write its artifacts."""
    config = options.apply(load_scenario(scenario))
    result = run_scenario(config)
    out = out or Path("runs") / config.name
    write_run_artifacts(result, out)

    summary = result.summary
    click.echo(f"scenario:      {config.name} (seed {config.seed})")
    click.echo(
        f"accuracy:      {summary.initial_accuracy:.4f} -> {summary.final_accuracy:.4f} "
        f"({summary.accuracy_improvement:+.4f})"
    )
    click.echo(f"mean delay:    {summary.mean_delay:.3f} s")
    click.echo(f"security:      {summary.security_score:.2f}")
    click.echo(f"compliance:    {summary.compliance_score:.1f}%")
    if summary.ledger_valid is not None:
        state = "valid" if summary.ledger_valid else "INVALID"
        click.echo(f"ledger:        {summary.chain_length} blocks, {state}")
        click.echo(f"tip:           {summary.tip_hash}")
    click.echo(f"artifacts:     {out}")


@cli.command()
@click.option(
    "--suite",
    type=click.Path(file_okay=False, path_type=Path),
    default=BASELINE_DIR,
    show_default=True,
    help="Directory holding the five baseline scenarios.",
)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.pass_obj
@_exit_codes
def compare(options: CliOptions, suite: Path, out: Path, workers: int):
    """Run the paired baselines and write the comparison table."""
    baselines = BaselineSuite.load(suite)
    if options.seed_override is not None:
        baselines = baselines.with_seed(options.seed_override)
    rows = compare_baselines(baselines, out, max_workers=workers)

    click.echo(f"{'method':<12} {'delay[s]':>9} {'security':>9} {'compliance':>11} {'accuracy':>9}")
    for row in rows:
        click.echo(
            f"{row.method:<12} {row.mean_delay:>9.3f} {row.security:>9.2f} "
            f"{row.compliance:>10.1f}% {row.final_accuracy:>9.4f}"
        )


@cli.command("verify-chain")
@click.argument("ledger", type=click.Path(dir_okay=False, path_type=Path))
@click.option(
    "--tip",
    default=None,
    help="Expected tip hash (hex), the tip_hash field of summary.json. Without it an "
    "edit to the last block that is re-mined consistently goes undetected.",
)
@click.pass_context
@_exit_codes
def verify_chain(ctx: click.Context, ledger: Path, tip: str | None):
    """Validate a ledger file; exit 1 if the chain is invalid.

    Hash links only protect blocks below the tip. Pass --tip with the tip_hash
    recorded in the run's summary.json to anchor the last block as well.
    """
    report = verify_ledger_file(ledger, expected_tip=tip)
    click.echo(report.describe())
    if not report.validation.ok:
        ctx.exit(EXIT_INVALID_CHAIN)


@cli.command("dump-q")
@click.argument("run_dir", type=click.Path(file_okay=False, path_type=Path))
@_exit_codes
def dump_q(run_dir: Path):
    """Print the offloading Q-table of a run."""
    table = read_qtable(run_dir)
    header = " ".join(f"{a.name.lower():>10}" for a in Action)
    click.echo(f"{'state':<10} {header} {'best':>6}")
    for state in table.states():
        values = " ".join(f"{v:>10.4f}" for v in table.row(state))
        best = table.best_action(state).name.lower()
        click.echo(f"{str(state).replace(' ', ''):<10} {values} {best:>6}")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
